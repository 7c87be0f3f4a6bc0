#include "hptbv/multivector.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hptbv {

int wedge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int swaps = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        int j = __builtin_ctz(rest);
        Mask above = (j >= 31) ? 0 : (a >> (j + 1));
        swaps += __builtin_popcount(above);
    }
    return (swaps & 1) ? -1 : 1;
}

MultiVector MultiVector::monomial(int dim, Mask m, const Scalar& c) {
    MultiVector v(dim);
    v.add_term(m, c);
    return v;
}

Scalar MultiVector::coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void MultiVector::add_term(Mask m, const Scalar& c) {
    if (hptbv::is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (hptbv::is_zero(it->second)) terms_.erase(it);
    }
}

MultiVector& MultiVector::operator+=(const MultiVector& o) {
    if (dim_ != o.dim_) throw MathError("multivector dimension mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& o) {
    if (dim_ != o.dim_) throw MathError("multivector dimension mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

MultiVector& MultiVector::operator*=(const Scalar& s) {
    if (hptbv::is_zero(s)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

MultiVector MultiVector::part(int k) const {
    MultiVector r(dim_);
    for (const auto& [m, c] : terms_)
        if (form_degree(m) == k) r.terms_.emplace(m, c);
    return r;
}

int MultiVector::degree() const {
    int deg = -1;
    for (const auto& [m, c] : terms_) {
        int d = form_degree(m);
        if (deg >= 0 && d != deg) throw MathError("multivector is not homogeneous");
        deg = d;
    }
    return deg;
}

std::string mask_name(Mask m) {
    if (m == 0) return "1";
    std::string s;
    for (Mask r = m; r; r &= r - 1) s += "e" + std::to_string(__builtin_ctz(r) + 1);
    return s;
}

MultiVector parse_multivector(const std::string& text, int dim) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw InputError("empty multivector");
    if (t == "0") return MultiVector(dim);
    MultiVector out(dim);
    std::size_t i = 0;
    auto fail = [&](const std::string& why) { throw InputError("cannot parse multivector '" + text + "': " + why); };
    while (i < t.size()) {
        Scalar sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            if (t[i] == '-') sign = -1;
            ++i;
        } else if (i != 0) {
            fail("expected + or -");
        }
        std::size_t j = i;
        while (j < t.size() && (std::isdigit(static_cast<unsigned char>(t[j])) || t[j] == '/')) ++j;
        Scalar c = 1;
        bool has_coeff = j > i;
        if (has_coeff) c = parse_scalar(t.substr(i, j - i));
        i = j;
        Mask m = 0;
        bool has_gen = false;
        while (i < t.size() && t[i] == 'e') {
            ++i;
            std::size_t k = i;
            while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
            if (k == i) fail("generator index missing");
            int idx = std::stoi(t.substr(i, k - i));
            if (idx < 1 || idx > dim) fail("generator index out of range");
            Mask bit = Mask(1) << (idx - 1);
            int s = wedge_sign(m, bit);
            if (s == 0) {
                c = 0;
            } else if (s < 0) {
                c = -c;
            }
            m |= bit;
            has_gen = true;
            i = k;
        }
        if (!has_coeff && !has_gen) fail("empty term");
        out.add_term(m, sign * c);
    }
    return out;
}

std::string MultiVector::to_string() const {
    if (terms_.empty()) return "0";
    // degree first, then lexicographic by index list
    std::vector<std::pair<Mask, Scalar>> sorted(terms_.begin(), terms_.end());
    auto key = [](Mask m) {
        std::vector<int> idx;
        for (Mask r = m; r; r &= r - 1) idx.push_back(__builtin_ctz(r));
        return std::make_pair(form_degree(m), idx);
    };
    std::sort(sorted.begin(), sorted.end(),
              [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        Scalar mag = abs(c);
        if (first) {
            if (sgn(c) < 0) out << "-";
        } else {
            out << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        bool unit_coeff = mag == 1;
        if (!unit_coeff) out << format_scalar(mag);
        if (m != 0) out << (unit_coeff ? "" : " ") << mask_name(m);
        else if (unit_coeff) out << "1";
    }
    return out.str();
}

MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
MultiVector operator*(const Scalar& s, MultiVector a) { return a *= s; }

MultiVector mv_wedge(const MultiVector& a, const MultiVector& b) {
    if (a.dim() != b.dim()) throw MathError("wedge: dimension mismatch");
    MultiVector r(a.dim());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            Scalar c = ca * cb;
            if (s < 0) c = -c;
            r.add_term(ma | mb, c);
        }
    return r;
}

ExteriorBasis::ExteriorBasis(int dim) : dim_(dim), by_degree_(dim + 1) {
    if (dim < 0 || dim > 16) throw InputError("exterior algebra dimension out of range (0..16)");
    position_.assign(std::size_t(1) << dim, -1);
    // lexicographic order of ascending index lists within each degree
    std::vector<Mask> all;
    for (Mask m = 0; m < (Mask(1) << dim); ++m) all.push_back(m);
    auto idx = [](Mask m) {
        std::vector<int> v;
        for (Mask r = m; r; r &= r - 1) v.push_back(__builtin_ctz(r));
        return v;
    };
    std::sort(all.begin(), all.end(), [&](Mask a, Mask b) {
        if (form_degree(a) != form_degree(b)) return form_degree(a) < form_degree(b);
        return idx(a) < idx(b);
    });
    for (Mask m : all) {
        auto& bucket = by_degree_[form_degree(m)];
        position_[m] = static_cast<int>(bucket.size());
        bucket.push_back(m);
    }
}

std::vector<int> ExteriorBasis::dims() const {
    std::vector<int> d;
    for (const auto& b : by_degree_) d.push_back(static_cast<int>(b.size()));
    return d;
}

std::vector<Scalar> ExteriorBasis::coords(const MultiVector& a, int k) const {
    std::vector<Scalar> c(size(k));
    for (const auto& [m, v] : a.terms())
        if (form_degree(m) == k) c[position_[m]] = v;
    return c;
}

MultiVector ExteriorBasis::from_coords(const std::vector<Scalar>& c, int k) const {
    MultiVector r(dim_);
    for (std::size_t i = 0; i < c.size(); ++i) r.add_term(by_degree_[k][i], c[i]);
    return r;
}

}  // namespace hptbv
