#include "hptbv/coefficients.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace hptbv {

using nlohmann::json;

namespace {

int sign_of(int exponent) { return (exponent & 1) ? -1 : 1; }

void same_ambient(const DglaElement& a, const DglaElement& b) {
    if (a.ctx == nullptr || a.ctx != b.ctx) throw MathError("dgla elements live in different ambients");
}

}  // namespace

DglaContext::DglaContext(std::shared_ptr<const CeComplex> ce, LieAlgebra g) : ce_(std::move(ce)), g_(std::move(g)) {
    if (ce_->dim() > 12) throw InputError("source algebra too large for E_g indexing");
    int n = g_.dim();
    brackets_.resize(std::size_t(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (!is_zero(g_.f(a, b, c))) brackets_[a * n + b].emplace_back(c, g_.f(a, b, c));
}

std::string DglaContext::name(int idx) const {
    const auto& names = g_.basis_names();
    int a = lie_of(idx);
    std::string gname = a < static_cast<int>(names.size()) ? names[a] : "t" + std::to_string(a + 1);
    return mask_name(mask_of(idx)) + "⊗" + gname;
}

int DglaContext::bv_pairing_degree() const {
    if (!g_.pairing()) throw MathError("coefficient algebra has no pairing");
    return (2 - form_dim()) + g_.pairing_degree();
}

DglaElement DglaElement::basis(const DglaContext& c, int idx, const Scalar& coeff) {
    DglaElement e(c);
    e.add(idx, coeff);
    return e;
}

DglaElement DglaElement::tensor(const DglaContext& c, const MultiVector& form, int a) {
    DglaElement e(c);
    for (const auto& [m, v] : form.terms()) e.add(c.index(m, a), v);
    return e;
}

DglaElement& DglaElement::operator+=(const DglaElement& o) {
    if (o.is_zero()) return *this;
    if (ctx == nullptr) ctx = o.ctx;
    same_ambient(*this, o);
    for (const auto& [i, c] : o.terms) add(i, c);
    return *this;
}

DglaElement& DglaElement::operator*=(const Scalar& s) {
    if (hptbv::is_zero(s)) {
        terms.clear();
        return *this;
    }
    for (auto& [i, c] : terms) c *= s;
    return *this;
}

std::string DglaElement::to_string() const {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [i, c] : terms) {
        if (first) {
            if (sgn(c) < 0) out << "-";
        } else {
            out << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        Scalar mag = abs(c);
        if (mag != 1) out << format_scalar(mag) << " ";
        out << ctx->name(i);
    }
    return out.str();
}

DglaElement operator+(DglaElement a, const DglaElement& b) { return a += b; }
DglaElement operator-(DglaElement a, const DglaElement& b) {
    DglaElement nb = b;
    nb *= -1;
    return a += nb;
}
DglaElement operator*(const Scalar& s, DglaElement a) { return a *= s; }

namespace {

// shared kernel of the unshifted and shifted brackets
DglaElement bracket_impl(const DglaElement& a, const DglaElement& b, bool shifted) {
    same_ambient(a, b);
    const DglaContext& c = *a.ctx;
    DglaElement r(c);
    for (const auto& [i, ci] : a.terms) {
        Mask al = c.mask_of(i);
        int x = c.lie_of(i);
        int dx = c.lie().degree(x);
        int deg_a = c.degree(i);
        for (const auto& [j, cj] : b.terms) {
            Mask be = c.mask_of(j);
            int ws = wedge_sign(al, be);
            if (ws == 0) continue;
            int y = c.lie_of(j);
            const auto& br = c.bracket_terms(x, y);
            if (br.empty()) continue;
            int s = ws * sign_of(dx * form_degree(be));
            if (shifted) s *= sign_of(deg_a);
            Scalar base = ci * cj;
            if (s < 0) base = -base;
            for (const auto& [z, f] : br) r.add(c.index(al | be, z), base * f);
        }
    }
    return r;
}

}  // namespace

DglaElement dgla_bracket(const DglaElement& a, const DglaElement& b) { return bracket_impl(a, b, false); }
DglaElement shifted_l2(const DglaElement& a, const DglaElement& b) { return bracket_impl(a, b, true); }

DglaElement dgla_differential(const DglaElement& a) {
    if (a.ctx == nullptr) return a;
    const DglaContext& c = *a.ctx;
    DglaElement r(c);
    for (const auto& [i, ci] : a.terms) {
        MultiVector dm = c.ce().d(MultiVector::monomial(c.form_dim(), c.mask_of(i), ci));
        for (const auto& [m, v] : dm.terms()) r.add(c.index(m, c.lie_of(i)), v);
    }
    return r;
}

DglaElement shifted_l1(const DglaElement& a) {
    DglaElement r = dgla_differential(a);
    r *= -1;
    return r;
}

int ghost_degree(const DglaContext& c, Mask m, int a) { return c.ghost_degree(c.index(m, a)); }

Scalar bv_pairing(const DglaElement& a, const DglaElement& b) {
    same_ambient(a, b);
    const DglaContext& c = *a.ctx;
    if (c.bv_pairing_degree() != -1)
        throw MathError("BV pairing degree is " + std::to_string(c.bv_pairing_degree()) + ", expected -1 (" +
                        c.lie().name() + " has pairing degree " + std::to_string(c.lie().pairing_degree()) + ")");
    const Matrix& t = *c.lie().pairing();
    Mask top = c.ce().basis().top();
    Scalar total = 0;
    int n = c.lie_dim();
    for (const auto& [i, ci] : a.terms) {
        Mask al = c.mask_of(i);
        Mask be = top & ~al;
        int x = c.lie_of(i);
        int s = wedge_sign(al, be) * sign_of(form_degree(al)) *
                sign_of(c.lie().degree(x) * (form_degree(be) - DglaContext::shift));
        for (int y = 0; y < n; ++y) {
            if (is_zero(t(x, y))) continue;
            auto it = b.terms.find(c.index(be, y));
            if (it == b.terms.end()) continue;
            total += s * ci * it->second * t(x, y);
        }
    }
    return total;
}

std::vector<GhostRow> ghost_degree_table(const DglaContext& c) {
    std::set<int> internal(c.lie().degrees().begin(), c.lie().degrees().end());
    std::vector<GhostRow> rows;
    for (int d : std::vector<int>(internal.rbegin(), internal.rend()))
        for (int k = 0; k <= c.form_dim(); ++k) rows.push_back({k, d, k - DglaContext::shift + d});
    return rows;
}

json dgla_to_json(const DglaElement& a) {
    json arr = json::array();
    if (a.ctx == nullptr) return arr;
    for (const auto& [i, c] : a.terms) {
        json idx = json::array();
        for (Mask r = a.ctx->mask_of(i); r; r &= r - 1) idx.push_back(__builtin_ctz(r) + 1);
        arr.push_back(json::array({idx, a.ctx->lie_of(i) + 1, format_scalar(c)}));
    }
    return arr;
}

DglaElement dgla_from_json(const DglaContext& c, const json& j) {
    if (!j.is_array()) throw InputError("dgla element JSON must be an array");
    DglaElement e(c);
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 3) throw InputError("dgla term must be [indices, g-index, \"p/q\"]");
        Mask m = 0;
        for (const auto& v : item[0]) {
            int k = v.get<int>();
            if (k < 1 || k > c.form_dim()) throw InputError("form index out of range");
            Mask bit = Mask(1) << (k - 1);
            if (m & bit) throw InputError("repeated form index");
            m |= bit;
        }
        // indices may come unsorted: reorder sign
        Scalar coeff = parse_scalar(item[2].get<std::string>());
        std::vector<int> order;
        for (const auto& v : item[0]) order.push_back(v.get<int>());
        int inversions = 0;
        for (std::size_t x = 0; x < order.size(); ++x)
            for (std::size_t y = x + 1; y < order.size(); ++y)
                if (order[x] > order[y]) ++inversions;
        if (inversions & 1) coeff = -coeff;
        int a = item[1].get<int>();
        if (a < 1 || a > c.lie_dim()) throw InputError("g index out of range");
        e.add(c.index(m, a - 1), coeff);
    }
    return e;
}

TensorSdr::TensorSdr(std::shared_ptr<const SdrData> base, std::shared_ptr<const DglaContext> ctx)
    : base_(std::move(base)), ctx_(std::move(ctx)) {
    if (base_->ce.get() != &ctx_->ce()) throw MathError("tensor_sdr: SDR and coefficient ambient differ");
    const auto& ce = ctx_->ce();
    int n = ce.dim();
    k_of_mask_.resize(std::size_t(1) << n);
    p_of_mask_.resize(std::size_t(1) << n);
    for (Mask m = 0; m < (Mask(1) << n); ++m) {
        k_of_mask_[m] = base_->apply_k(MultiVector::monomial(n, m));
        int deg = form_degree(m);
        int pos = ce.basis().position(m);
        const Matrix& pb = base_->p.block(deg);
        int off = base_->w_offset(deg);
        for (int r = 0; r < pb.rows(); ++r) add_to(p_of_mask_[m], off + r, pb(r, pos));
    }
    for (int w = 0; w < base_->w_total(); ++w) e_of_w_.push_back(base_->e_of(w));
}

std::string TensorSdr::w_name(int widx) const {
    int a = widx % ctx_->lie_dim();
    const auto& names = ctx_->lie().basis_names();
    std::string gname = a < static_cast<int>(names.size()) ? names[a] : "t" + std::to_string(a + 1);
    return base_->w_name(widx / ctx_->lie_dim()) + "⊗" + gname;
}

DglaElement TensorSdr::e(int widx) const {
    return DglaElement::tensor(*ctx_, e_of_w_[widx / ctx_->lie_dim()], widx % ctx_->lie_dim());
}

DglaElement TensorSdr::e(const SparseVec& w) const {
    DglaElement r(*ctx_);
    for (const auto& [i, c] : w) {
        DglaElement t = e(i);
        t *= c;
        r += t;
    }
    return r;
}

SparseVec TensorSdr::p(const DglaElement& v) const {
    SparseVec out;
    int g = ctx_->lie_dim();
    for (const auto& [i, c] : v.terms) {
        Mask m = ctx_->mask_of(i);
        int a = ctx_->lie_of(i);
        for (const auto& [w, pc] : p_of_mask_[m]) add_to(out, w * g + a, pc * c);
    }
    return out;
}

DglaElement TensorSdr::h(const DglaElement& v) const {
    DglaElement r(*ctx_);
    for (const auto& [i, c] : v.terms) {
        const MultiVector& km = k_of_mask_[ctx_->mask_of(i)];
        int a = ctx_->lie_of(i);
        for (const auto& [m, kc] : km.terms()) r.add(ctx_->index(m, a), kc * c);
    }
    return r;
}

SparseVec TensorSdr::l1_w(const SparseVec& w) const { return p(shifted_l1(e(w))); }

TensorSdr tensor_sdr(const SdrData& s, const LieAlgebra& g) {
    auto ctx = std::make_shared<const DglaContext>(s.ce, g);
    return TensorSdr(std::make_shared<const SdrData>(s), ctx);
}

namespace {

std::string sparse_string(const SparseVec& v, const std::function<std::string(int)>& name) {
    if (v.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [i, c] : v) {
        out << (first ? "" : " + ") << format_scalar(c) << " " << name(i);
        first = false;
    }
    return out.str();
}

}  // namespace

Report verify_tensor_sdr(const TensorSdr& t) {
    Report r;
    const auto& c = t.ctx();
    struct Check {
        std::string name;
        bool ok = true;
        std::string witness;
    };
    Check pe{"(p⊗1)(e⊗1) = id", true, {}}, ep{"(e⊗1)(p⊗1) - 1 = l1 h + h l1", true, {}},
        ph{"(p⊗1) h = 0", true, {}}, he{"h (e⊗1) = 0", true, {}}, hh{"h h = 0", true, {}},
        chain{"l1 (e⊗1) = (e⊗1) l1_W", true, {}};
    auto wname = [&](int i) { return t.w_name(i); };
    for (int w = 0; w < t.size(); ++w) {
        DglaElement ew = t.e(w);
        SparseVec back = t.p(ew);
        SparseVec unit{{w, Scalar(1)}};
        if (pe.ok && back != unit) {
            pe.ok = false;
            pe.witness = "on " + t.w_name(w) + ": " + sparse_string(back, wname);
        }
        DglaElement hew = t.h(ew);
        if (he.ok && !hew.is_zero()) {
            he.ok = false;
            he.witness = "on " + t.w_name(w) + ": " + hew.to_string();
        }
        DglaElement lhs = shifted_l1(ew);
        DglaElement rhs = t.e(t.l1_w(unit));
        if (chain.ok && !(lhs == rhs) && !(lhs.is_zero() && rhs.is_zero())) {
            chain.ok = false;
            chain.witness = "on " + t.w_name(w) + ": " + lhs.to_string() + " vs " + rhs.to_string();
        }
    }
    for (int i = 0; i < c.size(); ++i) {
        DglaElement v = DglaElement::basis(c, i);
        DglaElement hv = t.h(v);
        SparseVec phv = t.p(hv);
        if (ph.ok && !phv.empty()) {
            ph.ok = false;
            ph.witness = "on " + c.name(i) + ": " + sparse_string(phv, wname);
        }
        DglaElement hhv = t.h(hv);
        if (hh.ok && !hhv.is_zero()) {
            hh.ok = false;
            hh.witness = "on " + c.name(i) + ": " + hhv.to_string();
        }
        DglaElement lhs = t.e(t.p(v)) - v;
        DglaElement rhs = shifted_l1(hv) + t.h(shifted_l1(v));
        if (ep.ok && !((lhs - rhs).is_zero())) {
            ep.ok = false;
            ep.witness = "on " + c.name(i) + ": " + lhs.to_string() + " vs " + rhs.to_string();
        }
    }
    for (auto* x : {&pe, &ep, &ph, &he, &hh, &chain}) r.add(x->name, x->ok, x->witness);
    r.notes.push_back("h = k⊗1, l1 = -d⊗1 on E_g = (Λs*⊗g)[1]");
    return r;
}

Report verify_tensor_cyclic(const TensorSdr& t) {
    Report r;
    const auto& c = t.ctx();
    int n = c.size();
    std::vector<DglaElement> basis, l1b, hb;
    for (int i = 0; i < n; ++i) {
        basis.push_back(DglaElement::basis(c, i));
        l1b.push_back(shifted_l1(basis.back()));
        hb.push_back(t.h(basis.back()));
    }
    std::map<int, std::vector<int>> by_gh;
    for (int i = 0; i < n; ++i) by_gh[c.ghost_degree(i)].push_back(i);
    auto partners = [&](int gh) -> const std::vector<int>& {
        static const std::vector<int> none;
        auto it = by_gh.find(gh);
        return it == by_gh.end() ? none : it->second;
    };

    struct Check {
        std::string name;
        bool ok = true;
        std::string witness;
    };
    Check compat{"l1 skew: <l1 a,b> + (-1)^gh(a) <a,l1 b> = 0", true, {}};
    Check selfadj{"h self-adjoint: <h a,b> = (-1)^gh(a) <a,h b>", true, {}};
    Check iso{"im h isotropic: <h a,h b> = 0", true, {}};
    Check adj{"e adjoint to p: <e w, a> = <e w, e p a>", true, {}};
    auto fail = [&](Check& ch, const std::string& a, const std::string& b, const Scalar& res) {
        ch.ok = false;
        ch.witness = "a = " + a + ", b = " + b + ": residual " + format_scalar(res);
    };
    for (int i = 0; i < n && (compat.ok || selfadj.ok || iso.ok); ++i) {
        int gi = c.ghost_degree(i);
        int s = sign_of(gi);
        if (compat.ok)
            for (int j : partners(-gi)) {
                Scalar res = bv_pairing(l1b[i], basis[j]) + s * bv_pairing(basis[i], l1b[j]);
                if (!is_zero(res)) {
                    fail(compat, c.name(i), c.name(j), res);
                    break;
                }
            }
        if (selfadj.ok)
            for (int j : partners(2 - gi)) {
                Scalar res = bv_pairing(hb[i], basis[j]) - s * bv_pairing(basis[i], hb[j]);
                if (!is_zero(res)) {
                    fail(selfadj, c.name(i), c.name(j), res);
                    break;
                }
            }
        if (iso.ok)
            for (int j : partners(3 - gi)) {
                Scalar res = bv_pairing(hb[i], hb[j]);
                if (!is_zero(res)) {
                    fail(iso, c.name(i), c.name(j), res);
                    break;
                }
            }
    }
    for (int w = 0; w < t.size() && adj.ok; ++w) {
        DglaElement ew = t.e(w);
        for (int j : partners(1 - t.w_ghost_degree(w))) {
            DglaElement resid = basis[j] - t.e(t.p(basis[j]));
            Scalar res = bv_pairing(ew, resid);
            if (!is_zero(res)) {
                fail(adj, t.w_name(w), c.name(j), res);
                break;
            }
        }
    }
    for (auto* x : {&compat, &selfadj, &iso, &adj}) r.add(x->name, x->ok, x->witness);
    r.notes.push_back("BV pairing <sα⊗x, sβ⊗y> = (-1)^{|x|(|β|-1)} <α,β>_int t(x,y), degree -1");
    return r;
}

}  // namespace hptbv
