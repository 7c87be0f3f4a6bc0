#include "hptbv/bv_quantum.hpp"

#include "hptbv/sign.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hptbv {

using json = nlohmann::json;

namespace {

int sign_of(int exponent) { return (exponent & 1) ? -1 : 1; }

int levi_civita(int i, int j, int k) {  // 1-based
    if (i == j || j == k || i == k) return 0;
    std::vector<int> order{i - 1, j - 1, k - 1};
    return permutation_sign(order);
}

void same_coords(const PolyFunction& a, const PolyFunction& b) {
    if (a.coords() && b.coords() && a.coords() != b.coords())
        throw InputError("polynomials live on different coordinate systems");
}

std::shared_ptr<const BvCoordinates> pick(const PolyFunction& a, const PolyFunction& b) {
    return a.coords() ? a.coords() : b.coords();
}

}  // namespace

BvCoordinates::BvCoordinates(const LieAlgebra& g) : g_(g) {
    if (g.is_graded()) throw InputError("BV coordinates need an ungraded Lie algebra");
    if (!g.pairing()) throw InputError("BV coordinates need a pairing on the Lie algebra");
    t_ = *g.pairing();
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b)
            if (t_(a, b) != t_(b, a)) throw MathError("BV coordinates: pairing is not symmetric");
    if (rank(t_) < g.dim()) throw MathError("BV coordinates: pairing is degenerate");
    t_inv_ = inverse(t_);
}

int BvCoordinates::degree(int var) const {
    int family = var / g_.dim();
    if (family == 0) return 1;
    if (family <= 3) return 0;
    if (family <= 6) return -1;
    return -2;
}

std::string BvCoordinates::name(int var) const {
    int family = var / g_.dim();
    std::string a = std::to_string(var % g_.dim() + 1);
    if (family == 0) return "u_" + a;
    if (family <= 3) return "x" + std::to_string(family) + "_" + a;
    if (family <= 6) return "y" + std::to_string(family - 3) + "_" + a;
    return "v_" + a;
}

// ------------------------------------------------------------------ polynomials

PolyFunction PolyFunction::variable(std::shared_ptr<const BvCoordinates> c, int var, const Scalar& coeff) {
    PolyFunction f(std::move(c));
    f.add_term({var}, coeff);
    return f;
}

PolyFunction PolyFunction::constant(std::shared_ptr<const BvCoordinates> c, const Scalar& value) {
    PolyFunction f(std::move(c));
    f.add_term({}, value);
    return f;
}

void PolyFunction::add_term(const Monomial& m, const Scalar& coeff) {
    if (hptbv::is_zero(coeff)) return;
    auto [it, fresh] = terms_.try_emplace(m, coeff);
    if (!fresh) {
        it->second += coeff;
        if (hptbv::is_zero(it->second)) terms_.erase(it);
    }
}

void PolyFunction::add_product(const std::vector<int>& vars, const Scalar& coeff) {
    if (hptbv::is_zero(coeff)) return;
    const int n = static_cast<int>(vars.size());
    std::vector<int> order(n), par(n);
    for (int i = 0; i < n; ++i) {
        order[i] = i;
        par[i] = parity(coords_->degree(vars[i]));
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vars[a] < vars[b]; });
    Monomial m(n);
    for (int i = 0; i < n; ++i) m[i] = vars[order[i]];
    for (int i = 1; i < n; ++i)
        if (m[i] == m[i - 1] && parity(coords_->degree(m[i]))) return;
    add_term(m, koszul_sign(par, order) < 0 ? Scalar(-coeff) : coeff);
}

int PolyFunction::monomial_degree(const Monomial& m) const {
    int d = 0;
    for (int v : m) d += coords_->degree(v);
    return d;
}

PolyFunction PolyFunction::part(int degree) const {
    PolyFunction r(coords_);
    for (const auto& [m, c] : terms_)
        if (monomial_degree(m) == degree) r.terms_.emplace(m, c);
    return r;
}

std::vector<int> PolyFunction::degrees() const {
    std::set<int> s;
    for (const auto& [m, c] : terms_) s.insert(monomial_degree(m));
    return {s.begin(), s.end()};
}

PolyFunction& PolyFunction::operator+=(const PolyFunction& o) {
    same_coords(*this, o);
    if (!coords_) coords_ = o.coords_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

PolyFunction& PolyFunction::operator-=(const PolyFunction& o) {
    same_coords(*this, o);
    if (!coords_) coords_ = o.coords_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

PolyFunction& PolyFunction::operator*=(const Scalar& s) {
    if (hptbv::is_zero(s)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

std::string PolyFunction::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Scalar a = abs(c);
        out << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
        bool unit = a == 1 && !m.empty();
        if (!unit) out << format_scalar(a);
        for (std::size_t i = 0; i < m.size(); ++i) out << ((i == 0 && unit) ? "" : " ") << coords_->name(m[i]);
        first = false;
    }
    return out.str();
}

PolyFunction operator+(PolyFunction a, const PolyFunction& b) { return a += b; }
PolyFunction operator-(PolyFunction a, const PolyFunction& b) { return a -= b; }
PolyFunction operator*(const Scalar& s, PolyFunction a) { return a *= s; }

PolyFunction operator*(const PolyFunction& a, const PolyFunction& b) {
    same_coords(a, b);
    PolyFunction r(pick(a, b));
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            std::vector<int> vars = ma;
            vars.insert(vars.end(), mb.begin(), mb.end());
            r.add_product(vars, ca * cb);
        }
    }
    return r;
}

PolyFunction derivative(const PolyFunction& f, int var) {
    PolyFunction r(f.coords());
    if (!f.coords()) return r;
    const auto& c = *f.coords();
    int pz = parity(c.degree(var));
    for (const auto& [m, coeff] : f.terms()) {
        int before = 0;
        for (std::size_t p = 0; p < m.size(); ++p) {
            if (m[p] == var) {
                Monomial rest = m;
                rest.erase(rest.begin() + p);
                r.add_term(rest, sign_of(pz * before) * coeff);
            }
            before += parity(c.degree(m[p]));
        }
    }
    return r;
}

namespace {

// Darboux pairs (q, p, weight t_{αβ}): (x^i_α, y^i_β) and (u_α, v_β).
struct DarbouxPair {
    int q, p;
    Scalar weight;
};

std::vector<DarbouxPair> darboux_pairs(const BvCoordinates& c) {
    std::vector<DarbouxPair> out;
    const int G = c.lie_dim();
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) {
            const Scalar& w = c.t_lower()(a, b);
            if (is_zero(w)) continue;
            for (int i = 1; i <= 3; ++i) out.push_back({c.x(i, a), c.y(i, b), w});
            out.push_back({c.u(a), c.v(b), w});
        }
    return out;
}

}  // namespace

PolyFunction bv_laplacian(const PolyFunction& f) {
    PolyFunction r(f.coords());
    if (!f.coords()) return r;
    for (const auto& pr : darboux_pairs(*f.coords())) {
        PolyFunction dp = derivative(f, pr.p);
        if (dp.is_zero()) continue;
        r += pr.weight * derivative(dp, pr.q);
    }
    return r;
}

PolyFunction antibracket(const PolyFunction& f, const PolyFunction& g) {
    same_coords(f, g);
    auto coords = pick(f, g);
    PolyFunction r(coords);
    if (!coords) return r;
    const auto& c = *coords;
    auto pairs = darboux_pairs(c);
    for (int deg : f.degrees()) {
        PolyFunction fd = f.part(deg);
        for (const auto& pr : pairs) {
            int q = c.degree(pr.q), p = c.degree(pr.p);
            PolyFunction a = derivative(fd, pr.p) * derivative(g, pr.q);
            PolyFunction b = derivative(fd, pr.q) * derivative(g, pr.p);
            Scalar sa = sign_of(q * (deg + p)), sb = sign_of(p * deg);
            Scalar overall = sign_of(deg) * pr.weight;
            r += (overall * sa) * a;
            r += (overall * sb) * b;
        }
    }
    return r;
}

PolyFunction kinetic_term(std::shared_ptr<const BvCoordinates> c) {
    PolyFunction s(c);
    const int G = c->lie_dim();
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b)
            for (int i = 1; i <= 3; ++i) s.add_product({c->x(i, a), c->x(i, b)}, c->t_upper()(a, b));
    return s;
}

PolyFunction build_classical_action(std::shared_ptr<const BvCoordinates> c, bool literal_signs) {
    PolyFunction s = kinetic_term(c);
    const LieAlgebra& g = c->lie();
    const int G = g.dim();
    const Matrix& up = c->t_upper();
    // F^{αβγ} = t^{αα'} t^{ββ'} f_{α'β'}^γ
    std::vector<Scalar> F(std::size_t(G) * G * G, 0);
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b)
            for (int a2 = 0; a2 < G; ++a2) {
                if (is_zero(up(a, a2))) continue;
                for (int b2 = 0; b2 < G; ++b2) {
                    if (is_zero(up(b, b2))) continue;
                    for (int k = 0; k < G; ++k) F[(std::size_t(a) * G + b) * G + k] += up(a, a2) * up(b, b2) * g.f(a2, b2, k);
                }
            }
    const Scalar sixth(1, 6), half(literal_signs ? 1 : -1, 2);
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b)
            for (int k = 0; k < G; ++k) {
                const Scalar& f = F[(std::size_t(a) * G + b) * G + k];
                if (is_zero(f)) continue;
                for (int i = 1; i <= 3; ++i)
                    for (int j = 1; j <= 3; ++j)
                        for (int l = 1; l <= 3; ++l)
                            if (int e = levi_civita(i, j, l))
                                s.add_product({c->x(i, a), c->x(j, b), c->x(l, k)}, sixth * f * e);
                for (int i = 1; i <= 3; ++i) s.add_product({c->u(a), c->x(i, b), c->y(i, k)}, f);
                s.add_product({c->u(a), c->u(b), c->v(k)}, half * f);
            }
    return s;
}

// ------------------------------------------------------------------ reports

json QmeReport::to_json() const {
    json trace_json = json::array();
    for (const auto& t : trace) trace_json.push_back(format_scalar(t));
    json j{{"cme_residual", cme_residual.to_string()},
           {"cme_holds", cme_residual.is_zero()},
           {"delta_s", delta_s.to_string()},
           {"delta_s_zero", delta_s.is_zero()},
           {"unimodular", unimodular},
           {"trace", trace_json},
           {"pairing_invariant", pairing_invariant},
           {"delta_s_shape", "c * sum_a (t^{ab} tr_b) u_a"},
           {"shape_matches", proportional},
           {"equivalence_holds", equivalence_holds},
           {"derivatives", "left"}};
    if (coefficient) j["coefficient"] = format_scalar(*coefficient);
    return j;
}

QmeReport qme_obstruction(const LieAlgebra& g, bool literal_signs) {
    auto c = std::make_shared<const BvCoordinates>(g);
    QmeReport r;
    PolyFunction s = build_classical_action(c, literal_signs);
    r.cme_residual = antibracket(s, s);
    r.delta_s = bv_laplacian(s);
    auto uni = is_unimodular(g);
    r.unimodular = uni.unimodular;
    r.trace = uni.trace;
    r.pairing_invariant = is_ad_invariant(g, *g.pairing());

    const int G = g.dim();
    std::vector<Scalar> raised(G, 0);
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) raised[a] += c->t_upper()(a, b) * uni.trace[b];

    // ΔS must be u-linear and proportional to the raised trace vector
    for (const auto& [m, coeff] : r.delta_s.terms()) {
        if (m.size() != 1 || m[0] >= G) {
            r.proportional = false;
            continue;
        }
        int a = m[0];
        if (is_zero(raised[a])) {
            r.proportional = false;
            continue;
        }
        Scalar ratio = coeff / raised[a];
        if (!r.coefficient)
            r.coefficient = ratio;
        else if (*r.coefficient != ratio)
            r.proportional = false;
    }
    for (int a = 0; a < G; ++a)
        if (!is_zero(raised[a]) && r.delta_s.terms().find(Monomial{a}) == r.delta_s.terms().end())
            r.proportional = false;
    r.equivalence_holds = r.delta_s.is_zero() == r.unimodular;
    return r;
}

json CountertermReport::to_json() const {
    json j{{"counterterm_needed", needed}, {"solvable", solvable}, {"image_rank", image_rank}};
    if (!witness.empty()) j["witness"] = witness;
    return j;
}

CountertermReport no_counterterm_check(const LieAlgebra& g) {
    auto c = std::make_shared<const BvCoordinates>(g);
    CountertermReport r;
    PolyFunction ds = bv_laplacian(build_classical_action(c));
    r.needed = !ds.is_zero();
    PolyFunction kin = kinetic_term(c);

    // images {z, kinetic} of every linear monomial z
    std::vector<PolyFunction> images;
    std::map<Monomial, int> rows;
    for (int z = 0; z < c->size(); ++z) {
        images.push_back(antibracket(PolyFunction::variable(c, z), kin));
        for (const auto& [m, v] : images.back().terms()) rows.try_emplace(m, 0);
    }
    for (const auto& [m, v] : ds.terms()) rows.try_emplace(m, 0);
    int k = 0;
    for (auto& [m, idx] : rows) idx = k++;
    Matrix A(k, c->size());
    for (int z = 0; z < c->size(); ++z)
        for (const auto& [m, v] : images[z].terms()) A(rows[m], z) = v;
    std::vector<Scalar> target(k, 0);
    for (const auto& [m, v] : ds.terms()) target[rows[m]] = -v;
    r.image_rank = rank(A);
    if (!r.needed) return r;
    r.solvable = solve(A, target).has_value();
    if (!r.solvable) {
        std::set<Monomial> reachable;
        for (const auto& im : images)
            for (const auto& [m, v] : im.terms()) reachable.insert(m);
        for (const auto& [m, v] : ds.terms()) {
            if (reachable.count(m)) continue;
            PolyFunction term(c);
            term.add_term(m, v);
            r.witness = "ΔS contains " + term.to_string() + ", outside the image of {S', kinetic term} (rank " +
                        std::to_string(r.image_rank) + ")";
            break;
        }
        if (r.witness.empty()) r.witness = "-ΔS is not in the image of {S', kinetic term}";
    }
    return r;
}

}  // namespace hptbv
