#include "hptbv/lie_algebra.hpp"
#include "hptbv/sign.hpp"

#include <fstream>
#include <regex>

namespace hptbv {

using nlohmann::json;

LieAlgebra::LieAlgebra(int dim)
    : dim_(dim), degrees_(dim, 0), f_(std::size_t(dim) * dim * dim) {
    if (dim < 0) throw InputError("negative Lie algebra dimension");
    for (int i = 0; i < dim; ++i) names_.push_back("b" + std::to_string(i + 1));
}

void LieAlgebra::set_basis_names(std::vector<std::string> n) {
    if (static_cast<int>(n.size()) != dim_) throw InputError("basis name count does not match dimension");
    names_ = std::move(n);
}

void LieAlgebra::set_degrees(std::vector<int> d) {
    if (static_cast<int>(d.size()) != dim_) throw InputError("degree count does not match dimension");
    degrees_ = std::move(d);
}

bool LieAlgebra::is_graded() const {
    for (int d : degrees_)
        if (d != 0) return true;
    return false;
}

std::vector<Scalar> LieAlgebra::bracket(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
    std::vector<Scalar> r(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (is_zero(x[i])) continue;
        for (int j = 0; j < dim_; ++j) {
            if (is_zero(y[j])) continue;
            Scalar c = x[i] * y[j];
            for (int k = 0; k < dim_; ++k)
                if (!is_zero(f(i, j, k))) r[k] += c * f(i, j, k);
        }
    }
    return r;
}

int LieAlgebra::pairing_degree() const {
    if (!pairing_) throw MathError("algebra carries no pairing");
    std::optional<int> deg;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            if (is_zero((*pairing_)(i, j))) continue;
            int n = -(degrees_[i] + degrees_[j]);
            if (deg && *deg != n) throw MathError("pairing is not homogeneous in internal degree");
            deg = n;
        }
    return deg.value_or(0);
}

namespace {

std::vector<Scalar> unit(int n, int i) {
    std::vector<Scalar> v(n);
    v[i] = 1;
    return v;
}

std::string vec_string(const std::vector<Scalar>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_scalar(v[i]);
    return s + ")";
}

}  // namespace

bool is_ad_invariant(const LieAlgebra& g, const Matrix& t, std::vector<Violation>* failures) {
    int n = g.dim();
    bool ok = true;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                Scalar lhs = 0;
                for (int k = 0; k < n; ++k) {
                    lhs += g.f(x, y, k) * t(k, z);
                    Scalar s = g.f(x, z, k) * t(y, k);
                    lhs += swap_sign(g.degree(x), g.degree(y)) * s;
                }
                if (!is_zero(lhs)) {
                    ok = false;
                    if (failures)
                        failures->push_back({"pairing-invariance", {x + 1, y + 1, z + 1},
                                             "t([x,y],z) + ±t(y,[x,z]) = " + format_scalar(lhs)});
                    else
                        return false;
                }
            }
    return ok;
}

LieValidation validate_lie(const LieAlgebra& g) {
    LieValidation rep;
    int n = g.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Scalar s = g.f(i, j, k) + swap_sign(g.degree(i), g.degree(j)) * g.f(j, i, k);
                if (!is_zero(s) && i <= j)
                    rep.violations.push_back({"antisymmetry", {i + 1, j + 1, k + 1},
                                              "f(i,j,k) + ±f(j,i,k) = " + format_scalar(s)});
                if (!is_zero(g.f(i, j, k)) && g.degree(k) != g.degree(i) + g.degree(j))
                    rep.violations.push_back({"degree", {i + 1, j + 1, k + 1}, "bracket does not preserve degree"});
            }
    // graded Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                auto ex = unit(n, x), ey = unit(n, y), ez = unit(n, z);
                auto lhs = g.bracket(ex, g.bracket(ey, ez));
                auto a = g.bracket(g.bracket(ex, ey), ez);
                auto b = g.bracket(ey, g.bracket(ex, ez));
                int s = swap_sign(g.degree(x), g.degree(y));
                std::vector<Scalar> r(n);
                bool bad = false;
                for (int k = 0; k < n; ++k) {
                    r[k] = lhs[k] - a[k] - s * b[k];
                    if (!is_zero(r[k])) bad = true;
                }
                if (bad)
                    rep.violations.push_back({"jacobi", {x + 1, y + 1, z + 1}, "residual " + vec_string(r)});
            }
    if (g.pairing()) {
        rep.has_pairing = true;
        const Matrix& t = *g.pairing();
        if (t.rows() != n || t.cols() != n) {
            rep.violations.push_back({"pairing-shape", {}, "pairing matrix has wrong size"});
            return rep;
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (t(i, j) != swap_sign(g.degree(i), g.degree(j)) * t(j, i))
                    rep.violations.push_back({"pairing-symmetry", {i + 1, j + 1}, "t(i,j) != ±t(j,i)"});
        if (rank(t) < n) rep.violations.push_back({"pairing-degenerate", {}, "pairing has rank " + std::to_string(rank(t))});
        try {
            (void)g.pairing_degree();
        } catch (const MathError& e) {
            rep.violations.push_back({"pairing-degree", {}, e.what()});
        }
        rep.pairing_invariant = is_ad_invariant(g, t, &rep.invariance_failures);
    }
    return rep;
}

KillingForm killing_form(const LieAlgebra& g) {
    int n = g.dim();
    KillingForm kf{Matrix(n, n), false};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Scalar s = 0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += g.f(a, k, l) * g.f(b, l, k);
            kf.t(a, b) = s;
        }
    kf.degenerate = rank(kf.t) < n;
    return kf;
}

Unimodularity is_unimodular(const LieAlgebra& g) {
    Unimodularity u;
    for (int a = 0; a < g.dim(); ++a) {
        Scalar tr = 0;
        for (int b = 0; b < g.dim(); ++b) tr += g.f(a, b, b);
        u.trace.push_back(tr);
        if (!is_zero(tr)) u.unimodular = false;
    }
    return u;
}

std::vector<Matrix> su3_cartan_weyl_matrices() {
    auto e = [](int i, int j) {
        Matrix m(3, 3);
        m(i - 1, j - 1) = 1;
        return m;
    };
    return {e(1, 1) - e(2, 2), e(2, 2) - e(3, 3), e(1, 2), Scalar(-1) * e(2, 3),
            Scalar(-1) * e(1, 3), e(2, 1), Scalar(-1) * e(3, 2), e(3, 1)};
}

namespace {

LieAlgebra make_su2() {
    LieAlgebra g(3);
    g.set_name("su2");
    g.set_basis_names({"e1", "e2", "e3"});
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        g.set_f(i, j, k, 1);
        g.set_f(j, i, k, -1);
    }
    return g;
}

LieAlgebra make_su3() {
    static const LieAlgebra cached = [] {
        auto mats = su3_cartan_weyl_matrices();
        // flatten to 9-vectors and express commutators in the basis
        Matrix basis(9, 8);
        for (int c = 0; c < 8; ++c)
            for (int r = 0; r < 9; ++r) basis(r, c) = mats[c](r / 3, r % 3);
        LieAlgebra g(8);
        g.set_name("su3");
        g.set_basis_names({"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"});
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                Matrix comm = mats[i] * mats[j] - mats[j] * mats[i];
                std::vector<Scalar> v(9);
                for (int r = 0; r < 9; ++r) v[r] = comm(r / 3, r % 3);
                auto x = solve(basis, v);
                if (!x) throw MathError("su3 commutator left the span");
                for (int k = 0; k < 8; ++k) g.set_f(i, j, k, (*x)[k]);
            }
        return g;
    }();
    return cached;
}

LieAlgebra make_affine2() {
    LieAlgebra g(2);
    g.set_name("affine2");
    g.set_basis_names({"x", "y"});
    g.set_f(0, 1, 1, 1);
    g.set_f(1, 0, 1, -1);
    return g;
}

}  // namespace

LieAlgebra builtin(const std::string& name) {
    if (name == "su2") return make_su2();
    if (name == "su3") return make_su3();
    if (name == "affine2") return make_affine2();
    static const std::regex abelian(R"(abelian\((\d+)\))");
    std::smatch m;
    if (std::regex_match(name, m, abelian)) {
        int n = std::stoi(m[1]);
        if (n < 1 || n > 16) throw InputError("abelian dimension out of range");
        LieAlgebra g(n);
        g.set_name(name);
        return g;
    }
    throw InputError("unknown built-in algebra '" + name + "'");
}

LieAlgebra graded_double(const LieAlgebra& g0, int shift) {
    if (g0.is_graded()) throw InputError("graded_double expects an ungraded algebra");
    if (!validate_lie(LieAlgebra(g0)).valid()) throw MathError("graded_double: input algebra is not a Lie algebra");
    int n = g0.dim();
    LieAlgebra g(2 * n);
    g.set_name("graded_double(" + g0.name() + "," + std::to_string(shift) + ")");
    std::vector<std::string> names = g0.basis_names();
    for (const auto& s : g0.basis_names()) names.push_back(s + "*");
    g.set_basis_names(names);
    std::vector<int> deg(2 * n, 0);
    for (int i = n; i < 2 * n; ++i) deg[i] = -shift;
    g.set_degrees(deg);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                g.set_f(a, b, c, g0.f(a, b, c));
                // [b_a, ξ^b] = -sum_c f(a,c,b) ξ^c ; ξ^b has degree -shift, b_a degree 0
                Scalar co = -g0.f(a, c, b);
                g.set_f(a, n + b, n + c, co);
                g.set_f(n + b, a, n + c, -co);
            }
    Matrix t(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        t(a, n + a) = 1;
        t(n + a, a) = 1;
    }
    g.set_pairing(t);
    return g;
}

LieAlgebra attach_pairing(LieAlgebra g, const std::string& kind) {
    if (kind == "keep") return g;
    if (kind == "identity") {
        g.set_pairing(Matrix::identity(g.dim()));
        return g;
    }
    if (kind == "killing") {
        auto kf = killing_form(g);
        if (kf.degenerate) throw MathError("Killing form of " + g.name() + " is degenerate");
        g.set_pairing(kf.t);
        return g;
    }
    throw InputError("unknown pairing kind '" + kind + "' (killing, identity, keep)");
}

LieAlgebra lie_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("dim")) throw InputError("Lie algebra JSON needs an object with \"dim\"");
        int n = j.at("dim").get<int>();
        if (n < 1 || n > 64) throw InputError("dim out of range");
        LieAlgebra g(n);
        g.set_name(j.value("name", std::string("custom")));
        if (j.contains("basis")) g.set_basis_names(j.at("basis").get<std::vector<std::string>>());
        if (j.contains("degrees")) g.set_degrees(j.at("degrees").get<std::vector<int>>());
        auto check_index = [n](int i) {
            if (i < 1 || i > n) throw InputError("index " + std::to_string(i) + " out of range");
            return i - 1;
        };
        if (j.contains("brackets"))
            for (const auto& entry : j.at("brackets")) {
                if (!entry.is_array() || entry.size() != 3) throw InputError("bracket entry must be [i, j, [[k, \"p/q\"],...]]");
                int a = check_index(entry[0].get<int>());
                int b = check_index(entry[1].get<int>());
                for (const auto& term : entry[2]) {
                    if (!term.is_array() || term.size() != 2) throw InputError("bracket term must be [k, \"p/q\"]");
                    int c = check_index(term[0].get<int>());
                    Scalar v = term[1].is_string() ? parse_scalar(term[1].get<std::string>())
                                                   : Scalar(term[1].get<long>());
                    g.set_f(a, b, c, g.f(a, b, c) + v);
                }
            }
        if (j.contains("pairing")) {
            Matrix t(n, n);
            for (const auto& entry : j.at("pairing")) {
                if (!entry.is_array() || entry.size() != 3) throw InputError("pairing entry must be [i, j, \"p/q\"]");
                int a = check_index(entry[0].get<int>());
                int b = check_index(entry[1].get<int>());
                t(a, b) = entry[2].is_string() ? parse_scalar(entry[2].get<std::string>()) : Scalar(entry[2].get<long>());
            }
            g.set_pairing(t);
        }
        return g;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed Lie algebra JSON: ") + e.what());
    }
}

json lie_to_json(const LieAlgebra& g) {
    json j;
    j["name"] = g.name();
    j["dim"] = g.dim();
    j["basis"] = g.basis_names();
    j["degrees"] = g.degrees();
    json br = json::array();
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) {
            json terms = json::array();
            for (int c = 0; c < g.dim(); ++c)
                if (!is_zero(g.f(a, b, c))) terms.push_back({c + 1, format_scalar(g.f(a, b, c))});
            if (!terms.empty()) br.push_back({a + 1, b + 1, terms});
        }
    j["brackets"] = br;
    if (g.pairing()) {
        json p = json::array();
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b)
                if (!is_zero((*g.pairing())(a, b))) p.push_back({a + 1, b + 1, format_scalar((*g.pairing())(a, b))});
        j["pairing"] = p;
    }
    return j;
}

LieAlgebra load_algebra(const std::string& spec) {
    static const std::regex dbl(R"(graded_double\((.+),\s*(-?\d+)\))");
    std::smatch m;
    if (std::regex_match(spec, m, dbl)) return graded_double(load_algebra(m[1]), std::stoi(m[2]));
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        std::ifstream in(spec);
        if (!in) throw InputError("cannot open '" + spec + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InputError("malformed JSON in '" + spec + "': " + e.what());
        }
        return lie_from_json(j);
    }
    return builtin(spec);
}

}  // namespace hptbv
