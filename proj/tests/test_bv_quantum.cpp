#include "hptbv/bv_quantum.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace hptbv;

namespace {

using CoordsPtr = std::shared_ptr<const BvCoordinates>;

CoordsPtr coords_for(const std::string& name, const std::string& pairing) {
    return std::make_shared<const BvCoordinates>(attach_pairing(builtin(name), pairing));
}

Scalar sign(int exponent) { return (exponent % 2 + 2) % 2 ? Scalar(-1) : Scalar(1); }

// Random polynomial of one total degree, built from short products.
PolyFunction random_poly(const CoordsPtr& c, int degree, std::mt19937& rng) {
    PolyFunction f(c);
    for (int attempt = 0; attempt < 60 && f.size() < 4; ++attempt) {
        int len = 1 + static_cast<int>(rng() % 3);
        std::vector<int> vars(len);
        int deg = 0;
        for (auto& v : vars) {
            v = static_cast<int>(rng() % c->size());
            deg += c->degree(v);
        }
        if (deg == degree) f.add_product(vars, oracle::small_rational(rng));
    }
    return f;
}

int degree_of(const PolyFunction& f) {
    auto d = f.degrees();
    return d.empty() ? 0 : d.front();
}

// Σ_α (t^{-1} tr)_α u_α
PolyFunction trace_shape(const CoordsPtr& c) {
    auto tr = is_unimodular(c->lie()).trace;
    PolyFunction f(c);
    for (int a = 0; a < c->lie_dim(); ++a) {
        Scalar v = 0;
        for (int b = 0; b < c->lie_dim(); ++b) v += c->t_upper()(a, b) * tr[b];
        f.add_product({c->u(a)}, v);
    }
    return f;
}

}  // namespace

TEST_SUITE("bv_quantum") {

TEST_CASE("coordinates") {
    auto c = coords_for("su2", "killing");
    CHECK(c->size() == 24);
    CHECK(c->degree(c->u(0)) == 1);
    CHECK(c->degree(c->x(2, 1)) == 0);
    CHECK(c->degree(c->y(3, 2)) == -1);
    CHECK(c->degree(c->v(1)) == -2);
    CHECK(c->name(c->u(0)) == "u_1");
    CHECK(c->name(c->x(1, 1)) == "x1_2");
    CHECK(c->name(c->y(3, 0)) == "y3_1");
    CHECK(c->name(c->v(1)) == "v_2");
    CHECK(c->t_lower() * c->t_upper() == Matrix::identity(3));
    CHECK_THROWS_AS(BvCoordinates(builtin("su2")), InputError);
    CHECK_THROWS_AS(BvCoordinates(graded_double(builtin("su2"), 5)), InputError);
}

TEST_CASE("graded commutative products and left derivatives") {
    auto c = coords_for("su2", "identity");
    auto u1 = PolyFunction::variable(c, c->u(0)), u2 = PolyFunction::variable(c, c->u(1));
    auto x = PolyFunction::variable(c, c->x(1, 0)), y = PolyFunction::variable(c, c->y(1, 0));
    CHECK((u1 * u2) == Scalar(-1) * (u2 * u1));
    CHECK((u1 * u1).is_zero());
    CHECK((x * x).size() == 1);
    CHECK((y * u1) == Scalar(-1) * (u1 * y));
    CHECK(derivative(u1 * u2, c->u(0)) == u2);
    CHECK(derivative(u1 * u2, c->u(1)) == Scalar(-1) * u1);
    CHECK(derivative(x * x, c->x(1, 0)) == Scalar(2) * x);
    std::mt19937 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        int df = static_cast<int>(rng() % 4) - 1, dg = static_cast<int>(rng() % 4) - 1;
        auto f = random_poly(c, df, rng), g = random_poly(c, dg, rng);
        int z = static_cast<int>(rng() % c->size());
        // ∂(fg) = ∂f g + (-1)^{|z||f|} f ∂g
        CHECK(derivative(f * g, z) == derivative(f, z) * g + sign(c->degree(z) * df) * (f * derivative(g, z)));
    }
}

TEST_CASE("BV operator identities on random polynomials") {
    for (auto [name, pairing] : {std::pair{"su2", "killing"}, std::pair{"affine2", "identity"}}) {
        CAPTURE(name);
        auto c = coords_for(name, pairing);
        std::mt19937 rng(17);
        for (int trial = 0; trial < 40; ++trial) {
            int df = static_cast<int>(rng() % 4) - 1, dg = static_cast<int>(rng() % 4) - 1,
                dh = static_cast<int>(rng() % 3) - 1;
            auto f = random_poly(c, df, rng), g = random_poly(c, dg, rng), h = random_poly(c, dh, rng);
            if (f.is_zero() || g.is_zero()) continue;
            df = degree_of(f);
            dg = degree_of(g);
            dh = degree_of(h);
            CHECK(bv_laplacian(bv_laplacian(f * g)).is_zero());
            CHECK(bv_laplacian(f * g) == bv_laplacian(f) * g + sign(df) * (f * bv_laplacian(g)) +
                                             sign(df) * antibracket(f, g));
            CHECK(antibracket(f, g) == Scalar(-1) * sign((df + 1) * (dg + 1)) * antibracket(g, f));
            CHECK(bv_laplacian(antibracket(f, g)) ==
                  antibracket(bv_laplacian(f), g) + sign(df + 1) * antibracket(f, bv_laplacian(g)));
            CHECK(antibracket(f, antibracket(g, h)) ==
                  antibracket(antibracket(f, g), h) + sign((df + 1) * (dg + 1)) * antibracket(g, antibracket(f, h)));
            for (int d : antibracket(f, g).degrees()) CHECK(d == df + dg + 1);
        }
    }
}

TEST_CASE("classical action for su2") {
    for (auto pairing : {"killing", "identity"}) {
        CAPTURE(pairing);
        auto c = coords_for("su2", pairing);
        auto s = build_classical_action(c);
        CHECK(s.degrees() == std::vector<int>{0});
        CHECK(s.size() == 36);
        CHECK(antibracket(s, s).is_zero());
        CHECK(bv_laplacian(s).is_zero());
        auto k = kinetic_term(c);
        CHECK(antibracket(k, k).is_zero());
    }
}

TEST_CASE("the +1/2 sign on uuv breaks the classical master equation") {
    auto c = coords_for("su2", "killing");
    auto lit = build_classical_action(c, true);
    auto res = antibracket(lit, lit);
    CHECK_FALSE(res.is_zero());
    // every residual monomial has two u's, one x and one y
    for (const auto& [m, coeff] : res.terms()) {
        int u = 0, x = 0, y = 0;
        for (int v : m) {
            int fam = v / 3;
            u += fam == 0;
            x += fam >= 1 && fam <= 3;
            y += fam >= 4 && fam <= 6;
        }
        CHECK(u == 2);
        CHECK(x == 1);
        CHECK(y == 1);
    }
}

TEST_CASE("quantum obstruction is proportional to the modular character") {
    auto check = [](const LieAlgebra& g) {
        auto c = std::make_shared<const BvCoordinates>(g);
        auto ds = bv_laplacian(build_classical_action(c));
        CHECK(ds == Scalar(-2) * trace_shape(c));
        auto q = qme_obstruction(g);
        CHECK(q.equivalence_holds);
        CHECK(q.delta_s.is_zero() == q.unimodular);
        if (!q.unimodular) {
            REQUIRE(q.coefficient);
            CHECK(*q.coefficient == -2);
            CHECK(q.proportional);
        }
    };
    check(attach_pairing(builtin("affine2"), "identity"));
    check(attach_pairing(builtin("su2"), "killing"));
    check(attach_pairing(builtin("abelian(2)"), "identity"));
    // [e1,e2] = e2, [e1,e3] = 2 e3 with a diagonal pairing
    LieAlgebra g(3);
    g.set_f(0, 1, 1, 1);
    g.set_f(1, 0, 1, -1);
    g.set_f(0, 2, 2, 2);
    g.set_f(2, 0, 2, -2);
    Matrix t = Matrix::identity(3);
    t(0, 0) = 2;
    t(2, 2) = Scalar(1, 3);
    g.set_pairing(t);
    check(g);
    auto c = std::make_shared<const BvCoordinates>(g);
    CHECK(bv_laplacian(build_classical_action(c)) == Scalar(-3) * PolyFunction::variable(c, c->u(0)));
}

TEST_CASE("affine2 report") {
    auto g = attach_pairing(builtin("affine2"), "identity");
    auto q = qme_obstruction(g);
    CHECK(q.delta_s.to_string() == "-2 u_1");
    CHECK_FALSE(q.unimodular);
    CHECK(q.trace == std::vector<Scalar>{1, 0});
    CHECK_FALSE(q.pairing_invariant);
    for (const auto& [m, coeff] : q.delta_s.terms()) {
        REQUIRE(m.size() == 1);
        CHECK(m[0] < 2);
    }
    auto ct = no_counterterm_check(g);
    CHECK(ct.needed);
    CHECK_FALSE(ct.solvable);
    CHECK_FALSE(ct.witness.empty());
    auto j = q.to_json();
    CHECK(j["delta_s"] == "-2 u_1");
    CHECK(j["unimodular"] == false);
}

TEST_CASE("unimodular cases need no counterterm") {
    for (auto [name, pairing] : {std::pair{"su2", "killing"}, std::pair{"abelian(2)", "identity"}}) {
        auto ct = no_counterterm_check(attach_pairing(builtin(name), pairing));
        CHECK_FALSE(ct.needed);
        CHECK(ct.solvable);
    }
}

}
