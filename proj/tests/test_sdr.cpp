#include "hptbv/sdr.hpp"

#include <doctest.h>

using namespace hptbv;

namespace {

std::shared_ptr<const CeComplex> ce_of(const std::string& name) {
    return std::make_shared<const CeComplex>(builtin(name));
}

// Apply a degree-shifting graded map to a homogeneous multivector directly.
MultiVector apply_block(const CeComplex& ce, const GradedMap& m, const MultiVector& a) {
    if (a.is_zero()) return MultiVector(ce.dim());
    int deg = a.degree();
    int tgt = deg + m.shift;
    if (tgt < 0 || tgt > ce.dim()) return MultiVector(ce.dim());
    return ce.basis().from_coords(m.block(deg).apply(ce.basis().coords(a, deg)), tgt);
}

// SDR identities checked monomial by monomial, independent of verify_sdr.
void check_identities(const SdrData& s) {
    const auto& ce = *s.ce;
    for (int deg = 0; deg <= ce.dim(); ++deg)
        for (Mask m : ce.basis().of_degree(deg)) {
            auto a = MultiVector::monomial(ce.dim(), m);
            auto k = [&](const MultiVector& x) { return apply_block(ce, s.k, x); };
            auto d = [&](const MultiVector& x) { return apply_block(ce, ce.d(), x); };
            MultiVector ep = s.apply_e(s.apply_p(a));
            CHECK(ep == a - d(k(a)) - k(d(a)));
            CHECK(k(k(a)).is_zero());
            for (const auto& c : s.apply_p(k(a))) CHECK(is_zero(c));
            // im k is isotropic for the integral pairing
            if (ce.dim() + 2 - deg > ce.dim()) continue;
            for (Mask m2 : ce.basis().of_degree(ce.dim() + 2 - deg)) {
                auto b = MultiVector::monomial(ce.dim(), m2);
                CHECK(is_zero(ce.integral_pairing(k(a), k(b))));
            }
        }
    for (int w = 0; w < s.w_total(); ++w) {
        auto pe = s.apply_p(s.e_of(w));
        for (int i = 0; i < s.w_total(); ++i) CHECK(pe[i] == (i == w ? 1 : 0));
        CHECK(apply_block(ce, s.k, s.e_of(w)).is_zero());
    }
}

}  // namespace

TEST_SUITE("sdr") {

TEST_CASE("every construction is a cyclic SDR") {
    auto su2 = ce_of("su2");
    auto su3 = ce_of("su3");
    std::vector<std::pair<std::string, SdrData>> cases;
    cases.emplace_back("trivial su2", trivial_sdr(su2));
    cases.emplace_back("meinrenken su2", meinrenken_sdr(su2));
    cases.emplace_back("meinrenken su3", meinrenken_sdr(su3));
    for (auto iso : {"e1, e2, e3", "e3", "e1", "e1, e2", "e2, e3", "e1+e2, e3", "2e1 - 1/2 e3"})
        cases.emplace_back(std::string("isotrope ") + iso, isotrope_sdr(su2, parse_isotrope(iso, 3)));
    for (const auto& [name, s] : cases) {
        CAPTURE(name);
        auto r = verify_sdr(s);
        for (const auto& c : r.checks) CHECK_MESSAGE(c.ok, c.name << ": " << c.witness);
        auto cyc = verify_cyclic(s);
        for (const auto& c : cyc.checks) CHECK_MESSAGE(c.ok, c.name << ": " << c.witness);
        if (s.ce->dim() <= 3) check_identities(s);
    }
}

TEST_CASE("reduced space dimensions") {
    auto su2 = ce_of("su2");
    CHECK(isotrope_sdr(su2, parse_isotrope("e1,e2,e3", 3)).w_dims == std::vector<int>{1, 0, 0, 1});
    CHECK(isotrope_sdr(su2, parse_isotrope("e3", 3)).w_dims == std::vector<int>{1, 2, 2, 1});
    CHECK(isotrope_sdr(su2, parse_isotrope("e1+e2, e3", 3)).w_dims == std::vector<int>{1, 1, 1, 1});
    CHECK(meinrenken_sdr(su2).w_dims == std::vector<int>{1, 0, 0, 1});
    CHECK(meinrenken_sdr(ce_of("su3")).w_dims == std::vector<int>{1, 0, 0, 1, 0, 1, 0, 0, 1});
    CHECK(trivial_sdr(su2).w_dims == std::vector<int>{1, 3, 3, 1});
    // Repeated vectors are reduced, not rejected.
    CHECK(isotrope_sdr(su2, parse_isotrope("e3, 2e3", 3)).w_dims == std::vector<int>{1, 2, 2, 1});
}

TEST_CASE("minimal homotopy on su2 is the inverse of d on degree 1") {
    auto su2 = ce_of("su2");
    for (const auto& s : {isotrope_sdr(su2, parse_isotrope("e1,e2,e3", 3)), meinrenken_sdr(su2)}) {
        CHECK(s.apply_k(parse_multivector("e1e2", 3)) == parse_multivector("e3", 3));
        CHECK(s.apply_k(parse_multivector("e2e3", 3)) == parse_multivector("e1", 3));
        CHECK(s.apply_k(parse_multivector("-e1e3", 3)) == parse_multivector("e2", 3));
        CHECK(s.apply_k(parse_multivector("e1", 3)).is_zero());
        CHECK(s.apply_k(parse_multivector("e1e2e3", 3)).is_zero());
    }
}

TEST_CASE("closure of the image under wedge") {
    auto su2 = ce_of("su2");
    CHECK(image_closed_under_wedge(meinrenken_sdr(su2)).closed);
    CHECK(image_closed_under_wedge(meinrenken_sdr(ce_of("su3"))).closed);
    for (auto iso : {"e1, e2", "e2, e3", "e1, e3", "e1+e2, e3"})
        CHECK(image_closed_under_wedge(isotrope_sdr(su2, parse_isotrope(iso, 3))).closed);
    auto open = image_closed_under_wedge(isotrope_sdr(su2, parse_isotrope("e3", 3)));
    CHECK_FALSE(open.closed);
    CHECK(open.product == parse_multivector("e1e2", 3));
    CHECK(image_closed_under_wedge(trivial_sdr(su2)).closed);
}

TEST_CASE("isotrope errors") {
    CHECK_THROWS_AS(isotrope_sdr(ce_of("abelian(2)"), parse_isotrope("e1", 2)), MathError);
    CHECK_THROWS_AS(parse_isotrope("", 3), InputError);
    CHECK_THROWS_AS(parse_isotrope("e1 + e1e2", 3), InputError);
    CHECK_THROWS_AS(parse_isotrope("e1 - e1", 3), InputError);
    CHECK_THROWS_AS(parse_isotrope("e5", 3), InputError);
    auto v = parse_isotrope(" e1+e2 ,e3 ", 3);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == parse_multivector("e1 + e2", 3));
}

TEST_CASE("reduced differential") {
    auto su2 = ce_of("su2");
    auto s = isotrope_sdr(su2, parse_isotrope("e3", 3));
    // The partial retract keeps a differential d_W = p d e with d_W² = 0;
    // on W¹ = span(e1, e2) it is injective.
    int nonzero = 0;
    for (int w = 0; w < s.w_total(); ++w) {
        auto dw = s.apply_p(su2->d(s.e_of(w)));
        MultiVector again = su2->d(s.apply_e(dw));
        for (const auto& c : s.apply_p(again)) CHECK(is_zero(c));
        for (const auto& c : dw) nonzero += !is_zero(c);
    }
    CHECK(nonzero > 0);
    CHECK(rank(s.dw.block(1)) == 2);
    auto t = trivial_sdr(su2);
    CHECK(t.apply_e(t.apply_p(parse_multivector("e1e2", 3))) == parse_multivector("e1e2", 3));
}

}
