#include "hptbv/linalg.hpp"
#include "hptbv/multivector.hpp"
#include "hptbv/sign.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace hptbv;

TEST_SUITE("core_algebra") {

TEST_CASE("scalars parse to canonical form and print back") {
    CHECK(format_scalar(parse_scalar("2/4")) == "1/2");
    CHECK(format_scalar(parse_scalar("-6/3")) == "-2");
    CHECK(format_scalar(parse_scalar(" +3 ")) == "3");
    CHECK(format_scalar(parse_scalar("0/5")) == "0");
    CHECK_THROWS_AS(parse_scalar("1/0"), InputError);
    CHECK_THROWS_AS(parse_scalar("x"), InputError);
    CHECK_THROWS_AS(parse_scalar("1.5"), InputError);
    CHECK(abs_numerator(parse_scalar("-7/3")) == 7);
}

TEST_CASE("koszul sign agrees with adjacent-swap simulation") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + trial % 6;
        std::vector<int> par(n), order(n);
        for (auto& p : par) p = rng() % 2;
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        // Start from 0..n-1 and bubble into `order`, tracking each swap.
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[order[i]] = i;
        std::vector<int> seq(n);
        std::iota(seq.begin(), seq.end(), 0);
        int sign = 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j + 1 < n - i; ++j)
                if (pos[seq[j]] > pos[seq[j + 1]]) {
                    sign *= swap_sign(par[seq[j]], par[seq[j + 1]]);
                    std::swap(seq[j], seq[j + 1]);
                }
        CHECK(koszul_sign(par, order) == sign);
        CHECK(permutation_sign(order) == oracle::inversion_sign(order));
    }
}

TEST_CASE("wedge of monomials matches the sorting oracle") {
    for (unsigned a = 0; a < 32; ++a)
        for (unsigned b = 0; b < 32; ++b) {
            auto ia = oracle::indices_of(a), ib = oracle::indices_of(b);
            std::vector<int> cat = ia;
            cat.insert(cat.end(), ib.begin(), ib.end());
            auto [s, sorted] = oracle::sort_generators(cat);
            CHECK(wedge_sign(a, b) == s);
            auto w = mv_wedge(MultiVector::monomial(5, a), MultiVector::monomial(5, b));
            if (s == 0) CHECK(w.is_zero());
            else CHECK(w == MultiVector::monomial(5, oracle::mask_of(sorted), s));
        }
}

TEST_CASE("wedge is associative and graded commutative") {
    std::mt19937 rng(11);
    auto random_mv = [&](int deg) {
        MultiVector v(4);
        for (unsigned m = 0; m < 16; ++m)
            if (form_degree(m) == deg && rng() % 2) v.add_term(m, oracle::small_rational(rng));
        return v;
    };
    for (int trial = 0; trial < 60; ++trial) {
        int da = trial % 3, db = (trial / 3) % 3, dc = (trial / 9) % 2;
        auto a = random_mv(da), b = random_mv(db), c = random_mv(dc);
        CHECK(mv_wedge(mv_wedge(a, b), c) == mv_wedge(a, mv_wedge(b, c)));
        Scalar sign = (da * db) % 2 ? -1 : 1;
        CHECK(mv_wedge(a, b) == sign * mv_wedge(b, a));
    }
}

TEST_CASE("multivector text round trip") {
    auto v = parse_multivector("2 e1e2 - 1/2 e3 + 1", 3);
    CHECK(v.coeff(0b011) == 2);
    CHECK(v.coeff(0b100) == Scalar(-1, 2));
    CHECK(v.coeff(0) == 1);
    CHECK(parse_multivector(v.to_string(), 3) == v);
    CHECK(parse_multivector("e2e1", 3) == MultiVector::monomial(3, 0b011, -1));
    CHECK(parse_multivector("e1e1", 3).is_zero());
    CHECK_THROWS_AS(parse_multivector("e4", 3), InputError);
    CHECK_THROWS_AS(parse_multivector("2 f1", 3), InputError);
    CHECK_THROWS_AS(v.degree(), MathError);
}

TEST_CASE("exterior basis dimensions are binomial") {
    ExteriorBasis b(6);
    std::vector<int> expect{1, 6, 15, 20, 15, 6, 1};
    CHECK(b.dims() == expect);
    for (int k = 0; k <= 6; ++k)
        for (Mask m : b.of_degree(k)) {
            auto mv = MultiVector::monomial(6, m, 3);
            auto c = b.coords(mv, k);
            CHECK(b.from_coords(c, k) == mv);
        }
}

TEST_CASE("rank, kernel, image and solve over the rationals") {
    Matrix m(3, 4);
    // rows: (1 2 0 1), (2 4 1 1), (3 6 1 2): row3 = row1 + row2
    int vals[3][4] = {{1, 2, 0, 1}, {2, 4, 1, 1}, {3, 6, 1, 2}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = vals[r][c];
    CHECK(rank(m) == 2);
    Matrix k = kernel(m);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());
    CHECK(column_basis(m).cols() == 2);
    auto x = solve(m, {3, 7, 10});
    REQUIRE(x);
    CHECK(m.apply(*x) == std::vector<Scalar>{3, 7, 10});
    CHECK_FALSE(solve(m, {1, 0, 0}));
    CHECK_THROWS_AS(inverse(m.col_range(0, 3).row_range(0, 3)), MathError);
}

TEST_CASE("random exact matrices: rank-nullity and inverse") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        int r = 2 + trial % 4, c = 2 + (trial / 4) % 4;
        Matrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = rng() % 3 ? oracle::small_rational(rng) : Scalar(0);
        CHECK(rank(m) + kernel(m).cols() == c);
        CHECK(rank(m) == rank(m.transpose()));
        if (r == c && rank(m) == r) CHECK(inverse(m) * m == Matrix::identity(r));
    }
}

TEST_CASE("graded maps compose blockwise") {
    Matrix a(1, 1), b(1, 1);
    a(0, 0) = 2;
    b(0, 0) = Scalar(1, 3);
    GradedMap f = GradedMap::zero({1, 1}, {1, 1}, 0), g = f;
    f.block(0) = a;
    f.block(1) = a;
    g.block(0) = b;
    g.block(1) = b;
    auto h = compose(f, g);
    CHECK(h.block(0)(0, 0) == Scalar(2, 3));
    CHECK((f - f).is_zero());
    CHECK(GradedMap::identity({2, 3}) == compose(GradedMap::identity({2, 3}), GradedMap::identity({2, 3})));
    auto ki = solve_kernel_image(f);
    CHECK(ki[0].rank == 1);
    CHECK(ki[1].kernel.cols() == 0);
}

}
