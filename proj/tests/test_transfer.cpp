#include "hptbv/sign.hpp"
#include "hptbv/transfer.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <set>

using namespace hptbv;

namespace {

std::shared_ptr<const CeComplex> su2_ce() {
    static auto ce = std::make_shared<const CeComplex>(builtin("su2"));
    return ce;
}

SdrData iso(const std::string& spec) { return isotrope_sdr(su2_ce(), parse_isotrope(spec, 3)); }

LieAlgebra su2_killing() { return attach_pairing(builtin("su2"), "killing"); }

std::vector<Scalar> dense_of(const SparseVec& v, int n) {
    std::vector<Scalar> d(n);
    for (const auto& [i, c] : v) d[i] = c;
    return d;
}

// Hand-derived ternary product on degree-1 inputs: p(k(a∧b)∧c + a∧k(b∧c)).
std::vector<Scalar> m3_degree_one(const SdrData& s, const MultiVector& a, const MultiVector& b, const MultiVector& c) {
    auto left = mv_wedge(s.apply_k(mv_wedge(a, b)), c);
    auto right = mv_wedge(a, s.apply_k(mv_wedge(b, c)));
    return s.apply_p(left + right);
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("tree counts") {
    std::vector<std::int64_t> cat{1, 1, 2, 5, 14, 42, 132, 429};
    std::vector<std::int64_t> dfact{1, 1, 3, 15, 105, 945, 10395, 135135};
    for (int n = 1; n <= 8; ++n) {
        CHECK(catalan(n - 1) == cat[n - 1]);
        CHECK(labelled_tree_count(n) == dfact[n - 1]);
        CHECK(static_cast<std::int64_t>(enumerate_trees(n).size()) == cat[n - 1]);
    }
    CHECK_THROWS_AS(enumerate_trees(9), BudgetExceeded);
    CHECK_THROWS_AS(enumerate_trees(0), InputError);
}

TEST_CASE("planar trees are distinct and well formed") {
    for (int n = 1; n <= 7; ++n) {
        std::set<std::string> seen;
        for (const auto& t : enumerate_trees(n)) {
            CHECK(t.leaves == n);
            CHECK(static_cast<int>(t.nodes.size()) == 2 * n - 1);
            seen.insert(t.serialize());
            int leaves = 0;
            for (int id = 0; id < static_cast<int>(t.nodes.size()); ++id)
                if (t.is_leaf(id)) CHECK(t.nodes[id].leaf == leaves++);
        }
        CHECK(static_cast<std::int64_t>(seen.size()) == catalan(n - 1));
    }
    auto three = enumerate_trees(3);
    CHECK(three[0].serialize() == "(x,(x,x))");
    CHECK(three[1].serialize() == "((x,x),x)");
}

TEST_CASE("DOT output is fixed") {
    auto t = enumerate_trees(3)[1];
    TreeDecorations deco;
    deco.zero_edges = {3};
    deco.vertex_label = "∧";
    std::string expect =
        "digraph transfer_tree {\n"
        "  rankdir=BT;\n"
        "  n0 [label=\"w1\", shape=plaintext];\n"
        "  n1 [label=\"w2\", shape=plaintext];\n"
        "  n2 [label=\"w3\", shape=plaintext];\n"
        "  n3 [label=\"∧\", shape=circle];\n"
        "  n4 [label=\"p ∘ ∧\", shape=box];\n"
        "  n0 -> n3 [label=\"e\"];\n"
        "  n1 -> n3 [label=\"e\"];\n"
        "  n3 -> n4 [label=\"k\", style=dashed];\n"
        "  n2 -> n4 [label=\"e\"];\n"
        "}\n";
    CHECK(emit_tree_diagram(t, deco) == expect);
}

TEST_CASE("binary operations") {
    auto s = iso("e3");
    auto cs = transfer_c_infinity(s, 2, Budget{});
    for (int a = 0; a < s.w_total(); ++a)
        for (int b = 0; b < s.w_total(); ++b) {
            auto expect = s.apply_p(mv_wedge(s.e_of(a), s.e_of(b)));
            CHECK(dense_of(cs.apply(std::vector<int>{a, b}), s.w_total()) == expect);
        }
    // l2 on the minimal model of su2 with su2 coefficients: 1 ⊗ bracket on degree 0
    auto t = tensor_sdr(iso("e1,e2,e3"), su2_killing());
    auto ls = transfer_l_infinity(t, 2, Budget{});
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            std::vector<Scalar> ex(3), ey(3);
            ex[x] = 1;
            ey[y] = 1;
            auto c = oracle::cross(ex, ey);
            SparseVec expect;
            for (int z = 0; z < 3; ++z) add_to(expect, t.w_index(0, z), c[z]);
            CHECK(ls.apply(std::vector<int>{t.w_index(0, x), t.w_index(0, y)}) == expect);
        }
}

TEST_CASE("ternary product on degree-1 inputs matches the hand formula") {
    for (auto spec : {"e3", "e1, e2", "e1+e2, e3", "e1"}) {
        CAPTURE(spec);
        auto s = iso(spec);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    std::vector<MultiVector> in{MultiVector::generator(3, a), MultiVector::generator(3, b),
                                                MultiVector::generator(3, c)};
                    CHECK(c_transfer_forms(s, in) == m3_degree_one(s, in[0], in[1], in[2]));
                }
    }
}

TEST_CASE("partial transfer on <e3>: witness and cross-product formula") {
    auto s = iso("e3");
    auto e1 = MultiVector::generator(3, 0), e2 = MultiVector::generator(3, 1);
    auto img = s.apply_e(c_transfer_forms(s, {e1, e2, e1}));
    CHECK(img == parse_multivector("-2 e1e3", 3));
    CHECK(img == su2_ce()->d(parse_multivector("2 e2", 3)));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                std::vector<Scalar> A(3), B(3), C(3);
                A[a] = B[b] = C[c] = 1;
                auto l = oracle::cross(oracle::cross(A, B), C), r = oracle::cross(A, oracle::cross(B, C));
                MultiVector v(3);
                for (int i = 0; i < 3; ++i) v.add_term(Mask(1) << i, l[i] + r[i]);
                auto m = s.apply_e(c_transfer_forms(s, {MultiVector::generator(3, a), MultiVector::generator(3, b),
                                                        MultiVector::generator(3, c)}));
                CHECK(m == su2_ce()->d(v));
            }
}

TEST_CASE("subset DP agrees with brute-force trees") {
    auto t = tensor_sdr(iso("e3"), su2_killing());
    int n = t.size();
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int c = b; c < n; ++c) {
                std::vector<int> in{a, b, c};
                CHECK(transferred_bracket(t, in) == transferred_bracket_tensor_trees(t, in));
            }
    std::mt19937 rng(2);
    for (int trial = 0; trial < 150; ++trial) {
        std::vector<int> in(4);
        for (auto& x : in) x = static_cast<int>(rng() % n);
        std::sort(in.begin(), in.end());
        CHECK(transferred_bracket(t, in) == transferred_bracket_tensor_trees(t, in));
    }
}

TEST_CASE("L-infinity operations are graded symmetric") {
    auto t = tensor_sdr(iso("e3"), su2_killing());
    auto ls = transfer_l_infinity(t, 3, Budget{});
    std::mt19937 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> in(3);
        for (auto& x : in) x = static_cast<int>(rng() % t.size());
        std::vector<int> order{0, 1, 2};
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> permuted(3), par(3);
        for (int i = 0; i < 3; ++i) {
            permuted[i] = in[order[i]];
            par[i] = parity(t.w_ghost_degree(in[i]));
        }
        SparseVec direct = transferred_bracket(t, permuted);
        SparseVec expect = ls.apply(in);
        if (koszul_sign(par, order) < 0)
            for (auto& [k, c] : expect) c = -c;
        CHECK(direct == expect);
    }
}

TEST_CASE("vanishing on the minimal model of su2") {
    auto t = tensor_sdr(iso("e1,e2,e3"), su2_killing());
    auto ls = transfer_l_infinity(t, 6, Budget{});
    auto rep = vanishing_report(ls, 3, 6);
    CHECK(rep.certified_zero());
    CHECK_FALSE(rep.truncated());
    auto cs = transfer_c_infinity(meinrenken_sdr(su2_ce()), 6, Budget{});
    CHECK(vanishing_report(cs, 3, 6).certified_zero());
}

TEST_CASE("partial transfer: only m3 survives up to arity 5") {
    auto cs = transfer_c_infinity(iso("e3"), 5, Budget{});
    auto rep = vanishing_report(cs, 3, 5);
    REQUIRE(rep.arities.size() == 3);
    CHECK_FALSE(is_zero(rep.arities[0].max_numerator));
    CHECK(rep.arities[0].max_numerator == 2);
    CHECK(is_zero(rep.arities[1].max_numerator));
    CHECK(is_zero(rep.arities[2].max_numerator));
    CHECK_FALSE(rep.truncated());
    CHECK_FALSE(rep.arities[0].witness.empty());
}

TEST_CASE("identities of transferred structures") {
    auto cs = transfer_c_infinity(iso("e3"), 4, Budget{});
    CHECK(ainf_identities(cs, 4).ok());
    for (int n = 2; n <= 4; ++n) CHECK(shuffle_check(cs, n).ok());
    auto t = tensor_sdr(iso("e3"), su2_killing());
    auto ls = transfer_l_infinity(t, 4, Budget{});
    CHECK(linf_identities(ls, 4).ok());
    CHECK(c_vs_l_consistency(iso("e3"), t, 3).ok());
    CHECK_THROWS_AS(shuffle_check(ls, 3), InputError);
}

TEST_CASE("a broken product is caught by the identity checks") {
    auto cs = transfer_c_infinity(iso("e3"), 3, Budget{});
    auto& m3 = cs.ops[3];
    REQUIRE_FALSE(m3.empty());
    m3.begin()->second.begin()->second += 1;
    bool shuffle_ok = shuffle_check(cs, 3).ok();
    bool stasheff_ok = ainf_identities(cs, 3).ok();
    CHECK_FALSE((shuffle_ok && stasheff_ok));
}

TEST_CASE("budget truncation is explicit and deterministic") {
    auto s = iso("e3");
    Budget small;
    small.evaluations = 101;
    auto a = transfer_c_infinity(s, 3, small);
    auto b = transfer_c_infinity(s, 3, small);
    const auto& st = a.status.at(3);
    CHECK(st.truncated);
    CHECK(st.trees == 2);
    CHECK(st.tuples_done == 50);
    CHECK(st.tuples_total == 216);
    CHECK_FALSE(a.complete(3));
    CHECK(a.ops == b.ops);
    auto rep = vanishing_report(a, 3, 3);
    CHECK(rep.truncated());
    CHECK_FALSE(rep.certified_zero());
    auto j = rep.to_json();
    CHECK(j["truncated"] == true);
    CHECK(j["arities"][0]["tuples_evaluated"] == 50);
    CHECK_FALSE(j["arities"][0].contains("seconds"));
    CHECK(rep.to_json(true)["arities"][0].contains("seconds"));
}

TEST_CASE("budget from the environment") {
    ::setenv("HPT_BV_BUDGET", "2.5e3", 1);
    CHECK(Budget::from_env().evaluations == 2500);
    ::setenv("HPT_BV_BUDGET", "lots", 1);
    CHECK_THROWS_AS(Budget::from_env(), InputError);
    ::unsetenv("HPT_BV_BUDGET");
    CHECK(Budget::from_env().evaluations == kDefaultEvaluationBudget);
    CHECK(Budget::from_env().arity_cap == 8);
}

TEST_CASE("closed images give vanishing products") {
    std::vector<SdrData> sdrs{meinrenken_sdr(su2_ce()), iso("e1,e2,e3"), iso("e1, e2"), iso("e2, e3"),
                              iso("e1+e2, e3"), iso("e3"), iso("e1"), trivial_sdr(su2_ce())};
    int closed = 0;
    for (const auto& s : sdrs) {
        bool c = image_closed_under_wedge(s).closed;
        auto rep = vanishing_report(transfer_c_infinity(s, 5, Budget{}), 3, 5);
        if (c) {
            ++closed;
            CHECK(rep.certified_zero());
        }
    }
    CHECK(closed >= 5);
}

TEST_CASE("internal edges vanish tree by tree when the image is closed") {
    auto s = iso("e1, e2");
    for (const auto& tree : enumerate_trees(4))
        for (int a = 0; a < s.w_total(); ++a)
            for (int b = 0; b < s.w_total(); ++b) {
                std::vector<MultiVector> in{s.e_of(a), s.e_of(b), s.e_of(a), s.e_of(b)};
                auto v = evaluate_c_tree(s, tree, in);
                CHECK(v.value.is_zero());
                int internal = 0;
                for (int id = tree.leaves; id < tree.root(); ++id) ++internal;
                CHECK(static_cast<int>(v.zero_edges.size()) >= 1);
                CHECK(static_cast<int>(v.zero_edges.size()) <= internal);
            }
}

TEST_CASE("perturbation lemma reproduces the tree brackets") {
    for (auto spec : {"e1,e2,e3", "e3"}) {
        CAPTURE(spec);
        auto t = tensor_sdr(iso(spec), su2_killing());
        auto hpl = hpl_truncated(t, 4);
        CHECK(hpl.square_zero);
        CHECK(hpl.tensor_trick_ok);
        auto tree = transfer_l_infinity(t, 4, Budget{});
        auto cmp = hpl_compare(hpl, tree);
        for (const auto& c : cmp.checks) CHECK_MESSAGE(c.ok, c.name << ": " << c.witness);
    }
    auto t = tensor_sdr(iso("e3"), su2_killing());
    CHECK_THROWS_AS(hpl_truncated(t, 4, 100), BudgetExceeded);
    auto h3 = hpl_truncated(t, 3);
    CHECK_FALSE(h3.brackets.at(3).empty());
}

TEST_CASE("transfer from the trivial retract is the original algebra") {
    auto s = trivial_sdr(su2_ce());
    auto cs = transfer_c_infinity(s, 4, Budget{});
    CHECK(vanishing_report(cs, 3, 4).certified_zero());
    // m1 = d
    for (int w = 0; w < s.w_total(); ++w)
        CHECK(s.apply_e(dense_of(cs.apply(std::vector<int>{w}), s.w_total())) == su2_ce()->d(s.e_of(w)));
}

}
