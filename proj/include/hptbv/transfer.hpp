#pragma once

#include "hptbv/coefficients.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hptbv {

/// Planar full binary tree. Node ids: leaves 0..n-1 (left to right), internal
/// nodes after; the root is the last node.
struct TransferTree {
    struct Node {
        int left = -1;
        int right = -1;
        int leaf = -1;  // leaf position, -1 for internal nodes
    };
    std::vector<Node> nodes;
    int leaves = 0;

    int root() const { return static_cast<int>(nodes.size()) - 1; }
    bool is_leaf(int id) const { return nodes[id].leaf >= 0; }
    /// Nested pairs, e.g. "((x,x),x)".
    std::string serialize() const;
};

constexpr int kDefaultArityCap = 8;
constexpr std::int64_t kDefaultEvaluationBudget = 1000000;

/// Trees with n leaves in canonical order (left subtree size ascending).
std::vector<TransferTree> enumerate_trees(int n, int cap = kDefaultArityCap);

std::int64_t catalan(int n);
/// Number of non-planar binary trees with n labelled leaves, (2n-3)!!.
std::int64_t labelled_tree_count(int n);

/// Evaluation limits. `evaluations` counts input tuples times trees per arity.
struct Budget {
    int arity_cap = kDefaultArityCap;
    std::int64_t evaluations = kDefaultEvaluationBudget;
    /// Default budget, overridden by HPT_BV_BUDGET when set.
    static Budget from_env();
};

// ---------------------------------------------------------------- L∞ side

/// l_n(w_1..w_n) on W⊗g in the shifted convention: sum over labelled binary
/// trees, e at leaves, l2 at vertices, h = edge_sign * (k⊗1) on internal
/// edges, p at the root. Koszul signs use gh.
SparseVec transferred_bracket(const TensorSdr& t, const std::vector<int>& inputs, int edge_sign = 1);

/// Same operation by brute force: every planar tree, every permutation of the
/// inputs, with each node value kept as a pure tensor (form) ⊗ (g vector) and
/// the scalar and Lie parts evaluated separately; divided by 2^{n-1}.
SparseVec transferred_bracket_tensor_trees(const TensorSdr& t, const std::vector<int>& inputs);

// ---------------------------------------------------------------- C∞ side

/// m_n(w_1..w_n) on W (flat indices), unshifted: p_n = sum_{i+j=n}
/// (-1)^{i(j+1)} μ(h p_i ⊗ h p_j) with h = -k and h p_1 = -e, m_n = p∘p_n.
std::vector<Scalar> c_transfer(const SdrData& s, const std::vector<int>& inputs);
std::vector<Scalar> c_transfer_forms(const SdrData& s, const std::vector<MultiVector>& inputs);

/// Value of one planar tree (no signs): p at the root, k on internal edges.
/// Also reports which internal edges carried a zero after applying k.
struct TreeValue {
    MultiVector value;                // before p
    std::vector<int> zero_edges;      // internal node ids whose k-image vanished
};
TreeValue evaluate_c_tree(const SdrData& s, const TransferTree& tree, const std::vector<MultiVector>& inputs);

// ---------------------------------------------------------------- structures

enum class AlgebraKind { LInfinity, CInfinity };

struct ArityStatus {
    int arity = 0;
    std::int64_t tuples_total = 0;
    std::int64_t tuples_done = 0;
    std::int64_t trees = 0;
    bool truncated = false;
    Scalar max_numerator = 0;  // 0 means every evaluated tuple gave exactly 0
    std::vector<int> witness;  // first tuple with a nonzero value
    SparseVec witness_value;
    std::string witness_text;  // e.g. "m3(w1[1], w1[2], w1[1]) = ..."
    double seconds = 0;
};

/// Operations l_n / m_n tabulated on basis tuples: sorted multisets for L∞,
/// ordered tuples for C∞. Missing keys are zero for completed arities.
struct TransferredStructure {
    AlgebraKind kind = AlgebraKind::LInfinity;
    int dim = 0;
    std::vector<int> degrees;  // gh for L∞, form degree for C∞
    std::vector<std::string> names;
    std::map<int, std::map<std::vector<int>, SparseVec>> ops;
    std::map<int, ArityStatus> status;

    std::string format(const SparseVec& v) const;

    bool complete(int n) const;
    /// Operation on an arbitrary basis tuple (reordered with Koszul signs for L∞).
    SparseVec apply(const std::vector<int>& tuple) const;
    /// Multilinear extension.
    SparseVec apply(const std::vector<SparseVec>& args) const;
};

/// l1 = -d_W⊗1 plus l_n for 2 <= n <= max_arity, computed within budget.
TransferredStructure transfer_l_infinity(const TensorSdr& t, int max_arity, const Budget& budget,
                                         int min_arity = 2, int edge_sign = 1);
/// m1 = d_W plus m_n for 2 <= n <= max_arity.
TransferredStructure transfer_c_infinity(const SdrData& s, int max_arity, const Budget& budget, int min_arity = 2);

struct VanishingReport {
    std::vector<ArityStatus> arities;
    bool certified_zero() const;
    bool truncated() const;
    /// Timing is left out by default so reports stay byte-reproducible.
    nlohmann::json to_json(bool with_timing = false) const;
};

/// Per-arity report for min..max from a structure computed over that range.
VanishingReport vanishing_report(const TransferredStructure& st, int min_arity, int max_arity);

/// C∞ shuffle identities: for p+q = n, p,q >= 1, the signed sum of m_n over
/// (p,q)-shuffles vanishes; sign = sgn(σ) × Koszul sign in form degrees.
Report shuffle_check(const TransferredStructure& st, int n);

/// Strict L∞ identities (shifted: Σ_{i+j=n+1} Σ_unshuffles ε l_j(l_i(..),..) = 0)
/// on every basis multiset of size n, for n up to max_total.
Report linf_identities(const TransferredStructure& st, int max_total);

/// Stasheff identities Σ (-1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0 with the
/// Koszul sign of m_s passing the first r inputs, for n up to max_total.
Report ainf_identities(const TransferredStructure& st, int max_total);

/// l2 = ± m2 ⊗ [,] on all basis pairs; for n = 3 the tree-by-tree tensor
/// formula against the transferred l3.
Report c_vs_l_consistency(const SdrData& s, const TensorSdr& t, int max_arity = 3);

// ---------------------------------------------------------------- HPL oracle

/// Element of Sym(E_g) on the coalgebra side: sorted words of basis indices.
using Word = std::vector<int>;
using SymVec = std::map<Word, Scalar>;

struct HplResult {
    int max_word = 0;
    std::map<int, std::map<std::vector<int>, SparseVec>> brackets;  // l'_n from Π δ (Kδ)^{n-2} 𝓔
    std::int64_t words_checked = 0;
    bool square_zero = true;      // (Q1 + δ)^2 = 0 on words up to max_word
    std::string square_witness;
    bool tensor_trick_ok = true;  // 𝓔Π - 1 = Q1 K + K Q1, ΠK = 0, K𝓔 = 0, KK = 0
    std::string tensor_trick_witness;
};

/// Homological perturbation on Sym^{<= max_word}. Throws BudgetExceeded when
/// the number of words exceeds block_cap.
HplResult hpl_truncated(const TensorSdr& t, int max_word, std::int64_t block_cap = 1000000);

/// Compares HPL brackets with tree brackets entry by entry (arity 1..max_word).
Report hpl_compare(const HplResult& hpl, const TransferredStructure& tree);

// ---------------------------------------------------------------- diagrams

struct TreeDecorations {
    std::vector<std::string> leaf_labels;  // defaults to "w1".."wn"
    std::vector<int> zero_edges;           // internal node ids drawn dashed
    std::string vertex_label = "[,]";
    std::string title;
};

/// Deterministic DOT digraph: leaves feed e, internal vertices are brackets or
/// products, internal edges carry k, the root carries p.
std::string emit_tree_diagram(const TransferTree& tree, const TreeDecorations& deco = {});

}  // namespace hptbv
