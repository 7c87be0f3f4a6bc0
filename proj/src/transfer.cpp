#include "hptbv/transfer.hpp"

#include "hptbv/sign.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace hptbv {

using json = nlohmann::json;

namespace {

int sign_of(int exponent) { return (exponent & 1) ? -1 : 1; }

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

std::int64_t multiset_count(int N, int n) {
    // C(N + n - 1, n), saturating
    __int128 r = 1;
    for (int i = 1; i <= n; ++i) {
        r = r * (N + n - i) / i;
        if (r > kSaturated) return kSaturated;
    }
    return static_cast<std::int64_t>(r);
}

std::int64_t tuple_count(int N, int n) {
    std::int64_t r = 1;
    for (int i = 0; i < n; ++i) r = sat_mul(r, N);
    return r;
}

// Visits nondecreasing tuples in lexicographic order until f returns false.
template <class F>
void for_each_multiset(int N, int n, F&& f) {
    if (N <= 0 || n <= 0) return;
    std::vector<int> cur(n, 0);
    while (true) {
        if (!f(cur)) return;
        int i = n - 1;
        while (i >= 0 && cur[i] == N - 1) --i;
        if (i < 0) return;
        ++cur[i];
        for (int j = i + 1; j < n; ++j) cur[j] = cur[i];
    }
}

template <class F>
void for_each_tuple(int N, int n, F&& f) {
    if (N <= 0 || n <= 0) return;
    std::vector<int> cur(n, 0);
    while (true) {
        if (!f(cur)) return;
        int i = n - 1;
        while (i >= 0 && cur[i] == N - 1) cur[i--] = 0;
        if (i < 0) return;
        ++cur[i];
    }
}

// An odd letter occurring twice kills a graded-symmetric word.
bool odd_repeat(const std::vector<int>& sorted, const std::vector<int>& par) {
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1] && par[sorted[i]]) return true;
    return false;
}

// Sign of reordering the positions of `mask` (in n) to (A, B) where A = mask.
int split_sign(const std::vector<int>& par, unsigned a_mask, int n) {
    int odd_b_before = 0;
    int s = 0;
    for (int i = 0; i < n; ++i) {
        if (!par[i]) continue;
        if (a_mask >> i & 1u)
            s += odd_b_before;
        else
            ++odd_b_before;
    }
    return sign_of(s);
}

Scalar max_abs_numerator(const SparseVec& v) {
    Scalar best = 0;
    for (const auto& [i, c] : v) best = std::max(best, abs_numerator(c));
    return best;
}

SparseVec dense_to_sparse(const std::vector<Scalar>& v) {
    SparseVec out;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (!is_zero(v[i])) out.emplace(i, v[i]);
    return out;
}

void add_scaled(SparseVec& acc, const SparseVec& v, const Scalar& c) {
    if (is_zero(c)) return;
    for (const auto& [i, x] : v) add_to(acc, i, x * c);
}

int mask_popcount(unsigned m) { return __builtin_popcount(m); }

}  // namespace

// ------------------------------------------------------------------ trees

std::string TransferTree::serialize() const {
    std::function<std::string(int)> rec = [&](int id) -> std::string {
        if (is_leaf(id)) return "x";
        return "(" + rec(nodes[id].left) + "," + rec(nodes[id].right) + ")";
    };
    return nodes.empty() ? "" : rec(root());
}

namespace {

// Shape without ids: -1 for a leaf, otherwise children indices into a pool.
struct Shape {
    int left_size = 0;
    std::shared_ptr<const Shape> left, right;
};

using ShapePtr = std::shared_ptr<const Shape>;

std::vector<ShapePtr> shapes(int n, std::map<int, std::vector<ShapePtr>>& memo) {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::vector<ShapePtr> out;
    if (n == 1) {
        out.push_back(std::make_shared<Shape>());
    } else {
        for (int l = 1; l < n; ++l)
            for (const auto& a : shapes(l, memo))
                for (const auto& b : shapes(n - l, memo)) {
                    auto s = std::make_shared<Shape>();
                    s->left_size = l;
                    s->left = a;
                    s->right = b;
                    out.push_back(s);
                }
    }
    memo[n] = out;
    return out;
}

int build(const Shape& s, int first_leaf, TransferTree& t) {
    if (!s.left) return first_leaf;
    int l = build(*s.left, first_leaf, t);
    int r = build(*s.right, first_leaf + s.left_size, t);
    TransferTree::Node node;
    node.left = l;
    node.right = r;
    t.nodes.push_back(node);
    return static_cast<int>(t.nodes.size()) - 1;
}

}  // namespace

std::vector<TransferTree> enumerate_trees(int n, int cap) {
    if (n < 1) throw InputError("enumerate_trees: need at least one leaf");
    if (n > cap) throw BudgetExceeded("enumerate_trees: arity " + std::to_string(n) + " above cap " + std::to_string(cap));
    std::map<int, std::vector<ShapePtr>> memo;
    std::vector<TransferTree> out;
    for (const auto& s : shapes(n, memo)) {
        TransferTree t;
        t.leaves = n;
        for (int i = 0; i < n; ++i) {
            TransferTree::Node leaf;
            leaf.leaf = i;
            t.nodes.push_back(leaf);
        }
        build(*s, 0, t);
        out.push_back(std::move(t));
    }
    return out;
}

std::int64_t catalan(int n) {
    if (n < 0) return 0;
    __int128 c = 1;
    for (int i = 0; i < n; ++i) {
        c = c * 2 * (2 * i + 1) / (i + 2);
        if (c > kSaturated) return kSaturated;
    }
    return static_cast<std::int64_t>(c);
}

std::int64_t labelled_tree_count(int n) {
    if (n < 2) return 1;
    std::int64_t r = 1;
    for (int k = 2 * n - 3; k > 1; k -= 2) r = sat_mul(r, k);
    return r;
}

Budget Budget::from_env() {
    Budget b;
    if (const char* env = std::getenv("HPT_BV_BUDGET"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v >= 1) || v > 9.0e18)
            throw InputError(std::string("HPT_BV_BUDGET must be a positive number, got '") + env + "'");
        b.evaluations = static_cast<std::int64_t>(v);
    }
    return b;
}

// ------------------------------------------------------------------ L∞

SparseVec transferred_bracket(const TensorSdr& t, const std::vector<int>& inputs, int edge_sign) {
    const int n = static_cast<int>(inputs.size());
    if (n < 1) throw InputError("transferred_bracket: empty input");
    if (n > 20) throw BudgetExceeded("transferred_bracket: arity too large");
    for (int w : inputs)
        if (w < 0 || w >= t.size()) throw InputError("transferred_bracket: W index out of range");
    if (n == 1) return t.l1_w(SparseVec{{inputs[0], Scalar(1)}});

    std::vector<int> par(n);
    for (int i = 0; i < n; ++i) par[i] = parity(t.w_ghost_degree(inputs[i]));

    const unsigned full = (1u << n) - 1;
    std::vector<DglaElement> value(full + 1);
    for (int i = 0; i < n; ++i) value[1u << i] = t.e(inputs[i]);

    // Subsets are visited in increasing order, so every proper subset is ready.
    for (unsigned S = 1; S <= full; ++S) {
        if (mask_popcount(S) < 2) continue;
        unsigned low = S & (~S + 1);
        unsigned rest = S ^ low;
        DglaElement acc(t.ctx());
        for (unsigned B = rest; B != 0; B = (B - 1) & rest) {
            unsigned A = S ^ B;
            if (value[A].is_zero() || value[B].is_zero()) continue;
            // Koszul sign of S's inputs reordered as (A, B)
            int odd_b = 0, s = 0;
            for (int i = 0; i < n; ++i) {
                if (!(S >> i & 1u) || !par[i]) continue;
                if (A >> i & 1u)
                    s += odd_b;
                else
                    ++odd_b;
            }
            DglaElement term = shifted_l2(value[A], value[B]);
            if (s & 1) term *= -1;
            acc += term;
        }
        if (S == full) return t.p(acc);
        value[S] = t.h(acc);
        if (edge_sign != 1) value[S] *= edge_sign;
    }
    return {};
}

namespace {

// Pure tensor α ⊗ x with α a homogeneous form and x a homogeneous g-vector.
struct PureTensor {
    MultiVector form;
    std::vector<Scalar> lie;
    int lie_degree = 0;
    bool zero() const {
        if (form.is_zero()) return true;
        for (const auto& c : lie)
            if (!is_zero(c)) return false;
        return true;
    }
};

}  // namespace

SparseVec transferred_bracket_tensor_trees(const TensorSdr& t, const std::vector<int>& inputs) {
    const int n = static_cast<int>(inputs.size());
    if (n < 2) return transferred_bracket(t, inputs);
    const DglaContext& c = t.ctx();
    const SdrData& s = t.base();
    const LieAlgebra& g = c.lie();
    const int G = g.dim();

    std::vector<PureTensor> leaves(n);
    std::vector<int> par(n);
    for (int i = 0; i < n; ++i) {
        int w = inputs[i] / G, a = inputs[i] % G;
        leaves[i].form = s.e_of(w);
        leaves[i].lie.assign(G, 0);
        leaves[i].lie[a] = 1;
        leaves[i].lie_degree = g.degree(a);
        par[i] = parity(t.w_ghost_degree(inputs[i]));
    }

    auto lie_bracket = [&](const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
        std::vector<Scalar> z(G, 0);
        for (int a = 0; a < G; ++a) {
            if (is_zero(x[a])) continue;
            for (int b = 0; b < G; ++b) {
                if (is_zero(y[b])) continue;
                for (const auto& [cc, f] : c.bracket_terms(a, b)) z[cc] += x[a] * y[b] * f;
            }
        }
        return z;
    };

    SparseVec total;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    const auto trees = enumerate_trees(n, 20);
    do {
        int ksign = koszul_sign(par, perm);
        for (const auto& tree : trees) {
            std::vector<PureTensor> val(tree.nodes.size());
            bool dead = false;
            for (int id = 0; id < static_cast<int>(tree.nodes.size()) && !dead; ++id) {
                const auto& node = tree.nodes[id];
                if (node.leaf >= 0) {
                    val[id] = leaves[perm[node.leaf]];
                    continue;
                }
                const PureTensor& A = val[node.left];
                const PureTensor& B = val[node.right];
                PureTensor r;
                r.form = mv_wedge(A.form, B.form);
                r.lie = lie_bracket(A.lie, B.lie);
                r.lie_degree = A.lie_degree + B.lie_degree;
                int alpha = A.form.degree(), beta = B.form.degree();
                // shifted l2 on pure tensors: (-1)^{|a|} (-1)^{|x||β|}
                int sg = sign_of(alpha + A.lie_degree) * sign_of(A.lie_degree * beta);
                if (sg < 0) r.form *= -1;
                if (id != tree.root()) r.form = s.apply_k(r.form);
                if (r.zero()) dead = true;
                val[id] = std::move(r);
            }
            if (dead) continue;
            const PureTensor& top = val[tree.root()];
            auto pw = s.apply_p(top.form);
            for (int w = 0; w < static_cast<int>(pw.size()); ++w) {
                if (is_zero(pw[w])) continue;
                for (int a = 0; a < G; ++a)
                    if (!is_zero(top.lie[a])) add_to(total, t.w_index(w, a), pw[w] * top.lie[a] * ksign);
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    Scalar norm(1, 1);
    for (int i = 1; i < n; ++i) norm *= 2;
    for (auto& [i, v] : total) v /= norm;
    return total;
}

// ------------------------------------------------------------------ C∞

std::vector<Scalar> c_transfer_forms(const SdrData& s, const std::vector<MultiVector>& inputs) {
    const int n = static_cast<int>(inputs.size());
    if (n < 1) throw InputError("c_transfer: empty input");
    for (const auto& a : inputs)
        if (a.is_zero()) return std::vector<Scalar>(s.w_total(), 0);
    if (n == 1) return s.apply_p(s.ce->d(inputs[0]));

    std::vector<int> deg(n);
    for (int i = 0; i < n; ++i) deg[i] = inputs[i].degree();

    // hp[i][j] is h p_{j-i} on inputs i..j-1, with h = -k and h p_1 = -e
    std::vector<std::vector<MultiVector>> hp(n, std::vector<MultiVector>(n + 1));
    for (int i = 0; i < n; ++i) hp[i][i + 1] = -1 * inputs[i];
    for (int len = 2; len <= n; ++len) {
        for (int i = 0; i + len <= n; ++i) {
            if (len == n && i != 0) break;
            int j = i + len;
            MultiVector acc(s.ce->dim());
            int left_deg = 0;
            for (int k = 1; k < len; ++k) {
                left_deg += deg[i + k - 1];
                int l = len - k;
                const MultiVector& L = hp[i][i + k];
                const MultiVector& R = hp[i + k][j];
                if (L.is_zero() || R.is_zero()) continue;
                int sg = sign_of(k * (l + 1)) * sign_of((1 - l) * left_deg);
                MultiVector prod = mv_wedge(L, R);
                if (sg < 0) prod *= -1;
                acc += prod;
            }
            if (len == n) return s.apply_p(acc);
            hp[i][j] = -1 * s.apply_k(acc);
        }
    }
    return std::vector<Scalar>(s.w_total(), 0);
}

std::vector<Scalar> c_transfer(const SdrData& s, const std::vector<int>& inputs) {
    std::vector<MultiVector> forms;
    for (int w : inputs) {
        if (w < 0 || w >= s.w_total()) throw InputError("c_transfer: W index out of range");
        forms.push_back(s.e_of(w));
    }
    if (inputs.size() == 1) {
        // m1 = d_W directly
        auto [deg, pos] = s.w_locate(inputs[0]);
        std::vector<Scalar> out(s.w_total(), 0);
        if (deg + 1 < static_cast<int>(s.w_dims.size())) {
            const Matrix& b = s.dw.block(deg);
            for (int r = 0; r < b.rows(); ++r) out[s.w_offset(deg + 1) + r] = b(r, pos);
        }
        return out;
    }
    return c_transfer_forms(s, forms);
}

TreeValue evaluate_c_tree(const SdrData& s, const TransferTree& tree, const std::vector<MultiVector>& inputs) {
    if (static_cast<int>(inputs.size()) != tree.leaves) throw InputError("evaluate_c_tree: wrong number of inputs");
    TreeValue out;
    std::vector<MultiVector> val(tree.nodes.size());
    for (int id = 0; id < static_cast<int>(tree.nodes.size()); ++id) {
        const auto& node = tree.nodes[id];
        if (node.leaf >= 0) {
            val[id] = inputs[node.leaf];
            continue;
        }
        val[id] = mv_wedge(val[node.left], val[node.right]);
        if (id != tree.root()) {
            val[id] = s.apply_k(val[id]);
            if (val[id].is_zero()) out.zero_edges.push_back(id);
        }
    }
    out.value = val[tree.root()];
    return out;
}

// ------------------------------------------------------------------ structures

bool TransferredStructure::complete(int n) const {
    auto it = status.find(n);
    return it != status.end() && !it->second.truncated;
}

SparseVec TransferredStructure::apply(const std::vector<int>& tuple) const {
    const int n = static_cast<int>(tuple.size());
    auto op = ops.find(n);
    if (op == ops.end()) return {};
    if (kind == AlgebraKind::CInfinity) {
        auto it = op->second.find(tuple);
        return it == op->second.end() ? SparseVec{} : it->second;
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return tuple[a] < tuple[b]; });
    std::vector<int> sorted(n), par(n);
    for (int i = 0; i < n; ++i) {
        sorted[i] = tuple[order[i]];
        par[i] = parity(degrees[tuple[i]]);
    }
    auto it = op->second.find(sorted);
    if (it == op->second.end()) return {};
    SparseVec r = it->second;
    if (koszul_sign(par, order) < 0)
        for (auto& [i, c] : r) c = -c;
    return r;
}

SparseVec TransferredStructure::apply(const std::vector<SparseVec>& args) const {
    SparseVec out;
    std::vector<int> tuple(args.size());
    std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t pos, const Scalar& coeff) {
        if (pos == args.size()) {
            add_scaled(out, apply(tuple), coeff);
            return;
        }
        for (const auto& [i, c] : args[pos]) {
            tuple[pos] = i;
            rec(pos + 1, coeff * c);
        }
    };
    rec(0, Scalar(1));
    return out;
}

std::string TransferredStructure::format(const SparseVec& v) const {
    if (v.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [i, c] : v) {
        std::string cs = format_scalar(c);
        if (first) {
            out << (cs == "1" ? "" : cs == "-1" ? "-" : cs + " ");
        } else if (sgn(c) < 0) {
            std::string a = format_scalar(-c);
            out << " - " << (a == "1" ? "" : a + " ");
        } else {
            out << " + " << (cs == "1" ? "" : cs + " ");
        }
        out << names[i];
        first = false;
    }
    return out.str();
}

namespace {

std::string tuple_text(const std::string& op, const std::vector<int>& tuple, const std::vector<std::string>& names) {
    std::string s = op + std::to_string(tuple.size()) + "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) s += (i ? ", " : "") + names[tuple[i]];
    return s + ")";
}

// Shared driver: enumerate tuples, skip ones whose output degree is empty,
// store nonzero values and keep the per-arity status.
template <class Enumerate, class Eval, class Skip>
void fill_arity(TransferredStructure& st, int n, std::int64_t total, std::int64_t trees, const Budget& budget,
                const std::string& op, Enumerate&& enumerate, Skip&& skip, Eval&& eval) {
    ArityStatus status;
    status.arity = n;
    status.tuples_total = total;
    status.trees = trees;
    auto start = std::chrono::steady_clock::now();
    std::int64_t allowed = total;
    if (n > budget.arity_cap) {
        allowed = 0;
    } else if (sat_mul(total, trees) > budget.evaluations) {
        allowed = trees > 0 ? budget.evaluations / trees : 0;
    }
    status.truncated = allowed < total;
    auto& table = st.ops[n];
    std::int64_t done = 0;
    enumerate([&](const std::vector<int>& tuple) {
        if (done >= allowed) return false;
        ++done;
        if (skip(tuple)) return true;
        SparseVec v = eval(tuple);
        if (v.empty()) return true;
        Scalar m = max_abs_numerator(v);
        if (status.witness.empty()) {
            status.witness = tuple;
            status.witness_value = v;
            status.witness_text = tuple_text(op, tuple, st.names) + " = " + st.format(v);
        }
        status.max_numerator = std::max(status.max_numerator, m);
        table.emplace(tuple, std::move(v));
        return true;
    });
    status.tuples_done = done;
    status.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    st.status[n] = status;
}

}  // namespace

TransferredStructure transfer_l_infinity(const TensorSdr& t, int max_arity, const Budget& budget, int min_arity,
                                         int edge_sign) {
    TransferredStructure st;
    st.kind = AlgebraKind::LInfinity;
    st.dim = t.size();
    std::set<int> out_degrees;
    std::vector<int> par(st.dim);
    for (int i = 0; i < st.dim; ++i) {
        st.degrees.push_back(t.w_ghost_degree(i));
        st.names.push_back(t.w_name(i));
        out_degrees.insert(st.degrees.back());
        par[i] = parity(st.degrees.back());
    }
    // arity one: l1 = -d_W ⊗ 1
    {
        ArityStatus s1;
        s1.arity = 1;
        s1.tuples_total = s1.tuples_done = st.dim;
        s1.trees = 1;
        for (int i = 0; i < st.dim; ++i) {
            SparseVec v = t.l1_w(SparseVec{{i, Scalar(1)}});
            if (v.empty()) continue;
            s1.max_numerator = std::max(s1.max_numerator, max_abs_numerator(v));
            st.ops[1].emplace(std::vector<int>{i}, std::move(v));
        }
        st.status[1] = s1;
    }
    for (int n = std::max(2, min_arity); n <= max_arity; ++n) {
        fill_arity(
            st, n, multiset_count(st.dim, n), labelled_tree_count(n), budget, "l",
            [&](auto&& f) { for_each_multiset(st.dim, n, f); },
            [&](const std::vector<int>& tuple) {
                if (odd_repeat(tuple, par)) return true;
                int gh = 1;
                for (int i : tuple) gh += st.degrees[i];
                return out_degrees.count(gh) == 0;
            },
            [&](const std::vector<int>& tuple) { return transferred_bracket(t, tuple, edge_sign); });
    }
    return st;
}

TransferredStructure transfer_c_infinity(const SdrData& s, int max_arity, const Budget& budget, int min_arity) {
    TransferredStructure st;
    st.kind = AlgebraKind::CInfinity;
    st.dim = s.w_total();
    for (int i = 0; i < st.dim; ++i) {
        st.degrees.push_back(s.w_locate(i).first);
        st.names.push_back(s.w_name(i));
    }
    {
        ArityStatus s1;
        s1.arity = 1;
        s1.tuples_total = s1.tuples_done = st.dim;
        s1.trees = 1;
        for (int i = 0; i < st.dim; ++i) {
            SparseVec v = dense_to_sparse(c_transfer(s, {i}));
            if (v.empty()) continue;
            s1.max_numerator = std::max(s1.max_numerator, max_abs_numerator(v));
            st.ops[1].emplace(std::vector<int>{i}, std::move(v));
        }
        st.status[1] = s1;
    }
    const int top = static_cast<int>(s.w_dims.size()) - 1;
    for (int n = std::max(2, min_arity); n <= max_arity; ++n) {
        fill_arity(
            st, n, tuple_count(st.dim, n), catalan(n - 1), budget, "m",
            [&](auto&& f) { for_each_tuple(st.dim, n, f); },
            [&](const std::vector<int>& tuple) {
                int deg = 2 - n;
                for (int i : tuple) deg += st.degrees[i];
                return deg < 0 || deg > top || s.w_dims[deg] == 0;
            },
            [&](const std::vector<int>& tuple) { return dense_to_sparse(c_transfer(s, tuple)); });
    }
    return st;
}

bool VanishingReport::certified_zero() const {
    for (const auto& a : arities)
        if (a.truncated || !is_zero(a.max_numerator)) return false;
    return true;
}

bool VanishingReport::truncated() const {
    for (const auto& a : arities)
        if (a.truncated) return true;
    return false;
}

json VanishingReport::to_json(bool with_timing) const {
    json arr = json::array();
    for (const auto& a : arities) {
        bool zero = is_zero(a.max_numerator);
        json j{{"arity", a.arity},
               {"tuples_total", a.tuples_total},
               {"tuples_evaluated", a.tuples_done},
               {"trees", a.trees},
               {"truncated", a.truncated},
               {"status", !zero ? "nonzero" : a.truncated ? "zero-so-far" : "zero"},
               {"max_abs_numerator", format_scalar(a.max_numerator)}};
        if (!zero) j["witness"] = a.witness_text;
        if (with_timing) j["seconds"] = a.seconds;
        arr.push_back(j);
    }
    return json{{"certified_zero", certified_zero()}, {"truncated", truncated()}, {"arities", arr}};
}

VanishingReport vanishing_report(const TransferredStructure& st, int min_arity, int max_arity) {
    VanishingReport r;
    for (int n = min_arity; n <= max_arity; ++n) {
        auto it = st.status.find(n);
        if (it == st.status.end()) {
            ArityStatus missing;
            missing.arity = n;
            missing.truncated = true;
            r.arities.push_back(missing);
        } else {
            r.arities.push_back(it->second);
        }
    }
    return r;
}

// ------------------------------------------------------------------ identities

Report shuffle_check(const TransferredStructure& st, int n) {
    if (st.kind != AlgebraKind::CInfinity) throw InputError("shuffle_check needs a C-infinity structure");
    Report r;
    if (!st.complete(n)) {
        r.add("shuffle identities, arity " + std::to_string(n), false, "arity " + std::to_string(n) + " not computed");
        return r;
    }
    for (int p = 1; p < n; ++p) {
        int q = n - p;
        std::string name = "(" + std::to_string(p) + "," + std::to_string(q) + ") shuffle identity";
        std::string witness;
        // all (p,q)-shuffles as position masks for the first block
        std::vector<unsigned> shuffles;
        for (unsigned m = 0; m < (1u << n); ++m)
            if (mask_popcount(m) == p) shuffles.push_back(m);
        for_each_tuple(st.dim, n, [&](const std::vector<int>& tuple) {
            SparseVec acc;
            for (unsigned m : shuffles) {
                // seq[pos] = element placed at pos; order[pos] = its original index
                std::vector<int> order(n), seq(n), par(n);
                int ia = 0, ib = p;
                for (int pos = 0; pos < n; ++pos) order[pos] = (m >> pos & 1u) ? ia++ : ib++;
                for (int i = 0; i < n; ++i) par[i] = parity(st.degrees[tuple[i]]);
                for (int pos = 0; pos < n; ++pos) seq[pos] = tuple[order[pos]];
                add_scaled(acc, st.apply(seq), Scalar(permutation_sign(order) * koszul_sign(par, order)));
            }
            if (!acc.empty()) {
                witness = tuple_text("sh", tuple, st.names) + " = " + st.format(acc);
                return false;
            }
            return true;
        });
        r.add(name, witness.empty(), witness);
    }
    return r;
}

Report linf_identities(const TransferredStructure& st, int max_total) {
    if (st.kind != AlgebraKind::LInfinity) throw InputError("linf_identities needs an L-infinity structure");
    Report r;
    std::set<int> out_degrees(st.degrees.begin(), st.degrees.end());
    std::vector<int> par(st.dim);
    for (int i = 0; i < st.dim; ++i) par[i] = parity(st.degrees[i]);
    for (int n = 1; n <= max_total; ++n) {
        std::string name = "generalized Jacobi, total arity " + std::to_string(n);
        bool ready = true;
        for (int i = 1; i <= n; ++i) ready = ready && st.complete(i);
        if (!ready) {
            r.add(name, false, "needed operations up to arity " + std::to_string(n) + " are incomplete");
            continue;
        }
        std::string witness;
        std::int64_t checked = 0;
        for_each_multiset(st.dim, n, [&](const std::vector<int>& tuple) {
            if (odd_repeat(tuple, par)) return true;
            int gh = 2;
            for (int i : tuple) gh += st.degrees[i];
            if (!out_degrees.count(gh)) return true;
            ++checked;
            std::vector<int> tp(n);
            for (int i = 0; i < n; ++i) tp[i] = par[tuple[i]];
            SparseVec acc;
            for (unsigned A = 1; A < (1u << n); ++A) {
                std::vector<int> inner, outer_rest;
                for (int i = 0; i < n; ++i) (A >> i & 1u ? inner : outer_rest).push_back(tuple[i]);
                SparseVec in = st.apply(inner);
                if (in.empty()) continue;
                std::vector<SparseVec> args{in};
                for (int w : outer_rest) args.push_back(SparseVec{{w, Scalar(1)}});
                add_scaled(acc, st.apply(args), Scalar(split_sign(tp, A, n)));
            }
            if (!acc.empty()) {
                witness = tuple_text("J", tuple, st.names) + " = " + st.format(acc);
                return false;
            }
            return true;
        });
        r.add(name, witness.empty(), witness);
        r.notes.push_back(name + ": " + std::to_string(checked) + " multisets");
    }
    return r;
}

Report ainf_identities(const TransferredStructure& st, int max_total) {
    if (st.kind != AlgebraKind::CInfinity) throw InputError("ainf_identities needs a C-infinity structure");
    Report r;
    for (int n = 1; n <= max_total; ++n) {
        std::string name = "Stasheff identity, total arity " + std::to_string(n);
        bool ready = true;
        for (int i = 1; i <= n; ++i) ready = ready && st.complete(i);
        if (!ready) {
            r.add(name, false, "needed operations up to arity " + std::to_string(n) + " are incomplete");
            continue;
        }
        std::string witness;
        for_each_tuple(st.dim, n, [&](const std::vector<int>& tuple) {
            SparseVec acc;
            for (int s = 1; s <= n; ++s)
                for (int rr = 0; rr + s <= n; ++rr) {
                    int tt = n - rr - s;
                    int left = 0;
                    for (int i = 0; i < rr; ++i) left += st.degrees[tuple[i]];
                    int sg = sign_of(rr + s * tt) * sign_of(s * left);
                    SparseVec inner = st.apply(std::vector<int>(tuple.begin() + rr, tuple.begin() + rr + s));
                    if (inner.empty()) continue;
                    std::vector<SparseVec> args;
                    for (int i = 0; i < rr; ++i) args.push_back(SparseVec{{tuple[i], Scalar(1)}});
                    args.push_back(inner);
                    for (int i = rr + s; i < n; ++i) args.push_back(SparseVec{{tuple[i], Scalar(1)}});
                    add_scaled(acc, st.apply(args), Scalar(sg));
                }
            if (!acc.empty()) {
                witness = tuple_text("A", tuple, st.names) + " = " + st.format(acc);
                return false;
            }
            return true;
        });
        r.add(name, witness.empty(), witness);
    }
    return r;
}

Report c_vs_l_consistency(const SdrData& s, const TensorSdr& t, int max_arity) {
    if (&t.base().ce->basis() != &s.ce->basis() && t.base().w_total() != s.w_total())
        throw InputError("c_vs_l_consistency: scalar and tensor retracts differ");
    Report r;
    const int N = t.size();
    const int G = t.ctx().lie_dim();
    auto name = [&](int i) { return t.w_name(i); };

    std::string witness;
    for (int u = 0; u < N && witness.empty(); ++u)
        for (int v = u; v < N && witness.empty(); ++v) {
            SparseVec l2 = transferred_bracket(t, {u, v});
            int w = u / G, x = u % G, w2 = v / G, y = v % G;
            int dw = s.w_locate(w).first, dx = t.ctx().lie().degree(x), dw2 = s.w_locate(w2).first;
            int sg = sign_of(dw + dx) * sign_of(dx * dw2);
            auto m2 = c_transfer(s, {w, w2});
            SparseVec expect;
            for (int z = 0; z < s.w_total(); ++z) {
                if (is_zero(m2[z])) continue;
                for (const auto& [c, f] : t.ctx().bracket_terms(x, y)) add_to(expect, t.w_index(z, c), m2[z] * f * sg);
            }
            if (l2 != expect) witness = "l2(" + name(u) + ", " + name(v) + ") differs from m2 ⊗ [,]";
        }
    r.add("l2 = m2 ⊗ [,]", witness.empty(), witness);

    for (int n = 3; n <= max_arity; ++n) {
        witness.clear();
        for_each_multiset(N, n, [&](const std::vector<int>& tuple) {
            SparseVec direct = transferred_bracket(t, tuple);
            SparseVec factored = transferred_bracket_tensor_trees(t, tuple);
            if (direct != factored) {
                witness = "arity " + std::to_string(n) + " differs at (";
                for (std::size_t i = 0; i < tuple.size(); ++i) witness += (i ? ", " : "") + name(tuple[i]);
                witness += ")";
                return false;
            }
            return true;
        });
        r.add("l" + std::to_string(n) + " = tree-wise m ⊗ Lie", witness.empty(), witness);
    }
    return r;
}

// ------------------------------------------------------------------ HPL

namespace {

// Graded-symmetric word arithmetic over a letter alphabet with given parities.
class WordAlgebra {
public:
    explicit WordAlgebra(std::vector<int> par) : par_(std::move(par)) {}

    // Adds coeff * (letters in the given order) after sorting with its sign.
    void add(SymVec& out, std::vector<int> letters, const Scalar& coeff) const {
        const int q = static_cast<int>(letters.size());
        std::vector<int> order(q);
        for (int i = 0; i < q; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return letters[a] < letters[b]; });
        std::vector<int> lp(q);
        Word w(q);
        for (int i = 0; i < q; ++i) {
            lp[i] = par_[letters[i]];
            w[i] = letters[order[i]];
        }
        if (odd_repeat(w, par_)) return;
        Scalar c = coeff;
        if (koszul_sign(lp, order) < 0) c = -c;
        auto [it, inserted] = out.emplace(std::move(w), c);
        if (!inserted) {
            it->second += c;
            if (is_zero(it->second)) out.erase(it);
        }
    }

    // Sum of parities of letters[0..a)
    int prefix(const Word& w, int a) const {
        int s = 0;
        for (int i = 0; i < a; ++i) s += par_[w[i]];
        return s;
    }
    int parity_of(int letter) const { return par_[letter]; }

private:
    std::vector<int> par_;
};

void add_sym(SymVec& acc, const SymVec& v, const Scalar& c = 1) {
    for (const auto& [w, x] : v) {
        auto [it, ins] = acc.emplace(w, x * c);
        if (!ins) {
            it->second += x * c;
            if (is_zero(it->second)) acc.erase(it);
        }
    }
}

class HplEngine {
public:
    explicit HplEngine(const TensorSdr& t)
        : t_(t), ctx_(t.ctx()), V_(t.ctx().size()), W_(t.size()), vpar_(V_), wpar_(W_), valg_({}), walg_({}) {
        for (int i = 0; i < V_; ++i) vpar_[i] = parity(ctx_.ghost_degree(i));
        for (int i = 0; i < W_; ++i) wpar_[i] = parity(t.w_ghost_degree(i));
        valg_ = WordAlgebra(vpar_);
        walg_ = WordAlgebra(wpar_);
        l1_.resize(V_);
        h_.resize(V_);
        ep_.resize(V_);
        p_.resize(V_);
        for (int i = 0; i < V_; ++i) {
            DglaElement b = DglaElement::basis(ctx_, i);
            l1_[i] = shifted_l1(b).terms;
            h_[i] = t.h(b).terms;
            p_[i] = t.p(b);
            ep_[i] = t.e(p_[i]).terms;
        }
        for (int w = 0; w < W_; ++w) e_.push_back(t.e(w).terms);
    }

    int V() const { return V_; }
    int W() const { return W_; }
    const std::vector<int>& vpar() const { return vpar_; }
    const std::vector<int>& wpar() const { return wpar_; }

    const SparseVec& l2(int a, int b) {
        auto key = std::make_pair(a, b);
        auto it = l2_.find(key);
        if (it != l2_.end()) return it->second;
        SparseVec v = shifted_l2(DglaElement::basis(ctx_, a), DglaElement::basis(ctx_, b)).terms;
        return l2_.emplace(key, std::move(v)).first->second;
    }

    // Coderivation extending l1.
    SymVec Q1(const SymVec& x) {
        SymVec out;
        for (const auto& [w, c] : x) {
            const int q = static_cast<int>(w.size());
            for (int a = 0; a < q; ++a) {
                Scalar sc = sign_of(valg_.prefix(w, a)) * c;
                for (const auto& [z, zc] : l1_[w[a]]) {
                    Word nw = w;
                    nw[a] = z;
                    valg_.add(out, nw, sc * zc);
                }
            }
        }
        return out;
    }

    // Coderivation extending l2: lowers word length by one.
    SymVec delta(const SymVec& x) {
        SymVec out;
        for (const auto& [w, c] : x) {
            const int q = static_cast<int>(w.size());
            for (int a = 0; a < q; ++a)
                for (int b = a + 1; b < q; ++b) {
                    int s = vpar_[w[a]] * valg_.prefix(w, a) + vpar_[w[b]] * (valg_.prefix(w, b) - vpar_[w[a]]);
                    const SparseVec& br = l2(w[a], w[b]);
                    if (br.empty()) continue;
                    Word rest;
                    for (int i = 0; i < q; ++i)
                        if (i != a && i != b) rest.push_back(w[i]);
                    for (const auto& [z, zc] : br) {
                        Word nw{z};
                        nw.insert(nw.end(), rest.begin(), rest.end());
                        valg_.add(out, nw, sign_of(s) * c * zc);
                    }
                }
        }
        return out;
    }

    // Symmetrized tensor-trick homotopy.
    SymVec K(const SymVec& x) {
        SymVec out;
        for (const auto& [w, c] : x) {
            const int q = static_cast<int>(w.size());
            for (int a = 0; a < q; ++a) {
                if (h_[w[a]].empty()) continue;
                int s = vpar_[w[a]] * valg_.prefix(w, a);
                std::vector<int> rest;
                for (int i = 0; i < q; ++i)
                    if (i != a) rest.push_back(w[i]);
                const int r = q - 1;
                for (unsigned L = 0; L < (1u << r); ++L) {
                    int l = mask_popcount(L);
                    Scalar weight(1, q * binom(r, l));
                    weight.canonicalize();
                    Scalar base = sign_of(s) * c * weight;
                    // letters: h(w_a) first, then rest with ep on positions outside L
                    std::vector<const SparseVec*> slots;
                    for (int i = 0; i < r; ++i) slots.push_back((L >> i & 1u) ? nullptr : &ep_[rest[i]]);
                    for (const auto& [z, zc] : h_[w[a]]) {
                        Word seq{z};
                        expand(out, seq, rest, slots, 0, base * zc);
                    }
                }
            }
        }
        return out;
    }

    SymVec embed(const SymVec& wx) {  // 𝓔: W words -> V words
        SymVec out;
        for (const auto& [w, c] : wx) {
            std::vector<const SparseVec*> slots;
            for (int x : w) slots.push_back(&e_[x]);
            Word seq;
            expand(out, seq, w, slots, 0, c);
        }
        return out;
    }

    SymVec project(const SymVec& vx) {  // Π: V words -> W words
        SymVec out;
        for (const auto& [w, c] : vx) {
            std::function<void(std::size_t, Word&, Scalar)> rec = [&](std::size_t i, Word& seq, Scalar cc) {
                if (i == w.size()) {
                    walg_.add(out, seq, cc);
                    return;
                }
                for (const auto& [z, zc] : p_[w[i]]) {
                    seq.push_back(z);
                    rec(i + 1, seq, cc * zc);
                    seq.pop_back();
                }
            };
            Word seq;
            rec(0, seq, c);
        }
        return out;
    }

private:
    static int binom(int n, int k) {
        int r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    // Appends letters of `src`, replacing slot i by the expansion slots[i] when present.
    void expand(SymVec& out, Word& seq, const Word& src, const std::vector<const SparseVec*>& slots, std::size_t i,
                const Scalar& c) {
        if (i == src.size()) {
            valg_.add(out, seq, c);
            return;
        }
        if (slots[i] == nullptr) {
            seq.push_back(src[i]);
            expand(out, seq, src, slots, i + 1, c);
            seq.pop_back();
            return;
        }
        for (const auto& [z, zc] : *slots[i]) {
            seq.push_back(z);
            expand(out, seq, src, slots, i + 1, c * zc);
            seq.pop_back();
        }
    }

    const TensorSdr& t_;
    const DglaContext& ctx_;
    int V_, W_;
    std::vector<int> vpar_, wpar_;
    WordAlgebra valg_, walg_;
    std::vector<SparseVec> l1_, h_, ep_, p_, e_;
    std::map<std::pair<int, int>, SparseVec> l2_;
};

std::string word_text(const Word& w, const std::function<std::string(int)>& name) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "⊙" : "") + name(w[i]);
    return w.empty() ? "1" : s;
}

}  // namespace

HplResult hpl_truncated(const TensorSdr& t, int max_word, std::int64_t block_cap) {
    if (max_word < 0) throw InputError("hpl_truncated: negative word cap");
    HplResult res;
    res.max_word = max_word;
    if (max_word == 0) return res;
    HplEngine eng(t);
    const DglaContext& ctx = t.ctx();
    auto vname = [&](int i) { return ctx.name(i); };

    std::int64_t words = 0;
    for (int q = 1; q <= max_word; ++q) words = std::min(kSaturated - 1, words + multiset_count(eng.V(), q));
    if (words > block_cap)
        throw BudgetExceeded("hpl_truncated: " + std::to_string(words) + " words exceed the block cap " +
                             std::to_string(block_cap));

    // (Q1 + δ)^2 = 0 on every word up to max_word
    for (int q = 1; q <= max_word && res.square_zero; ++q) {
        for_each_multiset(eng.V(), q, [&](const std::vector<int>& w) {
            if (odd_repeat(w, eng.vpar())) return true;
            ++res.words_checked;
            SymVec x{{w, Scalar(1)}};
            SymVec once = eng.Q1(x);
            add_sym(once, eng.delta(x));
            SymVec twice = eng.Q1(once);
            add_sym(twice, eng.delta(once));
            if (!twice.empty()) {
                res.square_zero = false;
                res.square_witness = "(Q1 + δ)^2 on " + word_text(w, vname) + " is nonzero";
                return false;
            }
            return true;
        });
    }

    // tensor trick data on words of length <= 3
    const int tt_cap = std::min(max_word, 3);
    for (int q = 1; q <= tt_cap && res.tensor_trick_ok; ++q) {
        for_each_multiset(eng.V(), q, [&](const std::vector<int>& w) {
            if (odd_repeat(w, eng.vpar())) return true;
            SymVec x{{w, Scalar(1)}};
            SymVec lhs = eng.embed(eng.project(x));
            add_sym(lhs, x, Scalar(-1));
            SymVec rhs = eng.Q1(eng.K(x));
            add_sym(rhs, eng.K(eng.Q1(x)));
            std::string fail;
            if (lhs != rhs)
                fail = "𝓔Π - 1 ≠ Q1 K + K Q1";
            else if (!eng.project(eng.K(x)).empty())
                fail = "ΠK ≠ 0";
            else if (!eng.K(eng.K(x)).empty())
                fail = "KK ≠ 0";
            if (!fail.empty()) {
                res.tensor_trick_ok = false;
                res.tensor_trick_witness = fail + " on " + word_text(w, vname);
                return false;
            }
            return true;
        });
        for_each_multiset(eng.W(), q, [&](const std::vector<int>& w) {
            if (!res.tensor_trick_ok) return false;
            if (odd_repeat(w, eng.wpar())) return true;
            if (!eng.K(eng.embed(SymVec{{w, Scalar(1)}})).empty()) {
                res.tensor_trick_ok = false;
                res.tensor_trick_witness = "K𝓔 ≠ 0 on " + word_text(w, [&](int i) { return t.w_name(i); });
                return false;
            }
            return true;
        });
    }

    // perturbed reduced codifferential, length-one component
    std::set<int> out_degrees;
    for (int i = 0; i < eng.W(); ++i) out_degrees.insert(t.w_ghost_degree(i));
    for (int n = 1; n <= max_word; ++n) {
        auto& table = res.brackets[n];
        for_each_multiset(eng.W(), n, [&](const std::vector<int>& w) {
            if (odd_repeat(w, eng.wpar())) return true;
            int gh = 1;
            for (int i : w) gh += t.w_ghost_degree(i);
            if (!out_degrees.count(gh)) return true;
            SymVec x = eng.embed(SymVec{{w, Scalar(1)}});
            if (n == 1) {
                x = eng.Q1(x);
            } else {
                x = eng.delta(x);
                for (int i = 0; i < n - 2 && !x.empty(); ++i) x = eng.delta(eng.K(x));
            }
            SymVec out = eng.project(x);
            SparseVec v;
            for (const auto& [word, c] : out) {
                if (word.size() != 1) throw MathError("hpl_truncated: length mismatch in the reduced codifferential");
                add_to(v, word[0], c);
            }
            if (!v.empty()) table.emplace(w, std::move(v));
            return true;
        });
    }
    return res;
}

Report hpl_compare(const HplResult& hpl, const TransferredStructure& tree) {
    Report r;
    r.add("(Q1 + δ)^2 = 0 up to word length " + std::to_string(hpl.max_word), hpl.square_zero, hpl.square_witness);
    r.add("tensor trick data is an SDR", hpl.tensor_trick_ok, hpl.tensor_trick_witness);
    for (int n = 1; n <= hpl.max_word; ++n) {
        std::string name = "HPL = tree, arity " + std::to_string(n);
        if (!tree.complete(n)) {
            r.add(name, false, "tree arity " + std::to_string(n) + " incomplete");
            continue;
        }
        std::string witness;
        const auto& h = hpl.brackets.at(n);
        auto it = tree.ops.find(n);
        static const std::map<std::vector<int>, SparseVec> empty;
        const auto& tr = it == tree.ops.end() ? empty : it->second;
        std::set<std::vector<int>> keys;
        for (const auto& [k, v] : h) keys.insert(k);
        for (const auto& [k, v] : tr) keys.insert(k);
        for (const auto& k : keys) {
            auto a = h.find(k);
            auto b = tr.find(k);
            SparseVec va = a == h.end() ? SparseVec{} : a->second;
            SparseVec vb = b == tr.end() ? SparseVec{} : b->second;
            if (va != vb) {
                witness = tuple_text("l", k, tree.names) + ": HPL " + tree.format(va) + ", tree " + tree.format(vb);
                break;
            }
        }
        r.add(name, witness.empty(), witness);
    }
    return r;
}

// ------------------------------------------------------------------ DOT

std::string emit_tree_diagram(const TransferTree& tree, const TreeDecorations& deco) {
    std::ostringstream out;
    out << "digraph transfer_tree {\n";
    out << "  rankdir=BT;\n";
    if (!deco.title.empty()) out << "  label=\"" << deco.title << "\";\n";
    std::set<int> dashed(deco.zero_edges.begin(), deco.zero_edges.end());
    for (int id = 0; id < static_cast<int>(tree.nodes.size()); ++id) {
        const auto& node = tree.nodes[id];
        if (node.leaf >= 0) {
            std::string label = node.leaf < static_cast<int>(deco.leaf_labels.size())
                                    ? deco.leaf_labels[node.leaf]
                                    : "w" + std::to_string(node.leaf + 1);
            out << "  n" << id << " [label=\"" << label << "\", shape=plaintext];\n";
        } else if (id == tree.root()) {
            out << "  n" << id << " [label=\"p ∘ " << deco.vertex_label << "\", shape=box];\n";
        } else {
            out << "  n" << id << " [label=\"" << deco.vertex_label << "\", shape=circle];\n";
        }
    }
    for (int id = 0; id < static_cast<int>(tree.nodes.size()); ++id) {
        const auto& node = tree.nodes[id];
        if (node.leaf >= 0) continue;
        for (int child : {node.left, node.right}) {
            out << "  n" << child << " -> n" << id;
            if (tree.is_leaf(child))
                out << " [label=\"e\"]";
            else if (dashed.count(child))
                out << " [label=\"k\", style=dashed]";
            else
                out << " [label=\"k\"]";
            out << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace hptbv
