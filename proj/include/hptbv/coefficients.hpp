#pragma once

#include "hptbv/sdr.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace hptbv {

/// Ambient of E_g = (Λs* ⊗ g)[1]. A basis vector is (form mask, g index) with
/// flat index mask * dim g + a. Degrees are kept as integers; the [1] shift is
/// the explicit offset `shift`, never baked into names.
class DglaContext {
public:
    DglaContext(std::shared_ptr<const CeComplex> ce, LieAlgebra g);

    static constexpr int shift = 1;

    const CeComplex& ce() const { return *ce_; }
    const std::shared_ptr<const CeComplex>& ce_ptr() const { return ce_; }
    const LieAlgebra& lie() const { return g_; }
    int form_dim() const { return ce_->dim(); }
    int lie_dim() const { return g_.dim(); }
    int size() const { return (1 << form_dim()) * lie_dim(); }

    int index(Mask m, int a) const { return static_cast<int>(m) * lie_dim() + a; }
    Mask mask_of(int idx) const { return static_cast<Mask>(idx / lie_dim()); }
    int lie_of(int idx) const { return idx % lie_dim(); }

    /// Unshifted degree in Λs* ⊗ g: form degree + internal degree.
    int degree(int idx) const { return form_degree(mask_of(idx)) + g_.degree(lie_of(idx)); }
    /// gh = form degree - 1 + internal degree.
    int ghost_degree(int idx) const { return degree(idx) - shift; }
    std::string name(int idx) const;

    /// (2 - dim s) + pairing degree of g; a BV pairing needs -1.
    int bv_pairing_degree() const;

    /// Structure constants as nonzero triples per (a, b): [t_a, t_b] = sum c t_c.
    const std::vector<std::pair<int, Scalar>>& bracket_terms(int a, int b) const {
        return brackets_[a * lie_dim() + b];
    }

private:
    std::shared_ptr<const CeComplex> ce_;
    LieAlgebra g_;
    std::vector<std::vector<std::pair<int, Scalar>>> brackets_;
};

/// Sparse element of E_g keyed by DglaContext flat index.
struct DglaElement {
    const DglaContext* ctx = nullptr;
    SparseVec terms;

    DglaElement() = default;
    explicit DglaElement(const DglaContext& c) : ctx(&c) {}
    static DglaElement basis(const DglaContext& c, int idx, const Scalar& coeff = 1);
    static DglaElement tensor(const DglaContext& c, const MultiVector& form, int a);

    bool is_zero() const { return terms.empty(); }
    void add(int idx, const Scalar& c) { add_to(terms, idx, c); }
    DglaElement& operator+=(const DglaElement& o);
    DglaElement& operator*=(const Scalar& s);
    bool operator==(const DglaElement& o) const { return ctx == o.ctx && terms == o.terms; }
    std::string to_string() const;
};

DglaElement operator+(DglaElement a, const DglaElement& b);
DglaElement operator-(DglaElement a, const DglaElement& b);
DglaElement operator*(const Scalar& s, DglaElement a);

/// [α⊗x, β⊗y] = (-1)^{|x||β|} (α∧β) ⊗ [x,y] on the unshifted Λs* ⊗ g.
DglaElement dgla_bracket(const DglaElement& a, const DglaElement& b);
/// (d⊗1)(α⊗x) = dα ⊗ x.
DglaElement dgla_differential(const DglaElement& a);

/// Shifted operations on E_g (all of degree +1, graded symmetric in gh):
/// l1(sa) = -s(da), l2(sa, sb) = (-1)^{|a|} s[a, b] with |a| unshifted.
DglaElement shifted_l1(const DglaElement& a);
DglaElement shifted_l2(const DglaElement& a, const DglaElement& b);

int ghost_degree(const DglaContext& c, Mask m, int a);

/// <sα⊗x, sβ⊗y> = (-1)^{|x|(|β|-1)} <α,β>_int t(x,y). Throws MathError when
/// g has no pairing or the total degree is not -1.
Scalar bv_pairing(const DglaElement& a, const DglaElement& b);

struct GhostRow {
    int form_degree;
    int internal_degree;
    int ghost;
};
/// One row per (form degree, distinct internal degree of g).
std::vector<GhostRow> ghost_degree_table(const DglaContext& c);

nlohmann::json dgla_to_json(const DglaElement& a);
DglaElement dgla_from_json(const DglaContext& c, const nlohmann::json& j);

/// SDR (p⊗1, e⊗1, k⊗1) on E_g. W ⊗ g basis index is wflat * dim g + a.
class TensorSdr {
public:
    TensorSdr(std::shared_ptr<const SdrData> base, std::shared_ptr<const DglaContext> ctx);

    const SdrData& base() const { return *base_; }
    const DglaContext& ctx() const { return *ctx_; }
    const std::shared_ptr<const DglaContext>& ctx_ptr() const { return ctx_; }

    int size() const { return base_->w_total() * ctx_->lie_dim(); }
    std::vector<int> w_dims_by_form() const { return base_->w_dims; }
    int w_index(int wflat, int a) const { return wflat * ctx_->lie_dim() + a; }
    int w_form_degree(int widx) const { return base_->w_locate(widx / ctx_->lie_dim()).first; }
    int w_internal_degree(int widx) const { return ctx_->lie().degree(widx % ctx_->lie_dim()); }
    int w_ghost_degree(int widx) const { return w_form_degree(widx) + w_internal_degree(widx) - DglaContext::shift; }
    std::string w_name(int widx) const;

    DglaElement e(int widx) const;
    DglaElement e(const SparseVec& w) const;
    SparseVec p(const DglaElement& v) const;
    /// k⊗1, optionally scaled (the internal edge sign used by transfer).
    DglaElement h(const DglaElement& v) const;
    /// Differential on W⊗g in the shifted convention: -d_W ⊗ 1.
    SparseVec l1_w(const SparseVec& w) const;

private:
    std::shared_ptr<const SdrData> base_;
    std::shared_ptr<const DglaContext> ctx_;
    std::vector<MultiVector> k_of_mask_;
    std::vector<SparseVec> p_of_mask_;      // W flat coordinates
    std::vector<MultiVector> e_of_w_;
};

TensorSdr tensor_sdr(const SdrData& s, const LieAlgebra& g);

/// The SDR identities checked on every basis vector of E_g (and of W⊗g).
Report verify_tensor_sdr(const TensorSdr& t);
/// Cyclicity for the BV pairing with the shifted grading gh.
Report verify_tensor_cyclic(const TensorSdr& t);

}  // namespace hptbv
