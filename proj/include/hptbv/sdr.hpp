#pragma once

#include "hptbv/ce_complex.hpp"
#include "hptbv/report.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hptbv {

/// Special deformation retract of the CE complex onto a graded subspace W.
/// W coordinates are indexed by degree like the source; `e` gives the
/// representatives of the W basis inside Λs*.
struct SdrData {
    std::shared_ptr<const CeComplex> ce;
    std::string kind;
    std::vector<int> w_dims;
    GradedMap p;   // Λ -> W, degree 0
    GradedMap e;   // W -> Λ, degree 0
    GradedMap k;   // Λ -> Λ, degree -1
    GradedMap dw;  // W -> W, degree +1
    std::string complement_note;

    int w_total() const;
    /// Offset of degree-k W coordinates in a flat W index.
    int w_offset(int k) const;
    /// Degree and in-degree position of a flat W index.
    std::pair<int, int> w_locate(int flat) const;
    /// e applied to a W basis vector (flat index).
    MultiVector e_of(int flat) const;
    /// Human label for a W basis vector, e.g. "w2[1]".
    std::string w_name(int flat) const;

    MultiVector apply_k(const MultiVector& a) const { return ce->apply(k, a); }
    /// p applied to a multivector: flat W coordinates.
    std::vector<Scalar> apply_p(const MultiVector& a) const;
    MultiVector apply_e(const std::vector<Scalar>& w) const;
};

SdrData trivial_sdr(std::shared_ptr<const CeComplex> ce);

/// I given by degree-1 multivectors; the basis is reduced to echelon form first.
/// W = (I ⊕ dI)^⊥ for the integral pairing; k inverts d: I -> dI.
SdrData isotrope_sdr(std::shared_ptr<const CeComplex> ce, const std::vector<MultiVector>& isotrope);

/// Canonical retract onto the invariants with k = k_D ∘ ∂, D = d∂ + ∂d.
SdrData meinrenken_sdr(std::shared_ptr<const CeComplex> ce);

/// pe = 1, ep = 1 - dk - kd, pk = 0, ke = 0, kk = 0, plus d_W = p d e and dp = p... checks.
Report verify_sdr(const SdrData& s);

/// Cyclicity under the integral pairing. Signs use the shifted degree
/// |a| - 1 of E = Λs*[1]: <A a, b> = (-1)^{|A| |a|} <a, A† b>.
Report verify_cyclic(const SdrData& s);

struct ClosureResult {
    bool closed = true;
    int witness_a = -1;
    int witness_b = -1;
    MultiVector product;
};

ClosureResult image_closed_under_wedge(const SdrData& s);

/// Parses "e1+e2, e3" or "2e1-1/2e3" into degree-1 multivectors of Λ(R^dim)*.
std::vector<MultiVector> parse_isotrope(const std::string& text, int dim);

}  // namespace hptbv
