#pragma once

#include "hptbv/lie_algebra.hpp"
#include "hptbv/linalg.hpp"
#include "hptbv/multivector.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hptbv {

/// Chevalley-Eilenberg algebra Λ•s* with d, the Koszul codifferential built
/// from a transport pairing on s, and the integral pairing.
class CeComplex {
public:
    /// Uses the default transport pairing (identity for su2, a multiple of the
    /// Killing form when that is non-degenerate, identity otherwise).
    explicit CeComplex(LieAlgebra s);
    CeComplex(LieAlgebra s, Matrix transport, std::string transport_note);

    const LieAlgebra& algebra() const { return s_; }
    int dim() const { return s_.dim(); }
    const ExteriorBasis& basis() const { return basis_; }
    std::vector<int> dims() const { return basis_.dims(); }

    const GradedMap& d() const { return d_; }
    const GradedMap& codiff() const { return codiff_; }
    /// Pairing B on s used to move the bracket to s*.
    const Matrix& transport() const { return transport_; }
    const std::string& transport_note() const { return transport_note_; }

    MultiVector apply(const GradedMap& m, const MultiVector& a) const;
    MultiVector d(const MultiVector& a) const { return apply(d_, a); }
    MultiVector codiff(const MultiVector& a) const { return apply(codiff_, a); }

    /// Coadjoint action of basis vector x (0-based), extended as a derivation.
    const GradedMap& lie_derivative_map(int x) const { return lie_maps_.at(x); }
    MultiVector lie_derivative(int x, const MultiVector& a) const { return apply(lie_maps_.at(x), a); }

    /// (-1)^{|a|} times the e1...ed coefficient of a∧b, extended bilinearly.
    Scalar integral_pairing(const MultiVector& a, const MultiVector& b) const;
    /// Matrix of the integral pairing between degree k and degree dim-k.
    Matrix pairing_block(int k) const;

    /// Pairing-dependent Hodge star Λ^k -> Λ^{d-k}: a ∧ ⋆b = <a,b>_B e1...ed,
    /// where <,>_B is induced on Λs* by the inverse of the transport pairing.
    const Matrix& metric_star(int k) const { return star_.at(k); }

private:
    void build();

    LieAlgebra s_;
    ExteriorBasis basis_;
    Matrix transport_;
    std::string transport_note_;
    GradedMap d_;
    GradedMap codiff_;
    std::vector<Matrix> star_;
    std::vector<GradedMap> lie_maps_;
};

/// d on generators: d e^k = 1/2 sum f(i,j,k) e^i e^j, extended as a derivation.
GradedMap ce_differential(const LieAlgebra& s);

/// Alternating-sign extension of the transported bracket (see CeComplex).
GradedMap koszul_codifferential(const LieAlgebra& s, const Matrix& transport);

/// Combinatorial star: ⋆e^I = ±e^{I^c} with e^I ∧ ⋆e^I = +e1...ed.
MultiVector hodge_star(const MultiVector& a);

struct SubspacesByDegree {
    std::vector<Matrix> basis;  // columns in the degree-k coordinate space
    std::vector<int> dims() const;
};

SubspacesByDegree invariants_subspace(const CeComplex& ce);

struct Cohomology {
    std::vector<int> dims;
    std::vector<std::vector<MultiVector>> representatives;
    bool representatives_are_invariant = false;
};

Cohomology cohomology(const CeComplex& ce);

struct ReductiveDecomposition {
    SubspacesByDegree invariants;
    SubspacesByDegree image_d;
    SubspacesByDegree image_codiff;
    int dim_invariants = 0;
    int dim_image_d = 0;
    int dim_image_codiff = 0;
};

/// Λs* = invariants ⊕ im d ⊕ im ∂, verified to be direct; throws MathError otherwise.
ReductiveDecomposition reductive_decomposition(const CeComplex& ce);

struct StarSignTable {
    // sigma[k] relates ∂ on Λ^k to ⋆ d ⋆^{-1}: ∂ = sigma[k] ⋆ d ⋆^{-1}.
    std::vector<int> sigma;
    // raw[k]: scalar r with ∂ = r ⋆ d ⋆ on Λ^k, when one exists.
    std::vector<std::optional<Scalar>> raw;
    bool consistent = true;
    bool orthonormal = false;  // ⋆⋆ = ±1 degreewise
    std::string failure;
};

StarSignTable codiff_star_signs(const CeComplex& ce);

/// Default transport pairing for a given algebra and its note.
std::pair<Matrix, std::string> default_transport(const LieAlgebra& s);

}  // namespace hptbv
