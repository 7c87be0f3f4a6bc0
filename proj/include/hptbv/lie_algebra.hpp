#pragma once

#include "hptbv/linalg.hpp"
#include "hptbv/scalar.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hptbv {

/// Finite-dimensional, optionally internally graded Lie algebra given by
/// structure constants [b_i, b_j] = sum_k f(i,j,k) b_k (0-based indices).
class LieAlgebra {
public:
    LieAlgebra() = default;
    explicit LieAlgebra(int dim);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    const std::vector<std::string>& basis_names() const { return names_; }
    void set_basis_names(std::vector<std::string> n);
    const std::vector<int>& degrees() const { return degrees_; }
    int degree(int i) const { return degrees_[i]; }
    void set_degrees(std::vector<int> d);
    bool is_graded() const;

    const Scalar& f(int i, int j, int k) const { return f_[idx(i, j, k)]; }
    void set_f(int i, int j, int k, const Scalar& v) { f_[idx(i, j, k)] = v; }

    /// Bracket of two coordinate vectors.
    std::vector<Scalar> bracket(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const;

    const std::optional<Matrix>& pairing() const { return pairing_; }
    void set_pairing(Matrix t) { pairing_ = std::move(t); }
    void clear_pairing() { pairing_.reset(); }
    /// Internal degree n of the pairing: t(x,y) != 0 only if |x| + |y| + n = 0.
    /// Throws MathError if the pairing mixes degrees inconsistently.
    int pairing_degree() const;

private:
    std::size_t idx(int i, int j, int k) const { return (std::size_t(i) * dim_ + j) * dim_ + k; }

    int dim_ = 0;
    std::string name_;
    std::vector<std::string> names_;
    std::vector<int> degrees_;
    std::vector<Scalar> f_;
    std::optional<Matrix> pairing_;
};

struct Violation {
    std::string kind;  // "antisymmetry", "jacobi", "degree", "pairing-symmetry", "pairing-degenerate"
    std::vector<int> indices;  // 1-based
    std::string detail;
};

struct LieValidation {
    std::vector<Violation> violations;
    // Properties reported but not counted as violations.
    bool has_pairing = false;
    bool pairing_invariant = false;
    std::vector<Violation> invariance_failures;
    bool valid() const { return violations.empty(); }
};

LieValidation validate_lie(const LieAlgebra& g);

struct KillingForm {
    Matrix t;
    bool degenerate = false;
};

/// t(a,b) = sum_{k,l} f(a,k,l) f(b,l,k).
KillingForm killing_form(const LieAlgebra& g);

struct Unimodularity {
    bool unimodular = true;
    std::vector<Scalar> trace;  // trace of ad_a for each basis a
};

Unimodularity is_unimodular(const LieAlgebra& g);

/// Checks t([x,y],z) + (-1)^{|x||y|} t(y,[x,z]) = 0 on all basis triples.
bool is_ad_invariant(const LieAlgebra& g, const Matrix& t, std::vector<Violation>* failures = nullptr);

/// "su2", "su3", "abelian(n)", "affine2". Throws InputError on unknown names.
LieAlgebra builtin(const std::string& name);

/// The eight Cartan-Weyl matrices of sl3 used for the su3 presentation.
std::vector<Matrix> su3_cartan_weyl_matrices();

/// g0 ⊕ g0*: dual block in internal degree -shift, coadjoint bracket,
/// canonical pairing of internal degree `shift`.
LieAlgebra graded_double(const LieAlgebra& g0, int shift);

/// JSON in/out (1-based indices, scalars as "p/q" strings).
LieAlgebra lie_from_json(const nlohmann::json& j);
nlohmann::json lie_to_json(const LieAlgebra& g);

/// Returns g with its pairing replaced: "killing", "identity", or "keep"
/// (keep the stored one). Throws InputError on unknown kinds, MathError when
/// the requested pairing is degenerate.
LieAlgebra attach_pairing(LieAlgebra g, const std::string& kind);

/// Built-in name or path to a JSON file.
LieAlgebra load_algebra(const std::string& spec);

}  // namespace hptbv
