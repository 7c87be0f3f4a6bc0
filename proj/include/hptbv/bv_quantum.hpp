#pragma once

#include "hptbv/lie_algebra.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hptbv {

/// Coordinates on E_g[1] for the su2 source: u_α (deg 1), x^i_α (deg 0),
/// y^i_α (deg -1), v_α (deg -2), i = 1..3. Variable ids run family by family:
/// u, then x^1, x^2, x^3, then y^1..y^3, then v, each block of length dim g.
class BvCoordinates {
public:
    /// Needs an ungraded g with a symmetric non-degenerate pairing.
    explicit BvCoordinates(const LieAlgebra& g);

    const LieAlgebra& lie() const { return g_; }
    int lie_dim() const { return g_.dim(); }
    int size() const { return 8 * g_.dim(); }

    int u(int a) const { return a; }
    int x(int i, int a) const { return (i) * g_.dim() + a; }      // i = 1..3
    int y(int i, int a) const { return (3 + i) * g_.dim() + a; }  // i = 1..3
    int v(int a) const { return 7 * g_.dim() + a; }

    int degree(int var) const;
    std::string name(int var) const;

    /// Pairing t_{αβ} (used by Δ and the antibracket) and its inverse t^{αβ}.
    const Matrix& t_lower() const { return t_; }
    const Matrix& t_upper() const { return t_inv_; }

private:
    LieAlgebra g_;
    Matrix t_, t_inv_;
};

/// Sorted variable ids with repetition; an odd variable never repeats.
using Monomial = std::vector<int>;

class PolyFunction {
public:
    PolyFunction() = default;
    explicit PolyFunction(std::shared_ptr<const BvCoordinates> c) : coords_(std::move(c)) {}
    static PolyFunction variable(std::shared_ptr<const BvCoordinates> c, int var, const Scalar& coeff = 1);
    static PolyFunction constant(std::shared_ptr<const BvCoordinates> c, const Scalar& value);

    const std::shared_ptr<const BvCoordinates>& coords() const { return coords_; }
    const std::map<Monomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Adds coeff times the product of the listed variables in that order.
    void add_product(const std::vector<int>& vars, const Scalar& coeff);
    void add_term(const Monomial& m, const Scalar& coeff);

    int monomial_degree(const Monomial& m) const;
    /// Component of one total degree.
    PolyFunction part(int degree) const;
    std::vector<int> degrees() const;

    PolyFunction& operator+=(const PolyFunction& o);
    PolyFunction& operator-=(const PolyFunction& o);
    PolyFunction& operator*=(const Scalar& s);
    bool operator==(const PolyFunction& o) const { return terms_ == o.terms_; }

    std::string to_string() const;

private:
    std::shared_ptr<const BvCoordinates> coords_;
    std::map<Monomial, Scalar> terms_;
};

PolyFunction operator+(PolyFunction a, const PolyFunction& b);
PolyFunction operator-(PolyFunction a, const PolyFunction& b);
PolyFunction operator*(const Scalar& s, PolyFunction a);
/// Graded-commutative product.
PolyFunction operator*(const PolyFunction& a, const PolyFunction& b);

/// Left derivative ∂/∂z.
PolyFunction derivative(const PolyFunction& f, int var);

/// Δ = t_{αβ} (Σ_i ∂/∂x^i_α ∂/∂y^i_β + ∂/∂u_α ∂/∂v_β), left derivatives.
PolyFunction bv_laplacian(const PolyFunction& f);

/// Odd Poisson bracket of degree +1 fixed by
/// Δ(FG) = (ΔF)G + (-1)^{|F|} F(ΔG) + (-1)^{|F|} {F,G}.
PolyFunction antibracket(const PolyFunction& f, const PolyFunction& g);

/// t^{αβ} x^i_α x^i_β + F^{αβγ}(1/6 ε_{ijk} x^i_α x^j_β x^k_γ + u_α x^i_β y^i_γ + σ/2 u_α u_β v_γ)
/// with F^{αβγ} = t^{αα'} t^{ββ'} f_{α'β'}^γ. With this antibracket the master
/// equation needs σ = -1; `literal_signs` keeps σ = +1 as usually displayed.
PolyFunction build_classical_action(std::shared_ptr<const BvCoordinates> c, bool literal_signs = false);
PolyFunction kinetic_term(std::shared_ptr<const BvCoordinates> c);

struct QmeReport {
    PolyFunction cme_residual;  // {S,S}
    PolyFunction delta_s;       // ΔS
    bool unimodular = true;
    std::vector<Scalar> trace;  // tr ad_a
    bool pairing_invariant = true;
    /// ΔS = c Σ_α (t^{αβ} tr_β) u_α; c is unset when ΔS and the trace both vanish.
    std::optional<Scalar> coefficient;
    bool proportional = true;  // ΔS has exactly that shape
    bool equivalence_holds = true;  // ΔS = 0 <=> unimodular
    nlohmann::json to_json() const;
};

QmeReport qme_obstruction(const LieAlgebra& g, bool literal_signs = false);

struct CountertermReport {
    bool needed = false;    // ΔS != 0
    bool solvable = true;   // some linear S' gives {S', kinetic} = -ΔS
    int image_rank = 0;
    std::string witness;
    nlohmann::json to_json() const;
};

CountertermReport no_counterterm_check(const LieAlgebra& g);

}  // namespace hptbv
