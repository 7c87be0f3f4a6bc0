#pragma once

#include "hptbv/scalar.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hptbv {

/// Bit i set <=> generator e^{i+1} present. Ascending indices are implicit.
using Mask = std::uint32_t;

inline int form_degree(Mask m) { return __builtin_popcount(m); }

/// Sign of e^a ∧ e^b relative to e^{a|b}; 0 when they share an index.
int wedge_sign(Mask a, Mask b);

/// Sparse element of Λ(R^dim)*. Zero coefficients are never stored.
class MultiVector {
public:
    MultiVector() = default;
    explicit MultiVector(int dim) : dim_(dim) {}
    static MultiVector monomial(int dim, Mask m, const Scalar& c = 1);
    static MultiVector unit(int dim) { return monomial(dim, 0); }
    static MultiVector generator(int dim, int i) { return monomial(dim, Mask(1) << i); }

    int dim() const { return dim_; }
    const std::map<Mask, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Scalar coeff(Mask m) const;

    void add_term(Mask m, const Scalar& c);
    MultiVector& operator+=(const MultiVector& o);
    MultiVector& operator-=(const MultiVector& o);
    MultiVector& operator*=(const Scalar& s);

    /// Degree-k component.
    MultiVector part(int k) const;
    /// Degree if homogeneous, -1 for zero, throws if mixed.
    int degree() const;

    bool operator==(const MultiVector& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

    /// Human form like "2 e1e2 - e3"; "0" for zero; "1" for the unit.
    std::string to_string() const;

private:
    int dim_ = 0;
    std::map<Mask, Scalar> terms_;
};

MultiVector operator+(MultiVector a, const MultiVector& b);
MultiVector operator-(MultiVector a, const MultiVector& b);
MultiVector operator*(const Scalar& s, MultiVector a);

/// Exterior product; throws MathError on dimension mismatch.
MultiVector mv_wedge(const MultiVector& a, const MultiVector& b);

std::string mask_name(Mask m);

/// Parses sums like "2 e1e2 - 1/2 e3 + 1"; indices are 1-based. Throws InputError.
MultiVector parse_multivector(const std::string& text, int dim);

/// Basis monomials of Λ(R^dim)* grouped by degree, lexicographic inside a degree.
class ExteriorBasis {
public:
    explicit ExteriorBasis(int dim);
    int dim() const { return dim_; }
    int top_degree() const { return dim_; }
    Mask top() const { return dim_ == 32 ? ~Mask(0) : ((Mask(1) << dim_) - 1); }
    const std::vector<Mask>& of_degree(int k) const { return by_degree_.at(k); }
    int size(int k) const { return k < 0 || k > dim_ ? 0 : static_cast<int>(by_degree_[k].size()); }
    std::vector<int> dims() const;
    int position(Mask m) const { return position_.at(m); }

    /// Coordinates of the degree-k part of a multivector.
    std::vector<Scalar> coords(const MultiVector& a, int k) const;
    MultiVector from_coords(const std::vector<Scalar>& c, int k) const;

private:
    int dim_;
    std::vector<std::vector<Mask>> by_degree_;
    std::vector<int> position_;
};

}  // namespace hptbv
