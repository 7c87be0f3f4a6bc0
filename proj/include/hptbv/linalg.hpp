#pragma once

#include "hptbv/scalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hptbv {

/// Sparse vector keyed by basis index; zero entries are never stored.
using SparseVec = std::map<int, Scalar>;

inline void add_to(SparseVec& v, int i, const Scalar& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = v.try_emplace(i, c);
    if (!fresh) {
        it->second += c;
        if (is_zero(it->second)) v.erase(it);
    }
}

/// Dense exact matrix, row-major. Blocks here are small (at most 70x70 for su3).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}
    static Matrix identity(int n);
    /// Matrix whose columns are the given vectors (all of length `rows`).
    static Matrix from_columns(int rows, const std::vector<std::vector<Scalar>>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Scalar& operator()(int r, int c) { return a_[std::size_t(r) * cols_ + c]; }
    const Scalar& operator()(int r, int c) const { return a_[std::size_t(r) * cols_ + c]; }

    std::vector<Scalar> column(int c) const;
    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;
    Matrix transpose() const;
    bool is_zero() const;

    /// Horizontal concatenation [this | o].
    Matrix hcat(const Matrix& o) const;
    /// Vertical concatenation.
    Matrix vcat(const Matrix& o) const;
    /// Columns [c0, c1).
    Matrix col_range(int c0, int c1) const;
    Matrix row_range(int r0, int r1) const;

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Scalar> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Scalar& s, const Matrix& a);

/// Reduced row echelon form; returns pivot columns.
std::vector<int> rref(Matrix& m);
int rank(const Matrix& m);
/// Basis of the null space, as columns.
Matrix kernel(const Matrix& m);
/// A basis of the column space chosen among the columns of m (pivot columns).
Matrix column_basis(const Matrix& m);
/// Inverse of a square matrix; throws MathError when singular.
Matrix inverse(const Matrix& m);
/// Solves m x = b exactly; nullopt if inconsistent.
std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b);
/// Extends the columns of `basis` (independent) to a basis of the whole space
/// with standard vectors; returns only the added columns.
Matrix standard_complement(const Matrix& basis, int n);

/// Degree-homogeneous linear map between graded spaces indexed by degree
/// 0..N-1. Block k sends source degree k to target degree k + shift.
struct GradedMap {
    std::vector<int> src_dims;
    std::vector<int> tgt_dims;
    int shift = 0;
    std::vector<Matrix> blocks;

    static GradedMap zero(const std::vector<int>& src, const std::vector<int>& tgt, int shift);
    static GradedMap identity(const std::vector<int>& dims);

    int tgt_dim_at(int k) const {
        return k < 0 || k >= static_cast<int>(tgt_dims.size()) ? 0 : tgt_dims[k];
    }
    const Matrix& block(int k) const { return blocks.at(k); }
    Matrix& block(int k) { return blocks.at(k); }
    bool is_zero() const;
    bool operator==(const GradedMap& o) const;
};

GradedMap compose(const GradedMap& a, const GradedMap& b);  // a ∘ b
GradedMap operator+(const GradedMap& a, const GradedMap& b);
GradedMap operator-(const GradedMap& a, const GradedMap& b);
GradedMap operator*(const Scalar& s, const GradedMap& a);

struct BlockKernelImage {
    Matrix kernel;  // columns in source block
    Matrix image;   // columns in target block
    int rank = 0;
};

/// Exact kernel, image and rank for every source-degree block.
std::vector<BlockKernelImage> solve_kernel_image(const GradedMap& m);

/// Block-level restricted inverse: m maps span(domain) bijectively onto
/// span(codomain). Returns g with g m u = u on span(domain) and g = 0 on
/// span(complement). Default complement: standard vectors completing codomain.
Matrix restricted_inverse(const Matrix& m, const Matrix& domain, const Matrix& codomain,
                          const std::optional<Matrix>& complement = std::nullopt);

/// Graded version; bases are given per source degree (domain) and per target
/// degree (codomain, complement). Missing entries mean empty.
GradedMap restricted_inverse(const GradedMap& m, const std::vector<Matrix>& domain,
                             const std::vector<Matrix>& codomain,
                             const std::vector<std::optional<Matrix>>& complement = {});

}  // namespace hptbv
