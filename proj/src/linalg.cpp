#include "hptbv/linalg.hpp"

#include <utility>

namespace hptbv {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_columns(int rows, const std::vector<std::vector<Scalar>>& cols) {
    Matrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols(); ++c) {
        if (static_cast<int>(cols[c].size()) != rows) throw MathError("column length mismatch");
        for (int r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
}

std::vector<Scalar> Matrix::column(int c) const {
    std::vector<Scalar> v(rows_);
    for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw MathError("matrix-vector size mismatch");
    std::vector<Scalar> out(rows_);
    for (int c = 0; c < cols_; ++c) {
        if (hptbv::is_zero(v[c])) continue;
        for (int r = 0; r < rows_; ++r) {
            const Scalar& x = (*this)(r, c);
            if (!hptbv::is_zero(x)) out[r] += x * v[c];
        }
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!hptbv::is_zero(x)) return false;
    return true;
}

Matrix Matrix::hcat(const Matrix& o) const {
    if (rows_ != o.rows_ && cols_ > 0 && o.cols_ > 0) throw MathError("hcat row mismatch");
    int rows = cols_ > 0 ? rows_ : o.rows_;
    Matrix m(rows, cols_ + o.cols_);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
        for (int c = 0; c < o.cols_; ++c) m(r, cols_ + c) = o(r, c);
    }
    return m;
}

Matrix Matrix::vcat(const Matrix& o) const {
    if (cols_ != o.cols_ && rows_ > 0 && o.rows_ > 0) throw MathError("vcat column mismatch");
    int cols = rows_ > 0 ? cols_ : o.cols_;
    Matrix m(rows_ + o.rows_, cols);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows_; ++r) m(r, c) = (*this)(r, c);
        for (int r = 0; r < o.rows_; ++r) m(rows_ + r, c) = o(r, c);
    }
    return m;
}

Matrix Matrix::col_range(int c0, int c1) const {
    Matrix m(rows_, c1 - c0);
    for (int r = 0; r < rows_; ++r)
        for (int c = c0; c < c1; ++c) m(r, c - c0) = (*this)(r, c);
    return m;
}

Matrix Matrix::row_range(int r0, int r1) const {
    Matrix m(r1 - r0, cols_);
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < cols_; ++c) m(r - r0, c) = (*this)(r, c);
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw MathError("matrix product size mismatch");
    Matrix m(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Scalar& x = a(i, k);
            if (is_zero(x)) continue;
            for (int j = 0; j < b.cols(); ++j) {
                const Scalar& y = b(k, j);
                if (!is_zero(y)) m(i, j) += x * y;
            }
        }
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw MathError("matrix sum size mismatch");
    Matrix m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) + b(i, j);
    return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + Scalar(-1) * b; }

Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = s * a(i, j);
    return m;
}

std::vector<int> rref(Matrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int p = -1;
        for (int r = row; r < m.rows(); ++r)
            if (!is_zero(m(r, col))) {
                p = r;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
        Scalar inv = 1 / m(row, col);
        for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            Scalar f = m(r, col);
            for (int c = col; c < m.cols(); ++c)
                if (!is_zero(m(row, c))) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(const Matrix& m) {
    Matrix t = m;
    return static_cast<int>(rref(t).size());
}

Matrix kernel(const Matrix& m) {
    Matrix t = m;
    auto pivots = rref(t);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -t(static_cast<int>(i), free);
        basis.push_back(std::move(v));
    }
    return Matrix::from_columns(m.cols(), basis);
}

Matrix column_basis(const Matrix& m) {
    Matrix t = m;
    auto pivots = rref(t);
    std::vector<std::vector<Scalar>> cols;
    for (int p : pivots) cols.push_back(m.column(p));
    return Matrix::from_columns(m.rows(), cols);
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw MathError("inverse of non-square matrix");
    int n = m.rows();
    Matrix aug = m.hcat(Matrix::identity(n));
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) < n || (n > 0 && pivots[n - 1] != n - 1))
        throw MathError("matrix is singular");
    return aug.col_range(n, 2 * n);
}

std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b) {
    Matrix bm = Matrix::from_columns(m.rows(), {b});
    Matrix aug = m.hcat(bm);
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    std::vector<Scalar> x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(static_cast<int>(i), m.cols());
    return x;
}

Matrix standard_complement(const Matrix& basis, int n) {
    Matrix acc = basis.cols() > 0 ? basis : Matrix(n, 0);
    int r = rank(acc);
    std::vector<std::vector<Scalar>> added;
    for (int i = 0; i < n && r < n; ++i) {
        std::vector<Scalar> e(n);
        e[i] = 1;
        Matrix trial = acc.hcat(Matrix::from_columns(n, {e}));
        int rr = rank(trial);
        if (rr > r) {
            acc = trial;
            r = rr;
            added.push_back(e);
        }
    }
    return Matrix::from_columns(n, added);
}

GradedMap GradedMap::zero(const std::vector<int>& src, const std::vector<int>& tgt, int shift) {
    GradedMap g;
    g.src_dims = src;
    g.tgt_dims = tgt;
    g.shift = shift;
    for (int k = 0; k < static_cast<int>(src.size()); ++k) g.blocks.emplace_back(g.tgt_dim_at(k + shift), src[k]);
    return g;
}

GradedMap GradedMap::identity(const std::vector<int>& dims) {
    GradedMap g = zero(dims, dims, 0);
    for (int k = 0; k < static_cast<int>(dims.size()); ++k) g.blocks[k] = Matrix::identity(dims[k]);
    return g;
}

bool GradedMap::is_zero() const {
    for (const auto& b : blocks)
        if (!b.is_zero()) return false;
    return true;
}

bool GradedMap::operator==(const GradedMap& o) const {
    return src_dims == o.src_dims && tgt_dims == o.tgt_dims && shift == o.shift && blocks == o.blocks;
}

GradedMap compose(const GradedMap& a, const GradedMap& b) {
    if (a.src_dims != b.tgt_dims) throw MathError("compose: graded space mismatch");
    GradedMap g = GradedMap::zero(b.src_dims, a.tgt_dims, a.shift + b.shift);
    for (int k = 0; k < static_cast<int>(b.src_dims.size()); ++k) {
        int mid = k + b.shift;
        if (mid < 0 || mid >= static_cast<int>(a.src_dims.size())) continue;
        g.blocks[k] = a.blocks[mid] * b.blocks[k];
    }
    return g;
}

GradedMap operator+(const GradedMap& a, const GradedMap& b) {
    if (a.src_dims != b.src_dims || a.tgt_dims != b.tgt_dims || a.shift != b.shift)
        throw MathError("graded sum: shape mismatch");
    GradedMap g = a;
    for (std::size_t k = 0; k < g.blocks.size(); ++k) g.blocks[k] = a.blocks[k] + b.blocks[k];
    return g;
}

GradedMap operator-(const GradedMap& a, const GradedMap& b) { return a + Scalar(-1) * b; }

GradedMap operator*(const Scalar& s, const GradedMap& a) {
    GradedMap g = a;
    for (auto& blk : g.blocks) blk = s * blk;
    return g;
}

std::vector<BlockKernelImage> solve_kernel_image(const GradedMap& m) {
    std::vector<BlockKernelImage> out;
    for (const auto& blk : m.blocks) {
        BlockKernelImage ki;
        ki.kernel = kernel(blk);
        ki.image = column_basis(blk);
        ki.rank = ki.image.cols();
        if (blk.rows() == 0) ki.image = Matrix(0, 0);
        out.push_back(std::move(ki));
    }
    return out;
}

Matrix restricted_inverse(const Matrix& m, const Matrix& domain, const Matrix& codomain,
                          const std::optional<Matrix>& complement) {
    int n_tgt = m.rows();
    int n_src = m.cols();
    int k = domain.cols();
    if (codomain.cols() != k) throw MathError("restricted_inverse: domain and codomain dimensions differ");
    if (k == 0) return Matrix(n_src, n_tgt);
    Matrix image = m * domain;
    if (rank(image) < k) throw MathError("restricted_inverse: restriction is not injective");
    // coefficients of m(domain) in the codomain basis
    Matrix coeffs(k, k);
    for (int c = 0; c < k; ++c) {
        auto x = solve(codomain, image.column(c));
        if (!x) throw MathError("restricted_inverse: image leaves the codomain span");
        for (int r = 0; r < k; ++r) coeffs(r, c) = (*x)[r];
    }
    if (rank(coeffs) < k) throw MathError("restricted_inverse: restriction is not surjective onto codomain");
    Matrix comp = complement ? *complement : standard_complement(codomain, n_tgt);
    if (comp.cols() == 0) comp = Matrix(n_tgt, 0);
    Matrix full = codomain.hcat(comp);
    if (full.cols() != n_tgt || rank(full) != n_tgt)
        throw MathError("restricted_inverse: complement does not complete the codomain");
    Matrix left = (domain * inverse(coeffs)).hcat(Matrix(n_src, comp.cols()));
    return left * inverse(full);
}

GradedMap restricted_inverse(const GradedMap& m, const std::vector<Matrix>& domain,
                             const std::vector<Matrix>& codomain,
                             const std::vector<std::optional<Matrix>>& complement) {
    GradedMap g = GradedMap::zero(m.tgt_dims, m.src_dims, -m.shift);
    for (int j = 0; j < static_cast<int>(m.tgt_dims.size()); ++j) {
        int k = j - m.shift;
        if (k < 0 || k >= static_cast<int>(m.src_dims.size())) continue;
        Matrix dom = k < static_cast<int>(domain.size()) ? domain[k] : Matrix(m.src_dims[k], 0);
        Matrix cod = j < static_cast<int>(codomain.size()) ? codomain[j] : Matrix(m.tgt_dims[j], 0);
        if (dom.cols() == 0) dom = Matrix(m.src_dims[k], 0);
        if (cod.cols() == 0) cod = Matrix(m.tgt_dims[j], 0);
        std::optional<Matrix> comp;
        if (j < static_cast<int>(complement.size())) comp = complement[j];
        g.blocks[j] = restricted_inverse(m.blocks[k], dom, cod, comp);
    }
    return g;
}

}  // namespace hptbv
