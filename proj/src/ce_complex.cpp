#include "hptbv/ce_complex.hpp"

#include <utility>

namespace hptbv {

namespace {

std::vector<int> indices_of(Mask m) {
    std::vector<int> v;
    for (Mask r = m; r; r &= r - 1) v.push_back(__builtin_ctz(r));
    return v;
}

/// Extends generator images to a derivation of the given parity and degree shift.
GradedMap extend_derivation(const ExteriorBasis& basis, const std::vector<MultiVector>& gen, int op_parity,
                            int shift) {
    int n = basis.dim();
    auto dims = basis.dims();
    GradedMap g = GradedMap::zero(dims, dims, shift);
    for (int k = 0; k <= n; ++k) {
        int tk = k + shift;
        if (tk < 0 || tk > n) continue;
        const auto& monos = basis.of_degree(k);
        for (int col = 0; col < static_cast<int>(monos.size()); ++col) {
            auto idx = indices_of(monos[col]);
            MultiVector acc(n);
            for (std::size_t a = 0; a < idx.size(); ++a) {
                Mask prefix = 0, suffix = 0;
                for (std::size_t b = 0; b < a; ++b) prefix |= Mask(1) << idx[b];
                for (std::size_t b = a + 1; b < idx.size(); ++b) suffix |= Mask(1) << idx[b];
                MultiVector term = mv_wedge(mv_wedge(MultiVector::monomial(n, prefix), gen[idx[a]]),
                                            MultiVector::monomial(n, suffix));
                if ((op_parity & 1) && (a & 1)) term *= -1;
                acc += term;
            }
            for (const auto& [m, c] : acc.terms()) g.blocks[k](basis.position(m), col) = c;
        }
    }
    return g;
}

Scalar det(Matrix m) {
    int n = m.rows();
    Scalar d = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int r = c; r < n; ++r)
            if (!is_zero(m(r, c))) {
                p = r;
                break;
            }
        if (p < 0) return 0;
        if (p != c) {
            for (int k = 0; k < n; ++k) std::swap(m(p, k), m(c, k));
            d = -d;
        }
        d *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            if (is_zero(m(r, c))) continue;
            Scalar f = m(r, c) / m(c, c);
            for (int k = c; k < n; ++k) m(r, k) -= f * m(c, k);
        }
    }
    return d;
}

}  // namespace

std::pair<Matrix, std::string> default_transport(const LieAlgebra& s) {
    int n = s.dim();
    if (s.name() == "su2") return {Matrix::identity(n), "identity (orthonormal basis)"};
    auto kf = killing_form(s);
    if (s.name() == "su3") return {Scalar(1, 6) * kf.t, "(1/6) x Killing form (trace form of the 3x3 matrices)"};
    if (!kf.degenerate) return {kf.t, "Killing form"};
    return {Matrix::identity(n), "identity (Killing form degenerate)"};
}

GradedMap ce_differential(const LieAlgebra& s) {
    int n = s.dim();
    ExteriorBasis basis(n);
    std::vector<MultiVector> gen;
    for (int k = 0; k < n; ++k) {
        MultiVector v(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                // 1/2 (f_ij e^i e^j + f_ji e^j e^i) = 1/2 (f_ij - f_ji) e^i e^j
                Scalar c = (s.f(i, j, k) - s.f(j, i, k)) / 2;
                v.add_term((Mask(1) << i) | (Mask(1) << j), c);
            }
        gen.push_back(std::move(v));
    }
    return extend_derivation(basis, gen, 1, +1);
}

GradedMap koszul_codifferential(const LieAlgebra& s, const Matrix& transport) {
    int n = s.dim();
    if (rank(transport) < n) throw MathError("transport pairing is degenerate");
    Matrix binv = inverse(transport);
    // c[a][b] = [e^a, e^b]* in Λ^1
    std::vector<std::vector<MultiVector>> c(n, std::vector<MultiVector>(n, MultiVector(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<Scalar> x(n), y(n);
            for (int i = 0; i < n; ++i) {
                x[i] = binv(a, i);
                y[i] = binv(b, i);
            }
            auto br = s.bracket(x, y);
            for (int m = 0; m < n; ++m) {
                if (is_zero(br[m])) continue;
                for (int q = 0; q < n; ++q) c[a][b].add_term(Mask(1) << q, br[m] * transport(m, q));
            }
        }
    ExteriorBasis basis(n);
    auto dims = basis.dims();
    GradedMap g = GradedMap::zero(dims, dims, -1);
    for (int k = 2; k <= n; ++k) {
        const auto& monos = basis.of_degree(k);
        for (int col = 0; col < static_cast<int>(monos.size()); ++col) {
            auto idx = indices_of(monos[col]);
            MultiVector acc(n);
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = a + 1; b < idx.size(); ++b) {
                    Mask rest = monos[col] & ~(Mask(1) << idx[a]) & ~(Mask(1) << idx[b]);
                    MultiVector term = mv_wedge(c[idx[a]][idx[b]], MultiVector::monomial(n, rest));
                    // 1-based positions a+1, b+1: sign (-1)^{(a+1)+(b+1)-1}
                    if (((a + b + 1) & 1) != 0) term *= -1;
                    acc += term;
                }
            for (const auto& [m, v] : acc.terms()) g.blocks[k](basis.position(m), col) = v;
        }
    }
    return g;
}

MultiVector hodge_star(const MultiVector& a) {
    int n = a.dim();
    Mask top = (n == 32) ? ~Mask(0) : ((Mask(1) << n) - 1);
    MultiVector r(n);
    for (const auto& [m, c] : a.terms()) {
        Mask comp = top & ~m;
        r.add_term(comp, wedge_sign(m, comp) * c);
    }
    return r;
}

CeComplex::CeComplex(LieAlgebra s) : s_(std::move(s)), basis_(s_.dim()) {
    auto [t, note] = default_transport(s_);
    transport_ = std::move(t);
    transport_note_ = std::move(note);
    build();
}

CeComplex::CeComplex(LieAlgebra s, Matrix transport, std::string transport_note)
    : s_(std::move(s)), basis_(s_.dim()), transport_(std::move(transport)), transport_note_(std::move(transport_note)) {
    build();
}

void CeComplex::build() {
    if (s_.is_graded()) throw InputError("the CE source algebra must be ungraded");
    int n = s_.dim();
    d_ = ce_differential(s_);
    codiff_ = koszul_codifferential(s_, transport_);
    for (int x = 0; x < n; ++x) {
        std::vector<MultiVector> gen;
        for (int k = 0; k < n; ++k) {
            MultiVector v(n);
            for (int j = 0; j < n; ++j) v.add_term(Mask(1) << j, -s_.f(x, j, k));
            gen.push_back(std::move(v));
        }
        lie_maps_.push_back(extend_derivation(basis_, gen, 0, 0));
    }
    // metric star from the inverse transport pairing
    Matrix binv = inverse(transport_);
    Mask top = basis_.top();
    for (int k = 0; k <= n; ++k) {
        const auto& src = basis_.of_degree(k);
        Matrix blk(basis_.size(n - k), basis_.size(k));
        for (int col = 0; col < static_cast<int>(src.size()); ++col) {
            auto jdx = indices_of(src[col]);
            for (Mask mi : basis_.of_degree(k)) {
                auto idx = indices_of(mi);
                Matrix minor(k, k);
                for (int r = 0; r < k; ++r)
                    for (int c = 0; c < k; ++c) minor(r, c) = binv(idx[r], jdx[c]);
                Scalar g = det(minor);
                if (is_zero(g)) continue;
                Mask comp = top & ~mi;
                blk(basis_.position(comp), col) += wedge_sign(mi, comp) * g;
            }
        }
        star_.push_back(std::move(blk));
    }
}

MultiVector CeComplex::apply(const GradedMap& m, const MultiVector& a) const {
    MultiVector r(dim());
    for (const auto& [mask, c] : a.terms()) {
        int k = form_degree(mask);
        int tk = k + m.shift;
        if (tk < 0 || tk > dim()) continue;
        const Matrix& blk = m.blocks[k];
        int col = basis_.position(mask);
        for (int row = 0; row < blk.rows(); ++row)
            if (!is_zero(blk(row, col))) r.add_term(basis_.of_degree(tk)[row], blk(row, col) * c);
    }
    return r;
}

Scalar CeComplex::integral_pairing(const MultiVector& a, const MultiVector& b) const {
    Scalar total = 0;
    Mask top = basis_.top();
    for (const auto& [ma, ca] : a.terms()) {
        Mask need = top & ~ma;
        Scalar cb = b.coeff(need);
        if (is_zero(cb)) continue;
        int s = wedge_sign(ma, need);
        if (form_degree(ma) & 1) s = -s;
        total += s * ca * cb;
    }
    return total;
}

Matrix CeComplex::pairing_block(int k) const {
    int n = dim();
    Matrix m(basis_.size(k), basis_.size(n - k));
    Mask top = basis_.top();
    for (int r = 0; r < basis_.size(k); ++r) {
        Mask a = basis_.of_degree(k)[r];
        Mask b = top & ~a;
        int s = wedge_sign(a, b);
        if (k & 1) s = -s;
        m(r, basis_.position(b)) = s;
    }
    return m;
}

std::vector<int> SubspacesByDegree::dims() const {
    std::vector<int> d;
    for (const auto& b : basis) d.push_back(b.cols());
    return d;
}

SubspacesByDegree invariants_subspace(const CeComplex& ce) {
    SubspacesByDegree out;
    int n = ce.dim();
    for (int k = 0; k <= n; ++k) {
        Matrix stacked(0, ce.basis().size(k));
        for (int x = 0; x < n; ++x) stacked = stacked.vcat(ce.lie_derivative_map(x).block(k));
        if (n == 0 || stacked.rows() == 0)
            out.basis.push_back(Matrix::identity(ce.basis().size(k)));
        else
            out.basis.push_back(kernel(stacked));
    }
    return out;
}

Cohomology cohomology(const CeComplex& ce) {
    int n = ce.dim();
    Cohomology h;
    auto ki = solve_kernel_image(ce.d());
    auto inv = invariants_subspace(ce);
    bool use_invariants = true;
    std::vector<Matrix> image_in(n + 1);
    for (int k = 0; k <= n; ++k) {
        int sz = ce.basis().size(k);
        image_in[k] = (k == 0) ? Matrix(sz, 0) : ki[k - 1].image;
        if (image_in[k].cols() == 0) image_in[k] = Matrix(sz, 0);
        int dimk = ki[k].kernel.cols() - image_in[k].cols();
        h.dims.push_back(dimk);
        const Matrix& iv = inv.basis[k];
        // invariants must be cocycles, independent of exact forms, and of the right size
        if (iv.cols() != dimk) use_invariants = false;
        else if (iv.cols() > 0) {
            if (!(ce.d().block(k) * iv).is_zero()) use_invariants = false;
            else if (rank(image_in[k].hcat(iv)) != image_in[k].cols() + iv.cols()) use_invariants = false;
        }
    }
    h.representatives_are_invariant = use_invariants;
    for (int k = 0; k <= n; ++k) {
        std::vector<MultiVector> reps;
        if (use_invariants) {
            for (int c = 0; c < inv.basis[k].cols(); ++c)
                reps.push_back(ce.basis().from_coords(inv.basis[k].column(c), k));
        } else {
            Matrix acc = image_in[k];
            int r = rank(acc);
            const Matrix& ker = ki[k].kernel;
            for (int c = 0; c < ker.cols(); ++c) {
                Matrix trial = acc.hcat(ker.col_range(c, c + 1));
                int rr = rank(trial);
                if (rr > r) {
                    acc = trial;
                    r = rr;
                    reps.push_back(ce.basis().from_coords(ker.column(c), k));
                }
            }
        }
        h.representatives.push_back(std::move(reps));
    }
    return h;
}

ReductiveDecomposition reductive_decomposition(const CeComplex& ce) {
    int n = ce.dim();
    ReductiveDecomposition rd;
    rd.invariants = invariants_subspace(ce);
    auto kd = solve_kernel_image(ce.d());
    auto kc = solve_kernel_image(ce.codiff());
    for (int k = 0; k <= n; ++k) {
        int sz = ce.basis().size(k);
        Matrix imd = (k == 0) ? Matrix(sz, 0) : kd[k - 1].image;
        Matrix imc = (k == n) ? Matrix(sz, 0) : kc[k + 1].image;
        if (imd.cols() == 0) imd = Matrix(sz, 0);
        if (imc.cols() == 0) imc = Matrix(sz, 0);
        const Matrix& iv = rd.invariants.basis[k];
        Matrix all = iv.hcat(imd).hcat(imc);
        if (all.cols() != sz || rank(all) != sz)
            throw MathError("invariants + im d + im codiff is not a direct sum decomposition in degree " +
                            std::to_string(k));
        rd.image_d.basis.push_back(imd);
        rd.image_codiff.basis.push_back(imc);
        rd.dim_invariants += iv.cols();
        rd.dim_image_d += imd.cols();
        rd.dim_image_codiff += imc.cols();
    }
    if (rd.dim_image_d != rd.dim_image_codiff) throw MathError("dim im d != dim im codiff");
    return rd;
}

StarSignTable codiff_star_signs(const CeComplex& ce) {
    int n = ce.dim();
    StarSignTable t;
    t.orthonormal = true;
    for (int k = 0; k <= n; ++k) {
        Matrix ss = ce.metric_star(n - k) * ce.metric_star(k);
        Matrix id = Matrix::identity(ce.basis().size(k));
        if (!(ss == id) && !(ss == Scalar(-1) * id)) t.orthonormal = false;
    }
    t.sigma.assign(n + 1, 1);
    t.raw.assign(n + 1, std::nullopt);
    auto ratio = [](const Matrix& a, const Matrix& b) -> std::optional<Scalar> {
        // returns r with a = r b, if any (0 when both vanish)
        std::optional<Scalar> r;
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) {
                if (is_zero(b(i, j))) {
                    if (!is_zero(a(i, j))) return std::nullopt;
                    continue;
                }
                Scalar q = a(i, j) / b(i, j);
                if (r && *r != q) return std::nullopt;
                r = q;
            }
        if (!r) return a.is_zero() ? std::optional<Scalar>(Scalar(0)) : std::nullopt;
        return r;
    };
    for (int k = 1; k <= n; ++k) {
        const Matrix& cod = ce.codiff().block(k);  // Λ^k -> Λ^{k-1}
        Matrix star_inv = inverse(ce.metric_star(n - k));  // Λ^k -> Λ^{n-k}
        Matrix conj = ce.metric_star(n - k + 1) * ce.d().block(n - k) * star_inv;
        Matrix raw = ce.metric_star(n - k + 1) * ce.d().block(n - k) * ce.metric_star(k);
        if (cod.is_zero() && conj.is_zero()) continue;
        auto r = ratio(cod, conj);
        if (!r || (*r != 1 && *r != -1)) {
            t.consistent = false;
            t.failure = "degree " + std::to_string(k) + ": codifferential is not ±⋆d⋆^{-1}";
            continue;
        }
        t.sigma[k] = (sgn(*r) < 0) ? -1 : 1;
        t.raw[k] = ratio(cod, raw);
    }
    return t;
}

}  // namespace hptbv
