#include "hptbv/sdr.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace hptbv {

namespace {

Matrix empty_cols(int rows) { return Matrix(rows, 0); }

std::string vec_string(const std::vector<Scalar>& v) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << format_scalar(v[i]);
    out << ")";
    return out.str();
}

// Rows of inverse([W | rest]) that pick out W coordinates.
Matrix projection_rows(const Matrix& w, const Matrix& rest) {
    Matrix full = w.hcat(rest);
    if (full.cols() == 0) return Matrix(0, 0);
    return inverse(full).row_range(0, w.cols());
}

SdrData assemble(std::shared_ptr<const CeComplex> ce, std::string kind, const std::vector<Matrix>& w_basis,
                 const std::vector<Matrix>& complement, GradedMap k) {
    SdrData s;
    s.ce = ce;
    s.kind = std::move(kind);
    auto dims = ce->dims();
    for (const auto& w : w_basis) s.w_dims.push_back(w.cols());
    s.e = GradedMap::zero(s.w_dims, dims, 0);
    s.p = GradedMap::zero(dims, s.w_dims, 0);
    for (std::size_t j = 0; j < dims.size(); ++j) {
        s.e.blocks[j] = w_basis[j].cols() ? w_basis[j] : Matrix(dims[j], 0);
        Matrix pr = projection_rows(w_basis[j], complement[j]);
        s.p.blocks[j] = pr.rows() ? pr : Matrix(0, dims[j]);
    }
    s.k = std::move(k);
    s.dw = compose(s.p, compose(ce->d(), s.e));
    return s;
}

}  // namespace

int SdrData::w_total() const {
    int t = 0;
    for (int d : w_dims) t += d;
    return t;
}

int SdrData::w_offset(int k) const {
    int t = 0;
    for (int j = 0; j < k; ++j) t += w_dims[j];
    return t;
}

std::pair<int, int> SdrData::w_locate(int flat) const {
    for (int j = 0; j < static_cast<int>(w_dims.size()); ++j) {
        if (flat < w_dims[j]) return {j, flat};
        flat -= w_dims[j];
    }
    throw MathError("W index out of range");
}

MultiVector SdrData::e_of(int flat) const {
    auto [deg, pos] = w_locate(flat);
    return ce->basis().from_coords(e.block(deg).column(pos), deg);
}

std::string SdrData::w_name(int flat) const {
    auto [deg, pos] = w_locate(flat);
    return "w" + std::to_string(deg) + "[" + std::to_string(pos + 1) + "]";
}

std::vector<Scalar> SdrData::apply_p(const MultiVector& a) const {
    std::vector<Scalar> out;
    for (int j = 0; j < static_cast<int>(w_dims.size()); ++j) {
        auto part = p.block(j).apply(ce->basis().coords(a, j));
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

MultiVector SdrData::apply_e(const std::vector<Scalar>& w) const {
    MultiVector r(ce->dim());
    int off = 0;
    for (int j = 0; j < static_cast<int>(w_dims.size()); ++j) {
        std::vector<Scalar> part(w.begin() + off, w.begin() + off + w_dims[j]);
        r += ce->basis().from_coords(e.block(j).apply(part), j);
        off += w_dims[j];
    }
    return r;
}

SdrData trivial_sdr(std::shared_ptr<const CeComplex> ce) {
    auto dims = ce->dims();
    std::vector<Matrix> w, rest;
    for (int d : dims) {
        w.push_back(Matrix::identity(d));
        rest.push_back(empty_cols(d));
    }
    auto s = assemble(ce, "trivial", w, rest, GradedMap::zero(dims, dims, -1));
    s.complement_note = "none (W is the whole complex)";
    return s;
}

SdrData isotrope_sdr(std::shared_ptr<const CeComplex> ce, const std::vector<MultiVector>& isotrope) {
    int n = ce->dim();
    const auto& basis = ce->basis();
    auto dims = ce->dims();

    std::vector<std::vector<std::vector<Scalar>>> raw(n + 1);
    for (const auto& v : isotrope) {
        if (v.dim() != n) throw InputError("isotrope vector has the wrong dimension");
        int deg = v.degree();
        if (deg < 0) continue;
        raw[deg].push_back(basis.coords(v, deg));
    }

    std::vector<Matrix> iso(n + 1), diso(n + 1);
    std::vector<std::string> reductions;
    for (int j = 0; j <= n; ++j) {
        iso[j] = empty_cols(dims[j]);
        diso[j] = empty_cols(dims[j]);
    }
    for (int j = 0; j <= n; ++j) {
        if (raw[j].empty()) continue;
        // echelon basis: nonzero rows of rref of the stacked row vectors
        Matrix rows = Matrix::from_columns(dims[j], raw[j]).transpose();
        auto piv = rref(rows);
        if (static_cast<int>(piv.size()) < static_cast<int>(raw[j].size()))
            reductions.push_back("degree " + std::to_string(j) + ": " + std::to_string(raw[j].size()) +
                                 " vectors reduced to " + std::to_string(piv.size()));
        iso[j] = rows.row_range(0, static_cast<int>(piv.size())).transpose();
    }
    for (int j = 0; j < n; ++j) {
        if (iso[j].cols() == 0) continue;
        Matrix img = ce->d().block(j) * iso[j];
        if (rank(img) < iso[j].cols()) throw MathError("isotrope is not transverse to ker d in degree " + std::to_string(j));
        diso[j + 1] = img;
    }
    if (iso[n].cols() > 0) throw MathError("isotrope is not transverse to ker d in degree " + std::to_string(n));

    // Gram matrix <a_i, d a_j> over the whole isotrope
    std::vector<MultiVector> all_i, all_di;
    for (int j = 0; j <= n; ++j)
        for (int c = 0; c < iso[j].cols(); ++c) {
            all_i.push_back(basis.from_coords(iso[j].column(c), j));
            all_di.push_back(basis.from_coords(diso[j + 1].column(c), j + 1));
        }
    int m = static_cast<int>(all_i.size());
    Matrix gram(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) gram(a, b) = ce->integral_pairing(all_i[a], all_di[b]);
    if (rank(gram) < m) throw MathError("<-, d-> is degenerate on the isotrope");

    // W = (I + dI)^perp under the integral pairing
    std::vector<Matrix> w(n + 1), rest(n + 1);
    for (int j = 0; j <= n; ++j) {
        Matrix sub = iso[n - j].hcat(diso[n - j]);
        Matrix wj;
        if (sub.cols() == 0) {
            wj = Matrix::identity(dims[j]);
        } else {
            Matrix constraints = (ce->pairing_block(j) * sub).transpose();
            wj = kernel(constraints);
            if (wj.cols() == 0) wj = empty_cols(dims[j]);
        }
        rest[j] = iso[j].hcat(diso[j]);
        Matrix full = wj.hcat(rest[j]);
        if (full.cols() != dims[j] || rank(full) != dims[j])
            throw MathError("W, I and dI do not span degree " + std::to_string(j));
        w[j] = wj;
    }

    // k: dI -> I inverts d, zero on W and I
    GradedMap k = GradedMap::zero(dims, dims, -1);
    for (int j = 1; j <= n; ++j) {
        if (diso[j].cols() == 0) continue;
        Matrix full = w[j].hcat(rest[j]);
        Matrix images = Matrix(dims[j - 1], w[j].cols() + iso[j].cols()).hcat(iso[j - 1]);
        k.blocks[j] = images * inverse(full);
    }

    auto s = assemble(ce, "isotrope", w, rest, std::move(k));
    s.complement_note = "W = (I + dI)^perp for the integral pairing";
    for (const auto& r : reductions) s.complement_note += "; " + r;
    return s;
}

SdrData meinrenken_sdr(std::shared_ptr<const CeComplex> ce) {
    auto rd = reductive_decomposition(*ce);
    int n = ce->dim();
    auto dims = ce->dims();
    GradedMap lap = compose(ce->d(), ce->codiff()) + compose(ce->codiff(), ce->d());
    std::vector<Matrix> moving(n + 1), inv(n + 1);
    std::vector<std::optional<Matrix>> comp(n + 1);
    for (int j = 0; j <= n; ++j) {
        moving[j] = rd.image_d.basis[j].hcat(rd.image_codiff.basis[j]);
        inv[j] = rd.invariants.basis[j];
        comp[j] = inv[j];
    }
    GradedMap k_lap = restricted_inverse(lap, moving, moving, comp);
    GradedMap k = compose(k_lap, ce->codiff());
    auto s = assemble(ce, "meinrenken", inv, moving, std::move(k));
    s.complement_note = "W = invariants, complement im d + im codiff";
    return s;
}

namespace {

using Namer = std::function<std::string(int deg, int pos)>;

// Compares two graded maps with equal shapes; records the first differing column.
void compare(Report& r, const std::string& name, const GradedMap& lhs, const GradedMap& rhs, const Namer& src_name,
             const Namer& tgt_name) {
    for (std::size_t j = 0; j < lhs.blocks.size(); ++j) {
        const Matrix& a = lhs.blocks[j];
        const Matrix& b = rhs.blocks[j];
        for (int c = 0; c < a.cols(); ++c)
            for (int row = 0; row < a.rows(); ++row)
                if (a(row, c) != b(row, c)) {
                    int tdeg = static_cast<int>(j) + lhs.shift;
                    std::ostringstream w;
                    w << "on " << src_name(static_cast<int>(j), c) << ": coefficient of " << tgt_name(tdeg, row)
                      << " is " << format_scalar(a(row, c)) << ", expected " << format_scalar(b(row, c))
                      << "; lhs column " << vec_string(a.column(c)) << ", rhs column " << vec_string(b.column(c));
                    r.add(name, false, w.str());
                    return;
                }
    }
    r.add(name, true);
}

}  // namespace

Report verify_sdr(const SdrData& s) {
    Report r;
    const auto& ce = *s.ce;
    auto dims = ce.dims();
    Namer lam = [&](int deg, int pos) { return mask_name(ce.basis().of_degree(deg)[pos]); };
    Namer wn = [&](int deg, int pos) { return s.w_name(s.w_offset(deg) + pos); };

    compare(r, "p.e = id_W", compose(s.p, s.e), GradedMap::identity(s.w_dims), wn, wn);
    GradedMap homotopy = compose(ce.d(), s.k) + compose(s.k, ce.d());
    compare(r, "e.p = 1 - dk - kd", compose(s.e, s.p), GradedMap::identity(dims) - homotopy, lam, lam);
    compare(r, "p.k = 0", compose(s.p, s.k), GradedMap::zero(dims, s.w_dims, -1), lam, wn);
    compare(r, "k.e = 0", compose(s.k, s.e), GradedMap::zero(s.w_dims, dims, -1), wn, lam);
    compare(r, "k.k = 0", compose(s.k, s.k), GradedMap::zero(dims, dims, -2), lam, lam);
    compare(r, "d.e = e.d_W", compose(ce.d(), s.e), compose(s.e, s.dw), wn, lam);
    compare(r, "d_W.p = p.d", compose(s.dw, s.p), compose(s.p, ce.d()), lam, wn);
    r.notes.push_back("kind: " + s.kind);
    if (!s.complement_note.empty()) r.notes.push_back("complement: " + s.complement_note);
    return r;
}

Report verify_cyclic(const SdrData& s) {
    Report r;
    const auto& ce = *s.ce;
    int n = ce.dim();
    auto dims = ce.dims();
    const auto& basis = ce.basis();
    auto name = [&](int deg, int pos) { return mask_name(basis.of_degree(deg)[pos]); };
    auto blk = [&](const GradedMap& g, int j) -> Matrix {
        if (j < 0 || j > n) return Matrix(0, 0);
        return g.block(j);
    };
    auto pblock = [&](int j) -> Matrix {
        if (j < 0 || j > n) return Matrix(0, 0);
        return ce.pairing_block(j);
    };
    // first nonzero entry of m (rows: degree ra, cols: degree cb)
    auto check_zero = [&](const std::string& check, const Matrix& m, int ra, int cb, bool rows_in_w,
                          std::string& witness) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (!is_zero(m(i, j))) {
                    std::string left = rows_in_w ? s.w_name(s.w_offset(ra) + i) : name(ra, i);
                    witness = check + " fails for a = " + left + ", b = " + name(cb, j) + ": residual " +
                              format_scalar(m(i, j));
                    return false;
                }
        return true;
    };

    struct Pending {
        std::string name;
        bool ok = true;
        std::string witness;
    };
    Pending compat{"d skew-adjoint: <da,b> + (-1)^|a| <a,db> = 0", true, {}};
    Pending selfadj{"k self-adjoint: <ka,b> = (-1)^|a| <a,kb>", true, {}};
    Pending isotropic{"im k isotropic: <ka,kb> = 0", true, {}};
    Pending adjoint{"e adjoint to p: <e w, a> = <e w, e p a>", true, {}};

    GradedMap ep = compose(s.e, s.p);
    for (int j = 0; j <= n; ++j) {
        int e_sign = ((j - 1) & 1) ? -1 : 1;  // shifted degree |a| = j - 1
        if (compat.ok && j + 1 <= n) {
            int m = n - j - 1;
            Matrix lhs = blk(ce.d(), j).transpose() * pblock(j + 1) + Scalar(e_sign) * (pblock(j) * blk(ce.d(), m));
            compat.ok = check_zero("compatibility", lhs, j, m, false, compat.witness);
        }
        if (selfadj.ok && j >= 1) {
            int m = n - j + 1;
            if (m >= 0 && m <= n) {
                Matrix lhs = blk(s.k, j).transpose() * pblock(j - 1) - Scalar(e_sign) * (pblock(j) * blk(s.k, m));
                selfadj.ok = check_zero("self-adjointness", lhs, j, m, false, selfadj.witness);
            }
        }
        if (isotropic.ok && j >= 1) {
            int m = n - j + 2;
            if (m >= 1 && m <= n) {
                Matrix lhs = blk(s.k, j).transpose() * pblock(j - 1) * blk(s.k, m);
                isotropic.ok = check_zero("isotropy", lhs, j, m, false, isotropic.witness);
            }
        }
        if (adjoint.ok && s.w_dims[j] > 0) {
            int m = n - j;
            Matrix resid = Matrix::identity(dims[m]) - blk(ep, m);
            Matrix lhs = blk(s.e, j).transpose() * pblock(j) * resid;
            adjoint.ok = check_zero("adjointness", lhs, j, m, true, adjoint.witness);
        }
    }
    for (auto* pc : {&compat, &selfadj, &isotropic, &adjoint}) r.add(pc->name, pc->ok, pc->witness);
    r.notes.push_back("graded adjoint: <A a, b> = (-1)^{|A||a|} <a, A^t b>, |a| = form degree - 1");
    r.notes.push_back("pairing: <a,b> = (-1)^{form degree of a} * top coefficient of a^b");
    return r;
}

ClosureResult image_closed_under_wedge(const SdrData& s) {
    ClosureResult out;
    const auto& ce = *s.ce;
    int total = s.w_total();
    std::vector<MultiVector> reps;
    for (int i = 0; i < total; ++i) reps.push_back(s.e_of(i));
    for (int a = 0; a < total; ++a)
        for (int b = a; b < total; ++b) {
            MultiVector prod = mv_wedge(reps[a], reps[b]);
            if (prod.is_zero()) continue;
            int deg = prod.degree();
            bool inside = s.w_dims[deg] > 0 && solve(s.e.block(deg), ce.basis().coords(prod, deg)).has_value();
            if (!inside) {
                out.closed = false;
                out.witness_a = a;
                out.witness_b = b;
                out.product = prod;
                return out;
            }
        }
    return out;
}

std::vector<MultiVector> parse_isotrope(const std::string& text, int dim) {
    std::vector<MultiVector> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        bool blank = true;
        for (char c : item)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        MultiVector v = parse_multivector(item, dim);
        if (v.is_zero()) throw InputError("isotrope vector '" + item + "' is zero");
        int deg = -1;
        try {
            deg = v.degree();
        } catch (const MathError&) {
            throw InputError("isotrope vector '" + item + "' is not homogeneous");
        }
        if (deg != 1) throw InputError("isotrope vector '" + item + "' is not of degree 1");
        out.push_back(std::move(v));
    }
    if (out.empty()) throw InputError("isotrope basis is empty");
    return out;
}

}  // namespace hptbv
