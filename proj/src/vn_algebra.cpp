#include "wstar/vn_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace wstar {

namespace {

constexpr std::uint64_t kInternalSeed = 0x77e57a6b5d2a11ULL;

// incremental Gram-Schmidt over vec'd matrices, with reorthogonalization
class SpanBuilder {
  public:
    SpanBuilder(Eigen::Index rows, Eigen::Index cols, const Tolerance& tol)
        : rows_(rows), cols_(cols), tol_(tol), q_(rows * cols, 0) {}

    bool add(const Matrix& m) {
        Vector v = vec(m);
        const double scale = v.norm();
        if (scale <= tol_.abs_eps) return false;
        for (int pass = 0; pass < 2; ++pass)
            if (q_.cols() > 0) v -= q_ * (q_.adjoint() * v).eval();
        if (v.norm() <= tol_.rank_cut(scale)) return false;
        v.normalize();
        q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
        q_.col(q_.cols() - 1) = v;
        return true;
    }

    Eigen::Index dim() const { return q_.cols(); }

    std::vector<Matrix> matrices() const {
        std::vector<Matrix> out;
        out.reserve(q_.cols());
        for (Eigen::Index j = 0; j < q_.cols(); ++j) out.push_back(unvec(q_.col(j), rows_, cols_));
        return out;
    }

  private:
    Eigen::Index rows_, cols_;
    Tolerance tol_;
    Matrix q_;
};

Matrix sylvester_op(const Matrix& g) {
    // vec(g x - x g) = (I ⊗ g - gᵀ ⊗ I) vec(x), column-major vec
    const Eigen::Index n = g.rows();
    Matrix s = Matrix::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        s.block(j * n, j * n, n, n) = g;
    for (Eigen::Index bj = 0; bj < n; ++bj)
        for (Eigen::Index bi = 0; bi < n; ++bi)
            for (Eigen::Index d = 0; d < n; ++d) s(bi * n + d, bj * n + d) -= g(bj, bi);
    return s;
}

// deterministic *-closed generating set small enough for the Sylvester stack
std::vector<Matrix> working_generators(const VNAlgebra& a) {
    std::vector<Matrix> gens;
    if (!a.generators.empty() && a.generators.size() <= 12) {
        gens = a.generators;
        const std::size_t count = gens.size();
        for (std::size_t i = 0; i < count; ++i) gens.push_back(gens[i].adjoint());
    } else {
        Rng rng(kInternalSeed);
        for (int i = 0; i < 2; ++i) {
            Matrix g = rng.span_element(a.basis);
            gens.push_back(g);
            gens.push_back(g.adjoint());
        }
    }
    return gens;
}

std::vector<Matrix> sylvester_nullspace_basis(const std::vector<Matrix>& gens, Eigen::Index n,
                                              const Tolerance& tol) {
    const Eigen::Index n2 = n * n;
    Matrix stack(static_cast<Eigen::Index>(gens.size()) * n2, n2);
    for (std::size_t i = 0; i < gens.size(); ++i)
        stack.middleRows(static_cast<Eigen::Index>(i) * n2, n2) = sylvester_op(gens[i]);
    std::vector<Matrix> out;
    for (const auto& v : nullspace(stack, tol)) out.push_back(unvec(v, n, n));
    return hs_orthonormalize(out, tol);
}

double max_commutation_residual(const std::vector<Matrix>& cand, const std::vector<Matrix>& basis) {
    double worst = 0.0;
    for (const auto& c : cand)
        for (const auto& b : basis) worst = std::max(worst, commutator(c, b).norm());
    return worst;
}

} // namespace

VNAlgebra algebra_from_basis(std::vector<Matrix> basis, std::vector<Matrix> generators,
                             Eigen::Index ambient_dim, const Tolerance& tol) {
    VNAlgebra a;
    a.ambient_dim = ambient_dim;
    a.tol = tol;
    a.basis = std::move(basis);
    a.generators = std::move(generators);
    return a;
}

VNAlgebra generate_algebra(const std::vector<Matrix>& generators, Eigen::Index ambient_dim,
                           const Tolerance& tol) {
    for (const auto& g : generators) {
        require_finite(g, "generate_algebra");
        if (g.rows() != ambient_dim || g.cols() != ambient_dim)
            throw DimensionMismatch("generate_algebra: generator size mismatch");
    }
    SpanBuilder span(ambient_dim, ambient_dim, tol);
    std::vector<Matrix> elements;
    auto adjoin = [&](const Matrix& m) {
        if (span.add(m)) {
            elements.push_back(m);
            return true;
        }
        return false;
    };
    adjoin(Matrix::Identity(ambient_dim, ambient_dim));
    for (const auto& g : generators) {
        adjoin(g);
        adjoin(g.adjoint().eval());
    }
    // adjoin products until the span stabilizes; dimension is monotone <= n^2
    std::size_t frontier_begin = 0;
    while (frontier_begin < elements.size()) {
        const std::size_t frontier_end = elements.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            adjoin(elements[i].adjoint().eval());
            for (std::size_t j = 0; j < elements.size() && j < frontier_end; ++j) {
                adjoin((elements[i] * elements[j]).eval());
                adjoin((elements[j] * elements[i]).eval());
            }
        }
        frontier_begin = frontier_end;
    }

    std::vector<Matrix> gens;
    gens.push_back(Matrix::Identity(ambient_dim, ambient_dim));
    for (const auto& g : generators) {
        gens.push_back(g);
        gens.push_back(g.adjoint());
    }
    return algebra_from_basis(hs_orthonormalize(span.matrices(), tol), std::move(gens),
                              ambient_dim, tol);
}

double membership_residual(const VNAlgebra& a, const Matrix& x) {
    return span_residual(a.basis, x);
}

bool contains(const VNAlgebra& a, const Matrix& x) {
    return membership_residual(a, x) <= a.tol.verify_cut(std::max(1.0, x.norm()));
}

double algebra_distance(const VNAlgebra& a, const VNAlgebra& b) {
    return subspace_distance(a.basis, b.basis);
}

VNAlgebra commutant(const VNAlgebra& a) {
    const Eigen::Index n = a.ambient_dim;
    std::vector<Matrix> cand = sylvester_nullspace_basis(working_generators(a), n, a.tol);
    if (max_commutation_residual(cand, a.basis) > a.tol.verify_cut()) {
        cand = sylvester_nullspace_basis(a.basis, n, a.tol);
        if (max_commutation_residual(cand, a.basis) > a.tol.verify_cut())
            throw StructureRecoveryFailed("commutant: verification failed twice");
    }
    return algebra_from_basis(std::move(cand), {}, n, a.tol);
}

VNAlgebra center(const VNAlgebra& a) {
    VNAlgebra c = commutant(a);
    return algebra_from_basis(span_intersection(a.basis, c.basis, a.tol), {}, a.ambient_dim,
                              a.tol);
}

bool is_abelian(const VNAlgebra& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.basis.size(); ++i)
        for (std::size_t j = i + 1; j < a.basis.size(); ++j)
            worst = std::max(worst, commutator(a.basis[i], a.basis[j]).norm());
    return worst <= a.tol.verify_cut();
}

bool is_projection(const Matrix& p, const Tolerance& tol) {
    const double scale = std::max(1.0, p.norm());
    return (p * p - p).norm() <= tol.verify_cut(scale) &&
           (p - p.adjoint()).norm() <= tol.verify_cut(scale);
}

double star_closure_residual(const VNAlgebra& a) {
    double worst = 0.0;
    for (const auto& b : a.basis) worst = std::max(worst, span_residual(a.basis, b.adjoint()));
    return worst;
}

double product_closure_residual(const VNAlgebra& a) {
    double worst = 0.0;
    for (const auto& x : a.basis)
        for (const auto& y : a.basis) worst = std::max(worst, span_residual(a.basis, x * y));
    return worst;
}

std::vector<Matrix> minimal_central_projections(const VNAlgebra& a, std::uint64_t seed) {
    VNAlgebra z = center(a);
    const Eigen::Index k = z.dim();
    const Eigen::Index n = a.ambient_dim;
    if (k == 1) return {Matrix::Identity(n, n)};
    Rng rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Matrix h = rng.span_element_hermitian(z.basis);
        auto clusters = spectral_clusters(h, a.tol);
        if (static_cast<Eigen::Index>(clusters.size()) != k) continue;
        bool ok = true;
        std::vector<Matrix> zs;
        for (const auto& c : clusters) {
            if (!is_projection(c.projection, a.tol) ||
                membership_residual(z, c.projection) > a.tol.verify_cut()) {
                ok = false;
                break;
            }
            zs.push_back(c.projection);
        }
        if (!ok) continue;
        Matrix sum = Matrix::Zero(n, n);
        for (const auto& p : zs) sum += p;
        if ((sum - Matrix::Identity(n, n)).norm() > a.tol.verify_cut()) continue;
        // canonical order, independent of the random draw
        std::sort(zs.begin(), zs.end(), [](const Matrix& x, const Matrix& y) {
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                double dx = std::real(x(i, i)), dy = std::real(y(i, i));
                if (std::abs(dx - dy) > 1e-6) return dx > dy;
            }
            return false;
        });
        return zs;
    }
    throw StructureRecoveryFailed("minimal_central_projections: retries exhausted");
}

namespace {

struct BlockData {
    Matrix z;
    Eigen::Index n_k, m_k;
    std::vector<Matrix> units; // e_{ij}, row-major i*n_k+j
    Matrix column_frame;       // ambient x (n_k*m_k), columns xi^k_{i,mu}
};

bool recover_block(const VNAlgebra& a, const Matrix& z, Rng& rng, const Tolerance& tol,
                   BlockData& out) {
    const Eigen::Index n = a.ambient_dim;
    std::vector<Matrix> block_basis;
    for (const auto& b : a.basis) block_basis.push_back(b * z);
    block_basis = hs_orthonormalize(block_basis, tol);
    const Eigen::Index d = static_cast<Eigen::Index>(block_basis.size());
    const Eigen::Index nk = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d))));
    if (nk * nk != d) return false;
    const Eigen::Index rk = static_cast<Eigen::Index>(std::llround(std::real(z.trace())));
    if (rk <= 0 || rk % nk != 0) return false;
    const Eigen::Index mk = rk / nk;

    // minimal projections: spectral projections of a shifted generic element
    Matrix h = rng.span_element_hermitian(block_basis);
    const double shift = 3.0 * op_norm(h) + 1.0;
    Matrix b = h + shift * z;
    auto clusters = spectral_clusters(b, tol);
    std::vector<Matrix> minimal;
    for (const auto& c : clusters) {
        if (c.value < 0.5 * shift) continue;
        if (c.multiplicity != mk) return false;
        minimal.push_back(c.projection);
    }
    if (static_cast<Eigen::Index>(minimal.size()) != nk) return false;
    for (const auto& p : minimal)
        if (membership_residual(a, p) > tol.verify_cut()) return false;

    // matrix units from the polar isometries of p_i a p_1
    std::vector<Matrix> vrow(nk); // e_{i1}
    vrow[0] = minimal[0];
    if (nk > 1) {
        Matrix g = rng.span_element(block_basis);
        for (Eigen::Index i = 1; i < nk; ++i) {
            Matrix w = minimal[i] * g * minimal[0];
            Matrix v = polar_decompose(w, tol).v;
            if ((v.adjoint() * v - minimal[0]).norm() > tol.verify_cut() ||
                (v * v.adjoint() - minimal[i]).norm() > tol.verify_cut() ||
                membership_residual(a, v) > tol.verify_cut())
                return false;
            vrow[i] = v;
        }
    }
    std::vector<Matrix> units(nk * nk);
    for (Eigen::Index i = 0; i < nk; ++i)
        for (Eigen::Index j = 0; j < nk; ++j) units[i * nk + j] = vrow[i] * vrow[j].adjoint();

    // orthonormal frame of range(e_11), propagated by the e_{i1}
    HermitianEig pe = hermitian_eig(minimal[0], tol);
    Matrix xi(n, mk);
    Eigen::Index got = 0;
    for (Eigen::Index c = 0; c < n && got < mk; ++c)
        if (pe.eigenvalues(n - 1 - c) > 0.5) xi.col(got++) = pe.eigenvectors.col(n - 1 - c);
    if (got != mk) return false;
    Matrix frame(n, nk * mk);
    for (Eigen::Index i = 0; i < nk; ++i)
        frame.middleCols(i * mk, mk) = vrow[i] * xi;

    out = BlockData{z, nk, mk, std::move(units), std::move(frame)};
    return true;
}

double canonical_residual(const VNAlgebra& a, const StructureData& st) {
    // conjugating by W must land exactly in ⊕_k M_{n_k} ⊗ I_{m_k}
    const Eigen::Index n = a.ambient_dim;
    std::vector<Eigen::Index> offset(st.block_dims.size() + 1, 0);
    for (std::size_t k = 0; k < st.block_dims.size(); ++k)
        offset[k + 1] = offset[k] + st.block_dims[k] * st.multiplicities[k];
    double worst = 0.0;
    for (const auto& b : a.basis) {
        Matrix c = st.canonical_unitary * b * st.canonical_unitary.adjoint();
        Matrix recon = Matrix::Zero(n, n);
        for (std::size_t k = 0; k < st.block_dims.size(); ++k) {
            const Eigen::Index nk = st.block_dims[k], mk = st.multiplicities[k];
            for (Eigen::Index i = 0; i < nk; ++i)
                for (Eigen::Index j = 0; j < nk; ++j) {
                    Complex coeff = 0.0;
                    for (Eigen::Index mu = 0; mu < mk; ++mu)
                        coeff += c(offset[k] + i * mk + mu, offset[k] + j * mk + mu);
                    coeff /= double(mk);
                    for (Eigen::Index mu = 0; mu < mk; ++mu)
                        recon(offset[k] + i * mk + mu, offset[k] + j * mk + mu) = coeff;
                }
        }
        worst = std::max(worst, (c - recon).norm());
    }
    return worst;
}

double unit_relations_residual(const StructureData& st) {
    double worst = 0.0;
    for (std::size_t k = 0; k < st.block_dims.size(); ++k) {
        const Eigen::Index nk = st.block_dims[k];
        for (Eigen::Index i = 0; i < nk; ++i)
            for (Eigen::Index j = 0; j < nk; ++j) {
                worst = std::max(worst,
                                 (st.unit_of(k, i, j).adjoint() - st.unit_of(k, j, i)).norm());
                for (Eigen::Index l = 0; l < nk; ++l)
                    for (Eigen::Index r = 0; r < nk; ++r) {
                        Matrix prod = st.unit_of(k, i, j) * st.unit_of(k, l, r);
                        Matrix expect = (j == l) ? st.unit_of(k, i, r)
                                                 : Matrix::Zero(prod.rows(), prod.cols());
                        worst = std::max(worst, (prod - expect).norm());
                    }
            }
    }
    return worst;
}

} // namespace

StructureData structure(const VNAlgebra& a, std::uint64_t seed) {
    const Eigen::Index n = a.ambient_dim;
    Rng rng(seed);
    std::vector<Matrix> zs = minimal_central_projections(a, Rng::child_seed(seed, 0xC0));

    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<BlockData> blocks(zs.size());
        bool ok = true;
        for (std::size_t k = 0; k < zs.size() && ok; ++k)
            ok = recover_block(a, zs[k], rng, a.tol, blocks[k]);
        if (!ok) continue;

        std::sort(blocks.begin(), blocks.end(), [](const BlockData& x, const BlockData& y) {
            if (x.n_k != y.n_k) return x.n_k > y.n_k;
            if (x.m_k != y.m_k) return x.m_k > y.m_k;
            for (Eigen::Index i = 0; i < x.z.rows(); ++i) {
                double dx = std::real(x.z(i, i)), dy = std::real(y.z(i, i));
                if (std::abs(dx - dy) > 1e-6) return dx > dy;
            }
            return false;
        });

        StructureData st;
        Matrix u(n, n);
        Eigen::Index col = 0;
        for (auto& blk : blocks) {
            st.central_minimal_projections.push_back(blk.z);
            st.block_dims.push_back(blk.n_k);
            st.multiplicities.push_back(blk.m_k);
            st.matrix_units.push_back(std::move(blk.units));
            u.middleCols(col, blk.column_frame.cols()) = blk.column_frame;
            col += blk.column_frame.cols();
        }
        if (col != n) continue;
        st.canonical_unitary = u.adjoint();

        if ((u.adjoint() * u - Matrix::Identity(n, n)).norm() > a.tol.verify_cut()) continue;
        if (unit_relations_residual(st) > a.tol.verify_cut()) continue;
        if (canonical_residual(a, st) > a.tol.verify_cut()) continue;
        return st;
    }
    throw StructureRecoveryFailed("structure: retries exhausted");
}

std::vector<Eigen::Index> blockwise_ranks(const Matrix& p, const StructureData& st) {
    std::vector<Eigen::Index> out;
    for (const auto& z : st.central_minimal_projections)
        out.push_back(static_cast<Eigen::Index>(std::llround(std::real((z * p).trace()))));
    return out;
}

Matrix central_support(const VNAlgebra& a, const Matrix& x, const StructureData& st) {
    if (membership_residual(a, x) > a.tol.verify_cut(std::max(1.0, x.norm())))
        throw NotInAlgebra("central_support: x not in algebra");
    Matrix z = Matrix::Zero(a.ambient_dim, a.ambient_dim);
    const double cut = a.tol.verify_cut(std::max(1.0, x.norm()));
    for (const auto& zk : st.central_minimal_projections)
        if ((zk * x).norm() > cut) z += zk;
    return z;
}

Matrix central_support(const VNAlgebra& a, const Matrix& x) {
    if (membership_residual(a, x) > a.tol.verify_cut(std::max(1.0, x.norm())))
        throw NotInAlgebra("central_support: x not in algebra");
    Matrix z = Matrix::Zero(a.ambient_dim, a.ambient_dim);
    const double cut = a.tol.verify_cut(std::max(1.0, x.norm()));
    for (const auto& zk : minimal_central_projections(a, kInternalSeed))
        if ((zk * x).norm() > cut) z += zk;
    return z;
}

Matrix abelian_projection_full(const VNAlgebra& n, const StructureData& st) {
    Matrix e = Matrix::Zero(n.ambient_dim, n.ambient_dim);
    for (std::size_t k = 0; k < st.block_dims.size(); ++k) e += st.unit_of(k, 0, 0);
    // dim(eNe) must equal the number of central blocks
    std::vector<Matrix> corner;
    for (const auto& b : n.basis) corner.push_back(e * b * e);
    corner = hs_orthonormalize(corner, n.tol);
    if (static_cast<Eigen::Index>(corner.size()) != st.blocks())
        throw StructureRecoveryFailed("abelian_projection_full: corner dimension mismatch");
    return e;
}

Matrix abelian_projection_full(const VNAlgebra& n, std::uint64_t seed) {
    return abelian_projection_full(n, structure(n, seed));
}

CompressedAlgebra compress(const VNAlgebra& a, const Matrix& q) {
    if (!is_projection(q, a.tol)) throw PreconditionViolated("compress: not a projection");
    const Eigen::Index r = static_cast<Eigen::Index>(std::llround(std::real(q.trace())));
    HermitianEig eig = hermitian_eig(q, a.tol);
    Matrix iso(a.ambient_dim, r);
    Eigen::Index got = 0;
    for (Eigen::Index c = a.ambient_dim - 1; c >= 0 && got < r; --c)
        if (eig.eigenvalues(c) > 0.5) iso.col(got++) = eig.eigenvectors.col(c);
    if (got != r) throw PreconditionViolated("compress: rank mismatch");
    std::vector<Matrix> basis;
    for (const auto& b : a.basis) basis.push_back(iso.adjoint() * b * iso);
    CompressedAlgebra out;
    out.algebra = algebra_from_basis(hs_orthonormalize(basis, a.tol), {}, r, a.tol);
    out.isometry = iso;
    return out;
}

Matrix extend_abelian_projection(const VNAlgebra& n, const Matrix& p, const Matrix& f,
                                 std::uint64_t seed) {
    const Tolerance& tol = n.tol;
    if (!is_projection(p, tol) || !is_projection(f, tol) || !contains(n, p) || !contains(n, f))
        throw PreconditionViolated("extend_abelian_projection: p, f must be projections in N");
    if ((f * p - f).norm() > tol.verify_cut() || (p * f - f).norm() > tol.verify_cut())
        throw PreconditionViolated("extend_abelian_projection: f not under p");

    // f abelian in pNp with central support p, checked in the compressed picture
    CompressedAlgebra comp = compress(n, p);
    Matrix ft = comp.isometry.adjoint() * f * comp.isometry;
    std::vector<Matrix> corner;
    for (const auto& b : comp.algebra.basis) corner.push_back(ft * b * ft);
    VNAlgebra cornerAlg =
        algebra_from_basis(hs_orthonormalize(corner, tol), {}, comp.algebra.ambient_dim, tol);
    if (!is_abelian(cornerAlg))
        throw PreconditionViolated("extend_abelian_projection: f not abelian in pNp");
    Matrix zf = central_support(comp.algebra, ft);
    if ((zf - Matrix::Identity(zf.rows(), zf.cols())).norm() > tol.verify_cut())
        throw PreconditionViolated("extend_abelian_projection: z_{pNp}(f) != p");

    Matrix z = central_support(n, f);
    Matrix rest = Matrix::Identity(n.ambient_dim, n.ambient_dim) - z;
    Matrix e = f;
    if (rest.norm() > tol.verify_cut()) {
        CompressedAlgebra away = compress(n, rest);
        Matrix f1c = abelian_projection_full(away.algebra, seed);
        e += away.isometry * f1c * away.isometry.adjoint();
    }

    if (!is_projection(e, tol)) throw StructureRecoveryFailed("extend_abelian_projection");
    if ((e * p - f).norm() > tol.verify_cut() || (p * e - f).norm() > tol.verify_cut())
        throw StructureRecoveryFailed("extend_abelian_projection: ep = f = pe failed");
    return e;
}

Matrix mvn_partial_isometry(const VNAlgebra& n, const Matrix& e, const Matrix& f,
                            std::uint64_t seed) {
    return mvn_partial_isometry(n, e, f, structure(n, Rng::child_seed(seed, 0xA1)), seed);
}

Matrix mvn_partial_isometry(const VNAlgebra& n, const Matrix& e, const Matrix& f,
                            const StructureData& st, std::uint64_t seed) {
    const Tolerance& tol = n.tol;
    if (!is_projection(e, tol) || !is_projection(f, tol) || !contains(n, e) || !contains(n, f))
        throw PreconditionViolated("mvn_partial_isometry: need projections in N");
    if (blockwise_ranks(e, st) != blockwise_ranks(f, st))
        throw NotEquivalent("mvn_partial_isometry: blockwise ranks differ");
    Rng rng(seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Matrix a = rng.span_element(n.basis);
        Matrix v = polar_decompose(f * a * e, tol).v;
        if ((v.adjoint() * v - e).norm() <= tol.verify_cut() &&
            (v * v.adjoint() - f).norm() <= tol.verify_cut() &&
            membership_residual(n, v) <= tol.verify_cut())
            return v;
    }
    throw StructureRecoveryFailed("mvn_partial_isometry: retries exhausted");
}

VNAlgebra relative_double_commutant(const VNAlgebra& n, const VNAlgebra& m) {
    for (const auto& b : m.basis)
        if (!contains(n, b)) throw InclusionViolated("relative_double_commutant: M not in N");
    VNAlgebra zn = center(n);
    for (const auto& b : zn.basis)
        if (!contains(m, b)) throw InclusionViolated("relative_double_commutant: Z(N) not in M");
    VNAlgebra mp = commutant(m);
    VNAlgebra rel = algebra_from_basis(span_intersection(mp.basis, n.basis, n.tol), {},
                                       n.ambient_dim, n.tol);
    VNAlgebra relp = commutant(rel);
    return algebra_from_basis(span_intersection(relp.basis, n.basis, n.tol), {}, n.ambient_dim,
                              n.tol);
}

} // namespace wstar
