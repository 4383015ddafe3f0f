#include "wstar/reduction.hpp"

#include <Eigen/LU>

#include <cmath>

namespace wstar {

namespace {

constexpr std::uint64_t kInternalSeed = 0x526564756374ULL;

} // namespace

CharacterSet characters(const VNAlgebra& z) {
    if (!is_abelian(z)) throw NotAbelian("characters: algebra is not abelian");
    CharacterSet cs;
    cs.Z = z;
    cs.minimal_projections = minimal_central_projections(z, kInternalSeed);
    return cs;
}

std::vector<Fiber> fiber_spaces(const ModulePtr& mod) {
    std::vector<Fiber> out;
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        out.push_back({k, mod->fiber_basis[k]});
    return out;
}

Vector fiber_vector(const ModulePtr& mod, const Matrix& x, Eigen::Index k) {
    return mod->fiber_coord[k] * module_coords(mod, x);
}

FiberedOperator pi_fiber(const ModulePtr& mod, const Matrix& a) {
    if (membership_residual(mod->N, a) > mod->N.tol.verify_cut(std::max(1.0, a.norm())))
        throw NotInAlgebra("pi_fiber: a not in N");
    FiberedOperator out;
    for (Eigen::Index k = 0; k < mod->characters(); ++k) {
        const Eigen::Index fd = mod->fiber_dim(k);
        Matrix block(fd, fd);
        for (Eigen::Index j = 0; j < fd; ++j)
            block.col(j) = mod->fiber_coord[k] * module_coords(mod, a * mod->fiber_basis[k][j]);
        out.blocks.push_back(std::move(block));
    }
    return out;
}

Matrix synthesize_vector(const ModulePtr& mod, const std::vector<Vector>& family) {
    if (static_cast<Eigen::Index>(family.size()) != mod->characters())
        throw DimensionMismatch("synthesize_vector: one vector per character required");
    Matrix x = Matrix::Zero(mod->N.ambient_dim, mod->N.ambient_dim);
    for (Eigen::Index k = 0; k < mod->characters(); ++k) {
        if (family[k].size() != mod->fiber_dim(k))
            throw DimensionMismatch("synthesize_vector: fiber dimension mismatch");
        for (Eigen::Index j = 0; j < mod->fiber_dim(k); ++j)
            x += family[k](j) * mod->fiber_basis[k][j];
    }
    return x;
}

Matrix synthesize_operator(const ModulePtr& mod, const FiberedOperator& family) {
    if (static_cast<Eigen::Index>(family.blocks.size()) != mod->characters())
        throw DimensionMismatch("synthesize_operator: one block per character required");
    // solve for a in N matching every fiber compression
    const Eigen::Index dimN = mod->N.dim();
    Eigen::Index rows = 0;
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        rows += mod->fiber_dim(k) * mod->fiber_dim(k);
    Matrix sys(rows, dimN);
    Vector rhs(rows);
    for (Eigen::Index i = 0; i < dimN; ++i) {
        FiberedOperator fi = pi_fiber(mod, mod->N.basis[i]);
        Eigen::Index row = 0;
        for (Eigen::Index k = 0; k < mod->characters(); ++k) {
            const Eigen::Index sz = fi.blocks[k].size();
            sys.block(row, i, sz, 1) = vec(fi.blocks[k]);
            row += sz;
        }
    }
    Eigen::Index row = 0;
    for (Eigen::Index k = 0; k < mod->characters(); ++k) {
        const Eigen::Index fd = mod->fiber_dim(k);
        if (family.blocks[k].rows() != fd || family.blocks[k].cols() != fd)
            throw DimensionMismatch("synthesize_operator: block size mismatch");
        rhs.segment(row, fd * fd) = vec(family.blocks[k]);
        row += fd * fd;
    }
    Vector coeff = lstsq(sys, rhs);
    double scale = std::max(1.0, rhs.norm());
    if ((sys * coeff - rhs).norm() > mod->N.tol.verify_cut(scale))
        throw StructureRecoveryFailed("synthesize_operator: family is not a compression of N");
    Matrix a = Matrix::Zero(mod->N.ambient_dim, mod->N.ambient_dim);
    for (Eigen::Index i = 0; i < dimN; ++i) a += coeff(i) * mod->N.basis[i];
    return a;
}

namespace {

VNAlgebra fiber_image_algebra(const ModulePtr& mod, const std::vector<Matrix>& ambient_basis,
                              Eigen::Index k) {
    std::vector<Matrix> images;
    for (const auto& b : ambient_basis) {
        FiberedOperator f = pi_fiber(mod, b);
        images.push_back(f.blocks[k]);
    }
    return algebra_from_basis(hs_orthonormalize(images, mod->N.tol), {}, mod->fiber_dim(k),
                              mod->N.tol);
}

} // namespace

std::vector<FiberAlgebras> decompose_along(const VNAlgebra& m, const VNAlgebra& z,
                                           const ModulePtr& mod) {
    const VNAlgebra& n = mod->N;
    for (const auto& b : m.basis)
        if (membership_residual(n, b) > n.tol.verify_cut())
            throw InclusionViolated("decompose_along: M not contained in N");
    VNAlgebra zm = center(m);
    for (const auto& b : z.basis)
        if (membership_residual(zm, b) > zm.tol.verify_cut())
            throw InclusionViolated("decompose_along: Z not central in M");

    VNAlgebra mp = commutant(m);
    VNAlgebra rel = algebra_from_basis(span_intersection(mp.basis, n.basis, n.tol), {},
                                       n.ambient_dim, n.tol);
    std::vector<FiberAlgebras> out;
    for (Eigen::Index k = 0; k < mod->characters(); ++k) {
        VNAlgebra pim = fiber_image_algebra(mod, m.basis, k);
        VNAlgebra pirel = fiber_image_algebra(mod, rel.basis, k);
        out.push_back({k, commutant(commutant(pim)), commutant(pirel)});
    }
    return out;
}

std::vector<GapReport> fiber_bicommutant_gap(const VNAlgebra& m, const VNAlgebra& z,
                                             const ModulePtr& mod) {
    std::vector<GapReport> out;
    for (const auto& fa : decompose_along(m, z, mod)) {
        double dist = algebra_distance(fa.pi_m_bicommutant, fa.pi_rel_commutant);
        out.push_back({fa.character, fa.pi_m_bicommutant.dim(), fa.pi_rel_commutant.dim(), dist,
                       dist <= m.tol.verify_cut()});
    }
    return out;
}

Matrix MasaRep::apply(const Matrix& x) const {
    Matrix c = st.canonical_unitary * x * st.canonical_unitary.adjoint();
    Matrix out = Matrix::Zero(dim, dim);
    Eigen::Index amb = 0;
    for (Eigen::Index k = 0; k < st.blocks(); ++k) {
        const Eigen::Index nk = st.block_dims[k], mk = st.multiplicities[k];
        for (Eigen::Index i = 0; i < nk; ++i)
            for (Eigen::Index j = 0; j < nk; ++j) {
                Complex coeff = 0.0;
                for (Eigen::Index mu = 0; mu < mk; ++mu)
                    coeff += c(amb + i * mk + mu, amb + j * mk + mu);
                out(offsets[k] + i, offsets[k] + j) = coeff / double(mk);
            }
        amb += nk * mk;
    }
    return out;
}

Matrix MasaRep::invert(const Matrix& y) const {
    const Eigen::Index n = N.ambient_dim;
    Matrix c = Matrix::Zero(n, n);
    Eigen::Index amb = 0;
    for (Eigen::Index k = 0; k < st.blocks(); ++k) {
        const Eigen::Index nk = st.block_dims[k], mk = st.multiplicities[k];
        for (Eigen::Index i = 0; i < nk; ++i)
            for (Eigen::Index j = 0; j < nk; ++j)
                for (Eigen::Index mu = 0; mu < mk; ++mu)
                    c(amb + i * mk + mu, amb + j * mk + mu) = y(offsets[k] + i, offsets[k] + j);
        amb += nk * mk;
    }
    return st.canonical_unitary.adjoint() * c * st.canonical_unitary;
}

Matrix MasaRep::z_image(Eigen::Index k) const {
    Matrix z = Matrix::Zero(dim, dim);
    z.block(offsets[k], offsets[k], st.block_dims[k], st.block_dims[k]) =
        Matrix::Identity(st.block_dims[k], st.block_dims[k]);
    return z;
}

VNAlgebra MasaRep::image() const {
    std::vector<Matrix> basis;
    for (const auto& b : N.basis) basis.push_back(apply(b));
    std::vector<Matrix> gens;
    for (const auto& g : N.generators) gens.push_back(apply(g));
    return algebra_from_basis(hs_orthonormalize(basis, N.tol), std::move(gens), dim, N.tol);
}

MasaRep spatial_masa_representation(const VNAlgebra& n, const StructureData& st) {
    MasaRep r;
    r.N = n;
    r.st = st;
    r.offsets.assign(st.blocks(), 0);
    Eigen::Index off = 0;
    for (Eigen::Index k = 0; k < st.blocks(); ++k) {
        r.offsets[k] = off;
        off += st.block_dims[k];
    }
    r.dim = off;
    return r;
}

MasaRep spatial_masa_representation(const VNAlgebra& n) {
    return spatial_masa_representation(n, structure(n, kInternalSeed));
}

StructureData reorder_blocks(const StructureData& st, const std::vector<Eigen::Index>& perm) {
    StructureData out;
    out.canonical_unitary = st.canonical_unitary; // only block bookkeeping changes
    Matrix u(st.canonical_unitary.rows(), st.canonical_unitary.cols());
    std::vector<Eigen::Index> offsets(st.blocks() + 1, 0);
    for (Eigen::Index k = 0; k < st.blocks(); ++k)
        offsets[k + 1] = offsets[k] + st.block_dims[k] * st.multiplicities[k];
    Eigen::Index row = 0;
    for (Eigen::Index src : perm) {
        out.central_minimal_projections.push_back(st.central_minimal_projections[src]);
        out.block_dims.push_back(st.block_dims[src]);
        out.multiplicities.push_back(st.multiplicities[src]);
        out.matrix_units.push_back(st.matrix_units[src]);
        const Eigen::Index len = st.block_dims[src] * st.multiplicities[src];
        u.middleRows(row, len) = st.canonical_unitary.middleRows(offsets[src], len);
        row += len;
    }
    out.canonical_unitary = u;
    return out;
}

std::vector<Matrix> intertwiner_space(const MasaRep& from, const MasaRep& to) {
    if (from.st.blocks() != to.st.blocks())
        throw CharacterMismatch("intertwiner_space: different character counts");
    std::vector<Matrix> basis;
    for (Eigen::Index k = 0; k < from.st.blocks(); ++k)
        for (Eigen::Index a = 0; a < to.st.block_dims[k]; ++a)
            for (Eigen::Index b = 0; b < from.st.block_dims[k]; ++b) {
                Matrix t = Matrix::Zero(to.dim, from.dim);
                t(to.offsets[k] + a, from.offsets[k] + b) = 1.0;
                basis.push_back(std::move(t));
            }
    return basis;
}

Matrix DoubledAlgebra::embed(const Matrix& x1, const Matrix& x2) const {
    Matrix y1 = r1.apply(x1), y2 = r2.apply(x2);
    Matrix out = Matrix::Zero(r1.dim + r2.dim, r1.dim + r2.dim);
    out.topLeftCorner(r1.dim, r1.dim) = y1;
    out.topRightCorner(r1.dim, r2.dim) = y1 * V.adjoint();
    out.bottomLeftCorner(r2.dim, r1.dim) = y2 * V;
    out.bottomRightCorner(r2.dim, r2.dim) = y2;
    return out;
}

std::pair<Matrix, Matrix> DoubledAlgebra::extract(const Matrix& x) const {
    return {r1.invert(x.topLeftCorner(r1.dim, r1.dim)),
            r2.invert(x.bottomRightCorner(r2.dim, r2.dim))};
}

DoubledAlgebra doubled_algebra(const MasaRep& r1, const Matrix& e1, const MasaRep& r2,
                               const Matrix& e2, std::uint64_t seed) {
    if (r1.st.blocks() != r2.st.blocks())
        throw CharacterMismatch("doubled_algebra: different character counts");
    const Tolerance tol = r1.N.tol;
    const Eigen::Index k_count = r1.st.blocks();
    const Eigen::Index d1 = r1.dim, d2 = r2.dim, d = d1 + d2;

    DoubledAlgebra out;
    out.r1 = r1;
    out.r2 = r2;
    out.e1 = e1;
    out.e2 = e2;

    // V matches the one-dimensional character subspaces of rho_j(e_j)H_j
    Matrix re1 = r1.apply(e1), re2 = r2.apply(e2);
    out.V = Matrix::Zero(d2, d1);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        Matrix p1 = r1.z_image(k) * re1;
        Matrix p2 = r2.z_image(k) * re2;
        if (std::llround(std::real(p1.trace())) != 1 || std::llround(std::real(p2.trace())) != 1)
            throw CharacterMismatch("doubled_algebra: character subspace not one-dimensional");
        HermitianEig g1 = hermitian_eig(0.5 * (p1 + p1.adjoint()), tol);
        HermitianEig g2 = hermitian_eig(0.5 * (p2 + p2.adjoint()), tol);
        Vector xi = g1.eigenvectors.col(d1 - 1);
        Vector eta = g2.eigenvectors.col(d2 - 1);
        normalize_phase(xi);
        normalize_phase(eta);
        out.V += eta * xi.adjoint();
    }
    if (((out.V.adjoint() * out.V) - re1).norm() > tol.verify_cut() ||
        ((out.V * out.V.adjoint()) - re2).norm() > tol.verify_cut())
        throw StructureRecoveryFailed("doubled_algebra: V construction failed");

    // N = commutant of the diagonal Z action, assembled blockwise; structure
    // data is exact because the z images are 0/1 diagonal projections
    StructureData stN;
    std::vector<Matrix> basis;
    Matrix w = Matrix::Zero(d, d);
    Eigen::Index row = 0;
    for (Eigen::Index k = 0; k < k_count; ++k) {
        std::vector<Eigen::Index> indices;
        for (Eigen::Index i = 0; i < r1.st.block_dims[k]; ++i)
            indices.push_back(r1.offsets[k] + i);
        for (Eigen::Index i = 0; i < r2.st.block_dims[k]; ++i)
            indices.push_back(d1 + r2.offsets[k] + i);
        const Eigen::Index nk = static_cast<Eigen::Index>(indices.size());
        Matrix zk = Matrix::Zero(d, d);
        std::vector<Matrix> units(nk * nk);
        for (Eigen::Index i = 0; i < nk; ++i) {
            zk(indices[i], indices[i]) = 1.0;
            for (Eigen::Index j = 0; j < nk; ++j) {
                Matrix u = Matrix::Zero(d, d);
                u(indices[i], indices[j]) = 1.0;
                units[i * nk + j] = u;
                basis.push_back(std::move(u));
            }
            w(row + i, indices[i]) = 1.0;
        }
        stN.central_minimal_projections.push_back(std::move(zk));
        stN.block_dims.push_back(nk);
        stN.multiplicities.push_back(1);
        stN.matrix_units.push_back(std::move(units));
        row += nk;
    }
    stN.canonical_unitary = w;
    out.stN = stN;
    out.N = algebra_from_basis(std::move(basis), {}, d, tol);

    out.e = Matrix::Zero(d, d);
    out.e.topLeftCorner(d1, d1) = re1;
    out.e.topRightCorner(d1, d2) = out.V.adjoint();
    out.e.bottomLeftCorner(d2, d1) = out.V;
    out.e.bottomRightCorner(d2, d2) = re2;
    out.e *= 0.5;
    if (!is_projection(out.e, tol))
        throw StructureRecoveryFailed("doubled_algebra: e is not a projection");

    out.mod1 = make_module(r1.N, e1, r1.st);
    out.mod2 = make_module(r2.N, e2, r2.st);
    out.modNe = make_module(out.N, out.e, out.stN);
    (void)seed;
    return out;
}

ModuleMap module_map_from_intertwiner(const DoubledAlgebra& d, const Matrix& t) {
    const Tolerance tol = d.N.tol;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < d.r1.st.blocks(); ++k)
        worst = std::max(worst, (t * d.r1.z_image(k) - d.r2.z_image(k) * t).norm());
    if (worst > tol.verify_cut(std::max(1.0, t.norm())))
        throw NotIntertwiner("module_map_from_intertwiner: T does not intertwine Z");
    Matrix action(d.mod2->dim(), d.mod1->dim());
    for (Eigen::Index j = 0; j < d.mod1->dim(); ++j) {
        Matrix y = t * d.r1.apply(d.mod1->basis[j]) * d.V.adjoint();
        action.col(j) = module_coords(d.mod2, d.r2.invert(y));
    }
    return {d.mod1, d.mod2, false, std::move(action)};
}

ModuleMap module_map_from_intertwiner_reverse(const DoubledAlgebra& d, const Matrix& s) {
    const Tolerance tol = d.N.tol;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < d.r1.st.blocks(); ++k)
        worst = std::max(worst, (s * d.r2.z_image(k) - d.r1.z_image(k) * s).norm());
    if (worst > tol.verify_cut(std::max(1.0, s.norm())))
        throw NotIntertwiner("module_map_from_intertwiner_reverse: S does not intertwine Z");
    Matrix action(d.mod1->dim(), d.mod2->dim());
    for (Eigen::Index j = 0; j < d.mod2->dim(); ++j) {
        Matrix y = s * d.r2.apply(d.mod2->basis[j]) * d.V;
        action.col(j) = module_coords(d.mod1, d.r1.invert(y));
    }
    return {d.mod2, d.mod1, false, std::move(action)};
}

Matrix intertwiner_from_module_map(const DoubledAlgebra& d, const ModuleMap& s) {
    if (s.antilinear) throw NotZLinear("intertwiner_from_module_map: map must be linear");
    // lift to the doubled module per the proof of the bijection theorem
    Matrix action(d.modNe->dim(), d.modNe->dim());
    for (Eigen::Index j = 0; j < d.modNe->dim(); ++j) {
        auto [x1, x2] = d.extract(d.modNe->basis[j]);
        (void)x2;
        Matrix sx1 = s.apply(x1);
        action.col(j) = module_coords(d.modNe, d.embed(Matrix::Zero(x1.rows(), x1.cols()), sx1));
    }
    ModuleMap lifted{d.modNe, d.modNe, false, std::move(action)};
    Matrix r = L_inverse(d.modNe, lifted);
    return r.bottomLeftCorner(d.r2.dim, d.r1.dim);
}

} // namespace wstar
