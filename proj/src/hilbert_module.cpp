#include "wstar/hilbert_module.hpp"

#include <Eigen/LU>

#include <cmath>

namespace wstar {

namespace {

constexpr std::uint64_t kInternalSeed = 0x4d6f64756c65ULL;

double fiber_ip_denominator(const Matrix& zk, const Matrix& e) {
    return std::real((zk * e).trace());
}

// omega_k(Phi_e(y* x)) = tr(z_k e y* x e) / tr(z_k e)
Complex fiber_ip(const Matrix& zk, const Matrix& e, const Matrix& x, const Matrix& y,
                 double denom) {
    return ((zk * e * y.adjoint() * x * e).trace()) / denom;
}

Matrix stacked_fiber_coords(const HilbertModule& m) {
    Matrix c(m.dim(), m.dim());
    Eigen::Index row = 0;
    for (Eigen::Index k = 0; k < m.characters(); ++k) {
        if (m.fiber_coord[k].rows() == 0) continue;
        c.middleRows(row, m.fiber_coord[k].rows()) = m.fiber_coord[k];
        row += m.fiber_coord[k].rows();
    }
    return c;
}

void build_fibers(HilbertModule& m) {
    const Eigen::Index dim = m.dim();
    m.fiber_basis.clear();
    m.fiber_coord.clear();
    for (const auto& zk : m.st.central_minimal_projections) {
        std::vector<Matrix> raw;
        for (const auto& x : m.basis) raw.push_back(zk * x);
        raw = hs_orthonormalize(raw, m.N.tol);
        const double denom = fiber_ip_denominator(zk, m.e);
        const Eigen::Index fdim = static_cast<Eigen::Index>(raw.size());
        if (fdim == 0) {
            m.fiber_basis.emplace_back();
            m.fiber_coord.push_back(Matrix(0, dim));
            continue;
        }
        Matrix gram(fdim, fdim);
        for (Eigen::Index i = 0; i < fdim; ++i)
            for (Eigen::Index j = 0; j < fdim; ++j)
                gram(i, j) = fiber_ip(zk, m.e, raw[i], raw[j], denom);
        Matrix g = inv_sqrt_psd(0.5 * (gram + gram.adjoint()), m.N.tol);
        std::vector<Matrix> fib(fdim, Matrix::Zero(m.N.ambient_dim, m.N.ambient_dim));
        for (Eigen::Index l = 0; l < fdim; ++l)
            for (Eigen::Index i = 0; i < fdim; ++i) fib[l] += g(i, l) * raw[i];
        Matrix coord(fdim, dim);
        for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index l = 0; l < fdim; ++l)
                coord(l, a) = fiber_ip(zk, m.e, m.basis[a], fib[l], denom);
        m.fiber_basis.push_back(std::move(fib));
        m.fiber_coord.push_back(std::move(coord));
    }
}

ModulePtr finish_module(HilbertModule&& m) {
    build_fibers(m);
    Eigen::Index total = 0;
    for (Eigen::Index k = 0; k < m.characters(); ++k) total += m.fiber_dim(k);
    if (total != m.dim())
        throw StructureRecoveryFailed("make_module: fiber dimensions do not add up");
    return std::make_shared<HilbertModule>(std::move(m));
}

} // namespace

ModulePtr make_module(const VNAlgebra& n, const Matrix& e, const StructureData& st) {
    const Tolerance& tol = n.tol;
    if (!is_projection(e, tol) || !contains(n, e))
        throw PreconditionViolated("make_module: e must be a projection in N");
    // abelian with full central support: one corner dimension per block
    std::vector<Matrix> corner;
    for (const auto& b : n.basis) corner.push_back(e * b * e);
    corner = hs_orthonormalize(corner, tol);
    if (static_cast<Eigen::Index>(corner.size()) != st.blocks())
        throw PreconditionViolated("make_module: e not abelian of full central support");
    for (const auto& zk : st.central_minimal_projections)
        if ((zk * e).norm() <= tol.verify_cut())
            throw PreconditionViolated("make_module: central support not full");

    HilbertModule m;
    m.N = n;
    m.e = e;
    m.p = Matrix::Identity(n.ambient_dim, n.ambient_dim);
    m.st = st;
    m.Z = algebra_from_basis(hs_orthonormalize(st.central_minimal_projections, tol), {},
                             n.ambient_dim, tol);
    std::vector<Matrix> span;
    for (const auto& b : n.basis) span.push_back(b * e);
    m.basis = hs_orthonormalize(span, tol);

    Eigen::Index expected = 0;
    for (auto nk : st.block_dims) expected += nk;
    if (m.dim() != expected)
        throw StructureRecoveryFailed("make_module: dim(Ne) != sum of block dims");
    return finish_module(std::move(m));
}

ModulePtr make_module(const VNAlgebra& n, const Matrix& e, std::uint64_t seed) {
    return make_module(n, e, structure(n, seed));
}

ModulePtr module_from_basis(const VNAlgebra& n, const Matrix& e, const StructureData& st,
                            const std::vector<Matrix>& basis) {
    ModulePtr reference = make_module(n, e, st);
    if (static_cast<Eigen::Index>(basis.size()) != reference->dim())
        throw PreconditionViolated("module_from_basis: dimension mismatch");
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (module_residual(reference, basis[i]) > n.tol.verify_cut(std::max(1.0, basis[i].norm())))
            throw PreconditionViolated("module_from_basis: element outside Ne");
        for (std::size_t j = 0; j <= i; ++j) {
            Complex g = hs_inner(basis[i], basis[j]);
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - Complex(expect, 0.0)) > n.tol.verify_cut())
                throw PreconditionViolated("module_from_basis: basis not HS-orthonormal");
        }
    }
    HilbertModule m;
    m.N = n;
    m.e = e;
    m.p = Matrix::Identity(n.ambient_dim, n.ambient_dim);
    m.Z = reference->Z;
    m.st = st;
    m.basis = basis;
    return finish_module(std::move(m));
}

ModulePtr restrict_module(const ModulePtr& mod, const Matrix& p) {
    const Tolerance& tol = mod->N.tol;
    if (!is_projection(p, tol) || !contains(mod->N, p))
        throw PreconditionViolated("restrict_module: p must be a projection in N");
    HilbertModule m;
    m.N = mod->N;
    m.e = mod->e;
    m.p = p;
    m.Z = mod->Z;
    m.st = mod->st;
    std::vector<Matrix> span;
    for (const auto& x : mod->basis) span.push_back(p * x);
    m.basis = hs_orthonormalize(span, tol);
    return finish_module(std::move(m));
}

double module_residual(const ModulePtr& mod, const Matrix& x) {
    return span_residual(mod->basis, x);
}

Vector module_coords(const ModulePtr& mod, const Matrix& x) {
    if (module_residual(mod, x) > mod->N.tol.verify_cut(std::max(1.0, x.norm())))
        throw NotInModule("module_coords: element outside the module");
    Vector c(mod->dim());
    for (Eigen::Index i = 0; i < mod->dim(); ++i) c(i) = hs_inner(x, mod->basis[i]);
    return c;
}

Matrix module_element(const ModulePtr& mod, const Vector& coords) {
    Matrix x = Matrix::Zero(mod->N.ambient_dim, mod->N.ambient_dim);
    for (Eigen::Index i = 0; i < mod->dim(); ++i) x += coords(i) * mod->basis[i];
    return x;
}

Matrix conditional_expectation(const ModulePtr& mod, const Matrix& x) {
    if (membership_residual(mod->N, x) > mod->N.tol.verify_cut(std::max(1.0, x.norm())))
        throw NotInAlgebra("conditional_expectation: x not in N");
    Matrix z = Matrix::Zero(mod->N.ambient_dim, mod->N.ambient_dim);
    for (const auto& zk : mod->st.central_minimal_projections) {
        Complex lambda = ((zk * mod->e * x * mod->e).trace()) / ((zk * mod->e).trace());
        z += lambda * zk;
    }
    return z;
}

Matrix inner(const ModulePtr& mod, const Matrix& x, const Matrix& y) {
    const double cut = mod->N.tol.verify_cut(std::max(1.0, std::max(x.norm(), y.norm())));
    if (module_residual(mod, x) > cut || module_residual(mod, y) > cut)
        throw NotInModule("inner: arguments must lie in the module");
    return conditional_expectation(mod, y.adjoint() * x);
}

Vector central_coefficients(const ModulePtr& mod, const Matrix& z) {
    Vector c(mod->characters());
    for (Eigen::Index k = 0; k < mod->characters(); ++k) {
        const Matrix& zk = mod->st.central_minimal_projections[k];
        c(k) = (z * zk).trace() / zk.trace();
    }
    return c;
}

double module_vector_norm(const ModulePtr& mod, const Matrix& x) {
    Vector c = module_coords(mod, x);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        if (mod->fiber_coord[k].rows() > 0)
            worst = std::max(worst, (mod->fiber_coord[k] * c).norm());
    return worst;
}

Matrix ModuleMap::apply(const Matrix& x) const {
    return module_element(target, apply_coords(module_coords(source, x)));
}

ModuleMap compose(const ModuleMap& s, const ModuleMap& t) {
    ModuleMap out;
    out.source = t.source;
    out.target = s.target;
    out.antilinear = (s.antilinear != t.antilinear);
    out.action = s.antilinear ? Matrix(s.action * t.action.conjugate()) : Matrix(s.action * t.action);
    return out;
}

ModuleMap identity_map(const ModulePtr& mod) {
    return {mod, mod, false, Matrix::Identity(mod->dim(), mod->dim())};
}

ModuleMap L_rep(const ModulePtr& mod, const Matrix& a) {
    if (membership_residual(mod->N, a) > mod->N.tol.verify_cut(std::max(1.0, a.norm())))
        throw NotInAlgebra("L_rep: a not in N");
    const Eigen::Index n = mod->N.ambient_dim;
    if ((mod->p - Matrix::Identity(n, n)).norm() > mod->N.tol.verify_cut()) {
        Matrix cmp = mod->p * a * mod->p;
        if ((cmp - a).norm() > mod->N.tol.verify_cut(std::max(1.0, a.norm())))
            throw NotCompressed("L_rep: a not in pNp");
    }
    Matrix action(mod->dim(), mod->dim());
    for (Eigen::Index j = 0; j < mod->dim(); ++j)
        action.col(j) = module_coords(mod, a * mod->basis[j]);
    return {mod, mod, false, std::move(action)};
}

double z_linearity_residual(const ModuleMap& t) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < t.source->characters(); ++k) {
        Matrix ls = L_rep(t.source, t.source->st.central_minimal_projections[k]).action;
        Matrix lt = L_rep(t.target, t.target->st.central_minimal_projections[k]).action;
        Matrix r = t.antilinear ? Matrix(t.action * ls.conjugate() - lt * t.action)
                                : Matrix(t.action * ls - lt * t.action);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

FiberBlocks fiber_blocks(const ModuleMap& t) {
    FiberBlocks out;
    for (Eigen::Index k = 0; k < t.source->characters(); ++k) {
        const Matrix& cs = t.source->fiber_coord[k];
        const Matrix& ct = t.target->fiber_coord[k];
        Matrix rhs = ct * t.action;
        Matrix csx = t.antilinear ? Matrix(cs.conjugate()) : cs;
        if (cs.rows() == 0 || ct.rows() == 0) {
            out.blocks.push_back(Matrix::Zero(ct.rows(), cs.rows()));
            out.residual = std::max(out.residual, rhs.norm());
            continue;
        }
        Matrix f = lstsq(csx.adjoint(), rhs.adjoint()).adjoint();
        out.residual = std::max(out.residual, (f * csx - rhs).norm());
        out.blocks.push_back(std::move(f));
    }
    return out;
}

double module_map_norm(const ModuleMap& t) {
    FiberBlocks fb = fiber_blocks(t);
    double worst = 0.0;
    for (const auto& b : fb.blocks) worst = std::max(worst, op_norm(b));
    return worst;
}

std::vector<Matrix> module_frame(const ModulePtr& mod, std::uint64_t seed) {
    std::vector<Matrix> frame;
    for (Eigen::Index k = 0; k < mod->characters(); ++k) {
        const Matrix& zk = mod->st.central_minimal_projections[k];
        Matrix ek = zk * mod->e;
        const Matrix& e11 = mod->st.unit_of(k, 0, 0);
        Matrix u = mvn_partial_isometry(mod->N, ek, e11, mod->st, Rng::child_seed(seed, k));
        for (Eigen::Index i = 0; i < mod->st.block_dims[k]; ++i)
            frame.push_back(mod->st.unit_of(k, i, 0) * u);
    }
    return frame;
}

Matrix L_inverse(const ModulePtr& mod, const ModuleMap& t) {
    const Tolerance& tol = mod->N.tol;
    if (t.antilinear) throw NotZLinear("L_inverse: map must be linear");
    if (t.source.get() != mod.get() || t.target.get() != mod.get())
        throw PreconditionViolated("L_inverse: map must act on the given module");
    if (z_linearity_residual(t) > tol.verify_cut(std::max(1.0, t.action.norm())))
        throw NotZLinear("L_inverse: map is not Z-linear");

    const Eigen::Index d = mod->dim();
    const bool full = (mod->p - Matrix::Identity(mod->N.ambient_dim, mod->N.ambient_dim)).norm() <=
                      tol.verify_cut();
    std::vector<Matrix> solution_basis;
    if (full) {
        solution_basis = mod->N.basis;
    } else {
        for (const auto& b : mod->N.basis) solution_basis.push_back(mod->p * b * mod->p);
        solution_basis = hs_orthonormalize(solution_basis, tol);
    }
    Matrix sys(d * d, static_cast<Eigen::Index>(solution_basis.size()));
    for (std::size_t i = 0; i < solution_basis.size(); ++i)
        sys.col(static_cast<Eigen::Index>(i)) = vec(L_rep(mod, solution_basis[i]).action);
    Vector rhs = vec(t.action);
    Vector coeff = lstsq(sys, rhs);
    const double scale = std::max(1.0, t.action.norm());
    if ((sys * coeff - rhs).norm() > tol.verify_cut(scale))
        throw NotLeftMultiplication("L_inverse: map is not a left multiplication");
    Matrix a = Matrix::Zero(mod->N.ambient_dim, mod->N.ambient_dim);
    for (std::size_t i = 0; i < solution_basis.size(); ++i)
        a += coeff(static_cast<Eigen::Index>(i)) * solution_basis[i];

    if (full) {
        // reconstruction through the frame must agree with the solve
        Matrix a2 = Matrix::Zero(a.rows(), a.cols());
        for (const auto& v : module_frame(mod, kInternalSeed))
            a2 += t.apply(v) * v.adjoint();
        if ((a - a2).norm() > 1e-8 * std::max(1.0, a.norm()))
            throw NotLeftMultiplication("L_inverse: frame reconstruction disagrees");
    }
    return a;
}

ModuleMap adjoint(const ModuleMap& t) {
    const Eigen::Index ds = t.source->dim(), dt = t.target->dim();
    FiberBlocks fb = fiber_blocks(t);
    Matrix cs = stacked_fiber_coords(*t.source);
    Matrix ct = stacked_fiber_coords(*t.target);
    Matrix rhs(ds, dt);
    Eigen::Index row = 0;
    for (Eigen::Index k = 0; k < t.source->characters(); ++k) {
        const Eigen::Index fs = t.source->fiber_dim(k);
        const Eigen::Index ft = t.target->fiber_dim(k);
        if (fs == 0) continue;
        Matrix ctk = t.target->fiber_coord[k];
        Matrix blk = t.antilinear ? Matrix(fb.blocks[k].transpose() * ctk.conjugate())
                                  : Matrix(fb.blocks[k].adjoint() * ctk);
        (void)ft;
        rhs.middleRows(row, fs) = blk;
        row += fs;
    }
    ModuleMap out;
    out.source = t.target;
    out.target = t.source;
    out.antilinear = t.antilinear;
    out.action = cs.partialPivLu().solve(rhs);
    return out;
}

ModuleMap U_v(const ModulePtr& mod_f, const ModulePtr& mod_e, const Matrix& v) {
    const Tolerance& tol = mod_e->N.tol;
    const double cut = tol.verify_cut(std::max(1.0, v.norm()));
    if ((v.adjoint() * v - mod_e->e).norm() > cut || (v * v.adjoint() - mod_f->e).norm() > cut)
        throw NotAPartialIsometry("U_v: need v*v = e and vv* = f");
    Matrix action(mod_e->dim(), mod_f->dim());
    for (Eigen::Index j = 0; j < mod_f->dim(); ++j)
        action.col(j) = module_coords(mod_e, mod_f->basis[j] * v);
    return {mod_f, mod_e, false, std::move(action)};
}

Submodule submodule_projection(const ModulePtr& mod, const std::vector<Matrix>& elements) {
    const Tolerance& tol = mod->N.tol;
    const Eigen::Index n = mod->N.ambient_dim;
    std::vector<Matrix> zspan;
    for (const auto& x : elements) {
        if (module_residual(mod, x) > tol.verify_cut(std::max(1.0, x.norm())))
            throw NotInModule("submodule_projection: element outside the module");
        for (const auto& zk : mod->st.central_minimal_projections) zspan.push_back(zk * x);
    }
    zspan = hs_orthonormalize(zspan, tol);

    // p := orthogonal projection onto the sum of the ranges
    Matrix cols(n, static_cast<Eigen::Index>(zspan.size()) * n);
    for (std::size_t i = 0; i < zspan.size(); ++i)
        cols.middleCols(static_cast<Eigen::Index>(i) * n, n) = zspan[i];
    Eigen::BDCSVD<Matrix> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_cut(sv.size() ? sv(0) : 0.0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    Matrix q = svd.matrixU().leftCols(r);
    Matrix p = q * q.adjoint();

    if (membership_residual(mod->N, p) > tol.verify_cut())
        throw NotASubmodule("submodule_projection: projection left the algebra");
    std::vector<Matrix> image;
    for (const auto& x : mod->basis) image.push_back(p * x);
    if (subspace_distance(image, zspan) > tol.verify_cut())
        throw NotASubmodule("submodule_projection: p Ne != Z-span");

    Submodule out;
    out.parent = mod;
    out.p = p;
    out.space = restrict_module(mod, p);
    return out;
}

ModuleMap module_map_between(const Submodule& x1, const Submodule& x2, const Matrix& v,
                             const Matrix& a) {
    const Tolerance& tol = x1.parent->N.tol;
    const double cut = tol.verify_cut(std::max(1.0, v.norm()));
    if ((v.adjoint() * v - x1.parent->e).norm() > cut ||
        (v * v.adjoint() - x2.parent->e).norm() > cut)
        throw NotAPartialIsometry("module_map_between: v must link e1 to e2");
    if (membership_residual(x1.parent->N, a) > tol.verify_cut(std::max(1.0, a.norm())) ||
        (x2.p * a * x1.p - a).norm() > tol.verify_cut(std::max(1.0, a.norm())))
        throw NotCompressed("module_map_between: a not in p2 N p1");
    Matrix action(x2.space->dim(), x1.space->dim());
    for (Eigen::Index j = 0; j < x1.space->dim(); ++j)
        action.col(j) = module_coords(x2.space, a * x1.space->basis[j] * v.adjoint());
    return {x1.space, x2.space, false, std::move(action)};
}

Matrix map_to_element(const Submodule& x1, const Submodule& x2, const Matrix& v,
                      const ModuleMap& t) {
    const Tolerance& tol = x1.parent->N.tol;
    std::vector<Matrix> comp;
    for (const auto& b : x1.parent->N.basis) comp.push_back(x2.p * b * x1.p);
    comp = hs_orthonormalize(comp, tol);
    const Eigen::Index d1 = x1.space->dim(), d2 = x2.space->dim();
    Matrix sys(d1 * d2, static_cast<Eigen::Index>(comp.size()));
    for (std::size_t i = 0; i < comp.size(); ++i) {
        Matrix act(d2, d1);
        for (Eigen::Index j = 0; j < d1; ++j)
            act.col(j) = module_coords(x2.space, comp[i] * x1.space->basis[j] * v.adjoint());
        sys.col(static_cast<Eigen::Index>(i)) = vec(act);
    }
    Vector rhs = vec(t.action);
    Vector coeff = lstsq(sys, rhs);
    if ((sys * coeff - rhs).norm() > tol.verify_cut(std::max(1.0, t.action.norm())))
        throw NotLeftMultiplication("map_to_element: map not of the form a x v*");
    Matrix a = Matrix::Zero(x1.parent->N.ambient_dim, x1.parent->N.ambient_dim);
    for (std::size_t i = 0; i < comp.size(); ++i)
        a += coeff(static_cast<Eigen::Index>(i)) * comp[i];
    return a;
}

std::optional<Matrix> z_unitary_equivalence(const Submodule& x1, const Submodule& x2,
                                            std::uint64_t seed) {
    const StructureData& st = x1.parent->st;
    if (blockwise_ranks(x1.p, st) != blockwise_ranks(x2.p, st)) return std::nullopt;
    return mvn_partial_isometry(x1.parent->N, x1.p, x2.p, st, seed);
}

} // namespace wstar
