#include "wstar/standard_form.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace wstar {

namespace {

constexpr std::uint64_t kInternalSeed = 0x5374616e64ULL;

Matrix conjugate_by(const AntilinearOperator& j, const Matrix& x) {
    // J x J for an involutive J
    return j.mat * x.conjugate() * j.mat.conjugate();
}

double span_equality_residual(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    return subspace_distance(a, b);
}

ModuleMap antilinear_inverse(const ModuleMap& t) {
    ModuleMap out;
    out.source = t.target;
    out.target = t.source;
    out.antilinear = t.antilinear;
    out.action = t.antilinear ? Matrix(t.action.inverse().conjugate()) : Matrix(t.action.inverse());
    return out;
}

// residuals of the two lines of the reduced-standardness equations for a
// module map T between (possibly different) modules over N = Z'
std::pair<double, double> czaza_residuals(const VNAlgebra& m, const ModuleMap& t) {
    ModuleMap tinv = antilinear_inverse(t);
    VNAlgebra mp = commutant(m);
    std::vector<Matrix> lhs, rhs;
    for (const auto& b : m.basis)
        lhs.push_back(compose(compose(t, L_rep(t.source, b)), tinv).action);
    for (const auto& b : mp.basis) rhs.push_back(L_rep(t.target, b).action);
    const double line1 = span_equality_residual(lhs, rhs);

    double line2 = 0.0;
    for (const auto& zc : center(m).basis) {
        Matrix got = compose(compose(t, L_rep(t.source, zc)), tinv).action;
        Matrix want = L_rep(t.target, zc.adjoint()).action;
        line2 = std::max(line2, (got - want).norm());
    }
    return {line1, line2};
}

double antiunitary_residual(const ModuleMap& t) {
    double worst = 0.0;
    const auto& src = t.source;
    for (Eigen::Index a = 0; a < src->dim(); ++a)
        for (Eigen::Index b = 0; b < src->dim(); ++b) {
            Matrix lhs = inner(t.target, t.apply(src->basis[a]), t.apply(src->basis[b]));
            Matrix rhs = inner(src, src->basis[b], src->basis[a]);
            worst = std::max(worst, (lhs - rhs).norm());
        }
    return worst;
}

} // namespace

double CertificateResiduals::worst() const {
    double w = 0.0;
    for (double r : {involutive, te, antiunitary, czaza_m, czaza_z}) w = std::max(w, r);
    return w;
}

StandardnessReport is_standard(const VNAlgebra& m) {
    StandardnessReport rep;
    rep.st = structure(m, kInternalSeed);
    rep.standard = true;
    for (Eigen::Index k = 0; k < rep.st.blocks(); ++k) {
        rep.blocks.emplace_back(rep.st.block_dims[k], rep.st.multiplicities[k]);
        if (rep.st.block_dims[k] != rep.st.multiplicities[k] && rep.standard) {
            rep.standard = false;
            rep.obstruction = rep.blocks.back();
        }
    }
    if (!rep.standard) return rep;

    // canonical conjugation: per block the tensor swap composed with
    // entrywise conjugation, pulled back through W
    const Eigen::Index n = m.ambient_dim;
    Matrix swap = Matrix::Zero(n, n);
    Eigen::Index off = 0;
    for (Eigen::Index k = 0; k < rep.st.blocks(); ++k) {
        const Eigen::Index nk = rep.st.block_dims[k];
        for (Eigen::Index i = 0; i < nk; ++i)
            for (Eigen::Index mu = 0; mu < nk; ++mu)
                swap(off + mu * nk + i, off + i * nk + mu) = 1.0;
        off += nk * nk;
    }
    const Matrix& w = rep.st.canonical_unitary;
    AntilinearOperator j{w.adjoint() * swap * w.conjugate()};
    rep.witness = j;

    VNAlgebra mp = commutant(m);
    std::vector<Matrix> jmj;
    for (const auto& b : m.basis) jmj.push_back(conjugate_by(j, b));
    rep.jmj_residual = span_equality_residual(jmj, mp.basis);
    rep.jzj_residual = 0.0;
    for (const auto& z : center(m).basis)
        rep.jzj_residual =
            std::max(rep.jzj_residual, (conjugate_by(j, z) - z.adjoint()).norm());
    return rep;
}

Matrix ModularData::represent(const Matrix& x) const {
    Matrix out(gns_dim, gns_dim);
    for (Eigen::Index j = 0; j < gns_dim; ++j) out.col(j) = embed(x * gns_basis[j]);
    return out;
}

Vector ModularData::embed(const Matrix& x) const {
    // <x, g_i>_phi = phi(g_i* x)
    Vector c(gns_dim);
    for (Eigen::Index i = 0; i < gns_dim; ++i)
        c(i) = (rho * gns_basis[i].adjoint() * x).trace() / trace_rho;
    return c;
}

ModularData gns_modular(const VNAlgebra& m, const Matrix& rho) {
    const Tolerance& tol = m.tol;
    if (membership_residual(m, rho) > tol.verify_cut(std::max(1.0, rho.norm())))
        throw NotInAlgebra("gns_modular: rho not in M");
    if ((rho - rho.adjoint()).norm() > tol.verify_cut(std::max(1.0, rho.norm())))
        throw NotFaithful("gns_modular: rho not selfadjoint");
    HermitianEig re = hermitian_eig(rho, tol);
    if (re.eigenvalues(0) <= tol.verify_cut(re.eigenvalues(re.eigenvalues.size() - 1)))
        throw NotFaithful("gns_modular: state is not faithful");

    ModularData md;
    md.gns_dim = m.dim();
    md.trace_rho = std::real(rho.trace());
    md.rho = rho;

    // orthonormalize the algebra basis for <x,y> = phi(y* x)
    Matrix gram(md.gns_dim, md.gns_dim);
    for (Eigen::Index i = 0; i < md.gns_dim; ++i)
        for (Eigen::Index j = 0; j < md.gns_dim; ++j)
            gram(i, j) = (rho * m.basis[j].adjoint() * m.basis[i]).trace() / md.trace_rho;
    Matrix g = inv_sqrt_psd(0.5 * (gram + gram.adjoint()), tol);
    md.gns_basis.assign(md.gns_dim, Matrix::Zero(m.ambient_dim, m.ambient_dim));
    for (Eigen::Index l = 0; l < md.gns_dim; ++l)
        for (Eigen::Index i = 0; i < md.gns_dim; ++i) md.gns_basis[l] += g(i, l) * m.basis[i];

    md.cyclic_vector = md.embed(Matrix::Identity(m.ambient_dim, m.ambient_dim));

    Matrix s(md.gns_dim, md.gns_dim);
    for (Eigen::Index j = 0; j < md.gns_dim; ++j)
        s.col(j) = md.embed(md.gns_basis[j].adjoint());
    md.S = AntilinearOperator{s};
    md.delta = s.transpose() * s.conjugate();
    Matrix dinvhalf = inv_sqrt_psd(0.5 * (md.delta + md.delta.adjoint()), tol);
    md.J = AntilinearOperator{s * dinvhalf.conjugate()};

    std::vector<Matrix> pib, pig;
    for (const auto& b : m.basis) pib.push_back(md.represent(b));
    for (const auto& gmat : m.generators) pig.push_back(md.represent(gmat));
    md.pi_m = algebra_from_basis(hs_orthonormalize(pib, tol), std::move(pig), md.gns_dim, tol);

    md.involution_residual =
        (md.J.mat * md.J.mat.conjugate() - Matrix::Identity(md.gns_dim, md.gns_dim)).norm();
    Matrix jdj = md.J.mat * md.delta.conjugate() * md.J.mat.conjugate();
    md.jdj_residual = (jdj - md.delta.inverse()).norm();

    VNAlgebra pimp = commutant(md.pi_m);
    std::vector<Matrix> jmj;
    for (const auto& b : md.pi_m.basis) jmj.push_back(conjugate_by(md.J, b));
    md.jmj_residual = span_equality_residual(jmj, pimp.basis);
    md.jzj_residual = 0.0;
    for (const auto& z : center(md.pi_m).basis)
        md.jzj_residual =
            std::max(md.jzj_residual, (conjugate_by(md.J, z) - z.adjoint()).norm());
    return md;
}

bool is_cyclic_for(const VNAlgebra& a, const Vector& xi) {
    Matrix stack(a.ambient_dim, a.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) stack.col(i) = a.basis[i] * xi;
    return numerical_rank(stack, a.tol) == a.ambient_dim;
}

bool is_separating_for(const VNAlgebra& a, const Vector& xi) {
    Matrix stack(a.ambient_dim, a.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) stack.col(i) = a.basis[i] * xi;
    return numerical_rank(stack, a.tol) == a.dim();
}

AntilinearOperator modular_conjugation_from_vector(const VNAlgebra& m, const Vector& xi0) {
    if (!is_cyclic_for(m, xi0) || !is_separating_for(m, xi0))
        throw NotCyclic("modular_conjugation_from_vector: xi0 must be cyclic and separating");
    // cyclic and separating forces dim M = ambient dim, so the Gram stack
    // x -> x xi0 is a square change of coordinates
    const Eigen::Index n = m.ambient_dim;
    Matrix c(n, m.dim()), cstar(n, m.dim());
    for (Eigen::Index i = 0; i < m.dim(); ++i) {
        c.col(i) = m.basis[i] * xi0;
        cstar.col(i) = m.basis[i].adjoint() * xi0;
    }
    Matrix s = cstar * c.conjugate().inverse();
    Matrix delta = s.transpose() * s.conjugate();
    Matrix dinvhalf = inv_sqrt_psd(0.5 * (delta + delta.adjoint()), m.tol);
    return AntilinearOperator{s * dinvhalf.conjugate()};
}

Matrix abelian_projection_from_cyclic(const VNAlgebra& z, const VNAlgebra& n, const Vector& xi0) {
    const Tolerance& tol = z.tol;
    if (!is_cyclic_for(n, xi0)) throw NotCyclic("abelian_projection_from_cyclic");
    Matrix e = Matrix::Zero(z.ambient_dim, z.ambient_dim);
    for (const auto& zk : minimal_central_projections(z, kInternalSeed)) {
        Vector q = zk * xi0;
        const double nq = q.norm();
        if (nq <= tol.verify_cut())
            throw NotCyclic("abelian_projection_from_cyclic: character subspace missed");
        e += (q * q.adjoint()) / (nq * nq);
    }
    if (!is_projection(e, tol) || membership_residual(n, e) > tol.verify_cut())
        throw StructureRecoveryFailed("abelian_projection_from_cyclic: e left Z'");
    if ((e * xi0 - xi0).norm() > tol.verify_cut(xi0.norm()))
        throw StructureRecoveryFailed("abelian_projection_from_cyclic: e xi0 != xi0");
    return e;
}

Matrix abelian_projection_from_cyclic(const VNAlgebra& z, const Vector& xi0) {
    return abelian_projection_from_cyclic(z, commutant(z), xi0);
}

Matrix j_fixed_abelian_projection(const VNAlgebra& n, const AntilinearOperator& j,
                                  const VNAlgebra& z, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Vector zeta = rng.vector(n.ambient_dim);
        Vector xi = zeta + j.apply(zeta);
        if (xi.norm() < 1e-6) continue;
        xi.normalize();
        if (!is_cyclic_for(n, xi)) continue;
        Matrix e = abelian_projection_from_cyclic(z, n, xi);
        if ((conjugate_by(j, e) - e).norm() <= n.tol.verify_cut()) return e;
    }
    throw SearchExhausted("j_fixed_abelian_projection: retries exhausted");
}

ReducedStandardnessCertificate reduced_standardness_certificate(const VNAlgebra& m,
                                                                const VNAlgebra& z,
                                                                std::uint64_t seed) {
    StandardnessReport rep = is_standard(m);
    if (!rep.standard) throw NotStandard("reduced_standardness_certificate: M is not standard");
    VNAlgebra zm = center(m);
    for (const auto& b : z.basis)
        if (membership_residual(zm, b) > m.tol.verify_cut())
            throw InclusionViolated("reduced_standardness_certificate: Z not inside Z(M)");

    VNAlgebra n = commutant(z);
    const AntilinearOperator& j = *rep.witness;
    Matrix e = j_fixed_abelian_projection(n, j, z, Rng::child_seed(seed, 1));
    ModulePtr mod = make_module(n, e, structure(n, Rng::child_seed(seed, 2)));

    Matrix action(mod->dim(), mod->dim());
    for (Eigen::Index a = 0; a < mod->dim(); ++a)
        action.col(a) = module_coords(mod, conjugate_by(j, mod->basis[a]));
    ModuleMap t{mod, mod, true, std::move(action)};

    ReducedStandardnessCertificate cert;
    cert.e = e;
    cert.mod = mod;
    cert.T = t;
    cert.J = j;
    cert.report = rep;
    cert.residuals.involutive =
        (t.action * t.action.conjugate() - Matrix::Identity(mod->dim(), mod->dim())).norm();
    cert.residuals.te = (t.apply(e) - e).norm();
    cert.residuals.antiunitary = antiunitary_residual(t);
    auto [l1, l2] = czaza_residuals(m, t);
    cert.residuals.czaza_m = l1;
    cert.residuals.czaza_z = l2;
    return cert;
}

TransportedCertificate transport_certificate(const ReducedStandardnessCertificate& cert,
                                             const VNAlgebra& m, const Matrix& e2,
                                             std::uint64_t seed) {
    const VNAlgebra& n = cert.mod->N;
    Matrix v = mvn_partial_isometry(n, cert.e, e2, cert.mod->st, seed);
    ModulePtr mod2 = make_module(n, e2, cert.mod->st);
    // U_v : Ne2 -> Ne0 is y -> y v (v*v = e0, vv* = e2)
    ModuleMap uv = U_v(mod2, cert.mod, v);
    ModuleMap uvstar = U_v(cert.mod, mod2, v.adjoint());
    ModuleMap t2 = compose(uvstar, compose(cert.T, uv));

    TransportedCertificate out;
    out.e = e2;
    out.mod = mod2;
    out.T = t2;
    out.residuals.involutive =
        (t2.action * t2.action.conjugate() - Matrix::Identity(mod2->dim(), mod2->dim())).norm();
    out.residuals.antiunitary = antiunitary_residual(t2);
    auto [l1, l2] = czaza_residuals(m, t2);
    out.residuals.czaza_m = l1;
    out.residuals.czaza_z = l2;
    return out;
}

TwoProjectionCertificate certificate_variant_ef(const ReducedStandardnessCertificate& cert,
                                                const VNAlgebra& m, std::uint64_t seed) {
    (void)seed;
    const VNAlgebra& n = cert.mod->N;
    const Tolerance& tol = n.tol;
    Matrix v = cert.T.apply(cert.e);
    if ((v.adjoint() * v - cert.e).norm() > tol.verify_cut())
        throw StructureRecoveryFailed("certificate_variant_ef: T e is not a partial isometry");
    Matrix f = v * v.adjoint();
    ModulePtr mod_f = make_module(n, f, cert.mod->st);
    // U_{v*} : Ne -> Nf is y -> y v*
    ModuleMap uvstar = U_v(cert.mod, mod_f, v.adjoint());
    ModuleMap t = compose(uvstar, cert.T);

    TwoProjectionCertificate out;
    out.e = cert.e;
    out.f = f;
    out.mod_e = cert.mod;
    out.mod_f = mod_f;
    out.T = t;
    out.residuals.te = (t.apply(cert.e) - f).norm();
    out.residuals.antiunitary = antiunitary_residual(t);
    auto [l1, l2] = czaza_residuals(m, t);
    out.residuals.czaza_m = l1;
    out.residuals.czaza_z = l2;
    return out;
}

StandardnessReport standardness_from_module_T(const VNAlgebra& m, const VNAlgebra& z,
                                              const ModuleMap& t) {
    const Tolerance& tol = m.tol;
    if (!t.antilinear) throw HypothesisFailed("module T must be antilinear", -1.0);
    VNAlgebra zm = center(m);
    for (const auto& b : z.basis)
        if (membership_residual(zm, b) > tol.verify_cut())
            throw InclusionViolated("standardness_from_module_T: Z not inside Z(M)");
    if (numerical_rank(t.action, tol) != t.action.rows())
        throw HypothesisFailed("module T is not bijective", 0.0);
    double zl = z_linearity_residual(t);
    if (zl > tol.verify_cut(std::max(1.0, t.action.norm())))
        throw HypothesisFailed("module T is not Z-antilinear", zl);
    auto [l1, l2] = czaza_residuals(m, t);
    if (l1 > 1e-6) throw HypothesisFailed("T L(M) T^{-1} != L(M')", l1);
    if (l2 > 1e-6)
        throw HypothesisFailed("T L(z) T^{-1} != L(z*) on the centre of M", l2);
    return is_standard(m);
}

StandardnessReport standardness_from_conjugation(const VNAlgebra& m,
                                                 const AntilinearOperator& t) {
    const Tolerance& tol = m.tol;
    if (numerical_rank(t.mat, tol) != t.mat.rows())
        throw HypothesisFailed("conjugation candidate is not bijective", 0.0);
    VNAlgebra mp = commutant(m);
    std::vector<Matrix> tmt;
    for (const auto& b : m.basis) tmt.push_back(t.sandwich(b));
    double l1 = span_equality_residual(tmt, mp.basis);
    if (l1 > 1e-6) throw HypothesisFailed("T M T^{-1} != M'", l1);
    double l2 = 0.0;
    for (const auto& zc : center(m).basis)
        l2 = std::max(l2, (t.sandwich(zc) - zc.adjoint()).norm());
    if (l2 > 1e-6) throw HypothesisFailed("T z T^{-1} != z* on Z(M)", l2);
    return is_standard(m);
}

Vector separating_from_module_T(const VNAlgebra& m, const VNAlgebra& z, const Vector& xi0,
                                const ModuleMap& t) {
    const Tolerance& tol = m.tol;
    if (!is_cyclic_for(m, xi0))
        throw NotCyclic("separating_from_module_T: xi0 not cyclic for M");
    const VNAlgebra& n = t.source->N;
    Matrix e0 = abelian_projection_from_cyclic(z, n, xi0);
    if ((t.source->e - e0).norm() > tol.verify_cut())
        throw PreconditionViolated("separating_from_module_T: module not built on e0");
    if (!t.antilinear || numerical_rank(t.action, tol) != t.action.rows())
        throw HypothesisFailed("T must be a bijective Z-antilinear map", 0.0);
    double zl = z_linearity_residual(t);
    if (zl > tol.verify_cut(std::max(1.0, t.action.norm())))
        throw HypothesisFailed("T is not Z-antilinear", zl);
    auto [l1, l2] = czaza_residuals(m, t);
    (void)l2; // the separating-vector statement only assumes the M-line
    if (l1 > 1e-6) throw HypothesisFailed("T L(M) T^{-1} != L(M')", l1);

    Matrix pre = antilinear_inverse(t).apply(e0);
    Vector candidate = pre * xi0;

    // kernel test: x in M with x * candidate = 0 forces x = 0
    Matrix stack(m.ambient_dim, m.dim());
    for (Eigen::Index i = 0; i < m.dim(); ++i) stack.col(i) = m.basis[i] * candidate;
    Eigen::BDCSVD<Matrix> svd(stack);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin <= tol.verify_cut())
        throw HypothesisFailed("separating vector kernel test failed", smin);
    return candidate;
}

std::vector<GalleryCase> counterexample_gallery() {
    std::vector<GalleryCase> out;
    const Matrix i2 = Matrix::Identity(2, 2);
    auto embed_pair = [](const Matrix& a, const Matrix& b) {
        Matrix m = Matrix::Zero(4, 4);
        m.topLeftCorner(2, 2) = a;
        m.bottomRightCorner(2, 2) = b;
        return m;
    };
    Matrix e12 = Matrix::Zero(2, 2), e21 = Matrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    e21(1, 0) = 1.0;

    // swap conjugation xi ⊕ eta -> (J0 eta) ⊕ (J0 xi), J0 entrywise
    Matrix swap = Matrix::Zero(4, 4);
    swap.topRightCorner(2, 2) = i2;
    swap.bottomLeftCorner(2, 2) = i2;
    AntilinearOperator j{swap};

    auto push_case = [&](const std::string& name, const std::vector<Matrix>& gens) {
        VNAlgebra m = generate_algebra(gens, 4);
        VNAlgebra mp = commutant(m);
        std::vector<Matrix> jmj;
        for (const auto& b : m.basis) jmj.push_back(conjugate_by(j, b));
        out.push_back({name, m, j, span_equality_residual(jmj, mp.basis), is_standard(m)});
    };

    // M = {x ⊕ λ : x in M2}: J M J = M' but the M2 block has multiplicity 1
    push_case("remark1-full", {embed_pair(e12, Matrix::Zero(2, 2)),
                               embed_pair(e21, Matrix::Zero(2, 2))});
    // the N = C·1 variant: M = {λ ⊕ y : y in M2}
    push_case("remark1-scalar", {embed_pair(Matrix::Zero(2, 2), e12),
                                 embed_pair(Matrix::Zero(2, 2), e21)});

    // control: M2 ⊗ I on C^4 is standard
    {
        Matrix g1 = Matrix::Zero(4, 4), g2 = Matrix::Zero(4, 4);
        g1.block(0, 2, 2, 2) = i2; // E12 ⊗ I
        g2.block(2, 0, 2, 2) = i2; // E21 ⊗ I
        VNAlgebra m = generate_algebra({g1, g2}, 4);
        StandardnessReport rep = is_standard(m);
        VNAlgebra mp = commutant(m);
        std::vector<Matrix> jmj;
        double res = -1.0;
        if (rep.witness) {
            for (const auto& b : m.basis) jmj.push_back(conjugate_by(*rep.witness, b));
            res = span_equality_residual(jmj, mp.basis);
        }
        out.push_back({"standard-control", m, rep.witness ? *rep.witness : j, res, rep});
    }
    return out;
}

} // namespace wstar
