#include "wstar/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace wstar {

void normalize_phase(Eigen::Ref<Vector> v, double cut) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double a = std::abs(v(i));
        if (a > cut) {
            v *= std::conj(v(i)) / a;
            return;
        }
    }
}

HermitianEig hermitian_eig(const Matrix& m, const Tolerance& tol) {
    require_finite(m, "hermitian_eig");
    if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eig: not square");
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > tol.scaled(scale) * 10)
        throw NotHermitian("hermitian_eig: symmetry check failed");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw Error("hermitian_eig: solver failed");
    HermitianEig out{es.eigenvalues(), es.eigenvectors()};
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j)
        normalize_phase(out.eigenvectors.col(j));
    return out;
}

PolarDecomposition polar_decompose(const Matrix& m, const Tolerance& tol) {
    require_finite(m, "polar_decompose");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_cut(sv.size() ? sv(0) : 0.0);
    const Matrix& u = svd.matrixU();
    const Matrix& w = svd.matrixV();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    // both v and p are invariant under the per-column phase freedom of the SVD
    Matrix p = w * sv.asDiagonal() * w.adjoint();
    Matrix v = u.leftCols(r) * w.leftCols(r).adjoint();
    return {v, p};
}

std::vector<Vector> nullspace(const Matrix& m, const Tolerance& tol) {
    require_finite(m, "nullspace");
    if (m.rows() == 0 || m.cols() == 0) {
        std::vector<Vector> out;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            Vector e = Vector::Zero(m.cols());
            e(j) = 1.0;
            out.push_back(e);
        }
        return out;
    }
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_cut(sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    std::vector<Vector> out;
    for (Eigen::Index j = rank; j < m.cols(); ++j) {
        Vector v = svd.matrixV().col(j);
        normalize_phase(v);
        out.push_back(v);
    }
    return out;
}

Eigen::Index numerical_rank(const Matrix& m, const Tolerance& tol) {
    require_finite(m, "numerical_rank");
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_cut(sv(0));
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return r;
}

Matrix pinv(const Matrix& m, const Tolerance& tol) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_cut(sv.size() ? sv(0) : 0.0);
    RealVector inv = RealVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Matrix lstsq(const Matrix& a, const Matrix& b) {
    return a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
}

Matrix stack_vecs(const std::vector<Matrix>& basis) {
    if (basis.empty()) return Matrix(0, 0);
    Matrix s(basis.front().size(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = vec(basis[i]);
    return s;
}

std::vector<Matrix> hs_orthonormalize(const std::vector<Matrix>& mats, const Tolerance& tol) {
    if (mats.empty()) return {};
    const Eigen::Index rows = mats.front().rows(), cols = mats.front().cols();
    for (const auto& m : mats) {
        require_finite(m, "hs_orthonormalize");
        if (m.rows() != rows || m.cols() != cols)
            throw DimensionMismatch("hs_orthonormalize: mixed shapes");
    }
    Matrix s = stack_vecs(mats);
    Eigen::BDCSVD<Matrix> svd(s, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_cut(sv.size() ? sv(0) : 0.0);
    std::vector<Matrix> out;
    for (Eigen::Index j = 0; j < sv.size(); ++j) {
        if (sv(j) <= cut) break;
        Vector u = svd.matrixU().col(j);
        normalize_phase(u);
        out.push_back(unvec(u, rows, cols));
    }
    return out;
}

std::vector<SpectralCluster> spectral_clusters(const Matrix& hermitian, const Tolerance& tol,
                                               double gap_scale) {
    HermitianEig eig = hermitian_eig(hermitian, tol);
    const Eigen::Index n = eig.eigenvalues.size();
    const double scale = std::max(1.0, std::max(std::abs(eig.eigenvalues(0)),
                                                std::abs(eig.eigenvalues(n - 1))));
    const double gap = gap_scale * scale;
    std::vector<SpectralCluster> out;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && eig.eigenvalues(stop) - eig.eigenvalues(stop - 1) <= gap) ++stop;
        Matrix block = eig.eigenvectors.middleCols(start, stop - start);
        double mean = eig.eigenvalues.segment(start, stop - start).mean();
        out.push_back({mean, block * block.adjoint(), stop - start});
        start = stop;
    }
    return out;
}

double subspace_distance(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    std::vector<Matrix> qa = hs_orthonormalize(a);
    std::vector<Matrix> qb = hs_orthonormalize(b);
    const Eigen::Index dim = qa.empty() ? (qb.empty() ? 0 : qb.front().size())
                                        : qa.front().size();
    if (dim == 0) return 0.0;
    Matrix sa = stack_vecs(qa), sb = stack_vecs(qb);
    Matrix pa = sa.size() ? Matrix(sa * sa.adjoint()) : Matrix::Zero(dim, dim);
    Matrix pb = sb.size() ? Matrix(sb * sb.adjoint()) : Matrix::Zero(dim, dim);
    return op_norm(pa - pb);
}

double span_residual(const std::vector<Matrix>& basis, const Matrix& x) {
    Matrix r = x;
    for (const auto& b : basis) r -= hs_inner(x, b) * b;
    return r.norm();
}

Matrix span_project(const std::vector<Matrix>& basis, const Matrix& x) {
    Matrix p = Matrix::Zero(x.rows(), x.cols());
    for (const auto& b : basis) p += hs_inner(x, b) * b;
    return p;
}

std::vector<Matrix> span_intersection(const std::vector<Matrix>& a,
                                      const std::vector<Matrix>& b, const Tolerance& tol) {
    if (a.empty() || b.empty()) return {};
    std::vector<Matrix> qa = hs_orthonormalize(a, tol);
    std::vector<Matrix> qb = hs_orthonormalize(b, tol);
    const Eigen::Index rows = a.front().rows(), cols = a.front().cols();
    const Eigen::Index n2 = rows * cols;
    Matrix sa = stack_vecs(qa), sb = stack_vecs(qb);
    Matrix pa = Matrix::Identity(n2, n2) - sa * sa.adjoint();
    Matrix pb = Matrix::Identity(n2, n2) - sb * sb.adjoint();
    Matrix stacked(2 * n2, n2);
    stacked << pa, pb;
    std::vector<Matrix> out;
    for (const auto& v : nullspace(stacked, tol)) out.push_back(unvec(v, rows, cols));
    return hs_orthonormalize(out, tol);
}

Matrix inv_sqrt_psd(const Matrix& g, const Tolerance& tol) {
    HermitianEig eig = hermitian_eig(g, tol);
    RealVector d(eig.eigenvalues.size());
    const double cut = tol.rank_cut(std::max(1e-300, eig.eigenvalues.maxCoeff()));
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (eig.eigenvalues(i) <= cut)
            throw Error("inv_sqrt_psd: matrix not positive definite");
        d(i) = 1.0 / std::sqrt(eig.eigenvalues(i));
    }
    return eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint();
}

Matrix sqrt_psd(const Matrix& g, const Tolerance& tol) {
    HermitianEig eig = hermitian_eig(g, tol);
    RealVector d(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::sqrt(std::max(0.0, eig.eigenvalues(i)));
    return eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint();
}

} // namespace wstar
