#ifndef WSTAR_NUMERICS_HPP
#define WSTAR_NUMERICS_HPP

#include "wstar/common.hpp"

namespace wstar {

struct HermitianEig {
    RealVector eigenvalues; // ascending
    Matrix eigenvectors;    // unitary, columns phase-normalized
};

struct PolarDecomposition {
    Matrix v; // partial isometry, v*v = support projection of p
    Matrix p; // positive part (m*m)^{1/2}
};

HermitianEig hermitian_eig(const Matrix& m, const Tolerance& tol = {});

PolarDecomposition polar_decompose(const Matrix& m, const Tolerance& tol = {});

// orthonormal basis of ker(m); count = cols - numerical rank
std::vector<Vector> nullspace(const Matrix& m, const Tolerance& tol = {});

// orthonormal basis, w.r.t. <a,b> = tr(b*a), of the span of the input
std::vector<Matrix> hs_orthonormalize(const std::vector<Matrix>& mats,
                                      const Tolerance& tol = {});

Eigen::Index numerical_rank(const Matrix& m, const Tolerance& tol = {});

// Moore-Penrose inverse with the shared rank cut
Matrix pinv(const Matrix& m, const Tolerance& tol = {});

// minimum-norm least-squares solution of a x = b
Matrix lstsq(const Matrix& a, const Matrix& b);

// rotate the phase so the first entry above `cut` is real positive
void normalize_phase(Eigen::Ref<Vector> v, double cut = 1e-12);

// eigenvalue clusters of a Hermitian matrix together with their spectral
// projections; gap detection uses the tolerance against the spectral radius
struct SpectralCluster {
    double value; // mean eigenvalue of the cluster
    Matrix projection;
    Eigen::Index multiplicity;
};
std::vector<SpectralCluster> spectral_clusters(const Matrix& hermitian,
                                               const Tolerance& tol = {},
                                               double gap_scale = 1e-6);

// ---- subspaces of matrix space, represented by HS-orthonormal bases ----

// n^2 x d matrix whose columns are vec(basis[i])
Matrix stack_vecs(const std::vector<Matrix>& basis);

// operator-norm distance of the HS-orthogonal projections onto the spans
double subspace_distance(const std::vector<Matrix>& a, const std::vector<Matrix>& b);

// residual of projecting x onto span(basis); basis must be HS-orthonormal
double span_residual(const std::vector<Matrix>& basis, const Matrix& x);

// component of x inside span(basis) (HS-orthonormal basis)
Matrix span_project(const std::vector<Matrix>& basis, const Matrix& x);

// intersection of two spans, as an HS-orthonormal basis
std::vector<Matrix> span_intersection(const std::vector<Matrix>& a,
                                      const std::vector<Matrix>& b,
                                      const Tolerance& tol = {});

// inverse square root of a positive definite Hermitian matrix
Matrix inv_sqrt_psd(const Matrix& g, const Tolerance& tol = {});

Matrix sqrt_psd(const Matrix& g, const Tolerance& tol = {});

} // namespace wstar

#endif
