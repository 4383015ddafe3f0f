#ifndef WSTAR_VN_ALGEBRA_HPP
#define WSTAR_VN_ALGEBRA_HPP

#include "wstar/numerics.hpp"
#include "wstar/rng.hpp"

#include <cstdint>
#include <optional>

namespace wstar {

// Unital *-subalgebra of M_n(C), stored as an HS-orthonormal basis of its
// span plus a (star-closed) generating set.
struct VNAlgebra {
    Eigen::Index ambient_dim = 0;
    Tolerance tol;
    std::vector<Matrix> basis;      // HS-orthonormal, spans the algebra
    std::vector<Matrix> generators; // includes the unit, closed under *

    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
    Matrix unit() const { return Matrix::Identity(ambient_dim, ambient_dim); }
};

// Wedderburn data: W A W* = ⊕_k M_{n_k} ⊗ I_{m_k}, blocks sorted by
// (n desc, m desc, diagonal of z_k).
struct StructureData {
    std::vector<Matrix> central_minimal_projections; // z_k
    std::vector<Eigen::Index> block_dims;            // n_k
    std::vector<Eigen::Index> multiplicities;        // m_k
    Matrix canonical_unitary;                        // W
    // matrix_units[k][i*n_k+j] realizes E_{ij} ⊗ I_{m_k} inside the algebra
    std::vector<std::vector<Matrix>> matrix_units;

    Eigen::Index blocks() const { return static_cast<Eigen::Index>(block_dims.size()); }
    const Matrix& unit_of(Eigen::Index k, Eigen::Index i, Eigen::Index j) const {
        return matrix_units[k][i * block_dims[k] + j];
    }
};

VNAlgebra generate_algebra(const std::vector<Matrix>& generators, Eigen::Index ambient_dim,
                           const Tolerance& tol = {});

bool contains(const VNAlgebra& a, const Matrix& x);
double membership_residual(const VNAlgebra& a, const Matrix& x);

// operator-norm distance between the HS projections onto the two spans
double algebra_distance(const VNAlgebra& a, const VNAlgebra& b);

VNAlgebra commutant(const VNAlgebra& a);
VNAlgebra center(const VNAlgebra& a);

bool is_abelian(const VNAlgebra& a);
bool is_projection(const Matrix& p, const Tolerance& tol = {});

// minimal projections of the centre (spectral projections of a generic
// Hermitian central element, randomized with verification)
std::vector<Matrix> minimal_central_projections(const VNAlgebra& a, std::uint64_t seed);

StructureData structure(const VNAlgebra& a, std::uint64_t seed);

Matrix central_support(const VNAlgebra& a, const Matrix& x);
Matrix central_support(const VNAlgebra& a, const Matrix& x, const StructureData& st);

Matrix abelian_projection_full(const VNAlgebra& n, std::uint64_t seed);
Matrix abelian_projection_full(const VNAlgebra& n, const StructureData& st);

Matrix extend_abelian_projection(const VNAlgebra& n, const Matrix& p, const Matrix& f,
                                 std::uint64_t seed);

Matrix mvn_partial_isometry(const VNAlgebra& n, const Matrix& e, const Matrix& f,
                            std::uint64_t seed);
Matrix mvn_partial_isometry(const VNAlgebra& n, const Matrix& e, const Matrix& f,
                            const StructureData& st, std::uint64_t seed);

// (M' ∩ N)' ∩ N for Z(N) ⊆ M ⊆ N
VNAlgebra relative_double_commutant(const VNAlgebra& n, const VNAlgebra& m);

// reduced algebra q A q living on range(q), with the isometry C^r -> C^n
struct CompressedAlgebra {
    VNAlgebra algebra; // on C^r
    Matrix isometry;   // n x r, columns orthonormal basis of range(q)
};
CompressedAlgebra compress(const VNAlgebra& a, const Matrix& q);

// sub-verification helpers reused by the property suites
double star_closure_residual(const VNAlgebra& a);
double product_closure_residual(const VNAlgebra& a);

// blockwise ambient ranks of a projection p in A, one per central block
std::vector<Eigen::Index> blockwise_ranks(const Matrix& p, const StructureData& st);

// VNAlgebra from an already HS-orthonormal basis (unit must lie in the span)
VNAlgebra algebra_from_basis(std::vector<Matrix> basis, std::vector<Matrix> generators,
                             Eigen::Index ambient_dim, const Tolerance& tol = {});

} // namespace wstar

#endif
