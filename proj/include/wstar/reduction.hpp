#ifndef WSTAR_REDUCTION_HPP
#define WSTAR_REDUCTION_HPP

#include "wstar/hilbert_module.hpp"

namespace wstar {

// Gelfand spectrum of an abelian algebra: one character per minimal
// projection, omega_k(z) z_k = z z_k
struct CharacterSet {
    VNAlgebra Z;
    std::vector<Matrix> minimal_projections;

    Eigen::Index count() const { return static_cast<Eigen::Index>(minimal_projections.size()); }
    Complex evaluate(const Matrix& z, Eigen::Index k) const {
        return (z * minimal_projections[k]).trace() / minimal_projections[k].trace();
    }
};

CharacterSet characters(const VNAlgebra& z);

struct Fiber {
    Eigen::Index index;
    std::vector<Matrix> basis; // orthonormal for the fiber inner product
};

std::vector<Fiber> fiber_spaces(const ModulePtr& mod);

// class of x in H_{e,omega_k}, in the fiber orthonormal basis
Vector fiber_vector(const ModulePtr& mod, const Matrix& x, Eigen::Index k);

struct FiberedOperator {
    std::vector<Matrix> blocks; // one per character
};

FiberedOperator pi_fiber(const ModulePtr& mod, const Matrix& a);

Matrix synthesize_vector(const ModulePtr& mod, const std::vector<Vector>& family);
Matrix synthesize_operator(const ModulePtr& mod, const FiberedOperator& family);

struct FiberAlgebras {
    Eigen::Index character;
    VNAlgebra pi_m_bicommutant;  // pi_omega(M)''
    VNAlgebra pi_rel_commutant;  // pi_omega(M' ∩ N)'
};

std::vector<FiberAlgebras> decompose_along(const VNAlgebra& m, const VNAlgebra& z,
                                           const ModulePtr& mod);

struct GapReport {
    Eigen::Index character;
    Eigen::Index dim_bicommutant;
    Eigen::Index dim_relative;
    double distance;
    bool equal;
};

std::vector<GapReport> fiber_bicommutant_gap(const VNAlgebra& m, const VNAlgebra& z,
                                             const ModulePtr& mod);

// spatial representation with rho(N)' = rho(Z(N)): one copy of every
// irreducible block
struct MasaRep {
    VNAlgebra N;
    StructureData st;
    Eigen::Index dim = 0;                // sum of block dims
    std::vector<Eigen::Index> offsets;   // column start per block

    Matrix apply(const Matrix& x) const;    // rho(x), x in N
    Matrix invert(const Matrix& y) const;   // rho^{-1}(y), y in rho(N)
    Matrix z_image(Eigen::Index k) const;   // rho(z_k), a diagonal 0/1 projection
    VNAlgebra image() const;                // rho(N) on C^dim
};

MasaRep spatial_masa_representation(const VNAlgebra& n);
MasaRep spatial_masa_representation(const VNAlgebra& n, const StructureData& st);

// permutation helper aligning the character order of a second algebra with a
// chosen pairing; perm[k] = index in st of the block matched to character k
StructureData reorder_blocks(const StructureData& st, const std::vector<Eigen::Index>& perm);

// intertwiner space (N_j, pi_j; N_k, pi_k) between two MASA-commutant
// representations over the common Z (characters paired by index)
std::vector<Matrix> intertwiner_space(const MasaRep& from, const MasaRep& to);

// Proposition-wuatt package: the doubled type-I algebra on H1 ⊕ H2
struct DoubledAlgebra {
    MasaRep r1, r2;
    Matrix e1, e2;   // abelian projections in N1, N2 (original coordinates)
    Matrix V;        // dim2 x dim1, V*V = rho1(e1), VV* = rho2(e2)
    VNAlgebra N;     // commutant of the diagonal Z action
    StructureData stN;
    Matrix e;        // (1/2) [[rho1(e1), V*], [V, rho2(e2)]]
    ModulePtr mod1;  // N1 e1
    ModulePtr mod2;  // N2 e2
    ModulePtr modNe; // N e

    Matrix embed(const Matrix& x1, const Matrix& x2) const; // wuatt (iii) form
    std::pair<Matrix, Matrix> extract(const Matrix& x) const;
};

DoubledAlgebra doubled_algebra(const MasaRep& r1, const Matrix& e1, const MasaRep& r2,
                               const Matrix& e2, std::uint64_t seed);

// L(T) of eq-style left composition: rho2(L(T) x1) = T rho1(x1) V*
ModuleMap module_map_from_intertwiner(const DoubledAlgebra& d, const Matrix& t);

// adjoint direction: rho1(L'(S) x2) = S rho2(x2) V
ModuleMap module_map_from_intertwiner_reverse(const DoubledAlgebra& d, const Matrix& s);

// converse of module_map_from_intertwiner, through the doubled module
Matrix intertwiner_from_module_map(const DoubledAlgebra& d, const ModuleMap& s);

} // namespace wstar

#endif
