#ifndef WSTAR_HILBERT_MODULE_HPP
#define WSTAR_HILBERT_MODULE_HPP

#include "wstar/vn_algebra.hpp"

#include <memory>

namespace wstar {

// The Hilbert Z-module p·Ne for a type-I algebra N, an abelian projection e
// of full central support, and a projection p in N (p = 1 for the full
// module). Inner product (x|y) = Phi_e(y*x), valued in Z = Z(N).
struct HilbertModule {
    VNAlgebra N;
    Matrix e;
    Matrix p;            // identity for the full module Ne
    VNAlgebra Z;         // centre of N
    StructureData st;    // structure of N; fixes the character order
    std::vector<Matrix> basis; // HS-orthonormal basis of p·Ne

    // fibers over the characters of Z: per character k an orthonormal basis
    // of z_k·p·Ne under (x|y)_omega, and the coordinate change from the
    // HS basis (stacked per character; square when restricted to the module)
    std::vector<std::vector<Matrix>> fiber_basis;
    std::vector<Matrix> fiber_coord; // per k: dim_fiber x dim(module)

    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
    Eigen::Index characters() const { return st.blocks(); }
    Eigen::Index fiber_dim(Eigen::Index k) const {
        return static_cast<Eigen::Index>(fiber_basis[k].size());
    }
};

using ModulePtr = std::shared_ptr<const HilbertModule>;

ModulePtr make_module(const VNAlgebra& n, const Matrix& e, std::uint64_t seed);
ModulePtr make_module(const VNAlgebra& n, const Matrix& e, const StructureData& st);

// submodule p·Ne of an existing module, sharing N, e, Z and character order
ModulePtr restrict_module(const ModulePtr& mod, const Matrix& p);

// rebuild a module around an externally supplied HS-orthonormal basis of Ne
// (used when re-verifying emitted certificates); the basis is validated
ModulePtr module_from_basis(const VNAlgebra& n, const Matrix& e, const StructureData& st,
                            const std::vector<Matrix>& basis);

// coordinates in the HS-orthonormal basis; throws NotInModule on residual
Vector module_coords(const ModulePtr& mod, const Matrix& x);
Matrix module_element(const ModulePtr& mod, const Vector& coords);
double module_residual(const ModulePtr& mod, const Matrix& x);

// the unique z in Z with e x e = z e
Matrix conditional_expectation(const ModulePtr& mod, const Matrix& x);

// Z-valued inner product Phi_e(y*x)
Matrix inner(const ModulePtr& mod, const Matrix& x, const Matrix& y);

// coefficients of a central element on the minimal projections of Z
Vector central_coefficients(const ModulePtr& mod, const Matrix& z);

// module norm through the fibers: max_k |x_omega_k|
double module_vector_norm(const ModulePtr& mod, const Matrix& x);

// bounded Z-linear (or Z-antilinear) map between modules, stored over the
// HS bases; antilinear maps conjugate coordinates in those bases
struct ModuleMap {
    ModulePtr source;
    ModulePtr target;
    bool antilinear = false;
    Matrix action; // dim(target) x dim(source)

    Matrix apply(const Matrix& x) const;
    Vector apply_coords(const Vector& c) const {
        return antilinear ? Vector(action * c.conjugate()) : Vector(action * c);
    }
};

ModuleMap compose(const ModuleMap& s, const ModuleMap& t); // s after t
ModuleMap identity_map(const ModulePtr& mod);

double z_linearity_residual(const ModuleMap& t);

// fiber blocks of a module map; residual reports off-fiber leakage
struct FiberBlocks {
    std::vector<Matrix> blocks;
    double residual = 0.0;
};
FiberBlocks fiber_blocks(const ModuleMap& t);

// operator norm of a module map, max over characters of the fiber block norm
double module_map_norm(const ModuleMap& t);

// left multiplication x -> a x
ModuleMap L_rep(const ModulePtr& mod, const Matrix& a);

// inverse of L_rep: least-squares against the basis action, cross-checked
// against the reconstruction a = sum_i (T v_i) v_i*
Matrix L_inverse(const ModulePtr& mod, const ModuleMap& t);

ModuleMap adjoint(const ModuleMap& t);

// y -> y v from Nf to Ne, for v with v*v = e, vv* = f
ModuleMap U_v(const ModulePtr& mod_f, const ModulePtr& mod_e, const Matrix& v);

struct Submodule {
    ModulePtr parent;
    Matrix p;        // the projection p_X in N
    ModulePtr space; // the module p·Ne
};

// smallest projection p with span(Z-span of elements) = p·Ne
Submodule submodule_projection(const ModulePtr& mod, const std::vector<Matrix>& elements);

// x1 -> a x1 v* from X1 = p1·Ne1 to X2 = p2·Ne2, for a in p2 N p1
ModuleMap module_map_between(const Submodule& x1, const Submodule& x2, const Matrix& v,
                             const Matrix& a);

// recover a from a Z-linear map X1 -> X2 (inverse of module_map_between)
Matrix map_to_element(const Submodule& x1, const Submodule& x2, const Matrix& v,
                      const ModuleMap& t);

// u in p2 N p1 with u*u = p1, uu* = p2 when the blockwise ranks agree
std::optional<Matrix> z_unitary_equivalence(const Submodule& x1, const Submodule& x2,
                                            std::uint64_t seed);

// family v_i with v_i* v_i <= e, sum v_i v_i* = 1, entering eq-style
// reconstructions; derived from the structure's matrix units
std::vector<Matrix> module_frame(const ModulePtr& mod, std::uint64_t seed);

} // namespace wstar

#endif
