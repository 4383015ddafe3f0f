#ifndef WSTAR_COMMON_HPP
#define WSTAR_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wstar {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Rank and equality decisions everywhere go through one knob.
struct Tolerance {
    double rel_eps = 1e-9;
    double abs_eps = 1e-11;

    double rank_cut(double sigma_max) const { return rel_eps * sigma_max + abs_eps; }
    double scaled(double scale) const { return rel_eps * scale + abs_eps; }
    // postcondition checks of randomized constructions; looser than rank
    // decisions so benign roundoff does not trigger retries
    double verify_cut(double scale = 1.0) const { return 1e3 * scaled(scale); }
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define WSTAR_ERROR(Name)                                             \
    struct Name : Error {                                             \
        explicit Name(const std::string& what = #Name) : Error(what) {} \
    }

WSTAR_ERROR(NonFinite);
WSTAR_ERROR(NotHermitian);
WSTAR_ERROR(DimensionMismatch);
WSTAR_ERROR(NotInAlgebra);
WSTAR_ERROR(NotInModule);
WSTAR_ERROR(StructureRecoveryFailed);
WSTAR_ERROR(NotEquivalent);
WSTAR_ERROR(InclusionViolated);
WSTAR_ERROR(NotAbelian);
WSTAR_ERROR(NotAPartialIsometry);
WSTAR_ERROR(NotCompressed);
WSTAR_ERROR(NotZLinear);
WSTAR_ERROR(NotLeftMultiplication);
WSTAR_ERROR(NotASubmodule);
WSTAR_ERROR(NotCyclic);
WSTAR_ERROR(NotFaithful);
WSTAR_ERROR(NotIntertwiner);
WSTAR_ERROR(CharacterMismatch);
WSTAR_ERROR(PreconditionViolated);
WSTAR_ERROR(SearchExhausted);
WSTAR_ERROR(ParseError);

#undef WSTAR_ERROR

// Certification refusal carries the residual that broke the hypothesis.
struct HypothesisFailed : Error {
    double residual;
    explicit HypothesisFailed(const std::string& what, double res = 0.0)
        : Error(what), residual(res) {}
};

struct NotStandard : Error {
    explicit NotStandard(const std::string& what = "NotStandard") : Error(what) {}
};

inline bool is_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const char* where) {
    if (!m.allFinite()) throw NonFinite(std::string(where) + ": non-finite entries");
}

inline Complex hs_inner(const Matrix& a, const Matrix& b) {
    // <a,b> = tr(b* a)
    return (b.adjoint() * a).trace();
}

inline double hs_norm(const Matrix& a) { return a.norm(); }

inline double op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

inline Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Antilinear operator xi |-> mat * conj(xi), conjugation fixed in the standard basis.
struct AntilinearOperator {
    Matrix mat;

    Eigen::Index dim() const { return mat.rows(); }

    Vector apply(const Vector& xi) const { return mat * xi.conjugate(); }

    // adjoint w.r.t. (A xi | eta) = (A* eta | xi): matrix transpose
    AntilinearOperator adjoint() const { return {mat.transpose()}; }

    AntilinearOperator inverse() const { return {mat.inverse().conjugate().eval()}; }

    // A o B for antilinear A, B is the linear operator A.mat * conj(B.mat)
    Matrix compose_antilinear(const AntilinearOperator& other) const {
        return mat * other.mat.conjugate();
    }

    // T x T^{-1} for a linear operator x
    Matrix sandwich(const Matrix& x) const {
        return mat * x.conjugate() * mat.inverse();
    }

    bool is_involutive(const Tolerance& tol = {}) const {
        Matrix r = mat * mat.conjugate() - Matrix::Identity(mat.rows(), mat.cols());
        return r.norm() <= tol.scaled(std::max(1.0, mat.norm()));
    }

    bool is_isometric(const Tolerance& tol = {}) const {
        Matrix r = mat.adjoint() * mat - Matrix::Identity(mat.rows(), mat.cols());
        return r.norm() <= tol.scaled(std::max(1.0, mat.norm()));
    }
};

} // namespace wstar

#endif
