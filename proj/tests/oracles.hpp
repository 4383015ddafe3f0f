#ifndef WSTAR_TESTS_ORACLES_HPP
#define WSTAR_TESTS_ORACLES_HPP

// Test-only oracles, kept independent of the library's numerical paths:
// rank decisions through column-pivoted LU instead of SVD, closures through
// plain re-spanning.

#include "wstar/common.hpp"

#include <Eigen/LU>

#include <vector>

namespace wstar::oracle {

inline Eigen::Index lu_rank(const Matrix& m, double tol = 1e-9) {
    if (m.size() == 0) return 0;
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(tol);
    return lu.rank();
}

inline Eigen::Index span_dim(const std::vector<Matrix>& mats) {
    if (mats.empty()) return 0;
    Matrix s(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
    for (std::size_t i = 0; i < mats.size(); ++i)
        s.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(mats[i].data(),
                                                                       mats[i].size());
    return lu_rank(s);
}

// brute-force closure dimension of the unital *-algebra generated by `gens`
inline Eigen::Index closure_dim(const std::vector<Matrix>& gens, Eigen::Index n) {
    std::vector<Matrix> elements;
    elements.push_back(Matrix::Identity(n, n));
    for (const auto& g : gens) {
        elements.push_back(g);
        elements.push_back(g.adjoint());
    }
    Eigen::Index dim = span_dim(elements);
    for (;;) {
        std::vector<Matrix> next = elements;
        for (const auto& a : elements)
            for (const auto& b : elements) next.push_back(a * b);
        // keep a basis-sized subset to stop quadratic growth
        Eigen::Index next_dim = span_dim(next);
        if (next_dim == dim) return dim;
        dim = next_dim;
        // re-span: drop linearly dependent members greedily by LU rank
        std::vector<Matrix> reduced;
        for (const auto& cand : next) {
            std::vector<Matrix> trial = reduced;
            trial.push_back(cand);
            if (span_dim(trial) > static_cast<Eigen::Index>(reduced.size()))
                reduced.push_back(cand);
            if (static_cast<Eigen::Index>(reduced.size()) == next_dim) break;
        }
        elements = std::move(reduced);
    }
}

// kernel of the stacked commutation equations, by LU
inline std::vector<Matrix> lu_commutant(const std::vector<Matrix>& gens, Eigen::Index n,
                                        double tol = 1e-9) {
    const Eigen::Index n2 = n * n;
    Matrix stack(static_cast<Eigen::Index>(gens.size()) * n2, n2);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        Matrix s = Matrix::Zero(n2, n2);
        for (Eigen::Index j = 0; j < n; ++j) s.block(j * n, j * n, n, n) = gens[g];
        for (Eigen::Index bj = 0; bj < n; ++bj)
            for (Eigen::Index bi = 0; bi < n; ++bi)
                for (Eigen::Index d = 0; d < n; ++d)
                    s(bi * n + d, bj * n + d) -= gens[g](bj, bi);
        stack.middleRows(static_cast<Eigen::Index>(g) * n2, n2) = s;
    }
    Eigen::FullPivLU<Matrix> lu(stack);
    lu.setThreshold(tol);
    Matrix kernel = lu.kernel();
    std::vector<Matrix> out;
    if (lu.dimensionOfKernel() == 0) return out;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
        out.push_back(Eigen::Map<const Matrix>(kernel.col(c).data(), n, n));
    return out;
}

inline Matrix E(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

// block-diagonal embedding a ⊕ b
inline Matrix dsum(const Matrix& a, const Matrix& b) {
    Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

} // namespace wstar::oracle

#endif
