#ifndef WSTAR_RNG_HPP
#define WSTAR_RNG_HPP

#include "wstar/common.hpp"

#include <cstdint>
#include <random>

namespace wstar {

// All randomized constructions take an explicit 64-bit seed; instances
// derive independent child seeds so parallel and serial runs agree.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
        // splitmix64 on seed ^ golden-ratio-scrambled index
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double gaussian() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
    }

    Complex complex_gaussian() { return {normal_(engine_), normal_(engine_)}; }

    Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
        return m;
    }

    Matrix hermitian(Eigen::Index n) {
        Matrix m = matrix(n, n);
        return 0.5 * (m + m.adjoint()).eval();
    }

    Vector vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_gaussian();
        return v;
    }

    // Haar-distributed unitary: QR of a Ginibre matrix with phase fix
    Matrix unitary(Eigen::Index n) {
        Matrix g = matrix(n, n);
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ();
        Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex d = r(i, i);
            double a = std::abs(d);
            q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
        }
        return q;
    }

    // random element of a span with standard complex gaussian coefficients
    Matrix span_element(const std::vector<Matrix>& basis) {
        Matrix m = Matrix::Zero(basis.front().rows(), basis.front().cols());
        for (const auto& b : basis) m += complex_gaussian() * b;
        return m;
    }

    Matrix span_element_hermitian(const std::vector<Matrix>& basis) {
        Matrix m = span_element(basis);
        return 0.5 * (m + m.adjoint()).eval();
    }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace wstar

#endif
