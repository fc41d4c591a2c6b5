#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "denaturefit/types.hpp"

namespace denaturefit {

// Dense symmetric matrix, row-major, sized for normal equations (k <= 6 in
// practice, but any order works).
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t k) : k_(k), a_(k * k, 0.0) {}

    static SymMatrix identity(std::size_t k) {
        SymMatrix m(k);
        for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
        return m;
    }

    // Validates symmetry to 1e-12 relative on the larger of the two mirrored
    // entries; throws std::invalid_argument on asymmetry.
    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t order() const { return k_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * k_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * k_ + j]; }

    void set_sym(std::size_t i, std::size_t j, double v) {
        a_[i * k_ + j] = v;
        a_[j * k_ + i] = v;
    }

private:
    std::size_t k_ = 0;
    std::vector<double> a_;
};

// Lower-triangular Cholesky factor L with A = L * L^T.
class CholeskyFactor {
public:
    explicit CholeskyFactor(std::size_t k) : k_(k), l_(k * k, 0.0) {}

    std::size_t order() const { return k_; }
    double& operator()(std::size_t i, std::size_t j) { return l_[i * k_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return l_[i * k_ + j]; }

    // Solves L L^T x = rhs by forward then backward substitution.
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    std::size_t k_;
    std::vector<double> l_;
};

// Throws NotPositiveDefinite (with the failing pivot index) when any pivot
// is <= 0, which doubles as the positive-definiteness test in the optimizer.
CholeskyFactor cholesky_decompose(const SymMatrix& a);

// Inverse of a symmetric positive definite matrix via its Cholesky factor.
SymMatrix invert_spd(const SymMatrix& a);

}  // namespace denaturefit
