#include "denaturefit/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace denaturefit {

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t k = rows.size();
    SymMatrix m(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (rows[i].size() != k)
            throw std::invalid_argument("matrix rows must form a square matrix");
        for (std::size_t j = 0; j < k; ++j) m(i, j) = rows[i][j];
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double scale = std::max(std::fabs(m(i, j)), std::fabs(m(j, i)));
            if (std::fabs(m(i, j) - m(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("matrix is not symmetric");
        }
    return m;
}

CholeskyFactor cholesky_decompose(const SymMatrix& a) {
    const std::size_t k = a.order();
    CholeskyFactor l(k);
    for (std::size_t j = 0; j < k; ++j) {
        double diag = a(j, j);
        for (std::size_t t = 0; t < j; ++t) diag -= l(j, t) * l(j, t);
        if (!(diag > 0.0)) throw NotPositiveDefinite(j);
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < k; ++i) {
            double s = a(i, j);
            for (std::size_t t = 0; t < j; ++t) s -= l(i, t) * l(j, t);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
    if (rhs.size() != k_)
        throw std::invalid_argument("right-hand side length does not match matrix order");
    std::vector<double> y(k_);
    for (std::size_t i = 0; i < k_; ++i) {
        double s = rhs[i];
        for (std::size_t t = 0; t < i; ++t) s -= (*this)(i, t) * y[t];
        y[i] = s / (*this)(i, i);
    }
    std::vector<double> x(k_);
    for (std::size_t ii = k_; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t t = ii + 1; t < k_; ++t) s -= (*this)(t, ii) * x[t];
        x[ii] = s / (*this)(ii, ii);
    }
    return x;
}

SymMatrix invert_spd(const SymMatrix& a) {
    const std::size_t k = a.order();
    const CholeskyFactor l = cholesky_decompose(a);
    SymMatrix inv(k);
    std::vector<double> e(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = l.solve(e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < k; ++i) inv(i, j) = col[i];
    }
    // Symmetrize away the last-bit asymmetry from column-wise solves.
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            inv.set_sym(i, j, 0.5 * (inv(i, j) + inv(j, i)));
    return inv;
}

}  // namespace denaturefit
