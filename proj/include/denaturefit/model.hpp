#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "denaturefit/lem.hpp"
#include "denaturefit/types.hpp"

namespace denaturefit {

// Full parameter set of a two-state curve: folded baseline a0 + a1*d,
// unfolded baseline b0 + b1*d, and the free-energy line in one of the three
// forms. Flattened order is (a0, a1, b0, b1, p1, p2) everywhere: Jacobian
// columns, covariance rows, report columns.
struct FullParams {
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
    LemParams lem;

    std::array<double, 6> as_array() const {
        return {a0, a1, b0, b1, lem.p1, lem.p2};
    }

    static FullParams from_array(const std::array<double, 6>& v, LemForm form) {
        return {v[0], v[1], v[2], v[3], {form, v[4], v[5]}};
    }

    // Same line and baselines, different parameterization of the line.
    FullParams converted(LemForm target) const {
        return {a0, a1, b0, b1, convert(lem, target)};
    }
};

inline constexpr std::size_t kParamCount = 6;

// Observable signal at denaturant concentration d:
//   alpha = (alphaA + alphaB * K) / (1 + K),  K = exp(-DG / RT).
// Evaluated through the folded/unfolded weight form so both extremes
// saturate exactly to the corresponding baseline and no overflow occurs
// for any |DG|/RT.
double model_signal(const FullParams& p, double d, const ModelConstants& c);

// y_i - model(d_i) in dataset order.
std::vector<double> residuals(const FullParams& p, const DenaturationDataset& data,
                              const ModelConstants& c);

double sse_of(std::span<const double> r);

// Dense n x 6 Jacobian of the model signal, stored column-major so each
// parameter's column is contiguous for the accumulation kernels.
class JacobianMatrix {
public:
    JacobianMatrix(std::size_t rows) : n_(rows), buf_(rows * kParamCount, 0.0) {}

    std::size_t rows() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return buf_[j * n_ + i]; }
    double* col(std::size_t j) { return buf_.data() + j * n_; }
    const double* col(std::size_t j) const { return buf_.data() + j * n_; }
    double* data() { return buf_.data(); }
    const double* data() const { return buf_.data(); }

private:
    std::size_t n_;
    std::vector<double> buf_;
};

JacobianMatrix jacobian(const FullParams& p, const DenaturationDataset& data,
                        const ModelConstants& c);

// Heuristic starting point: baseline lines through the low-d and high-d
// tails, transition midpoint and width from the apparent unfolded fraction.
// Deterministic under any permutation of the input points. Throws
// FlatDataError when the signal spread is below the noise floor of the
// arithmetic. Requires at least 8 points.
FullParams initial_guess(const DenaturationDataset& data, LemForm form,
                         const ModelConstants& c);

}  // namespace denaturefit
