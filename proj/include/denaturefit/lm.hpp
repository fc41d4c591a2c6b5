#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "denaturefit/linalg.hpp"
#include "denaturefit/model.hpp"

namespace denaturefit {

struct LmOptions {
    int max_iterations = 200;
    double lambda_init = 1e-3;
    double lambda_min = 1e-12;
    double lambda_max = 1e12;
    // Converged when an accepted step both reduces SSE by less than
    // sse_tolerance (absolute) and moves every free parameter by less than
    // step_tolerance relative to its magnitude.
    double sse_tolerance = 1e-5;
    double step_tolerance = 1e-6;
    // Parameters flagged here stay at their start values; the normal
    // equations are solved over the free ones only. Used for profile traces
    // and confidence-region searches.
    std::array<bool, 6> fixed{};
    // Skip the covariance pass (refit loops that only need SSE).
    bool compute_covariance = true;
    // When non-null, receives the SSE after every accepted step.
    std::vector<double>* sse_trace = nullptr;
};

enum class FitStatus { Converged, MaxIterations };

struct FitResult {
    FullParams params;
    double sse = 0.0;
    std::size_t n = 0;
    int k = 6;            // number of free parameters
    std::size_t dof = 0;  // n - k
    double s2 = 0.0;      // sse / dof
    // 6x6 in parameter order (a0, a1, b0, b1, p1, p2). Rows and columns of
    // fixed parameters are zero; correlation has a unit diagonal.
    SymMatrix covariance{6};
    SymMatrix correlation{6};
    bool has_covariance = false;
    bool converged = false;
    FitStatus status = FitStatus::MaxIterations;
    int iterations = 0;  // outer iterations = Jacobian evaluations
};

// Levenberg-Marquardt with multiplicative damping of the normal-equation
// diagonal. Steps are accepted only on strict SSE decrease. Throws
// SingularNormalMatrix when the damped normal matrix is not positive
// definite even at maximum damping; returns the best visited point with
// converged == false when the iteration budget runs out.
FitResult lm_fit(const DenaturationDataset& data, const FullParams& start,
                 const ModelConstants& c, const LmOptions& opts = {});

// initial_guess + lm_fit in one call.
FitResult fit_dataset(const DenaturationDataset& data, LemForm form,
                      const ModelConstants& c, const LmOptions& opts = {});

// cov_ij / sqrt(cov_ii * cov_jj), diagonal exactly 1, off-diagonals clamped
// to [-1, 1]. Throws ZeroVariance if any diagonal entry is not positive.
SymMatrix correlation_from_covariance(const SymMatrix& cov);

}  // namespace denaturefit
