#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "denaturefit/lm.hpp"
#include "denaturefit/rng.hpp"

namespace denaturefit {

enum class CiMethod { Marginal, Search, MonteCarlo, Bootstrap };

std::string_view to_string(CiMethod m);
CiMethod parse_ci_method(std::string_view name);

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double center = 0.0;
    double level = 0.0;
    CiMethod method = CiMethod::Marginal;

    double width() const { return upper - lower; }
    bool contains(double v) const { return lower <= v && v <= upper; }

    // Keeps lower <= center <= upper; sample-based intervals are widened to
    // include the point estimate when the ensemble landed entirely on one
    // side of it.
    static ConfidenceInterval make(double lower, double upper, double center,
                                   double level, CiMethod method);
};

// Student-t interval from the fit covariance:
// center +- t(1-(1-level)/2, dof) * sqrt(cov_jj).
ConfidenceInterval marginal_ci(const FitResult& fit, std::size_t param_index,
                               double level);

struct SearchOptions {
    // Dimension of the confidence region whose SSE contour is traced. 2
    // projects the joint region of the two free-energy-line parameters onto
    // each axis; 1 gives the per-parameter profile threshold, equivalent to
    // the marginal interval when the model is linear.
    int region_dim = 2;
    // Outward scan limit, in marginal half-widths, before giving up.
    int max_halfwidths = 50;
    // Bisection stops when the bracket is this small relative to the bound.
    double rel_tol = 1e-4;
    // Parameters held at their fitted values during every profile refit, on
    // top of the searched one. Must match the mask the fit was made with.
    std::array<bool, 6> fixed{};
};

// Parameter-space search: step the parameter away from its estimate, refit
// the others, and locate where SSE crosses
// sse_min * (1 + q * F(q, dof; level) / dof). Throws BoundNotFound if the
// contour is not crossed within the scan limit.
ConfidenceInterval search_ci(const DenaturationDataset& data, const FitResult& fit,
                             std::size_t param_index, double level,
                             const ModelConstants& c,
                             const SearchOptions& opts = {});

// Shortest window containing ceil(level * n) of the samples. The input is
// copied and sorted.
std::pair<double, double> shortest_interval(std::vector<double> samples,
                                            double level);

enum class McMode { GaussianNoise, Bootstrap };

struct McEnsemble {
    std::vector<std::array<double, 6>> rounds;  // converged refits
    std::vector<LemTriple> triples;
    SymMatrix covariance{6};  // empirical over rounds
    std::size_t n_requested = 0;
    std::size_t n_failed = 0;
};

struct McResult {
    std::array<ConfidenceInterval, 6> intervals;
    McEnsemble ensemble;
};

// Shared ensemble builder: resample (synthetic Gaussian noise around the
// fitted curve, or residual bootstrap), refit each round warm-started from
// the fit. Rounds that fail to converge are counted, not silently dropped.
McEnsemble mc_ensemble(const DenaturationDataset& data, const FitResult& fit,
                       McMode mode, std::size_t n_rounds, RngStream& rng,
                       const ModelConstants& c);

// Shortest-interval bounds per parameter from an mc_ensemble. Requires
// n_rounds >= 50; throws ExcessiveFailures when more than 5% of rounds
// failed to converge.
McResult monte_carlo_ci(const DenaturationDataset& data, const FitResult& fit,
                        double level, McMode mode, std::size_t n_rounds,
                        RngStream& rng, const ModelConstants& c);

enum class Relation { Product, Ratio };

// Weight of the covariance cross term in first-order error propagation:
// Doubled is the standard first-order result, Single reproduces the
// reduced-weight variant, Omitted drops the term entirely.
enum class CovTermWeight { Doubled, Single, Omitted };

// Propagated standard deviation of y = x1 * x2 or y = x1 / x2. Throws on a
// negative propagated variance.
double propagate_error(double x1, double x2, double s1, double s2, double cov,
                       Relation rel, CovTermWeight w = CovTermWeight::Doubled);

struct ProfilePoint {
    double value = 0.0;    // fixed value of the profiled parameter
    double partner = 0.0;  // refitted value of the other line parameter
    double sse = 0.0;
    std::array<double, 6> params{};
    bool converged = false;
};

struct ProfileTrace {
    LemForm form = LemForm::Dg0M;
    std::size_t param_index = 4;
    std::vector<ProfilePoint> points;  // in grid order
};

// SSE profile: refit with one line parameter pinned at each grid value,
// sweeping outward from the best fit so each refit warm-starts from its
// neighbour. Failed refits are flagged in place.
ProfileTrace profile_trace(const DenaturationDataset& data, const FitResult& fit,
                           std::size_t param_index, std::span<const double> grid,
                           const ModelConstants& c);

// Convenience overload that fits `form` first.
ProfileTrace profile_trace(const DenaturationDataset& data, LemForm form,
                           std::size_t param_index, std::span<const double> grid,
                           const ModelConstants& c);

}  // namespace denaturefit
