#include "denaturefit/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "denaturefit/kernels.hpp"
#include "denaturefit/stats.hpp"

namespace denaturefit {

std::string_view to_string(CiMethod m) {
    switch (m) {
        case CiMethod::Marginal: return "marginal";
        case CiMethod::Search: return "search";
        case CiMethod::MonteCarlo: return "mc";
        case CiMethod::Bootstrap: return "bootstrap";
    }
    return "?";
}

CiMethod parse_ci_method(std::string_view name) {
    if (name == "marginal") return CiMethod::Marginal;
    if (name == "search") return CiMethod::Search;
    if (name == "mc") return CiMethod::MonteCarlo;
    if (name == "bootstrap") return CiMethod::Bootstrap;
    throw std::invalid_argument("unknown confidence method: " + std::string(name) +
                                " (expected marginal, search, mc or bootstrap)");
}

ConfidenceInterval ConfidenceInterval::make(double lower, double upper,
                                            double center, double level,
                                            CiMethod method) {
    ConfidenceInterval ci;
    ci.lower = std::min(lower, center);
    ci.upper = std::max(upper, center);
    ci.center = center;
    ci.level = level;
    ci.method = method;
    return ci;
}

namespace {

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must be in (0, 1)");
}

}  // namespace

ConfidenceInterval marginal_ci(const FitResult& fit, std::size_t param_index,
                               double level) {
    check_level(level);
    if (param_index >= kParamCount)
        throw std::invalid_argument("parameter index out of range");
    if (!fit.has_covariance)
        throw ZeroVariance("fit carries no covariance for a marginal interval");
    const double var = fit.covariance(param_index, param_index);
    if (!(var > 0.0))
        throw ZeroVariance("parameter variance is not positive");
    const double t =
        stats::t_quantile(1.0 - 0.5 * (1.0 - level), static_cast<double>(fit.dof));
    const double half = t * std::sqrt(var);
    const double center = fit.params.as_array()[param_index];
    return ConfidenceInterval::make(center - half, center + half, center, level,
                                    CiMethod::Marginal);
}

namespace {

// SSE with parameter `idx` pinned to `value`, all others refit. Warm starts
// from *warm, which is updated on convergence so a scan can chain outward.
double profile_sse(const DenaturationDataset& data, LemForm form,
                   std::size_t idx, double value, std::array<double, 6>* warm,
                   const ModelConstants& c, const std::array<bool, 6>& base_fixed) {
    // Pinning d50 of the dg0-d50 form at zero would divide by zero in the
    // model; treat that ray as unreachable.
    if (form == LemForm::Dg0D50 && idx == 5 && std::fabs(value) < 1e-9)
        return std::numeric_limits<double>::infinity();

    std::array<double, 6> start = *warm;
    start[idx] = value;
    LmOptions opts;
    opts.fixed = base_fixed;
    opts.fixed[idx] = true;
    opts.compute_covariance = false;
    const FitResult r =
        lm_fit(data, FullParams::from_array(start, form), c, opts);
    if (r.converged) *warm = r.params.as_array();
    return r.sse;
}

}  // namespace

ConfidenceInterval search_ci(const DenaturationDataset& data, const FitResult& fit,
                             std::size_t param_index, double level,
                             const ModelConstants& c, const SearchOptions& opts) {
    check_level(level);
    if (param_index >= kParamCount)
        throw std::invalid_argument("parameter index out of range");
    if (opts.region_dim < 1)
        throw std::invalid_argument("region dimension must be >= 1");

    const double dof = static_cast<double>(fit.dof);
    const double q = static_cast<double>(opts.region_dim);
    const double f = stats::f_quantile(level, q, dof);
    const double sse_target = fit.sse * (1.0 + q * f / dof);

    const ConfidenceInterval marginal = marginal_ci(fit, param_index, level);
    const double center = fit.params.as_array()[param_index];
    const double step = 0.5 * marginal.width();
    if (!(step > 0.0)) throw ZeroVariance("marginal step width is zero");

    const LemForm form = fit.params.lem.form;
    auto locate = [&](double direction) {
        std::array<double, 6> warm = fit.params.as_array();
        double inner_v = center;
        bool crossed = false;
        double outer_v = center;
        for (int k = 1; k <= opts.max_halfwidths; ++k) {
            const double v = center + direction * step * k;
            const double s = profile_sse(data, form, param_index, v, &warm, c, opts.fixed);
            if (s >= sse_target) {
                outer_v = v;
                crossed = true;
                break;
            }
            inner_v = v;
        }
        if (!crossed)
            throw BoundNotFound("SSE contour not crossed within " +
                                std::to_string(opts.max_halfwidths) +
                                " half-widths of the estimate");
        double lo = inner_v, hi = outer_v;
        while (std::fabs(hi - lo) >
               opts.rel_tol * (std::fabs(center) + std::fabs(hi - lo))) {
            const double mid = 0.5 * (lo + hi);
            const double s = profile_sse(data, form, param_index, mid, &warm, c, opts.fixed);
            if (s >= sse_target)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    const double upper = locate(+1.0);
    const double lower = locate(-1.0);
    return ConfidenceInterval::make(lower, upper, center, level, CiMethod::Search);
}

std::pair<double, double> shortest_interval(std::vector<double> samples,
                                            double level) {
    check_level(level);
    if (samples.empty())
        throw std::invalid_argument("shortest interval of an empty sample");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    // Nudge below the product so levels that are exact in decimal but just
    // above in binary (0.68 * 500) do not round the count up.
    std::size_t w = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(n) - 1e-9));
    w = std::clamp<std::size_t>(w, 1, n);
    std::size_t best = 0;
    double best_width = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + w <= n; ++i) {
        const double width = samples[i + w - 1] - samples[i];
        if (width < best_width) {
            best_width = width;
            best = i;
        }
    }
    return {samples[best], samples[best + w - 1]};
}

McEnsemble mc_ensemble(const DenaturationDataset& data, const FitResult& fit,
                       McMode mode, std::size_t n_rounds, RngStream& rng,
                       const ModelConstants& c) {
    if (n_rounds == 0)
        throw std::invalid_argument("ensemble needs at least one round");
    const std::size_t n = data.size();

    std::vector<double> d(n), mu(n), res(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = data.denaturant(i);
    kernels::model_batch(fit.params, c, d.data(), mu.data(), n);
    for (std::size_t i = 0; i < n; ++i) res[i] = data.signal(i) - mu[i];
    const double sigma = std::sqrt(fit.s2);

    McEnsemble out;
    out.n_requested = n_rounds;
    out.rounds.reserve(n_rounds);
    out.triples.reserve(n_rounds);

    LmOptions opts;
    opts.compute_covariance = false;

    std::vector<DataPoint> pts(n);
    for (std::size_t round = 0; round < n_rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            double noise;
            if (mode == McMode::GaussianNoise) {
                noise = rng.gaussian(sigma);
            } else {
                const std::size_t pick = std::min<std::size_t>(
                    static_cast<std::size_t>(rng.uniform01() * n), n - 1);
                noise = res[pick];
            }
            pts[i] = {d[i], mu[i] + noise};
        }
        const FitResult r =
            lm_fit(DenaturationDataset(pts), fit.params, c, opts);
        if (!r.converged) {
            ++out.n_failed;
            continue;
        }
        out.rounds.push_back(r.params.as_array());
        out.triples.push_back(to_triple(r.params.lem));
    }

    const std::size_t cnt = out.rounds.size();
    if (cnt >= 2) {
        std::array<double, 6> mean{};
        for (const auto& r : out.rounds)
            for (std::size_t j = 0; j < 6; ++j) mean[j] += r[j];
        for (auto& v : mean) v /= static_cast<double>(cnt);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i; j < 6; ++j) {
                double s = 0.0;
                for (const auto& r : out.rounds)
                    s += (r[i] - mean[i]) * (r[j] - mean[j]);
                out.covariance.set_sym(i, j, s / static_cast<double>(cnt - 1));
            }
    }
    return out;
}

McResult monte_carlo_ci(const DenaturationDataset& data, const FitResult& fit,
                        double level, McMode mode, std::size_t n_rounds,
                        RngStream& rng, const ModelConstants& c) {
    check_level(level);
    if (n_rounds < 50)
        throw std::invalid_argument(
            "interval extraction needs at least 50 rounds");

    McResult out;
    out.ensemble = mc_ensemble(data, fit, mode, n_rounds, rng, c);
    if (out.ensemble.n_failed * 20 > n_rounds)
        throw ExcessiveFailures(out.ensemble.n_failed, n_rounds);

    const CiMethod method =
        mode == McMode::GaussianNoise ? CiMethod::MonteCarlo : CiMethod::Bootstrap;
    const std::array<double, 6> center = fit.params.as_array();
    std::vector<double> column(out.ensemble.rounds.size());
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t i = 0; i < column.size(); ++i)
            column[i] = out.ensemble.rounds[i][j];
        const auto [lo, hi] = shortest_interval(column, level);
        out.intervals[j] = ConfidenceInterval::make(lo, hi, center[j], level, method);
    }
    return out;
}

double propagate_error(double x1, double x2, double s1, double s2, double cov,
                       Relation rel, CovTermWeight w) {
    if (!(s1 >= 0.0) || !(s2 >= 0.0))
        throw std::invalid_argument("standard deviations must be >= 0");
    const double k =
        w == CovTermWeight::Doubled ? 2.0 : (w == CovTermWeight::Single ? 1.0 : 0.0);
    double var;
    if (rel == Relation::Product) {
        var = x2 * x2 * s1 * s1 + x1 * x1 * s2 * s2 + k * x1 * x2 * cov;
    } else {
        if (x2 == 0.0)
            throw std::invalid_argument("ratio propagation requires x2 != 0");
        const double y = x1 / x2;
        var = (s1 * s1 + y * y * s2 * s2 - k * y * cov) / (x2 * x2);
    }
    if (var < 0.0)
        throw Error("propagated variance is negative; covariance is inconsistent "
                    "with the standard deviations");
    return std::sqrt(var);
}

ProfileTrace profile_trace(const DenaturationDataset& data, const FitResult& fit,
                           std::size_t param_index, std::span<const double> grid,
                           const ModelConstants& c) {
    if (param_index != 4 && param_index != 5)
        throw std::invalid_argument("profile parameter must be one of the line parameters");
    if (grid.empty())
        throw std::invalid_argument("profile grid is empty");

    const LemForm form = fit.params.lem.form;
    const std::size_t partner_index = param_index == 4 ? 5 : 4;
    const double center = fit.params.as_array()[param_index];

    // Split the grid at the best fit and sweep outward on each side so every
    // refit warm-starts from its inner neighbour.
    std::vector<std::size_t> order;
    order.reserve(grid.size());
    std::size_t split = 0;
    while (split < grid.size() && grid[split] <= center) ++split;
    for (std::size_t i = split; i-- > 0;) order.push_back(i);
    const std::size_t left_count = order.size();
    for (std::size_t i = split; i < grid.size(); ++i) order.push_back(i);

    ProfileTrace trace;
    trace.form = form;
    trace.param_index = param_index;
    trace.points.resize(grid.size());

    std::array<double, 6> warm{};
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (pos == 0 || pos == left_count) warm = fit.params.as_array();
        const std::size_t gi = order[pos];
        std::array<double, 6> start = warm;
        start[param_index] = grid[gi];
        LmOptions opts;
        opts.fixed[param_index] = true;
        opts.compute_covariance = false;
        ProfilePoint& pt = trace.points[gi];
        pt.value = grid[gi];
        try {
            const FitResult r =
                lm_fit(data, FullParams::from_array(start, form), c, opts);
            pt.partner = r.params.as_array()[partner_index];
            pt.sse = r.sse;
            pt.params = r.params.as_array();
            pt.converged = r.converged;
            if (r.converged) warm = r.params.as_array();
        } catch (const Error&) {
            pt.partner = std::numeric_limits<double>::quiet_NaN();
            pt.sse = std::numeric_limits<double>::quiet_NaN();
            pt.converged = false;
        }
    }
    return trace;
}

ProfileTrace profile_trace(const DenaturationDataset& data, LemForm form,
                           std::size_t param_index, std::span<const double> grid,
                           const ModelConstants& c) {
    return profile_trace(data, fit_dataset(data, form, c), param_index, grid, c);
}

}  // namespace denaturefit
