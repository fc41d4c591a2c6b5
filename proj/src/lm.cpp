#include "denaturefit/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "denaturefit/kernels.hpp"

namespace denaturefit {

namespace {

std::vector<std::size_t> free_indices(const LmOptions& opts) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < kParamCount; ++j)
        if (!opts.fixed[j]) idx.push_back(j);
    return idx;
}

double sse_against(const std::vector<double>& y, const std::vector<double>& model) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - model[i];
        s += r * r;
    }
    return s;
}

// J^T J and J^T r over the free columns, accumulated in fixed index order so
// results do not depend on the kernel backend beyond the (bit-identical)
// Jacobian itself.
void normal_equations(const JacobianMatrix& jac, const std::vector<double>& y,
                      const std::vector<double>& model,
                      const std::vector<std::size_t>& free_idx, SymMatrix& a,
                      std::vector<double>& g) {
    const std::size_t n = jac.rows();
    const std::size_t ka = free_idx.size();
    for (std::size_t p = 0; p < ka; ++p) {
        const double* cp = jac.col(free_idx[p]);
        for (std::size_t q = p; q < ka; ++q) {
            const double* cq = jac.col(free_idx[q]);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += cp[i] * cq[i];
            a.set_sym(p, q, s);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += cp[i] * (y[i] - model[i]);
        g[p] = s;
    }
}

}  // namespace

SymMatrix correlation_from_covariance(const SymMatrix& cov) {
    const std::size_t k = cov.order();
    for (std::size_t i = 0; i < k; ++i)
        if (!(cov(i, i) > 0.0))
            throw ZeroVariance("covariance diagonal entry " + std::to_string(i) +
                               " is not positive");
    SymMatrix r(k);
    for (std::size_t i = 0; i < k; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            const double v = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
            r.set_sym(i, j, std::clamp(v, -1.0, 1.0));
        }
    }
    return r;
}

FitResult lm_fit(const DenaturationDataset& data, const FullParams& start,
                 const ModelConstants& c, const LmOptions& opts) {
    c.validate();
    const std::size_t n = data.size();
    if (n < 8)
        throw std::invalid_argument("fit needs at least 8 data points");
    const std::vector<std::size_t> free_idx = free_indices(opts);
    const std::size_t ka = free_idx.size();
    if (ka == 0)
        throw std::invalid_argument("all parameters are fixed");

    std::vector<double> d(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = data.denaturant(i);
        y[i] = data.signal(i);
    }

    const LemForm form = start.lem.form;
    std::array<double, 6> p = start.as_array();
    auto params_of = [form](const std::array<double, 6>& v) {
        return FullParams::from_array(v, form);
    };

    std::vector<double> model(n), model_trial(n);
    kernels::model_batch(params_of(p), c, d.data(), model.data(), n);
    double sse = sse_against(y, model);

    JacobianMatrix jac(n);
    SymMatrix a(ka), a_damped(ka);
    std::vector<double> g(ka);

    double lambda = opts.lambda_init;
    bool converged = false;
    int iterations = 0;

    if (opts.sse_trace) opts.sse_trace->push_back(sse);

    for (int iter = 1; iter <= opts.max_iterations && !converged; ++iter) {
        iterations = iter;
        kernels::model_jacobian_batch(params_of(p), c, d.data(), model.data(),
                                      jac.data(), n);
        sse = sse_against(y, model);
        normal_equations(jac, y, model, free_idx, a, g);

        bool accepted = false;
        while (!accepted && !converged) {
            for (std::size_t i = 0; i < ka; ++i)
                for (std::size_t j = 0; j < ka; ++j)
                    a_damped(i, j) = (i == j) ? a(i, j) * (1.0 + lambda) : a(i, j);

            std::vector<double> step;
            try {
                step = cholesky_decompose(a_damped).solve(g);
            } catch (const NotPositiveDefinite&) {
                if (lambda >= opts.lambda_max)
                    throw SingularNormalMatrix(
                        "normal equations singular at maximum damping");
                lambda = std::min(lambda * 10.0, opts.lambda_max);
                continue;
            }

            std::array<double, 6> p_trial = p;
            bool step_small = true;
            for (std::size_t j = 0; j < ka; ++j) {
                p_trial[free_idx[j]] += step[j];
                if (std::fabs(step[j]) >=
                    opts.step_tolerance * (std::fabs(p[free_idx[j]]) + 1e-12))
                    step_small = false;
            }

            kernels::model_batch(params_of(p_trial), c, d.data(),
                                 model_trial.data(), n);
            const double sse_trial = sse_against(y, model_trial);

            const bool improves =
                sse_trial < sse ||
                (!std::isfinite(sse) && std::isfinite(sse_trial));
            if (improves) {
                const double decrease = sse - sse_trial;
                p = p_trial;
                sse = sse_trial;
                lambda = std::max(lambda / 10.0, opts.lambda_min);
                accepted = true;
                if (opts.sse_trace) opts.sse_trace->push_back(sse);
                if (decrease < opts.sse_tolerance && step_small) converged = true;
            } else {
                // A vanishing rejected step at an SSE plateau is a stationary
                // point: the start was already the minimum.
                if (step_small && std::fabs(sse_trial - sse) < opts.sse_tolerance) {
                    converged = true;
                    break;
                }
                if (lambda >= opts.lambda_max) break;  // stalled
                lambda = std::min(lambda * 10.0, opts.lambda_max);
            }
        }
        if (!accepted && !converged) break;  // stalled at maximum damping
    }

    FitResult out;
    out.params = params_of(p);
    out.sse = sse;
    out.n = n;
    out.k = static_cast<int>(ka);
    out.dof = n - ka;
    out.s2 = sse / static_cast<double>(out.dof);
    out.converged = converged;
    out.status = converged ? FitStatus::Converged : FitStatus::MaxIterations;
    out.iterations = iterations;

    if (opts.compute_covariance) {
        kernels::model_jacobian_batch(out.params, c, d.data(), model.data(),
                                      jac.data(), n);
        normal_equations(jac, y, model, free_idx, a, g);
        try {
            const SymMatrix inv = invert_spd(a);
            for (std::size_t i = 0; i < ka; ++i)
                for (std::size_t j = 0; j < ka; ++j)
                    out.covariance(free_idx[i], free_idx[j]) = out.s2 * inv(i, j);
            const SymMatrix corr_free = correlation_from_covariance(inv);
            out.correlation = SymMatrix::identity(6);
            for (std::size_t i = 0; i < ka; ++i)
                for (std::size_t j = 0; j < ka; ++j)
                    out.correlation(free_idx[i], free_idx[j]) = corr_free(i, j);
            out.has_covariance = true;
        } catch (const Error&) {
            // Normal matrix indefinite or degenerate at the final point;
            // leave covariance empty, callers check has_covariance.
            out.covariance = SymMatrix(6);
            out.correlation = SymMatrix::identity(6);
        }
    } else {
        out.correlation = SymMatrix::identity(6);
    }
    return out;
}

FitResult fit_dataset(const DenaturationDataset& data, LemForm form,
                      const ModelConstants& c, const LmOptions& opts) {
    return lm_fit(data, initial_guess(data, form, c), c, opts);
}

}  // namespace denaturefit
