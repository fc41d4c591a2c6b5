#include "denaturefit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "denaturefit/kernels.hpp"

namespace denaturefit {

double model_signal(const FullParams& p, double d, const ModelConstants& c) {
    double out = 0.0;
    kernels::model_batch(p, c, &d, &out, 1);
    return out;
}

std::vector<double> residuals(const FullParams& p, const DenaturationDataset& data,
                              const ModelConstants& c) {
    const std::size_t n = data.size();
    std::vector<double> d(n), model(n), r(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = data.denaturant(i);
    kernels::model_batch(p, c, d.data(), model.data(), n);
    for (std::size_t i = 0; i < n; ++i) r[i] = data.signal(i) - model[i];
    return r;
}

double sse_of(std::span<const double> r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

JacobianMatrix jacobian(const FullParams& p, const DenaturationDataset& data,
                        const ModelConstants& c) {
    const std::size_t n = data.size();
    JacobianMatrix jac(n);
    std::vector<double> d(n), model(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = data.denaturant(i);
    kernels::model_jacobian_batch(p, c, d.data(), model.data(), jac.data(), n);
    return jac;
}

namespace {

// Least-squares line through a range of points; falls back to a horizontal
// line through the mean when the d values do not spread.
std::pair<double, double> fit_line(const std::vector<DataPoint>& pts,
                                   std::size_t begin, std::size_t end) {
    const double n = static_cast<double>(end - begin);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        sx += pts[i].denaturant;
        sy += pts[i].signal;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double dx = pts[i].denaturant - mx;
        sxx += dx * dx;
        sxy += dx * (pts[i].signal - my);
    }
    if (sxx <= 0.0) return {my, 0.0};
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

// d value where the apparent unfolded fraction crosses `level`, by linear
// interpolation between the first adjacent bracketing pair; nearest point
// when no pair brackets.
double crossing(const std::vector<double>& d, const std::vector<double>& phi,
                double level) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        const double f0 = phi[i] - level, f1 = phi[i + 1] - level;
        if (f0 == 0.0) return d[i];
        if (f0 * f1 < 0.0) {
            if (d[i + 1] == d[i]) return d[i];
            return d[i] + (d[i + 1] - d[i]) * (-f0) / (f1 - f0);
        }
    }
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double err = std::fabs(phi[i] - level);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    return d[best];
}

}  // namespace

FullParams initial_guess(const DenaturationDataset& data, LemForm form,
                         const ModelConstants& c) {
    const std::size_t n = data.size();
    if (n < 8)
        throw std::invalid_argument("initial guess needs at least 8 points");

    // Sort a copy by (d, signal) so the guess is invariant to input order.
    std::vector<DataPoint> pts(data.points());
    std::sort(pts.begin(), pts.end(), [](const DataPoint& a, const DataPoint& b) {
        if (a.denaturant != b.denaturant) return a.denaturant < b.denaturant;
        return a.signal < b.signal;
    });

    double lo_sig = pts[0].signal, hi_sig = pts[0].signal, sum_sig = 0.0;
    for (const auto& p : pts) {
        lo_sig = std::min(lo_sig, p.signal);
        hi_sig = std::max(hi_sig, p.signal);
        sum_sig += p.signal;
    }
    const double mean_sig = sum_sig / static_cast<double>(n);
    const double eps = std::numeric_limits<double>::epsilon();
    if (hi_sig - lo_sig <= 10.0 * eps * std::fabs(mean_sig))
        throw FlatDataError("signal is constant to machine precision; no transition to fit");

    const std::size_t tail =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n))));
    auto [a0, a1] = fit_line(pts, 0, tail);
    auto [b0, b1] = fit_line(pts, n - tail, n);

    // Apparent unfolded fraction against the two baseline lines, clipped to
    // keep noisy tail points from dragging the quartile crossings.
    std::vector<double> d(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = pts[i].denaturant;
        const double base_a = a0 + a1 * d[i];
        const double base_b = b0 + b1 * d[i];
        const double den = base_b - base_a;
        double f = (den != 0.0) ? (pts[i].signal - base_a) / den : 0.5;
        phi[i] = std::clamp(f, -0.5, 1.5);
    }

    const double d_range = std::max(d.back() - d.front(), 1e-6);
    double d50 = crossing(d, phi, 0.5);
    const double d25 = crossing(d, phi, 0.25);
    const double d75 = crossing(d, phi, 0.75);
    const double width = std::clamp(2.0 * std::fabs(d75 - d25), 0.2, d_range);
    const double m = 4.0 * c.rt() / width;
    if (!(d50 > 0.0)) d50 = d.front() + 0.5 * d_range;

    FullParams guess{a0, a1, b0, b1, from_triple({m * d50, m, d50}, form)};
    return guess;
}

}  // namespace denaturefit
