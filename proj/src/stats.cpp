#include "denaturefit/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace denaturefit::stats {

namespace {

// Lentz evaluation of the continued fraction for I_x(a, b).
double beta_cf(double a, double b, double x) {
    constexpr double kFpMin = 1e-300;
    constexpr double kEps = 3e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete beta requires a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double dof) {
    if (!(dof > 0.0))
        throw std::invalid_argument("t distribution requires dof > 0");
    if (t == 0.0) return 0.5;
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

namespace {

// Monotone bisection inversion of a CDF on [0, inf), exploiting symmetry or
// positivity handled by the callers.
template <typename Cdf>
double invert_cdf_positive(Cdf cdf, double p) {
    double hi = 1.0;
    for (int i = 0; i < 2100 && cdf(hi) < p; ++i) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-13 * (std::fabs(mid) + 1.0)) break;
        if (cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double t_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile requires p in (0, 1)");
    if (!(dof > 0.0))
        throw std::invalid_argument("t distribution requires dof > 0");
    if (p == 0.5) return 0.0;
    const bool upper = p > 0.5;
    const double pu = upper ? p : 1.0 - p;
    const double q =
        invert_cdf_positive([dof](double t) { return t_cdf(t, dof); }, pu);
    return upper ? q : -q;
}

double f_quantile(double p, double d1, double d2) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile requires p in (0, 1)");
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::invalid_argument("F distribution requires d1 > 0 and d2 > 0");
    auto cdf = [d1, d2](double f) {
        const double x = d1 * f / (d1 * f + d2);
        return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, x);
    };
    return invert_cdf_positive(cdf, p);
}

}  // namespace denaturefit::stats
