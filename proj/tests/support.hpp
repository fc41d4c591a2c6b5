#pragma once

// Independent reference implementations used as test oracles. Everything here
// is deliberately naive long-double arithmetic with no code shared with the
// library: finite differences instead of analytic derivatives, quadrature
// instead of continued fractions, closed forms instead of factorizations.

#include <array>
#include <cmath>
#include <vector>

#include "denaturefit/model.hpp"

namespace oracle {

// Two-state signal evaluated straight from the definition in long double.
inline long double ref_model_signal(const denaturefit::FullParams& p, long double d,
                                    const denaturefit::ModelConstants& c) {
    using denaturefit::LemForm;
    const long double rt =
        static_cast<long double>(c.gas_constant) * static_cast<long double>(c.temperature);
    long double dg = 0.0L;
    const long double p1 = p.lem.p1, p2 = p.lem.p2;
    switch (p.lem.form) {
        case LemForm::Dg0M: dg = p1 - p2 * d; break;
        case LemForm::MD50: dg = -p1 * (d - p2); break;
        case LemForm::Dg0D50: dg = p1 * (1.0L - d / p2); break;
    }
    const long double alpha_a = p.a0 + p.a1 * d;
    const long double alpha_b = p.b0 + p.b1 * d;
    const long double g = dg / rt;
    if (g > 11000.0L) return alpha_a;   // K underflows even in long double
    if (g < -11000.0L) return alpha_b;  // K overflows
    const long double k = std::exp(-g);
    return (alpha_a + alpha_b * k) / (1.0L + k);
}

// Central-difference Jacobian row at one point.
inline std::array<long double, 6> ref_jacobian_row(const denaturefit::FullParams& p,
                                                   long double d,
                                                   const denaturefit::ModelConstants& c) {
    std::array<long double, 6> row{};
    const std::array<double, 6> base = p.as_array();
    for (std::size_t j = 0; j < 6; ++j) {
        const long double h = 1e-6L * (std::fabs((long double)base[j]) + 1e-3L);
        std::array<double, 6> lo = base, hi = base;
        lo[j] = static_cast<double>(base[j] - h);
        hi[j] = static_cast<double>(base[j] + h);
        const long double actual_h =
            (static_cast<long double>(hi[j]) - static_cast<long double>(lo[j])) / 2.0L;
        const long double f_hi = ref_model_signal(
            denaturefit::FullParams::from_array(hi, p.lem.form), d, c);
        const long double f_lo = ref_model_signal(
            denaturefit::FullParams::from_array(lo, p.lem.form), d, c);
        row[j] = (f_hi - f_lo) / (2.0L * actual_h);
    }
    return row;
}

// Student-t CDF by adaptive Simpson quadrature of the density, long double.
inline long double t_density(long double x, long double dof) {
    const long double c = std::exp(std::lgamma((dof + 1.0L) / 2.0L) -
                                   std::lgamma(dof / 2.0L)) /
                          std::sqrt(dof * 3.14159265358979323846264338327950288L);
    return c * std::pow(1.0L + x * x / dof, -(dof + 1.0L) / 2.0L);
}

inline long double simpson(long double (*f)(long double, long double), long double dof,
                           long double a, long double b, int n) {
    // n even panels.
    const long double h = (b - a) / n;
    long double s = f(a, dof) + f(b, dof);
    for (int i = 1; i < n; ++i) s += f(a + h * i, dof) * ((i % 2) ? 4.0L : 2.0L);
    return s * h / 3.0L;
}

inline long double ref_t_cdf(long double t, long double dof) {
    if (t < 0.0L) return 1.0L - ref_t_cdf(-t, dof);
    // Fixed fine grid is plenty at long double for 1e-12 accuracy.
    return 0.5L + simpson(t_density, dof, 0.0L, t, 4000);
}

inline long double ref_t_quantile(long double p, long double dof) {
    long double lo = 0.0L, hi = 1.0L;
    const bool upper = p >= 0.5L;
    const long double pu = upper ? p : 1.0L - p;
    while (ref_t_cdf(hi, dof) < pu) hi *= 2.0L;
    for (int i = 0; i < 120; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (ref_t_cdf(mid, dof) < pu)
            lo = mid;
        else
            hi = mid;
    }
    const long double q = 0.5L * (lo + hi);
    return upper ? q : -q;
}

// Ordinary least squares y = b0 + b1 x with its covariance, closed form.
struct OlsFit {
    double intercept, slope;
    double se_intercept, se_slope;
    double cov01;
    double s2;
    std::size_t dof;
};

inline OlsFit ols_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long double sx = 0.0L, sy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n, my = sy / n;
    long double sxx = 0.0L, sxy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const long double b1 = sxy / sxx;
    const long double b0 = my - b1 * mx;
    long double sse = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double r = y[i] - (b0 + b1 * x[i]);
        sse += r * r;
    }
    const std::size_t dof = n - 2;
    const long double s2 = sse / dof;
    OlsFit f;
    f.intercept = static_cast<double>(b0);
    f.slope = static_cast<double>(b1);
    f.s2 = static_cast<double>(s2);
    f.dof = dof;
    f.se_slope = static_cast<double>(std::sqrt(s2 / sxx));
    f.se_intercept =
        static_cast<double>(std::sqrt(s2 * (1.0L / n + mx * mx / sxx)));
    f.cov01 = static_cast<double>(-s2 * mx / sxx);
    return f;
}

inline bool rel_close(double a, double b, double rel, double abs_floor = 0.0) {
    const double diff = std::fabs(a - b);
    return diff <= rel * std::max(std::fabs(a), std::fabs(b)) + abs_floor;
}

}  // namespace oracle
