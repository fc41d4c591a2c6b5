#pragma once

// Internal to the kernel translation units. Defines the canonical per-point
// operation sequence for the model and its Jacobian, and the exp algorithm
// both backends share. Every arithmetic step below is written out explicitly
// (fma where fma, mul where mul); the kernel TUs are compiled with
// -ffp-contract=off so the vector path can mirror it operation for
// operation and produce bit-identical lanes.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "denaturefit/kernels.hpp"

namespace denaturefit::kernels::detail {

// exp via 2^n * expm(r), r = x - n*ln2 in [-ln2/2, ln2/2], with expm
// approximated by a degree-(2,3) rational in r^2 (Cephes coefficients,
// relative error ~2e-17 on the reduced interval). ln2 is split into a
// high part exact in 32 bits and a low correction so r stays accurate
// for |n| up to ~1024.
inline constexpr double kLog2E = 1.4426950408889634074;
inline constexpr double kC1 = 6.93145751953125e-1;
inline constexpr double kC2 = 1.42860682030941723212e-6;
inline constexpr double kMaxLog = 7.09782712893383996732e2;
inline constexpr double kMinLog = -7.08396418532264106224e2;

inline constexpr double kP0 = 1.26177193074810590878e-4;
inline constexpr double kP1 = 3.02994407707441961300e-2;
inline constexpr double kP2 = 9.99999999999999999910e-1;
inline constexpr double kQ0 = 3.00198505138664455042e-6;
inline constexpr double kQ1 = 2.52448340349684104192e-3;
inline constexpr double kQ2 = 2.27265548208155028766e-1;
inline constexpr double kQ3 = 2.00000000000000000005e0;

// 2^k for k in [-1022, 1023] by direct exponent-field construction.
inline double pow2i(int k) {
    return std::bit_cast<double>(static_cast<std::uint64_t>(1023 + k) << 52);
}

inline double exp_core(double x) {
    if (std::isnan(x)) return x;
    if (x > kMaxLog) return std::numeric_limits<double>::infinity();
    if (x < kMinLog) return 0.0;

    double n = std::floor(std::fma(x, kLog2E, 0.5));
    double r = std::fma(-n, kC1, x);
    r = std::fma(-n, kC2, r);
    double rr = r * r;

    double p = std::fma(kP0, rr, kP1);
    p = std::fma(p, rr, kP2);
    double px = r * p;
    double q = std::fma(kQ0, rr, kQ1);
    q = std::fma(q, rr, kQ2);
    q = std::fma(q, rr, kQ3);

    double e = px / (q - px);
    double y = std::fma(2.0, e, 1.0);

    // Scale by 2^n in two factors so intermediate exponents stay in range.
    double n1 = std::floor(n * 0.5);
    double n2 = n - n1;
    return y * pow2i(static_cast<int>(n1)) * pow2i(static_cast<int>(n2));
}

// Per-point free energy. Operation order is part of the kernel contract.
inline double delta_g_point(LemForm form, double p1, double p2, double d) {
    switch (form) {
        case LemForm::Dg0M:
            return std::fma(-p2, d, p1);
        case LemForm::MD50: {
            double t = d - p2;
            return -(p1 * t);
        }
        case LemForm::Dg0D50: {
            double u = d / p2;
            double t = 1.0 - u;
            return p1 * t;
        }
    }
    return 0.0;
}

// Signal at one point. The folded/unfolded weights are formed from
// E = exp(-|g|) so neither branch can overflow and the deep-baseline limits
// are exact.
inline double model_point(const FullParams& p, double rt, double d) {
    double dg = delta_g_point(p.lem.form, p.lem.p1, p.lem.p2, d);
    double g = dg / rt;
    double absg = std::fabs(g);
    double e = exp_core(-absg);
    double den = 1.0 + e;
    double alpha_a = std::fma(p.a1, d, p.a0);
    double alpha_b = std::fma(p.b1, d, p.b0);
    double num = (g >= 0.0) ? std::fma(alpha_b, e, alpha_a)
                            : std::fma(alpha_a, e, alpha_b);
    return num / den;
}

// Signal plus the six partial derivatives at one point. jrow is filled in
// parameter order (a0, a1, b0, b1, p1, p2).
inline double model_jacobian_point(const FullParams& p, double rt, double d,
                                   double jrow[6]) {
    double p1 = p.lem.p1;
    double p2 = p.lem.p2;
    double dg = delta_g_point(p.lem.form, p1, p2, d);
    double g = dg / rt;
    double absg = std::fabs(g);
    double e = exp_core(-absg);
    double den = 1.0 + e;
    double alpha_a = std::fma(p.a1, d, p.a0);
    double alpha_b = std::fma(p.b1, d, p.b0);
    bool native = (g >= 0.0);
    double num = native ? std::fma(alpha_b, e, alpha_a)
                        : std::fma(alpha_a, e, alpha_b);
    double alpha = num / den;

    // w = folded weight, f = unfolded fraction; w + f = 1.
    double w_num = native ? 1.0 : e;
    double f_num = native ? e : 1.0;
    double w = w_num / den;
    double f = f_num / den;

    double diff = alpha_b - alpha_a;
    double wf = w * f;
    double t1 = diff * wf;
    double t2 = t1 / rt;
    double dadg = -t2;

    jrow[0] = w;
    jrow[1] = d * w;
    jrow[2] = f;
    jrow[3] = d * f;

    double g1 = 0.0, g2 = 0.0;
    switch (p.lem.form) {
        case LemForm::Dg0M:
            g1 = 1.0;
            g2 = -d;
            break;
        case LemForm::MD50:
            g1 = p2 - d;
            g2 = p1;
            break;
        case LemForm::Dg0D50: {
            double u = d / p2;
            g1 = 1.0 - u;
            double v = p1 * u;
            g2 = v / p2;
            break;
        }
    }
    jrow[4] = dadg * g1;
    jrow[5] = dadg * g2;
    return alpha;
}

}  // namespace denaturefit::kernels::detail
