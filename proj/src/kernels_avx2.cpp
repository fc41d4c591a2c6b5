#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kernels_detail.hpp"

// Four-lane mirror of the scalar kernels. Each intrinsic below corresponds
// to one named step of the scalar sequence in kernels_detail.hpp; keeping the
// two in lockstep is what the bit-equivalence tests check.

namespace denaturefit::kernels::avx2 {

namespace {

const __m256d kVZero = _mm256_setzero_pd();
const __m256d kVOne = _mm256_set1_pd(1.0);
const __m256d kVTwo = _mm256_set1_pd(2.0);
const __m256d kVHalf = _mm256_set1_pd(0.5);
const __m256d kVSignMask = _mm256_set1_pd(-0.0);

inline __m256d pow2_vec(__m256d n) {
    // n holds small integral values; build 2^n by exponent-field assembly.
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

inline __m256d exp_vec(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(detail::kLog2E);
    const __m256d c1 = _mm256_set1_pd(detail::kC1);
    const __m256d c2 = _mm256_set1_pd(detail::kC2);

    __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(x, log2e, kVHalf));
    __m256d r = _mm256_fnmadd_pd(n, c1, x);
    r = _mm256_fnmadd_pd(n, c2, r);
    __m256d rr = _mm256_mul_pd(r, r);

    __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(detail::kP0), rr, _mm256_set1_pd(detail::kP1));
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(detail::kP2));
    __m256d px = _mm256_mul_pd(r, p);
    __m256d q = _mm256_fmadd_pd(_mm256_set1_pd(detail::kQ0), rr, _mm256_set1_pd(detail::kQ1));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(detail::kQ2));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(detail::kQ3));

    __m256d e = _mm256_div_pd(px, _mm256_sub_pd(q, px));
    __m256d y = _mm256_fmadd_pd(kVTwo, e, kVOne);

    __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, kVHalf));
    __m256d n2 = _mm256_sub_pd(n, n1);
    y = _mm256_mul_pd(y, pow2_vec(n1));
    y = _mm256_mul_pd(y, pow2_vec(n2));

    __m256d over = _mm256_cmp_pd(x, _mm256_set1_pd(detail::kMaxLog), _CMP_GT_OQ);
    __m256d under = _mm256_cmp_pd(x, _mm256_set1_pd(detail::kMinLog), _CMP_LT_OQ);
    __m256d unordered = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    y = _mm256_blendv_pd(y, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
    y = _mm256_blendv_pd(y, kVZero, under);
    y = _mm256_blendv_pd(y, x, unordered);
    return y;
}

inline __m256d delta_g_vec(LemForm form, __m256d p1, __m256d p2, __m256d d) {
    switch (form) {
        case LemForm::Dg0M:
            return _mm256_fnmadd_pd(p2, d, p1);
        case LemForm::MD50: {
            __m256d t = _mm256_sub_pd(d, p2);
            return _mm256_xor_pd(_mm256_mul_pd(p1, t), kVSignMask);
        }
        case LemForm::Dg0D50: {
            __m256d u = _mm256_div_pd(d, p2);
            __m256d t = _mm256_sub_pd(kVOne, u);
            return _mm256_mul_pd(p1, t);
        }
    }
    return kVZero;
}

struct ModelLanes {
    __m256d alpha, e, den, g, alpha_a, alpha_b, ge_mask;
};

inline ModelLanes model_vec(const FullParams& p, double rt, __m256d d) {
    __m256d p1 = _mm256_set1_pd(p.lem.p1);
    __m256d p2 = _mm256_set1_pd(p.lem.p2);
    __m256d dg = delta_g_vec(p.lem.form, p1, p2, d);
    __m256d g = _mm256_div_pd(dg, _mm256_set1_pd(rt));
    __m256d absg = _mm256_andnot_pd(kVSignMask, g);
    __m256d e = exp_vec(_mm256_xor_pd(absg, kVSignMask));
    __m256d den = _mm256_add_pd(kVOne, e);
    __m256d alpha_a = _mm256_fmadd_pd(_mm256_set1_pd(p.a1), d, _mm256_set1_pd(p.a0));
    __m256d alpha_b = _mm256_fmadd_pd(_mm256_set1_pd(p.b1), d, _mm256_set1_pd(p.b0));
    __m256d ge = _mm256_cmp_pd(g, kVZero, _CMP_GE_OQ);
    __m256d num_native = _mm256_fmadd_pd(alpha_b, e, alpha_a);
    __m256d num_unfold = _mm256_fmadd_pd(alpha_a, e, alpha_b);
    __m256d num = _mm256_blendv_pd(num_unfold, num_native, ge);
    return {_mm256_div_pd(num, den), e, den, g, alpha_a, alpha_b, ge};
}

}  // namespace

void exp_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, exp_vec(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = detail::exp_core(x[i]);
}

void model_batch(const FullParams& p, const ModelConstants& c, const double* d,
                 double* out, std::size_t n) {
    const double rt = c.rt();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        ModelLanes m = model_vec(p, rt, _mm256_loadu_pd(d + i));
        _mm256_storeu_pd(out + i, m.alpha);
    }
    for (; i < n; ++i) out[i] = detail::model_point(p, rt, d[i]);
}

void model_jacobian_batch(const FullParams& p, const ModelConstants& c,
                          const double* d, double* model, double* jac,
                          std::size_t n) {
    const double rt = c.rt();
    __m256d p1 = _mm256_set1_pd(p.lem.p1);
    __m256d p2 = _mm256_set1_pd(p.lem.p2);
    __m256d vrt = _mm256_set1_pd(rt);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vd = _mm256_loadu_pd(d + i);
        ModelLanes m = model_vec(p, rt, vd);
        _mm256_storeu_pd(model + i, m.alpha);

        __m256d w_num = _mm256_blendv_pd(m.e, kVOne, m.ge_mask);
        __m256d f_num = _mm256_blendv_pd(kVOne, m.e, m.ge_mask);
        __m256d w = _mm256_div_pd(w_num, m.den);
        __m256d f = _mm256_div_pd(f_num, m.den);

        __m256d diff = _mm256_sub_pd(m.alpha_b, m.alpha_a);
        __m256d wf = _mm256_mul_pd(w, f);
        __m256d t1 = _mm256_mul_pd(diff, wf);
        __m256d t2 = _mm256_div_pd(t1, vrt);
        __m256d dadg = _mm256_xor_pd(t2, kVSignMask);

        _mm256_storeu_pd(jac + 0 * n + i, w);
        _mm256_storeu_pd(jac + 1 * n + i, _mm256_mul_pd(vd, w));
        _mm256_storeu_pd(jac + 2 * n + i, f);
        _mm256_storeu_pd(jac + 3 * n + i, _mm256_mul_pd(vd, f));

        __m256d g1 = kVZero, g2 = kVZero;
        switch (p.lem.form) {
            case LemForm::Dg0M:
                g1 = kVOne;
                g2 = _mm256_xor_pd(vd, kVSignMask);
                break;
            case LemForm::MD50:
                g1 = _mm256_sub_pd(p2, vd);
                g2 = p1;
                break;
            case LemForm::Dg0D50: {
                __m256d u = _mm256_div_pd(vd, p2);
                g1 = _mm256_sub_pd(kVOne, u);
                __m256d v = _mm256_mul_pd(p1, u);
                g2 = _mm256_div_pd(v, p2);
                break;
            }
        }
        _mm256_storeu_pd(jac + 4 * n + i, _mm256_mul_pd(dadg, g1));
        _mm256_storeu_pd(jac + 5 * n + i, _mm256_mul_pd(dadg, g2));
    }
    double row[6];
    for (; i < n; ++i) {
        model[i] = detail::model_jacobian_point(p, rt, d[i], row);
        for (std::size_t j = 0; j < 6; ++j) jac[j * n + i] = row[j];
    }
}

}  // namespace denaturefit::kernels::avx2

#endif  // x86_64
