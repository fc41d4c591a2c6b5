#pragma once

#include <cstddef>
#include <string_view>

#include "denaturefit/model.hpp"

namespace denaturefit::kernels {

// ============================================================================
// Batch evaluation kernels.
//
// The scalar path is the reference; the AVX2 path must produce bit-identical
// results lane for lane. Both share one exp algorithm written with an
// explicit, fixed operation order (fma where the vector code uses fma), and
// both translation units are compiled with contraction disabled so the
// compiler cannot re-fuse anything behind our back. Remainder elements of a
// vector batch fall through to the scalar functions.
// ============================================================================

enum class Backend { Scalar, Avx2 };

bool avx2_supported();

// Active backend. Resolution order on first use: DENATUREFIT_KERNEL
// environment variable ("scalar", "avx2", "auto"), then auto-detection.
Backend active_backend();

// Force a backend. Throws std::invalid_argument if unsupported on this CPU.
void set_backend(Backend b);

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

// Scalar exponential used by both paths, accurate to ~1 ulp over the full
// double range, with exact saturation to 0 / +inf outside it.
double fast_exp(double x);

// out[i] = fast_exp(x[i]).
void exp_batch(const double* x, double* out, std::size_t n);

// out[i] = model signal at d[i].
void model_batch(const FullParams& p, const ModelConstants& c, const double* d,
                 double* out, std::size_t n);

// model[i] = signal at d[i]; jac column-major n x 6 in parameter order
// (a0, a1, b0, b1, p1, p2). model and jac may not alias d.
void model_jacobian_batch(const FullParams& p, const ModelConstants& c,
                          const double* d, double* model, double* jac,
                          std::size_t n);

// Scalar reference entry points (always available, used for remainders and
// for equivalence testing against the vector path).
namespace scalar {
double fast_exp(double x);
void exp_batch(const double* x, double* out, std::size_t n);
void model_batch(const FullParams& p, const ModelConstants& c, const double* d,
                 double* out, std::size_t n);
void model_jacobian_batch(const FullParams& p, const ModelConstants& c,
                          const double* d, double* model, double* jac,
                          std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void exp_batch(const double* x, double* out, std::size_t n);
void model_batch(const FullParams& p, const ModelConstants& c, const double* d,
                 double* out, std::size_t n);
void model_jacobian_batch(const FullParams& p, const ModelConstants& c,
                          const double* d, double* model, double* jac,
                          std::size_t n);
}  // namespace avx2
#endif

}  // namespace denaturefit::kernels
