#include <cstdlib>
#include <stdexcept>
#include <string>

#include "denaturefit/kernels.hpp"

namespace denaturefit::kernels {

namespace {

Backend detect_default() {
    if (const char* env = std::getenv("DENATUREFIT_KERNEL")) {
        std::string_view v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2") {
            if (!avx2_supported())
                throw std::runtime_error("DENATUREFIT_KERNEL=avx2 but CPU lacks AVX2+FMA");
            return Backend::Avx2;
        }
        // "auto" or anything else falls through to detection.
    }
    return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

Backend& backend_slot() {
    static Backend b = detect_default();
    return b;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() { return backend_slot(); }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported())
        throw std::invalid_argument("AVX2 backend not supported on this CPU");
    backend_slot() = b;
}

std::string_view to_string(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

Backend parse_backend(std::string_view name) {
    if (name == "scalar") return Backend::Scalar;
    if (name == "avx2") return Backend::Avx2;
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
}

double fast_exp(double x) { return scalar::fast_exp(x); }

void exp_batch(const double* x, double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_slot() == Backend::Avx2) {
        avx2::exp_batch(x, out, n);
        return;
    }
#endif
    scalar::exp_batch(x, out, n);
}

void model_batch(const FullParams& p, const ModelConstants& c, const double* d,
                 double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_slot() == Backend::Avx2) {
        avx2::model_batch(p, c, d, out, n);
        return;
    }
#endif
    scalar::model_batch(p, c, d, out, n);
}

void model_jacobian_batch(const FullParams& p, const ModelConstants& c,
                          const double* d, double* model, double* jac,
                          std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_slot() == Backend::Avx2) {
        avx2::model_jacobian_batch(p, c, d, model, jac, n);
        return;
    }
#endif
    scalar::model_jacobian_batch(p, c, d, model, jac, n);
}

}  // namespace denaturefit::kernels
