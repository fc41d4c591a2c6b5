#include "kernels_detail.hpp"

namespace denaturefit::kernels::scalar {

double fast_exp(double x) { return detail::exp_core(x); }

void exp_batch(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::exp_core(x[i]);
}

void model_batch(const FullParams& p, const ModelConstants& c, const double* d,
                 double* out, std::size_t n) {
    const double rt = c.rt();
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::model_point(p, rt, d[i]);
}

void model_jacobian_batch(const FullParams& p, const ModelConstants& c,
                          const double* d, double* model, double* jac,
                          std::size_t n) {
    const double rt = c.rt();
    double row[6];
    for (std::size_t i = 0; i < n; ++i) {
        model[i] = detail::model_jacobian_point(p, rt, d[i], row);
        for (std::size_t j = 0; j < 6; ++j) jac[j * n + i] = row[j];
    }
}

}  // namespace denaturefit::kernels::scalar
