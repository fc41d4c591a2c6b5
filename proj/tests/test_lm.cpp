#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include "denaturefit/kernels.hpp"
#include "denaturefit/lem.hpp"
#include "denaturefit/lm.hpp"
#include "denaturefit/model.hpp"
#include "denaturefit/rng.hpp"
#include "denaturefit/stats.hpp"
#include "denaturefit/synthdata.hpp"
#include "support.hpp"

using namespace denaturefit;

namespace {

SyntheticDataset noisy_standard(double m, double d50, std::uint32_t seed) {
    SyntheticSpec spec;
    spec.m = m;
    spec.d50 = d50;
    RngStream rng(seed);
    return generate(spec, rng);
}

SyntheticDataset noiseless_standard(double m, double d50) {
    SyntheticSpec spec;
    spec.m = m;
    spec.d50 = d50;
    spec.noise = NoiseSpec::gaussian_noise(0.0);
    RngStream rng(1u);
    return generate(spec, rng);
}

bool same_bits(const FullParams& a, const FullParams& b) {
    const auto av = a.as_array();
    const auto bv = b.as_array();
    return std::memcmp(av.data(), bv.data(), sizeof av) == 0 &&
           a.lem.form == b.lem.form;
}

}  // namespace

TEST_CASE("noiseless curves refit to the generating parameters") {
    const ModelConstants c{};
    for (const GridCell& cell : standard_grid()) {
        const SyntheticDataset ds = noiseless_standard(cell.m, cell.d50);
        const FitResult fit = fit_dataset(ds.data, LemForm::MD50, c);
        CHECK(fit.converged);
        const auto got = fit.params.as_array();
        const auto want = ds.truth.as_array();
        for (std::size_t i = 0; i < kParamCount; ++i) {
            CHECK(std::abs(got[i] - want[i]) < 1e-6);
        }
        CHECK(fit.sse < 1e-12);
    }
}

TEST_CASE("starting at the exact solution converges with a zero step") {
    const ModelConstants c{};
    const SyntheticDataset ds = noiseless_standard(6.0, 4.0);
    const FitResult fit = lm_fit(ds.data, ds.truth, c);
    CHECK(fit.converged);
    CHECK(fit.iterations == 1);
    CHECK(same_bits(fit.params, ds.truth));
}

TEST_CASE("the three parameterizations find the same optimum") {
    const ModelConstants c{};
    const auto nine = standard_nine(8231u);
    for (const SyntheticDataset& ds : nine) {
        const FitResult base = fit_dataset(ds.data, LemForm::Dg0M, c);
        REQUIRE(base.converged);
        const LemTriple ref = to_triple(base.params.lem);
        for (LemForm form : {LemForm::MD50, LemForm::Dg0D50}) {
            const FitResult fit = fit_dataset(ds.data, form, c);
            REQUIRE(fit.converged);
            const LemTriple t = to_triple(fit.params.lem);
            CHECK(oracle::rel_close(t.dg0, ref.dg0, 1e-4));
            CHECK(oracle::rel_close(t.m, ref.m, 1e-4));
            CHECK(oracle::rel_close(t.d50, ref.d50, 1e-4));
            CHECK(oracle::rel_close(fit.sse, base.sse, 1e-6));
        }
    }
}

TEST_CASE("accepted steps strictly decrease the sum of squares") {
    const ModelConstants c{};
    const SyntheticDataset ds = noisy_standard(6.0, 4.0, 97u);
    std::vector<double> trace;
    LmOptions opts;
    opts.sse_trace = &trace;
    const FitResult fit = fit_dataset(ds.data, LemForm::MD50, c, opts);
    REQUIRE(fit.converged);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] < trace[i - 1]);
    }
    CHECK(fit.sse == trace.back());
}

TEST_CASE("the gradient vanishes at convergence") {
    const ModelConstants c{};
    for (const GridCell& cell : standard_grid()) {
        const SyntheticDataset ds = noisy_standard(cell.m, cell.d50, 311u);
        const FitResult fit = fit_dataset(ds.data, LemForm::MD50, c);
        REQUIRE(fit.converged);
        const std::vector<double> r = residuals(fit.params, ds.data, c);
        const JacobianMatrix jac = jacobian(fit.params, ds.data, c);
        double worst = 0.0;
        for (std::size_t j = 0; j < kParamCount; ++j) {
            double g = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                g += jac.col(j)[i] * r[i];
            }
            worst = std::max(worst, std::abs(g));
        }
        CHECK(worst < 1e-4 * (1.0 + fit.sse));
    }
}

TEST_CASE("fits are bit-for-bit repeatable") {
    const ModelConstants c{};
    const SyntheticDataset ds = noisy_standard(4.0, 5.0, 5123u);
    const FitResult a = fit_dataset(ds.data, LemForm::Dg0M, c);
    const FitResult b = fit_dataset(ds.data, LemForm::Dg0M, c);
    CHECK(same_bits(a.params, b.params));
    CHECK(a.sse == b.sse);
    CHECK(a.iterations == b.iterations);
    for (std::size_t i = 0; i < kParamCount; ++i) {
        for (std::size_t j = 0; j < kParamCount; ++j) {
            CHECK(a.covariance(i, j) == b.covariance(i, j));
        }
    }
}

TEST_CASE("vector and scalar backends produce identical fits") {
    if (!kernels::avx2_supported()) {
        return;
    }
    const ModelConstants c{};
    const SyntheticDataset ds = noisy_standard(8.0, 3.0, 40902u);
    const kernels::Backend previous = kernels::active_backend();
    kernels::set_backend(kernels::Backend::Scalar);
    const FitResult scalar = fit_dataset(ds.data, LemForm::MD50, c);
    kernels::set_backend(kernels::Backend::Avx2);
    const FitResult vec = fit_dataset(ds.data, LemForm::MD50, c);
    kernels::set_backend(previous);
    CHECK(same_bits(scalar.params, vec.params));
    CHECK(scalar.sse == vec.sse);
    CHECK(scalar.iterations == vec.iterations);
}

TEST_CASE("correlation matrix from a covariance matrix") {
    SymMatrix diag(2);
    diag.set_sym(0, 0, 4.0);
    diag.set_sym(1, 1, 9.0);
    const SymMatrix r0 = correlation_from_covariance(diag);
    CHECK(r0(0, 0) == 1.0);
    CHECK(r0(1, 1) == 1.0);
    CHECK(r0(0, 1) == 0.0);

    SymMatrix perfect(2);
    perfect.set_sym(0, 0, 4.0);
    perfect.set_sym(1, 1, 1.0);
    perfect.set_sym(0, 1, 2.0);
    const SymMatrix r1 = correlation_from_covariance(perfect);
    CHECK(r1(0, 1) == 1.0);

    SymMatrix degenerate(2);
    degenerate.set_sym(0, 0, 1.0);
    CHECK_THROWS_AS(correlation_from_covariance(degenerate), ZeroVariance);
}

TEST_CASE("stability and slope are nearly collinear in the offset-slope form") {
    const ModelConstants c{};
    const auto nine = standard_nine(8231u);
    double sum = 0.0;
    double least = 1.0;
    for (const SyntheticDataset& ds : nine) {
        const FitResult fit = fit_dataset(ds.data, LemForm::Dg0M, c);
        REQUIRE(fit.converged);
        REQUIRE(fit.has_covariance);
        const double r = fit.correlation(4, 5);
        sum += r;
        least = std::min(least, r);
    }
    CHECK(sum / 9.0 >= 0.98);
    CHECK(least >= 0.97);
}

TEST_CASE("a single concentration cannot determine the slopes") {
    const ModelConstants c{};
    DenaturationDataset data;
    RngStream rng(6u);
    for (int i = 0; i < 60; ++i) {
        data.add(0.0, 350.0 + rng.gaussian(10.0));
    }
    FullParams start = FullParams::from_array(
        {200.0, 5.0, 500.0, 7.0, 6.0, 4.0}, LemForm::MD50);
    CHECK_THROWS_AS(lm_fit(data, start, c), SingularNormalMatrix);
}

TEST_CASE("iteration cap returns the best visited point") {
    const ModelConstants c{};
    const SyntheticDataset ds = noisy_standard(6.0, 4.0, 15u);
    FullParams start = FullParams::from_array(
        {150.0, 1.0, 560.0, 2.0, 11.0, 5.5}, LemForm::MD50);
    const double sse_start = sse_of(residuals(start, ds.data, c));
    LmOptions opts;
    opts.max_iterations = 1;
    const FitResult fit = lm_fit(ds.data, start, c, opts);
    CHECK_FALSE(fit.converged);
    CHECK(fit.status == FitStatus::MaxIterations);
    CHECK(fit.iterations == 1);
    CHECK(fit.sse <= sse_start);
}

TEST_CASE("covariance at the optimum is symmetric positive definite") {
    const ModelConstants c{};
    const SyntheticDataset ds = noisy_standard(6.0, 4.0, 2718u);
    const FitResult fit = fit_dataset(ds.data, LemForm::MD50, c);
    REQUIRE(fit.converged);
    REQUIRE(fit.has_covariance);
    CHECK_NOTHROW(cholesky_decompose(fit.covariance));
    for (std::size_t i = 0; i < kParamCount; ++i) {
        CHECK(fit.correlation(i, i) == 1.0);
        for (std::size_t j = 0; j < kParamCount; ++j) {
            CHECK(fit.covariance(i, j) == fit.covariance(j, i));
            CHECK(std::abs(fit.correlation(i, j)) <= 1.0);
        }
    }
    CHECK(fit.dof == ds.data.size() - kParamCount);
    CHECK(fit.s2 == fit.sse / static_cast<double>(fit.dof));
}

TEST_CASE("pinned parameters stay put and shrink the problem") {
    const ModelConstants c{};
    const SyntheticDataset ds = noisy_standard(6.0, 4.0, 5150u);
    LmOptions opts;
    opts.fixed[5] = true;
    const FitResult fit = lm_fit(ds.data, ds.truth, c, opts);
    REQUIRE(fit.converged);
    CHECK(fit.params.lem.p2 == ds.truth.lem.p2);
    CHECK(fit.k == 5);
    CHECK(fit.dof == ds.data.size() - 5);
    for (std::size_t j = 0; j < kParamCount; ++j) {
        CHECK(fit.covariance(5, j) == 0.0);
        CHECK(fit.covariance(j, 5) == 0.0);
    }
    CHECK(fit.correlation(5, 5) == 1.0);
    CHECK(fit.correlation(5, 0) == 0.0);
}

TEST_CASE("a wide stability interval almost always contains the midpoint") {
    // 1000 independent noisy curves generated at d50 = 4; the 99 percent
    // marginal interval from each fit should cover the truth in at least 98
    // percent of them.
    const ModelConstants c{};
    const std::uint32_t master = 424243u;
    int hits = 0;
    double tq = -1.0;
    for (int trial = 0; trial < 1000; ++trial) {
        SyntheticSpec spec;
        RngStream rng(substream_seed(master, static_cast<std::uint32_t>(trial)));
        const SyntheticDataset ds = generate(spec, rng);
        const FitResult fit = fit_dataset(ds.data, LemForm::MD50, c);
        if (!fit.converged || !fit.has_covariance) {
            continue;
        }
        if (tq < 0.0) {
            tq = stats::t_quantile(0.995, static_cast<double>(fit.dof));
        }
        const double half = tq * std::sqrt(fit.covariance(5, 5));
        if (std::abs(fit.params.lem.p2 - 4.0) <= half) {
            ++hits;
        }
    }
    CHECK(hits >= 980);
}
