#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "denaturefit/calibration.hpp"
#include "support.hpp"

using namespace denaturefit;

namespace {

SyntheticDataset standard_noisy(std::uint32_t seed, double m = 6.0,
                                double d50 = 4.0) {
    SyntheticSpec spec;
    spec.m = m;
    spec.d50 = d50;
    RngStream rng(seed);
    return generate(spec, rng);
}

}  // namespace

TEST_CASE("coverage cells enumerate both line parameters of every form") {
    const CoverageReport r = coverage_experiment(
        CiMethod::Marginal, 0.683, NoiseSpec::gaussian_noise(10.0), 1u,
        CoverageOptions{.n_trials = 1});
    CHECK(r.cells[0].form == LemForm::Dg0M);
    CHECK(r.cells[0].param_index == 4);
    CHECK(r.cells[0].true_value == 24.0);
    CHECK(r.cells[1].true_value == 6.0);
    CHECK(r.cells[2].form == LemForm::MD50);
    CHECK(r.cells[2].true_value == 6.0);
    CHECK(r.cells[3].true_value == 4.0);
    CHECK(r.cells[4].form == LemForm::Dg0D50);
    CHECK(r.cells[4].true_value == 24.0);
    CHECK(r.cells[5].true_value == 4.0);
    CHECK(r.level == 0.683);
    CHECK(r.method == CiMethod::Marginal);
    CHECK(r.n_trials == 1);

    CHECK_THROWS_AS(coverage_experiment(CiMethod::Marginal, 0.683,
                                        NoiseSpec::gaussian_noise(10.0), 1u,
                                        CoverageOptions{.n_trials = 0}),
                    std::invalid_argument);
}

TEST_CASE("marginal coverage at a smoke scale sits near the nominal level") {
    CoverageOptions opts;
    opts.n_trials = 100;
    const CoverageReport r = coverage_experiment(
        CiMethod::Marginal, 0.683, NoiseSpec::gaussian_noise(10.0), 71u, opts);
    CHECK_FALSE(r.flagged);
    CHECK(r.counted() >= 95);
    for (std::size_t cell = 0; cell < 6; ++cell) {
        CHECK(r.fraction(cell) >= 0.50);
        CHECK(r.fraction(cell) <= 0.85);
    }
}

TEST_CASE("marginal coverage widens with the confidence level") {
    CoverageOptions opts;
    opts.n_trials = 200;
    const CoverageReport lo = coverage_experiment(
        CiMethod::Marginal, 0.683, NoiseSpec::gaussian_noise(10.0), 72u, opts);
    const CoverageReport hi = coverage_experiment(
        CiMethod::Marginal, 0.95, NoiseSpec::gaussian_noise(10.0), 72u, opts);
    for (std::size_t cell = 0; cell < 6; ++cell) {
        CHECK(hi.fraction(cell) > lo.fraction(cell));
        CHECK(hi.fraction(cell) >= 0.88);
    }
}

TEST_CASE("coverage reports are reproducible from the master seed") {
    CoverageOptions opts;
    opts.n_trials = 40;
    const CoverageReport a = coverage_experiment(
        CiMethod::Marginal, 0.683, NoiseSpec::gaussian_noise(10.0), 5u, opts);
    const CoverageReport b = coverage_experiment(
        CiMethod::Marginal, 0.683, NoiseSpec::gaussian_noise(10.0), 5u, opts);
    CHECK(a.excluded == b.excluded);
    for (std::size_t cell = 0; cell < 6; ++cell) {
        CHECK(a.cells[cell].hits == b.cells[cell].hits);
    }
    const CoverageReport c = coverage_experiment(
        CiMethod::Marginal, 0.683, NoiseSpec::gaussian_noise(10.0), 6u, opts);
    bool any_different = a.excluded != c.excluded;
    for (std::size_t cell = 0; cell < 6; ++cell) {
        if (a.cells[cell].hits != c.cells[cell].hits) any_different = true;
    }
    CHECK(any_different);
}

TEST_CASE("resampling methods run end to end inside coverage trials") {
    CoverageOptions opts;
    opts.n_trials = 60;
    opts.mc_rounds = 50;
    for (CiMethod method : {CiMethod::MonteCarlo, CiMethod::Bootstrap}) {
        const CoverageReport r = coverage_experiment(
            method, 0.683, NoiseSpec::gaussian_noise(10.0), 73u, opts);
        CHECK_FALSE(r.flagged);
        CHECK(r.counted() >= 57);
        for (std::size_t cell = 0; cell < 6; ++cell) {
            CHECK(r.fraction(cell) >= 0.40);
            CHECK(r.fraction(cell) <= 0.90);
        }
    }
}

TEST_CASE("search method over-covers already at a smoke scale") {
    CoverageOptions opts;
    opts.n_trials = 50;
    const CoverageReport r = coverage_experiment(
        CiMethod::Search, 0.683, NoiseSpec::gaussian_noise(10.0), 74u, opts);
    CHECK_FALSE(r.flagged);
    for (std::size_t cell = 0; cell < 6; ++cell) {
        CHECK(r.fraction(cell) >= 0.70);
        CHECK(r.fraction(cell) <= 1.0);
    }
}

TEST_CASE("heavy-tailed noise keeps the experiment well posed") {
    CoverageOptions opts;
    opts.n_trials = 60;
    const NoiseSpec noise =
        NoiseSpec::lorentzian_noise(0.0, NoiseSpec::gamma_matching_sigma(10.0), 200.0);
    const CoverageReport r =
        coverage_experiment(CiMethod::Marginal, 0.95, noise, 75u, opts);
    CHECK_FALSE(r.flagged);
    for (std::size_t cell = 0; cell < 6; ++cell) {
        CHECK(r.fraction(cell) >= 0.80);
    }
}

TEST_CASE("scatter ensembles land on the stability line") {
    const ModelConstants c{};
    const SyntheticDataset ds = standard_noisy(818u);
    RngStream rng(819u);
    const auto triples = scatter_ensemble(ds.data, LemForm::Dg0M, 200, rng, c);
    REQUIRE(triples.size() >= 190);
    double sm = 0.0, sd = 0.0, sg = 0.0;
    for (const LemTriple& t : triples) {
        CHECK(std::abs(t.d50 - 4.0) < 0.5);
        sm += t.m;
        sd += t.d50;
        sg += t.dg0;
    }
    const double n = static_cast<double>(triples.size());
    const double mm = sm / n, md = sd / n, mg = sg / n;
    // Cluster centers track the base fit, which sits within a couple of
    // standard errors of the generating values.
    CHECK(std::abs(md - 4.0) < 0.2);
    CHECK(std::abs(mm - 6.0) < 1.0);
    CHECK(std::abs(mg - 24.0) < 3.5);

    double c_gm = 0.0, v_g = 0.0, v_m = 0.0;
    for (const LemTriple& t : triples) {
        c_gm += (t.dg0 - mg) * (t.m - mm);
        v_g += (t.dg0 - mg) * (t.dg0 - mg);
        v_m += (t.m - mm) * (t.m - mm);
    }
    CHECK(c_gm / std::sqrt(v_g * v_m) >= 0.95);
}

TEST_CASE("a single-round ensemble is one refit triple") {
    const ModelConstants c{};
    const SyntheticDataset ds = standard_noisy(818u);
    RngStream rng(820u);
    const auto triples = scatter_ensemble(ds.data, LemForm::MD50, 1, rng, c);
    REQUIRE(triples.size() == 1);
    CHECK(std::isfinite(triples[0].m));
    CHECK(std::abs(triples[0].d50 - 4.0) < 0.5);
    CHECK(oracle::rel_close(triples[0].dg0, triples[0].m * triples[0].d50, 1e-12));
}

TEST_CASE("nine ensembles form nine separated clusters") {
    const ModelConstants c{};
    const auto nine = standard_nine(821u);
    const auto grid = standard_grid();
    struct Cluster {
        double mean_m, mean_d50, sd_m, sd_d50;
    };
    std::array<Cluster, 9> clusters{};
    for (std::size_t i = 0; i < 9; ++i) {
        RngStream rng(substream_seed(822u, static_cast<std::uint32_t>(i)));
        const auto triples =
            scatter_ensemble(nine[i].data, LemForm::MD50, 100, rng, c);
        REQUIRE(triples.size() >= 95);
        const double n = static_cast<double>(triples.size());
        double sm = 0.0, sd = 0.0;
        for (const LemTriple& t : triples) {
            sm += t.m;
            sd += t.d50;
        }
        Cluster& cl = clusters[i];
        cl.mean_m = sm / n;
        cl.mean_d50 = sd / n;
        double vm = 0.0, vd = 0.0;
        for (const LemTriple& t : triples) {
            vm += (t.m - cl.mean_m) * (t.m - cl.mean_m);
            vd += (t.d50 - cl.mean_d50) * (t.d50 - cl.mean_d50);
        }
        cl.sd_m = std::sqrt(vm / (n - 1));
        cl.sd_d50 = std::sqrt(vd / (n - 1));
        // The cluster tracks its generating cell, in estimator units.
        CHECK(std::abs(cl.mean_m - grid[i].m) < 4.0 * cl.sd_m);
        CHECK(std::abs(cl.mean_d50 - grid[i].d50) < 4.0 * cl.sd_d50);
    }
    // Every pair of clusters is separated along at least one axis by several
    // cluster widths.
    for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = i + 1; j < 9; ++j) {
            const double gap_m = std::abs(clusters[i].mean_m - clusters[j].mean_m) /
                                 std::max(clusters[i].sd_m, clusters[j].sd_m);
            const double gap_d = std::abs(clusters[i].mean_d50 - clusters[j].mean_d50) /
                                 std::max(clusters[i].sd_d50, clusters[j].sd_d50);
            CHECK(std::max(gap_m, gap_d) > 2.5);
        }
    }
}
