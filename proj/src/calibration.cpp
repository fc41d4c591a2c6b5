#include "denaturefit/calibration.hpp"

namespace denaturefit {

namespace {

constexpr std::array<LemForm, 3> kForms = {LemForm::Dg0M, LemForm::MD50,
                                           LemForm::Dg0D50};

double true_value_for(LemForm form, std::size_t param_index, double dg0,
                      double m, double d50) {
    switch (form) {
        case LemForm::Dg0M: return param_index == 4 ? dg0 : m;
        case LemForm::MD50: return param_index == 4 ? m : d50;
        case LemForm::Dg0D50: return param_index == 4 ? dg0 : d50;
    }
    return 0.0;
}

}  // namespace

CoverageReport coverage_experiment(CiMethod method, double level,
                                   const NoiseSpec& noise,
                                   std::uint32_t master_seed,
                                   const CoverageOptions& opts) {
    if (opts.n_trials == 0)
        throw std::invalid_argument("coverage needs at least one trial");

    const double true_dg0 = opts.true_m * opts.true_d50;

    CoverageReport report;
    report.method = method;
    report.noise = noise;
    report.level = level;
    report.n_trials = opts.n_trials;
    {
        std::size_t cell = 0;
        for (LemForm form : kForms)
            for (std::size_t pi : {std::size_t{4}, std::size_t{5}}) {
                report.cells[cell].form = form;
                report.cells[cell].param_index = pi;
                report.cells[cell].true_value =
                    true_value_for(form, pi, true_dg0, opts.true_m, opts.true_d50);
                ++cell;
            }
    }

    SyntheticSpec spec;
    spec.m = opts.true_m;
    spec.d50 = opts.true_d50;
    spec.noise = noise;
    spec.constants = opts.constants;

    for (std::size_t trial = 0; trial < opts.n_trials; ++trial) {
        RngStream rng(substream_seed(master_seed, static_cast<std::uint32_t>(trial)));
        std::array<bool, 6> hit{};
        bool failed = false;

        try {
            const SyntheticDataset synth = generate(spec, rng);
            std::size_t cell = 0;
            for (LemForm form : kForms) {
                const FitResult fit =
                    fit_dataset(synth.data, form, opts.constants);
                if (!fit.converged || !fit.has_covariance) {
                    failed = true;
                    break;
                }
                if (method == CiMethod::MonteCarlo ||
                    method == CiMethod::Bootstrap) {
                    const McMode mode = method == CiMethod::MonteCarlo
                                            ? McMode::GaussianNoise
                                            : McMode::Bootstrap;
                    const McResult mc = monte_carlo_ci(
                        synth.data, fit, level, mode, opts.mc_rounds, rng,
                        opts.constants);
                    for (std::size_t pi : {std::size_t{4}, std::size_t{5}})
                        hit[cell + pi - 4] = mc.intervals[pi].contains(
                            report.cells[cell + pi - 4].true_value);
                } else {
                    for (std::size_t pi : {std::size_t{4}, std::size_t{5}}) {
                        const ConfidenceInterval ci =
                            method == CiMethod::Marginal
                                ? marginal_ci(fit, pi, level)
                                : search_ci(synth.data, fit, pi, level,
                                            opts.constants, opts.search);
                        hit[cell + pi - 4] =
                            ci.contains(report.cells[cell + pi - 4].true_value);
                    }
                }
                cell += 2;
            }
        } catch (const Error&) {
            failed = true;
        } catch (const std::invalid_argument&) {
            failed = true;
        }

        if (failed) {
            ++report.excluded;
            continue;
        }
        for (std::size_t cell = 0; cell < 6; ++cell)
            if (hit[cell]) ++report.cells[cell].hits;
    }

    report.flagged = report.excluded * 20 > report.n_trials;
    return report;
}

std::vector<LemTriple> scatter_ensemble(const DenaturationDataset& data,
                                        LemForm form, std::size_t n_rounds,
                                        RngStream& rng, const ModelConstants& c) {
    const FitResult fit = fit_dataset(data, form, c);
    if (!fit.converged)
        throw Error("base fit for the scatter ensemble did not converge");
    const McEnsemble ens =
        mc_ensemble(data, fit, McMode::GaussianNoise, n_rounds, rng, c);
    if (ens.n_failed * 20 > n_rounds)
        throw ExcessiveFailures(ens.n_failed, n_rounds);
    return ens.triples;
}

}  // namespace denaturefit
