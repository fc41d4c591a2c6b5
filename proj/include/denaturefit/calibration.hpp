#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "denaturefit/confidence.hpp"
#include "denaturefit/synthdata.hpp"

namespace denaturefit {

// One (parameterization, line parameter) cell of the coverage count.
struct CoverageCell {
    LemForm form = LemForm::Dg0M;
    std::size_t param_index = 4;  // 4 or 5
    double true_value = 0.0;
    std::size_t hits = 0;
};

struct CoverageReport {
    CiMethod method = CiMethod::Marginal;
    NoiseSpec noise;
    double level = 0.0;
    std::size_t n_trials = 0;
    std::size_t excluded = 0;  // whole trials dropped on any fit/CI failure
    std::array<CoverageCell, 6> cells;
    bool flagged = false;  // excluded > 5% of trials

    std::size_t counted() const { return n_trials - excluded; }
    double fraction(std::size_t cell) const {
        return counted() ? static_cast<double>(cells[cell].hits) / counted() : 0.0;
    }
};

struct CoverageOptions {
    std::size_t n_trials = 1000;
    // Rounds per Monte Carlo / bootstrap interval inside a trial.
    std::size_t mc_rounds = 100;
    double true_m = 6.0;
    double true_d50 = 4.0;
    SearchOptions search{};
    ModelConstants constants{};
};

// Repeated synthetic experiment: generate a dataset from the true
// parameters, fit all three parameterizations, build the requested interval
// for each line parameter, and count how often the generating value falls
// inside. A trial is excluded from every cell if any of its fits or
// intervals fails, so all six denominators agree.
CoverageReport coverage_experiment(CiMethod method, double level,
                                   const NoiseSpec& noise,
                                   std::uint32_t master_seed,
                                   const CoverageOptions& opts = {});

// Fitted (dg0, m, d50) triples from refits of noise-perturbed copies of one
// dataset; the raw material of the parameter-correlation scatter plots.
std::vector<LemTriple> scatter_ensemble(const DenaturationDataset& data,
                                        LemForm form, std::size_t n_rounds,
                                        RngStream& rng, const ModelConstants& c);

}  // namespace denaturefit
