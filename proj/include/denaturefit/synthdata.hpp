#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "denaturefit/model.hpp"
#include "denaturefit/rng.hpp"

namespace denaturefit {

// Recipe for one synthetic denaturation curve. Defaults reproduce the
// calibration design: 20 points spread evenly over the full window plus 10
// across the transition (equilibrium constant 0.1 to 10), every design point
// measured twice with independent noise, folded baseline 200 + 5 d, unfolded
// baseline 500 + 7 d.
struct SyntheticSpec {
    double m = 6.0;
    double d50 = 4.0;
    double a0 = 200.0, a1 = 5.0;
    double b0 = 500.0, b1 = 7.0;
    double d_min = 0.0, d_max = 8.0;
    int n_span = 20;
    int n_transition = 10;
    bool duplicate = true;
    NoiseSpec noise = NoiseSpec::gaussian_noise(10.0);
    ModelConstants constants{};
};

// Concentrations where the equilibrium constant reaches 0.1 and 10, i.e.
// d50 -/+ RT ln(10) / m, clamped into [d_min, d_max]. Requires m > 0.
std::pair<double, double> transition_bounds(double m, double d50,
                                            const ModelConstants& c,
                                            double d_min = 0.0,
                                            double d_max = 8.0);

// Unique design concentrations (before duplication), sorted ascending.
std::vector<double> design_points(const SyntheticSpec& spec);

struct SyntheticDataset {
    DenaturationDataset data;        // sorted ascending by concentration
    FullParams truth;                // generating parameters, MD50 form
    std::vector<double> noiseless;   // model value at each data point
};

// Noise draws are consumed in ascending data order, so a dataset is a pure
// function of (spec, stream state).
SyntheticDataset generate(const SyntheticSpec& spec, RngStream& rng);

struct GridCell {
    double m;
    double d50;
};

// m in {4, 6, 8} crossed with d50 in {3, 4, 5}, m-major order.
std::array<GridCell, 9> standard_grid();

// The nine-cell calibration family at Gaussian sigma = 10, one substream per
// cell derived from the master seed.
std::vector<SyntheticDataset> standard_nine(std::uint32_t master_seed);

}  // namespace denaturefit
