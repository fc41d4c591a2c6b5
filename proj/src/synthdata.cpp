#include "denaturefit/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "denaturefit/kernels.hpp"

namespace denaturefit {

std::pair<double, double> transition_bounds(double m, double d50,
                                            const ModelConstants& c,
                                            double d_min, double d_max) {
    if (!(m > 0.0))
        throw std::invalid_argument("transition bounds require m > 0");
    const double half = c.rt() * std::log(10.0) / m;
    return {std::clamp(d50 - half, d_min, d_max),
            std::clamp(d50 + half, d_min, d_max)};
}

std::vector<double> design_points(const SyntheticSpec& spec) {
    if (spec.n_span < 2 || spec.n_transition < 2)
        throw std::invalid_argument("design needs at least 2 points per block");
    if (!(spec.d_max > spec.d_min))
        throw std::invalid_argument("design window is empty");

    std::vector<double> d;
    d.reserve(spec.n_span + spec.n_transition);
    const double span = spec.d_max - spec.d_min;
    for (int i = 0; i < spec.n_span; ++i)
        d.push_back(spec.d_min + span * i / (spec.n_span - 1));
    const auto [lo, hi] =
        transition_bounds(spec.m, spec.d50, spec.constants, spec.d_min, spec.d_max);
    for (int i = 0; i < spec.n_transition; ++i)
        d.push_back(lo + (hi - lo) * i / (spec.n_transition - 1));
    std::sort(d.begin(), d.end());
    return d;
}

SyntheticDataset generate(const SyntheticSpec& spec, RngStream& rng) {
    const std::vector<double> design = design_points(spec);

    std::vector<double> d;
    d.reserve(design.size() * (spec.duplicate ? 2 : 1));
    for (double v : design) {
        d.push_back(v);
        if (spec.duplicate) d.push_back(v);
    }

    SyntheticDataset out;
    out.truth = {spec.a0, spec.a1, spec.b0, spec.b1,
                 {LemForm::MD50, spec.m, spec.d50}};
    out.noiseless.resize(d.size());
    kernels::model_batch(out.truth, spec.constants, d.data(),
                         out.noiseless.data(), d.size());

    std::vector<DataPoint> pts(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        pts[i] = {d[i], out.noiseless[i] + spec.noise.draw(rng)};
    out.data = DenaturationDataset(std::move(pts));
    return out;
}

std::array<GridCell, 9> standard_grid() {
    std::array<GridCell, 9> grid;
    int i = 0;
    for (double m : {4.0, 6.0, 8.0})
        for (double d50 : {3.0, 4.0, 5.0}) grid[i++] = {m, d50};
    return grid;
}

std::vector<SyntheticDataset> standard_nine(std::uint32_t master_seed) {
    std::vector<SyntheticDataset> out;
    out.reserve(9);
    const auto grid = standard_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SyntheticSpec spec;
        spec.m = grid[i].m;
        spec.d50 = grid[i].d50;
        RngStream rng(substream_seed(master_seed, static_cast<std::uint32_t>(i)));
        out.push_back(generate(spec, rng));
    }
    return out;
}

}  // namespace denaturefit
