#pragma once

#include <array>
#include <cstdint>

#include "denaturefit/types.hpp"

namespace denaturefit {

// MT19937 with the reference initialization and tempering. Self-contained so
// streams are reproducible byte for byte across platforms and standard
// library versions; unit tests pin it against the canonical sequence.
class Mt19937 {
public:
    explicit Mt19937(std::uint32_t seed = 5489u) { reseed(seed); }

    void reseed(std::uint32_t seed);
    std::uint32_t next_u32();

private:
    std::array<std::uint32_t, 624> mt_{};
    int mti_ = 625;
};

// Quantile of the Lorentzian (Cauchy) distribution; u in (0,1).
double lorentzian_quantile(double u, double median, double gamma);

// One random stream: uniform, Gaussian and truncated-Lorentzian variates on
// top of a private MT19937. Draw order is part of the reproducibility
// contract: uniform01 consumes one 32-bit word, a Gaussian pair consumes two,
// each Lorentzian attempt one.
class RngStream {
public:
    explicit RngStream(std::uint32_t seed) : mt_(seed) {}

    std::uint32_t next_u32() { return mt_.next_u32(); }

    // k / 2^32, uniform on [0, 1).
    double uniform01();

    // Box-Muller; the sine partner is cached and returned by the next call
    // (scaled by that call's sigma).
    double gaussian(double sigma);
    bool has_cached_gaussian() const { return has_cached_; }

    // Inverse-CDF Lorentzian, redrawn until |x - median| <= cutoff.
    double lorentzian(double median, double gamma, double cutoff);

private:
    Mt19937 mt_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Decorrelated child seed for trial/cell substreams of a master seed.
std::uint32_t substream_seed(std::uint32_t master, std::uint32_t index);

// Noise model attached to synthetic data generation.
struct NoiseSpec {
    enum class Kind { Gaussian, Lorentzian };

    Kind kind = Kind::Gaussian;
    double sigma = 10.0;   // Gaussian standard deviation (0 = noiseless)
    double median = 0.0;   // Lorentzian location
    double gamma = 0.0;    // Lorentzian half-width at half-maximum
    double cutoff = 0.0;   // Lorentzian rejection bound on |x - median|

    static NoiseSpec gaussian_noise(double sigma);
    static NoiseSpec lorentzian_noise(double median, double gamma, double cutoff);

    // HWHM of the Lorentzian matching a Gaussian of standard deviation
    // sigma at half-maximum: gamma = sigma * sqrt(2 ln 2).
    static double gamma_matching_sigma(double sigma);

    double draw(RngStream& rng) const;
};

}  // namespace denaturefit
