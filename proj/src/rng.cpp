#include "denaturefit/rng.hpp"

#include <cmath>
#include <numbers>

namespace denaturefit {

namespace {
constexpr int kN = 624;
constexpr int kM = 397;
constexpr std::uint32_t kMatrixA = 0x9908b0dfu;
constexpr std::uint32_t kUpperMask = 0x80000000u;
constexpr std::uint32_t kLowerMask = 0x7fffffffu;
constexpr double kTwoPow32 = 4294967296.0;
}  // namespace

void Mt19937::reseed(std::uint32_t seed) {
    mt_[0] = seed;
    for (int i = 1; i < kN; ++i)
        mt_[i] = 1812433253u * (mt_[i - 1] ^ (mt_[i - 1] >> 30)) +
                 static_cast<std::uint32_t>(i);
    mti_ = kN;
}

std::uint32_t Mt19937::next_u32() {
    if (mti_ >= kN) {
        for (int i = 0; i < kN; ++i) {
            const std::uint32_t y =
                (mt_[i] & kUpperMask) | (mt_[(i + 1) % kN] & kLowerMask);
            mt_[i] = mt_[(i + kM) % kN] ^ (y >> 1) ^ ((y & 1u) ? kMatrixA : 0u);
        }
        mti_ = 0;
    }
    std::uint32_t y = mt_[mti_++];
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
}

double RngStream::uniform01() {
    return static_cast<double>(mt_.next_u32()) / kTwoPow32;
}

double RngStream::gaussian(double sigma) {
    if (has_cached_) {
        has_cached_ = false;
        return sigma * cached_;
    }
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
    const double u1 = (static_cast<double>(mt_.next_u32()) + 1.0) / kTwoPow32;
    const double u2 = static_cast<double>(mt_.next_u32()) / kTwoPow32;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return sigma * (r * std::cos(angle));
}

double lorentzian_quantile(double u, double median, double gamma) {
    return median + gamma * std::tan(std::numbers::pi * (u - 0.5));
}

double RngStream::lorentzian(double median, double gamma, double cutoff) {
    for (;;) {
        const double x = lorentzian_quantile(uniform01(), median, gamma);
        if (std::fabs(x - median) <= cutoff) return x;
    }
}

std::uint32_t substream_seed(std::uint32_t master, std::uint32_t index) {
    // Golden-ratio multiply spreads consecutive indices across the seed
    // space; xor keeps distinct masters distinct.
    return master ^ (0x9e3779b9u * (index + 1u));
}

NoiseSpec NoiseSpec::gaussian_noise(double sigma) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("gaussian sigma must be >= 0");
    NoiseSpec s;
    s.kind = Kind::Gaussian;
    s.sigma = sigma;
    return s;
}

NoiseSpec NoiseSpec::lorentzian_noise(double median, double gamma, double cutoff) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("lorentzian gamma must be > 0");
    if (!(cutoff > 0.0))
        throw std::invalid_argument("lorentzian cutoff must be > 0");
    NoiseSpec s;
    s.kind = Kind::Lorentzian;
    s.sigma = 0.0;
    s.median = median;
    s.gamma = gamma;
    s.cutoff = cutoff;
    return s;
}

double NoiseSpec::gamma_matching_sigma(double sigma) {
    return sigma * std::sqrt(2.0 * std::numbers::ln2);
}

double NoiseSpec::draw(RngStream& rng) const {
    switch (kind) {
        case Kind::Gaussian: return rng.gaussian(sigma);
        case Kind::Lorentzian: return rng.lorentzian(median, gamma, cutoff);
    }
    return 0.0;
}

}  // namespace denaturefit
