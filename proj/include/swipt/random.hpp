// Seeded random stream. Gaussian variates are generated by Box-Muller from
// the raw engine output so that sequences are identical across standard
// library implementations (std::normal_distribution is not portable).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace swipt {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_mix_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return (engine_() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [lo, hi]
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

    // standard normal
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    // circularly symmetric complex Gaussian with E|z|^2 = variance
    std::complex<double> cscg(double variance) {
        const double s = std::sqrt(variance / 2.0);
        return {s * gaussian(), s * gaussian()};
    }

    // derive an independent substream (e.g. one per sweep point or thread)
    RandomStream substream(std::uint64_t index) const {
        std::uint64_t x = seed_mix_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27; x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return RandomStream(x);
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_mix_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace swipt
