// Memoryless SSPA nonlinearity: smooth AM/AM saturation, zero AM/PM.
#pragma once

#include <cmath>
#include <stdexcept>

#include "swipt/waveform.hpp"

namespace swipt {

struct HpaParams {
    double gain_v = 1.0;  // small-signal voltage gain g
    double a_sat = 1.0;   // input saturation amplitude [V], a_sat^2 = saturation input power
    double beta = 2.0;    // AM/AM transition sharpness, >= 1

    void validate() const {
        if (gain_v <= 0.0) throw std::invalid_argument("gain_v must be positive");
        if (a_sat <= 0.0) throw std::invalid_argument("a_sat must be positive");
        if (beta < 1.0) throw std::invalid_argument("beta must be >= 1");
    }
};

// G(a) = g a / [1 + (a/a_sat)^(2 beta)]^(1/(2 beta))
inline double amam(double a, const HpaParams& p) {
    if (a < 0.0) throw std::invalid_argument("negative input amplitude");
    const double r = a / p.a_sat;
    return p.gain_v * a / std::pow(1.0 + std::pow(r, 2.0 * p.beta), 1.0 / (2.0 * p.beta));
}

// per-sample magnitude through amam, phase preserved
inline ComplexWaveform amplify(const ComplexWaveform& w, const HpaParams& p) {
    p.validate();
    ComplexWaveform out;
    out.grid = w.grid;
    out.samples.reserve(w.samples.size());
    for (const auto& s : w.samples) {
        const double a = std::abs(s);
        if (a == 0.0) {
            out.samples.emplace_back(0.0, 0.0);
        } else {
            out.samples.push_back(s * (amam(a, p) / a));
        }
    }
    return out;
}

// average passband power of the HPA output [W]; the complex-envelope
// mean-square is twice the passband power
inline double average_output_power(const SignalConfig& cfg, const ToneWeights& weights,
                                   const HpaParams& p, const TimeGrid& grid) {
    const ComplexWaveform out = amplify(synthesize(cfg, weights, grid), p);
    return mean_square(out) / 2.0;
}

} // namespace swipt
