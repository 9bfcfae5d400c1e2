// Unified single-tone/multi-tone complex-envelope synthesis, per-tone
// matched-filter precoding and exact PAPR of sampled waveforms.
//
// Conventions: 1-ohm normalization (power = |amplitude|^2), complex-envelope
// mean-square power is twice the passband power. The symbol period is tied
// to the tone spacing, T = 1/delta_f, so equal-weight multisines are exactly
// periodic on the sampling grid and analytic PAPR values are attained.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace swipt {

struct SignalConfig {
    double rho = 0.0;       // power allocation: 1 -> all single-tone CW
    int n_active = 1;       // number of active tones N
    int q_total = 16;       // modulation index Q (max tones)
    double p_dr = 1e-3;     // HPA drive power [W]
    double delta_f = 10e3;  // tone spacing [Hz]
    double f1_offset = 10e3;  // baseband frequency of the first tone [Hz]
    double rho_fs = 1.0 - 1e-4;  // single-tone-mode allocation ratio
    double rho_r = 1e-3;    // receiver power-splitting ratio

    void validate() const {
        if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("rho out of [0,1]");
        if (n_active < 1 || n_active > q_total) throw std::invalid_argument("n_active out of [1,Q]");
        if (p_dr <= 0.0) throw std::invalid_argument("p_dr must be positive");
        if (delta_f <= 0.0) throw std::invalid_argument("delta_f must be positive");
        if (rho_r <= 0.0 || rho_r >= 1.0) throw std::invalid_argument("rho_r out of (0,1)");
    }

    double symbol_period() const { return 1.0 / delta_f; }
};

struct TimeGrid {
    double duration = 1e-4;      // symbol period T [s]
    int samples_per_symbol = 256;

    double dt() const { return duration / samples_per_symbol; }
};

// default grid: one symbol period, 16x oversampling of the widest multisine
inline TimeGrid default_grid(const SignalConfig& cfg) {
    return TimeGrid{cfg.symbol_period(), 16 * cfg.q_total};
}

struct ComplexWaveform {
    std::vector<std::complex<double>> samples;
    TimeGrid grid;
};

struct ToneWeights {
    std::vector<double> amplitudes;  // s_n, one per active tone
    std::vector<double> phases;      // theta_n [rad]
    double carrier_amplitude = 1.0;  // s_c
    double carrier_phase = 0.0;      // theta_c

    // max-PAPR default: s_c = 1, s_n = 1/sqrt(N), all phases zero
    static ToneWeights max_papr(int n_tones) {
        ToneWeights w;
        w.amplitudes.assign(n_tones, 1.0 / std::sqrt(static_cast<double>(n_tones)));
        w.phases.assign(n_tones, 0.0);
        return w;
    }
};

// Matched-filter precoding from estimated complex tone gains. The carrier
// weight is the unit-modulus conjugate g_c*/|g_c|; multi-tone weights are the
// conjugate gains normalized by the gain-vector norm so that sum s_n^2 = 1.
inline ToneWeights precode(const std::vector<std::complex<double>>& tone_gains,
                           std::complex<double> carrier_gain) {
    if (std::abs(carrier_gain) == 0.0) throw std::invalid_argument("zero carrier gain");
    double norm_sq = 0.0;
    for (const auto& g : tone_gains) {
        if (std::abs(g) == 0.0) throw std::invalid_argument("zero tone gain");
        norm_sq += std::norm(g);
    }
    const double norm = std::sqrt(norm_sq);
    ToneWeights w;
    w.carrier_amplitude = 1.0;
    w.carrier_phase = std::arg(std::conj(carrier_gain));
    w.amplitudes.reserve(tone_gains.size());
    w.phases.reserve(tone_gains.size());
    for (const auto& g : tone_gains) {
        w.amplitudes.push_back(std::abs(g) / norm);
        w.phases.push_back(std::arg(std::conj(g)));
    }
    return w;
}

// s(t) = sqrt(2 rho P_dr) s_c e^{j theta_c}
//      + sqrt(2 (1-rho) P_dr) sum_n s_n e^{j(2 pi f_n t + theta_n)}
inline ComplexWaveform synthesize(const SignalConfig& cfg, const ToneWeights& weights,
                                  const TimeGrid& grid) {
    cfg.validate();
    if (static_cast<int>(weights.amplitudes.size()) != cfg.n_active ||
        weights.phases.size() != weights.amplitudes.size())
        throw std::invalid_argument("weights size does not match n_active");

    const double f_max = cfg.f1_offset + (cfg.n_active - 1) * cfg.delta_f;
    const int max_bin = static_cast<int>(std::lround(f_max * grid.duration));
    if (grid.samples_per_symbol < 2 * (max_bin + 1))
        throw std::invalid_argument("grid violates Nyquist for the occupied band");

    const double a_cw = std::sqrt(2.0 * cfg.rho * cfg.p_dr);
    const double a_mt = std::sqrt(2.0 * (1.0 - cfg.rho) * cfg.p_dr);
    const std::complex<double> cw =
        a_cw * weights.carrier_amplitude *
        std::exp(std::complex<double>(0.0, weights.carrier_phase));

    ComplexWaveform w;
    w.grid = grid;
    w.samples.resize(grid.samples_per_symbol);
    for (int k = 0; k < grid.samples_per_symbol; ++k) {
        const double t = k * grid.dt();
        std::complex<double> acc = cw;
        for (int n = 0; n < cfg.n_active; ++n) {
            const double f_n = cfg.f1_offset + n * cfg.delta_f;
            const double phase = 2.0 * std::numbers::pi * f_n * t + weights.phases[n];
            acc += a_mt * weights.amplitudes[n] * std::exp(std::complex<double>(0.0, phase));
        }
        w.samples[k] = acc;
    }
    return w;
}

// max_t |w(t)|^2 / mean_t |w(t)|^2
inline double papr(const ComplexWaveform& w) {
    double peak = 0.0, sum = 0.0;
    for (const auto& s : w.samples) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        sum += p;
    }
    if (sum == 0.0) throw std::invalid_argument("papr of all-zero waveform");
    return peak / (sum / static_cast<double>(w.samples.size()));
}

// time-average of |w(t)|^2 (complex-envelope mean-square, = 2x passband power)
inline double mean_square(const ComplexWaveform& w) {
    double sum = 0.0;
    for (const auto& s : w.samples) sum += std::norm(s);
    return sum / static_cast<double>(w.samples.size());
}

} // namespace swipt
