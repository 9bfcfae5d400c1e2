// Gauss-Markov (AR(1)) Rayleigh block fading, log-distance path loss and
// error-free received-power feedback.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "swipt/random.hpp"
#include "swipt/units.hpp"

namespace swipt {

struct ChannelParams {
    double zeta = 0.99;          // temporal correlation coefficient
    double sigma_h_sq = 1.0;     // fading variance E|h|^2
    double path_exponent = 2.5;
    double distance_m = 3.0;
    double antenna_gain_dbi_tx = 5.0;
    double antenna_gain_dbi_rx = 5.0;
    double carrier_hz = 2.4e9;

    void validate() const {
        if (zeta < 0.0 || zeta > 1.0) throw std::invalid_argument("zeta out of [0,1]");
        if (distance_m <= 0.0) throw std::invalid_argument("distance must be positive");
        if (path_exponent < 2.0) throw std::invalid_argument("path exponent must be >= 2");
    }
};

struct ChannelBlock {
    long index = 0;
    std::complex<double> h{0.0, 0.0};
    double p_r = 0.0;  // received feedback power [W]
};

// stationary start: h ~ CSCG(0, sigma_h^2)
inline ChannelBlock init_stationary(const ChannelParams& params, RandomStream& rng) {
    params.validate();
    return ChannelBlock{0, rng.cscg(params.sigma_h_sq), 0.0};
}

// h_v = zeta h_{v-1} + u_v,  u_v ~ CSCG(0, (1-zeta^2) sigma_h^2)
inline ChannelBlock advance(const ChannelBlock& prev, const ChannelParams& params,
                            RandomStream& rng) {
    const double innov_var = (1.0 - params.zeta * params.zeta) * params.sigma_h_sq;
    ChannelBlock next;
    next.index = prev.index + 1;
    next.h = params.zeta * prev.h + (innov_var > 0.0 ? rng.cscg(innov_var)
                                                    : std::complex<double>{0.0, 0.0});
    return next;
}

// log-distance path loss with 1 m free-space reference:
// gain = G_tx G_rx (lambda / 4 pi d0)^2 (d0/d)^n
inline double path_gain(const ChannelParams& params) {
    constexpr double c = 299792458.0;
    constexpr double d0 = 1.0;
    const double lambda = c / params.carrier_hz;
    const double free_space_1m = std::pow(lambda / (4.0 * std::numbers::pi * d0), 2.0);
    return db_to_lin(params.antenna_gain_dbi_tx) * db_to_lin(params.antenna_gain_dbi_rx) *
           free_space_1m * std::pow(d0 / params.distance_m, params.path_exponent);
}

// P_r = |h|^2 * pg * P_ref (error-free feedback)
inline double feedback_power(std::complex<double> h, double p_ref, double pg) {
    if (p_ref <= 0.0) throw std::invalid_argument("p_ref must be positive");
    return std::norm(h) * pg * p_ref;
}

} // namespace swipt
