// Correlated Rayleigh block fading, path loss and power feedback.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "swipt/channel.hpp"
#include "swipt/random.hpp"
#include "swipt/units.hpp"

using namespace swipt;

TEST_CASE("full correlation freezes the fading state") {
    ChannelParams p;
    p.zeta = 1.0;
    RandomStream rng(1);
    ChannelBlock b = init_stationary(p, rng);
    const auto h0 = b.h;
    for (int i = 0; i < 10; ++i) {
        b = advance(b, p, rng);
        CHECK(std::abs(b.h - h0) < 1e-15);
    }
    CHECK(b.index == 10);
}

TEST_CASE("zero correlation and intermediate correlation match AR(1) statistics") {
    const long n = 100000;
    for (double zeta : {0.0, 0.9}) {
        ChannelParams p;
        p.zeta = zeta;
        RandomStream rng(17);
        ChannelBlock b = init_stationary(p, rng);
        std::vector<std::complex<double>> h;
        h.reserve(n);
        for (long i = 0; i < n; ++i) {
            h.push_back(b.h);
            b = advance(b, p, rng);
        }
        std::complex<double> acc{0.0, 0.0};
        double var = 0.0;
        for (long i = 0; i + 1 < n; ++i) {
            acc += h[i + 1] * std::conj(h[i]);
            var += std::norm(h[i]);
        }
        const double lag1 = (acc / std::complex<double>(var, 0.0)).real();
        CHECK(lag1 == Catch::Approx(zeta).margin(0.01));
        CHECK(var / static_cast<double>(n - 1) == Catch::Approx(p.sigma_h_sq).epsilon(0.03));
    }
}

TEST_CASE("squared fading magnitude is exponential with the stationary mean") {
    ChannelParams p;
    p.zeta = 0.0;
    p.sigma_h_sq = 1.0;
    RandomStream rng(23);
    const long n = 100000;
    std::vector<double> g;
    g.reserve(n);
    ChannelBlock b = init_stationary(p, rng);
    for (long i = 0; i < n; ++i) {
        g.push_back(std::norm(b.h));
        b = advance(b, p, rng);
    }
    std::sort(g.begin(), g.end());
    double ks = 0.0;
    for (long i = 0; i < n; ++i) {
        const double model = 1.0 - std::exp(-g[i] / p.sigma_h_sq);
        const double emp_hi = static_cast<double>(i + 1) / n;
        const double emp_lo = static_cast<double>(i) / n;
        ks = std::max({ks, std::abs(model - emp_hi), std::abs(model - emp_lo)});
    }
    CHECK(ks < 0.01);
}

TEST_CASE("path gain anchors: free-space reference and distance power law") {
    ChannelParams p;
    p.distance_m = 1.0;
    p.antenna_gain_dbi_tx = 0.0;
    p.antenna_gain_dbi_rx = 0.0;
    p.carrier_hz = 2.4e9;
    const double lambda = 299792458.0 / p.carrier_hz;
    const double free_space = std::pow(lambda / (4.0 * std::numbers::pi), 2.0);
    CHECK(path_gain(p) == Catch::Approx(free_space).epsilon(1e-12));

    ChannelParams a = p, b = p;
    a.distance_m = 2.0;
    b.distance_m = 4.0;
    a.path_exponent = b.path_exponent = 2.5;
    CHECK(path_gain(b) / path_gain(a) == Catch::Approx(std::pow(2.0, -2.5)).epsilon(1e-12));
}

TEST_CASE("default-geometry path gain matches a hand evaluation") {
    ChannelParams p;  // 2.4 GHz, 3 m, exponent 2.5, 5+5 dBi
    const double lambda = 299792458.0 / 2.4e9;
    const double expect = std::pow(10.0, 0.5) * std::pow(10.0, 0.5) *
                          std::pow(lambda / (4.0 * std::numbers::pi), 2.0) *
                          std::pow(1.0 / 3.0, 2.5);
    CHECK(path_gain(p) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("feedback power anchors and error handling") {
    CHECK(feedback_power({1.0, 0.0}, 0.5, 1.0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(feedback_power({0.0, 0.0}, 0.5, 1.0) == 0.0);
    CHECK_THROWS_AS(feedback_power({1.0, 0.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("ensemble-average feedback power is the faded mean power") {
    ChannelParams p;
    p.zeta = 0.0;
    p.sigma_h_sq = 1.7;
    const double pg = 1e-4, p_ref = 0.8;
    RandomStream rng(31);
    const long n = 100000;
    double acc = 0.0;
    ChannelBlock b = init_stationary(p, rng);
    for (long i = 0; i < n; ++i) {
        acc += feedback_power(b.h, p_ref, pg);
        b = advance(b, p, rng);
    }
    CHECK(acc / n == Catch::Approx(pg * p_ref * p.sigma_h_sq).epsilon(0.02));
}

TEST_CASE("channel parameter validation") {
    ChannelParams p;
    p.zeta = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ChannelParams{};
    p.distance_m = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ChannelParams{};
    p.path_exponent = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
