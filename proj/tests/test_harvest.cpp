// Piecewise-linear energy-harvesting curves, fitting and the PCE crossover.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "swipt/eh_dataset_default.hpp"
#include "swipt/harvest.hpp"
#include "swipt/units.hpp"

using namespace swipt;

namespace {

EhCurve two_point_curve() {
    EhCurve c;
    c.q = 1;
    c.x_points = {1.0, 3.0};
    c.y_points = {0.0, 1.0};
    c.validate();
    return c;
}

}  // namespace

TEST_CASE("curve validation rejects malformed support points") {
    EhCurve c;
    c.x_points = {1.0};
    c.y_points = {0.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.x_points = {1.0, 1.0};
    c.y_points = {0.0, 0.5};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.x_points = {1.0, 2.0};
    c.y_points = {0.5, 0.2};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.x_points = {1.0, 2.0};
    c.y_points = {0.0, 3.0};  // harvests more than the input
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("harvested power interpolates between the support points") {
    const EhCurve c = two_point_curve();
    CHECK(harvested_power(c, 0.5) == 0.0);             // below turn-on
    CHECK(harvested_power(c, 2.0) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(harvested_power(c, 3.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(harvested_power(c, 100.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(harvested_power(c, -1.0), std::invalid_argument);
}

TEST_CASE("harvested power is continuous and non-decreasing") {
    const EhCurve c = two_point_curve();
    double prev = -1.0, prev_x = 0.0, prev_y = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = 10.0 * c.saturation() * i / 1000.0;
        const double y = harvested_power(c, x);
        CHECK(y >= prev);
        if (i > 0) {
            // bounded local increments imply continuity on this grid
            CHECK(y - prev_y <= (x - prev_x) + c.max_harvest() / 100.0);
        }
        prev = y;
        prev_x = x;
        prev_y = y;
    }
}

TEST_CASE("conversion efficiency stays within physical bounds") {
    const EhCurve c = two_point_curve();
    CHECK(pce(c, 0.5) == 0.0);
    CHECK(pce(c, c.saturation()) ==
          Catch::Approx(c.max_harvest() / c.saturation()).epsilon(1e-12));
    CHECK(pce(c, 1e6) < 1e-5);  // saturation over growing input
    for (int i = 1; i <= 500; ++i) {
        const double x = 10.0 * c.saturation() * i / 500.0;
        const double e = pce(c, x);
        CHECK(e >= 0.0);
        CHECK(e <= 1.0);
    }
    CHECK_THROWS_AS(pce(c, 0.0), std::invalid_argument);
}

TEST_CASE("fitting recovers data that is already piecewise linear") {
    const EhCurve truth = two_point_curve();
    std::vector<std::pair<double, double>> data;
    for (int i = 0; i <= 40; ++i) {
        const double x = 1.0 + 2.0 * i / 40.0;
        data.emplace_back(x, harvested_power(truth, x));
    }
    const EhCurve fit = fit_piecewise(data, 4, 1);
    for (int i = 0; i <= 100; ++i) {
        const double x = 1.0 + 2.0 * i / 100.0;
        CHECK(harvested_power(fit, x) ==
              Catch::Approx(harvested_power(truth, x)).margin(1e-9));
    }
}

TEST_CASE("fitting a single proportional segment recovers the slope") {
    std::vector<std::pair<double, double>> data;
    for (int i = 1; i <= 30; ++i) {
        const double x = 0.1 * i;
        data.emplace_back(x, 0.3 * x);
    }
    const EhCurve fit = fit_piecewise(data, 1, 1);
    const double slope = (fit.y_points.back() - fit.y_points.front()) /
                         (fit.x_points.back() - fit.x_points.front());
    CHECK(slope == Catch::Approx(0.3).margin(0.02));
}

TEST_CASE("fitting rejects degenerate inputs") {
    CHECK_THROWS_AS(fit_piecewise({{1.0, 0.1}}, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_piecewise({{1.0, 0.1}, {2.0, 0.2}, {3.0, 0.3}}, 0, 1),
                    std::invalid_argument);
    // all-zero harvest has no rising region
    CHECK_THROWS_AS(fit_piecewise({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}}, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("crossover search finds a constructed intersection") {
    // efficiency curves engineered to cross near -10 dBm
    const double x_cross = dbm_to_watt(-10.0);
    EhCurve lo_turn, hi_sat;
    lo_turn.q = 16;
    lo_turn.x_points = {x_cross / 100.0, x_cross, 100.0 * x_cross};
    lo_turn.y_points = {0.0, 0.5 * x_cross, 0.5 * x_cross};
    hi_sat.q = 1;
    hi_sat.x_points = {x_cross / 100.0, x_cross, 100.0 * x_cross};
    hi_sat.y_points = {0.0, 0.45 * x_cross, 60.0 * x_cross};
    lo_turn.validate();
    hi_sat.validate();
    const double found_dbm = watt_to_dbm(pce_crossover(hi_sat, lo_turn));
    // multi-curve efficiency leads below the intersection and trails above it
    CHECK(pce(lo_turn, dbm_to_watt(found_dbm - 3.0)) >
          pce(hi_sat, dbm_to_watt(found_dbm - 3.0)));
    CHECK(pce(lo_turn, dbm_to_watt(found_dbm + 3.0)) <
          pce(hi_sat, dbm_to_watt(found_dbm + 3.0)));
    CHECK(found_dbm == Catch::Approx(-10.0).margin(0.75));
}

TEST_CASE("identical curves have no crossover") {
    const EhCurve c = two_point_curve();
    CHECK_THROWS_AS(pce_crossover(c, c), std::invalid_argument);
}

TEST_CASE("dataset parsing handles headers, sentinels and malformed rows") {
    std::istringstream ok("q,p_in_dbm,p_eh_dbm\n1,-10,-250\n1,-5,-12\n1,0,-8\n");
    const auto by_q = parse_eh_dataset(ok);
    REQUIRE(by_q.count(1) == 1);
    REQUIRE(by_q.at(1).size() == 3);
    CHECK(by_q.at(1)[0].second == 0.0);  // sentinel decodes as zero harvest
    CHECK(by_q.at(1)[1].second == Catch::Approx(dbm_to_watt(-12.0)).epsilon(1e-12));

    std::istringstream no_header("1,-10,-250\n");
    CHECK_THROWS_AS(parse_eh_dataset(no_header), std::invalid_argument);
    std::istringstream short_row("q,p_in_dbm,p_eh_dbm\n1,-10\n");
    CHECK_THROWS_AS(parse_eh_dataset(short_row), std::invalid_argument);
    std::istringstream empty("q,p_in_dbm,p_eh_dbm\n");
    CHECK_THROWS_AS(parse_eh_dataset(empty), std::invalid_argument);
}

TEST_CASE("the bundled dataset fits curves with the expected structure") {
    std::istringstream in(kDefaultEhDataset);
    const auto curves = load_eh_curves(in, 6);
    REQUIRE(curves.size() == 5);
    for (int q : {1, 2, 4, 8, 16}) REQUIRE(curves.count(q) == 1);

    for (const auto& [q, c] : curves) {
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = 10.0 * c.saturation() * i / 1000.0;
            const double y = harvested_power(c, x);
            CHECK(y >= prev);
            if (x > 0.0) {
                CHECK(y / x >= 0.0);
                CHECK(y / x <= 1.0);
            }
            prev = y;
        }
    }

    // more tones harvest usable power from weaker inputs
    CHECK(curves.at(16).turn_on() < curves.at(1).turn_on());

    const double cross = pce_crossover(curves.at(1), curves.at(16));
    CHECK(pce(curves.at(16), cross / 2.0) > pce(curves.at(1), cross / 2.0));
    CHECK(pce(curves.at(16), cross * 4.0) < pce(curves.at(1), cross * 4.0));
}

TEST_CASE("fit residuals on the bundled dataset stay small") {
    std::istringstream in(kDefaultEhDataset);
    const auto by_q = parse_eh_dataset(in);
    for (const auto& [q, pts] : by_q) {
        const EhCurve c = fit_piecewise(std::vector(pts), 6, q);
        double rss = 0.0;
        long n = 0;
        for (const auto& [x, y] : pts) {
            const double r = harvested_power(c, x) - y;
            rss += r * r;
            ++n;
        }
        const double rmse = std::sqrt(rss / static_cast<double>(n));
        CHECK(rmse < 0.05 * c.max_harvest());
    }
}

TEST_CASE("the self-powering frontier is a single threshold per curve") {
    std::istringstream in(kDefaultEhDataset);
    const auto curves = load_eh_curves(in, 6);
    const double p_c = 10e-6;
    for (const auto& [q, c] : curves) {
        bool seen_feasible = false;
        for (int i = 0; i <= 2000; ++i) {
            const double x = dbm_to_watt(-40.0 + 50.0 * i / 2000.0);
            const bool feasible = harvested_power(c, x) >= p_c;
            if (seen_feasible) CHECK(feasible);  // once on, stays on
            seen_feasible = seen_feasible || feasible;
        }
        CHECK(seen_feasible);
    }
}
