// Piecewise-linear nonlinear energy-harvesting model: per-tone-count curves,
// PCE evaluation, least-squares curve fitting from measurement data and the
// single/multi-tone PCE crossover search.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swipt/units.hpp"

namespace swipt {

struct EhCurve {
    int q = 1;                     // tone count this curve applies to
    std::vector<double> x_points;  // strictly increasing input powers [W], x0 = turn-on
    std::vector<double> y_points;  // non-decreasing harvested powers [W], yK = max harvest

    void validate() const {
        if (x_points.size() < 2 || x_points.size() != y_points.size())
            throw std::invalid_argument("EhCurve needs >= 2 matching support points");
        for (std::size_t i = 1; i < x_points.size(); ++i) {
            if (x_points[i] <= x_points[i - 1])
                throw std::invalid_argument("EhCurve x_points must be strictly increasing");
            if (y_points[i] < y_points[i - 1])
                throw std::invalid_argument("EhCurve y_points must be non-decreasing");
        }
        for (std::size_t i = 0; i < x_points.size(); ++i)
            if (y_points[i] > x_points[i])
                throw std::invalid_argument("EhCurve cannot harvest more than the input");
    }

    double turn_on() const { return x_points.front(); }
    double saturation() const { return x_points.back(); }
    double max_harvest() const { return y_points.back(); }
};

// 0 below turn-on, linear interpolation between support points, constant at
// and above saturation
inline double harvested_power(const EhCurve& c, double p_in) {
    if (p_in < 0.0) throw std::invalid_argument("negative input power");
    if (p_in < c.x_points.front()) return 0.0;
    if (p_in >= c.x_points.back()) return c.y_points.back();
    const auto it = std::upper_bound(c.x_points.begin(), c.x_points.end(), p_in);
    const std::size_t k = static_cast<std::size_t>(it - c.x_points.begin());
    const double slope =
        (c.y_points[k] - c.y_points[k - 1]) / (c.x_points[k] - c.x_points[k - 1]);
    return c.y_points[k - 1] + slope * (p_in - c.x_points[k - 1]);
}

inline double pce(const EhCurve& c, double p_in) {
    if (p_in <= 0.0) throw std::invalid_argument("pce needs positive input power");
    return harvested_power(c, p_in) / p_in;
}

namespace detail {

// dense symmetric solve, small systems only
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-30)
            throw std::invalid_argument("degenerate fit system");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

} // namespace detail

// Least-squares continuous piecewise-linear fit. Knots sit on the empirical
// quantile grid of the inputs between turn-on and saturation; the turn-on
// value is pinned to zero. Turn-on is the boundary of the zero-harvest
// region in the data; saturation is the smallest input whose harvested power
// is within 2% of the final value.
inline EhCurve fit_piecewise(std::vector<std::pair<double, double>> data, int k_segments,
                             int q = 1) {
    if (k_segments < 1) throw std::invalid_argument("k_segments must be >= 1");
    if (static_cast<int>(data.size()) < k_segments + 1)
        throw std::invalid_argument("not enough data points for the requested segments");
    std::sort(data.begin(), data.end());
    for (std::size_t i = 1; i < data.size(); ++i)
        if (data[i].first <= data[i - 1].first)
            throw std::invalid_argument("duplicate input powers in fit data");

    // turn-on: last zero-harvest input if any, else the first input
    double turn_on = data.front().first;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].second > 0.0) break;
        turn_on = data[i].first;
    }
    const double y_final = data.back().second;
    if (y_final <= 0.0) throw std::invalid_argument("no positive harvested power in data");
    double saturation = data.back().first;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].second >= 0.98 * y_final) {
            saturation = data[i].first;
            break;
        }
    }
    if (saturation <= turn_on) throw std::invalid_argument("degenerate turn-on/saturation");

    // quantile knots over the rising region
    std::vector<double> rising;
    for (const auto& [x, y] : data)
        if (x >= turn_on && x <= saturation) rising.push_back(x);
    if (static_cast<int>(rising.size()) < 2)
        throw std::invalid_argument("too few points between turn-on and saturation");
    const int k = k_segments;
    std::vector<double> knots(k + 1);
    for (int j = 0; j <= k; ++j) {
        const double pos = (rising.size() - 1) * static_cast<double>(j) / k;
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        knots[j] = (lo + 1 < rising.size())
                       ? rising[lo] * (1.0 - frac) + rising[lo + 1] * frac
                       : rising.back();
    }
    knots.front() = turn_on;
    knots.back() = saturation;
    for (int j = 1; j <= k; ++j)
        if (knots[j] <= knots[j - 1]) throw std::invalid_argument("collapsed knot grid");

    // hat-basis least squares in the free values y_1..y_K (y_0 = 0);
    // points at or beyond saturation constrain y_K directly
    auto basis = [&](int j, double x) -> double {
        if (x >= knots.back()) return j == k ? 1.0 : 0.0;
        if (x <= knots.front()) return 0.0;
        const auto it = std::upper_bound(knots.begin(), knots.end(), x);
        const int seg = static_cast<int>(it - knots.begin()) - 1;
        const double u = (x - knots[seg]) / (knots[seg + 1] - knots[seg]);
        if (j == seg) return 1.0 - u;
        if (j == seg + 1) return u;
        return 0.0;
    };
    std::vector<std::vector<double>> ata(k, std::vector<double>(k, 0.0));
    std::vector<double> atb(k, 0.0);
    for (const auto& [x, y] : data) {
        if (x < turn_on) continue;
        for (int j = 1; j <= k; ++j) {
            const double bj = basis(j, x);
            if (bj == 0.0) continue;
            atb[j - 1] += bj * y;
            for (int j2 = 1; j2 <= k; ++j2) ata[j - 1][j2 - 1] += bj * basis(j2, x);
        }
    }
    std::vector<double> yfit = detail::solve_linear(std::move(ata), std::move(atb));

    EhCurve c;
    c.q = q;
    c.x_points = std::move(knots);
    c.y_points.assign(k + 1, 0.0);
    double prev = 0.0;
    for (int j = 1; j <= k; ++j) {
        double v = std::max(yfit[j - 1], prev);          // monotone
        v = std::min(v, c.x_points[j]);                  // energy conservation
        c.y_points[j] = v;
        prev = v;
    }
    c.validate();
    return c;
}

// smallest input power where pce(multi) - pce(single) flips from positive to
// negative; bisected to 0.1 dB
inline double pce_crossover(const EhCurve& single_tone, const EhCurve& multi_tone) {
    const double lo_dbm =
        watt_to_dbm(std::min(single_tone.turn_on(), multi_tone.turn_on())) + 0.05;
    const double hi_dbm =
        watt_to_dbm(10.0 * std::max(single_tone.saturation(), multi_tone.saturation()));
    auto diff = [&](double dbm) {
        const double p = dbm_to_watt(dbm);
        return pce(multi_tone, p) - pce(single_tone, p);
    };
    constexpr double coarse = 0.5;
    double prev_dbm = lo_dbm;
    double prev_diff = diff(prev_dbm);
    for (double d = lo_dbm + coarse; d <= hi_dbm + coarse; d += coarse) {
        const double cur = diff(d);
        if (prev_diff > 0.0 && cur <= 0.0) {
            double a = prev_dbm, b = d;
            while (b - a > 0.1) {
                const double m = 0.5 * (a + b);
                (diff(m) > 0.0 ? a : b) = m;
            }
            return dbm_to_watt(0.5 * (a + b));
        }
        prev_dbm = d;
        prev_diff = cur;
    }
    throw std::invalid_argument("no positive-to-negative PCE crossover found");
}

// dataset rows: q,p_in_dbm,p_eh_dbm (header line required); powers in dBm
inline std::map<int, std::vector<std::pair<double, double>>> parse_eh_dataset(
    std::istream& in) {
    std::map<int, std::vector<std::pair<double, double>>> by_q;
    std::string line;
    if (!std::getline(in, line) || line.find("q") == std::string::npos)
        throw std::invalid_argument("EH dataset: missing header");
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double vals[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(ss, tok, ','))
                throw std::invalid_argument("EH dataset: bad row at line " +
                                            std::to_string(line_no));
            vals[i] = std::stod(tok);
        }
        // non-positive harvest encoded as a very low dBm sentinel (<= -200)
        const double p_eh = vals[2] <= -200.0 ? 0.0 : dbm_to_watt(vals[2]);
        by_q[static_cast<int>(vals[0])].emplace_back(dbm_to_watt(vals[1]), p_eh);
    }
    if (by_q.empty()) throw std::invalid_argument("EH dataset: no rows");
    return by_q;
}

inline std::map<int, EhCurve> load_eh_curves(std::istream& in, int k_segments = 6) {
    std::map<int, EhCurve> curves;
    for (auto& [q, pts] : parse_eh_dataset(in))
        curves.emplace(q, fit_piecewise(std::move(pts), k_segments, q));
    return curves;
}

inline std::map<int, EhCurve> load_eh_curves_file(const std::string& path,
                                                  int k_segments = 6) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open EH dataset: " + path);
    return load_eh_curves(in, k_segments);
}

} // namespace swipt
