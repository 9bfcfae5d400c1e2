// Mixed-timescale adaptive mode switching: per-block (rho, Q) selection under
// the self-powering constraint, threshold labelling on a sliding window,
// fixed / exhaustive-search / learned controllers and episode simulation.
#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>
#include <vector>

#include "swipt/analysis.hpp"
#include "swipt/harvest.hpp"
#include "swipt/neuralnet.hpp"
#include "swipt/units.hpp"

namespace swipt {

struct ModeDecision {
    double rho = 0.0;      // 0 (multi-tone) or rho_fs (single-tone)
    int q = 4;             // selected modulation index
    bool feasible = false; // self-powering constraint satisfied
};

// per-block record feeding the long-term optimizer
struct ControlRecord {
    double rho = 0.0;
    int q = 0;
    double p_r = 0.0;   // watts
    double p_th = 0.0;  // watts
};

// sliding window of the last W control records, zero-padded before warm-up
struct ControlState {
    int window_len = 20;
    std::deque<ControlRecord> records;

    void push(const ControlRecord& r) {
        records.push_back(r);
        while (static_cast<int>(records.size()) > window_len) records.pop_front();
    }
    bool warmed_up() const { return static_cast<int>(records.size()) == window_len; }
};

// Conditional SER tabulated on a quantized received-power grid for every
// (mode, Q) pair; outage per block is the indicator SER > ser_tag since the
// SER is deterministic given the block gain.
struct OutageTable {
    std::vector<int> q_set{4, 8, 16};
    double ser_tag = 0.01;
    double grid_lo_dbm = -60.0;
    double grid_hi_dbm = 0.0;
    double step_db = 0.5;
    // key (single-tone?, q) -> conditional SER per grid point
    std::map<std::pair<bool, int>, std::vector<double>> ser;

    int grid_size() const {
        return static_cast<int>(std::lround((grid_hi_dbm - grid_lo_dbm) / step_db)) + 1;
    }
    int index_of(double p_r) const {
        const double dbm = watt_to_dbm(std::max(p_r, 1e-30));
        const long i = std::lround((dbm - grid_lo_dbm) / step_db);
        return static_cast<int>(std::clamp(i, 0L, static_cast<long>(grid_size() - 1)));
    }
    double conditional_ser(TxMode mode, int q, double p_r) const {
        const auto it = ser.find({mode == TxMode::SingleTone, q});
        if (it == ser.end()) throw std::invalid_argument("OutageTable misses (mode, q)");
        return it->second[index_of(p_r)];
    }
    double p_out(TxMode mode, int q, double p_r) const {
        return conditional_ser(mode, q, p_r) > ser_tag ? 1.0 : 0.0;
    }
};

inline OutageTable build_outage_table(const EnvelopeCache& cache, double ser_tag = 0.01,
                                      std::vector<int> q_set = {4, 8, 16}) {
    const LinkScenario& sc = cache.scenario();
    OutageTable t;
    t.q_set = std::move(q_set);
    t.ser_tag = ser_tag;
    const double pg_pref = sc.path_gain_lin() * sc.p_ref;
    for (const bool single : {true, false}) {
        const TxMode mode = single ? TxMode::SingleTone : TxMode::MultiTone;
        for (const int q : t.q_set) {
            std::vector<double>& col = t.ser[{single, q}];
            col.resize(t.grid_size());
            for (int i = 0; i < t.grid_size(); ++i) {
                const double p_r = dbm_to_watt(t.grid_lo_dbm + i * t.step_db);
                const double h_mag = std::sqrt(p_r / pg_pref);
                col[i] = ser_analytical_conditional(cache, mode, q, h_mag);
            }
        }
    }
    return t;
}

struct EnergyLedger {
    double p_c = 10e-6;  // circuit consumption [W]
};

namespace detail {

// EH curve used by a decision: carrier-dominant single-tone harvests on the
// 1-tone curve, multi-tone on the curve of its tone count
inline const EhCurve& curve_for(const std::map<int, EhCurve>& curves, TxMode mode, int q) {
    const int key = mode == TxMode::SingleTone ? 1 : q;
    const auto it = curves.find(key);
    if (it == curves.end())
        throw std::invalid_argument("no EH curve for q=" + std::to_string(key));
    return it->second;
}

} // namespace detail

// (rho, Q) selection for one block: the mode indicator compares received power
// to the threshold; Q maximizes [1 - p_out] log2(Q) over the allowed set
// subject to harvested power >= p_c, ties toward smaller Q.
inline ModeDecision short_term_decide(double p_r, double p_th, const OutageTable& table,
                                      const std::map<int, EhCurve>& curves,
                                      const EnergyLedger& ledger, double rho_fs,
                                      double rho_r) {
    const bool single = p_r >= p_th;
    const TxMode mode = single ? TxMode::SingleTone : TxMode::MultiTone;
    ModeDecision d;
    d.rho = single ? rho_fs : 0.0;
    d.q = table.q_set.front();
    d.feasible = false;
    double best = -1.0;
    for (const int q : table.q_set) {
        const double harvested =
            harvested_power(detail::curve_for(curves, mode, q), p_r * (1.0 - rho_r));
        if (harvested < ledger.p_c) continue;
        const double objective =
            (1.0 - table.p_out(mode, q, p_r)) * std::log2(static_cast<double>(q));
        if (!d.feasible || objective > best) {
            d.feasible = true;
            d.q = q;
            best = objective;
        }
    }
    return d;
}

// expected bits per symbol of a decision; zero when infeasible
inline double decision_bits(const ModeDecision& d, const OutageTable& table, double p_r) {
    if (!d.feasible) return 0.0;
    const TxMode mode = d.rho > 0.0 ? TxMode::SingleTone : TxMode::MultiTone;
    return (1.0 - table.p_out(mode, d.q, p_r)) * std::log2(static_cast<double>(d.q));
}

inline std::vector<double> default_threshold_grid(double lo_dbm = -40.0,
                                                  double hi_dbm = 0.0, int points = 41) {
    if (points < 2) throw std::invalid_argument("threshold grid needs >= 2 points");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = dbm_to_watt(lo_dbm + (hi_dbm - lo_dbm) * i / (points - 1));
    return grid;
}

// rate-maximizing threshold over a history of received powers, evaluated
// exhaustively on the candidate grid; smallest maximizer on ties
inline double label_threshold(const std::vector<double>& history_p_r,
                              const std::vector<double>& grid, const OutageTable& table,
                              const std::map<int, EhCurve>& curves,
                              const EnergyLedger& ledger, double rho_fs, double rho_r) {
    if (history_p_r.empty()) throw std::invalid_argument("label_threshold: empty history");
    if (grid.empty()) throw std::invalid_argument("label_threshold: empty grid");
    double best_th = grid.front();
    double best_sum = -1.0;
    for (const double p_th : grid) {
        double sum = 0.0;
        for (const double p_r : history_p_r) {
            const ModeDecision d =
                short_term_decide(p_r, p_th, table, curves, ledger, rho_fs, rho_r);
            sum += decision_bits(d, table, p_r);
        }
        if (sum > best_sum + 1e-12) {
            best_sum = sum;
            best_th = p_th;
        }
    }
    return best_th;
}

enum class ControllerKind { Fixed, Exhaustive, Learned };

struct Controller {
    ControllerKind kind = ControllerKind::Fixed;
    double fixed_p_th = 0.0;          // watts, Fixed only
    const TcnModel* model = nullptr;  // Learned only

    static Controller fixed(double p_th) { return {ControllerKind::Fixed, p_th, nullptr}; }
    static Controller exhaustive() { return {ControllerKind::Exhaustive, 0.0, nullptr}; }
    static Controller learned(const TcnModel& m) {
        return {ControllerKind::Learned, 0.0, &m};
    }
};

// standardized feature window (channel-major rho, q, p_r_dbm, p_th_dbm),
// left zero-padded in standardized units before warm-up
inline std::vector<double> control_features(const ControlState& state,
                                            const FeatureScaler& scaler) {
    const int w = state.window_len;
    std::vector<double> x(static_cast<std::size_t>(4) * w, 0.0);
    const int have = static_cast<int>(state.records.size());
    const int pad = w - have;
    for (int i = 0; i < have; ++i) {
        const ControlRecord& r = state.records[i];
        const double raw[4] = {r.rho, static_cast<double>(r.q),
                               watt_to_dbm(std::max(r.p_r, 1e-30)),
                               watt_to_dbm(std::max(r.p_th, 1e-30))};
        for (int f = 0; f < 4; ++f)
            x[static_cast<std::size_t>(f) * w + pad + i] = scaler.standardize(f, raw[f]);
    }
    return x;
}

struct BlockLog {
    long v = 0;
    std::complex<double> h{0.0, 0.0};
    double p_r = 0.0;        // watts
    double p_th = 0.0;       // watts
    double rho = 0.0;
    int q = 0;
    bool feasible = false;
    double ser_cond = 0.0;   // tabulated conditional SER of the chosen pair
    double rate = 0.0;       // bit/s
    double harvested = 0.0;  // watts, audit support
};

struct EpisodeResult {
    std::vector<BlockLog> log;
    double mean_rate = 0.0;  // bit/s
};

// one control episode: channel advance -> feedback -> threshold update ->
// short-term decision -> rate accumulation
inline EpisodeResult run_episode(const EnvelopeCache& cache, const OutageTable& table,
                                 const std::map<int, EhCurve>& curves,
                                 const EnergyLedger& ledger, const Controller& controller,
                                 long blocks, RandomStream& rng,
                                 const std::vector<double>& threshold_grid =
                                     default_threshold_grid(),
                                 int window_len = 20) {
    const LinkScenario& sc = cache.scenario();
    const double pg = sc.path_gain_lin();
    const double symbol_period = sc.base.symbol_period();
    ControlState state;
    state.window_len = window_len;
    EpisodeResult res;
    res.log.reserve(blocks);
    ChannelBlock blk = init_stationary(sc.ch, rng);
    double rate_sum = 0.0;
    for (long v = 0; v < blocks; ++v) {
        const double p_r = feedback_power(blk.h, sc.p_ref, pg);
        double p_th = 0.0;
        switch (controller.kind) {
            case ControllerKind::Fixed:
                p_th = controller.fixed_p_th;
                break;
            case ControllerKind::Exhaustive:
                // per-block greedy optimum over the threshold grid: the
                // reproducible upper bound on any threshold policy
                p_th = label_threshold({p_r}, threshold_grid, table, curves, ledger,
                                       sc.base.rho_fs, sc.base.rho_r);
                break;
            case ControllerKind::Learned: {
                const TcnModel& m = *controller.model;
                const double z = m.forward(control_features(state, m.scaler));
                const double dbm = std::clamp(
                    std::clamp(m.scaler.destandardize(4, z), m.target_lo, m.target_hi),
                    watt_to_dbm(threshold_grid.front()), watt_to_dbm(threshold_grid.back()));
                p_th = dbm_to_watt(dbm);
                break;
            }
        }
        const ModeDecision d = short_term_decide(p_r, p_th, table, curves, ledger,
                                                 sc.base.rho_fs, sc.base.rho_r);
        const TxMode mode = d.rho > 0.0 ? TxMode::SingleTone : TxMode::MultiTone;
        BlockLog row;
        row.v = v;
        row.h = blk.h;
        row.p_r = p_r;
        row.p_th = p_th;
        row.rho = d.rho;
        row.q = d.q;
        row.feasible = d.feasible;
        row.ser_cond = table.conditional_ser(mode, d.q, p_r);
        row.rate = decision_bits(d, table, p_r) / symbol_period;
        row.harvested =
            d.feasible
                ? harvested_power(detail::curve_for(curves, mode, d.q), p_r * (1.0 - sc.base.rho_r))
                : 0.0;
        rate_sum += row.rate;
        res.log.push_back(row);

        state.push({d.rho, d.q, p_r, p_th});
        blk = advance(blk, sc.ch, rng);
    }
    res.mean_rate = rate_sum / static_cast<double>(blocks);
    return res;
}

// independent audit: no emitted block may claim feasibility while harvesting
// less than the circuit consumption
inline bool audit_energy_causality(const EpisodeResult& episode, const EnergyLedger& ledger) {
    for (const BlockLog& row : episode.log)
        if (row.feasible && row.harvested < ledger.p_c) return false;
    return true;
}

// supervised windows for the long-term learner, teacher = exhaustive search
// on the sliding history; only fully warmed-up windows are emitted. Features
// and labels are raw (powers in dBm) — standardize before training.
struct RawControlDataset {
    std::vector<std::vector<double>> windows;  // channel-major 4 x W, raw units
    std::vector<double> labels_dbm;
    int window_len = 20;
};

inline RawControlDataset collect_training_windows(
    const EnvelopeCache& cache, const OutageTable& table,
    const std::map<int, EhCurve>& curves, const EnergyLedger& ledger, long blocks,
    RandomStream& rng,
    const std::vector<double>& threshold_grid = default_threshold_grid(),
    int window_len = 20, int label_window = 200) {
    const EpisodeResult ep = run_episode(cache, table, curves, ledger,
                                         Controller::exhaustive(), blocks, rng,
                                         threshold_grid, window_len);
    const LinkScenario& sc = cache.scenario();
    RawControlDataset ds;
    ds.window_len = window_len;
    // the label averages over a longer trailing window than the feature
    // window; short windows make the tie-break dominate the label
    std::vector<double> hist;
    for (std::size_t v = 0; v + 1 < ep.log.size(); ++v) {
        hist.push_back(ep.log[v].p_r);
        if (static_cast<int>(hist.size()) > label_window) hist.erase(hist.begin());
        if (static_cast<int>(hist.size()) < std::max(window_len, label_window)) continue;
        // label: best threshold for the window ending at v, consumed at v+1
        const double label = label_threshold(hist, threshold_grid, table, curves, ledger,
                                             sc.base.rho_fs, sc.base.rho_r);
        std::vector<double> x(static_cast<std::size_t>(4) * window_len);
        for (int i = 0; i < window_len; ++i) {
            const BlockLog& r = ep.log[v + 1 - window_len + i];
            x[0 * window_len + i] = r.rho;
            x[1 * window_len + i] = static_cast<double>(r.q);
            x[2 * window_len + i] = watt_to_dbm(std::max(r.p_r, 1e-30));
            x[3 * window_len + i] = watt_to_dbm(std::max(r.p_th, 1e-30));
        }
        ds.windows.push_back(std::move(x));
        ds.labels_dbm.push_back(watt_to_dbm(label));
    }
    return ds;
}

// fit scaler statistics on the raw dataset and emit the standardized batch
inline SampleBatch standardize_dataset(const RawControlDataset& raw, FeatureScaler& scaler) {
    if (raw.windows.empty()) throw std::invalid_argument("empty control dataset");
    const int w = raw.window_len;
    std::vector<std::vector<double>> columns(5);
    for (const auto& x : raw.windows)
        for (int f = 0; f < 4; ++f)
            for (int i = 0; i < w; ++i)
                columns[f].push_back(x[static_cast<std::size_t>(f) * w + i]);
    columns[4] = raw.labels_dbm;
    scaler.fit(columns);
    SampleBatch batch;
    for (std::size_t s = 0; s < raw.windows.size(); ++s) {
        std::vector<double> x(raw.windows[s].size());
        for (int f = 0; f < 4; ++f)
            for (int i = 0; i < w; ++i) {
                const std::size_t idx = static_cast<std::size_t>(f) * w + i;
                x[idx] = scaler.standardize(f, raw.windows[s][idx]);
            }
        batch.inputs.push_back(std::move(x));
        batch.targets.push_back(scaler.standardize(4, raw.labels_dbm[s]));
    }
    return batch;
}

} // namespace swipt
