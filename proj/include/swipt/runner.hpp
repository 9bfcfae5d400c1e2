// Experiment driver: builds scenarios from parsed configs, executes the named
// experiment kind (cdf / ser / outage / training / rate / smoke) and emits
// deterministic CSV artifacts.
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "swipt/analysis.hpp"
#include "swipt/config.hpp"
#include "swipt/control.hpp"
#include "swipt/eh_dataset_default.hpp"
#include "swipt/harvest.hpp"
#include "swipt/neuralnet.hpp"
#include "swipt/units.hpp"

namespace swipt {

struct RunOptions {
    std::optional<long> seed;    // overrides [experiment] seed
    std::string out_dir = ".";
    std::optional<long> trials;  // overrides [experiment] trials
    std::optional<long> blocks;  // overrides [experiment] blocks
};

namespace detail {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::ofstream open_csv(const RunOptions& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path p = std::filesystem::path(opts.out_dir) / name;
    std::ofstream out(p, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot open output file: " + p.string());
    return out;
}

} // namespace detail

// scenario assembly from the optional [signal]/[hpa]/[receiver]/[channel]
// sections on top of the reference operating point
inline LinkScenario scenario_from_config(const Config& c) {
    LinkScenario s = LinkScenario::article_defaults();
    s.base.q_total = static_cast<int>(c.get_long("signal.q_total", s.base.q_total));
    s.base.delta_f = c.get_double("signal.delta_f_hz", s.base.delta_f);
    s.base.f1_offset = c.get_double("signal.f1_offset_hz", s.base.f1_offset);
    s.base.p_dr = dbm_to_watt(c.get_double("signal.p_dr_dbm", watt_to_dbm(s.base.p_dr)));
    s.base.rho_fs = c.get_double("signal.rho_fs", s.base.rho_fs);
    s.base.rho_r = c.get_double("signal.rho_r", s.base.rho_r);
    s.grid = default_grid(s.base);
    if (c.has("signal.samples_per_symbol"))
        s.grid.samples_per_symbol =
            static_cast<int>(c.get_long("signal.samples_per_symbol"));
    s.hpa.gain_v = std::sqrt(db_to_lin(c.get_double("hpa.gain_db", 25.0)));
    s.hpa.a_sat = std::sqrt(dbm_to_watt(c.get_double("hpa.a_sat_dbm", 10.0)));
    s.hpa.beta = c.get_double("hpa.beta", 2.0);
    s.rx.rho_r = s.base.rho_r;
    s.rx.sigma_ps_sq = dbm_to_watt(c.get_double("receiver.sigma_ps_dbm", -100.0));
    s.rx.sigma_fs_sq = dbm_to_watt(c.get_double("receiver.sigma_fs_dbm", -100.0));
    s.ch.zeta = c.get_double("channel.zeta", s.ch.zeta);
    s.ch.sigma_h_sq = c.get_double("channel.sigma_h_sq", s.ch.sigma_h_sq);
    s.ch.distance_m = c.get_double("channel.distance_m", s.ch.distance_m);
    s.ch.path_exponent = c.get_double("channel.path_exponent", s.ch.path_exponent);
    s.ch.carrier_hz = c.get_double("channel.carrier_hz", s.ch.carrier_hz);
    s.p_ref = dbm_to_watt(c.get_double("signal.p_ref_dbm", watt_to_dbm(s.p_ref)));
    s.base.validate();
    s.hpa.validate();
    s.rx.validate();
    s.ch.validate();
    return s;
}

namespace detail {

inline TxMode parse_mode(const std::string& m) {
    if (m == "single") return TxMode::SingleTone;
    if (m == "multi") return TxMode::MultiTone;
    throw std::runtime_error("unknown mode '" + m + "' (want single|multi)");
}

inline std::map<int, EhCurve> curves_from_config(const Config& c) {
    const int k = static_cast<int>(c.get_long("harvest.segments", 6));
    if (c.has("harvest.dataset")) return load_eh_curves_file(c.get_string("harvest.dataset"), k);
    std::istringstream ss(kDefaultEhDataset);
    return load_eh_curves(ss, k);
}

inline EnergyLedger ledger_from_config(const Config& c) {
    EnergyLedger l;
    l.p_c = c.get_double("control.p_c_w", 10e-6);
    return l;
}

inline std::vector<int> q_set_from_config(const Config& c) {
    std::vector<int> q_set;
    for (double q : c.get_list("control.q_set", {4.0, 8.0, 16.0}))
        q_set.push_back(static_cast<int>(q));
    return q_set;
}

inline std::vector<double> grid_from_config(const Config& c) {
    return default_threshold_grid(c.get_double("control.grid_lo_dbm", -40.0),
                                  c.get_double("control.grid_hi_dbm", 0.0),
                                  static_cast<int>(c.get_long("control.grid_points", 41)));
}

// empirical-vs-analytical branch CDF sweep over tone counts
inline void run_cdf(const Config& c, const RunOptions& opts, long seed, long trials) {
    const LinkScenario sc = scenario_from_config(c);
    const EnvelopeCache cache(sc);
    const Branch branch = c.get_string("experiment.branch") == "ps" ? Branch::Ps : Branch::Fs;
    const TxMode mode = parse_mode(c.get_string("experiment.mode", "multi"));
    const double g_lo = c.get_double("sweep.gamma_lo", 1.0);
    const double g_hi = c.get_double("sweep.gamma_hi", 40.0);
    const int g_pts = static_cast<int>(c.get_long("sweep.gamma_points", 79));
    std::ofstream out = open_csv(opts, c.get_string("experiment.out"));
    out << "n_active,gamma,cdf_analytic,cdf_mc\n";
    RandomStream root(static_cast<std::uint64_t>(seed));
    int sub = 0;
    for (double n_raw : c.get_list("sweep.n_active")) {
        const int n = static_cast<int>(n_raw);
        RandomStream rng = root.substream(sub++);
        const std::vector<double> samples =
            papr_samples_monte_carlo(cache, mode, n, branch, trials, rng);
        for (int i = 0; i < g_pts; ++i) {
            const double gamma = g_lo + (g_hi - g_lo) * i / (g_pts - 1);
            const double fa = papr_cdf_rayleigh(cache, mode, n, branch, gamma);
            out << n << ',' << csv_num(gamma) << ',' << csv_num(fa) << ','
                << csv_num(empirical_cdf(samples, gamma)) << '\n';
        }
        std::cout << "cdf n=" << n << " trials=" << trials << " done\n";
    }
}

inline void run_ser(const Config& c, const RunOptions& opts, long seed, long trials) {
    const std::string mode_key = c.get_string("experiment.mode", "both");
    std::vector<TxMode> modes;
    if (mode_key == "both")
        modes = {TxMode::SingleTone, TxMode::MultiTone};
    else
        modes = {parse_mode(mode_key)};
    std::ofstream out = open_csv(opts, c.get_string("experiment.out"));
    out << "p_dr_dbm,mode,q,ser_mc,ser_analytic,ci_halfwidth\n";
    RandomStream root(static_cast<std::uint64_t>(seed));
    int sub = 0;
    for (double p_dr_dbm : c.get_list("sweep.p_dr_dbm")) {
        LinkScenario sc = scenario_from_config(c);
        sc.base.p_dr = dbm_to_watt(p_dr_dbm);
        const EnvelopeCache cache(sc);
        for (TxMode mode : modes) {
            RandomStream rng = root.substream(sub++);
            const SerEstimate mc =
                ser_monte_carlo(cache, mode, sc.base.q_total, trials, rng);
            const double an = ser_analytical_rayleigh(cache, mode, sc.base.q_total);
            out << csv_num(p_dr_dbm) << ','
                << (mode == TxMode::SingleTone ? "single" : "multi") << ','
                << sc.base.q_total << ',' << csv_num(mc.ser) << ',' << csv_num(an) << ','
                << csv_num(mc.ci_halfwidth) << '\n';
            std::cout << "ser p_dr=" << p_dr_dbm << "dBm "
                      << (mode == TxMode::SingleTone ? "single" : "multi")
                      << " mc=" << mc.ser << " analytic=" << an << '\n';
        }
    }
}

inline void run_outage(const Config& c, const RunOptions& opts, long seed, long blocks) {
    std::ofstream out = open_csv(opts, c.get_string("experiment.out"));
    out << "p_dr_dbm,zeta,mode,q,p_out\n";
    const double ser_tag = c.get_double("control.ser_tag", 0.01);
    RandomStream root(static_cast<std::uint64_t>(seed));
    int point = 0;
    for (double p_dr_dbm : c.get_list("sweep.p_dr_dbm")) {
        for (double zeta : c.get_list("sweep.zeta", {0.99})) {
            // matched channel realizations across modes at the same point
            for (TxMode mode : {TxMode::SingleTone, TxMode::MultiTone}) {
                LinkScenario sc = scenario_from_config(c);
                sc.base.p_dr = dbm_to_watt(p_dr_dbm);
                sc.ch.zeta = zeta;
                const EnvelopeCache cache(sc);
                RandomStream rng = root.substream(point);
                const double p_out = outage_probability(cache, mode, sc.base.q_total,
                                                        ser_tag, blocks, rng);
                out << csv_num(p_dr_dbm) << ',' << csv_num(zeta) << ','
                    << (mode == TxMode::SingleTone ? "single" : "multi") << ','
                    << sc.base.q_total << ',' << csv_num(p_out) << '\n';
                std::cout << "outage p_dr=" << p_dr_dbm << " zeta=" << zeta << ' '
                          << (mode == TxMode::SingleTone ? "single" : "multi")
                          << " p_out=" << p_out << '\n';
            }
            ++point;
        }
    }
}

struct TrainingArtifacts {
    TcnModel model;
    std::vector<double> loss_history;
    std::vector<double> sweep_dbm;
    std::vector<double> mean_label_dbm;  // per sweep point
};

// teacher-episode dataset across the drive sweep, pooled, then one TCN fit
inline TrainingArtifacts train_from_config(const Config& c, long seed, long blocks) {
    const EnergyLedger ledger = ledger_from_config(c);
    const std::map<int, EhCurve> curves = curves_from_config(c);
    const std::vector<double> grid = grid_from_config(c);
    const std::vector<int> q_set = q_set_from_config(c);
    const double ser_tag = c.get_double("control.ser_tag", 0.01);
    const int window = static_cast<int>(c.get_long("control.window", 20));

    TrainingArtifacts art;
    RandomStream root(static_cast<std::uint64_t>(seed));
    RawControlDataset pooled;
    pooled.window_len = window;
    int point = 0;
    for (double p_dr_dbm : c.get_list("sweep.p_dr_dbm")) {
        LinkScenario sc = scenario_from_config(c);
        sc.base.p_dr = dbm_to_watt(p_dr_dbm);
        const EnvelopeCache cache(sc);
        const OutageTable table = build_outage_table(cache, ser_tag, q_set);
        RandomStream rng = root.substream(point++);
        const RawControlDataset ds = collect_training_windows(
            cache, table, curves, ledger, blocks, rng, grid, window,
            static_cast<int>(c.get_long("control.label_window", 200)));
        double mean_label = 0.0;
        for (double l : ds.labels_dbm) mean_label += l;
        mean_label /= static_cast<double>(ds.labels_dbm.size());
        art.sweep_dbm.push_back(p_dr_dbm);
        art.mean_label_dbm.push_back(mean_label);
        pooled.windows.insert(pooled.windows.end(), ds.windows.begin(), ds.windows.end());
        pooled.labels_dbm.insert(pooled.labels_dbm.end(), ds.labels_dbm.begin(),
                                 ds.labels_dbm.end());
        std::cout << "train data p_dr=" << p_dr_dbm << "dBm windows=" << ds.windows.size()
                  << " mean_label=" << mean_label << "dBm\n";
    }

    TcnConfig tc;
    tc.window = window;
    tc.channels = static_cast<int>(c.get_long("tcn.channels", 16));
    tc.epochs = static_cast<int>(c.get_long("tcn.epochs", 15));
    tc.learning_rate = c.get_double("tcn.learning_rate", 1e-2);
    tc.batch_size = static_cast<int>(c.get_long("tcn.batch", 64));
    art.model = TcnModel(tc);
    RandomStream init_rng = root.substream(1000);
    art.model.init(init_rng);
    art.model.target_lo = *std::min_element(pooled.labels_dbm.begin(), pooled.labels_dbm.end());
    art.model.target_hi = *std::max_element(pooled.labels_dbm.begin(), pooled.labels_dbm.end());
    const SampleBatch batch = standardize_dataset(pooled, art.model.scaler);
    RandomStream train_rng = root.substream(1001);
    art.loss_history = train(art.model, batch, train_rng);
    std::cout << "training done, final epoch mse=" << art.loss_history.back() << '\n';
    return art;
}

inline void run_training(const Config& c, const RunOptions& opts, long seed, long blocks) {
    const TrainingArtifacts art = train_from_config(c, seed, blocks);
    std::ofstream labels = open_csv(opts, c.get_string("experiment.out_labels",
                                                       "training_labels.csv"));
    labels << "p_dr_dbm,mean_label_dbm\n";
    for (std::size_t i = 0; i < art.sweep_dbm.size(); ++i)
        labels << csv_num(art.sweep_dbm[i]) << ',' << csv_num(art.mean_label_dbm[i]) << '\n';
    std::ofstream loss = open_csv(opts, c.get_string("experiment.out_loss",
                                                     "training_loss.csv"));
    loss << "epoch,mse\n";
    for (std::size_t e = 0; e < art.loss_history.size(); ++e)
        loss << e + 1 << ',' << csv_num(art.loss_history[e]) << '\n';
    std::ofstream ckpt = open_csv(opts, c.get_string("experiment.out_checkpoint",
                                                     "tcn_checkpoint.txt"));
    save_checkpoint(art.model, ckpt);
}

inline void run_rate(const Config& c, const RunOptions& opts, long seed, long blocks) {
    const long train_blocks = c.get_long("tcn.train_blocks", 600);
    const TrainingArtifacts art = train_from_config(c, seed, train_blocks);
    const EnergyLedger ledger = ledger_from_config(c);
    const std::map<int, EhCurve> curves = curves_from_config(c);
    const std::vector<double> grid = grid_from_config(c);
    const std::vector<int> q_set = q_set_from_config(c);
    const double ser_tag = c.get_double("control.ser_tag", 0.01);
    const int window = static_cast<int>(c.get_long("control.window", 20));
    const double fixed_th = dbm_to_watt(c.get_double("control.fixed_th_dbm", -6.0));

    std::ofstream out = open_csv(opts, c.get_string("experiment.out"));
    out << "p_dr_dbm,rate_fixed,rate_exhaustive,rate_learned\n";
    RandomStream root(static_cast<std::uint64_t>(seed + 1));
    int point = 0;
    for (double p_dr_dbm : c.get_list("sweep.p_dr_dbm")) {
        LinkScenario sc = scenario_from_config(c);
        sc.base.p_dr = dbm_to_watt(p_dr_dbm);
        const EnvelopeCache cache(sc);
        const OutageTable table = build_outage_table(cache, ser_tag, q_set);
        double rates[3];
        const Controller ctls[3] = {Controller::fixed(fixed_th), Controller::exhaustive(),
                                    Controller::learned(art.model)};
        for (int k = 0; k < 3; ++k) {
            // matched channel seed across controllers at each sweep point
            RandomStream rng = root.substream(point);
            const EpisodeResult ep = run_episode(cache, table, curves, ledger, ctls[k],
                                                 blocks, rng, grid, window);
            rates[k] = ep.mean_rate;
        }
        ++point;
        out << csv_num(p_dr_dbm) << ',' << csv_num(rates[0]) << ',' << csv_num(rates[1])
            << ',' << csv_num(rates[2]) << '\n';
        std::cout << "rate p_dr=" << p_dr_dbm << "dBm fixed=" << rates[0]
                  << " exhaustive=" << rates[1] << " learned=" << rates[2] << '\n';
    }
}

// fast end-to-end smoke covering every subsystem
inline void run_smoke(const Config& c, const RunOptions& opts, long seed, long trials,
                      long blocks) {
    LinkScenario sc = scenario_from_config(c);
    const EnvelopeCache cache(sc);
    RandomStream root(static_cast<std::uint64_t>(seed));
    std::ofstream out = open_csv(opts, c.get_string("experiment.out", "smoke.csv"));
    out << "metric,value\n";

    RandomStream rng_ser = root.substream(0);
    const SerEstimate mc = ser_monte_carlo(cache, TxMode::MultiTone, sc.base.q_total,
                                           trials, rng_ser);
    out << "ser_mc," << csv_num(mc.ser) << '\n';
    out << "ser_analytic,"
        << csv_num(ser_analytical_rayleigh(cache, TxMode::MultiTone, sc.base.q_total))
        << '\n';

    const EnergyLedger ledger = ledger_from_config(c);
    const std::map<int, EhCurve> curves = curves_from_config(c);
    const std::vector<int> q_set = q_set_from_config(c);
    const OutageTable table =
        build_outage_table(cache, c.get_double("control.ser_tag", 0.01), q_set);
    RandomStream rng_ep = root.substream(1);
    const EpisodeResult ep = run_episode(cache, table, curves, ledger,
                                         Controller::exhaustive(), blocks, rng_ep);
    out << "mean_rate," << csv_num(ep.mean_rate) << '\n';
    out << "energy_causal," << (audit_energy_causality(ep, ledger) ? 1 : 0) << '\n';

    TcnConfig tc;
    tc.window = 8;
    tc.channels = 4;
    tc.dilations = {1, 2};
    TcnModel model(tc);
    RandomStream rng_nn = root.substream(2);
    model.init(rng_nn);
    SampleBatch batch;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> x(static_cast<std::size_t>(tc.in_features) * tc.window);
        for (auto& v : x) v = rng_nn.gaussian();
        batch.inputs.push_back(std::move(x));
        batch.targets.push_back(rng_nn.gaussian());
    }
    out << "gradcheck_max_rel_err," << csv_num(gradient_check(model, batch, rng_nn)) << '\n';
    std::cout << "smoke done: ser_mc=" << mc.ser << " mean_rate=" << ep.mean_rate << '\n';
}

} // namespace detail

inline void run_experiment(const Config& c, const RunOptions& opts) {
    const long seed = opts.seed ? *opts.seed : c.get_long("experiment.seed");
    const long trials = opts.trials ? *opts.trials : c.get_long("experiment.trials", 4000);
    const long blocks = opts.blocks ? *opts.blocks : c.get_long("experiment.blocks", 2000);
    const std::string kind = c.get_string("experiment.kind");
    if (kind == "cdf")
        detail::run_cdf(c, opts, seed, trials);
    else if (kind == "ser")
        detail::run_ser(c, opts, seed, trials);
    else if (kind == "outage")
        detail::run_outage(c, opts, seed, blocks);
    else if (kind == "training")
        detail::run_training(c, opts, seed, blocks);
    else if (kind == "rate")
        detail::run_rate(c, opts, seed, blocks);
    else if (kind == "smoke")
        detail::run_smoke(c, opts, seed, trials, blocks);
    else
        throw std::runtime_error("unknown experiment kind '" + kind + "'");
}

} // namespace swipt
