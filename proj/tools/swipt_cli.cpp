// Command-line driver: experiment execution, preset listing, EH-curve
// fitting, TCN training and gradient verification.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "swipt/config.hpp"
#include "swipt/harvest.hpp"
#include "swipt/neuralnet.hpp"
#include "swipt/presets.hpp"
#include "swipt/runner.hpp"

namespace {

// a config argument may be a file path or the name of an embedded preset
swipt::Config load_config(const std::string& arg) {
    if (std::filesystem::exists(arg)) return swipt::Config::parse_file(arg);
    if (const swipt::Preset* p = swipt::find_preset(arg))
        return swipt::Config::parse_string(p->text);
    throw std::runtime_error("no such config file or preset: " + arg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level simulator for unified PAPR-modulated SWIPT"};
    app.require_subcommand(1);

    std::optional<long> seed, trials, blocks;
    std::string out_dir = ".";
    app.add_option("--seed", seed, "seed override (takes precedence over the config)");
    app.add_option("--out-dir", out_dir, "directory for CSV artifacts");
    app.add_option("--trials", trials, "Monte-Carlo trials override");
    app.add_option("--blocks", blocks, "fading-block count override");

    std::string run_config;
    CLI::App* run = app.add_subcommand("run", "execute an experiment config or preset");
    run->add_option("config", run_config, "config file path or preset name")->required();

    app.add_subcommand("list-presets", "enumerate the embedded presets");

    std::string eh_file;
    int eh_segments = 6;
    CLI::App* fit = app.add_subcommand("fit-eh", "fit piecewise EH curves from a dataset");
    fit->add_option("datafile", eh_file, "CSV with rows q,p_in_dbm,p_eh_dbm")->required();
    fit->add_option("--segments", eh_segments, "piecewise segments per curve");

    std::string train_config;
    CLI::App* tr = app.add_subcommand("train-tcn", "train the threshold predictor");
    tr->add_option("config", train_config, "config file path or preset name")->required();

    app.add_subcommand("gradcheck", "verify TCN backpropagation by finite differences");

    CLI11_PARSE(app, argc, argv);

    try {
        swipt::RunOptions opts;
        opts.seed = seed;
        opts.out_dir = out_dir;
        opts.trials = trials;
        opts.blocks = blocks;

        if (run->parsed()) {
            swipt::run_experiment(load_config(run_config), opts);
        } else if (app.get_subcommand("list-presets")->parsed()) {
            for (const swipt::Preset& p : swipt::presets())
                std::cout << p.name << " - " << p.description << '\n';
        } else if (fit->parsed()) {
            const auto curves = swipt::load_eh_curves_file(eh_file, eh_segments);
            for (const auto& [q, c] : curves) {
                std::cout << "q=" << q
                          << " turn_on_dbm=" << swipt::watt_to_dbm(c.turn_on())
                          << " saturation_dbm=" << swipt::watt_to_dbm(c.saturation())
                          << " max_harvest_uw=" << 1e6 * c.max_harvest() << '\n';
            }
            const auto s = curves.find(1);
            const auto m = curves.rbegin();
            if (s != curves.end() && m->first > 1) {
                try {
                    const double x = swipt::pce_crossover(s->second, m->second);
                    std::cout << "pce_crossover(q=" << m->first
                              << " vs q=1) = " << swipt::watt_to_dbm(x) << " dBm\n";
                } catch (const std::exception& e) {
                    std::cout << "pce_crossover: " << e.what() << '\n';
                }
            }
        } else if (tr->parsed()) {
            const swipt::Config cfg = load_config(train_config);
            const long s = seed ? *seed : cfg.get_long("experiment.seed");
            const long b = blocks ? *blocks : cfg.get_long("experiment.blocks", 500);
            const auto art = swipt::detail::train_from_config(cfg, s, b);
            std::filesystem::create_directories(out_dir);
            const auto path = std::filesystem::path(out_dir) /
                              cfg.get_string("experiment.out_checkpoint",
                                             "tcn_checkpoint.txt");
            std::ofstream out(path, std::ios::binary);
            swipt::save_checkpoint(art.model, out);
            std::cout << "checkpoint written to " << path.string() << '\n';
        } else {
            // gradcheck
            swipt::TcnConfig tc;
            tc.window = 20;
            swipt::TcnModel model(tc);
            swipt::RandomStream rng(seed ? static_cast<std::uint64_t>(*seed) : 7u);
            model.init(rng);
            swipt::SampleBatch batch;
            for (int i = 0; i < 4; ++i) {
                std::vector<double> x(static_cast<std::size_t>(tc.in_features) * tc.window);
                for (auto& v : x) v = rng.gaussian();
                batch.inputs.push_back(std::move(x));
                batch.targets.push_back(rng.gaussian());
            }
            const double err = swipt::gradient_check(model, batch, rng);
            std::cout << "max relative gradient error: " << err << '\n';
            if (err >= 1e-4) {
                std::cerr << "gradient check FAILED\n";
                return 1;
            }
            std::cout << "gradient check passed\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
