// Temporal convolutional network: convolution primitive, forward/backward,
// training loop, gradient oracle and checkpointing.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "swipt/neuralnet.hpp"
#include "swipt/random.hpp"

using namespace swipt;

namespace {

TcnConfig small_config() {
    TcnConfig c;
    c.filter_size = 2;
    c.dilations = {1, 2};
    c.channels = 4;
    c.in_features = 3;
    c.window = 8;
    return c;
}

SampleBatch random_batch(const TcnConfig& c, int n, RandomStream& rng) {
    SampleBatch b;
    for (int s = 0; s < n; ++s) {
        std::vector<double> x(static_cast<std::size_t>(c.in_features) * c.window);
        for (auto& v : x) v = rng.gaussian();
        b.inputs.push_back(std::move(x));
        b.targets.push_back(rng.gaussian());
    }
    return b;
}

}  // namespace

TEST_CASE("dilated causal convolution matches hand-computed values") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(dilated_causal_conv(x, {1.0, 1.0}, 2) == std::vector<double>{1.0, 2.0, 4.0, 6.0});
    CHECK(dilated_causal_conv(x, {1.0}, 1) == x);
    CHECK(dilated_causal_conv(x, {0.0, 0.0, 0.0}, 1) ==
          std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("convolution primitive rejects inconsistent shapes") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_AS(dilated_causal_conv(x, {1.0, 1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(dilated_causal_conv(x, 2, 3, {1.0, 1.0}, 1, 2, {0.0}, 1),
                    std::invalid_argument);
}

TEST_CASE("network configuration validation and receptive field") {
    TcnConfig c;
    CHECK(c.receptive_field() == 16);  // 1 + (2-1)*(1+2+4+8)
    c.filter_size = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = TcnConfig{};
    c.dilations = {};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = TcnConfig{};
    c.dilations = {1, 0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = TcnConfig{};
    c.channels = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("a zero model outputs its final bias everywhere") {
    TcnModel m(small_config());
    // parameters default to zero; the last allocated parameter is the head bias
    m.params.back() = 3.75;
    std::vector<double> x(static_cast<std::size_t>(3) * 8, 1.3);
    const auto y = m.forward_seq(x);
    REQUIRE(static_cast<int>(y.size()) == 8);
    for (double v : y) CHECK(v == Catch::Approx(3.75).margin(1e-14));
}

TEST_CASE("forward pass is deterministic and batch elements are independent") {
    TcnModel m(small_config());
    RandomStream rng(1);
    m.init(rng);
    SampleBatch b = random_batch(m.config, 3, rng);
    const auto y1 = m.forward_batch(b);
    const auto y2 = m.forward_batch(b);
    CHECK(y1 == y2);
    std::swap(b.inputs[0], b.inputs[2]);
    const auto y3 = m.forward_batch(b);
    CHECK(y3[0] == y1[2]);
    CHECK(y3[2] == y1[0]);
    CHECK(y3[1] == y1[1]);
}

TEST_CASE("outputs never depend on future input positions") {
    RandomStream rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        TcnModel m(small_config());
        m.init(rng);
        std::vector<double> x(static_cast<std::size_t>(3) * 8);
        for (auto& v : x) v = rng.gaussian();
        const auto base = m.forward_seq(x);
        const int cut = 1 + rng.uniform_int(0, 6);
        auto masked = x;
        for (int f = 0; f < 3; ++f)
            for (int t = cut; t < 8; ++t) masked[static_cast<std::size_t>(f) * 8 + t] = 0.0;
        const auto y = m.forward_seq(masked);
        for (int t = 0; t < cut; ++t) CHECK(y[t] == Catch::Approx(base[t]).margin(1e-12));
    }
}

TEST_CASE("feature scaler round-trips and guards degenerate spread") {
    FeatureScaler s;
    s.fit({{1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}});
    CHECK(s.standardize(0, 2.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.destandardize(0, s.standardize(0, 2.7)) == Catch::Approx(2.7).epsilon(1e-12));
    // constant column: stddev floored, standardization stays finite
    CHECK(std::isfinite(s.standardize(1, 5.0)));
}

TEST_CASE("mean-square error anchors") {
    CHECK(mse_loss({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK(mse_loss({0.0}, {2.0}) == 4.0);
    const double l1 = mse_loss({0.0, 0.0}, {1.0, 3.0});
    const double l2 = mse_loss({0.0, 0.0}, {2.0, 6.0});
    CHECK(l2 == Catch::Approx(4.0 * l1).epsilon(1e-12));
    CHECK_THROWS_AS(mse_loss({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(mse_loss({}, {}), std::invalid_argument);
}

TEST_CASE("analytic gradients match finite differences") {
    RandomStream rng(3);
    TcnModel m(small_config());
    m.init(rng);
    SampleBatch b = random_batch(m.config, 4, rng);
    CHECK(gradient_check(m, b, rng, 150) < 1e-4);
}

TEST_CASE("the gradient oracle flags a corrupted gradient") {
    RandomStream rng(4);
    TcnModel m(small_config());
    m.init(rng);
    SampleBatch b = random_batch(m.config, 4, rng);
    std::vector<double> grad;
    m.loss_and_gradient(b, grad);
    // find a parameter with a clearly nonzero gradient and falsify it
    std::size_t idx = 0;
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (std::abs(grad[i]) > std::abs(grad[idx])) idx = i;
    REQUIRE(std::abs(grad[idx]) > 1e-6);
    const double saved = m.params[idx];
    const double step = 1e-5;
    std::vector<double> scratch;
    m.params[idx] = saved + step;
    const double lp = m.loss_and_gradient(b, scratch);
    m.params[idx] = saved - step;
    const double lm = m.loss_and_gradient(b, scratch);
    m.params[idx] = saved;
    const double numeric = (lp - lm) / (2.0 * step);
    const double corrupted = grad[idx] * 3.0 + 1.0;
    const double rel = std::abs(corrupted - numeric) /
                       std::max(std::abs(corrupted) + std::abs(numeric), 1.0);
    CHECK(rel > 1e-2);
}

TEST_CASE("training fits a constant target almost exactly") {
    RandomStream rng(5);
    TcnConfig cfg = small_config();
    cfg.epochs = 15;
    cfg.learning_rate = 0.05;
    TcnModel m(cfg);
    m.init(rng);
    SampleBatch b = random_batch(cfg, 64, rng);
    for (double& t : b.targets) t = 0.8;
    const auto history = train(m, b, rng);
    REQUIRE(static_cast<int>(history.size()) == cfg.epochs);
    CHECK(history.back() < 0.01);
}

TEST_CASE("training recovers a planted linear teacher") {
    RandomStream rng(6);
    TcnConfig cfg = small_config();
    cfg.epochs = 15;
    cfg.learning_rate = 0.05;
    cfg.momentum = 0.9;
    cfg.batch_size = 16;
    TcnModel m(cfg);
    m.init(rng);
    SampleBatch b = random_batch(cfg, 256, rng);
    double var_acc = 0.0, mean_acc = 0.0;
    for (std::size_t s = 0; s < b.inputs.size(); ++s) {
        // teacher reads half of the last value of feature 2
        b.targets[s] = 0.5 * b.inputs[s][2 * cfg.window + cfg.window - 1];
        mean_acc += b.targets[s];
    }
    mean_acc /= static_cast<double>(b.targets.size());
    for (double t : b.targets) var_acc += (t - mean_acc) * (t - mean_acc);
    var_acc /= static_cast<double>(b.targets.size());
    const auto history = train(m, b, rng);
    CHECK(history.back() < 0.1 * var_acc);
}

TEST_CASE("training aborts on divergence instead of emitting NaN parameters") {
    RandomStream rng(7);
    TcnConfig cfg = small_config();
    cfg.learning_rate = 1e30;
    cfg.epochs = 10;
    TcnModel m(cfg);
    m.init(rng);
    SampleBatch b = random_batch(cfg, 32, rng);
    CHECK_THROWS_AS(train(m, b, rng), std::runtime_error);
}

TEST_CASE("identical seeds give bit-identical training histories") {
    auto run_once = [] {
        RandomStream rng(8);
        TcnConfig cfg = small_config();
        cfg.epochs = 5;
        TcnModel m(cfg);
        m.init(rng);
        SampleBatch b = random_batch(cfg, 40, rng);
        return train(m, b, rng);
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("a trained model reacts to its inputs") {
    RandomStream rng(9);
    TcnConfig cfg = small_config();
    cfg.epochs = 10;
    TcnModel m(cfg);
    m.init(rng);
    SampleBatch b = random_batch(cfg, 64, rng);
    for (std::size_t s = 0; s < b.inputs.size(); ++s)
        b.targets[s] = b.inputs[s][cfg.window - 1];
    train(m, b, rng);
    auto x = b.inputs[0];
    const double y0 = m.forward(x);
    x[cfg.window - 1] += 1.0;
    CHECK(std::abs(m.forward(x) - y0) > 1e-6);
}

TEST_CASE("checkpoints round-trip the full model state") {
    RandomStream rng(10);
    TcnModel m(small_config());
    m.init(rng);
    m.scaler.fit({{1.0, 2.0}, {3.0, 5.0}, {0.0, 1.0}, {2.0, 4.0}, {-30.0, -10.0}});
    m.target_lo = -35.0;
    m.target_hi = -5.0;
    std::stringstream buf;
    save_checkpoint(m, buf);
    const TcnModel r = load_checkpoint(buf);
    CHECK(r.params == m.params);
    CHECK(r.scaler.mean == m.scaler.mean);
    CHECK(r.scaler.stddev == m.scaler.stddev);
    CHECK(r.target_lo == m.target_lo);
    CHECK(r.target_hi == m.target_hi);
    CHECK(r.config.window == m.config.window);
    CHECK(r.config.dilations == m.config.dilations);

    std::vector<double> x(static_cast<std::size_t>(3) * 8);
    RandomStream rng2(11);
    for (auto& v : x) v = rng2.gaussian();
    CHECK(r.forward(x) == m.forward(x));
}

TEST_CASE("checkpoint loading rejects corrupt containers") {
    std::stringstream bad("not-a-checkpoint v1\n");
    CHECK_THROWS_AS(load_checkpoint(bad), std::invalid_argument);

    RandomStream rng(12);
    TcnModel m(small_config());
    m.init(rng);
    std::stringstream buf;
    save_checkpoint(m, buf);
    std::string text = buf.str();
    text.resize(text.size() / 2);  // truncate mid-parameters
    std::stringstream trunc(text);
    CHECK_THROWS_AS(load_checkpoint(trunc), std::invalid_argument);
}
