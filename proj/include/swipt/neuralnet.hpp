// From-scratch temporal convolutional network for sequence regression:
// dilated causal 1-D convolutions, residual blocks with optional 1x1
// projection, forward/backward passes, minibatch-SGD training and a
// finite-difference gradient oracle.
//
// Sequences are stored channel-major: value(c, t) = data[c * len + t].
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swipt/random.hpp"

namespace swipt {

struct TcnConfig {
    int filter_size = 2;                    // k
    std::vector<int> dilations = {1, 2, 4, 8};
    int channels = 16;                      // hidden channels per layer
    int in_features = 4;
    int window = 20;                        // sequence length W
    double learning_rate = 1e-2;
    double momentum = 0.0;
    int epochs = 15;
    int batch_size = 64;

    int receptive_field() const {
        const int sum_d = std::accumulate(dilations.begin(), dilations.end(), 0);
        return 1 + (filter_size - 1) * sum_d;
    }

    void validate() const {
        if (filter_size < 2) throw std::invalid_argument("filter_size must be >= 2");
        if (dilations.empty()) throw std::invalid_argument("need at least one dilation");
        for (int d : dilations)
            if (d < 1) throw std::invalid_argument("dilations must be >= 1");
        if (channels < 1 || in_features < 1 || window < 1 || batch_size < 1)
            throw std::invalid_argument("invalid TcnConfig");
    }
};

// z-score standardization with statistics frozen at fit time
struct FeatureScaler {
    std::vector<double> mean, stddev;  // per feature; last entry is the target

    void fit(const std::vector<std::vector<double>>& columns) {
        mean.clear();
        stddev.clear();
        for (const auto& col : columns) {
            double m = 0.0;
            for (double v : col) m += v;
            m /= static_cast<double>(col.size());
            double var = 0.0;
            for (double v : col) var += (v - m) * (v - m);
            var /= static_cast<double>(col.size());
            mean.push_back(m);
            stddev.push_back(std::sqrt(std::max(var, 1e-12)));
        }
    }

    double standardize(int idx, double v) const { return (v - mean[idx]) / stddev[idx]; }
    double destandardize(int idx, double z) const { return mean[idx] + z * stddev[idx]; }
};

// one training/inference sample: features [in_features][window] plus a
// scalar threshold label for the window's final position
struct SampleBatch {
    std::vector<std::vector<double>> inputs;  // each: in_features * window, channel-major
    std::vector<double> targets;
};

// Standalone dilated causal convolution on a multichannel sequence:
// out(o, t) = b(o) + sum_i sum_k w(o, i, k) x(i, t - d*k), zero-padded left.
inline std::vector<double> dilated_causal_conv(const std::vector<double>& x, int in_ch,
                                               int len, const std::vector<double>& w,
                                               int out_ch, int k,
                                               const std::vector<double>& bias, int d) {
    if (d < 1) throw std::invalid_argument("dilation must be >= 1");
    if (static_cast<int>(x.size()) != in_ch * len ||
        static_cast<int>(w.size()) != out_ch * in_ch * k ||
        static_cast<int>(bias.size()) != out_ch)
        throw std::invalid_argument("dilated_causal_conv: shape mismatch");
    std::vector<double> out(static_cast<std::size_t>(out_ch) * len);
    for (int o = 0; o < out_ch; ++o) {
        for (int t = 0; t < len; ++t) {
            double acc = bias[o];
            for (int i = 0; i < in_ch; ++i) {
                for (int kk = 0; kk < k; ++kk) {
                    const int src = t - d * kk;
                    if (src < 0) continue;
                    acc += w[(o * in_ch + i) * k + kk] * x[i * len + src];
                }
            }
            out[o * len + t] = acc;
        }
    }
    return out;
}

// single-channel convenience overload (filter f, f[0] on the current sample)
inline std::vector<double> dilated_causal_conv(const std::vector<double>& x,
                                               const std::vector<double>& f, int d) {
    return dilated_causal_conv(x, 1, static_cast<int>(x.size()), f, 1,
                               static_cast<int>(f.size()), {0.0}, d);
}

class TcnModel {
public:
    TcnConfig config;
    std::vector<double> params;  // flat parameter vector theta
    FeatureScaler scaler;        // in_features feature stats + target stats at the back
    // destandardized output clip range, set from the training-label extremes;
    // keeps closed-loop inference from extrapolating outside the label support
    double target_lo = -1e300;
    double target_hi = 1e300;

    TcnModel() = default;

    explicit TcnModel(const TcnConfig& cfg) : config(cfg) {
        config.validate();
        layout();
        params.assign(total_params_, 0.0);
    }

    // fan-in scaled uniform init
    void init(RandomStream& rng) {
        std::size_t pos = 0;
        for (const Block& b : blocks_) {
            init_range(rng, b.w1, b.in_ch * config.filter_size);
            init_range(rng, b.b1, b.in_ch * config.filter_size);
            init_range(rng, b.w2, b.out_ch * config.filter_size);
            init_range(rng, b.b2, b.out_ch * config.filter_size);
            if (b.has_proj) {
                init_range(rng, b.proj, b.in_ch);
                init_range(rng, b.proj_b, b.in_ch);
            }
        }
        init_range(rng, head_w_, config.channels);
        init_range(rng, head_b_, config.channels);
        (void)pos;
    }

    std::size_t parameter_count() const { return total_params_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }

    // full output sequence for one sample (length = window)
    std::vector<double> forward_seq(const std::vector<double>& x) const {
        Caches c;
        return forward_internal(x, c, false);
    }

    // last-position regression output
    double forward(const std::vector<double>& x) const {
        return forward_seq(x).back();
    }

    std::vector<double> forward_batch(const SampleBatch& batch) const {
        std::vector<double> out;
        out.reserve(batch.inputs.size());
        for (const auto& x : batch.inputs) out.push_back(forward(x));
        return out;
    }

    // gradient of mean((y - yhat)^2) over the batch w.r.t. all parameters;
    // returns the batch loss
    double loss_and_gradient(const SampleBatch& batch, std::vector<double>& grad) const {
        grad.assign(total_params_, 0.0);
        const double inv_n = 1.0 / static_cast<double>(batch.inputs.size());
        double loss = 0.0;
        for (std::size_t s = 0; s < batch.inputs.size(); ++s) {
            Caches c;
            const std::vector<double> out = forward_internal(batch.inputs[s], c, true);
            const double resid = out.back() - batch.targets[s];
            loss += resid * resid * inv_n;
            backward_internal(batch.inputs[s], c, 2.0 * resid * inv_n, grad);
        }
        return loss;
    }

private:
    struct Range {
        std::size_t off = 0, size = 0;
    };
    struct Block {
        int in_ch = 0, out_ch = 0, dilation = 1;
        bool has_proj = false;
        Range w1, b1, w2, b2, proj, proj_b;
    };

    std::vector<Block> blocks_;
    Range head_w_, head_b_;
    std::size_t total_params_ = 0;

    Range alloc(std::size_t n) {
        Range r{total_params_, n};
        total_params_ += n;
        return r;
    }

    void layout() {
        total_params_ = 0;
        blocks_.clear();
        const int k = config.filter_size;
        const int ch = config.channels;
        int in_ch = config.in_features;
        for (int d : config.dilations) {
            Block b;
            b.in_ch = in_ch;
            b.out_ch = ch;
            b.dilation = d;
            b.w1 = alloc(static_cast<std::size_t>(ch) * in_ch * k);
            b.b1 = alloc(ch);
            b.w2 = alloc(static_cast<std::size_t>(ch) * ch * k);
            b.b2 = alloc(ch);
            b.has_proj = (in_ch != ch);
            if (b.has_proj) {
                b.proj = alloc(static_cast<std::size_t>(ch) * in_ch);
                b.proj_b = alloc(ch);
            }
            blocks_.push_back(b);
            in_ch = ch;
        }
        head_w_ = alloc(ch);
        head_b_ = alloc(1);
    }

    void init_range(RandomStream& rng, const Range& r, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(std::max(fan_in, 1)));
        for (std::size_t i = 0; i < r.size; ++i)
            params[r.off + i] = bound * (2.0 * rng.uniform() - 1.0);
    }

    struct Caches {
        // per block: input, z1 (pre-relu), a1, preact (z2 + residual)
        std::vector<std::vector<double>> input, z1, a1, preact;
        std::vector<double> top;  // final block output feeding the head
    };

    void conv_fwd(const double* x, int in_ch, const Range& w, const Range& b, int out_ch,
                  int d, double* out) const {
        const int len = config.window;
        const int k = config.filter_size;
        for (int o = 0; o < out_ch; ++o) {
            for (int t = 0; t < len; ++t) {
                double acc = params[b.off + o];
                for (int i = 0; i < in_ch; ++i) {
                    const double* xi = x + static_cast<std::size_t>(i) * len;
                    const double* wo = &params[w.off + (static_cast<std::size_t>(o) * in_ch + i) * k];
                    for (int kk = 0; kk < k; ++kk) {
                        const int src = t - d * kk;
                        if (src < 0) break;  // src only decreases with kk
                        acc += wo[kk] * xi[src];
                    }
                }
                out[static_cast<std::size_t>(o) * len + t] = acc;
            }
        }
    }

    void conv_bwd(const double* x, int in_ch, const Range& w, const Range& b, int out_ch,
                  int d, const double* dz, double* dx, std::vector<double>& grad) const {
        const int len = config.window;
        const int k = config.filter_size;
        for (int o = 0; o < out_ch; ++o) {
            const double* dzo = dz + static_cast<std::size_t>(o) * len;
            double db = 0.0;
            for (int t = 0; t < len; ++t) db += dzo[t];
            grad[b.off + o] += db;
            for (int i = 0; i < in_ch; ++i) {
                const double* xi = x + static_cast<std::size_t>(i) * len;
                double* dxi = dx ? dx + static_cast<std::size_t>(i) * len : nullptr;
                const std::size_t wbase = w.off + (static_cast<std::size_t>(o) * in_ch + i) * k;
                for (int kk = 0; kk < k; ++kk) {
                    const double wv = params[wbase + kk];
                    double dw = 0.0;
                    for (int t = d * kk; t < len; ++t) {
                        const int src = t - d * kk;
                        dw += dzo[t] * xi[src];
                        if (dxi) dxi[src] += wv * dzo[t];
                    }
                    grad[wbase + kk] += dw;
                }
            }
        }
    }

    std::vector<double> forward_internal(const std::vector<double>& x, Caches& c,
                                         bool keep) const {
        const int len = config.window;
        if (static_cast<int>(x.size()) != config.in_features * len)
            throw std::invalid_argument("input size does not match in_features * window");
        std::vector<double> cur = x;
        for (const Block& b : blocks_) {
            std::vector<double> z1(static_cast<std::size_t>(b.out_ch) * len);
            conv_fwd(cur.data(), b.in_ch, b.w1, b.b1, b.out_ch, b.dilation, z1.data());
            std::vector<double> a1 = z1;
            for (double& v : a1) v = v > 0.0 ? v : 0.0;
            std::vector<double> pre(static_cast<std::size_t>(b.out_ch) * len);
            conv_fwd(a1.data(), b.out_ch, b.w2, b.b2, b.out_ch, b.dilation, pre.data());
            if (b.has_proj) {
                for (int o = 0; o < b.out_ch; ++o)
                    for (int t = 0; t < len; ++t) {
                        double r = params[b.proj_b.off + o];
                        for (int i = 0; i < b.in_ch; ++i)
                            r += params[b.proj.off + static_cast<std::size_t>(o) * b.in_ch + i] *
                                 cur[static_cast<std::size_t>(i) * len + t];
                        pre[static_cast<std::size_t>(o) * len + t] += r;
                    }
            } else {
                for (std::size_t i = 0; i < pre.size(); ++i) pre[i] += cur[i];
            }
            std::vector<double> out = pre;
            for (double& v : out) v = v > 0.0 ? v : 0.0;
            if (keep) {
                c.input.push_back(std::move(cur));
                c.z1.push_back(std::move(z1));
                c.a1.push_back(std::move(a1));
                c.preact.push_back(std::move(pre));
            }
            cur = std::move(out);
        }
        if (keep) c.top = cur;
        // identity-activation regression head on every position
        std::vector<double> y(len);
        for (int t = 0; t < len; ++t) {
            double acc = params[head_b_.off];
            for (int o = 0; o < config.channels; ++o)
                acc += params[head_w_.off + o] * cur[static_cast<std::size_t>(o) * len + t];
            y[t] = acc;
        }
        return y;
    }

    // dy_last: d(loss)/d(output at the final position)
    void backward_internal(const std::vector<double>& x, const Caches& c, double dy_last,
                           std::vector<double>& grad) const {
        const int len = config.window;
        const int ch = config.channels;
        std::vector<double> dcur(static_cast<std::size_t>(ch) * len, 0.0);
        for (int o = 0; o < ch; ++o) {
            grad[head_w_.off + o] += dy_last * c.top[static_cast<std::size_t>(o) * len + len - 1];
            dcur[static_cast<std::size_t>(o) * len + len - 1] = dy_last * params[head_w_.off + o];
        }
        grad[head_b_.off] += dy_last;

        for (int bi = static_cast<int>(blocks_.size()) - 1; bi >= 0; --bi) {
            const Block& b = blocks_[bi];
            const std::vector<double>& input = c.input[bi];
            // through final relu
            std::vector<double> dpre = dcur;
            for (std::size_t i = 0; i < dpre.size(); ++i)
                if (c.preact[bi][i] <= 0.0) dpre[i] = 0.0;
            // residual path
            std::vector<double> dinput(input.size(), 0.0);
            if (b.has_proj) {
                for (int o = 0; o < b.out_ch; ++o) {
                    double dpb = 0.0;
                    for (int t = 0; t < len; ++t) {
                        const double dv = dpre[static_cast<std::size_t>(o) * len + t];
                        dpb += dv;
                        for (int i = 0; i < b.in_ch; ++i) {
                            grad[b.proj.off + static_cast<std::size_t>(o) * b.in_ch + i] +=
                                dv * input[static_cast<std::size_t>(i) * len + t];
                            dinput[static_cast<std::size_t>(i) * len + t] +=
                                dv * params[b.proj.off + static_cast<std::size_t>(o) * b.in_ch + i];
                        }
                    }
                    grad[b.proj_b.off + o] += dpb;
                }
            } else {
                for (std::size_t i = 0; i < dpre.size(); ++i) dinput[i] += dpre[i];
            }
            // main path: conv2 -> relu -> conv1
            std::vector<double> da1(c.a1[bi].size(), 0.0);
            conv_bwd(c.a1[bi].data(), b.out_ch, b.w2, b.b2, b.out_ch, b.dilation,
                     dpre.data(), da1.data(), grad);
            for (std::size_t i = 0; i < da1.size(); ++i)
                if (c.z1[bi][i] <= 0.0) da1[i] = 0.0;
            conv_bwd(input.data(), b.in_ch, b.w1, b.b1, b.out_ch, b.dilation, da1.data(),
                     bi > 0 ? dinput.data() : nullptr, grad);
            if (bi == 0) {
                // gradient w.r.t. the network input is discarded, but the
                // conv1 input-gradient still had to skip writing into x
                (void)x;
            } else {
                // dinput accumulated both residual and conv1 contributions
            }
            dcur = std::move(dinput);
        }
    }
};

inline double mse_loss(const std::vector<double>& targets,
                       const std::vector<double>& predictions) {
    if (targets.size() != predictions.size() || targets.empty())
        throw std::invalid_argument("mse_loss: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double d = targets[i] - predictions[i];
        acc += d * d;
    }
    return acc / static_cast<double>(targets.size());
}

// minibatch SGD on the last-position MSE; returns per-epoch loss history
inline std::vector<double> train(TcnModel& model, const SampleBatch& data,
                                 RandomStream& rng) {
    if (data.inputs.empty() || data.inputs.size() != data.targets.size())
        throw std::invalid_argument("train: empty or mismatched dataset");
    const TcnConfig& cfg = model.config;
    std::vector<std::size_t> order(data.inputs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> history;
    std::vector<double> grad, velocity;
    if (cfg.momentum > 0.0) velocity.assign(model.parameter_count(), 0.0);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with the explicit stream
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_int(0, static_cast<int>(i) - 1)]);
        double epoch_loss = 0.0;
        long epoch_count = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            SampleBatch mb;
            for (std::size_t i = start;
                 i < std::min(order.size(), start + cfg.batch_size); ++i) {
                mb.inputs.push_back(data.inputs[order[i]]);
                mb.targets.push_back(data.targets[order[i]]);
            }
            const double loss = model.loss_and_gradient(mb, grad);
            if (!std::isfinite(loss))
                throw std::runtime_error("train: loss diverged (NaN/Inf) at epoch " +
                                         std::to_string(epoch));
            epoch_loss += loss * static_cast<double>(mb.inputs.size());
            epoch_count += static_cast<long>(mb.inputs.size());
            if (cfg.momentum > 0.0) {
                for (std::size_t i = 0; i < grad.size(); ++i) {
                    velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * grad[i];
                    model.params[i] += velocity[i];
                }
            } else {
                for (std::size_t i = 0; i < grad.size(); ++i)
                    model.params[i] -= cfg.learning_rate * grad[i];
            }
        }
        for (double p : model.params)
            if (!std::isfinite(p)) throw std::runtime_error("train: parameters diverged");
        history.push_back(epoch_loss / static_cast<double>(epoch_count));
    }
    return history;
}

// central finite differences against the analytic gradient on a random
// parameter subset; returns the max relative error
inline double gradient_check(TcnModel& model, const SampleBatch& batch, RandomStream& rng,
                             int subset = 100, double step = 1e-5) {
    std::vector<double> grad;
    model.loss_and_gradient(batch, grad);
    const int n = static_cast<int>(model.parameter_count());
    double max_err = 0.0;
    for (int probe = 0; probe < subset; ++probe) {
        const int idx = rng.uniform_int(0, n - 1);
        const double saved = model.params[idx];
        std::vector<double> scratch;
        model.params[idx] = saved + step;
        const double lp = model.loss_and_gradient(batch, scratch);
        model.params[idx] = saved - step;
        const double lm = model.loss_and_gradient(batch, scratch);
        model.params[idx] = saved;
        const double numeric = (lp - lm) / (2.0 * step);
        const double denom = std::abs(grad[idx]) + std::abs(numeric);
        if (denom < 1e-10) continue;
        max_err = std::max(max_err, std::abs(grad[idx] - numeric) / std::max(denom, 1.0));
    }
    return max_err;
}

// versioned text checkpoint: config echo, scaler statistics, flat parameters
inline void save_checkpoint(const TcnModel& model, std::ostream& out) {
    out << "tcn-checkpoint v1\n";
    const TcnConfig& c = model.config;
    out << c.filter_size << ' ' << c.channels << ' ' << c.in_features << ' ' << c.window
        << ' ' << c.dilations.size();
    for (int d : c.dilations) out << ' ' << d;
    out << '\n';
    out.precision(17);
    out << model.scaler.mean.size();
    for (double m : model.scaler.mean) out << ' ' << m;
    for (double s : model.scaler.stddev) out << ' ' << s;
    out << '\n' << model.target_lo << ' ' << model.target_hi;
    out << '\n' << model.params.size();
    for (double p : model.params) out << ' ' << p;
    out << '\n';
}

inline TcnModel load_checkpoint(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (magic != "tcn-checkpoint" || version != "v1")
        throw std::invalid_argument("not a tcn checkpoint");
    TcnConfig cfg;
    std::size_t ndil = 0;
    in >> cfg.filter_size >> cfg.channels >> cfg.in_features >> cfg.window >> ndil;
    cfg.dilations.resize(ndil);
    for (auto& d : cfg.dilations) in >> d;
    TcnModel model(cfg);
    std::size_t nstats = 0;
    in >> nstats;
    model.scaler.mean.resize(nstats);
    model.scaler.stddev.resize(nstats);
    for (auto& m : model.scaler.mean) in >> m;
    for (auto& s : model.scaler.stddev) in >> s;
    in >> model.target_lo >> model.target_hi;
    std::size_t nparams = 0;
    in >> nparams;
    if (nparams != model.parameter_count())
        throw std::invalid_argument("checkpoint parameter count does not match config");
    for (auto& p : model.params) in >> p;
    if (!in) throw std::invalid_argument("truncated checkpoint");
    return model;
}

} // namespace swipt
