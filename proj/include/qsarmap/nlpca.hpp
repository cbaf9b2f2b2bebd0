#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsarmap/embedding.hpp"
#include "qsarmap/matrix.hpp"
#include "qsarmap/rng.hpp"

namespace qsarmap {

/// Autoassociative bottleneck (sandglass) network d -> h -> k -> h -> d.
/// tanh on both hidden layers, identity on the bottleneck and output. The
/// k bottleneck activations are the nonlinear principal components.
struct AutoencoderNetwork {
    std::array<std::size_t, 5> layer_sizes{};  // {d, h, k, h, d}
    Matrix w1, w2, w3, w4;                     // (h x d), (k x h), (h x k), (d x h)
    std::vector<double> b1, b2, b3, b4;

    std::size_t input_dim() const { return layer_sizes[0]; }
    std::size_t hidden_width() const { return layer_sizes[1]; }
    std::size_t bottleneck_dim() const { return layer_sizes[2]; }
};

struct TrainConfig {
    std::size_t hidden_width = 8;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t epochs = 2000;
    std::uint64_t seed = 0;
};

struct TrainTrace {
    std::vector<double> mse_per_epoch;  // mse after each epoch's update
    double final_mse = 0.0;
};

struct TrainResult {
    AutoencoderNetwork network;
    TrainTrace trace;
};

struct ForwardResult {
    std::vector<double> reconstruction;
    std::vector<double> bottleneck;
};

struct LossGradient {
    double mse = 0.0;
    AutoencoderNetwork gradients;  // same shape as the parameters
};

/// Seeded deterministic initialization: weights uniform in +-1/sqrt(fan_in),
/// biases zero. Draw order is layer by layer, row-major.
inline AutoencoderNetwork init_network(std::size_t d, std::size_t k, const TrainConfig& config) {
    if (d < 1) throw std::invalid_argument("init_network: d must be >= 1");
    if (k < 1 || k > 2) throw std::invalid_argument("init_network: k must be 1 or 2");
    if (k > d) throw std::invalid_argument("init_network: k must not exceed d");
    const std::size_t h = config.hidden_width;
    if (h < 1) throw std::invalid_argument("init_network: hidden width must be >= 1");

    AutoencoderNetwork net;
    net.layer_sizes = {d, h, k, h, d};
    net.w1 = Matrix(h, d);
    net.w2 = Matrix(k, h);
    net.w3 = Matrix(h, k);
    net.w4 = Matrix(d, h);
    net.b1.assign(h, 0.0);
    net.b2.assign(k, 0.0);
    net.b3.assign(h, 0.0);
    net.b4.assign(d, 0.0);

    Rng rng(config.seed);
    auto fill = [&rng](Matrix& w) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(w.cols()));
        for (double& value : w.values()) value = rng.uniform(-scale, scale);
    };
    fill(net.w1);
    fill(net.w2);
    fill(net.w3);
    fill(net.w4);
    return net;
}

namespace detail {

inline void affine(const Matrix& w, const std::vector<double>& b, std::span<const double> x,
                   std::vector<double>& out) {
    out.assign(w.rows(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        double s = b[r];
        for (std::size_t c = 0; c < w.cols(); ++c) s += w(r, c) * x[c];
        out[r] = s;
    }
}

struct Activations {
    std::vector<double> hidden1;     // tanh(w1 x + b1)
    std::vector<double> bottleneck;  // w2 hidden1 + b2
    std::vector<double> hidden2;     // tanh(w3 bottleneck + b3)
    std::vector<double> output;      // w4 hidden2 + b4
};

inline Activations run_forward(const AutoencoderNetwork& net, std::span<const double> x) {
    Activations act;
    affine(net.w1, net.b1, x, act.hidden1);
    for (double& value : act.hidden1) value = std::tanh(value);
    affine(net.w2, net.b2, act.hidden1, act.bottleneck);
    affine(net.w3, net.b3, act.bottleneck, act.hidden2);
    for (double& value : act.hidden2) value = std::tanh(value);
    affine(net.w4, net.b4, act.hidden2, act.output);
    return act;
}

inline AutoencoderNetwork zero_like(const AutoencoderNetwork& net) {
    AutoencoderNetwork g;
    g.layer_sizes = net.layer_sizes;
    g.w1 = Matrix(net.w1.rows(), net.w1.cols());
    g.w2 = Matrix(net.w2.rows(), net.w2.cols());
    g.w3 = Matrix(net.w3.rows(), net.w3.cols());
    g.w4 = Matrix(net.w4.rows(), net.w4.cols());
    g.b1.assign(net.b1.size(), 0.0);
    g.b2.assign(net.b2.size(), 0.0);
    g.b3.assign(net.b3.size(), 0.0);
    g.b4.assign(net.b4.size(), 0.0);
    return g;
}

template <typename Fn>
void for_each_parameter(AutoencoderNetwork& net, Fn&& fn) {
    for (double& value : net.w1.values()) fn(value);
    for (double& value : net.b1) fn(value);
    for (double& value : net.w2.values()) fn(value);
    for (double& value : net.b2) fn(value);
    for (double& value : net.w3.values()) fn(value);
    for (double& value : net.b3) fn(value);
    for (double& value : net.w4.values()) fn(value);
    for (double& value : net.b4) fn(value);
}

}  // namespace detail

inline ForwardResult forward(const AutoencoderNetwork& net, std::span<const double> x) {
    if (x.size() != net.input_dim())
        throw std::invalid_argument("forward: input has wrong dimension");
    detail::Activations act = detail::run_forward(net, x);
    return {std::move(act.output), std::move(act.bottleneck)};
}

/// Mean squared reconstruction error over samples and output coordinates,
/// together with its exact analytic gradient for every parameter.
inline LossGradient loss_gradient(const AutoencoderNetwork& net, const Matrix& batch) {
    const std::size_t n = batch.rows();
    const std::size_t d = net.input_dim();
    if (n == 0) throw std::invalid_argument("loss_gradient: empty batch");
    if (batch.cols() != d) throw std::invalid_argument("loss_gradient: batch has wrong dimension");

    LossGradient result;
    result.gradients = detail::zero_like(net);
    AutoencoderNetwork& g = result.gradients;
    const double inv = 1.0 / static_cast<double>(n * d);

    const std::size_t h = net.hidden_width();
    const std::size_t k = net.bottleneck_dim();
    std::vector<double> delta4(d), delta3(h), delta2(k), delta1(h);

    for (std::size_t s = 0; s < n; ++s) {
        const auto x = batch.row(s);
        const detail::Activations act = detail::run_forward(net, x);

        for (std::size_t j = 0; j < d; ++j) {
            const double r = act.output[j] - x[j];
            result.mse += r * r * inv;
            delta4[j] = 2.0 * r * inv;
        }
        for (std::size_t j = 0; j < d; ++j) {
            g.b4[j] += delta4[j];
            for (std::size_t c = 0; c < h; ++c) g.w4(j, c) += delta4[j] * act.hidden2[c];
        }
        for (std::size_t c = 0; c < h; ++c) {
            double s4 = 0.0;
            for (std::size_t j = 0; j < d; ++j) s4 += net.w4(j, c) * delta4[j];
            delta3[c] = s4 * (1.0 - act.hidden2[c] * act.hidden2[c]);
        }
        for (std::size_t r = 0; r < h; ++r) {
            g.b3[r] += delta3[r];
            for (std::size_t c = 0; c < k; ++c) g.w3(r, c) += delta3[r] * act.bottleneck[c];
        }
        for (std::size_t c = 0; c < k; ++c) {
            double s3 = 0.0;
            for (std::size_t r = 0; r < h; ++r) s3 += net.w3(r, c) * delta3[r];
            delta2[c] = s3;  // identity bottleneck
        }
        for (std::size_t r = 0; r < k; ++r) {
            g.b2[r] += delta2[r];
            for (std::size_t c = 0; c < h; ++c) g.w2(r, c) += delta2[r] * act.hidden1[c];
        }
        for (std::size_t c = 0; c < h; ++c) {
            double s2 = 0.0;
            for (std::size_t r = 0; r < k; ++r) s2 += net.w2(r, c) * delta2[r];
            delta1[c] = s2 * (1.0 - act.hidden1[c] * act.hidden1[c]);
        }
        for (std::size_t r = 0; r < h; ++r) {
            g.b1[r] += delta1[r];
            for (std::size_t c = 0; c < d; ++c) g.w1(r, c) += delta1[r] * x[c];
        }
    }
    return result;
}

inline double reconstruction_mse(const AutoencoderNetwork& net, const Matrix& batch) {
    const std::size_t n = batch.rows();
    const std::size_t d = net.input_dim();
    double mse = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const detail::Activations act = detail::run_forward(net, batch.row(s));
        for (std::size_t j = 0; j < d; ++j) {
            const double r = act.output[j] - batch.row(s)[j];
            mse += r * r;
        }
    }
    return mse / static_cast<double>(n * d);
}

/// Full-batch gradient descent with momentum for a fixed number of epochs.
/// mse_per_epoch[e] is the loss after the e-th update, so the last entry is
/// the loss of the returned network. Throws if the loss or any parameter
/// turns non-finite, reporting the epoch index.
inline TrainResult train(const Matrix& data, std::size_t k, const TrainConfig& config) {
    if (data.rows() < 2) throw std::invalid_argument("train: need at least 2 samples");
    TrainResult result;
    result.network = init_network(data.cols(), k, config);
    AutoencoderNetwork& net = result.network;
    AutoencoderNetwork velocity = detail::zero_like(net);

    auto check_finite = [&](double mse, std::size_t epoch) {
        bool ok = std::isfinite(mse);
        detail::for_each_parameter(net, [&ok](double& value) { ok = ok && std::isfinite(value); });
        if (!ok) {
            std::ostringstream msg;
            msg << "train: diverged at epoch " << epoch << " (non-finite loss or parameter);"
                << " retry with a smaller learning rate";
            throw std::runtime_error(msg.str());
        }
    };

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const LossGradient lg = loss_gradient(net, data);
        if (epoch > 1) result.trace.mse_per_epoch.push_back(lg.mse);

        auto step = [&](Matrix& w, const Matrix& gw, Matrix& vw) {
            for (std::size_t idx = 0; idx < w.values().size(); ++idx) {
                vw.values()[idx] =
                    config.momentum * vw.values()[idx] - config.learning_rate * gw.values()[idx];
                w.values()[idx] += vw.values()[idx];
            }
        };
        auto step_bias = [&](std::vector<double>& b, const std::vector<double>& gb,
                             std::vector<double>& vb) {
            for (std::size_t idx = 0; idx < b.size(); ++idx) {
                vb[idx] = config.momentum * vb[idx] - config.learning_rate * gb[idx];
                b[idx] += vb[idx];
            }
        };
        step(net.w1, lg.gradients.w1, velocity.w1);
        step_bias(net.b1, lg.gradients.b1, velocity.b1);
        step(net.w2, lg.gradients.w2, velocity.w2);
        step_bias(net.b2, lg.gradients.b2, velocity.b2);
        step(net.w3, lg.gradients.w3, velocity.w3);
        step_bias(net.b3, lg.gradients.b3, velocity.b3);
        step(net.w4, lg.gradients.w4, velocity.w4);
        step_bias(net.b4, lg.gradients.b4, velocity.b4);

        check_finite(lg.mse, epoch);
    }
    const double final_mse = reconstruction_mse(net, data);
    if (config.epochs > 0) {
        check_finite(final_mse, config.epochs);
        result.trace.mse_per_epoch.push_back(final_mse);
    }
    result.trace.final_mse = final_mse;
    return result;
}

/// Bottleneck activations per sample. `final_mse` is carried into the
/// embedding provenance when the caller has it from training.
inline Embedding encode(const AutoencoderNetwork& net, const Matrix& data,
                        double final_mse = 0.0, int epochs = 0) {
    if (data.cols() != net.input_dim())
        throw std::invalid_argument("encode: data has wrong dimension");
    Embedding e;
    e.method = "nlpca";
    e.dims = net.bottleneck_dim();
    e.coords = Matrix(data.rows(), e.dims);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const detail::Activations act = detail::run_forward(net, data.row(i));
        for (std::size_t c = 0; c < e.dims; ++c) e.coords(i, c) = act.bottleneck[c];
    }
    e.objective_name = "mse";
    e.final_objective = final_mse;
    e.iterations = epochs;
    return e;
}

namespace detail {

inline void write_values(std::ostream& out, std::span<const double> values) {
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), values[i]);
        if (i) out << ' ';
        out.write(buf, res.ptr - buf);
    }
    out << '\n';
}

inline std::vector<double> read_values(std::istream& in, std::size_t count,
                                       const std::string& what) {
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string token;
        if (!(in >> token))
            throw std::runtime_error("network file: truncated " + what);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw std::runtime_error("network file: bad number '" + token + "' in " + what);
        values[i] = value;
    }
    return values;
}

}  // namespace detail

inline constexpr const char* network_format_tag = "qsarmap-nlpca-network";
inline constexpr int network_format_version = 1;

/// Plain-text parameter file: format tag + version, layer sizes, then for
/// each layer "weights <rows> <cols>" with row-major values followed by
/// "biases <n>". Values use shortest round-trip decimal text.
inline void save_network(const AutoencoderNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_network: cannot open " + path.string());
    out << network_format_tag << ' ' << network_format_version << '\n';
    out << "layers";
    for (std::size_t size : net.layer_sizes) out << ' ' << size;
    out << '\n';
    auto dump_layer = [&out](const Matrix& w, const std::vector<double>& b) {
        out << "weights " << w.rows() << ' ' << w.cols() << '\n';
        for (std::size_t r = 0; r < w.rows(); ++r) detail::write_values(out, w.row(r));
        out << "biases " << b.size() << '\n';
        detail::write_values(out, b);
    };
    dump_layer(net.w1, net.b1);
    dump_layer(net.w2, net.b2);
    dump_layer(net.w3, net.b3);
    dump_layer(net.w4, net.b4);
    if (!out) throw std::runtime_error("save_network: write failed for " + path.string());
}

inline AutoencoderNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_network: cannot open " + path.string());
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (tag != network_format_tag)
        throw std::runtime_error("load_network: not a network file: " + path.string());
    if (version != network_format_version)
        throw std::runtime_error("load_network: unsupported format version");
    std::string keyword;
    in >> keyword;
    if (keyword != "layers") throw std::runtime_error("network file: expected 'layers'");
    std::array<std::size_t, 5> sizes{};
    for (std::size_t& size : sizes)
        if (!(in >> size)) throw std::runtime_error("network file: truncated layer sizes");
    if (sizes[0] != sizes[4] || sizes[1] != sizes[3] || sizes[2] < 1 || sizes[2] > 2)
        throw std::runtime_error("network file: layer sizes are not a sandglass shape");

    AutoencoderNetwork net;
    net.layer_sizes = sizes;
    auto read_layer = [&in](Matrix& w, std::vector<double>& b, std::size_t rows,
                            std::size_t cols) {
        std::string word;
        std::size_t r = 0, c = 0;
        in >> word >> r >> c;
        if (word != "weights" || r != rows || c != cols)
            throw std::runtime_error("network file: bad weights block");
        w = Matrix(rows, cols);
        const std::vector<double> values = detail::read_values(in, rows * cols, "weights");
        std::copy(values.begin(), values.end(), w.values().begin());
        std::size_t nb = 0;
        in >> word >> nb;
        if (word != "biases" || nb != rows)
            throw std::runtime_error("network file: bad biases block");
        b = detail::read_values(in, rows, "biases");
    };
    read_layer(net.w1, net.b1, sizes[1], sizes[0]);
    read_layer(net.w2, net.b2, sizes[2], sizes[1]);
    read_layer(net.w3, net.b3, sizes[3], sizes[2]);
    read_layer(net.w4, net.b4, sizes[4], sizes[3]);
    return net;
}

}  // namespace qsarmap
