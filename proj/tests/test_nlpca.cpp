#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <qsarmap/nlpca.hpp>
#include <qsarmap/rng.hpp>

#include "support/oracles.hpp"

using qsarmap::AutoencoderNetwork;
using qsarmap::Matrix;
using qsarmap::TrainConfig;

namespace {

namespace fs = std::filesystem;

Matrix random_matrix(std::size_t n, std::size_t d, qsarmap::Rng& rng, double scale = 1.0) {
    Matrix m(n, d);
    for (double& v : m.values()) v = scale * rng.normal();
    return m;
}

bool networks_equal(const AutoencoderNetwork& a, const AutoencoderNetwork& b) {
    return a.layer_sizes == b.layer_sizes && a.w1 == b.w1 && a.w2 == b.w2 && a.w3 == b.w3 &&
           a.w4 == b.w4 && a.b1 == b.b1 && a.b2 == b.b2 && a.b3 == b.b3 && a.b4 == b.b4;
}

oracles::PlainNetwork to_plain(const AutoencoderNetwork& net) {
    oracles::PlainNetwork p;
    p.d = net.input_dim();
    p.h = net.hidden_width();
    p.k = net.bottleneck_dim();
    p.w1 = net.w1.values();
    p.w2 = net.w2.values();
    p.w3 = net.w3.values();
    p.w4 = net.w4.values();
    p.b1 = net.b1;
    p.b2 = net.b2;
    p.b3 = net.b3;
    p.b4 = net.b4;
    return p;
}

fs::path temp_network_path(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qsarmap_nlpca_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("init_network shapes and determinism") {
    TrainConfig config;
    config.seed = 5;
    const AutoencoderNetwork net = qsarmap::init_network(23, 2, config);
    REQUIRE(net.layer_sizes == std::array<std::size_t, 5>{23, 8, 2, 8, 23});
    REQUIRE(net.w1.rows() == 8);
    REQUIRE(net.w1.cols() == 23);
    REQUIRE(net.w2.rows() == 2);
    REQUIRE(net.w2.cols() == 8);
    REQUIRE(net.w3.rows() == 8);
    REQUIRE(net.w3.cols() == 2);
    REQUIRE(net.w4.rows() == 23);
    REQUIRE(net.w4.cols() == 8);

    SECTION("same seed reproduces the weights bitwise") {
        const AutoencoderNetwork again = qsarmap::init_network(23, 2, config);
        REQUIRE(networks_equal(net, again));
        TrainConfig other = config;
        other.seed = 6;
        REQUIRE_FALSE(networks_equal(net, qsarmap::init_network(23, 2, other)));
    }
    SECTION("biases start at zero") {
        for (double v : net.b1) REQUIRE(v == 0.0);
        for (double v : net.b2) REQUIRE(v == 0.0);
        for (double v : net.b3) REQUIRE(v == 0.0);
        for (double v : net.b4) REQUIRE(v == 0.0);
    }
}

TEST_CASE("init_network weight bounds follow the fan-in rule") {
    TrainConfig config;
    config.hidden_width = 3;
    config.seed = 99;
    const AutoencoderNetwork net = qsarmap::init_network(4, 1, config);
    // w1 has fan_in 4, so every entry lies in [-0.5, 0.5).
    for (double v : net.w1.values()) {
        REQUIRE(v >= -0.5);
        REQUIRE(v < 0.5);
    }
    // w3 has fan_in 1: entries in [-1, 1).
    for (double v : net.w3.values()) {
        REQUIRE(v >= -1.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("init_network validates its arguments") {
    TrainConfig config;
    REQUIRE_THROWS_AS(qsarmap::init_network(5, 0, config), std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::init_network(5, 3, config), std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::init_network(1, 2, config), std::invalid_argument);
    TrainConfig no_hidden;
    no_hidden.hidden_width = 0;
    REQUIRE_THROWS_AS(qsarmap::init_network(5, 1, no_hidden), std::invalid_argument);
}

TEST_CASE("forward evaluation") {
    SECTION("all-zero parameters map everything to zero") {
        TrainConfig config;
        AutoencoderNetwork net = qsarmap::init_network(3, 1, config);
        for (double& v : net.w1.values()) v = 0.0;
        for (double& v : net.w2.values()) v = 0.0;
        for (double& v : net.w3.values()) v = 0.0;
        for (double& v : net.w4.values()) v = 0.0;
        const std::vector<double> x = {1.0, -2.0, 3.0};
        const auto out = qsarmap::forward(net, x);
        for (double v : out.reconstruction) REQUIRE(v == 0.0);
        for (double v : out.bottleneck) REQUIRE(v == 0.0);
    }
    SECTION("with zero weights the output is exactly the output bias") {
        TrainConfig config;
        AutoencoderNetwork net = qsarmap::init_network(2, 1, config);
        for (double& v : net.w1.values()) v = 0.0;
        for (double& v : net.w2.values()) v = 0.0;
        for (double& v : net.w3.values()) v = 0.0;
        for (double& v : net.w4.values()) v = 0.0;
        net.b4 = {4.5, -1.5};
        const std::vector<double> x = {10.0, 20.0};
        const auto out = qsarmap::forward(net, x);
        REQUIRE(out.reconstruction == net.b4);
    }
    SECTION("matches the independent layered oracle") {
        TrainConfig config;
        config.hidden_width = 5;
        config.seed = 321;
        const AutoencoderNetwork net = qsarmap::init_network(6, 2, config);
        const oracles::PlainNetwork plain = to_plain(net);
        qsarmap::Rng rng(7);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> x(6);
            for (double& v : x) v = rng.normal();
            std::vector<double> plain_bottleneck;
            const std::vector<double> plain_out =
                oracles::plain_forward(plain, x, &plain_bottleneck);
            const auto out = qsarmap::forward(net, x);
            for (std::size_t j = 0; j < 6; ++j)
                REQUIRE(out.reconstruction[j] == Catch::Approx(plain_out[j]).margin(1e-12));
            for (std::size_t c = 0; c < 2; ++c)
                REQUIRE(out.bottleneck[c] == Catch::Approx(plain_bottleneck[c]).margin(1e-12));
        }
    }
    SECTION("wrong input dimension is rejected") {
        TrainConfig config;
        const AutoencoderNetwork net = qsarmap::init_network(3, 1, config);
        const std::vector<double> x = {1.0, 2.0};
        REQUIRE_THROWS_AS(qsarmap::forward(net, x), std::invalid_argument);
    }
}

TEST_CASE("loss_gradient on a perfectly reconstructing network is zero") {
    // Zero weights + output bias equal to the (single repeated) sample:
    // residuals vanish, so the loss and every gradient entry are exactly 0.
    TrainConfig config;
    AutoencoderNetwork net = qsarmap::init_network(3, 1, config);
    for (double& v : net.w1.values()) v = 0.0;
    for (double& v : net.w2.values()) v = 0.0;
    for (double& v : net.w3.values()) v = 0.0;
    for (double& v : net.w4.values()) v = 0.0;
    net.b4 = {0.5, -0.25, 2.0};
    Matrix batch(2, 3);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t j = 0; j < 3; ++j) batch(s, j) = net.b4[j];

    auto lg = qsarmap::loss_gradient(net, batch);
    REQUIRE(lg.mse == 0.0);
    double total = 0.0;
    qsarmap::detail::for_each_parameter(lg.gradients,
                                        [&total](double& v) { total += std::abs(v); });
    REQUIRE(total == 0.0);
}

TEST_CASE("loss_gradient matches central finite differences for every parameter") {
    TrainConfig config;
    config.hidden_width = 4;
    config.seed = 2025;
    AutoencoderNetwork net = qsarmap::init_network(5, 2, config);
    qsarmap::Rng rng(61);
    const Matrix batch = random_matrix(3, 5, rng);

    const auto lg = qsarmap::loss_gradient(net, batch);
    std::vector<double*> params;
    qsarmap::detail::for_each_parameter(net, [&params](double& v) { params.push_back(&v); });
    std::vector<double> analytic;
    AutoencoderNetwork gradients = lg.gradients;
    qsarmap::detail::for_each_parameter(gradients,
                                        [&analytic](double& v) { analytic.push_back(v); });
    REQUIRE(params.size() == analytic.size());

    const double h = 1e-6;
    for (std::size_t p = 0; p < params.size(); ++p) {
        const double saved = *params[p];
        *params[p] = saved + h;
        const double up = qsarmap::reconstruction_mse(net, batch);
        *params[p] = saved - h;
        const double down = qsarmap::reconstruction_mse(net, batch);
        *params[p] = saved;
        const double fd = (up - down) / (2.0 * h);
        const double rel =
            std::abs(fd - analytic[p]) / std::max({std::abs(fd), std::abs(analytic[p]), 1e-6});
        REQUIRE(rel < 1e-4);
    }
}

TEST_CASE("loss_gradient is invariant under duplicating the batch") {
    TrainConfig config;
    config.hidden_width = 3;
    config.seed = 8;
    const AutoencoderNetwork net = qsarmap::init_network(4, 1, config);
    qsarmap::Rng rng(9);
    const Matrix batch = random_matrix(2, 4, rng);
    Matrix doubled(4, 4);
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t j = 0; j < 4; ++j) doubled(s, j) = batch(s % 2, j);

    const auto a = qsarmap::loss_gradient(net, batch);
    const auto b = qsarmap::loss_gradient(net, doubled);
    REQUIRE(a.mse == Catch::Approx(b.mse).margin(1e-12));
    std::vector<double> ga, gb;
    auto grads_a = a.gradients;
    auto grads_b = b.gradients;
    qsarmap::detail::for_each_parameter(grads_a, [&ga](double& v) { ga.push_back(v); });
    qsarmap::detail::for_each_parameter(grads_b, [&gb](double& v) { gb.push_back(v); });
    for (std::size_t p = 0; p < ga.size(); ++p)
        REQUIRE(ga[p] == Catch::Approx(gb[p]).margin(1e-12));
}

TEST_CASE("loss_gradient validates the batch") {
    TrainConfig config;
    const AutoencoderNetwork net = qsarmap::init_network(3, 1, config);
    REQUIRE_THROWS_AS(qsarmap::loss_gradient(net, Matrix(0, 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::loss_gradient(net, Matrix(2, 4)), std::invalid_argument);
}

TEST_CASE("train with zero epochs returns the untouched initial network") {
    qsarmap::Rng rng(10);
    const Matrix data = random_matrix(6, 3, rng);
    TrainConfig config;
    config.epochs = 0;
    config.seed = 44;
    const auto result = qsarmap::train(data, 1, config);
    REQUIRE(result.trace.mse_per_epoch.empty());
    REQUIRE(networks_equal(result.network, qsarmap::init_network(3, 1, config)));
    REQUIRE(result.trace.final_mse ==
            qsarmap::reconstruction_mse(result.network, data));
}

TEST_CASE("train is deterministic for a fixed seed") {
    qsarmap::Rng rng(12);
    const Matrix data = random_matrix(10, 4, rng);
    TrainConfig config;
    config.epochs = 50;
    config.seed = 3;
    const auto a = qsarmap::train(data, 2, config);
    const auto b = qsarmap::train(data, 2, config);
    REQUIRE(a.trace.mse_per_epoch == b.trace.mse_per_epoch);
    REQUIRE(networks_equal(a.network, b.network));
}

TEST_CASE("train makes progress and stays finite") {
    qsarmap::Rng rng(14);
    Matrix data(20, 3);
    for (std::size_t i = 0; i < 20; ++i) {
        const double t = rng.uniform(-1.0, 1.0);
        data(i, 0) = t;
        data(i, 1) = 0.5 * t;
        data(i, 2) = -t;
    }
    TrainConfig config;
    config.epochs = 300;
    config.hidden_width = 6;
    config.seed = 21;
    const auto result = qsarmap::train(data, 1, config);
    const auto& trace = result.trace.mse_per_epoch;
    REQUIRE(trace.size() == 300);
    for (double v : trace) REQUIRE(std::isfinite(v));
    REQUIRE(trace.back() < trace.front());
    REQUIRE(result.trace.final_mse == trace.back());
}

TEST_CASE("train reports divergence instead of returning garbage") {
    qsarmap::Rng rng(15);
    const Matrix data = random_matrix(5, 3, rng, 2.0);
    TrainConfig config;
    config.learning_rate = 1e8;
    config.epochs = 200;
    REQUIRE_THROWS_WITH(qsarmap::train(data, 1, config),
                        Catch::Matchers::ContainsSubstring("diverged"));
}

TEST_CASE("train needs at least two samples") {
    TrainConfig config;
    REQUIRE_THROWS_AS(qsarmap::train(Matrix(1, 3), 1, config), std::invalid_argument);
}

TEST_CASE("encode returns the bottleneck activations") {
    TrainConfig config;
    config.hidden_width = 4;
    config.seed = 100;
    const AutoencoderNetwork net = qsarmap::init_network(5, 2, config);
    qsarmap::Rng rng(16);
    const Matrix data = random_matrix(4, 5, rng);

    const qsarmap::Embedding e = qsarmap::encode(net, data, 0.125, 42);
    REQUIRE(e.method == "nlpca");
    REQUIRE(e.dims == 2);
    REQUIRE(e.coords.rows() == 4);
    REQUIRE(e.objective_name == "mse");
    REQUIRE(e.final_objective == 0.125);
    REQUIRE(e.iterations == 42);

    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<double> x(5);
        for (std::size_t j = 0; j < 5; ++j) x[j] = data(i, j);
        const auto f = qsarmap::forward(net, x);
        REQUIRE(e.coords(i, 0) == f.bottleneck[0]);
        REQUIRE(e.coords(i, 1) == f.bottleneck[1]);
    }

    REQUIRE_THROWS_AS(qsarmap::encode(net, Matrix(3, 4)), std::invalid_argument);
}

TEST_CASE("network save/load round trip is bitwise exact") {
    TrainConfig config;
    config.hidden_width = 5;
    config.seed = 777;
    const AutoencoderNetwork net = qsarmap::init_network(7, 2, config);
    const fs::path path = temp_network_path("roundtrip.txt");
    qsarmap::save_network(net, path);
    const AutoencoderNetwork loaded = qsarmap::load_network(path);
    REQUIRE(networks_equal(net, loaded));
}

TEST_CASE("trained network round trip preserves its encodings") {
    qsarmap::Rng rng(18);
    const Matrix data = random_matrix(8, 4, rng);
    TrainConfig config;
    config.epochs = 40;
    config.seed = 5;
    const auto result = qsarmap::train(data, 1, config);
    const fs::path path = temp_network_path("trained.txt");
    qsarmap::save_network(result.network, path);
    const AutoencoderNetwork loaded = qsarmap::load_network(path);
    const auto a = qsarmap::encode(result.network, data);
    const auto b = qsarmap::encode(loaded, data);
    REQUIRE(a.coords.values() == b.coords.values());
}

TEST_CASE("load_network rejects malformed files") {
    const fs::path dir = fs::temp_directory_path() / "qsarmap_nlpca_tests";
    fs::create_directories(dir);
    auto write = [&dir](const std::string& name, const std::string& content) {
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
        return path;
    };

    SECTION("missing file") {
        REQUIRE_THROWS_AS(qsarmap::load_network(dir / "nope.txt"), std::runtime_error);
    }
    SECTION("wrong tag") {
        const auto p = write("tag.txt", "other-format 1\nlayers 2 2 1 2 2\n");
        REQUIRE_THROWS_WITH(qsarmap::load_network(p),
                            Catch::Matchers::ContainsSubstring("not a network file"));
    }
    SECTION("unsupported version") {
        const auto p = write("ver.txt", "qsarmap-nlpca-network 2\nlayers 2 2 1 2 2\n");
        REQUIRE_THROWS_WITH(qsarmap::load_network(p),
                            Catch::Matchers::ContainsSubstring("version"));
    }
    SECTION("non-sandglass layer sizes") {
        const auto p = write("shape.txt", "qsarmap-nlpca-network 1\nlayers 2 2 1 2 3\n");
        REQUIRE_THROWS_WITH(qsarmap::load_network(p),
                            Catch::Matchers::ContainsSubstring("sandglass"));
    }
    SECTION("truncated weights") {
        const auto p = write("trunc.txt",
                             "qsarmap-nlpca-network 1\nlayers 2 2 1 2 2\nweights 2 2\n1 2 3\n");
        REQUIRE_THROWS_AS(qsarmap::load_network(p), std::runtime_error);
    }
    SECTION("non-numeric value") {
        const auto p = write("badnum.txt",
                             "qsarmap-nlpca-network 1\nlayers 2 2 1 2 2\nweights 2 2\n1 x 3 4\n"
                             "biases 2\n0 0\n");
        REQUIRE_THROWS_WITH(qsarmap::load_network(p),
                            Catch::Matchers::ContainsSubstring("bad number"));
    }
}

TEST_CASE("training beats the linear baseline on curved rank-1 data") {
    // Points on a smooth curve through 5D; a 1-component bottleneck can in
    // principle reconstruct them, so training should cut the initial loss by
    // a large factor.
    qsarmap::Rng rng(19);
    Matrix data(30, 5);
    for (std::size_t i = 0; i < 30; ++i) {
        const double t = rng.uniform(-1.0, 1.0);
        data(i, 0) = t;
        data(i, 1) = t * t;
        data(i, 2) = 0.5 * t;
        data(i, 3) = std::sin(1.5 * t);
        data(i, 4) = -0.25 * t;
    }
    TrainConfig config;
    config.epochs = 400;
    config.seed = 2;
    const auto result = qsarmap::train(data, 1, config);
    const double initial =
        qsarmap::reconstruction_mse(qsarmap::init_network(5, 1, config), data);
    REQUIRE(result.trace.final_mse < 0.5 * initial);
}
