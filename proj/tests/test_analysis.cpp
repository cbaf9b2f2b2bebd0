#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <qsarmap/analysis.hpp>
#include <qsarmap/rng.hpp>

using qsarmap::Embedding;
using qsarmap::LinearClassifier2d;
using qsarmap::Matrix;
using qsarmap::ThresholdClassifier;

namespace {

Matrix points_2d(const std::vector<std::pair<double, double>>& pts) {
    Matrix m(pts.size(), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m(i, 0) = pts[i].first;
        m(i, 1) = pts[i].second;
    }
    return m;
}

// Centered XOR corners: class means coincide, no line beats 3/4.
const Matrix kXorPoints = points_2d({{1, 1}, {-1, -1}, {1, -1}, {-1, 1}});
const std::vector<bool> kXorLabels = {true, true, false, false};

Embedding embedding_1d(std::string method, const std::vector<double>& coords) {
    Embedding e;
    e.method = std::move(method);
    e.dims = 1;
    e.coords = Matrix(coords.size(), 1);
    for (std::size_t i = 0; i < coords.size(); ++i) e.coords(i, 0) = coords[i];
    return e;
}

}  // namespace

TEST_CASE("threshold_accuracy_1d on separable data") {
    const std::vector<double> coords = {-2.0, -1.0, 1.0, 2.0};
    const std::vector<bool> labels = {false, false, true, true};
    const ThresholdClassifier t = qsarmap::threshold_accuracy_1d(coords, labels);
    REQUIRE(t.accuracy == 1.0);
    REQUIRE(t.cut == 0.0);
    REQUIRE(t.polarity == +1);
}

TEST_CASE("threshold_accuracy_1d on alternating labels") {
    // coords 1(p), 2(n), 3(p), 4(n): the best single cut gets 3 of 4, first
    // reached at cut 1.5 with polarity -1.
    const std::vector<double> coords = {1.0, 2.0, 3.0, 4.0};
    const std::vector<bool> labels = {true, false, true, false};
    const ThresholdClassifier t = qsarmap::threshold_accuracy_1d(coords, labels);
    REQUIRE(t.accuracy == 0.75);
    REQUIRE(t.cut == 1.5);
    REQUIRE(t.polarity == -1);
}

TEST_CASE("threshold_accuracy_1d tie-breaking is deterministic") {
    // coords 0(n), 1(p), 2(n): several cuts reach 2/3; the sweep must return
    // the smallest one, which is the low sentinel at -1 with polarity -1.
    const std::vector<double> coords = {0.0, 1.0, 2.0};
    const std::vector<bool> labels = {false, true, false};
    const ThresholdClassifier t = qsarmap::threshold_accuracy_1d(coords, labels);
    REQUIRE(t.accuracy == Catch::Approx(2.0 / 3.0).margin(1e-15));
    REQUIRE(t.cut == -1.0);
    REQUIRE(t.polarity == -1);
}

TEST_CASE("threshold_accuracy_1d with all-equal coordinates returns the majority rate") {
    const std::vector<double> coords = {5.0, 5.0, 5.0};
    const std::vector<bool> labels = {true, true, false};
    const ThresholdClassifier t = qsarmap::threshold_accuracy_1d(coords, labels);
    REQUIRE(t.accuracy == Catch::Approx(2.0 / 3.0).margin(1e-15));
}

TEST_CASE("threshold accuracy never falls below the majority rate") {
    qsarmap::Rng rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> coords(15);
        std::vector<bool> labels(15);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            coords[i] = rng.normal();
            labels[i] = rng.uniform01() < 0.5;
            pos += labels[i] ? 1 : 0;
        }
        if (pos == 0 || pos == labels.size()) continue;
        const double majority =
            static_cast<double>(std::max(pos, labels.size() - pos)) /
            static_cast<double>(labels.size());
        REQUIRE(qsarmap::threshold_accuracy_1d(coords, labels).accuracy >= majority);
    }
}

TEST_CASE("threshold accuracy is invariant under monotone transforms") {
    qsarmap::Rng rng(73);
    std::vector<double> coords(20);
    std::vector<bool> labels(20);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        coords[i] = rng.uniform(-2.0, 2.0);
        labels[i] = rng.uniform01() < 0.4;
    }
    labels[0] = true;
    labels[1] = false;
    std::vector<double> cubed(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        cubed[i] = coords[i] * coords[i] * coords[i] + 10.0;
    REQUIRE(qsarmap::threshold_accuracy_1d(coords, labels).accuracy ==
            qsarmap::threshold_accuracy_1d(cubed, labels).accuracy);
}

TEST_CASE("threshold_accuracy_1d validates its input") {
    const std::vector<double> coords = {1.0, 2.0};
    REQUIRE_THROWS_AS(qsarmap::threshold_accuracy_1d(coords, {true, true}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::threshold_accuracy_1d(coords, {true}), std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::threshold_accuracy_1d(std::vector<double>{}, {}),
                      std::invalid_argument);
}

TEST_CASE("linear_accuracy_2d separates two clouds") {
    const Matrix points = points_2d(
        {{-5, 0.3}, {-4.7, -0.2}, {-5.2, 0.1}, {5, 0.2}, {4.8, -0.3}, {5.1, 0.0}});
    const std::vector<bool> labels = {false, false, false, true, true, true};
    const LinearClassifier2d l = qsarmap::linear_accuracy_2d(points, labels);
    REQUIRE(l.accuracy == 1.0);
    REQUIRE(std::abs(l.direction[0]) > 0.99);
    const double norm =
        std::sqrt(l.direction[0] * l.direction[0] + l.direction[1] * l.direction[1]);
    REQUIRE(norm == Catch::Approx(1.0).margin(1e-9));
    // The published rule must reproduce the published accuracy.
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double proj = l.direction[0] * points(i, 0) + l.direction[1] * points(i, 1);
        REQUIRE((proj > l.cut) == labels[i]);
    }
}

TEST_CASE("linear_accuracy_2d on the XOR corners is exactly 3/4") {
    const LinearClassifier2d l = qsarmap::linear_accuracy_2d(kXorPoints, kXorLabels);
    REQUIRE(l.accuracy == 0.75);
    const double norm =
        std::sqrt(l.direction[0] * l.direction[0] + l.direction[1] * l.direction[1]);
    REQUIRE(norm == Catch::Approx(1.0).margin(1e-9));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double proj =
            l.direction[0] * kXorPoints(i, 0) + l.direction[1] * kXorPoints(i, 1);
        if ((proj > l.cut) == kXorLabels[i]) ++correct;
    }
    REQUIRE(correct == 3);
}

TEST_CASE("linear accuracy is rotation invariant") {
    qsarmap::Rng rng(79);
    Matrix points(30, 2);
    std::vector<bool> labels(30);
    for (std::size_t i = 0; i < 30; ++i) {
        labels[i] = i % 2 == 0;
        const double cx = labels[i] ? 1.0 : -1.0;
        points(i, 0) = cx + rng.normal() * 1.2;  // heavy overlap
        points(i, 1) = rng.normal() * 1.2;
    }
    const double theta = 0.9;
    Matrix rotated(30, 2);
    for (std::size_t i = 0; i < 30; ++i) {
        rotated(i, 0) = std::cos(theta) * points(i, 0) - std::sin(theta) * points(i, 1);
        rotated(i, 1) = std::sin(theta) * points(i, 0) + std::cos(theta) * points(i, 1);
    }
    REQUIRE(qsarmap::linear_accuracy_2d(points, labels).accuracy ==
            qsarmap::linear_accuracy_2d(rotated, labels).accuracy);
}

TEST_CASE("linear_accuracy_2d validates its input") {
    REQUIRE_THROWS_AS(qsarmap::linear_accuracy_2d(Matrix(4, 3), kXorLabels),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::linear_accuracy_2d(kXorPoints, {true, true, false}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(qsarmap::linear_accuracy_2d(kXorPoints, {true, true, true, true}),
                      std::invalid_argument);
}

TEST_CASE("quadratic_accuracy_2d separates what no line can") {
    SECTION("XOR corners") {
        REQUIRE(qsarmap::quadratic_accuracy_2d(kXorPoints, kXorLabels) == 1.0);
    }
    SECTION("inner disk versus outer ring") {
        std::vector<std::pair<double, double>> pts;
        std::vector<bool> labels;
        constexpr double pi = 3.14159265358979323846;
        for (int i = 0; i < 8; ++i) {
            const double a = 2.0 * pi * i / 8.0;
            pts.push_back({0.5 * std::cos(a), 0.5 * std::sin(a)});
            labels.push_back(true);
            pts.push_back({2.0 * std::cos(a + 0.2), 2.0 * std::sin(a + 0.2)});
            labels.push_back(false);
        }
        REQUIRE(qsarmap::quadratic_accuracy_2d(points_2d(pts), labels) == 1.0);
    }
}

TEST_CASE("quadratic_accuracy_1d realizes two-sided intervals") {
    const std::vector<double> coords = {-2.0, -1.0, 0.0, 1.0, 2.0};
    const std::vector<bool> labels = {false, true, true, true, false};
    REQUIRE(qsarmap::threshold_accuracy_1d(coords, labels).accuracy == 0.8);
    REQUIRE(qsarmap::quadratic_accuracy_1d(coords, labels) == 1.0);
}

TEST_CASE("silhouette values") {
    SECTION("hand-computed 4-point case") {
        // positives (0,0), (1,0); negatives (3,0), (3,1).
        const Matrix pts = points_2d({{0, 0}, {1, 0}, {3, 0}, {3, 1}});
        const std::vector<bool> labels = {true, true, false, false};
        REQUIRE(qsarmap::silhouette(pts, labels) ==
                Catch::Approx(0.6082062128990565).margin(1e-12));
    }
    SECTION("tight far-apart clusters approach 1") {
        qsarmap::Rng rng(83);
        Matrix pts(20, 2);
        std::vector<bool> labels(20);
        for (std::size_t i = 0; i < 20; ++i) {
            labels[i] = i < 10;
            pts(i, 0) = (labels[i] ? 100.0 : -100.0) + rng.normal();
            pts(i, 1) = rng.normal();
        }
        REQUIRE(qsarmap::silhouette(pts, labels) > 0.9);
    }
    SECTION("random labels on one blob sit near zero") {
        qsarmap::Rng rng(89);
        Matrix pts(200, 2);
        std::vector<bool> labels(200);
        for (std::size_t i = 0; i < 200; ++i) {
            pts(i, 0) = rng.normal();
            pts(i, 1) = rng.normal();
            labels[i] = rng.uniform01() < 0.5;
        }
        labels[0] = true;
        labels[1] = false;
        REQUIRE(std::abs(qsarmap::silhouette(pts, labels)) < 0.15);
    }
    SECTION("scale invariance") {
        const Matrix pts = points_2d({{0, 0}, {1, 0}, {3, 0}, {3, 1}, {0.5, 2}});
        const std::vector<bool> labels = {true, true, false, false, true};
        Matrix scaled = pts;
        for (double& v : scaled.values()) v *= 3.7;
        REQUIRE(qsarmap::silhouette(scaled, labels) ==
                Catch::Approx(qsarmap::silhouette(pts, labels)).margin(1e-12));
    }
    SECTION("singleton class contributes zero") {
        // 1D points 0 (pos, singleton), 10 (neg), 11 (neg):
        // s = (0 + 9/10 + 10/11) / 3 = 199/330.
        Matrix pts(3, 1);
        pts(1, 0) = 10.0;
        pts(2, 0) = 11.0;
        const std::vector<bool> labels = {true, false, false};
        REQUIRE(qsarmap::silhouette(pts, labels) ==
                Catch::Approx(199.0 / 330.0).margin(1e-15));
    }
    SECTION("fully coincident points give zero") {
        const Matrix pts(4, 2, 0.0);
        const std::vector<bool> labels = {true, true, false, false};
        REQUIRE(qsarmap::silhouette(pts, labels) == 0.0);
    }
    SECTION("validation") {
        const Matrix two(2, 1);
        REQUIRE_THROWS_AS(qsarmap::silhouette(two, {true, false}), std::invalid_argument);
        const Matrix three(3, 1);
        REQUIRE_THROWS_AS(qsarmap::silhouette(three, {true, true, true}),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(qsarmap::silhouette(three, {true, false}), std::invalid_argument);
    }
}

TEST_CASE("compare_methods ranks a perfect separator first") {
    const std::vector<bool> labels = {false, false, false, true, true, true};
    const Embedding clean = embedding_1d("clean", {-3.0, -2.9, -3.1, 3.0, 2.9, 3.1});
    const Embedding noisy = embedding_1d("noisy", {-1.0, 2.0, -0.5, 1.0, -2.0, 0.5});
    const auto report = qsarmap::compare_methods({noisy, clean}, labels);
    REQUIRE(report.ranked.size() == 2);
    REQUIRE(report.ranked[0].method == "clean");
    REQUIRE(report.ranked[0].primary_accuracy == 1.0);
    REQUIRE(report.ranked[0].threshold.has_value());
    REQUIRE_FALSE(report.ranked[0].linear.has_value());
    REQUIRE(report.ranked[0].verdict == "linear adequate");
    REQUIRE(report.ranked[1].method == "noisy");
}

TEST_CASE("compare_methods breaks full ties alphabetically, then by dims") {
    const std::vector<bool> labels = {false, false, true, true};
    const std::vector<double> coords = {-2.0, -1.5, 1.5, 2.0};
    SECTION("method name") {
        const Embedding a = embedding_1d("beta", coords);
        const Embedding b = embedding_1d("alpha", coords);
        const auto report = qsarmap::compare_methods({a, b}, labels);
        REQUIRE(report.ranked[0].method == "alpha");
        REQUIRE(report.ranked[1].method == "beta");
    }
    SECTION("dims when even the names tie") {
        const Embedding one = embedding_1d("same", coords);
        Embedding two = one;  // same x, zero y: identical distances and cuts
        two.dims = 2;
        two.coords = Matrix(coords.size(), 2);
        for (std::size_t i = 0; i < coords.size(); ++i) two.coords(i, 0) = coords[i];
        const auto report = qsarmap::compare_methods({two, one}, labels);
        REQUIRE(report.ranked[0].primary_accuracy == report.ranked[1].primary_accuracy);
        REQUIRE(report.ranked[0].silhouette_value == report.ranked[1].silhouette_value);
        REQUIRE(report.ranked[0].dims == 1);
        REQUIRE(report.ranked[1].dims == 2);
    }
}

TEST_CASE("compare_methods ranking ignores input order") {
    const std::vector<bool> labels = {false, false, false, true, true, true};
    const Embedding a = embedding_1d("a", {-3.0, -2.9, -3.1, 3.0, 2.9, 3.1});
    const Embedding b = embedding_1d("b", {-1.0, 2.0, -0.5, 1.0, -2.0, 0.5});
    const Embedding c = embedding_1d("c", {-2.0, -1.0, 1.0, 2.0, 0.5, 1.5});
    const auto r1 = qsarmap::compare_methods({a, b, c}, labels);
    const auto r2 = qsarmap::compare_methods({c, a, b}, labels);
    REQUIRE(r1.ranked.size() == r2.ranked.size());
    for (std::size_t i = 0; i < r1.ranked.size(); ++i) {
        REQUIRE(r1.ranked[i].method == r2.ranked[i].method);
        REQUIRE(r1.ranked[i].primary_accuracy == r2.ranked[i].primary_accuracy);
    }
}

TEST_CASE("compare_methods flags a curved boundary on a 1D embedding") {
    const std::vector<bool> labels = {false, true, true, true, false};
    const Embedding interval = embedding_1d("interval", {-2.0, -1.0, 0.0, 1.0, 2.0});
    const auto report = qsarmap::compare_methods({interval}, labels);
    REQUIRE(report.ranked[0].primary_accuracy == 0.8);
    REQUIRE(report.ranked[0].quadratic_accuracy == 1.0);
    REQUIRE(report.ranked[0].verdict == "nonlinear boundary indicated");
}

TEST_CASE("compare_methods fills 2D metrics") {
    const std::vector<bool> labels = {false, false, false, true, true, true};
    Embedding e;
    e.method = "planar";
    e.dims = 2;
    e.coords = points_2d({{-5, 0.3}, {-4.7, -0.2}, {-5.2, 0.1}, {5, 0.2}, {4.8, -0.3}, {5.1, 0}});
    const auto report = qsarmap::compare_methods({e}, labels);
    REQUIRE(report.ranked[0].linear.has_value());
    REQUIRE_FALSE(report.ranked[0].threshold.has_value());
    REQUIRE(report.ranked[0].primary_accuracy == 1.0);
    REQUIRE(report.ranked[0].verdict == "linear adequate");
    REQUIRE(report.ranked[0].silhouette_value > 0.8);
}

TEST_CASE("compare_methods validates its input") {
    const std::vector<bool> labels = {false, true, true, false};
    REQUIRE_THROWS_AS(qsarmap::compare_methods({}, labels), std::invalid_argument);

    Embedding short_embedding = embedding_1d("short", {1.0, 2.0});
    REQUIRE_THROWS_AS(qsarmap::compare_methods({short_embedding}, labels),
                      std::invalid_argument);

    Embedding bad_dims = embedding_1d("bad", {1.0, 2.0, 3.0, 4.0});
    bad_dims.dims = 3;
    REQUIRE_THROWS_AS(qsarmap::compare_methods({bad_dims}, labels), std::invalid_argument);

    Embedding mismatch = embedding_1d("mismatch", {1.0, 2.0, 3.0, 4.0});
    mismatch.dims = 2;  // claims 2 columns but coords are N x 1
    REQUIRE_THROWS_AS(qsarmap::compare_methods({mismatch}, labels), std::invalid_argument);
}
