#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsarmap/embedding.hpp"
#include "qsarmap/matrix.hpp"

namespace qsarmap {

/// Best single-cut classifier on a 1D embedding. Classification rule:
/// positive iff polarity > 0 ? coordinate > cut : coordinate < cut.
struct ThresholdClassifier {
    double accuracy = 0.0;
    double cut = 0.0;
    int polarity = +1;
};

/// Fisher-style linear classifier on a 2D embedding. Classification rule:
/// positive iff direction . point > cut (the direction sign absorbs polarity).
struct LinearClassifier2d {
    double accuracy = 0.0;
    std::array<double, 2> direction{1.0, 0.0};
    double cut = 0.0;
};

namespace detail {

inline std::size_t count_positives(const std::vector<bool>& labels) {
    std::size_t n = 0;
    for (bool l : labels) n += l ? 1 : 0;
    return n;
}

inline void require_two_classes(const std::vector<bool>& labels, const char* where) {
    const std::size_t pos = count_positives(labels);
    if (pos == 0 || pos == labels.size())
        throw std::invalid_argument(std::string(where) + ": labels contain a single class");
}

}  // namespace detail

/// Exhaustive sweep over every cut position (midpoints between distinct
/// sorted coordinates plus one sentinel below the minimum and one above the
/// maximum, which realize the two constant classifiers) and both polarities.
/// Ties go to the smallest cut, then to polarity +1.
inline ThresholdClassifier threshold_accuracy_1d(std::span<const double> coords,
                                                 const std::vector<bool>& labels) {
    if (coords.size() != labels.size())
        throw std::invalid_argument("threshold_accuracy_1d: size mismatch");
    if (coords.empty()) throw std::invalid_argument("threshold_accuracy_1d: empty input");
    detail::require_two_classes(labels, "threshold_accuracy_1d");

    std::vector<double> sorted(coords.begin(), coords.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    cuts.reserve(sorted.size() + 1);
    cuts.push_back(sorted.front() - 1.0);
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] > sorted[i - 1]) cuts.push_back(0.5 * (sorted[i - 1] + sorted[i]));
    cuts.push_back(sorted.back() + 1.0);

    const std::size_t n = coords.size();
    ThresholdClassifier best;
    std::size_t best_correct = 0;
    bool have_best = false;
    for (double cut : cuts) {
        for (int polarity : {+1, -1}) {
            std::size_t correct = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool predicted =
                    polarity > 0 ? coords[i] > cut : coords[i] < cut;
                if (predicted == labels[i]) ++correct;
            }
            if (!have_best || correct > best_correct) {
                have_best = true;
                best_correct = correct;
                best = {static_cast<double>(correct) / static_cast<double>(n), cut, polarity};
            }
        }
    }
    return best;
}

namespace detail {

struct DirectionSweep {
    std::vector<double> direction;  // empty when the class means coincide
    ThresholdClassifier best;
};

inline ThresholdClassifier sweep_along(const Matrix& points, std::span<const double> direction,
                                       const std::vector<bool>& labels) {
    std::vector<double> projections(points.rows(), 0.0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        double p = 0.0;
        for (std::size_t c = 0; c < points.cols(); ++c) p += direction[c] * points(i, c);
        projections[i] = p;
    }
    return threshold_accuracy_1d(projections, labels);
}

/// Fisher discriminant in arbitrary dimension: w = (S_w + 1e-9 I)^-1 (mu+ - mu-),
/// followed by the 1D cut sweep along w. The direction is unit length and
/// oriented so the positive class lies on the "> cut" side. Returns an empty
/// direction when the class means coincide (relative to the coordinate scale);
/// the caller picks a fallback.
inline DirectionSweep fisher_sweep(const Matrix& points, const std::vector<bool>& labels) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();
    std::vector<double> mean_pos(d, 0.0), mean_neg(d, 0.0);
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& mean = labels[i] ? mean_pos : mean_neg;
        for (std::size_t c = 0; c < d; ++c) mean[c] += points(i, c);
        n_pos += labels[i] ? 1 : 0;
    }
    for (std::size_t c = 0; c < d; ++c) {
        mean_pos[c] /= static_cast<double>(n_pos);
        mean_neg[c] /= static_cast<double>(n - n_pos);
    }

    std::vector<double> diff(d);
    double diff_norm = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        diff[c] = mean_pos[c] - mean_neg[c];
        diff_norm += diff[c] * diff[c];
    }
    diff_norm = std::sqrt(diff_norm);
    if (diff_norm <= 1e-9 * (1.0 + max_abs(points))) return {};

    Matrix scatter(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& mean = labels[i] ? mean_pos : mean_neg;
        for (std::size_t r = 0; r < d; ++r) {
            const double dr = points(i, r) - mean[r];
            for (std::size_t c = 0; c < d; ++c) scatter(r, c) += dr * (points(i, c) - mean[c]);
        }
    }
    for (std::size_t c = 0; c < d; ++c) scatter(c, c) += 1e-9;

    std::vector<double> w = solve_linear(scatter, diff);
    double w_norm = 0.0;
    for (double v : w) w_norm += v * v;
    w_norm = std::sqrt(w_norm);
    for (double& v : w) v /= w_norm;

    ThresholdClassifier best = sweep_along(points, w, labels);
    if (best.polarity < 0) {
        for (double& v : w) v = -v;
        best.cut = -best.cut;
        best.polarity = +1;
    }
    return {std::move(w), best};
}

/// Fallback when the class means coincide in the lifted space: sweep each
/// coordinate axis and keep the best cut.
inline ThresholdClassifier best_axis_sweep(const Matrix& points, const std::vector<bool>& labels) {
    ThresholdClassifier best;
    bool have_best = false;
    std::vector<double> axis(points.cols(), 0.0);
    for (std::size_t c = 0; c < points.cols(); ++c) {
        axis.assign(points.cols(), 0.0);
        axis[c] = 1.0;
        const ThresholdClassifier t = sweep_along(points, axis, labels);
        if (!have_best || t.accuracy > best.accuracy) {
            have_best = true;
            best = t;
        }
    }
    return best;
}

}  // namespace detail

/// Fisher linear discriminant accuracy on a 2D embedding. When the class
/// means coincide exactly (so the Fisher direction vanishes, e.g. an XOR
/// configuration) the direction is found by an exact sweep instead: the best
/// cut accuracy is piecewise constant in the projection angle and changes
/// only where two points project equally, so evaluating the midpoint of each
/// angular interval is exhaustive.
inline LinearClassifier2d linear_accuracy_2d(const Matrix& points,
                                             const std::vector<bool>& labels) {
    if (points.cols() != 2) throw std::invalid_argument("linear_accuracy_2d: need N x 2 points");
    if (points.rows() != labels.size())
        throw std::invalid_argument("linear_accuracy_2d: size mismatch");
    detail::require_two_classes(labels, "linear_accuracy_2d");

    detail::DirectionSweep sweep = detail::fisher_sweep(points, labels);
    if (sweep.direction.empty()) {
        constexpr double pi = 3.14159265358979323846;
        std::vector<double> breakpoints;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            for (std::size_t j = i + 1; j < points.rows(); ++j) {
                const double dx = points(i, 0) - points(j, 0);
                const double dy = points(i, 1) - points(j, 1);
                if (dx == 0.0 && dy == 0.0) continue;
                double angle = std::fmod(std::atan2(dy, dx) + pi / 2.0, pi);
                if (angle < 0.0) angle += pi;
                breakpoints.push_back(angle);
            }
        }
        std::sort(breakpoints.begin(), breakpoints.end());
        breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                      [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                          breakpoints.end());

        std::vector<double> candidates;
        if (breakpoints.empty()) {
            candidates.push_back(0.0);
        } else {
            for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
                candidates.push_back(0.5 * (breakpoints[i] + breakpoints[i + 1]));
            double wrap = 0.5 * (breakpoints.back() + breakpoints.front() + pi);
            wrap = std::fmod(wrap, pi);
            candidates.push_back(wrap);
        }

        ThresholdClassifier best;
        std::array<double, 2> best_dir{1.0, 0.0};
        bool have_best = false;
        for (double angle : candidates) {
            const std::array<double, 2> dir{std::cos(angle), std::sin(angle)};
            const ThresholdClassifier t = detail::sweep_along(points, dir, labels);
            if (!have_best || t.accuracy > best.accuracy) {
                have_best = true;
                best = t;
                best_dir = dir;
            }
        }
        if (best.polarity < 0) {
            best_dir = {-best_dir[0], -best_dir[1]};
            best.cut = -best.cut;
            best.polarity = +1;
        }
        return {best.accuracy, best_dir, best.cut};
    }
    return {sweep.best.accuracy, {sweep.direction[0], sweep.direction[1]}, sweep.best.cut};
}

namespace detail {

inline Matrix monomial_lift_2d(const Matrix& points) {
    Matrix lifted(points.rows(), 5);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const double x = points(i, 0);
        const double y = points(i, 1);
        lifted(i, 0) = x;
        lifted(i, 1) = y;
        lifted(i, 2) = x * x;
        lifted(i, 3) = y * y;
        lifted(i, 4) = x * y;
    }
    return lifted;
}

inline Matrix monomial_lift_1d(std::span<const double> coords) {
    Matrix lifted(coords.size(), 2);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        lifted(i, 0) = coords[i];
        lifted(i, 1) = coords[i] * coords[i];
    }
    return lifted;
}

inline double lifted_fisher_accuracy(const Matrix& lifted, const std::vector<bool>& labels) {
    const DirectionSweep sweep = fisher_sweep(lifted, labels);
    if (sweep.direction.empty()) return best_axis_sweep(lifted, labels).accuracy;
    return sweep.best.accuracy;
}

}  // namespace detail

/// Quadratic-boundary accuracy: lift (x, y) to (x, y, x^2, y^2, xy) and run
/// the Fisher procedure in the lifted space. A quadratic curve in the plane
/// is a hyperplane there.
inline double quadratic_accuracy_2d(const Matrix& points, const std::vector<bool>& labels) {
    if (points.cols() != 2) throw std::invalid_argument("quadratic_accuracy_2d: need N x 2 points");
    if (points.rows() != labels.size())
        throw std::invalid_argument("quadratic_accuracy_2d: size mismatch");
    detail::require_two_classes(labels, "quadratic_accuracy_2d");
    return detail::lifted_fisher_accuracy(detail::monomial_lift_2d(points), labels);
}

/// 1D analogue used for the classifier-suitability verdict on 1D embeddings:
/// lift x to (x, x^2), which makes two-sided intervals linearly realizable.
inline double quadratic_accuracy_1d(std::span<const double> coords,
                                    const std::vector<bool>& labels) {
    if (coords.size() != labels.size())
        throw std::invalid_argument("quadratic_accuracy_1d: size mismatch");
    detail::require_two_classes(labels, "quadratic_accuracy_1d");
    return detail::lifted_fisher_accuracy(detail::monomial_lift_1d(coords), labels);
}

/// Mean silhouette value over all points with the two endpoint classes as
/// clusters: s = (b - a)/max(a, b), a = mean distance to own class (excluding
/// self), b = mean distance to the other class. A point whose class is a
/// singleton contributes 0, as does a point with a = b = 0.
inline double silhouette(const Matrix& points, const std::vector<bool>& labels) {
    const std::size_t n = points.rows();
    if (n != labels.size()) throw std::invalid_argument("silhouette: size mismatch");
    if (n < 3) throw std::invalid_argument("silhouette: need at least 3 points");
    detail::require_two_classes(labels, "silhouette");

    const std::size_t n_pos = detail::count_positives(labels);
    const std::size_t n_neg = n - n_pos;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = labels[i] ? n_pos : n_neg;
        if (own == 1) continue;  // singleton contributes 0
        double sum_own = 0.0, sum_other = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double sq = 0.0;
            for (std::size_t c = 0; c < points.cols(); ++c) {
                const double diff = points(i, c) - points(j, c);
                sq += diff * diff;
            }
            const double dist = std::sqrt(sq);
            if (labels[j] == labels[i])
                sum_own += dist;
            else
                sum_other += dist;
        }
        const double a = sum_own / static_cast<double>(own - 1);
        const double b = sum_other / static_cast<double>(n - own);
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

/// Metrics for one embedding. primary_accuracy is the ranking metric: the
/// 1D threshold accuracy for k = 1, the linear Fisher accuracy for k = 2.
struct MethodMetrics {
    std::string method;
    std::size_t dims = 0;
    double primary_accuracy = 0.0;
    double quadratic_accuracy = 0.0;
    double silhouette_value = 0.0;
    std::string verdict;  // "linear adequate" or "nonlinear boundary indicated"
    std::optional<ThresholdClassifier> threshold;  // present for k = 1
    std::optional<LinearClassifier2d> linear;      // present for k = 2
};

/// Embeddings ranked best first: by primary accuracy, then silhouette, then
/// method name, then dims.
struct SeparabilityReport {
    std::vector<MethodMetrics> ranked;
};

inline constexpr double linear_adequacy_margin = 0.02;

inline SeparabilityReport compare_methods(const std::vector<Embedding>& embeddings,
                                          const std::vector<bool>& labels) {
    if (embeddings.empty()) throw std::invalid_argument("compare_methods: no embeddings");
    detail::require_two_classes(labels, "compare_methods");

    SeparabilityReport report;
    report.ranked.reserve(embeddings.size());
    for (const Embedding& e : embeddings) {
        if (e.coords.rows() != labels.size())
            throw std::invalid_argument("compare_methods: embedding '" + e.method +
                                        "' has a different number of points than the labels");
        if (e.dims != e.coords.cols() || (e.dims != 1 && e.dims != 2))
            throw std::invalid_argument("compare_methods: embedding '" + e.method +
                                        "' must be N x 1 or N x 2");

        MethodMetrics m;
        m.method = e.method;
        m.dims = e.dims;
        m.silhouette_value = silhouette(e.coords, labels);
        if (e.dims == 1) {
            std::vector<double> coords(e.coords.rows());
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = e.coords(i, 0);
            const ThresholdClassifier t = threshold_accuracy_1d(coords, labels);
            m.threshold = t;
            m.primary_accuracy = t.accuracy;
            m.quadratic_accuracy = quadratic_accuracy_1d(coords, labels);
        } else {
            const LinearClassifier2d l = linear_accuracy_2d(e.coords, labels);
            m.linear = l;
            m.primary_accuracy = l.accuracy;
            m.quadratic_accuracy = quadratic_accuracy_2d(e.coords, labels);
        }
        m.verdict = m.primary_accuracy >= m.quadratic_accuracy - linear_adequacy_margin
                        ? "linear adequate"
                        : "nonlinear boundary indicated";
        report.ranked.push_back(std::move(m));
    }

    std::stable_sort(report.ranked.begin(), report.ranked.end(),
                     [](const MethodMetrics& a, const MethodMetrics& b) {
                         if (a.primary_accuracy != b.primary_accuracy)
                             return a.primary_accuracy > b.primary_accuracy;
                         if (a.silhouette_value != b.silhouette_value)
                             return a.silhouette_value > b.silhouette_value;
                         if (a.method != b.method) return a.method < b.method;
                         return a.dims < b.dims;
                     });
    return report;
}

}  // namespace qsarmap
