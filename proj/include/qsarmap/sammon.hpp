#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qsarmap/embedding.hpp"
#include "qsarmap/matrix.hpp"
#include "qsarmap/pca.hpp"
#include "qsarmap/rng.hpp"

namespace qsarmap {

/// Symmetric input-space distance matrix with a zero diagonal. Off-diagonal
/// zeros (coincident points) are clamped to `distance_floor` so the stress
/// denominators stay well-defined; the clamp count is kept as a warning.
struct DistanceMatrix {
    static constexpr double distance_floor = 1e-12;
    Matrix entries;
    std::size_t clamped_pairs = 0;

    std::size_t size() const { return entries.rows(); }
};

struct SammonConfig {
    enum class Init { PcaProjection, SeededRandom };
    double step_factor = 0.35;  // Sammon's "magic factor"
    int max_iterations = 500;
    double relative_tolerance = 1e-9;
    Init init = Init::PcaProjection;
    std::uint64_t seed = 0;
};

struct SammonTrace {
    std::vector<double> stress_per_iteration;  // entry 0 = stress of the initial layout
    bool converged = false;
    int iterations_used = 0;
};

struct SammonResult {
    Embedding embedding;
    SammonTrace trace;
    std::size_t clamped_pairs = 0;
};

inline DistanceMatrix pairwise_distances(const Matrix& data) {
    const std::size_t n = data.rows();
    if (n < 2) throw std::invalid_argument("pairwise_distances: need at least 2 points");
    DistanceMatrix dm;
    dm.entries = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < data.cols(); ++c) {
                const double diff = data(i, c) - data(j, c);
                s += diff * diff;
            }
            double dist = std::sqrt(s);
            if (dist == 0.0) {
                dist = DistanceMatrix::distance_floor;
                ++dm.clamped_pairs;
            }
            dm.entries(i, j) = dist;
            dm.entries(j, i) = dist;
        }
    }
    return dm;
}

namespace detail {

inline double output_distance(const Matrix& y, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t c = 0; c < y.cols(); ++c) {
        const double diff = y(i, c) - y(j, c);
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace detail

/// Sammon stress E = (1/c) * sum_{i<j} (D_ij - d_ij)^2 / D_ij with
/// c = sum_{i<j} D_ij and d_ij the output-space Euclidean distance.
inline double stress(const DistanceMatrix& d_in, const Matrix& y) {
    const std::size_t n = d_in.size();
    if (y.rows() != n) throw std::invalid_argument("stress: row count mismatch");
    double c = 0.0;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double target = d_in.entries(i, j);
            const double diff = target - detail::output_distance(y, i, j);
            c += target;
            e += diff * diff / target;
        }
    }
    return e / c;
}

struct StressDerivatives {
    Matrix gradient;          // dE/dy
    Matrix hessian_diagonal;  // d2E/dy2, the diagonal terms only
};

/// Analytic first derivative and diagonal second derivative of the stress,
/// following Sammon's pseudo-Newton scheme. Output distances are clamped
/// below by 1e-12 to keep the terms finite near coincident layouts.
inline StressDerivatives stress_gradient(const DistanceMatrix& d_in, const Matrix& y) {
    const std::size_t n = d_in.size();
    const std::size_t k = y.cols();
    if (y.rows() != n) throw std::invalid_argument("stress_gradient: row count mismatch");

    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) c += d_in.entries(i, j);

    StressDerivatives out{Matrix(n, k), Matrix(n, k)};
    const double scale = -2.0 / c;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double target = d_in.entries(i, j);
            const double dist = std::max(detail::output_distance(y, i, j), 1e-12);
            const double diff = target - dist;
            const double denom = target * dist;
            for (std::size_t l = 0; l < k; ++l) {
                const double dy = y(i, l) - y(j, l);
                out.gradient(i, l) += scale * (diff / denom) * dy;
                out.hessian_diagonal(i, l) +=
                    scale / denom * (diff - (dy * dy / dist) * (1.0 + diff / dist));
            }
        }
    }
    return out;
}

/// Sammon's nonlinear mapping: iteratively moves N points in k dimensions so
/// their distances approximate the input-space distances.
///
/// Each iteration takes the diagonal pseudo-Newton step
///   delta = -step_factor * (dE/dy) / |d2E/dy2|
/// and halves it (up to 20 times) whenever it would increase the stress, so
/// the recorded stress trace is non-increasing. Stops when the relative
/// stress change falls below config.relative_tolerance.
inline SammonResult embed(const Matrix& data, std::size_t k, const SammonConfig& config = {}) {
    const std::size_t n = data.rows();
    if (n < 2) throw std::invalid_argument("sammon embed: need at least 2 points");
    if (k == 0) throw std::invalid_argument("sammon embed: k must be positive");

    const DistanceMatrix d_in = pairwise_distances(data);
    if (d_in.clamped_pairs == n * (n - 1) / 2)
        throw std::runtime_error("sammon embed: all points coincide, stress is undefined");

    Matrix y(n, k);
    if (config.init == SammonConfig::Init::PcaProjection && k <= data.cols()) {
        y = project_matrix(fit_pca(data, k), data);
        // The pseudo-Newton update moves exactly-coincident start points in
        // lockstep, so they could never separate; break such ties with a
        // small deterministic jitter.
        bool coincident = false;
        double spread = 0.0;
        for (std::size_t i = 0; i < n && !coincident; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dist = detail::output_distance(y, i, j);
                spread = std::max(spread, dist);
                if (dist < 1e-9) {
                    coincident = true;
                    break;
                }
            }
        if (coincident) {
            double reference = spread;
            if (reference <= 0.0) reference = max_abs(d_in.entries);
            Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
            const double jitter = 1e-4 * std::max(reference, 1e-8);
            for (double& value : y.values()) value += rng.uniform(-jitter, jitter);
        }
    } else {
        Rng rng(config.seed);
        for (double& value : y.values()) value = rng.uniform(-1.0, 1.0);
    }

    SammonTrace trace;
    double current = stress(d_in, y);
    trace.stress_per_iteration.push_back(current);

    Matrix candidate(n, k);
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const StressDerivatives deriv = stress_gradient(d_in, y);
        Matrix delta(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < k; ++l)
                delta(i, l) = -config.step_factor * deriv.gradient(i, l) /
                              std::max(std::abs(deriv.hessian_diagonal(i, l)), 1e-12);

        double next = current;
        bool accepted = false;
        for (int halving = 0; halving <= 20; ++halving) {
            for (std::size_t idx = 0; idx < y.values().size(); ++idx)
                candidate.values()[idx] = y.values()[idx] + delta.values()[idx];
            const double trial = stress(d_in, candidate);
            if (trial <= current) {
                next = trial;
                accepted = true;
                break;
            }
            for (double& value : delta.values()) value *= 0.5;
        }
        if (accepted) y = candidate;

        const double relative_change = (current - next) / std::max(current, 1e-300);
        current = next;
        trace.stress_per_iteration.push_back(current);
        trace.iterations_used = iter;
        if (relative_change < config.relative_tolerance) {
            trace.converged = true;
            break;
        }
    }

    SammonResult result;
    result.trace = trace;
    result.clamped_pairs = d_in.clamped_pairs;
    result.embedding.method = "sammon";
    result.embedding.dims = k;
    result.embedding.coords = y;
    result.embedding.iterations = trace.iterations_used;
    result.embedding.converged = trace.converged;
    result.embedding.objective_name = "stress";
    result.embedding.final_objective = current;
    return result;
}

}  // namespace qsarmap
