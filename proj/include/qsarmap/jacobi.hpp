#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qsarmap/matrix.hpp"

namespace qsarmap {

/// Full spectrum of a symmetric matrix. Eigenvalues sorted descending,
/// eigenvectors stored as columns aligned with the eigenvalues.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
    int sweeps = 0;
    double off_diagonal_norm = 0.0;
};

namespace detail {

inline double off_diagonal_frobenius(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

inline double frobenius(const Matrix& a) {
    double s = 0.0;
    for (double x : a.values()) s += x * x;
    return std::sqrt(s);
}

}  // namespace detail

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps over all (p, q) pairs until the off-diagonal Frobenius norm drops
/// below 1e-12 relative to the input scale, capped at 100 sweeps. Eigenvector
/// signs are fixed so the largest-magnitude entry of each column is positive
/// (first such entry on ties), which makes the output deterministic.
inline EigenDecomposition eigendecompose_symmetric(const Matrix& input) {
    const std::size_t d = input.rows();
    if (d == 0 || input.cols() != d)
        throw std::invalid_argument("eigendecompose_symmetric: matrix must be square and non-empty");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(input(i, j) - input(j, i)) > 1e-10)
                throw std::invalid_argument("eigendecompose_symmetric: matrix is not symmetric");

    Matrix a = input;
    Matrix v = Matrix::identity(d);
    const double tol = 1e-12 * std::max(1.0, detail::frobenius(input));
    constexpr int max_sweeps = 100;

    int sweeps = 0;
    double off = detail::off_diagonal_frobenius(a);
    while (off > tol) {
        if (sweeps == max_sweeps) {
            std::ostringstream msg;
            msg << "eigendecompose_symmetric: no convergence after " << max_sweeps
                << " sweeps, off-diagonal residual " << off;
            throw std::runtime_error(msg.str());
        }
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < d; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
            }
        }
        ++sweeps;
        off = detail::off_diagonal_frobenius(a);
    }

    // Descending eigenvalue order; stable sort keeps the solver's order on ties.
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(d);
    dec.eigenvectors = Matrix(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t src = order[k];
        dec.eigenvalues[k] = a(src, src);
        std::size_t peak = 0;
        for (std::size_t r = 1; r < d; ++r)
            if (std::abs(v(r, src)) > std::abs(v(peak, src))) peak = r;
        const double sign = v(peak, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < d; ++r) dec.eigenvectors(r, k) = sign * v(r, src);
    }
    dec.sweeps = sweeps;
    dec.off_diagonal_norm = off;
    return dec;
}

}  // namespace qsarmap
