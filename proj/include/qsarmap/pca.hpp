#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsarmap/dataset.hpp"
#include "qsarmap/embedding.hpp"
#include "qsarmap/jacobi.hpp"
#include "qsarmap/matrix.hpp"

namespace qsarmap {

/// Linear PCA model: column mean, top-k eigenvectors of the sample
/// covariance (as columns of `components`), and their eigenvalues.
struct PcaModel {
    std::vector<double> mean;
    Matrix components;  // d x k
    std::vector<double> explained_variance;
    double total_variance = 0.0;
};

/// Sample covariance (divisor N-1) of mean-centered data. Each entry is
/// computed once and mirrored, so the result is exactly symmetric.
inline Matrix covariance(const Matrix& data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (n < 2) throw std::invalid_argument("covariance: need at least 2 rows");

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += data(i, j);
    for (double& m : mean) m /= static_cast<double>(n);

    Matrix c(d, d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += (data(i, a) - mean[a]) * (data(i, b) - mean[b]);
            s /= static_cast<double>(n - 1);
            c(a, b) = s;
            c(b, a) = s;
        }
    }
    return c;
}

inline PcaModel fit_pca(const Matrix& data, std::size_t k) {
    const std::size_t d = data.cols();
    if (k == 0 || k > d) throw std::invalid_argument("fit_pca: k must be in [1, d]");
    const Matrix c = covariance(data);
    const EigenDecomposition dec = eigendecompose_symmetric(c);

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += data(i, j);
    for (double& m : model.mean) m /= static_cast<double>(data.rows());

    model.components = Matrix(d, k);
    model.explained_variance.resize(k);
    for (std::size_t col = 0; col < k; ++col) {
        model.explained_variance[col] = dec.eigenvalues[col];
        for (std::size_t r = 0; r < d; ++r) model.components(r, col) = dec.eigenvectors(r, col);
    }
    model.total_variance = 0.0;
    for (std::size_t j = 0; j < d; ++j) model.total_variance += c(j, j);
    return model;
}

inline PcaModel fit_pca(const DescriptorTable& table, std::size_t k) {
    return fit_pca(table.values, k);
}

/// Projects rows onto the model: output row i = components^T * (row_i - mean).
inline Matrix project_matrix(const PcaModel& model, const Matrix& data) {
    const std::size_t d = model.mean.size();
    const std::size_t k = model.components.cols();
    if (data.cols() != d) throw std::invalid_argument("project: data has wrong column count");
    Matrix out(data.rows(), k);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t col = 0; col < k; ++col) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                s += model.components(j, col) * (data(i, j) - model.mean[j]);
            out(i, col) = s;
        }
    }
    return out;
}

inline Embedding project(const PcaModel& model, const Matrix& data) {
    Embedding e;
    e.method = "pca";
    e.coords = project_matrix(model, data);
    e.dims = e.coords.cols();
    return e;
}

}  // namespace qsarmap
