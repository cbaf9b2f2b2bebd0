#pragma once

#include <cstddef>
#include <string>

#include "qsarmap/matrix.hpp"

namespace qsarmap {

/// Low-dimensional coordinates produced by one mapping method, with enough
/// provenance to reproduce and report the run.
struct Embedding {
    std::string method;  // "pca" | "nlpca" | "sammon"
    std::size_t dims = 0;
    Matrix coords;  // N x dims
    int iterations = 0;
    bool converged = true;
    std::string objective_name;  // "stress", "mse", or empty
    double final_objective = 0.0;
};

}  // namespace qsarmap
