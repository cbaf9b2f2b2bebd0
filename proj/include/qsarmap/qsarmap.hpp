#pragma once

// Umbrella header: descriptor-table preprocessing, three dimensionality
// reduction methods (PCA, autoencoder NLPCA, Sammon mapping), separability
// analysis, and the plotting/report pipeline.

#include "qsarmap/analysis.hpp"
#include "qsarmap/dataset.hpp"
#include "qsarmap/embedding.hpp"
#include "qsarmap/jacobi.hpp"
#include "qsarmap/matrix.hpp"
#include "qsarmap/nlpca.hpp"
#include "qsarmap/pca.hpp"
#include "qsarmap/pipeline.hpp"
#include "qsarmap/report.hpp"
#include "qsarmap/rng.hpp"
#include "qsarmap/sammon.hpp"
#include "qsarmap/svg.hpp"
