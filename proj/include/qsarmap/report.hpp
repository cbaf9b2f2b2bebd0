#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsarmap/analysis.hpp"
#include "qsarmap/dataset.hpp"

namespace qsarmap {

inline constexpr int report_schema_version = 1;

/// Non-metric facts about one finished (method, dims) job, for the report.
struct MethodRunInfo {
    std::string method;
    std::size_t dims = 0;
    int iterations = 0;
    bool converged = true;
    std::string objective_name;
    double final_objective = 0.0;
    std::string embedding_csv;  // basename of the coordinates file
    std::string plot_svg;       // basename of the scatter plot
};

/// Everything the report records besides the separability metrics:
/// the configuration echo, dataset statistics, and accumulated warnings.
struct RunSummary {
    std::string input_path;
    std::string endpoint;
    std::string threshold_spec;  // "mean" or the literal number text
    double resolved_threshold = 0.0;
    std::vector<std::string> methods;
    std::vector<std::size_t> dims;
    bool normalized = true;
    std::uint64_t seed = 0;
    std::string output_dir;

    int sammon_max_iterations = 0;
    double sammon_step_factor = 0.0;
    std::size_t nlpca_hidden_width = 0;
    double nlpca_learning_rate = 0.0;
    std::size_t nlpca_epochs = 0;

    std::size_t rows_loaded = 0;
    std::size_t duplicates_removed = 0;
    std::size_t n_compounds = 0;
    std::size_t n_descriptors = 0;
    EndpointLabeling labeling;

    std::vector<MethodRunInfo> runs;
    std::vector<std::string> warnings;
};

namespace detail {

inline const MethodRunInfo* find_run_info(const RunSummary& summary, const std::string& method,
                                          std::size_t dims) {
    for (const MethodRunInfo& info : summary.runs)
        if (info.method == method && info.dims == dims) return &info;
    return nullptr;
}

}  // namespace detail

/// Report document with stable key order. The results array is in ranking
/// order (best first); the ranking array repeats the (method, dims) pairs
/// for quick access.
inline nlohmann::ordered_json build_report_json(const SeparabilityReport& report,
                                                const RunSummary& summary) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = report_schema_version;

    nlohmann::ordered_json config;
    config["input"] = summary.input_path;
    config["endpoint"] = summary.endpoint;
    config["threshold"] = summary.threshold_spec;
    config["methods"] = summary.methods;
    config["dims"] = summary.dims;
    config["normalize"] = summary.normalized;
    config["seed"] = summary.seed;
    config["out"] = summary.output_dir;
    config["sammon"] = {{"max_iterations", summary.sammon_max_iterations},
                        {"step_factor", summary.sammon_step_factor}};
    config["nlpca"] = {{"hidden_width", summary.nlpca_hidden_width},
                       {"learning_rate", summary.nlpca_learning_rate},
                       {"epochs", summary.nlpca_epochs}};
    doc["config"] = std::move(config);

    nlohmann::ordered_json dataset;
    dataset["rows_loaded"] = summary.rows_loaded;
    dataset["duplicates_removed"] = summary.duplicates_removed;
    dataset["compounds"] = summary.n_compounds;
    dataset["descriptors"] = summary.n_descriptors;
    dataset["threshold"] = summary.resolved_threshold;
    dataset["positive_class"] = summary.labeling.class_names.first;
    dataset["negative_class"] = summary.labeling.class_names.second;
    dataset["positives"] = summary.labeling.positives;
    dataset["negatives"] = summary.labeling.negatives;
    doc["dataset"] = std::move(dataset);

    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
    for (const MethodMetrics& m : report.ranked) {
        nlohmann::ordered_json block;
        block["method"] = m.method;
        block["dims"] = m.dims;

        nlohmann::ordered_json metrics;
        if (m.dims == 1)
            metrics["threshold_accuracy"] = m.primary_accuracy;
        else
            metrics["linear_accuracy"] = m.primary_accuracy;
        metrics["quadratic_accuracy"] = m.quadratic_accuracy;
        metrics["silhouette"] = m.silhouette_value;
        block["metrics"] = std::move(metrics);

        nlohmann::ordered_json classifier;
        if (m.threshold) {
            classifier["cut"] = m.threshold->cut;
            classifier["polarity"] = m.threshold->polarity;
        } else if (m.linear) {
            classifier["direction"] = {m.linear->direction[0], m.linear->direction[1]};
            classifier["cut"] = m.linear->cut;
        }
        block["classifier"] = std::move(classifier);
        block["verdict"] = m.verdict;

        if (const MethodRunInfo* info = detail::find_run_info(summary, m.method, m.dims)) {
            block["trace"] = {{"iterations", info->iterations},
                              {"converged", info->converged},
                              {"objective", info->objective_name},
                              {"final_value", info->final_objective}};
            block["files"] = {{"embedding_csv", info->embedding_csv},
                              {"plot_svg", info->plot_svg}};
        }
        results.push_back(std::move(block));
        ranking.push_back({{"method", m.method}, {"dims", m.dims}});
    }
    doc["results"] = std::move(results);
    doc["ranking"] = std::move(ranking);
    doc["warnings"] = summary.warnings;
    return doc;
}

inline void emit_report_json(const SeparabilityReport& report, const RunSummary& summary,
                             const std::filesystem::path& path) {
    const nlohmann::ordered_json doc = build_report_json(report, summary);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report_json: cannot open " + path.string());
    const std::string text = doc.dump(2);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out << '\n';
    if (!out) throw std::runtime_error("emit_report_json: write failed for " + path.string());
}

}  // namespace qsarmap
