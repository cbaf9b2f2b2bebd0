#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsarmap/analysis.hpp"
#include "qsarmap/dataset.hpp"
#include "qsarmap/embedding.hpp"
#include "qsarmap/nlpca.hpp"
#include "qsarmap/pca.hpp"
#include "qsarmap/report.hpp"
#include "qsarmap/sammon.hpp"
#include "qsarmap/svg.hpp"

namespace qsarmap {

/// Error from a pipeline stage; what() is "<stage>: <message>".
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct RunConfig {
    std::filesystem::path input;
    std::string endpoint;
    std::string threshold_spec = "mean";  // "mean" or a number in decimal text
    std::vector<std::string> methods = {"pca", "nlpca", "sammon"};
    std::vector<std::size_t> dims = {1, 2};
    bool normalize = true;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";

    int sammon_max_iterations = 500;
    double sammon_step_factor = 0.35;
    std::size_t nlpca_hidden_width = 8;
    double nlpca_learning_rate = 0.01;
    std::size_t nlpca_epochs = 2000;

    bool write_artifacts = true;  // tests can run the pipeline in memory
};

struct RunResult {
    RunSummary summary;
    SeparabilityReport report;
    std::vector<Embedding> embeddings;  // in (method, dim) request order
    std::filesystem::path report_path;
};

namespace detail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

/// Independent stream per (method, k) job so adding a method never shifts
/// another method's draws.
inline std::uint64_t derive_seed(std::uint64_t base, const std::string& method, std::size_t k) {
    std::uint64_t h = 1469598103934665603ULL ^ base;
    for (char c : method) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    h ^= static_cast<std::uint64_t>(k);
    h *= 1099511628211ULL;
    return h;
}

inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::vector<std::string> unique_in_order(std::vector<std::string> items) {
    std::vector<std::string> out;
    for (std::string& item : items)
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(std::move(item));
    return out;
}

}  // namespace detail

/// Coordinates file: header "id,c1,label" (k=1) or "id,c1,c2,label" (k=2);
/// label is 1 for the positive class, 0 for the negative. Values use
/// shortest round-trip decimal text.
inline void write_embedding_csv(const Embedding& e, const std::vector<std::string>& ids,
                                const EndpointLabeling& labeling,
                                const std::filesystem::path& path) {
    if (e.coords.rows() != ids.size() || ids.size() != labeling.labels.size())
        throw std::invalid_argument("write_embedding_csv: size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_embedding_csv: cannot open " + path.string());
    out << "id,c1";
    if (e.dims == 2) out << ",c2";
    out << ",label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i];
        for (std::size_t c = 0; c < e.dims; ++c)
            out << ',' << detail::format_double(e.coords(i, c));
        out << ',' << (labeling.labels[i] ? '1' : '0') << '\n';
    }
    if (!out) throw std::runtime_error("write_embedding_csv: write failed for " + path.string());
}

struct EmbeddingCsv {
    std::vector<std::string> ids;
    Matrix coords;
    std::vector<bool> labels;
};

inline EmbeddingCsv read_embedding_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_embedding_csv: cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("read_embedding_csv: empty file");
    std::size_t dims = 0;
    if (header == "id,c1,label")
        dims = 1;
    else if (header == "id,c1,c2,label")
        dims = 2;
    else
        throw std::runtime_error("read_embedding_csv: unexpected header '" + header + "'");

    EmbeddingCsv result;
    std::vector<double> flat;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string_view> fields = detail::split_fields(line);
        if (fields.size() != dims + 2)
            throw std::runtime_error("read_embedding_csv: wrong field count in '" + line + "'");
        result.ids.emplace_back(fields[0]);
        for (std::size_t c = 0; c < dims; ++c) {
            double value = 0.0;
            const auto* first = fields[1 + c].data();
            const auto* last = first + fields[1 + c].size();
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last)
                throw std::runtime_error("read_embedding_csv: bad number in '" + line + "'");
            flat.push_back(value);
        }
        if (fields[dims + 1] == "1")
            result.labels.push_back(true);
        else if (fields[dims + 1] == "0")
            result.labels.push_back(false);
        else
            throw std::runtime_error("read_embedding_csv: bad label in '" + line + "'");
    }
    result.coords = Matrix(result.ids.size(), dims);
    std::copy(flat.begin(), flat.end(), result.coords.values().begin());
    return result;
}

namespace detail {

inline Embedding compute_embedding(const std::string& method, std::size_t k, const Matrix& data,
                                   const RunConfig& config, std::vector<std::string>& warnings) {
    const std::string job = method + " k=" + std::to_string(k);
    if (method == "pca") {
        const PcaModel model = fit_pca(data, k);
        Embedding e = project(model, data);
        double explained = 0.0;
        for (double v : model.explained_variance) explained += v;
        e.objective_name = "explained_variance_ratio";
        e.final_objective = model.total_variance > 0.0 ? explained / model.total_variance : 1.0;
        return e;
    }
    if (method == "sammon") {
        SammonConfig sc;
        sc.step_factor = config.sammon_step_factor;
        sc.max_iterations = config.sammon_max_iterations;
        sc.seed = derive_seed(config.seed, method, k);
        SammonResult result = embed(data, k, sc);
        if (result.clamped_pairs > 0)
            warnings.push_back(job + ": " + std::to_string(result.clamped_pairs) +
                               " zero input distances clamped to 1e-12");
        if (!result.trace.converged)
            warnings.push_back(job + ": stopped at the iteration cap (" +
                               std::to_string(config.sammon_max_iterations) +
                               ") before meeting the tolerance");
        return std::move(result.embedding);
    }
    if (method == "nlpca") {
        TrainConfig tc;
        tc.hidden_width = config.nlpca_hidden_width;
        tc.learning_rate = config.nlpca_learning_rate;
        tc.epochs = config.nlpca_epochs;
        tc.seed = derive_seed(config.seed, method, k);
        const TrainResult result = train(data, k, tc);
        return encode(result.network, data, result.trace.final_mse,
                      static_cast<int>(config.nlpca_epochs));
    }
    throw std::invalid_argument("unknown method '" + method + "'");
}

}  // namespace detail

/// Full pipeline: load -> deduplicate -> (normalize) -> label -> one
/// embedding per requested (method, dim) -> separability comparison ->
/// artifacts (per-embedding CSV + SVG, one JSON report). Stage failures
/// throw StageError; everything is deterministic given the seed.
inline RunResult run(const RunConfig& config) {
    detail::stage("config", [&]() {
        if (config.methods.empty()) throw std::invalid_argument("no methods requested");
        if (config.dims.empty()) throw std::invalid_argument("no dims requested");
        for (const std::string& m : config.methods)
            if (m != "pca" && m != "nlpca" && m != "sammon")
                throw std::invalid_argument("unknown method '" + m +
                                            "' (expected pca, nlpca, or sammon)");
        for (std::size_t k : config.dims)
            if (k != 1 && k != 2)
                throw std::invalid_argument("dims must be 1 or 2, got " + std::to_string(k));
        if (config.threshold_spec != "mean") {
            double value = 0.0;
            const auto* first = config.threshold_spec.data();
            const auto* last = first + config.threshold_spec.size();
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last)
                throw std::invalid_argument("threshold must be a number or \"mean\", got '" +
                                            config.threshold_spec + "'");
        }
        return 0;
    });

    RunResult result;
    RunSummary& summary = result.summary;
    summary.input_path = config.input.string();
    summary.endpoint = config.endpoint;
    summary.threshold_spec = config.threshold_spec;
    summary.methods = detail::unique_in_order(config.methods);
    for (std::size_t k : config.dims)
        if (std::find(summary.dims.begin(), summary.dims.end(), k) == summary.dims.end())
            summary.dims.push_back(k);
    summary.normalized = config.normalize;
    summary.seed = config.seed;
    summary.output_dir = config.out_dir.string();
    summary.sammon_max_iterations = config.sammon_max_iterations;
    summary.sammon_step_factor = config.sammon_step_factor;
    summary.nlpca_hidden_width = config.nlpca_hidden_width;
    summary.nlpca_learning_rate = config.nlpca_learning_rate;
    summary.nlpca_epochs = config.nlpca_epochs;

    DescriptorTable table =
        detail::stage("load", [&]() { return load_csv(config.input, config.endpoint); });
    summary.rows_loaded = table.n_compounds();

    DedupResult dedup = detail::stage("deduplicate", [&]() { return deduplicate(table); });
    table = std::move(dedup.table);
    summary.duplicates_removed = dedup.removed;
    for (std::string& w : dedup.warnings) summary.warnings.push_back(std::move(w));
    summary.n_compounds = table.n_compounds();
    summary.n_descriptors = table.n_descriptors();

    if (config.normalize)
        table = detail::stage("normalize", [&]() { return normalize(table); });

    const EndpointLabeling labeling = detail::stage("label", [&]() {
        double threshold = 0.0;
        if (config.threshold_spec == "mean") {
            threshold = mean_threshold(table);
        } else {
            const auto* first = config.threshold_spec.data();
            std::from_chars(first, first + config.threshold_spec.size(), threshold);
        }
        return label(table, threshold);
    });
    summary.resolved_threshold = labeling.threshold;
    summary.labeling = labeling;

    for (const std::string& method : summary.methods) {
        for (std::size_t k : summary.dims) {
            const std::string job = method + " k=" + std::to_string(k);
            Embedding e = detail::stage(("embed " + job).c_str(), [&]() {
                return detail::compute_embedding(method, k, table.values, config,
                                                 summary.warnings);
            });
            MethodRunInfo info;
            info.method = e.method;
            info.dims = e.dims;
            info.iterations = e.iterations;
            info.converged = e.converged;
            info.objective_name = e.objective_name;
            info.final_objective = e.final_objective;
            const std::string base = method + "_" + std::to_string(k) + "d";
            info.embedding_csv = base + ".csv";
            info.plot_svg = base + ".svg";
            summary.runs.push_back(std::move(info));
            result.embeddings.push_back(std::move(e));
        }
    }

    result.report = detail::stage(
        "analyze", [&]() { return compare_methods(result.embeddings, labeling.labels); });

    if (config.write_artifacts) {
        detail::stage("write", [&]() {
            std::filesystem::create_directories(config.out_dir);
            for (std::size_t i = 0; i < result.embeddings.size(); ++i) {
                const MethodRunInfo& info = summary.runs[i];
                write_embedding_csv(result.embeddings[i], table.compound_ids, labeling,
                                    config.out_dir / info.embedding_csv);
                emit_scatter_svg(result.embeddings[i], labeling, config.out_dir / info.plot_svg);
            }
            result.report_path = config.out_dir / "report.json";
            emit_report_json(result.report, summary, result.report_path);
            return 0;
        });
    }
    return result;
}

}  // namespace qsarmap
