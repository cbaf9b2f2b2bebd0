#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qsarmap/qsarmap.hpp>

int main(int argc, char** argv) {
    CLI::App app{
        "Map a descriptor table to 1 or 2 dimensions (PCA, autoencoder NLPCA, Sammon) "
        "and score how well the embeddings separate the two endpoint classes."};

    qsarmap::RunConfig config;
    std::string input;
    std::string out_dir = "qsarmap-out";

    app.add_option("--input", input, "Descriptor CSV (id column first, one endpoint column)")
        ->required();
    app.add_option("--endpoint", config.endpoint, "Name of the endpoint column")->required();
    app.add_option("--threshold", config.threshold_spec,
                   "Class threshold: a number, or \"mean\" for the endpoint mean")
        ->capture_default_str();
    app.add_option("--methods", config.methods, "Subset of pca,nlpca,sammon")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--dims", config.dims, "Target dimensions, subset of 1,2")
        ->delimiter(',')
        ->capture_default_str();
    app.add_flag("--no-normalize", [&config](std::int64_t) { config.normalize = false; },
                 "Skip per-descriptor z-score normalization");
    app.add_option("--seed", config.seed, "Seed for every stochastic step")
        ->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--sammon-iters", config.sammon_max_iterations, "Sammon iteration cap")
        ->capture_default_str();
    app.add_option("--sammon-step", config.sammon_step_factor, "Sammon step factor")
        ->capture_default_str();
    app.add_option("--nlpca-hidden", config.nlpca_hidden_width,
                   "Autoencoder hidden layer width")
        ->capture_default_str();
    app.add_option("--nlpca-lr", config.nlpca_learning_rate, "Autoencoder learning rate")
        ->capture_default_str();
    app.add_option("--nlpca-epochs", config.nlpca_epochs, "Autoencoder training epochs")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    config.input = input;
    config.out_dir = out_dir;

    try {
        const qsarmap::RunResult result = qsarmap::run(config);
        const qsarmap::RunSummary& s = result.summary;
        std::cout << "loaded " << s.rows_loaded << " rows -> " << s.n_compounds
                  << " compounds x " << s.n_descriptors << " descriptors ("
                  << s.duplicates_removed << " duplicates removed)\n";
        std::cout << "threshold " << s.resolved_threshold << " on '" << s.endpoint << "' -> "
                  << s.labeling.positives << " positive / " << s.labeling.negatives
                  << " negative\n";
        for (const qsarmap::MethodMetrics& m : result.report.ranked) {
            std::cout << m.method << " k=" << m.dims << ": "
                      << (m.dims == 1 ? "threshold" : "linear") << " accuracy "
                      << m.primary_accuracy << ", quadratic " << m.quadratic_accuracy
                      << ", silhouette " << m.silhouette_value << " -> " << m.verdict << "\n";
        }
        for (const std::string& w : s.warnings) std::cout << "warning: " << w << "\n";
        std::cout << "report: " << result.report_path.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        // StageError::what() already carries the failing stage name.
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
