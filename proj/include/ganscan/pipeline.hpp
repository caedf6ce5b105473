#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ganscan/csvio.hpp"
#include "ganscan/evaluate.hpp"
#include "ganscan/features.hpp"
#include "ganscan/simulate.hpp"
#include "ganscan/svm.hpp"

namespace ganscan {

/// End-to-end experiment parameters. Everything downstream derives from
/// `seed`, so a stored config re-runs to identical artifacts.
struct ExperimentConfig {
    std::uint64_t seed = 42;
    SimConfig sim; // per-class corpus shape; sim.seed is derived from `seed`
    FeatureSet features = FeatureSet::SaturationOver;
    int bins = 64;
    double lambda = 0.0; // <= 0 picks 1/n
    int epochs = 200;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string format_experiment_config(const ExperimentConfig& cfg);

/// Train and test corpora draw from disjoint seed streams of one base seed.
std::uint64_t train_corpus_seed(std::uint64_t base_seed);
std::uint64_t test_corpus_seed(std::uint64_t base_seed);

struct SimulateResult {
    std::vector<ManifestRow> manifest;
    double mean_f_over_255_camera = 0.0;
    double mean_f_over_255_gan = 0.0;
};

/// Writes `{label}_{index:06}.png` per image for both classes plus
/// manifest.csv into `out_dir`, creating it if needed.
SimulateResult simulate_corpus_dir(const SimConfig& cfg, const std::filesystem::path& out_dir,
                                   int jobs = 1);

struct ExtractResult {
    std::vector<FeatureRow> rows;
    std::vector<std::string> skipped; // undecodable paths, logged and left out
};

/// Decodes every manifest entry (paths resolved against the manifest's
/// directory) and extracts the selected features.
ExtractResult extract_from_manifest(const std::filesystem::path& manifest_path, FeatureSet fs,
                                    int bins = 64, int jobs = 1);

/// Extracts from loose image files (no manifest); every row gets `label`.
ExtractResult extract_from_files(const std::vector<std::filesystem::path>& files, int label,
                                 FeatureSet fs, int bins = 64, int jobs = 1);

/// PNG/JPEG files directly under `dir`, sorted by name.
std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir);

std::vector<ScoreRow> score_rows(const LinearModel& model, std::span<const FeatureRow> rows);

struct ReproduceSummary {
    double auc_over_only = 0.0;
    double auc_over_and_under = 0.0;
    double auc_difference = 0.0; // over_only minus over_and_under
    double mean_f_over_255_gan = 0.0;    // test corpus
    double mean_f_over_255_camera = 0.0; // test corpus
};

/// The full experiment: simulate train/test corpora, extract saturation
/// features, train one SVM per feature configuration, score the test side and
/// emit ROC curves plus a summary table under `out_dir`.
ReproduceSummary run_reproduce(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                               int jobs = 1);

} // namespace ganscan
