#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ganscan/evaluate.hpp"
#include "ganscan/features.hpp"

namespace ganscan {

/// Formats a double with full round-trip precision (>= 9 significant digits).
std::string csv_double(double v);

/// Shortest decimal form that parses back to the same double; used for
/// human-facing values like the printed AUC.
std::string short_double(double v);

/// Feature CSV: header `path,label,f1..fN`, labels in {0,1}.
void write_features_csv(std::span<const FeatureRow> rows, const std::filesystem::path& path);
std::vector<FeatureRow> read_features_csv(const std::filesystem::path& path);

/// Scores CSV: header `path,label,score`.
struct ScoreRow {
    std::string path;
    int label = 0;
    double score = 0.0;
};
void write_scores_csv(std::span<const ScoreRow> rows, const std::filesystem::path& path);
std::vector<ScoreRow> read_scores_csv(const std::filesystem::path& path);

/// Corpus manifest: header `path,label,seed`; paths relative to the manifest.
struct ManifestRow {
    std::string path;
    int label = 0;
    std::uint64_t seed = 0;
};
void write_manifest_csv(std::span<const ManifestRow> rows, const std::filesystem::path& path);
std::vector<ManifestRow> read_manifest_csv(const std::filesystem::path& path);

/// Splits one CSV record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace ganscan
