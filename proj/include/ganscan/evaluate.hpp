#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ganscan/features.hpp"
#include "ganscan/image.hpp"
#include "ganscan/svm.hpp"

namespace ganscan {

struct ScoredExample {
    double score = 0.0;
    int label = 0; // 0 = camera/real, 1 = GAN
};

/// ROC points from (0,0) to (1,1), fpr/tpr non-decreasing, tied scores taking
/// one diagonal step. auc is the trapezoidal area.
struct RocCurve {
    std::vector<std::pair<double, double>> points; // (fpr, tpr)
    double auc = 0.0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
};

/// Threshold sweep over distinct score values, ties grouped, trapezoidal AUC.
/// Throws Error{SingleClassData} unless both labels are present.
RocCurve roc_curve(std::span<const ScoredExample> data);

/// Mann-Whitney statistic by direct pair enumeration: 1 per correctly ordered
/// (positive, negative) pair, 0.5 per tie. Independent check for roc_curve.
double auc_oracle(std::span<const ScoredExample> data);

void write_roc_csv(const RocCurve& roc, const std::filesystem::path& path);
RocCurve read_roc_csv(const std::filesystem::path& path);

/// Standalone SVG line plot of the curve on [0,1]^2 with a diagonal reference.
void write_roc_svg(const RocCurve& roc, const std::filesystem::path& path);

struct LabeledImage {
    RgbImage image;
    int label = 0;
};

/// Extracts the selected features from both corpora, trains the SVM on the
/// training side, scores the test side and returns its ROC.
RocCurve run_ablation(std::span<const LabeledImage> train, std::span<const LabeledImage> test,
                      FeatureSet feature_set, const TrainOptions& opts = {}, int bins = 64);

struct AblationReport {
    RocCurve over_only;
    RocCurve over_and_under;
    double auc_difference = 0.0; // over_only minus over_and_under
};

/// Runs the over-only and over+under configurations side by side on
/// identical corpora.
AblationReport run_ablation_pair(std::span<const LabeledImage> train,
                                 std::span<const LabeledImage> test,
                                 const TrainOptions& opts = {});

} // namespace ganscan
