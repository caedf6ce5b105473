#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ganscan/features.hpp"

namespace ganscan {

struct TrainOptions {
    double lambda = 0.0; // <= 0 picks the Pegasos default 1/n
    int epochs = 200;
    std::uint64_t seed = 0;
    bool standardize = true;
};

/// Linear SVM decision function plus the feature standardization baked in at
/// training time. score(x) = w . (x - means) / scales + bias; positive class
/// (label 1, GAN) scores high.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> feature_means;
    std::vector<double> feature_scales;
    double lambda = 0.0;
    bool standardized = true;

    struct TrainingMeta {
        std::uint64_t iterations = 0;
        int epochs = 0;
        std::uint64_t seed = 0;
        double final_objective = 0.0;
    } training_meta;

    std::size_t dimension() const { return weights.size(); }
};

/// Minimizes (lambda/2)||w||^2 + (1/n) sum max(0, 1 - y_i (w.x_i + b)) with
/// labels mapped {0 -> -1, 1 -> +1} by epoch-shuffled subgradient descent,
/// step 1/(lambda t). Deterministic for a fixed seed.
LinearModel train_svm(std::span<const FeatureRow> data, const TrainOptions& opts = {});

double score(const LinearModel& model, std::span<const double> x);

/// 1 when score > 0, else 0 (an exact zero scores as class 0).
int predict(const LinearModel& model, std::span<const double> x);

/// Objective the trainer minimizes, evaluated on already-standardized inputs.
double svm_objective(std::span<const std::vector<double>> x, std::span<const int> y,
                     std::span<const double> w, double bias, double lambda);

std::string model_to_json(const LinearModel& model);
LinearModel model_from_json(const std::string& text);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

} // namespace ganscan
