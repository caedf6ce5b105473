#include "ganscan/svm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ganscan/errors.hpp"
#include "ganscan/rng.hpp"

namespace ganscan {

namespace {

constexpr int kModelFormatVersion = 1;

void check_training_data(std::span<const FeatureRow> data) {
    if (data.empty()) {
        throw Error(ErrorCode::SingleClassData, "train_svm: no training data");
    }
    const std::size_t dim = data.front().values.size();
    bool has_pos = false;
    bool has_neg = false;
    for (const FeatureRow& row : data) {
        if (row.values.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "train_svm: inconsistent feature dimension");
        }
        for (double v : row.values) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteFeature,
                            "train_svm: non-finite feature in " + row.path);
            }
        }
        if (row.label == 1) has_pos = true;
        else has_neg = true;
    }
    if (!has_pos || !has_neg) {
        throw Error(ErrorCode::SingleClassData, "train_svm: need at least one example per class");
    }
}

} // namespace

double svm_objective(std::span<const std::vector<double>> x, std::span<const int> y,
                     std::span<const double> w, double bias, double lambda) {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    reg *= 0.5 * lambda;

    double hinge = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double margin = bias;
        for (std::size_t d = 0; d < w.size(); ++d) margin += w[d] * x[i][d];
        margin *= y[i];
        if (margin < 1.0) hinge += 1.0 - margin;
    }
    return reg + hinge / static_cast<double>(x.size());
}

LinearModel train_svm(std::span<const FeatureRow> data, const TrainOptions& opts) {
    check_training_data(data);
    if (opts.epochs < 1) {
        throw Error(ErrorCode::InvalidConfig, "train_svm: epochs must be positive");
    }

    const std::size_t n = data.size();
    const std::size_t dim = data.front().values.size();
    const double lambda = opts.lambda > 0.0 ? opts.lambda : 1.0 / static_cast<double>(n);

    LinearModel model;
    model.lambda = lambda;
    model.standardized = opts.standardize;
    model.feature_means.assign(dim, 0.0);
    model.feature_scales.assign(dim, 1.0);

    if (opts.standardize) {
        for (const FeatureRow& row : data) {
            for (std::size_t d = 0; d < dim; ++d) model.feature_means[d] += row.values[d];
        }
        for (double& m : model.feature_means) m /= static_cast<double>(n);
        std::vector<double> var(dim, 0.0);
        for (const FeatureRow& row : data) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double delta = row.values[d] - model.feature_means[d];
                var[d] += delta * delta;
            }
        }
        for (std::size_t d = 0; d < dim; ++d) {
            const double s = std::sqrt(var[d] / static_cast<double>(n));
            model.feature_scales[d] = s < 1e-12 ? 1.0 : s;
        }
    }

    // Standardized copies; labels mapped {0 -> -1, 1 -> +1}.
    std::vector<std::vector<double>> x(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i].resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            x[i][d] = (data[i].values[d] - model.feature_means[d]) / model.feature_scales[d];
        }
        y[i] = data[i].label == 1 ? 1 : -1;
    }

    std::vector<double> w(dim, 0.0);
    double bias = 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix64(opts.seed ^ 0x5a17c3f0d9e86b42ULL));

    // Subgradient steps are not monotone, so each epoch's iterate average is
    // evaluated on the full dataset and the best one seen is returned. That
    // makes the epoch-boundary objective non-increasing by construction.
    std::vector<double> w_avg(dim, 0.0);
    double bias_avg = 0.0;
    std::vector<double> best_w(dim, 0.0);
    double best_bias = 0.0;
    double best_objective = std::numeric_limits<double>::infinity();

    std::uint64_t t = 0;
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        rng.shuffle(order);
        std::fill(w_avg.begin(), w_avg.end(), 0.0);
        bias_avg = 0.0;
        for (std::size_t idx : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            double margin = bias;
            for (std::size_t d = 0; d < dim; ++d) margin += w[d] * x[idx][d];
            margin *= y[idx];

            const double shrink = 1.0 - eta * lambda; // == 1 - 1/t
            for (double& wd : w) wd *= shrink;
            if (margin < 1.0) {
                const double step = eta * y[idx];
                for (std::size_t d = 0; d < dim; ++d) w[d] += step * x[idx][d];
                bias += step;
            }
            for (std::size_t d = 0; d < dim; ++d) w_avg[d] += w[d];
            bias_avg += bias;
        }
        const double inv = 1.0 / static_cast<double>(n);
        for (double& v : w_avg) v *= inv;
        bias_avg *= inv;
        const double objective = svm_objective(x, y, w_avg, bias_avg, lambda);
        if (objective < best_objective) {
            best_objective = objective;
            best_w = w_avg;
            best_bias = bias_avg;
        }
    }

    model.weights = std::move(best_w);
    model.bias = best_bias;
    model.training_meta.iterations = t;
    model.training_meta.epochs = opts.epochs;
    model.training_meta.seed = opts.seed;
    model.training_meta.final_objective = svm_objective(x, y, model.weights, model.bias, lambda);
    return model;
}

double score(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.dimension()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "score: expected " + std::to_string(model.dimension()) + " features, got " +
                        std::to_string(x.size()));
    }
    double s = model.bias;
    for (std::size_t d = 0; d < x.size(); ++d) {
        s += model.weights[d] * (x[d] - model.feature_means[d]) / model.feature_scales[d];
    }
    return s;
}

int predict(const LinearModel& model, std::span<const double> x) {
    return score(model, x) > 0.0 ? 1 : 0;
}

std::string model_to_json(const LinearModel& model) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["feature_means"] = model.feature_means;
    j["feature_scales"] = model.feature_scales;
    j["lambda"] = model.lambda;
    j["standardized"] = model.standardized;
    j["training_meta"] = {
        {"iterations", model.training_meta.iterations},
        {"epochs", model.training_meta.epochs},
        {"seed", model.training_meta.seed},
        {"final_objective", model.training_meta.final_objective},
    };
    return j.dump(2) + "\n";
}

LinearModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw Error(ErrorCode::ParseError, "unsupported model format_version");
        }
        LinearModel model;
        model.weights = j.at("weights").get<std::vector<double>>();
        model.bias = j.at("bias").get<double>();
        model.feature_means = j.at("feature_means").get<std::vector<double>>();
        model.feature_scales = j.at("feature_scales").get<std::vector<double>>();
        model.lambda = j.at("lambda").get<double>();
        model.standardized = j.at("standardized").get<bool>();
        const auto& meta = j.at("training_meta");
        model.training_meta.iterations = meta.at("iterations").get<std::uint64_t>();
        model.training_meta.epochs = meta.at("epochs").get<int>();
        model.training_meta.seed = meta.at("seed").get<std::uint64_t>();
        model.training_meta.final_objective = meta.at("final_objective").get<double>();
        if (model.weights.size() != model.feature_means.size() ||
            model.weights.size() != model.feature_scales.size()) {
            throw Error(ErrorCode::ParseError, "model JSON: mismatched array lengths");
        }
        for (double s : model.feature_scales) {
            if (!(s > 0.0)) throw Error(ErrorCode::ParseError, "model JSON: non-positive scale");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write model", path.string());
    out << model_to_json(model);
    if (!out) throw Error(ErrorCode::IoError, "failed writing model", path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open model", path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

} // namespace ganscan
