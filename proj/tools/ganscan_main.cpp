// ganscan: GAN-image forensics toolkit command line.
//
// Pipeline stages are file-based (PNG corpora, CSV features/scores, JSON
// models) so every intermediate artifact is inspectable and diffable.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ganscan/csvio.hpp"
#include "ganscan/errors.hpp"
#include "ganscan/evaluate.hpp"
#include "ganscan/features.hpp"
#include "ganscan/pipeline.hpp"
#include "ganscan/simulate.hpp"
#include "ganscan/svm.hpp"

namespace fs = std::filesystem;
using namespace ganscan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct SimulateArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int count = 0;
    int size = 0;
    int depth = 0;
    std::string normalization;
    std::string weight_profile;
    double exposure_gain = -2.0;
    int jobs = 1;
};

SimConfig resolve_sim_config(const SimulateArgs& a) {
    SimConfig cfg;
    if (!a.config_path.empty()) cfg = load_sim_config(a.config_path);
    if (a.seed_set) cfg.seed = a.seed;
    if (a.count > 0) cfg.count = a.count;
    if (a.size > 0) cfg.image_size = a.size;
    if (a.depth > 0) cfg.depth = a.depth;
    if (!a.normalization.empty()) cfg.normalization = parse_normalization(a.normalization);
    if (!a.weight_profile.empty()) cfg.weight_profile = parse_weight_profile(a.weight_profile);
    if (a.exposure_gain > -1.5) cfg.exposure_gain = a.exposure_gain;
    validate_config(cfg);
    return cfg;
}

int cmd_simulate(const SimulateArgs& a) {
    const SimConfig cfg = resolve_sim_config(a);
    const SimulateResult result = simulate_corpus_dir(cfg, a.out_dir, a.jobs);
    std::ofstream(fs::path(a.out_dir) / "config.txt", std::ios::binary) << format_sim_config(cfg);
    std::cout << "wrote " << result.manifest.size() << " images to " << a.out_dir << "\n";
    std::cout << "mean_f_over_255 camera=" << short_double(result.mean_f_over_255_camera)
              << " gan=" << short_double(result.mean_f_over_255_gan) << "\n";
    return kExitOk;
}

int cmd_extract(const std::string& input, const std::string& out, const std::string& features,
                int bins, int label, int jobs) {
    const FeatureSet fs_sel = parse_feature_set(features);
    ExtractResult result;
    fs::path in_path(input);
    if (fs::is_directory(in_path)) {
        const fs::path manifest = in_path / "manifest.csv";
        if (fs::exists(manifest)) {
            result = extract_from_manifest(manifest, fs_sel, bins, jobs);
        } else {
            if (label != 0 && label != 1) {
                throw Error(ErrorCode::InvalidConfig,
                            "--label 0|1 is required for directories without manifest.csv");
            }
            const std::vector<fs::path> files = list_image_files(in_path);
            if (files.empty()) {
                throw Error(ErrorCode::NoImagesFound, "no PNG/JPEG files", input);
            }
            result = extract_from_files(files, label, fs_sel, bins, jobs);
        }
    } else if (fs::exists(in_path)) {
        result = extract_from_manifest(in_path, fs_sel, bins, jobs);
    } else {
        throw Error(ErrorCode::FileNotFound, "no such input", input);
    }

    write_features_csv(result.rows, out);
    std::cout << "wrote " << result.rows.size() << " feature rows to " << out << "\n";
    for (const std::string& s : result.skipped) {
        std::cerr << "skipped: " << s << "\n";
    }
    if (!result.skipped.empty()) {
        std::cerr << "note: skipped " << result.skipped.size() << " undecodable file(s)\n";
    }
    return kExitOk;
}

int cmd_train(const std::string& input, const std::string& out, double lambda, int epochs,
              std::uint64_t seed, bool no_standardize) {
    const std::vector<FeatureRow> rows = read_features_csv(input);
    TrainOptions opts;
    opts.lambda = lambda;
    opts.epochs = epochs;
    opts.seed = seed;
    opts.standardize = !no_standardize;
    const LinearModel model = train_svm(rows, opts);
    save_model(model, out);
    std::cout << "trained on " << rows.size() << " rows, dim=" << model.dimension()
              << ", lambda=" << short_double(model.lambda)
              << ", objective=" << short_double(model.training_meta.final_objective) << "\n";
    std::cout << "model written to " << out << "\n";
    return kExitOk;
}

int cmd_score(const std::string& model_path, const std::string& input, const std::string& out) {
    const LinearModel model = load_model(model_path);
    const std::vector<FeatureRow> rows = read_features_csv(input);
    const std::vector<ScoreRow> scores = score_rows(model, rows);
    write_scores_csv(scores, out);
    std::cout << "wrote " << scores.size() << " scores to " << out << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& input, const std::string& out, const std::string& svg) {
    const std::vector<ScoreRow> rows = read_scores_csv(input);
    std::vector<ScoredExample> scored;
    scored.reserve(rows.size());
    for (const ScoreRow& r : rows) scored.push_back({r.score, r.label});
    const RocCurve roc = roc_curve(scored);
    if (!out.empty()) write_roc_csv(roc, out);
    if (!svg.empty()) write_roc_svg(roc, svg);
    std::cout << "AUC=" << short_double(roc.auc) << "\n";
    return kExitOk;
}

struct ReproduceArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int count = 0;
    int size = 0;
    double lambda = -1.0;
    int epochs = 0;
    int bins = 0;
    int jobs = 1;
};

int cmd_reproduce(const ReproduceArgs& a) {
    ExperimentConfig cfg;
    if (!a.config_path.empty()) cfg = load_experiment_config(a.config_path);
    if (a.seed_set) {
        cfg.seed = a.seed;
        cfg.sim.seed = a.seed;
    }
    if (a.count > 0) cfg.sim.count = a.count;
    if (a.size > 0) cfg.sim.image_size = a.size;
    if (a.lambda >= 0.0) cfg.lambda = a.lambda;
    if (a.epochs > 0) cfg.epochs = a.epochs;
    if (a.bins > 0) cfg.bins = a.bins;
    validate_config(cfg.sim);

    const ReproduceSummary summary = run_reproduce(cfg, a.out_dir, a.jobs);
    std::cout << "feature_set,auc\n";
    std::cout << "over_only," << short_double(summary.auc_over_only) << "\n";
    std::cout << "over_and_under," << short_double(summary.auc_over_and_under) << "\n";
    std::cout << "auc_difference=" << short_double(summary.auc_difference) << "\n";
    std::cout << "mean_f_over_255 gan=" << short_double(summary.mean_f_over_255_gan)
              << " camera=" << short_double(summary.mean_f_over_255_camera) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GAN-image forensics toolkit: exposure-saturation and chromaticity cues"};
    app.require_subcommand(1);

    // simulate
    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "generate a labeled synthetic corpus");
    simulate->add_option("--config", sim.config_path, "key=value config file");
    simulate->add_option("--out", sim.out_dir, "output directory")->required();
    simulate->add_option("--seed", sim.seed, "base seed")->each([&](const std::string&) { sim.seed_set = true; });
    simulate->add_option("--count", sim.count, "images per class");
    simulate->add_option("--size", sim.size, "image size (power of two >= 16)");
    simulate->add_option("--depth", sim.depth, "generator depth planes");
    simulate->add_option("--normalization", sim.normalization, "pixelwise | per-plane");
    simulate->add_option("--weight-profile", sim.weight_profile, "overlapping-gan | camera-like");
    simulate->add_option("--exposure-gain", sim.exposure_gain, "fixed camera exposure gain (>= 0)");
    simulate->add_option("--jobs", sim.jobs, "worker threads (0 = auto)");

    // extract
    std::string ex_input, ex_out, ex_features = "saturation_both";
    int ex_bins = 64, ex_label = -1, ex_jobs = 1;
    CLI::App* extract = app.add_subcommand("extract", "extract features to CSV");
    extract->add_option("--input", ex_input, "corpus directory or manifest.csv")->required();
    extract->add_option("--out", ex_out, "output features CSV")->required();
    extract->add_option("--features", ex_features,
                        "saturation_over | saturation_both | chroma_histogram");
    extract->add_option("--bins", ex_bins, "chromaticity bins per axis");
    extract->add_option("--label", ex_label, "label for directories without a manifest");
    extract->add_option("--jobs", ex_jobs, "worker threads (0 = auto)");

    // train
    std::string tr_input, tr_out;
    double tr_lambda = 0.0;
    int tr_epochs = 200;
    std::uint64_t tr_seed = 0;
    bool tr_no_std = false;
    CLI::App* train = app.add_subcommand("train", "train the linear SVM");
    train->add_option("--input", tr_input, "features CSV")->required();
    train->add_option("--out", tr_out, "output model JSON")->required();
    train->add_option("--lambda", tr_lambda, "L2 strength (0 = 1/n)");
    train->add_option("--epochs", tr_epochs, "training epochs");
    train->add_option("--seed", tr_seed, "shuffle seed");
    train->add_flag("--no-standardize", tr_no_std, "skip feature standardization");

    // score
    std::string sc_model, sc_input, sc_out;
    CLI::App* score_cmd = app.add_subcommand("score", "score feature rows with a model");
    score_cmd->add_option("--model", sc_model, "model JSON")->required();
    score_cmd->add_option("--input", sc_input, "features CSV")->required();
    score_cmd->add_option("--out", sc_out, "output scores CSV")->required();

    // eval
    std::string ev_input, ev_out, ev_svg;
    CLI::App* eval_cmd = app.add_subcommand("eval", "ROC/AUC from scores");
    eval_cmd->add_option("--input", ev_input, "scores CSV")->required();
    eval_cmd->add_option("--out", ev_out, "output ROC CSV");
    eval_cmd->add_option("--svg", ev_svg, "optional ROC SVG plot");

    // reproduce
    ReproduceArgs rep;
    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "full experiment: corpora, features, SVMs, ROC ablation");
    reproduce->add_option("--config", rep.config_path, "experiment config file");
    reproduce->add_option("--out", rep.out_dir, "output directory")->required();
    reproduce->add_option("--seed", rep.seed, "base seed")->each([&](const std::string&) { rep.seed_set = true; });
    reproduce->add_option("--count", rep.count, "images per class per split");
    reproduce->add_option("--size", rep.size, "image size");
    reproduce->add_option("--lambda", rep.lambda, "L2 strength (0 = 1/n)");
    reproduce->add_option("--epochs", rep.epochs, "training epochs");
    reproduce->add_option("--bins", rep.bins, "chromaticity bins per axis");
    reproduce->add_option("--jobs", rep.jobs, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (extract->parsed()) {
            return cmd_extract(ex_input, ex_out, ex_features, ex_bins, ex_label, ex_jobs);
        }
        if (train->parsed()) return cmd_train(tr_input, tr_out, tr_lambda, tr_epochs, tr_seed, tr_no_std);
        if (score_cmd->parsed()) return cmd_score(sc_model, sc_input, sc_out);
        if (eval_cmd->parsed()) return cmd_eval(ev_input, ev_out, ev_svg);
        if (reproduce->parsed()) return cmd_reproduce(rep);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
