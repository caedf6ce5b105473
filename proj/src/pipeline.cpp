#include "ganscan/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "ganscan/errors.hpp"
#include "ganscan/imageio.hpp"
#include "ganscan/parallel.hpp"

namespace ganscan {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kStreamTrainCorpus = 0x747261696eULL; // "train"
constexpr std::uint64_t kStreamTestCorpus = 0x74657374ULL;    // "test"

std::string corpus_file_name(int label, int index) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%06d.png", label == 1 ? "gan" : "camera", index);
    return buf;
}

double mean_f_over_255(const std::vector<RgbImage>& corpus) {
    double sum = 0.0;
    for (const RgbImage& img : corpus) {
        sum += exposure_features(to_gray(img)).f_over[3]; // tau = 255
    }
    return corpus.empty() ? 0.0 : sum / static_cast<double>(corpus.size());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "cannot create directory", dir.string());
    }
}

} // namespace

std::uint64_t train_corpus_seed(std::uint64_t base_seed) {
    return derive_seed(base_seed, kStreamTrainCorpus, 0);
}

std::uint64_t test_corpus_seed(std::uint64_t base_seed) {
    return derive_seed(base_seed, kStreamTestCorpus, 0);
}

SimulateResult simulate_corpus_dir(const SimConfig& cfg, const fs::path& out_dir, int jobs) {
    validate_config(cfg);
    ensure_dir(out_dir);

    const std::vector<RgbImage> camera = generate_camera_corpus(cfg, jobs);
    const std::vector<RgbImage> gan = generate_gan_corpus(cfg, jobs);

    SimulateResult result;
    result.mean_f_over_255_camera = mean_f_over_255(camera);
    result.mean_f_over_255_gan = mean_f_over_255(gan);

    // camera (label 0) first, then gan (label 1); manifest order is by class
    // then index, independent of scheduling.
    for (int label = 0; label <= 1; ++label) {
        const std::vector<RgbImage>& corpus = label == 0 ? camera : gan;
        for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
            ManifestRow row;
            row.path = corpus_file_name(label, i);
            row.label = label;
            row.seed = image_seed(cfg, label, i);
            result.manifest.push_back(std::move(row));
        }
    }

    parallel_for(result.manifest.size(), jobs, [&](std::size_t i) {
        const ManifestRow& row = result.manifest[i];
        const std::vector<RgbImage>& corpus = row.label == 0 ? camera : gan;
        const int index = static_cast<int>(i) % cfg.count;
        save_png(corpus[static_cast<std::size_t>(index)], out_dir / row.path);
    });

    write_manifest_csv(result.manifest, out_dir / "manifest.csv");
    return result;
}

ExtractResult extract_from_manifest(const fs::path& manifest_path, FeatureSet fs_sel, int bins,
                                    int jobs) {
    const std::vector<ManifestRow> manifest = read_manifest_csv(manifest_path);
    if (manifest.empty()) {
        throw Error(ErrorCode::NoImagesFound, "manifest has no rows", manifest_path.string());
    }
    const fs::path base = manifest_path.parent_path();

    std::vector<FeatureRow> rows(manifest.size());
    std::vector<char> ok(manifest.size(), 0);
    std::vector<std::string> failures(manifest.size());

    parallel_for(manifest.size(), jobs, [&](std::size_t i) {
        const fs::path img_path = base / manifest[i].path;
        try {
            const RgbImage img = load_image(img_path);
            rows[i].path = manifest[i].path;
            rows[i].label = manifest[i].label;
            rows[i].values = extract_features(img, fs_sel, bins);
            ok[i] = 1;
        } catch (const Error& e) {
            failures[i] = img_path.string() + " (" + error_code_name(e.code()) + ")";
        }
    });

    ExtractResult result;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        if (ok[i]) result.rows.push_back(std::move(rows[i]));
        else result.skipped.push_back(std::move(failures[i]));
    }
    if (result.rows.empty()) {
        throw Error(ErrorCode::NoImagesFound, "no decodable images in manifest",
                    manifest_path.string());
    }
    return result;
}

ExtractResult extract_from_files(const std::vector<fs::path>& files, int label, FeatureSet fs_sel,
                                 int bins, int jobs) {
    if (files.empty()) throw Error(ErrorCode::NoImagesFound, "no image files given");

    std::vector<FeatureRow> rows(files.size());
    std::vector<char> ok(files.size(), 0);
    std::vector<std::string> failures(files.size());

    parallel_for(files.size(), jobs, [&](std::size_t i) {
        try {
            const RgbImage img = load_image(files[i]);
            rows[i].path = files[i].string();
            rows[i].label = label;
            rows[i].values = extract_features(img, fs_sel, bins);
            ok[i] = 1;
        } catch (const Error& e) {
            failures[i] = files[i].string() + " (" + error_code_name(e.code()) + ")";
        }
    });

    ExtractResult result;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (ok[i]) result.rows.push_back(std::move(rows[i]));
        else result.skipped.push_back(std::move(failures[i]));
    }
    if (result.rows.empty()) {
        throw Error(ErrorCode::NoImagesFound, "no decodable images among inputs");
    }
    return result;
}

std::vector<fs::path> list_image_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::FileNotFound, "not a directory", dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<ScoreRow> score_rows(const LinearModel& model, std::span<const FeatureRow> rows) {
    std::vector<ScoreRow> out;
    out.reserve(rows.size());
    for (const FeatureRow& row : rows) {
        out.push_back({row.path, row.label, score(model, row.values)});
    }
    return out;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) return std::string{};
        const auto last = s.find_last_not_of(" \t\r\n");
        return s.substr(first, last - first + 1);
    };
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "config line is not key=value: " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "features") {
            cfg.features = parse_feature_set(value);
        } else if (key == "bins") {
            cfg.bins = std::stoi(value);
        } else if (key == "lambda") {
            cfg.lambda = std::stod(value);
        } else if (key == "epochs") {
            cfg.epochs = std::stoi(value);
        } else if (apply_sim_config_key(cfg.sim, key, value)) {
            // sim key handled in place
        } else {
            throw Error(ErrorCode::ParseError, "unknown config key: " + key);
        }
    }
    cfg.sim.seed = cfg.seed; // one seed drives everything
    validate_config(cfg.sim);
    if (cfg.epochs < 1) throw Error(ErrorCode::InvalidConfig, "epochs must be positive");
    if (cfg.bins < 2) throw Error(ErrorCode::InvalidConfig, "bins must be at least 2");
    return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open config", path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

std::string format_experiment_config(const ExperimentConfig& cfg) {
    std::string out;
    out += "seed=" + std::to_string(cfg.seed) + "\n";
    SimConfig sim = cfg.sim;
    sim.seed = cfg.seed;
    // drop the sim's own seed line; the experiment seed governs
    std::string sim_text = format_sim_config(sim);
    const auto first_newline = sim_text.find('\n');
    out += sim_text.substr(first_newline + 1);
    out += std::string("features=") + feature_set_name(cfg.features) + "\n";
    out += "bins=" + std::to_string(cfg.bins) + "\n";
    out += "lambda=" + short_double(cfg.lambda) + "\n";
    out += "epochs=" + std::to_string(cfg.epochs) + "\n";
    return out;
}

ReproduceSummary run_reproduce(const ExperimentConfig& cfg, const fs::path& out_dir, int jobs) {
    ensure_dir(out_dir);

    SimConfig train_cfg = cfg.sim;
    train_cfg.seed = train_corpus_seed(cfg.seed);
    SimConfig test_cfg = cfg.sim;
    test_cfg.seed = test_corpus_seed(cfg.seed);

    std::ofstream(out_dir / "config.txt", std::ios::binary) << format_experiment_config(cfg);

    const SimulateResult train_sim = simulate_corpus_dir(train_cfg, out_dir / "train", jobs);
    const SimulateResult test_sim = simulate_corpus_dir(test_cfg, out_dir / "test", jobs);

    ReproduceSummary summary;
    summary.mean_f_over_255_camera = test_sim.mean_f_over_255_camera;
    summary.mean_f_over_255_gan = test_sim.mean_f_over_255_gan;

    struct Arm {
        FeatureSet features;
        const char* tag;
        double auc = 0.0;
    };
    Arm arms[2] = {
        {FeatureSet::SaturationOver, "over_only"},
        {FeatureSet::SaturationBoth, "over_and_under"},
    };

    for (Arm& arm : arms) {
        const ExtractResult train_rows =
            extract_from_manifest(out_dir / "train" / "manifest.csv", arm.features, cfg.bins, jobs);
        const ExtractResult test_rows =
            extract_from_manifest(out_dir / "test" / "manifest.csv", arm.features, cfg.bins, jobs);

        const std::string tag = arm.tag;
        write_features_csv(train_rows.rows, out_dir / ("features_train_" + tag + ".csv"));
        write_features_csv(test_rows.rows, out_dir / ("features_test_" + tag + ".csv"));

        TrainOptions opts;
        opts.lambda = cfg.lambda;
        opts.epochs = cfg.epochs;
        opts.seed = derive_seed(cfg.seed, 0x73766dULL /* "svm" */, arm.features == FeatureSet::SaturationOver ? 0 : 1);
        const LinearModel model = train_svm(train_rows.rows, opts);
        save_model(model, out_dir / ("model_" + tag + ".json"));

        const std::vector<ScoreRow> scores = score_rows(model, test_rows.rows);
        write_scores_csv(scores, out_dir / ("scores_" + tag + ".csv"));

        std::vector<ScoredExample> scored;
        scored.reserve(scores.size());
        for (const ScoreRow& s : scores) scored.push_back({s.score, s.label});
        const RocCurve roc = roc_curve(scored);
        write_roc_csv(roc, out_dir / ("roc_" + tag + ".csv"));
        write_roc_svg(roc, out_dir / ("roc_" + tag + ".svg"));
        arm.auc = roc.auc;
    }

    summary.auc_over_only = arms[0].auc;
    summary.auc_over_and_under = arms[1].auc;
    summary.auc_difference = arms[0].auc - arms[1].auc;

    std::ofstream table(out_dir / "summary.csv", std::ios::binary);
    if (!table) throw Error(ErrorCode::IoError, "cannot write summary", (out_dir / "summary.csv").string());
    table << "feature_set,auc\n";
    table << "over_only," << csv_double(summary.auc_over_only) << '\n';
    table << "over_and_under," << csv_double(summary.auc_over_and_under) << '\n';
    table << "# auc_difference=" << short_double(summary.auc_difference) << '\n';
    table << "# mean_f_over_255_gan=" << short_double(summary.mean_f_over_255_gan) << '\n';
    table << "# mean_f_over_255_camera=" << short_double(summary.mean_f_over_255_camera) << '\n';
    if (!table) throw Error(ErrorCode::IoError, "failed writing summary", (out_dir / "summary.csv").string());

    return summary;
}

} // namespace ganscan
