#include "ganscan/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ganscan/csvio.hpp"
#include "ganscan/errors.hpp"

namespace ganscan {

namespace {

void check_both_classes(std::span<const ScoredExample> data, const char* who) {
    std::size_t pos = 0;
    for (const ScoredExample& e : data) {
        if (!std::isfinite(e.score)) {
            throw Error(ErrorCode::NonFiniteFeature, std::string(who) + ": non-finite score");
        }
        if (e.label == 1) ++pos;
    }
    if (pos == 0 || pos == data.size()) {
        throw Error(ErrorCode::SingleClassData,
                    std::string(who) + ": need examples of both classes");
    }
}

} // namespace

RocCurve roc_curve(std::span<const ScoredExample> data) {
    check_both_classes(data, "roc_curve");

    std::vector<ScoredExample> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredExample& a, const ScoredExample& b) { return a.score > b.score; });

    RocCurve roc;
    for (const ScoredExample& e : sorted) {
        if (e.label == 1) ++roc.n_positive;
        else ++roc.n_negative;
    }

    const double np = static_cast<double>(roc.n_positive);
    const double nn = static_cast<double>(roc.n_negative);

    roc.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        // One sweep step per distinct score; ties move diagonally together.
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].score == sorted[i].score) {
            if (sorted[j].label == 1) ++tp;
            else ++fp;
            ++j;
        }
        i = j;
        roc.points.emplace_back(static_cast<double>(fp) / nn, static_cast<double>(tp) / np);
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < roc.points.size(); ++k) {
        const auto& [fx, fy] = roc.points[k - 1];
        const auto& [gx, gy] = roc.points[k];
        auc += (gx - fx) * (fy + gy) * 0.5;
    }
    roc.auc = auc;
    return roc;
}

double auc_oracle(std::span<const ScoredExample> data) {
    check_both_classes(data, "auc_oracle");
    double credit = 0.0;
    std::uint64_t pairs = 0;
    for (const ScoredExample& p : data) {
        if (p.label != 1) continue;
        for (const ScoredExample& q : data) {
            if (q.label == 1) continue;
            ++pairs;
            if (p.score > q.score) credit += 1.0;
            else if (p.score == q.score) credit += 0.5;
        }
    }
    return credit / static_cast<double>(pairs);
}

void write_roc_csv(const RocCurve& roc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write ROC CSV", path.string());
    out << "fpr,tpr\n";
    for (const auto& [fpr, tpr] : roc.points) {
        out << csv_double(fpr) << ',' << csv_double(tpr) << '\n';
    }
    out << "# auc=" << short_double(roc.auc) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "failed writing ROC CSV", path.string());
}

RocCurve read_roc_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open ROC CSV", path.string());
    RocCurve roc;
    std::string line;
    bool header = true;
    bool have_auc = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# auc=", 0) == 0) {
            roc.auc = std::stod(line.substr(6));
            have_auc = true;
            continue;
        }
        if (header) {
            if (line != "fpr,tpr") {
                throw Error(ErrorCode::ParseError, "bad ROC CSV header", path.string());
            }
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::ParseError, "bad ROC CSV row", path.string());
        }
        roc.points.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    if (header || !have_auc) {
        throw Error(ErrorCode::ParseError, "incomplete ROC CSV", path.string());
    }
    return roc;
}

void write_roc_svg(const RocCurve& roc, const std::filesystem::path& path) {
    constexpr int plot = 400;
    constexpr int margin = 60;
    constexpr int size = plot + 2 * margin;

    auto px = [&](double fpr) { return margin + fpr * plot; };
    auto py = [&](double tpr) { return margin + (1.0 - tpr) * plot; };

    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write SVG", path.string());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";

    // axes with 0.25 ticks
    out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot
        << "\" height=\"" << plot << "\"/>\n";
    out << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = tick * 0.25;
        out << "<text x=\"" << num(px(v) - 10) << "\" y=\"" << num(margin + plot + 18)
            << "\">" << num(v) << "</text>\n";
        out << "<text x=\"" << num(margin - 34.0) << "\" y=\"" << num(py(v) + 4) << "\">" << num(v)
            << "</text>\n";
    }
    out << "<text x=\"" << num(margin + plot / 2.0 - 50) << "\" y=\"" << num(margin + plot + 38.0)
        << "\">false positive rate</text>\n";
    out << "<text x=\"" << num(margin - 40.0) << "\" y=\"" << num(margin - 14.0)
        << "\">true positive rate</text>\n";
    out << "<text x=\"" << num(margin + 10.0) << "\" y=\"" << num(margin + 20.0) << "\">AUC = "
        << short_double(roc.auc) << "</text>\n";
    out << "</g>\n";

    out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(1))
        << "\" y2=\"" << num(py(1)) << "\" stroke=\"#999\" stroke-dasharray=\"6,4\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"#1662c4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < roc.points.size(); ++i) {
        if (i) out << ' ';
        out << num(px(roc.points[i].first)) << ',' << num(py(roc.points[i].second));
    }
    out << "\"/>\n</svg>\n";
    if (!out) throw Error(ErrorCode::IoError, "failed writing SVG", path.string());
}

RocCurve run_ablation(std::span<const LabeledImage> train, std::span<const LabeledImage> test,
                      FeatureSet feature_set, const TrainOptions& opts, int bins) {
    auto extract_all = [&](std::span<const LabeledImage> corpus) {
        std::vector<FeatureRow> rows;
        rows.reserve(corpus.size());
        for (const LabeledImage& li : corpus) {
            FeatureRow row;
            row.label = li.label;
            row.values = extract_features(li.image, feature_set, bins);
            rows.push_back(std::move(row));
        }
        return rows;
    };

    const std::vector<FeatureRow> train_rows = extract_all(train);
    const std::vector<FeatureRow> test_rows = extract_all(test);
    const LinearModel model = train_svm(train_rows, opts);

    std::vector<ScoredExample> scored;
    scored.reserve(test_rows.size());
    for (const FeatureRow& row : test_rows) {
        scored.push_back({score(model, row.values), row.label});
    }
    return roc_curve(scored);
}

AblationReport run_ablation_pair(std::span<const LabeledImage> train,
                                 std::span<const LabeledImage> test, const TrainOptions& opts) {
    AblationReport report;
    report.over_only = run_ablation(train, test, FeatureSet::SaturationOver, opts);
    report.over_and_under = run_ablation(train, test, FeatureSet::SaturationBoth, opts);
    report.auc_difference = report.over_only.auc - report.over_and_under.auc;
    return report;
}

} // namespace ganscan
