#include "ganscan/features.hpp"

#include <array>
#include <cstdint>

#include "ganscan/errors.hpp"

namespace ganscan {

SaturationFeatures exposure_features(const GrayImage& img) {
    if (img.pixels.empty()) {
        throw Error(ErrorCode::EmptyImage, "exposure_features: empty image");
    }

    std::array<std::uint64_t, 256> counts{};
    for (std::uint8_t v : img.pixels) counts[v]++;

    // suffix[t] = #pixels with I >= t, prefix via counts directly
    std::array<std::uint64_t, 257> suffix{};
    for (int t = 255; t >= 0; --t) suffix[t] = suffix[t + 1] + counts[t];

    const double n = static_cast<double>(img.pixels.size());
    SaturationFeatures f;
    for (std::size_t i = 0; i < kOverThresholds.size(); ++i) {
        f.f_over[i] = static_cast<double>(suffix[kOverThresholds[i]]) / n;
    }
    std::uint64_t below = 0;
    int next = 0;
    for (std::size_t i = 0; i < kUnderThresholds.size(); ++i) {
        for (; next <= kUnderThresholds[i]; ++next) below += counts[next];
        f.f_under[i] = static_cast<double>(below) / n;
    }
    return f;
}

ChromaHistogram chroma_histogram(const RgbImage& img, int bins) {
    if (img.pixels.empty()) {
        throw Error(ErrorCode::EmptyImage, "chroma_histogram: empty image");
    }
    if (bins < 2) {
        throw Error(ErrorCode::BinCountTooSmall, "chroma_histogram: need at least 2 bins");
    }

    ChromaHistogram h;
    h.size = bins;
    h.bins.assign(static_cast<std::size_t>(bins) * bins, 0.0);

    for (const Rgb& p : img.pixels) {
        const int sum = p.r + p.g + p.b;
        if (sum == 0) {
            h.skipped_pixel_count++;
            continue;
        }
        const double r = static_cast<double>(p.r) / sum;
        const double g = static_cast<double>(p.g) / sum;
        int rb = static_cast<int>(r * bins);
        int gb = static_cast<int>(g * bins);
        if (rb >= bins) rb = bins - 1; // r == 1.0 lands in the last bin
        if (gb >= bins) gb = bins - 1;
        h.bins[static_cast<std::size_t>(rb) * bins + gb] += 1.0;
        h.valid_pixel_count++;
    }

    if (h.valid_pixel_count > 0) {
        const double inv = 1.0 / static_cast<double>(h.valid_pixel_count);
        for (double& b : h.bins) b *= inv;
    }
    return h;
}

std::vector<double> flatten(const ChromaHistogram& h) {
    return h.bins; // stored row-major already: index = r_bin * B + g_bin
}

const char* feature_set_name(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::SaturationOver: return "saturation_over";
        case FeatureSet::SaturationBoth: return "saturation_both";
        case FeatureSet::ChromaHistogram: return "chroma_histogram";
    }
    return "?";
}

FeatureSet parse_feature_set(const std::string& name) {
    if (name == "saturation_over") return FeatureSet::SaturationOver;
    if (name == "saturation_both") return FeatureSet::SaturationBoth;
    if (name == "chroma_histogram") return FeatureSet::ChromaHistogram;
    throw Error(ErrorCode::InvalidConfig, "unknown feature set: " + name);
}

std::size_t feature_dimension(FeatureSet fs, int bins) {
    switch (fs) {
        case FeatureSet::SaturationOver: return 4;
        case FeatureSet::SaturationBoth: return 8;
        case FeatureSet::ChromaHistogram: return static_cast<std::size_t>(bins) * bins;
    }
    return 0;
}

std::vector<double> extract_features(const RgbImage& img, FeatureSet fs, int bins) {
    switch (fs) {
        case FeatureSet::SaturationOver: {
            const SaturationFeatures f = exposure_features(to_gray(img));
            return {f.f_over.begin(), f.f_over.end()};
        }
        case FeatureSet::SaturationBoth: {
            const SaturationFeatures f = exposure_features(to_gray(img));
            std::vector<double> v(f.f_over.begin(), f.f_over.end());
            v.insert(v.end(), f.f_under.begin(), f.f_under.end());
            return v;
        }
        case FeatureSet::ChromaHistogram:
            return flatten(chroma_histogram(img, bins));
    }
    throw Error(ErrorCode::InvalidConfig, "extract_features: bad feature set");
}

} // namespace ganscan
