#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ganscan/image.hpp"

namespace ganscan {

inline constexpr std::array<int, 4> kOverThresholds = {240, 245, 250, 255};
inline constexpr std::array<int, 4> kUnderThresholds = {0, 5, 10, 15};

/// Fractions of pixels at or beyond fixed intensity thresholds.
/// f_over[i] counts I >= kOverThresholds[i]; f_under[i] counts I <= kUnderThresholds[i].
struct SaturationFeatures {
    std::array<double, 4> f_over{};
    std::array<double, 4> f_under{};
};

/// B x B bivariate histogram over rg chromaticity, r = R/(R+G+B), g = G/(R+G+B).
/// bins is row-major with r on the row axis: bins[r_bin * size + g_bin].
/// Normalized to unit mass when any pixel has R+G+B > 0; zero-sum pixels are
/// skipped (their chromaticity is undefined) and counted separately.
struct ChromaHistogram {
    int size = 0;
    std::vector<double> bins;
    std::uint64_t valid_pixel_count = 0;
    std::uint64_t skipped_pixel_count = 0;

    double at(int r_bin, int g_bin) const { return bins[static_cast<std::size_t>(r_bin) * size + g_bin]; }
};

SaturationFeatures exposure_features(const GrayImage& img);

ChromaHistogram chroma_histogram(const RgbImage& img, int bins = 64);

/// Row-major flattening of the histogram grid: index = r_bin * B + g_bin.
std::vector<double> flatten(const ChromaHistogram& h);

enum class FeatureSet {
    SaturationOver, // f_over only, 4 features
    SaturationBoth, // f_over then f_under, 8 features
    ChromaHistogram, // flattened B x B histogram
};

const char* feature_set_name(FeatureSet fs);
FeatureSet parse_feature_set(const std::string& name);
std::size_t feature_dimension(FeatureSet fs, int bins);

/// Extracts the configured feature family from one image. Saturation features
/// are computed on the BT.601 grayscale intensity.
std::vector<double> extract_features(const RgbImage& img, FeatureSet fs, int bins = 64);

/// One labeled feature row; `path` records provenance. label: 0 = camera/real, 1 = GAN.
struct FeatureRow {
    std::string path;
    int label = 0;
    std::vector<double> values;
};

} // namespace ganscan
