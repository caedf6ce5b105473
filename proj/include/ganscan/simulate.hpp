#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ganscan/image.hpp"
#include "ganscan/rng.hpp"

namespace ganscan {

/// K x H x W stack of depth planes, plane-major: values[(k*H + y)*W + x].
struct FeatureMap {
    int depth = 0;
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double& at(int k, int x, int y) {
        return values[(static_cast<std::size_t>(k) * height + y) * width + x];
    }
    double at(int k, int x, int y) const {
        return values[(static_cast<std::size_t>(k) * height + y) * width + x];
    }
    std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }
};

FeatureMap make_feature_map(int depth, int width, int height, double fill = 0.0);

/// 1x1 convolution collapsing K depth planes to RGB: weights[k*3 + ch].
struct ToRgbWeights {
    int depth = 0;
    std::vector<double> weights;
    std::array<double, 3> bias{};

    double w(int k, int ch) const { return weights[static_cast<std::size_t>(k) * 3 + ch]; }
};

enum class Normalization { Pixelwise, PerPlane };
enum class WeightProfile { OverlappingGan, CameraLike };

const char* normalization_name(Normalization n);
const char* weight_profile_name(WeightProfile p);
Normalization parse_normalization(const std::string& name);
WeightProfile parse_weight_profile(const std::string& name);

/// Corpus generation parameters. Identical configs produce bit-identical
/// corpora. `count` is the number of images per class; beta/gamma apply when
/// normalization is per-plane (scalar entries broadcast over all planes);
/// `exposure_gain` fixes the camera simulator's exposure when >= 0, otherwise
/// each image draws its own.
struct SimConfig {
    std::uint64_t seed = 42;
    int image_size = 64;
    int depth = 16;
    Normalization normalization = Normalization::Pixelwise;
    WeightProfile weight_profile = WeightProfile::OverlappingGan;
    int count = 200;
    std::vector<double> beta = {0.0};
    std::vector<double> gamma = {1.0};
    double exposure_gain = -1.0;
};

/// Throws Error{InvalidConfig} when a field is out of contract.
void validate_config(const SimConfig& cfg);

SimConfig parse_sim_config(const std::string& text);
SimConfig load_sim_config(const std::filesystem::path& path);
std::string format_sim_config(const SimConfig& cfg);

/// Applies one key=value pair; returns false for keys it does not know.
bool apply_sim_config_key(SimConfig& cfg, const std::string& key, const std::string& value);

/// Rescales every pixel's depth vector to unit RMS:
/// b = a / sqrt(mean_k(a_k^2) + eps), eps = 1e-8.
FeatureMap pixelwise_normalize(const FeatureMap& fm);

/// Standardizes each depth plane over its spatial extent, then applies the
/// per-plane affine (gamma, beta): b = gamma * (a - mu) / sigma + beta with
/// sigma = sqrt(mean((a - mu)^2) + eps), eps = 1e-8.
FeatureMap plane_normalize(const FeatureMap& fm, std::span<const double> beta,
                           std::span<const double> gamma);

/// Collapses depth planes to an 8-bit RGB image. Channel values are an affine
/// map of the weighted sums from [-1, 1] to [0, 255], clamped, with halves
/// rounded away from zero. Throws Error{DepthMismatch} when shapes disagree.
RgbImage to_rgb(const FeatureMap& fm, const ToRgbWeights& w);

/// Draws toRGB weights for the given profile. overlapping-gan shares one
/// dominant depth component across all three channels; camera-like gives each
/// channel its own dominant component with small non-negative cross-talk.
ToRgbWeights make_to_rgb_weights(WeightProfile profile, int depth, Rng& rng);

/// Seed for image `index` of class `label` (0 = camera, 1 = gan) under `cfg`.
std::uint64_t image_seed(const SimConfig& cfg, int label, int index);

/// Synthesizes cfg.count images with the generator pipeline: a seeded 4x4
/// latent stack repeatedly upsampled (nearest-neighbor), convolved 3x3,
/// passed through leaky-ReLU (slope 0.2) and the configured normalization,
/// then collapsed with the configured toRGB profile.
std::vector<RgbImage> generate_gan_corpus(const SimConfig& cfg, int jobs = 1);

/// Synthesizes cfg.count camera-like images: a smooth seeded log-normal
/// irradiance field under a random exposure gain, quantized to 8 bits with
/// clamping, so highlights and shadows clip the way unprocessed photos do.
std::vector<RgbImage> generate_camera_corpus(const SimConfig& cfg, int jobs = 1);

RgbImage generate_gan_image(const SimConfig& cfg, int index);
RgbImage generate_camera_image(const SimConfig& cfg, int index);

} // namespace ganscan
