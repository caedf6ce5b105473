#include "ganscan/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ganscan/errors.hpp"
#include "ganscan/parallel.hpp"

namespace ganscan {

namespace {

constexpr double kEps = 1e-8;
constexpr double kLeakySlope = 0.2;
constexpr int kLatentSize = 4;

// Seed streams; labels 0/1 are the per-image streams.
constexpr std::uint64_t kStreamConvWeights = 0x636f6e76; // "conv"
constexpr std::uint64_t kStreamToRgbWeights = 0x32726762; // "2rgb"

std::vector<double> expand_per_plane(std::span<const double> values, int depth,
                                     const char* what) {
    if (values.size() == 1) return std::vector<double>(static_cast<std::size_t>(depth), values[0]);
    if (values.size() == static_cast<std::size_t>(depth)) {
        return std::vector<double>(values.begin(), values.end());
    }
    throw Error(ErrorCode::InvalidConfig,
                std::string(what) + " must hold 1 or depth entries");
}

FeatureMap upsample2x(const FeatureMap& fm) {
    FeatureMap out = make_feature_map(fm.depth, fm.width * 2, fm.height * 2);
    for (int k = 0; k < fm.depth; ++k) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                out.at(k, x, y) = fm.at(k, x / 2, y / 2);
            }
        }
    }
    return out;
}

// 3x3 same-size convolution with zero padding across all input planes.
// Weight layout: w[((ko * K_in + ki) * 3 + dy) * 3 + dx].
FeatureMap conv3x3(const FeatureMap& fm, std::span<const double> w) {
    const int depth = fm.depth;
    FeatureMap out = make_feature_map(depth, fm.width, fm.height);
    for (int ko = 0; ko < depth; ++ko) {
        for (int y = 0; y < fm.height; ++y) {
            for (int x = 0; x < fm.width; ++x) {
                double acc = 0.0;
                for (int ki = 0; ki < depth; ++ki) {
                    const std::size_t base = (static_cast<std::size_t>(ko) * depth + ki) * 9;
                    for (int dy = -1; dy <= 1; ++dy) {
                        const int yy = y + dy;
                        if (yy < 0 || yy >= fm.height) continue;
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int xx = x + dx;
                            if (xx < 0 || xx >= fm.width) continue;
                            acc += w[base + static_cast<std::size_t>(dy + 1) * 3 + (dx + 1)] *
                                   fm.at(ki, xx, yy);
                        }
                    }
                }
                out.at(ko, x, y) = acc;
            }
        }
    }
    return out;
}

void leaky_relu_inplace(FeatureMap& fm) {
    for (double& v : fm.values) {
        if (v < 0.0) v *= kLeakySlope;
    }
}

int stage_count(int image_size) {
    int stages = 0;
    for (int s = kLatentSize; s < image_size; s *= 2) ++stages;
    return stages;
}

// All convolution weights for one generator, drawn once per corpus seed.
struct GeneratorWeights {
    std::vector<std::vector<double>> stages;
    ToRgbWeights to_rgb;
};

GeneratorWeights make_generator_weights(const SimConfig& cfg) {
    GeneratorWeights gw;
    const int depth = cfg.depth;
    const int stages = stage_count(cfg.image_size);
    Rng conv_rng(derive_seed(cfg.seed, kStreamConvWeights, 0));
    const double he_scale = std::sqrt(2.0 / (9.0 * depth));
    gw.stages.resize(static_cast<std::size_t>(stages));
    for (auto& w : gw.stages) {
        w.resize(static_cast<std::size_t>(depth) * depth * 9);
        for (double& v : w) v = he_scale * conv_rng.normal();
    }
    Rng torgb_rng(derive_seed(cfg.seed, kStreamToRgbWeights, 0));
    gw.to_rgb = make_to_rgb_weights(cfg.weight_profile, depth, torgb_rng);
    return gw;
}

FeatureMap apply_normalization(const SimConfig& cfg, const FeatureMap& fm,
                               std::span<const double> beta, std::span<const double> gamma) {
    if (cfg.normalization == Normalization::Pixelwise) return pixelwise_normalize(fm);
    return plane_normalize(fm, beta, gamma);
}

// Bilinear interpolation of a G x G knot grid onto a size x size raster.
std::vector<double> interpolate_knots(const std::vector<double>& knots, int grid, int size) {
    std::vector<double> field(static_cast<std::size_t>(size) * size);
    const double scale = static_cast<double>(grid) / size;
    for (int y = 0; y < size; ++y) {
        double v = (y + 0.5) * scale - 0.5;
        v = std::clamp(v, 0.0, static_cast<double>(grid - 1));
        const int y0 = std::min(static_cast<int>(v), grid - 2);
        const double fy = v - y0;
        for (int x = 0; x < size; ++x) {
            double u = (x + 0.5) * scale - 0.5;
            u = std::clamp(u, 0.0, static_cast<double>(grid - 1));
            const int x0 = std::min(static_cast<int>(u), grid - 2);
            const double fx = u - x0;
            const double a = knots[static_cast<std::size_t>(y0) * grid + x0];
            const double b = knots[static_cast<std::size_t>(y0) * grid + x0 + 1];
            const double c = knots[static_cast<std::size_t>(y0 + 1) * grid + x0];
            const double d = knots[static_cast<std::size_t>(y0 + 1) * grid + x0 + 1];
            field[static_cast<std::size_t>(y) * size + x] =
                (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
        }
    }
    return field;
}

std::vector<double> sample_knots(Rng& rng, int grid) {
    std::vector<double> knots(static_cast<std::size_t>(grid) * grid);
    for (double& k : knots) k = rng.normal();
    return knots;
}

} // namespace

FeatureMap make_feature_map(int depth, int width, int height, double fill) {
    FeatureMap fm;
    fm.depth = depth;
    fm.width = width;
    fm.height = height;
    fm.values.assign(static_cast<std::size_t>(depth) * width * height, fill);
    return fm;
}

const char* normalization_name(Normalization n) {
    return n == Normalization::Pixelwise ? "pixelwise" : "per-plane";
}

const char* weight_profile_name(WeightProfile p) {
    return p == WeightProfile::OverlappingGan ? "overlapping-gan" : "camera-like";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "pixelwise") return Normalization::Pixelwise;
    if (name == "per-plane") return Normalization::PerPlane;
    throw Error(ErrorCode::InvalidConfig, "unknown normalization: " + name);
}

WeightProfile parse_weight_profile(const std::string& name) {
    if (name == "overlapping-gan") return WeightProfile::OverlappingGan;
    if (name == "camera-like") return WeightProfile::CameraLike;
    throw Error(ErrorCode::InvalidConfig, "unknown weight profile: " + name);
}

void validate_config(const SimConfig& cfg) {
    const bool power_of_two = cfg.image_size > 0 && (cfg.image_size & (cfg.image_size - 1)) == 0;
    if (!power_of_two || cfg.image_size < 16) {
        throw Error(ErrorCode::InvalidConfig, "image_size must be a power of two >= 16");
    }
    if (cfg.depth < 3) {
        throw Error(ErrorCode::InvalidConfig, "depth must be at least 3");
    }
    if (cfg.count < 1) {
        throw Error(ErrorCode::InvalidConfig, "count must be positive");
    }
    if (cfg.beta.empty() || cfg.gamma.empty()) {
        throw Error(ErrorCode::InvalidConfig, "beta and gamma must not be empty");
    }
    expand_per_plane(cfg.beta, cfg.depth, "beta");
    expand_per_plane(cfg.gamma, cfg.depth, "gamma");
}

FeatureMap pixelwise_normalize(const FeatureMap& fm) {
    FeatureMap out = make_feature_map(fm.depth, fm.width, fm.height);
    const std::size_t plane = fm.plane_size();
    for (std::size_t p = 0; p < plane; ++p) {
        double sum_sq = 0.0;
        for (int k = 0; k < fm.depth; ++k) {
            const double v = fm.values[static_cast<std::size_t>(k) * plane + p];
            sum_sq += v * v;
        }
        const double inv_rms = 1.0 / std::sqrt(sum_sq / fm.depth + kEps);
        for (int k = 0; k < fm.depth; ++k) {
            out.values[static_cast<std::size_t>(k) * plane + p] =
                fm.values[static_cast<std::size_t>(k) * plane + p] * inv_rms;
        }
    }
    return out;
}

FeatureMap plane_normalize(const FeatureMap& fm, std::span<const double> beta,
                           std::span<const double> gamma) {
    const std::vector<double> betas = expand_per_plane(beta, fm.depth, "beta");
    const std::vector<double> gammas = expand_per_plane(gamma, fm.depth, "gamma");
    FeatureMap out = make_feature_map(fm.depth, fm.width, fm.height);
    const std::size_t plane = fm.plane_size();
    for (int k = 0; k < fm.depth; ++k) {
        const double* src = fm.values.data() + static_cast<std::size_t>(k) * plane;
        double* dst = out.values.data() + static_cast<std::size_t>(k) * plane;
        double mean = 0.0;
        for (std::size_t p = 0; p < plane; ++p) mean += src[p];
        mean /= static_cast<double>(plane);
        double var = 0.0;
        for (std::size_t p = 0; p < plane; ++p) {
            const double d = src[p] - mean;
            var += d * d;
        }
        var /= static_cast<double>(plane);
        const double inv_sigma = 1.0 / std::sqrt(var + kEps);
        const double g = gammas[static_cast<std::size_t>(k)];
        const double b = betas[static_cast<std::size_t>(k)];
        for (std::size_t p = 0; p < plane; ++p) {
            dst[p] = g * ((src[p] - mean) * inv_sigma) + b;
        }
    }
    return out;
}

RgbImage to_rgb(const FeatureMap& fm, const ToRgbWeights& w) {
    if (fm.depth != w.depth || w.weights.size() != static_cast<std::size_t>(w.depth) * 3) {
        throw Error(ErrorCode::DepthMismatch, "to_rgb: feature map depth does not match weights");
    }
    RgbImage img = make_rgb_image(fm.width, fm.height);
    const std::size_t plane = fm.plane_size();
    for (std::size_t p = 0; p < plane; ++p) {
        for (int ch = 0; ch < 3; ++ch) {
            double v = w.bias[static_cast<std::size_t>(ch)];
            for (int k = 0; k < fm.depth; ++k) {
                v += w.w(k, ch) * fm.values[static_cast<std::size_t>(k) * plane + p];
            }
            // [-1, 1] -> [0, 255], halves away from zero, clamped.
            const long q = std::lround((v + 1.0) * 127.5);
            const std::uint8_t byte = static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
            if (ch == 0) img.pixels[p].r = byte;
            else if (ch == 1) img.pixels[p].g = byte;
            else img.pixels[p].b = byte;
        }
    }
    return img;
}

ToRgbWeights make_to_rgb_weights(WeightProfile profile, int depth, Rng& rng) {
    if (depth < 3) throw Error(ErrorCode::InvalidConfig, "toRGB weights need depth >= 3");
    ToRgbWeights w;
    w.depth = depth;
    w.weights.assign(static_cast<std::size_t>(depth) * 3, 0.0);
    w.bias = {0.0, 0.0, 0.0};

    if (profile == WeightProfile::OverlappingGan) {
        // One dominant depth component shared by all channels, plus small
        // signed perturbations everywhere.
        const int dominant = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth)));
        for (int k = 0; k < depth; ++k) {
            for (int ch = 0; ch < 3; ++ch) {
                double v = 0.04 * rng.normal();
                if (k == dominant) v += 0.25 * (1.0 + 0.1 * rng.normal());
                w.weights[static_cast<std::size_t>(k) * 3 + ch] = v;
            }
        }
    } else {
        // Disjoint dominant components, non-negative cross-talk.
        int dominant[3];
        dominant[0] = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth)));
        do {
            dominant[1] = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth)));
        } while (dominant[1] == dominant[0]);
        do {
            dominant[2] = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth)));
        } while (dominant[2] == dominant[0] || dominant[2] == dominant[1]);
        for (int k = 0; k < depth; ++k) {
            for (int ch = 0; ch < 3; ++ch) {
                double v = std::abs(0.02 * rng.normal());
                if (k == dominant[ch]) v += 0.28 * (1.0 + 0.1 * rng.normal());
                w.weights[static_cast<std::size_t>(k) * 3 + ch] = v;
            }
        }
    }
    return w;
}

std::uint64_t image_seed(const SimConfig& cfg, int label, int index) {
    return derive_seed(cfg.seed, static_cast<std::uint64_t>(label),
                       static_cast<std::uint64_t>(index));
}

RgbImage generate_gan_image(const SimConfig& cfg, int index) {
    validate_config(cfg);
    const GeneratorWeights gw = make_generator_weights(cfg);

    Rng rng(image_seed(cfg, 1, index));
    FeatureMap fm = make_feature_map(cfg.depth, kLatentSize, kLatentSize);
    for (double& v : fm.values) v = rng.normal();

    const std::vector<double> betas = expand_per_plane(cfg.beta, cfg.depth, "beta");
    const std::vector<double> gammas = expand_per_plane(cfg.gamma, cfg.depth, "gamma");

    for (const auto& stage_w : gw.stages) {
        fm = upsample2x(fm);
        fm = conv3x3(fm, stage_w);
        leaky_relu_inplace(fm);
        fm = apply_normalization(cfg, fm, betas, gammas);
    }
    return to_rgb(fm, gw.to_rgb);
}

RgbImage generate_camera_image(const SimConfig& cfg, int index) {
    validate_config(cfg);
    const int size = cfg.image_size;
    Rng rng(image_seed(cfg, 0, index));

    // Per-image draws, in a fixed order: dynamic range (binary orders of
    // magnitude), exposure, per-channel gains, then the field knots.
    const double log_range = rng.uniform(1.5, 3.5);
    double gain = cfg.exposure_gain;
    if (gain < 0.0) gain = std::exp2(rng.uniform(-2.5, -0.5));
    double channel_gain[3];
    for (double& c : channel_gain) c = rng.uniform(0.9, 1.1);

    const std::vector<double> coarse = sample_knots(rng, 4);
    const std::vector<double> fine = sample_knots(rng, 8);
    const std::vector<double> coarse_field = interpolate_knots(coarse, 4, size);
    const std::vector<double> fine_field = interpolate_knots(fine, 8, size);

    const std::size_t n = static_cast<std::size_t>(size) * size;
    std::vector<double> field(n);
    for (std::size_t i = 0; i < n; ++i) field[i] = coarse_field[i] + 0.5 * fine_field[i];

    // Standardize the log field so log_range acts as the true spread.
    double mean = 0.0;
    for (double v : field) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : field) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double inv_std = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;

    RgbImage img = make_rgb_image(size, size);
    for (std::size_t i = 0; i < n; ++i) {
        const double irradiance = std::exp2(log_range * ((field[i] - mean) * inv_std));
        for (int ch = 0; ch < 3; ++ch) {
            const double lin = gain * channel_gain[ch] * irradiance;
            const long q = std::lround(lin * 255.0);
            const std::uint8_t byte = static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
            if (ch == 0) img.pixels[i].r = byte;
            else if (ch == 1) img.pixels[i].g = byte;
            else img.pixels[i].b = byte;
        }
    }
    return img;
}

std::vector<RgbImage> generate_gan_corpus(const SimConfig& cfg, int jobs) {
    validate_config(cfg);
    const GeneratorWeights gw = make_generator_weights(cfg);
    const std::vector<double> betas = expand_per_plane(cfg.beta, cfg.depth, "beta");
    const std::vector<double> gammas = expand_per_plane(cfg.gamma, cfg.depth, "gamma");

    std::vector<RgbImage> corpus(static_cast<std::size_t>(cfg.count));
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        Rng rng(image_seed(cfg, 1, static_cast<int>(i)));
        FeatureMap fm = make_feature_map(cfg.depth, kLatentSize, kLatentSize);
        for (double& v : fm.values) v = rng.normal();
        for (const auto& stage_w : gw.stages) {
            fm = upsample2x(fm);
            fm = conv3x3(fm, stage_w);
            leaky_relu_inplace(fm);
            fm = apply_normalization(cfg, fm, betas, gammas);
        }
        corpus[i] = to_rgb(fm, gw.to_rgb);
    });
    return corpus;
}

std::vector<RgbImage> generate_camera_corpus(const SimConfig& cfg, int jobs) {
    validate_config(cfg);
    std::vector<RgbImage> corpus(static_cast<std::size_t>(cfg.count));
    parallel_for(corpus.size(), jobs, [&](std::size_t i) {
        corpus[i] = generate_camera_image(cfg, static_cast<int>(i));
    });
    return corpus;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<double> parse_double_list(const std::string& text, const char* key) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, std::string("bad number for ") + key + ": " + item);
        }
    }
    if (out.empty()) throw Error(ErrorCode::ParseError, std::string("empty list for ") + key);
    return out;
}

long long parse_integer(const std::string& text, const char* key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, std::string("bad integer for ") + key + ": " + text);
    }
}

std::uint64_t parse_u64(const std::string& text, const char* key) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, std::string("bad integer for ") + key + ": " + text);
    }
}

} // namespace

bool apply_sim_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "seed") cfg.seed = parse_u64(value, "seed");
    else if (key == "image_size") cfg.image_size = static_cast<int>(parse_integer(value, "image_size"));
    else if (key == "depth") cfg.depth = static_cast<int>(parse_integer(value, "depth"));
    else if (key == "normalization") cfg.normalization = parse_normalization(value);
    else if (key == "weight_profile") cfg.weight_profile = parse_weight_profile(value);
    else if (key == "count") cfg.count = static_cast<int>(parse_integer(value, "count"));
    else if (key == "beta") cfg.beta = parse_double_list(value, "beta");
    else if (key == "gamma") cfg.gamma = parse_double_list(value, "gamma");
    else if (key == "exposure_gain") cfg.exposure_gain = parse_double_list(value, "exposure_gain")[0];
    else return false;
    return true;
}

SimConfig parse_sim_config(const std::string& text) {
    SimConfig cfg;
    std::stringstream ss(text);
    std::string line;
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
        if (!apply_sim_config_key(cfg, key, value)) {
            throw Error(ErrorCode::ParseError, "unknown config key: " + key);
        }
    }
    validate_config(cfg);
    return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open config", path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sim_config(ss.str());
}

namespace {

std::string format_double_list(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out += buf;
    }
    return out;
}

} // namespace

std::string format_sim_config(const SimConfig& cfg) {
    std::string out;
    out += "seed=" + std::to_string(cfg.seed) + "\n";
    out += "image_size=" + std::to_string(cfg.image_size) + "\n";
    out += "depth=" + std::to_string(cfg.depth) + "\n";
    out += std::string("normalization=") + normalization_name(cfg.normalization) + "\n";
    out += std::string("weight_profile=") + weight_profile_name(cfg.weight_profile) + "\n";
    out += "count=" + std::to_string(cfg.count) + "\n";
    out += "beta=" + format_double_list(cfg.beta) + "\n";
    out += "gamma=" + format_double_list(cfg.gamma) + "\n";
    out += "exposure_gain=" + format_double_list({&cfg.exposure_gain, 1}) + "\n";
    return out;
}

} // namespace ganscan
