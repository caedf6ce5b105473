#pragma once

#include <cstdint>
#include <vector>

namespace ganscan {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major. pixels.size() == width * height.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    std::size_t pixel_count() const { return pixels.size(); }
    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// 8-bit intensity raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t pixel_count() const { return pixels.size(); }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

RgbImage make_rgb_image(int width, int height, Rgb fill = Rgb{});
GrayImage make_gray_image(int width, int height, std::uint8_t fill = 0);

/// BT.601 luma, round-half-away-from-zero: I = round(0.299 R + 0.587 G + 0.114 B).
GrayImage to_gray(const RgbImage& img);

std::uint8_t luma601(Rgb p);

} // namespace ganscan
