#include "ganscan/image.hpp"

#include <algorithm>
#include <cmath>

namespace ganscan {

RgbImage make_rgb_image(int width, int height, Rgb fill) {
    RgbImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

GrayImage make_gray_image(int width, int height, std::uint8_t fill) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, fill);
    return img;
}

std::uint8_t luma601(Rgb p) {
    const double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    const long rounded = std::lround(y); // lround rounds halves away from zero
    return static_cast<std::uint8_t>(std::clamp(rounded, 0L, 255L));
}

GrayImage to_gray(const RgbImage& img) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[i] = luma601(img.pixels[i]);
    }
    return out;
}

} // namespace ganscan
