#pragma once

#include <filesystem>

#include "ganscan/image.hpp"

namespace ganscan {

/// Decodes a PNG or JPEG file into an 8-bit RGB raster. Format is detected
/// from magic bytes, not the extension. 16-bit samples are reduced with
/// integer division by 257; grayscale sources are replicated across the three
/// channels; alpha is dropped.
///
/// Throws Error with FileNotFound, UnsupportedFormat or CorruptImage.
RgbImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG. Fixed encoder settings, so identical pixels give
/// identical bytes within one build.
void save_png(const RgbImage& img, const std::filesystem::path& path);

} // namespace ganscan
