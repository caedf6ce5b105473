#include "ganscan/imageio.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "ganscan/errors.hpp"

namespace ganscan {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        const ErrorCode code = (mode[0] == 'r') ? ErrorCode::FileNotFound : ErrorCode::IoError;
        throw Error(code, "cannot open file", path.string());
    }
    return f;
}

enum class Magic { Png, Jpeg, Unknown };

Magic sniff_magic(std::FILE* f) {
    unsigned char head[8] = {};
    const std::size_t got = std::fread(head, 1, sizeof(head), f);
    std::rewind(f);
    if (got >= 8 && png_sig_cmp(head, 0, 8) == 0) return Magic::Png;
    if (got >= 3 && head[0] == 0xFF && head[1] == 0xD8 && head[2] == 0xFF) return Magic::Jpeg;
    return Magic::Unknown;
}

// ---- PNG ----

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

void png_error_to_longjmp(png_structp png, png_const_charp /*msg*/) {
    std::longjmp(png_jmpbuf(png), 1);
}

void png_warning_silencer(png_structp, png_const_charp) {}

RgbImage load_png(std::FILE* f, const std::filesystem::path& path) {
    PngReadGuard guard;
    guard.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                       png_warning_silencer);
    if (!guard.png) throw Error(ErrorCode::IoError, "libpng init failed", path.string());
    guard.info = png_create_info_struct(guard.png);
    if (!guard.info) throw Error(ErrorCode::IoError, "libpng init failed", path.string());

    RgbImage img;
    std::vector<png_byte> raster;
    std::vector<png_bytep> row_ptrs;
    volatile bool sixteen_bit = false;
    volatile int channels = 0;

    if (setjmp(png_jmpbuf(guard.png))) {
        throw Error(ErrorCode::CorruptImage, "PNG decode failed", path.string());
    }

    png_init_io(guard.png, f);
    png_read_info(guard.png, guard.info);

    const png_uint_32 width = png_get_image_width(guard.png, guard.info);
    const png_uint_32 height = png_get_image_height(guard.png, guard.info);
    const int bit_depth = png_get_bit_depth(guard.png, guard.info);
    const int color_type = png_get_color_type(guard.png, guard.info);

    if (width == 0 || height == 0) {
        throw Error(ErrorCode::CorruptImage, "PNG with zero dimension", path.string());
    }

    // Normalize to 8- or 16-bit gray/RGB without alpha. 16-bit stays 16-bit
    // here; the reduction by integer division happens below.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(guard.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(guard.png);
    }
    if (png_get_valid(guard.png, guard.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(guard.png);
    png_set_strip_alpha(guard.png);
    png_set_interlace_handling(guard.png);
    png_read_update_info(guard.png, guard.info);

    const int out_channels = png_get_channels(guard.png, guard.info);
    const int out_depth = png_get_bit_depth(guard.png, guard.info);
    if ((out_channels != 1 && out_channels != 3) || (out_depth != 8 && out_depth != 16)) {
        throw Error(ErrorCode::UnsupportedFormat, "unexpected PNG layout", path.string());
    }
    sixteen_bit = (out_depth == 16);
    channels = out_channels;

    const std::size_t rowbytes = png_get_rowbytes(guard.png, guard.info);
    raster.resize(rowbytes * height);
    row_ptrs.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = raster.data() + y * rowbytes;

    png_read_image(guard.png, row_ptrs.data());
    png_read_end(guard.png, nullptr);

    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.pixels.resize(static_cast<std::size_t>(width) * height);

    const int nch = channels;
    for (png_uint_32 y = 0; y < height; ++y) {
        const png_byte* row = raster.data() + y * rowbytes;
        for (png_uint_32 x = 0; x < width; ++x) {
            std::uint8_t v[3];
            for (int c = 0; c < nch; ++c) {
                if (sixteen_bit) {
                    // Big-endian 16-bit sample reduced by integer division by 257.
                    const std::size_t off = (static_cast<std::size_t>(x) * nch + c) * 2;
                    const unsigned s = (static_cast<unsigned>(row[off]) << 8) | row[off + 1];
                    v[c] = static_cast<std::uint8_t>(s / 257);
                } else {
                    v[c] = row[static_cast<std::size_t>(x) * nch + c];
                }
            }
            Rgb& px = img.pixels[static_cast<std::size_t>(y) * width + x];
            if (nch == 1) {
                px = Rgb{v[0], v[0], v[0]};
            } else {
                px = Rgb{v[0], v[1], v[2]};
            }
        }
    }
    return img;
}

// ---- JPEG ----

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_to_longjmp(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

void jpeg_message_silencer(j_common_ptr, int) {}

struct JpegReadGuard {
    jpeg_decompress_struct cinfo{};
    bool created = false;

    ~JpegReadGuard() {
        if (created) jpeg_destroy_decompress(&cinfo);
    }
};

RgbImage load_jpeg(std::FILE* f, const std::filesystem::path& path) {
    JpegReadGuard guard;
    JpegErrorMgr err{};
    guard.cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_to_longjmp;
    err.base.emit_message = jpeg_message_silencer;

    RgbImage img;
    std::vector<JSAMPLE> row;
    volatile bool unsupported_space = false;

    if (setjmp(err.jump)) {
        if (unsupported_space) {
            throw Error(ErrorCode::UnsupportedFormat, "unsupported JPEG color space", path.string());
        }
        throw Error(ErrorCode::CorruptImage, "JPEG decode failed", path.string());
    }

    jpeg_create_decompress(&guard.cinfo);
    guard.created = true;
    jpeg_stdio_src(&guard.cinfo, f);
    jpeg_read_header(&guard.cinfo, TRUE);

    if (guard.cinfo.jpeg_color_space == JCS_CMYK || guard.cinfo.jpeg_color_space == JCS_YCCK) {
        unsupported_space = true;
        std::longjmp(err.jump, 1);
    }
    const bool gray = (guard.cinfo.jpeg_color_space == JCS_GRAYSCALE);
    guard.cinfo.out_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;

    jpeg_start_decompress(&guard.cinfo);

    const JDIMENSION width = guard.cinfo.output_width;
    const JDIMENSION height = guard.cinfo.output_height;
    const int nch = guard.cinfo.output_components;
    if (width == 0 || height == 0 || (nch != 1 && nch != 3)) {
        std::longjmp(err.jump, 1);
    }

    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.pixels.resize(static_cast<std::size_t>(width) * height);
    row.resize(static_cast<std::size_t>(width) * nch);

    while (guard.cinfo.output_scanline < height) {
        const JDIMENSION y = guard.cinfo.output_scanline;
        JSAMPROW rp = row.data();
        jpeg_read_scanlines(&guard.cinfo, &rp, 1);
        for (JDIMENSION x = 0; x < width; ++x) {
            Rgb& px = img.pixels[static_cast<std::size_t>(y) * width + x];
            if (nch == 1) {
                const std::uint8_t v = row[x];
                px = Rgb{v, v, v};
            } else {
                px = Rgb{row[x * 3u], row[x * 3u + 1], row[x * 3u + 2]};
            }
        }
    }
    jpeg_finish_decompress(&guard.cinfo);
    return img;
}

} // namespace

RgbImage load_image(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    switch (sniff_magic(f.get())) {
        case Magic::Png: return load_png(f.get(), path);
        case Magic::Jpeg: return load_jpeg(f.get(), path);
        case Magic::Unknown: break;
    }
    throw Error(ErrorCode::UnsupportedFormat, "not a PNG or JPEG file", path.string());
}

void save_png(const RgbImage& img, const std::filesystem::path& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height) {
        throw Error(ErrorCode::EmptyImage, "save_png: invalid image", path.string());
    }

    FilePtr f = open_file(path, "wb");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_to_longjmp, png_warning_silencer);
    if (!png) throw Error(ErrorCode::IoError, "libpng init failed", path.string());
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::IoError, "libpng init failed", path.string());
    }

    std::vector<png_bytep> row_ptrs(static_cast<std::size_t>(img.height));
    // Rgb is three packed bytes, so rows can alias the pixel buffer directly.
    static_assert(sizeof(Rgb) == 3);
    for (int y = 0; y < img.height; ++y) {
        row_ptrs[static_cast<std::size_t>(y)] = reinterpret_cast<png_bytep>(const_cast<Rgb*>(
            img.pixels.data() + static_cast<std::size_t>(y) * img.width));
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "PNG encode failed", path.string());
    }

    png_init_io(png, f.get());
    png_set_compression_level(png, 6); // fixed settings keep output byte-stable
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

} // namespace ganscan
