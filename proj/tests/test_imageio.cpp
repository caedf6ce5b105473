#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "ganscan/errors.hpp"
#include "ganscan/image.hpp"
#include "ganscan/imageio.hpp"
#include "ganscan/rng.hpp"

using namespace ganscan;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "ganscan_imageio_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// Fixture writer: 16-bit or 8-bit PNG, gray or RGB, straight through libpng.
void write_png_fixture(const fs::path& path, int width, int height, int bit_depth, bool gray,
                       const std::vector<std::uint16_t>& samples) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, f);
    const int color = gray ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int nch = gray ? 1 : 3;
    const std::size_t row_samples = static_cast<std::size_t>(width) * nch;
    std::vector<png_byte> row(row_samples * (bit_depth == 16 ? 2 : 1));
    for (int y = 0; y < height; ++y) {
        for (std::size_t s = 0; s < row_samples; ++s) {
            const std::uint16_t v = samples[static_cast<std::size_t>(y) * row_samples + s];
            if (bit_depth == 16) {
                row[s * 2] = static_cast<png_byte>(v >> 8);
                row[s * 2 + 1] = static_cast<png_byte>(v & 0xFF);
            } else {
                row[s] = static_cast<png_byte>(v);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
}

void write_jpeg_fixture(const fs::path& path, int width, int height, bool gray,
                        const std::vector<std::uint8_t>& samples, int quality) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    jpeg_compress_struct cinfo{};
    jpeg_error_mgr err{};
    cinfo.err = jpeg_std_error(&err);
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, f);
    cinfo.image_width = static_cast<JDIMENSION>(width);
    cinfo.image_height = static_cast<JDIMENSION>(height);
    cinfo.input_components = gray ? 1 : 3;
    cinfo.in_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(width) * (gray ? 1 : 3);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(samples.data() + cinfo.next_scanline * stride);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(f);
}

} // namespace

TEST_CASE("png round trip preserves pixels exactly") {
    const fs::path p = temp_dir() / "white2x2.png";
    save_png(make_rgb_image(2, 2, Rgb{255, 255, 255}), p);
    const RgbImage img = load_image(p);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    for (const Rgb& px : img.pixels) CHECK(px == Rgb{255, 255, 255});

    const fs::path pr = temp_dir() / "red1x1.png";
    save_png(make_rgb_image(1, 1, Rgb{255, 0, 0}), pr);
    const RgbImage red = load_image(pr);
    CHECK(red.width == 1);
    CHECK(red.height == 1);
    CHECK(red.pixels[0] == Rgb{255, 0, 0});
}

TEST_CASE("png round trip on random content") {
    Rng rng(7);
    RgbImage img = make_rgb_image(23, 17);
    for (Rgb& px : img.pixels) {
        px = Rgb{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    const fs::path p = temp_dir() / "random.png";
    save_png(img, p);
    CHECK(load_image(p) == img);
}

TEST_CASE("decoding is deterministic across loads") {
    Rng rng(11);
    RgbImage img = make_rgb_image(9, 5);
    for (Rgb& px : img.pixels) px.r = static_cast<std::uint8_t>(rng.below(256));
    const fs::path p = temp_dir() / "det.png";
    save_png(img, p);
    CHECK(load_image(p) == load_image(p));
}

TEST_CASE("grayscale png replicates channels") {
    const fs::path p = temp_dir() / "gray8.png";
    write_png_fixture(p, 3, 1, 8, true, {0, 128, 255});
    const RgbImage img = load_image(p);
    CHECK(img.pixels[0] == Rgb{0, 0, 0});
    CHECK(img.pixels[1] == Rgb{128, 128, 128});
    CHECK(img.pixels[2] == Rgb{255, 255, 255});
}

TEST_CASE("16-bit png reduces by integer division by 257") {
    // 65535/257 == 255, 257/257 == 1, 256/257 == 0, 385/257 == 1 (floor, not round)
    const fs::path p = temp_dir() / "gray16.png";
    write_png_fixture(p, 5, 1, 16, true, {65535, 257, 256, 385, 0});
    const RgbImage img = load_image(p);
    CHECK(img.pixels[0].r == 255);
    CHECK(img.pixels[1].r == 1);
    CHECK(img.pixels[2].r == 0);
    CHECK(img.pixels[3].r == 1);
    CHECK(img.pixels[4].r == 0);

    const fs::path prgb = temp_dir() / "rgb16.png";
    write_png_fixture(prgb, 1, 1, 16, false, {65535, 32896, 514});
    const RgbImage rgb = load_image(prgb);
    CHECK(rgb.pixels[0] == Rgb{255, 128, 2});
}

TEST_CASE("jpeg decodes and grayscale jpeg replicates") {
    const int w = 32, h = 32;
    std::vector<std::uint8_t> flat(static_cast<std::size_t>(w) * h * 3, 200);
    const fs::path p = temp_dir() / "flat.jpg";
    write_jpeg_fixture(p, w, h, false, flat, 95);
    const RgbImage img = load_image(p);
    CHECK(img.width == w);
    CHECK(img.height == h);
    // Uniform blocks survive DCT nearly exactly.
    for (const Rgb& px : img.pixels) {
        CHECK(std::abs(int(px.r) - 200) <= 2);
        CHECK(std::abs(int(px.g) - 200) <= 2);
        CHECK(std::abs(int(px.b) - 200) <= 2);
    }

    std::vector<std::uint8_t> gflat(static_cast<std::size_t>(w) * h, 77);
    const fs::path pg = temp_dir() / "flatgray.jpg";
    write_jpeg_fixture(pg, w, h, true, gflat, 95);
    const RgbImage gimg = load_image(pg);
    for (const Rgb& px : gimg.pixels) {
        CHECK(px.r == px.g);
        CHECK(px.g == px.b);
        CHECK(std::abs(int(px.r) - 77) <= 2);
    }
}

TEST_CASE("error kinds carry the offending path") {
    const fs::path missing = temp_dir() / "nope.png";
    try {
        load_image(missing);
        FAIL("expected FileNotFound");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FileNotFound);
        CHECK(e.path() == missing.string());
    }

    const fs::path garbage = temp_dir() / "garbage.bin";
    std::ofstream(garbage, std::ios::binary) << "this is not an image at all";
    try {
        load_image(garbage);
        FAIL("expected UnsupportedFormat");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedFormat);
    }
}

TEST_CASE("truncated files are reported as corrupt") {
    const fs::path whole = temp_dir() / "whole.png";
    RgbImage img = make_rgb_image(16, 16, Rgb{10, 200, 30});
    save_png(img, whole);
    std::ifstream in(whole, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() > 40);

    const fs::path cut = temp_dir() / "cut.png";
    std::ofstream(cut, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    CHECK_THROWS_AS(load_image(cut), Error);
    try {
        load_image(cut);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CorruptImage);
    }

    // Truncated JPEG
    const fs::path jwhole = temp_dir() / "whole.jpg";
    std::vector<std::uint8_t> flat(32 * 32 * 3, 90);
    write_jpeg_fixture(jwhole, 32, 32, false, flat, 90);
    std::ifstream jin(jwhole, std::ios::binary);
    std::vector<char> jbytes((std::istreambuf_iterator<char>(jin)), std::istreambuf_iterator<char>());
    const fs::path jcut = temp_dir() / "cut.jpg";
    std::ofstream(jcut, std::ios::binary).write(jbytes.data(), 24);
    try {
        load_image(jcut);
        FAIL("expected CorruptImage");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CorruptImage);
    }
}

TEST_CASE("to_gray matches the fixed luma examples") {
    CHECK(luma601(Rgb{255, 255, 255}) == 255);
    CHECK(luma601(Rgb{100, 100, 100}) == 100);
    CHECK(luma601(Rgb{255, 0, 0}) == 76); // 0.299*255 = 76.245
    CHECK(luma601(Rgb{0, 255, 0}) == 150); // 0.587*255 = 149.685
    CHECK(luma601(Rgb{0, 0, 255}) == 29); // 0.114*255 = 29.07
}

TEST_CASE("to_gray is the identity on replicated gray") {
    for (int g = 0; g <= 255; ++g) {
        const std::uint8_t v = static_cast<std::uint8_t>(g);
        RgbImage img = make_rgb_image(1, 1, Rgb{v, v, v});
        CHECK(to_gray(img).pixels[0] == v);
    }
}

TEST_CASE("to_gray stays within the channel range") {
    Rng rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const Rgb px{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                     static_cast<std::uint8_t>(rng.below(256))};
        const std::uint8_t y = luma601(px);
        const std::uint8_t lo = std::min({px.r, px.g, px.b});
        const std::uint8_t hi = std::max({px.r, px.g, px.b});
        CHECK(y >= lo);
        CHECK(y <= hi);
    }
}
