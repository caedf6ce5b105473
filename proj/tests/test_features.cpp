#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ganscan/errors.hpp"
#include "ganscan/features.hpp"
#include "ganscan/rng.hpp"

using namespace ganscan;

namespace {

// Independent oracle: count threshold membership pixel by pixel.
SaturationFeatures naive_exposure_features(const GrayImage& img) {
    SaturationFeatures f;
    const double n = static_cast<double>(img.pixels.size());
    for (std::size_t i = 0; i < kOverThresholds.size(); ++i) {
        std::uint64_t count = 0;
        for (std::uint8_t v : img.pixels) {
            if (v >= kOverThresholds[i]) ++count;
        }
        f.f_over[i] = static_cast<double>(count) / n;
    }
    for (std::size_t i = 0; i < kUnderThresholds.size(); ++i) {
        std::uint64_t count = 0;
        for (std::uint8_t v : img.pixels) {
            if (v <= kUnderThresholds[i]) ++count;
        }
        f.f_under[i] = static_cast<double>(count) / n;
    }
    return f;
}

GrayImage random_gray(Rng& rng, int w, int h) {
    GrayImage img = make_gray_image(w, h);
    // Mix of smooth ranges and saturated tails so thresholds actually fire.
    for (std::uint8_t& v : img.pixels) {
        const double u = rng.uniform01();
        if (u < 0.15) v = static_cast<std::uint8_t>(240 + rng.below(16));
        else if (u < 0.3) v = static_cast<std::uint8_t>(rng.below(16));
        else v = static_cast<std::uint8_t>(rng.below(256));
    }
    return img;
}

} // namespace

TEST_CASE("exposure features on fixed examples") {
    CHECK_THROWS_AS(exposure_features(GrayImage{}), Error);

    const SaturationFeatures white = exposure_features(make_gray_image(4, 4, 255));
    for (double v : white.f_over) CHECK(v == 1.0);
    for (double v : white.f_under) CHECK(v == 0.0);

    const SaturationFeatures mid = exposure_features(make_gray_image(4, 4, 128));
    for (double v : mid.f_over) CHECK(v == 0.0);
    for (double v : mid.f_under) CHECK(v == 0.0);
}

TEST_CASE("exposure features on the hand-counted 10x10 image") {
    GrayImage img = make_gray_image(10, 10, 128);
    // 3 pixels at 255, 4 at 252, 2 at 10
    img.pixels[0] = img.pixels[1] = img.pixels[2] = 255;
    img.pixels[3] = img.pixels[4] = img.pixels[5] = img.pixels[6] = 252;
    img.pixels[7] = img.pixels[8] = 10;

    const SaturationFeatures f = exposure_features(img);
    CHECK(f.f_over[0] == doctest::Approx(0.07).epsilon(1e-12)); // tau 240
    CHECK(f.f_over[1] == doctest::Approx(0.07).epsilon(1e-12)); // tau 245
    CHECK(f.f_over[2] == doctest::Approx(0.07).epsilon(1e-12)); // tau 250
    CHECK(f.f_over[3] == doctest::Approx(0.03).epsilon(1e-12)); // tau 255
    CHECK(f.f_under[0] == 0.0); // tau 0
    CHECK(f.f_under[1] == 0.0); // tau 5
    CHECK(f.f_under[2] == doctest::Approx(0.02).epsilon(1e-12)); // tau 10
    CHECK(f.f_under[3] == doctest::Approx(0.02).epsilon(1e-12)); // tau 15
}

TEST_CASE("exposure features match the naive oracle exactly and are monotone") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = 1 + static_cast<int>(rng.below(40));
        const int h = 1 + static_cast<int>(rng.below(40));
        const GrayImage img = random_gray(rng, w, h);
        const SaturationFeatures fast = exposure_features(img);
        const SaturationFeatures slow = naive_exposure_features(img);
        for (int i = 0; i < 4; ++i) {
            CHECK(fast.f_over[i] == slow.f_over[i]); // bit-exact: same counts, same division
            CHECK(fast.f_under[i] == slow.f_under[i]);
        }
        for (int i = 1; i < 4; ++i) {
            CHECK(fast.f_over[i] <= fast.f_over[i - 1]);
            CHECK(fast.f_under[i] >= fast.f_under[i - 1]);
        }
    }
}

TEST_CASE("exposure features are invariant to pixel permutation") {
    Rng rng(55);
    GrayImage img = random_gray(rng, 17, 13);
    const SaturationFeatures before = exposure_features(img);
    rng.shuffle(img.pixels);
    const SaturationFeatures after = exposure_features(img);
    for (int i = 0; i < 4; ++i) {
        CHECK(before.f_over[i] == after.f_over[i]);
        CHECK(before.f_under[i] == after.f_under[i]);
    }
}

TEST_CASE("chroma histogram on fixed examples") {
    CHECK_THROWS_AS(chroma_histogram(RgbImage{}, 8), Error);
    try {
        chroma_histogram(make_rgb_image(2, 2), 1);
        FAIL("expected BinCountTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BinCountTooSmall);
    }

    // Neutral gray: all mass in the bin containing (1/3, 1/3).
    const ChromaHistogram neutral = chroma_histogram(make_rgb_image(3, 3, Rgb{100, 100, 100}), 64);
    const int third = static_cast<int>((100.0 / 300.0) * 64);
    CHECK(neutral.at(third, third) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(neutral.skipped_pixel_count == 0);
    CHECK(neutral.valid_pixel_count == 9);

    // All black: undefined chromaticity everywhere.
    const ChromaHistogram black = chroma_histogram(make_rgb_image(2, 2, Rgb{0, 0, 0}), 16);
    CHECK(black.skipped_pixel_count == 4);
    CHECK(black.valid_pixel_count == 0);
    for (double b : black.bins) CHECK(b == 0.0);

    // Two pixels, B = 2: r=1 clamps into the last r bin, g=1 into the last g bin.
    RgbImage two = make_rgb_image(2, 1);
    two.pixels[0] = Rgb{255, 0, 0};
    two.pixels[1] = Rgb{0, 255, 0};
    const ChromaHistogram h2 = chroma_histogram(two, 2);
    CHECK(h2.at(1, 0) == doctest::Approx(0.5));
    CHECK(h2.at(0, 1) == doctest::Approx(0.5));
    CHECK(h2.at(0, 0) == 0.0);
    CHECK(h2.at(1, 1) == 0.0);

    const std::vector<double> flat = flatten(h2);
    REQUIRE(flat.size() == 4);
    CHECK(flat[2] == doctest::Approx(0.5)); // (r_bin 1, g_bin 0) -> index 2
    CHECK(flat[1] == doctest::Approx(0.5)); // (r_bin 0, g_bin 1) -> index 1
}

TEST_CASE("flatten is row-major") {
    ChromaHistogram h;
    h.size = 2;
    h.bins = {1.0, 0.0, 0.0, 0.0};
    h.valid_pixel_count = 1;
    const std::vector<double> f = flatten(h);
    CHECK(f == std::vector<double>{1.0, 0.0, 0.0, 0.0});

    h.bins = {0.25, 0.25, 0.25, 0.25};
    CHECK(flatten(h) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
}

TEST_CASE("chroma histogram conserves mass and pixel counts") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + static_cast<int>(rng.below(30));
        const int h = 1 + static_cast<int>(rng.below(30));
        RgbImage img = make_rgb_image(w, h);
        for (Rgb& px : img.pixels) {
            if (rng.uniform01() < 0.1) {
                px = Rgb{0, 0, 0};
            } else {
                px = Rgb{static_cast<std::uint8_t>(rng.below(256)),
                         static_cast<std::uint8_t>(rng.below(256)),
                         static_cast<std::uint8_t>(rng.below(256))};
            }
        }
        const ChromaHistogram hist = chroma_histogram(img, 2 + static_cast<int>(rng.below(63)));
        CHECK(hist.valid_pixel_count + hist.skipped_pixel_count == img.pixel_count());
        const double mass = std::accumulate(hist.bins.begin(), hist.bins.end(), 0.0);
        if (hist.valid_pixel_count > 0) {
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        } else {
            CHECK(mass == 0.0);
        }
        for (double b : hist.bins) CHECK(b >= 0.0);
    }
}

TEST_CASE("chroma histogram only places mass where r + g <= 1") {
    Rng rng(78);
    RgbImage img = make_rgb_image(32, 32);
    for (Rgb& px : img.pixels) {
        px = Rgb{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                 static_cast<std::uint8_t>(rng.below(256))};
    }
    const int bins = 16;
    const ChromaHistogram h = chroma_histogram(img, bins);
    for (int rb = 0; rb < bins; ++rb) {
        for (int gb = 0; gb < bins; ++gb) {
            if (h.at(rb, gb) > 0.0) {
                // lower bin corners must satisfy the simplex constraint
                CHECK(static_cast<double>(rb) / bins + static_cast<double>(gb) / bins <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("chroma histogram is invariant to exact-ratio scaling") {
    RgbImage a = make_rgb_image(2, 2, Rgb{10, 20, 30});
    RgbImage b = make_rgb_image(2, 2, Rgb{20, 40, 60});
    for (int bins : {2, 16, 64}) {
        const ChromaHistogram ha = chroma_histogram(a, bins);
        const ChromaHistogram hb = chroma_histogram(b, bins);
        CHECK(ha.bins == hb.bins);
    }

    RgbImage c = make_rgb_image(3, 1);
    c.pixels = {Rgb{1, 2, 3}, Rgb{50, 100, 150}, Rgb{2, 4, 6}};
    RgbImage d = make_rgb_image(3, 1);
    d.pixels = {Rgb{2, 4, 6}, Rgb{25, 50, 75}, Rgb{1, 2, 3}};
    CHECK(chroma_histogram(c, 32).bins == chroma_histogram(d, 32).bins);
}

TEST_CASE("feature set plumbing") {
    CHECK(feature_dimension(FeatureSet::SaturationOver, 64) == 4);
    CHECK(feature_dimension(FeatureSet::SaturationBoth, 64) == 8);
    CHECK(feature_dimension(FeatureSet::ChromaHistogram, 64) == 4096);
    CHECK(parse_feature_set("saturation_over") == FeatureSet::SaturationOver);
    CHECK(parse_feature_set("saturation_both") == FeatureSet::SaturationBoth);
    CHECK(parse_feature_set("chroma_histogram") == FeatureSet::ChromaHistogram);
    CHECK_THROWS_AS(parse_feature_set("bogus"), Error);

    const RgbImage img = make_rgb_image(4, 4, Rgb{255, 255, 255});
    const std::vector<double> over = extract_features(img, FeatureSet::SaturationOver);
    REQUIRE(over.size() == 4);
    for (double v : over) CHECK(v == 1.0);
    const std::vector<double> both = extract_features(img, FeatureSet::SaturationBoth);
    REQUIRE(both.size() == 8);
    CHECK(both[3] == 1.0);
    CHECK(both[4] == 0.0);
    CHECK(extract_features(img, FeatureSet::ChromaHistogram, 8).size() == 64);
}
