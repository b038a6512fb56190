#include <doctest.h>

#include <cmath>

#include "handdigit/error.hpp"
#include "handdigit/image.hpp"
#include "handdigit/pnm.hpp"
#include "handdigit/rng.hpp"

using namespace handdigit;

namespace {

// Scalar reference for one BT.601 conversion.
void reference_ycbcr(int r, int g, int b, int& y, int& cb, int& cr) {
    auto rnd = [](double v) {
        long x = std::lround(v);
        return static_cast<int>(std::clamp(x, 0L, 255L));
    };
    y = rnd(0.299 * r + 0.587 * g + 0.114 * b);
    cb = rnd(128 - 0.168736 * r - 0.331264 * g + 0.5 * b);
    cr = rnd(128 + 0.5 * r - 0.418688 * g - 0.081312 * b);
}

ImageRGB random_image(SplitMix64& rng, int w, int h) {
    ImageRGB img(w, h);
    for (auto& byte : img.data) byte = static_cast<std::uint8_t>(rng.bounded(256));
    return img;
}

}  // namespace

TEST_SUITE("image") {

TEST_CASE("ppm decode: identity on a 2x2 file") {
    std::vector<std::uint8_t> bytes = {'P', '6', '\n', '2', ' ', '2', '\n', '2', '5', '5', '\n'};
    for (int i = 0; i < 12; ++i) bytes.push_back(static_cast<std::uint8_t>(i * 7));
    ImageRGB img = decode_image(bytes);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    for (int i = 0; i < 12; ++i) CHECK(img.data[i] == i * 7);
}

TEST_CASE("ppm decode: truncated payload reports the shortage") {
    std::vector<std::uint8_t> bytes = {'P', '6', '\n', '4', ' ', '4', '\n', '2', '5', '5', '\n'};
    for (int i = 0; i < 10; ++i) bytes.push_back(0);
    CHECK_THROWS_WITH_AS(decode_image(bytes), doctest::Contains("truncated"), DecodeError);
}

TEST_CASE("ppm decode: header errors name the field") {
    CHECK_THROWS_WITH_AS(decode_image({'P', '3', '\n'}), doctest::Contains("magic"), DecodeError);
    std::vector<std::uint8_t> bad_maxval = {'P', '6', '\n', '1', ' ', '1', '\n', '6', '5', '\n',
                                            0,   0,   0};
    CHECK_THROWS_WITH_AS(decode_image(bad_maxval), doctest::Contains("maxval"), DecodeError);
    std::vector<std::uint8_t> no_width = {'P', '6', '\n', 'x'};
    CHECK_THROWS_WITH_AS(decode_image(no_width), doctest::Contains("width"), DecodeError);
}

TEST_CASE("pgm decode promotes gray to RGB") {
    std::vector<std::uint8_t> bytes = {'P', '5', '\n', '2', ' ', '1', '\n', '2', '5', '5', '\n',
                                       0, 255};
    ImageRGB img = decode_image(bytes);
    CHECK(img.data == std::vector<std::uint8_t>{0, 0, 0, 255, 255, 255});
}

TEST_CASE("ppm round-trips byte-identically") {
    SplitMix64 rng(42);
    for (int iter = 0; iter < 10; ++iter) {
        ImageRGB img = random_image(rng, 1 + static_cast<int>(rng.bounded(16)),
                                    1 + static_cast<int>(rng.bounded(16)));
        auto bytes = encode_ppm(img);
        CHECK(decode_image(bytes) == img);
        CHECK(encode_ppm(decode_image(bytes)) == bytes);
    }
}

TEST_CASE("lowpass radius 0 is the identity") {
    SplitMix64 rng(7);
    for (int iter = 0; iter < 8; ++iter) {
        ImageRGB img = random_image(rng, 1 + static_cast<int>(rng.bounded(12)),
                                    1 + static_cast<int>(rng.bounded(12)));
        CHECK(lowpass(img, 0) == img);
    }
}

TEST_CASE("lowpass keeps constant images constant") {
    ImageRGB img(9, 5);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = 13;
        img.data[i + 1] = 200;
        img.data[i + 2] = 77;
    }
    CHECK(lowpass(img, 3) == img);
}

TEST_CASE("lowpass 3x1 row (0,90,0) radius 1 gives center 30") {
    ImageRGB img(3, 1);
    img.set(1, 0, 90, 90, 90);
    ImageRGB out = lowpass(img, 1);
    CHECK(out.data[3] == 30);  // center pixel, all channels
    CHECK(out.data[4] == 30);
    // Edge pixels clamp-replicate: (0+0+90)/3 = 30 as well.
    CHECK(out.data[0] == 30);
    CHECK(out.data[6] == 30);
}

TEST_CASE("lowpass larger than the image degenerates to the global mean") {
    ImageRGB img(2, 2);
    img.set(0, 0, 100, 100, 100);
    ImageRGB out = lowpass(img, 5);
    for (int i = 0; i < 4; ++i) CHECK(out.data[i * 3] == 25);
}

TEST_CASE("rgb_to_ycbcr: achromatic pixels have Cb = Cr = 128") {
    ImageRGB img(256, 1);
    for (int v = 0; v < 256; ++v)
        img.set(v, 0, static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v),
                static_cast<std::uint8_t>(v));
    ImageYCbCr out = rgb_to_ycbcr(img);
    for (int v = 0; v < 256; ++v) {
        CHECK(out.data[v * 3] == v);
        CHECK(out.data[v * 3 + 1] == 128);
        CHECK(out.data[v * 3 + 2] == 128);
    }
}

TEST_CASE("rgb_to_ycbcr: primary colors match the scalar reference") {
    ImageRGB img(2, 1);
    img.set(0, 0, 255, 0, 0);
    img.set(1, 0, 0, 0, 255);
    ImageYCbCr out = rgb_to_ycbcr(img);
    int y, cb, cr;
    reference_ycbcr(255, 0, 0, y, cb, cr);
    CHECK(out.data[0] == y);
    CHECK(out.data[1] == cb);
    CHECK(out.data[2] == cr);
    CHECK(y == 76);
    CHECK(cb == 85);
    CHECK(cr == 255);
    reference_ycbcr(0, 0, 255, y, cb, cr);
    CHECK(out.data[3] == y);
    CHECK(out.data[4] == cb);
    CHECK(out.data[5] == cr);
    CHECK(y == 29);
    CHECK(cb == 255);
    CHECK(cr == 107);
}

TEST_CASE("rgb_to_ycbcr preserves dimensions") {
    SplitMix64 rng(5);
    for (int iter = 0; iter < 5; ++iter) {
        int w = 1 + static_cast<int>(rng.bounded(20));
        int h = 1 + static_cast<int>(rng.bounded(20));
        ImageRGB img = random_image(rng, w, h);
        ImageYCbCr out = rgb_to_ycbcr(img);
        CHECK(out.width == w);
        CHECK(out.height == h);
    }
}

TEST_CASE("ycbcr_to_rgb round-trips chroma inside the skin box") {
    // The generator relies on mid-range chroma surviving a round trip
    // within one unit.
    for (int cb = 80; cb <= 124; cb += 4)
        for (int cr = 142; cr <= 200; cr += 4) {
            std::uint8_t r, g, b;
            ycbcr_to_rgb(150, cb, cr, r, g, b);
            ImageRGB px(1, 1);
            px.set(0, 0, r, g, b);
            ImageYCbCr back = rgb_to_ycbcr(px);
            CHECK(std::abs(back.data[1] - cb) <= 1);
            CHECK(std::abs(back.data[2] - cr) <= 1);
        }
}

}  // TEST_SUITE
