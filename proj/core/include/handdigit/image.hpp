#pragma once

#include <cstdint>
#include <vector>

namespace handdigit {

/// Row-major 8-bit RGB raster. data holds width*height*3 bytes.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    ImageRGB() = default;
    ImageRGB(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::size_t i = index(x, y);
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
    bool operator==(const ImageRGB&) const = default;
};

/// Row-major 8-bit YCbCr raster, same layout as ImageRGB.
struct ImageYCbCr {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    ImageYCbCr() = default;
    ImageYCbCr(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }
    bool operator==(const ImageYCbCr&) const = default;
};

/// Row-major 8-bit single-channel raster.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const GrayImage&) const = default;
};

/// Row-major boolean raster (true = foreground). Shared by skin masks
/// and edge maps.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    std::size_t count_true() const {
        std::size_t n = 0;
        for (auto b : bits) n += b != 0;
        return n;
    }
    bool operator==(const BinaryMask&) const = default;
};

using EdgeMap = BinaryMask;

/// Per-channel box mean over the (2*radius+1)^2 neighborhood with
/// edge-clamped indices. radius 0 is the identity.
ImageRGB lowpass(const ImageRGB& img, int radius);

/// Full-range BT.601 conversion (chroma offset 128), rounded to nearest
/// with ties away from zero, then clamped to 0..255. Achromatic input
/// maps to Cb = Cr = 128 exactly.
ImageYCbCr rgb_to_ycbcr(const ImageRGB& img);

/// Approximate inverse of rgb_to_ycbcr (same BT.601 coefficients).
void ycbcr_to_rgb(int y, int cb, int cr, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

/// BT.601 luma of a single pixel, rounded like rgb_to_ycbcr.
std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace handdigit
