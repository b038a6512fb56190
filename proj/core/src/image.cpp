#include "handdigit/image.hpp"

#include <algorithm>
#include <cmath>

#include "handdigit/error.hpp"

namespace handdigit {

namespace {

inline std::uint8_t clamp_round(double v) {
    long r = std::lround(v);  // ties away from zero
    if (r < 0) return 0;
    if (r > 255) return 255;
    return static_cast<std::uint8_t>(r);
}

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

ImageRGB lowpass(const ImageRGB& img, int radius) {
    if (radius < 0) throw ParamError("lowpass: radius must be >= 0");
    if (radius == 0 || img.width == 0 || img.height == 0) return img;

    const int w = img.width, h = img.height;
    const int k = 2 * radius + 1;
    // Separable clamped box: horizontal integer sums, then vertical.
    std::vector<std::int64_t> rowsum(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int64_t s[3] = {0, 0, 0};
            for (int dx = -radius; dx <= radius; ++dx) {
                std::size_t i = img.index(clampi(x + dx, 0, w - 1), y);
                s[0] += img.data[i];
                s[1] += img.data[i + 1];
                s[2] += img.data[i + 2];
            }
            std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
            rowsum[o] = s[0];
            rowsum[o + 1] = s[1];
            rowsum[o + 2] = s[2];
        }
    }
    ImageRGB out(w, h);
    const double norm = 1.0 / (static_cast<double>(k) * k);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int64_t s[3] = {0, 0, 0};
            for (int dy = -radius; dy <= radius; ++dy) {
                std::size_t i = (static_cast<std::size_t>(clampi(y + dy, 0, h - 1)) * w + x) * 3;
                s[0] += rowsum[i];
                s[1] += rowsum[i + 1];
                s[2] += rowsum[i + 2];
            }
            std::size_t o = out.index(x, y);
            out.data[o] = clamp_round(s[0] * norm);
            out.data[o + 1] = clamp_round(s[1] * norm);
            out.data[o + 2] = clamp_round(s[2] * norm);
        }
    }
    return out;
}

ImageYCbCr rgb_to_ycbcr(const ImageRGB& img) {
    ImageYCbCr out(img.width, img.height);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t p = 0; p < n; ++p) {
        const double r = img.data[p * 3];
        const double g = img.data[p * 3 + 1];
        const double b = img.data[p * 3 + 2];
        out.data[p * 3] = clamp_round(0.299 * r + 0.587 * g + 0.114 * b);
        out.data[p * 3 + 1] = clamp_round(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b);
        out.data[p * 3 + 2] = clamp_round(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b);
    }
    return out;
}

void ycbcr_to_rgb(int y, int cb, int cr, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
    const double dcb = cb - 128.0, dcr = cr - 128.0;
    r = clamp_round(y + 1.402 * dcr);
    g = clamp_round(y - 0.344136 * dcb - 0.714136 * dcr);
    b = clamp_round(y + 1.772 * dcb);
}

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return clamp_round(0.299 * r + 0.587 * g + 0.114 * b);
}

}  // namespace handdigit
