#include "handdigit/edge.hpp"

#include <cmath>
#include <queue>

#include "handdigit/error.hpp"

namespace handdigit {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Neighbor offsets along each quantized direction. prev = the neighbor
// earlier in row-major order, so plateau ties keep one deterministic
// pixel and the whole rule commutes with 90-degree rotations.
constexpr int kPrev[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr int kNext[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};

}  // namespace

GrayImage to_gray(const ImageRGB& img) {
    GrayImage g(img.width, img.height);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t p = 0; p < n; ++p)
        g.data[p] = luma601(img.data[p * 3], img.data[p * 3 + 1], img.data[p * 3 + 2]);
    return g;
}

std::vector<double> gaussian_blur(const GrayImage& img, double sigma) {
    if (sigma <= 0) throw ParamError("gaussian_blur: sigma must be > 0");
    const int w = img.width, h = img.height;
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(r + 1);
    double sum = 0.0;
    for (int i = 0; i <= r; ++i) {
        kernel[i] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += (i == 0) ? kernel[i] : 2.0 * kernel[i];
    }
    for (auto& k : kernel) k /= sum;

    // Symmetric accumulation k0*v0 + sum k_i*(v-i + v+i): reversal of the
    // tap order cannot change the floating-point result.
    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = kernel[0] * img.at(x, y);
            for (int i = 1; i <= r; ++i)
                acc += kernel[i] * (static_cast<double>(img.at(clampi(x - i, 0, w - 1), y)) +
                                    img.at(clampi(x + i, 0, w - 1), y));
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    std::vector<double> out(tmp.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = kernel[0] * tmp[static_cast<std::size_t>(y) * w + x];
            for (int i = 1; i <= r; ++i)
                acc += kernel[i] * (tmp[static_cast<std::size_t>(clampi(y - i, 0, h - 1)) * w + x] +
                                    tmp[static_cast<std::size_t>(clampi(y + i, 0, h - 1)) * w + x]);
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    return out;
}

GradientField sobel_gradient(const std::vector<double>& plane, int width, int height) {
    GradientField g;
    g.width = width;
    g.height = height;
    g.magnitude.assign(plane.size(), 0.0);
    g.direction.assign(plane.size(), 0);
    auto at = [&](int x, int y) {
        return plane[static_cast<std::size_t>(clampi(y, 0, height - 1)) * width +
                     clampi(x, 0, width - 1)];
    };
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            // Separable Sobel, symmetric smoothing term.
            double gx = (at(x + 1, y - 1) - at(x - 1, y - 1)) + (at(x + 1, y + 1) - at(x - 1, y + 1)) +
                        2.0 * (at(x + 1, y) - at(x - 1, y));
            double gy = (at(x - 1, y + 1) - at(x - 1, y - 1)) + (at(x + 1, y + 1) - at(x + 1, y - 1)) +
                        2.0 * (at(x, y + 1) - at(x, y - 1));
            double mag = std::sqrt(gx * gx + gy * gy);
            std::uint8_t dir = 0;
            if (mag > 0.0) {
                double ang = std::atan2(gy, gx) * (180.0 / 3.14159265358979323846);
                if (ang < 0) ang += 180.0;
                if (ang >= 180.0) ang -= 180.0;
                if (ang <= 22.5) dir = 0;
                else if (ang <= 67.5) dir = 1;
                else if (ang <= 112.5) dir = 2;
                else if (ang <= 157.5) dir = 3;
                else dir = 0;
            }
            std::size_t i = static_cast<std::size_t>(y) * width + x;
            g.magnitude[i] = mag;
            g.direction[i] = dir;
        }
    }
    return g;
}

namespace {

// Keep a pixel iff it is strictly greater than its earlier neighbor and
// at least as great as its later neighbor along the gradient direction;
// plateaus keep exactly their first pixel.
std::vector<double> non_max_suppress(const GradientField& g) {
    const int w = g.width, h = g.height;
    std::vector<double> out(g.magnitude.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double m = g.mag(x, y);
            if (m <= 0.0) continue;
            int d = g.dir(x, y);
            int px = x + kPrev[d][0], py = y + kPrev[d][1];
            int nx = x + kNext[d][0], ny = y + kNext[d][1];
            double mp = (px >= 0 && px < w && py >= 0 && py < h) ? g.mag(px, py) : 0.0;
            double mn = (nx >= 0 && nx < w && ny >= 0 && ny < h) ? g.mag(nx, ny) : 0.0;
            if (m > mp && m >= mn) out[static_cast<std::size_t>(y) * w + x] = m;
        }
    }
    return out;
}

EdgeMap hysteresis(const std::vector<double>& mag, int w, int h, double t_low, double t_high) {
    EdgeMap edges(w, h);
    std::vector<std::uint8_t> weak(mag.size(), 0);
    std::queue<std::pair<int, int>> frontier;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mag[i] >= t_high) {
                edges.bits[i] = 1;
                frontier.emplace(x, y);
            } else if (mag[i] >= t_low) {
                weak[i] = 1;
            }
        }
    while (!frontier.empty()) {
        auto [x, y] = frontier.front();
        frontier.pop();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                std::size_t i = static_cast<std::size_t>(ny) * w + nx;
                if (weak[i] && !edges.bits[i]) {
                    edges.bits[i] = 1;
                    frontier.emplace(nx, ny);
                }
            }
    }
    return edges;
}

}  // namespace

EdgeMap canny(const GrayImage& img, double sigma, double t_low, double t_high) {
    if (!(t_low > 0.0) || !(t_low < t_high))
        throw ParamError("canny: thresholds must satisfy 0 < t_low < t_high");
    auto blurred = gaussian_blur(img, sigma);
    GradientField g = sobel_gradient(blurred, img.width, img.height);
    auto suppressed = non_max_suppress(g);
    return hysteresis(suppressed, img.width, img.height, t_low, t_high);
}

EdgeMap canny_fractional(const GrayImage& img, double sigma, double low_frac, double high_frac) {
    if (!(low_frac > 0.0) || !(low_frac < high_frac))
        throw ParamError("canny: fractions must satisfy 0 < low_frac < high_frac");
    auto blurred = gaussian_blur(img, sigma);
    GradientField g = sobel_gradient(blurred, img.width, img.height);
    double max_mag = 0.0;
    for (double m : g.magnitude) max_mag = std::max(max_mag, m);
    if (max_mag <= 0.0) return EdgeMap(img.width, img.height);
    auto suppressed = non_max_suppress(g);
    return hysteresis(suppressed, img.width, img.height, low_frac * max_mag, high_frac * max_mag);
}

}  // namespace handdigit
