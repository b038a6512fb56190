#include <doctest.h>

#include <cmath>

#include "handdigit/edge.hpp"
#include "handdigit/error.hpp"
#include "handdigit/rng.hpp"

using namespace handdigit;

namespace {

GrayImage step_image(int w, int h, int split, std::uint8_t lo, std::uint8_t hi) {
    GrayImage g(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) g.at(x, y) = x < split ? lo : hi;
    return g;
}

GrayImage smooth_random(std::uint64_t seed, int w, int h) {
    // A few soft blobs: realistic smooth gradients for NMS properties.
    SplitMix64 rng(seed);
    GrayImage g(w, h);
    struct Blob {
        double cx, cy, r, amp;
    };
    std::vector<Blob> blobs;
    for (int i = 0; i < 4; ++i)
        blobs.push_back({rng.uniform(5, w - 5), rng.uniform(5, h - 5), rng.uniform(4, 10),
                         rng.uniform(80, 200)});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 20;
            for (const auto& b : blobs) {
                double d2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy);
                v += b.amp * std::exp(-d2 / (2 * b.r * b.r));
            }
            g.at(x, y) = static_cast<std::uint8_t>(std::min(255.0, v));
        }
    return g;
}

GrayImage rot90_cw(const GrayImage& g) {
    GrayImage out(g.height, g.width);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) out.at(g.height - 1 - y, x) = g.at(x, y);
    return out;
}

}  // namespace

TEST_SUITE("edge") {

TEST_CASE("to_gray: achromatic identity and red luma") {
    ImageRGB img(2, 1);
    img.set(0, 0, 131, 131, 131);
    img.set(1, 0, 255, 0, 0);
    GrayImage g = to_gray(img);
    CHECK(g.at(0, 0) == 131);
    CHECK(g.at(1, 0) == 76);

    ImageRGB one(1, 1);
    one.set(0, 0, 9, 9, 9);
    GrayImage g1 = to_gray(one);
    CHECK(g1.width == 1);
    CHECK(g1.height == 1);
    CHECK(g1.at(0, 0) == 9);
}

TEST_CASE("canny rejects bad thresholds") {
    GrayImage g(8, 8);
    CHECK_THROWS_AS(canny(g, 1.0, 60, 20), ParamError);
    CHECK_THROWS_AS(canny(g, 1.0, 20, 20), ParamError);
    CHECK_THROWS_AS(canny(g, 1.0, 0, 20), ParamError);
    CHECK_THROWS_AS(canny_fractional(g, 1.0, 0.3, 0.1), ParamError);
}

TEST_CASE("constant image produces an empty edge map") {
    GrayImage g(16, 16);
    for (auto& v : g.data) v = 140;
    CHECK(canny(g, 1.0, 20, 60).count_true() == 0);
    CHECK(canny_fractional(g, 1.0, 0.1, 0.3).count_true() == 0);
}

TEST_CASE("vertical step yields a single one-pixel column at the gradient maximum") {
    const int w = 32, h = 32, split = 16;
    GrayImage g = step_image(w, h, split, 0, 255);
    EdgeMap e = canny(g, 1.0, 20, 60);

    // Oracle: blur the analytic 1-D step profile the same way the image
    // is constant vertically, then find the argmax of the central
    // difference gradient.
    std::vector<double> profile(w);
    {
        double sigma = 1.0;
        int r = static_cast<int>(std::ceil(3 * sigma));
        std::vector<double> k(r + 1);
        double sum = 0;
        for (int i = 0; i <= r; ++i) {
            k[i] = std::exp(-(static_cast<double>(i) * i) / (2 * sigma * sigma));
            sum += i == 0 ? k[i] : 2 * k[i];
        }
        for (auto& v : k) v /= sum;
        auto sample = [&](int x) { return std::clamp(x, 0, w - 1) < split ? 0.0 : 255.0; };
        for (int x = 0; x < w; ++x) {
            double acc = k[0] * sample(x);
            for (int i = 1; i <= r; ++i) acc += k[i] * (sample(x - i) + sample(x + i));
            profile[x] = acc;
        }
    }
    int best_x = 1;
    double best_g = -1;
    for (int x = 1; x + 1 < w; ++x) {
        double grad = std::abs(profile[x + 1] - profile[x - 1]);
        if (grad > best_g) {  // plateau tie keeps the leftmost, like NMS
            best_g = grad;
            best_x = x;
        }
    }

    for (int y = 0; y < h; ++y) {
        int count = 0, col = -1;
        for (int x = 0; x < w; ++x)
            if (e.at(x, y)) {
                ++count;
                col = x;
            }
        CHECK(count == 1);
        CHECK(col == best_x);
    }
}

TEST_CASE("edges are thin along their gradient direction") {
    GrayImage g = smooth_random(99, 48, 48);
    auto blurred = gaussian_blur(g, 1.4);
    GradientField gf = sobel_gradient(blurred, g.width, g.height);
    EdgeMap e = canny(g, 1.4, 2.0, 6.0);
    constexpr int prev_off[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x) {
            if (!e.at(x, y)) continue;
            int d = gf.dir(x, y);
            int px = x + prev_off[d][0], py = y + prev_off[d][1];
            int nx = x - prev_off[d][0], ny = y - prev_off[d][1];
            bool both = e.in_bounds(px, py) && e.at(px, py) && e.in_bounds(nx, ny) && e.at(nx, ny);
            CHECK_FALSE(both);
        }
}

TEST_CASE("raising t_high never adds edge pixels") {
    GrayImage g = smooth_random(7, 40, 40);
    EdgeMap lo = canny(g, 1.2, 3.0, 8.0);
    EdgeMap hi = canny(g, 1.2, 3.0, 16.0);
    std::size_t extra = 0;
    for (std::size_t i = 0; i < lo.bits.size(); ++i) {
        if (hi.bits[i]) CHECK(lo.bits[i]);
        extra += lo.bits[i] && !hi.bits[i];
    }
    CHECK(lo.count_true() >= hi.count_true());
}

TEST_CASE("every weak output pixel reaches a strong pixel through output pixels") {
    GrayImage g = smooth_random(21, 40, 40);
    const double t_low = 3.0, t_high = 9.0;
    EdgeMap e = canny(g, 1.2, t_low, t_high);

    // Recompute the suppressed magnitudes to classify strong vs weak.
    auto blurred = gaussian_blur(g, 1.2);
    GradientField gf = sobel_gradient(blurred, g.width, g.height);

    // Flood fill the output from its strong pixels.
    std::vector<std::uint8_t> reach(e.bits.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x)
            if (e.at(x, y) && gf.mag(x, y) >= t_high) {
                reach[static_cast<std::size_t>(y) * e.width + x] = 1;
                stack.push_back({x, y});
            }
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= e.width || ny >= e.height) continue;
                std::size_t i = static_cast<std::size_t>(ny) * e.width + nx;
                if (e.bits[i] && !reach[i]) {
                    reach[i] = 1;
                    stack.push_back({nx, ny});
                }
            }
    }
    for (std::size_t i = 0; i < e.bits.size(); ++i)
        if (e.bits[i]) CHECK(reach[i] == 1);
}

TEST_CASE("rotating the input by 90 degrees rotates the edge map by 90 degrees") {
    GrayImage g = smooth_random(1234, 40, 40);
    EdgeMap e = canny(g, 1.4, 2.0, 6.0);
    EdgeMap er = canny(rot90_cw(g), 1.4, 2.0, 6.0);
    REQUIRE(er.width == e.height);
    REQUIRE(er.height == e.width);
    for (int y = 0; y < e.height; ++y)
        for (int x = 0; x < e.width; ++x) {
            bool a = e.at(x, y);
            bool b = er.at(e.height - 1 - y, x);
            if (a != b) FAIL("rotation mismatch at ", x, ",", y);
        }
}

}  // TEST_SUITE
