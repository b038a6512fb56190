#include "handdigit/fingers.hpp"

#include <cmath>

#include "handdigit/error.hpp"

namespace handdigit {

HandBounds hand_bounds(const BinaryMask& mask) {
    // Hull of the union of pixel squares, so an axis-aligned w x h block
    // reports exactly w x h. Only boundary pixels can contribute hull
    // corners.
    std::vector<PointF> corners;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            bool boundary = x == 0 || y == 0 || x == mask.width - 1 || y == mask.height - 1 ||
                            !mask.at(x - 1, y) || !mask.at(x + 1, y) || !mask.at(x, y - 1) ||
                            !mask.at(x, y + 1);
            if (!boundary) continue;
            corners.push_back({x - 0.5, y - 0.5});
            corners.push_back({x + 0.5, y - 0.5});
            corners.push_back({x - 0.5, y + 0.5});
            corners.push_back({x + 0.5, y + 0.5});
        }
    }
    if (corners.empty()) throw GeometryError("hand_bounds: empty mask");
    auto hull = convex_hull(std::move(corners));
    HandBounds hb;
    hb.rect = min_perimeter_rect(hull);
    double w = 2.0 * hb.rect.half_w, h = 2.0 * hb.rect.half_h;
    hb.hand_length = std::max(w, h);
    hb.hand_width = std::min(w, h);
    return hb;
}

std::pair<double, double> palm_dims(double hand_length) {
    if (!(hand_length > 0)) throw ParamError("palm_dims: hand_length must be > 0");
    return {0.496 * hand_length, 0.44 * hand_length};
}

PalmWindow locate_palm(const BinaryMask& mask, std::pair<double, double> dims) {
    const int wh = std::max(1, static_cast<int>(std::lround(dims.first)));   // window height
    const int ww = std::max(1, static_cast<int>(std::lround(dims.second)));  // window width
    if (ww > mask.width || wh > mask.height)
        throw ParamError("locate_palm: window " + std::to_string(ww) + "x" + std::to_string(wh) +
                         " exceeds canvas " + std::to_string(mask.width) + "x" +
                         std::to_string(mask.height));

    const int w = mask.width, h = mask.height;
    // Integral image, (w+1) x (h+1).
    std::vector<std::int64_t> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
        std::int64_t row = 0;
        for (int x = 0; x < w; ++x) {
            row += mask.at(x, y) ? 1 : 0;
            integral[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
                integral[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] + row;
        }
    }
    auto window_sum = [&](int x, int y) {
        return integral[static_cast<std::size_t>(y + wh) * (w + 1) + (x + ww)] -
               integral[static_cast<std::size_t>(y) * (w + 1) + (x + ww)] -
               integral[static_cast<std::size_t>(y + wh) * (w + 1) + x] +
               integral[static_cast<std::size_t>(y) * (w + 1) + x];
    };

    PalmWindow best{0, 0, ww, wh, 0};
    std::int64_t best_count = -1;
    for (int y = 0; y + wh <= h; ++y)
        for (int x = 0; x + ww <= w; ++x) {
            std::int64_t c = window_sum(x, y);
            if (c > best_count) {
                best_count = c;
                best.x = x;
                best.y = y;
            }
        }
    best.skin_count = static_cast<std::size_t>(best_count);
    return best;
}

BinaryMask strip_to_fingers(const BinaryMask& mask, const PalmWindow& palm) {
    // Circle through the geometric corners of the w x h window.
    const double cx = palm.x - 0.5 + palm.width / 2.0;
    const double cy = palm.y - 0.5 + palm.height / 2.0;
    const double r2 = (static_cast<double>(palm.width) * palm.width +
                       static_cast<double>(palm.height) * palm.height) /
                      4.0;
    const int bottom = palm.y + palm.height - 1;

    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        if (y > bottom) continue;  // wrist: everything strictly below the window
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r2) continue;  // palm circle, boundary inclusive
            out.set(x, y, true);
        }
    }
    return out;
}

}  // namespace handdigit
