#include "handdigit/handloc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "handdigit/error.hpp"

namespace handdigit {

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double rad) { return rad * 180.0 / kPi; }
double rad(double degv) { return degv * kPi / 180.0; }

// Absolute angular difference modulo 180 degrees.
double axis_diff_deg(double a, double b) {
    double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

PointF mask_barycenter(const BinaryMask& mask) {
    double sx = 0, sy = 0, n = 0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                sx += x;
                sy += y;
                n += 1;
            }
    if (n == 0) throw GeometryError("mask barycenter: empty mask");
    return {sx / n, sy / n};
}

std::vector<Point> true_pixels(const BinaryMask& mask) {
    std::vector<Point> pts;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) pts.push_back({x, y});
    return pts;
}

}  // namespace

BinaryMask region_to_mask(const Region& region, int pad, Point* origin) {
    if (region.pixels.empty()) throw GeometryError("region_to_mask: empty region");
    const BBox& b = region.bbox;
    BinaryMask m(b.width() + 2 * pad, b.height() + 2 * pad);
    for (const auto& p : region.pixels) m.set(p.x - b.min_x + pad, p.y - b.min_y + pad, true);
    if (origin) *origin = {b.min_x - pad, b.min_y - pad};
    return m;
}

LocalizationOutcome locate_ellipse_method(const BinaryMask& mask, const EdgeMap& edges,
                                          double face_ratio_threshold) {
    if (!(face_ratio_threshold > 0.0 && face_ratio_threshold < 1.0))
        throw ParamError("locate_ellipse_method: face_ratio_threshold must be in (0,1)");

    LocalizationOutcome out;
    out.method = LocateMethod::Ellipse;
    auto regions = connected_components(mask);
    if (regions.empty()) return out;
    if (regions.size() > 3) regions.resize(3);

    struct Scored {
        Region region;
        double ratio;
    };
    std::vector<Scored> scored;

    for (auto& region : regions) {
        // Edge pixels of this region: edge-map pixels on or 8-adjacent to
        // the region. Falls back to the region's own boundary when the
        // edge map is too sparse there.
        std::vector<PointF> fit_pts;
        {
            Point origin;
            BinaryMask local = region_to_mask(region, 1, &origin);
            BinaryMask halo = dilate(local, {SEShape::Disk, 1});
            for (int y = 0; y < halo.height; ++y)
                for (int x = 0; x < halo.width; ++x) {
                    if (!halo.at(x, y)) continue;
                    int gx = x + origin.x, gy = y + origin.y;
                    if (gx < 0 || gx >= edges.width || gy < 0 || gy >= edges.height) continue;
                    if (edges.at(gx, gy))
                        fit_pts.push_back({static_cast<double>(gx), static_cast<double>(gy)});
                }
            if (fit_pts.size() < 5) {
                fit_pts.clear();
                for (const auto& p : region.pixels) {
                    bool boundary = false;
                    static constexpr int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                    for (const auto& d : d4) {
                        int nx = p.x + d[0], ny = p.y + d[1];
                        if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) {
                            boundary = true;
                            break;
                        }
                    }
                    if (boundary) fit_pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
                }
            }
        }

        double ratio = 0.0;
        try {
            Ellipse e = fit_ellipse(fit_pts);
            if (e.a >= 1.0 && e.b >= 1.0) {
                auto perim = rasterize_ellipse_perimeter(e);
                std::size_t on_skin = 0;
                for (const auto& p : perim)
                    if (mask.in_bounds(p.x, p.y) && mask.at(p.x, p.y)) ++on_skin;
                ratio = perim.empty() ? 0.0 : static_cast<double>(on_skin) / perim.size();
            }
        } catch (const Error&) {
            ratio = 0.0;  // unfittable region cannot be validated as a face
        }
        out.ratios.push_back(ratio);
        scored.push_back({std::move(region), ratio});
    }

    int face_idx = -1;
    double best_ratio = face_ratio_threshold;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (scored[i].ratio >= best_ratio) {
            best_ratio = scored[i].ratio;
            face_idx = static_cast<int>(i);
        }
    }
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (static_cast<int>(i) == face_idx) {
            out.face = std::move(scored[i].region);
        } else if (out.hands.size() < 2) {
            out.hands.push_back(std::move(scored[i].region));
        }
    }
    return out;
}

LocalizationOutcome locate_comparison_method(const std::vector<Region>& regions, int image_height) {
    (void)image_height;
    LocalizationOutcome out;
    out.method = LocateMethod::Comparison;
    if (regions.empty()) return out;

    std::vector<Region> top(regions.begin(),
                            regions.begin() + std::min<std::size_t>(3, regions.size()));
    std::sort(top.begin(), top.end(),
              [](const Region& a, const Region& b) { return a.area() > b.area(); });

    auto highest_idx = [&top]() {
        std::size_t best = 0;
        for (std::size_t i = 1; i < top.size(); ++i)
            if (top[i].barycenter().y < top[best].barycenter().y) best = i;
        return best;
    };

    if (top.size() == 1) {
        out.hands.push_back(top[0]);
        return out;
    }
    if (top.size() == 2) {
        double ratio = static_cast<double>(top[0].area()) / static_cast<double>(top[1].area());
        if (ratio < 1.5) {
            out.hands = {top[0], top[1]};
            return out;
        }
    }
    // Face = largest area AND highest barycenter; on disagreement the
    // higher barycenter wins (faces sit above hands).
    std::size_t face = highest_idx();
    out.face = top[face];
    for (std::size_t i = 0; i < top.size(); ++i)
        if (i != face && out.hands.size() < 2) out.hands.push_back(top[i]);
    return out;
}

HandOrientation hand_orientation(const BinaryMask& hand_mask, const OrientationParams& params) {
    auto pts = true_pixels(hand_mask);
    if (pts.size() < 5) throw GeometryError("hand_orientation: mask has fewer than 5 pixels");

    BBox bb{pts.front().x, pts.front().y, pts.front().x, pts.front().y};
    for (const auto& p : pts) {
        bb.min_x = std::min(bb.min_x, p.x);
        bb.max_x = std::max(bb.max_x, p.x);
        bb.min_y = std::min(bb.min_y, p.y);
        bb.max_y = std::max(bb.max_y, p.y);
    }
    int big = std::max(bb.width(), bb.height());
    int r_d = std::max(1, static_cast<int>(std::lround(params.dilate_factor * big)));
    int r_e = std::max(1, static_cast<int>(std::lround(params.erode_factor * big)));

    BinaryMask corrected = erode(dilate(hand_mask, {SEShape::Diamond, r_d}), {SEShape::Disk, r_e});
    auto cpts = true_pixels(corrected);

    HandOrientation out;
    if (cpts.size() >= 5) {
        try {
            out.ellipse = fit_ellipse(cpts);
            out.theta = out.ellipse.theta;
            out.corrected = true;
            return out;
        } catch (const Error&) {
            // fall through to the uncorrected fit
        }
    }
    out.ellipse = fit_ellipse(pts);
    out.theta = out.ellipse.theta;
    out.corrected = false;
    return out;
}

BinaryMask rotate_mask(const BinaryMask& mask, double delta) {
    PointF b = mask_barycenter(mask);
    auto pts = true_pixels(mask);
    BBox bb{pts.front().x, pts.front().y, pts.front().x, pts.front().y};
    for (const auto& p : pts) {
        bb.min_x = std::min(bb.min_x, p.x);
        bb.max_x = std::max(bb.max_x, p.x);
        bb.min_y = std::min(bb.min_y, p.y);
        bb.max_y = std::max(bb.max_y, p.y);
    }
    const double c = std::cos(delta), s = std::sin(delta);
    // Forward-map the pixel-square corners of the bounding box to size
    // the output canvas.
    double corners[4][2] = {{bb.min_x - 0.5, bb.min_y - 0.5},
                            {bb.max_x + 0.5, bb.min_y - 0.5},
                            {bb.min_x - 0.5, bb.max_y + 0.5},
                            {bb.max_x + 0.5, bb.max_y + 0.5}};
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (auto& p : corners) {
        double dx = p[0] - b.x, dy = p[1] - b.y;
        double fx = b.x + c * dx - s * dy;
        double fy = b.y + s * dx + c * dy;
        min_x = std::min(min_x, fx);
        max_x = std::max(max_x, fx);
        min_y = std::min(min_y, fy);
        max_y = std::max(max_y, fy);
    }
    int out_w = std::max(1, static_cast<int>(std::ceil(max_x - min_x)));
    int out_h = std::max(1, static_cast<int>(std::ceil(max_y - min_y)));

    BinaryMask out(out_w, out_h);
    // Inverse map with nearest-neighbor sampling.
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double gx = x + min_x, gy = y + min_y;
            double dx = gx - b.x, dy = gy - b.y;
            double sx = b.x + c * dx + s * dy;
            double sy = b.y - s * dx + c * dy;
            int ix = static_cast<int>(std::lround(sx));
            int iy = static_cast<int>(std::lround(sy));
            if (mask.in_bounds(ix, iy) && mask.at(ix, iy)) out.set(x, y, true);
        }
    }
    return out;
}

BinaryMask rotate_to_vertical(const BinaryMask& hand_mask, double theta, const RotateParams& params) {
    const double vertical = kPi / 2.0;
    double delta = vertical - theta;

    // Residuals are measured with the plain full-mask fit: the
    // morphology-corrected blob of a merged-finger hand can be almost
    // isotropic, which makes its fitted angle bimodal, while the full
    // upright hand is strongly elongated and fits stably.
    auto measure = [](const BinaryMask& m) { return fit_ellipse(true_pixels(m)).theta; };

    BinaryMask best;
    double best_dev = 1e300;
    double applied = delta;
    for (int pass = 0; pass < params.max_refinements; ++pass) {
        BinaryMask rotated = std::abs(deg(applied)) < params.min_rotation_deg
                                 ? hand_mask
                                 : rotate_mask(hand_mask, applied);
        double measured;
        try {
            measured = measure(rotated);
        } catch (const Error&) {
            return rotated;  // too small to re-fit; accept as-is
        }
        double dev = axis_diff_deg(deg(measured), 90.0);
        if (dev < best_dev) {
            best_dev = dev;
            best = std::move(rotated);
        }
        if (best_dev <= params.target_tolerance_deg) break;
        // Compose the residual correction and resample from the original.
        double residual = vertical - measured;
        if (residual > kPi / 2.0) residual -= kPi;
        if (residual < -kPi / 2.0) residual += kPi;
        applied += residual;
    }
    return best;
}

FingerHalf finger_half(const Ellipse& e, const BinaryMask& mask) {
    const double dx = std::cos(e.theta), dy = std::sin(e.theta);
    // theta in [0, pi) means (dx, dy) points into the y >= 0 half, i.e.
    // downward in image coordinates; negative projections are "up".
    constexpr double kOnLine = 1e-6;
    FingerHalf out;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            double t = (x - e.cx) * dx + (y - e.cy) * dy;
            if (t > kOnLine)
                ++out.down_count;
            else if (t < -kOnLine)
                ++out.up_count;
        }
    if (out.up_count == out.down_count) {
        out.side = FingerSide::Up;
        out.low_confidence = true;
    } else {
        out.side = out.up_count < out.down_count ? FingerSide::Up : FingerSide::Down;
    }
    return out;
}

BinaryMask flip_vertical(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) out.set(x, mask.height - 1 - y, true);
    return out;
}

}  // namespace handdigit
