#include "handdigit/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "handdigit/error.hpp"

namespace handdigit {

PointF Region::barycenter() const {
    double sx = 0, sy = 0;
    for (const auto& p : pixels) {
        sx += p.x;
        sy += p.y;
    }
    double n = static_cast<double>(pixels.size());
    return {sx / n, sy / n};
}

std::vector<Region> connected_components(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<Region> regions;
    std::vector<std::uint8_t> visited(mask.bits.size(), 0);
    std::vector<Point> stack;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
            if (!mask.bits[i0] || visited[i0]) continue;
            Region r;
            r.bbox = {x0, y0, x0, y0};
            visited[i0] = 1;
            stack.push_back({x0, y0});
            while (!stack.empty()) {
                Point p = stack.back();
                stack.pop_back();
                r.pixels.push_back(p);
                r.bbox.min_x = std::min(r.bbox.min_x, p.x);
                r.bbox.max_x = std::max(r.bbox.max_x, p.x);
                r.bbox.min_y = std::min(r.bbox.min_y, p.y);
                r.bbox.max_y = std::max(r.bbox.max_y, p.y);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.bits[ni] && !visited[ni]) {
                            visited[ni] = 1;
                            stack.push_back({nx, ny});
                        }
                    }
            }
            std::sort(r.pixels.begin(), r.pixels.end(),
                      [](const Point& a, const Point& b) {
                          return a.y != b.y ? a.y < b.y : a.x < b.x;
                      });
            regions.push_back(std::move(r));
        }
    }
    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
        if (a.area() != b.area()) return a.area() > b.area();
        const Point& pa = a.pixels.front();
        const Point& pb = b.pixels.front();
        return pa.y != pb.y ? pa.y < pb.y : pa.x < pb.x;
    });
    return regions;
}

std::vector<Point> StructuringElement::offsets() const {
    if (radius < 1) throw ParamError("structuring element: radius must be >= 1");
    std::vector<Point> offs;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            bool in = shape == SEShape::Diamond ? (std::abs(dx) + std::abs(dy) <= radius)
                                                : (dx * dx + dy * dy <= radius * radius);
            if (in) offs.push_back({dx, dy});
        }
    return offs;
}

namespace {

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

// Two-pass chamfer: exact L1 distance to the nearest seed.
void l1_distance(std::vector<std::int64_t>& d, int w, int h) {
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::int64_t& v = d[static_cast<std::size_t>(y) * w + x];
            if (x > 0) v = std::min(v, d[static_cast<std::size_t>(y) * w + x - 1] + 1);
            if (y > 0) v = std::min(v, d[static_cast<std::size_t>(y - 1) * w + x] + 1);
        }
    for (int y = h - 1; y >= 0; --y)
        for (int x = w - 1; x >= 0; --x) {
            std::int64_t& v = d[static_cast<std::size_t>(y) * w + x];
            if (x + 1 < w) v = std::min(v, d[static_cast<std::size_t>(y) * w + x + 1] + 1);
            if (y + 1 < h) v = std::min(v, d[static_cast<std::size_t>(y + 1) * w + x] + 1);
        }
}

// Felzenszwalb-Huttenlocher 1D squared-distance transform.
void edt_1d(const std::vector<double>& f, std::vector<double>& out, int n,
            std::vector<int>& v, std::vector<double>& z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                (2.0 * q - 2.0 * p);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = q - v[k];
        out[q] = dq * dq + f[v[k]];
    }
}

// Exact squared Euclidean distance to the nearest seed (seed cells = 0).
std::vector<double> l2_sq_distance(std::vector<double> d, int w, int h) {
    int n = std::max(w, h);
    std::vector<double> f(n), out(n);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = d[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, out, h, v, z);
        for (int y = 0; y < h; ++y) d[static_cast<std::size_t>(y) * w + x] = out[y];
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = d[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, out, w, v, z);
        for (int x = 0; x < w; ++x) d[static_cast<std::size_t>(y) * w + x] = out[x];
    }
    return d;
}

// L1 distance from pixel (x, y) to the nearest outside-image cell.
inline std::int64_t border_distance(int x, int y, int w, int h) {
    return std::min(std::min(x + 1, y + 1), std::min(w - x, h - y));
}

}  // namespace

BinaryMask morph(const BinaryMask& mask, MorphOp op, const StructuringElement& se) {
    if (se.radius < 1) throw ParamError("morph: radius must be >= 1");
    const int w = mask.width, h = mask.height;
    BinaryMask out(w, h);
    if (w == 0 || h == 0) return out;
    const bool dilating = op == MorphOp::Dilate;
    const std::int64_t r = se.radius;

    // Seeds: true pixels for dilation, false pixels for erosion.
    if (se.shape == SEShape::Diamond) {
        std::vector<std::int64_t> d(mask.bits.size(), kFar);
        for (std::size_t i = 0; i < mask.bits.size(); ++i)
            if ((mask.bits[i] != 0) == dilating) d[i] = 0;
        l1_distance(d, w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (dilating) {
                    out.bits[i] = d[i] <= r;
                } else {
                    out.bits[i] = mask.bits[i] && d[i] > r && border_distance(x, y, w, h) > r;
                }
            }
    } else {
        // Large finite sentinel: infinity breaks the parabola
        // intersection arithmetic (inf - inf).
        std::vector<double> d(mask.bits.size(), 1e18);
        for (std::size_t i = 0; i < mask.bits.size(); ++i)
            if ((mask.bits[i] != 0) == dilating) d[i] = 0.0;
        auto dsq = l2_sq_distance(std::move(d), w, h);
        const double r2 = static_cast<double>(r) * r;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (dilating) {
                    out.bits[i] = dsq[i] <= r2;
                } else {
                    std::int64_t bd = border_distance(x, y, w, h);
                    out.bits[i] = mask.bits[i] && dsq[i] > r2 &&
                                  static_cast<double>(bd) * bd > r2;
                }
            }
    }
    return out;
}

namespace {

inline double cross(const PointF& o, const PointF& a, const PointF& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<PointF> convex_hull(std::vector<PointF> pts) {
    if (pts.empty()) throw GeometryError("convex_hull: empty input");
    std::sort(pts.begin(), pts.end(), [](const PointF& a, const PointF& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const PointF& a, const PointF& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<PointF> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 2) hull = {pts.front(), pts.back()};
    return hull;
}

RotatedRect min_perimeter_rect(const std::vector<PointF>& hull) {
    if (hull.size() < 2) throw GeometryError("min_perimeter_rect: hull must have >= 2 vertices");
    // Candidate angles: each hull edge folded into [0, pi/2).
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    std::vector<double> angles;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const PointF& a = hull[i];
        const PointF& b = hull[(i + 1) % hull.size()];
        double dx = b.x - a.x, dy = b.y - a.y;
        if (dx == 0 && dy == 0) continue;
        double ang = std::fmod(std::atan2(dy, dx), kHalfPi);
        if (ang < 0) ang += kHalfPi;
        if (ang >= kHalfPi) ang = 0.0;
        angles.push_back(ang);
    }
    if (angles.empty()) throw GeometryError("min_perimeter_rect: degenerate hull");
    std::sort(angles.begin(), angles.end());

    double best_perim = std::numeric_limits<double>::infinity();
    RotatedRect best;
    bool found = false;
    for (double ang : angles) {
        double c = std::cos(ang), s = std::sin(ang);
        double min_u = std::numeric_limits<double>::infinity(), max_u = -min_u;
        double min_v = min_u, max_v = -min_u;
        for (const PointF& p : hull) {
            double u = c * p.x + s * p.y;
            double v = -s * p.x + c * p.y;
            min_u = std::min(min_u, u);
            max_u = std::max(max_u, u);
            min_v = std::min(min_v, v);
            max_v = std::max(max_v, v);
        }
        double wu = max_u - min_u, wv = max_v - min_v;
        double perim = 2.0 * (wu + wv);
        // Strictly-better keeps the smallest angle on ties (angles sorted).
        if (perim < best_perim * (1.0 - 1e-12)) {
            best_perim = perim;
            double cu = 0.5 * (min_u + max_u), cv = 0.5 * (min_v + max_v);
            best.center = {c * cu - s * cv, s * cu + c * cv};
            best.half_w = wu / 2.0;
            best.half_h = wv / 2.0;
            best.angle = ang;
            found = true;
        }
    }
    double span = std::max(best.half_w, best.half_h);
    if (!found || std::min(best.half_w, best.half_h) <= 1e-9 * std::max(1.0, span))
        throw GeometryError("min_perimeter_rect: degenerate (zero-area) hull");
    return best;
}

Ellipse fit_ellipse(const std::vector<PointF>& points) {
    if (points.size() < 5) throw GeometryError("fit_ellipse: needs >= 5 points");

    // Center and scale for conditioning; the conic is recovered in the
    // normalized frame and the parameters are mapped back.
    double mx = 0, my = 0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= points.size();
    my /= points.size();
    double ms = 0;
    for (const auto& p : points) ms += std::abs(p.x - mx) + std::abs(p.y - my);
    double scale = ms / (2.0 * points.size());
    if (scale <= 0) throw GeometryError("fit_ellipse: degenerate point scatter");

    Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
    for (const auto& p : points) {
        double x = (p.x - mx) / scale, y = (p.y - my) / scale;
        Eigen::Vector3d d1(x * x, x * y, y * y);
        Eigen::Vector3d d2(x, y, 1.0);
        s1 += d1 * d1.transpose();
        s2 += d1 * d2.transpose();
        s3 += d2 * d2.transpose();
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
    if (!lu.isInvertible()) throw GeometryError("fit_ellipse: rank-deficient scatter");
    Eigen::Matrix3d t = -lu.solve(s2.transpose());
    Eigen::Matrix3d m = s1 + s2 * t;
    Eigen::Matrix3d mr;
    mr.row(0) = m.row(2) / 2.0;
    mr.row(1) = -m.row(1);
    mr.row(2) = m.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> solver(mr);
    if (solver.info() != Eigen::Success) throw GeometryError("fit_ellipse: eigensolver failed");

    Eigen::Vector3d conic_q = Eigen::Vector3d::Zero();
    bool ok = false;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(solver.eigenvalues()[i].imag()) > 1e-9) continue;
        Eigen::Vector3d v = solver.eigenvectors().col(i).real();
        double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        if (cond > 0) {
            conic_q = v;
            ok = true;
            break;
        }
    }
    if (!ok) throw GeometryError("fit_ellipse: no elliptical solution (degenerate input)");

    Eigen::Vector3d conic_l = t * conic_q;
    double A = conic_q(0), B = conic_q(1), C = conic_q(2);
    double D = conic_l(0), E = conic_l(1), F = conic_l(2);
    if (A + C < 0) {  // normalize to a positive-definite quadratic form
        A = -A; B = -B; C = -C; D = -D; E = -E; F = -F;
    }

    double disc = B * B - 4.0 * A * C;  // < 0 for an ellipse
    double ccx = (2.0 * C * D - B * E) / disc;
    double ccy = (2.0 * A * E - B * D) / disc;
    double f0 = A * ccx * ccx + B * ccx * ccy + C * ccy * ccy + D * ccx + E * ccy + F;

    // Principal axes of the quadratic form.
    double tr = A + C;
    double dlt = std::sqrt((A - C) * (A - C) + B * B);
    double l_small = (tr - dlt) / 2.0;
    double l_big = (tr + dlt) / 2.0;
    if (l_small * f0 >= 0 || l_big * f0 >= 0)
        throw GeometryError("fit_ellipse: conic is not a real ellipse");
    double a_n = std::sqrt(-f0 / l_small);
    double b_n = std::sqrt(-f0 / l_big);

    double theta;
    if ((a_n - b_n) <= 1e-7 * a_n) {
        theta = 0.0;  // circle: orientation is arbitrary, report 0
    } else if (std::abs(B) < 1e-300) {
        theta = A <= C ? 0.0 : std::numbers::pi / 2.0;
    } else {
        theta = std::atan2(l_small - A, B / 2.0);
        theta = std::fmod(theta, std::numbers::pi);
        if (theta < 0) theta += std::numbers::pi;
    }

    Ellipse e;
    e.cx = ccx * scale + mx;
    e.cy = ccy * scale + my;
    e.a = a_n * scale;
    e.b = b_n * scale;
    e.theta = theta;
    return e;
}

Ellipse fit_ellipse(const std::vector<Point>& points) {
    std::vector<PointF> pf;
    pf.reserve(points.size());
    for (const auto& p : points) pf.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    return fit_ellipse(pf);
}

std::vector<Point> rasterize_ellipse_perimeter(const Ellipse& e) {
    if (e.a < 1.0 || e.b < 1.0) throw ParamError("rasterize_ellipse_perimeter: axes must be >= 1");
    const double two_pi = 2.0 * std::numbers::pi;
    const long n = std::max<long>(16, 4 * static_cast<long>(std::ceil(two_pi * e.a)));
    const double ct = std::cos(e.theta), st = std::sin(e.theta);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        double t = two_pi * static_cast<double>(k) / static_cast<double>(n);
        double u = e.a * std::cos(t), v = e.b * std::sin(t);
        double x = e.cx + u * ct - v * st;
        double y = e.cy + u * st + v * ct;
        pts.push_back({static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace handdigit
