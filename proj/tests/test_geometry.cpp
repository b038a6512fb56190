#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "handdigit/error.hpp"
#include "handdigit/geometry.hpp"
#include "handdigit/rng.hpp"
#include "oracles.hpp"

using namespace handdigit;

namespace {

BinaryMask random_mask(SplitMix64& rng, int w, int h, double density = 0.45) {
    BinaryMask m(w, h);
    for (auto& b : m.bits) b = rng.uniform() < density;
    return m;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("connected_components: empty, blocks, diagonal chain") {
    CHECK(connected_components(BinaryMask(8, 8)).empty());

    BinaryMask m(12, 8);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) m.set(x, y, true);
    for (int y = 5; y <= 6; ++y)
        for (int x = 8; x <= 9; ++x) m.set(x, y, true);
    auto regions = connected_components(m);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].area() == 9);
    CHECK(regions[1].area() == 4);
    CHECK(regions[0].barycenter().x == doctest::Approx(2.0));
    CHECK(regions[0].barycenter().y == doctest::Approx(2.0));
    CHECK(regions[1].barycenter().x == doctest::Approx(8.5));
    CHECK(regions[1].barycenter().y == doctest::Approx(5.5));

    BinaryMask diag(4, 4);
    diag.set(0, 0, true);
    diag.set(1, 1, true);
    diag.set(2, 2, true);
    CHECK(connected_components(diag).size() == 1);  // 8-connectivity
}

TEST_CASE("connected_components partition the true set") {
    SplitMix64 rng(3);
    for (int iter = 0; iter < 10; ++iter) {
        BinaryMask m = random_mask(rng, 24, 24, 0.4);
        auto regions = connected_components(m);
        std::size_t total = 0;
        for (const auto& r : regions) total += r.area();
        CHECK(total == m.count_true());
    }
}

TEST_CASE("morph basics: dilate point to plus, empty stays empty") {
    BinaryMask empty(6, 6);
    CHECK(erode(dilate(empty, {SEShape::Diamond, 1}), {SEShape::Diamond, 1}).count_true() == 0);

    BinaryMask m(5, 5);
    m.set(2, 2, true);
    BinaryMask d = dilate(m, {SEShape::Diamond, 1});
    CHECK(d.count_true() == 5);
    CHECK(d.at(2, 2));
    CHECK(d.at(1, 2));
    CHECK(d.at(3, 2));
    CHECK(d.at(2, 1));
    CHECK(d.at(2, 3));
}

TEST_CASE("erode 10x10 solid square with disk r=2 matches the brute-force oracle") {
    BinaryMask m(10, 10);
    for (auto& b : m.bits) b = 1;
    StructuringElement se{SEShape::Disk, 2};
    BinaryMask expect = oracle::brute_erode(m, se.offsets());
    BinaryMask got = erode(m, se);
    CHECK(got == expect);
    // Frozen from the oracle: the disk's +-2 axis reach shrinks every
    // side by 2, leaving the 6x6 interior.
    CHECK(expect.count_true() == 36);
}

TEST_CASE("morph equals the offset-definition oracle on random masks") {
    SplitMix64 rng(11);
    for (int iter = 0; iter < 30; ++iter) {
        BinaryMask m = random_mask(rng, 20, 17);
        StructuringElement se{iter % 2 ? SEShape::Disk : SEShape::Diamond,
                              1 + static_cast<int>(rng.bounded(4))};
        auto offs = se.offsets();
        CHECK(dilate(m, se) == oracle::brute_dilate(m, offs));
        CHECK(erode(m, se) == oracle::brute_erode(m, offs));
    }
}

TEST_CASE("dilation/erosion duality holds on the interior") {
    SplitMix64 rng(13);
    for (int iter = 0; iter < 20; ++iter) {
        BinaryMask m = random_mask(rng, 32, 32);
        StructuringElement se{iter % 2 ? SEShape::Disk : SEShape::Diamond,
                              1 + static_cast<int>(rng.bounded(3))};
        BinaryMask er = erode(m, se);
        BinaryMask comp(m.width, m.height);
        for (std::size_t i = 0; i < m.bits.size(); ++i) comp.bits[i] = !m.bits[i];
        BinaryMask dil_comp = dilate(comp, se);
        for (int y = se.radius; y < m.height - se.radius; ++y)
            for (int x = se.radius; x < m.width - se.radius; ++x) {
                bool lhs = er.at(x, y);
                bool rhs = !dil_comp.at(x, y);
                if (lhs != rhs) FAIL("duality breaks at ", x, ",", y);
            }
    }
}

TEST_CASE("dilation is extensive, erosion anti-extensive, unit application not idempotent") {
    SplitMix64 rng(17);
    BinaryMask m = random_mask(rng, 24, 24, 0.3);
    StructuringElement se{SEShape::Diamond, 1};
    BinaryMask d = dilate(m, se);
    BinaryMask e = erode(m, se);
    for (std::size_t i = 0; i < m.bits.size(); ++i) {
        if (m.bits[i]) CHECK(d.bits[i]);
        if (e.bits[i]) CHECK(m.bits[i]);
    }
    CHECK(dilate(d, se) != d);  // repeated unit dilation keeps growing
}

TEST_CASE("convex_hull: triangle, square with center, collinear degenerate") {
    auto tri = convex_hull({{0, 0}, {4, 0}, {0, 3}});
    CHECK(tri.size() == 3);

    auto sq = convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}});
    CHECK(sq.size() == 4);
    for (const auto& v : sq) CHECK((v.x == 0 || v.x == 2));

    auto seg = convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK(seg.size() == 2);

    auto single = convex_hull({{5, 5}});
    CHECK(single.size() == 1);

    CHECK_THROWS_AS(convex_hull({}), GeometryError);
}

TEST_CASE("convex_hull is counterclockwise and contains all points") {
    SplitMix64 rng(23);
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<PointF> pts;
        for (int i = 0; i < 40; ++i) pts.push_back({rng.uniform(0, 50), rng.uniform(0, 50)});
        auto hull = convex_hull(pts);
        REQUIRE(hull.size() >= 3);
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const PointF& a = hull[i];
            const PointF& b = hull[(i + 1) % hull.size()];
            const PointF& c = hull[(i + 2) % hull.size()];
            double cr = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
            CHECK(cr > 0);  // strict CCW turns, no collinear vertices
        }
        for (const auto& p : pts)
            for (std::size_t i = 0; i < hull.size(); ++i) {
                const PointF& a = hull[i];
                const PointF& b = hull[(i + 1) % hull.size()];
                double cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
                CHECK(cr >= -1e-9);
            }
    }
}

TEST_CASE("min_perimeter_rect: axis-aligned identity and tie rule") {
    std::vector<PointF> pts = {{0, 0}, {10, 0}, {10, 4}, {0, 4}, {5, 2}, {3, 4}};
    RotatedRect r = min_perimeter_rect(convex_hull(pts));
    CHECK(r.angle == doctest::Approx(0.0));
    CHECK(2 * r.half_w == doctest::Approx(10.0));
    CHECK(2 * r.half_h == doctest::Approx(4.0));

    std::vector<PointF> unit = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(min_perimeter_rect(convex_hull(unit)).perimeter() == doctest::Approx(4.0));
}

TEST_CASE("min_perimeter_rect recovers a 30-degree rotation") {
    const double ang = 30.0 * std::numbers::pi / 180.0;
    const double c = std::cos(ang), s = std::sin(ang);
    std::vector<PointF> pts;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 4; ++j)
            pts.push_back({c * i - s * j + 20, s * i + c * j + 5});
    RotatedRect r = min_perimeter_rect(convex_hull(pts));
    CHECK(r.angle * 180.0 / std::numbers::pi == doctest::Approx(30.0).epsilon(0.02));
    CHECK(std::max(r.half_w, r.half_h) * 2 == doctest::Approx(10.0).epsilon(0.01));
    CHECK(std::min(r.half_w, r.half_h) * 2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("min_perimeter_rect matches the exhaustive sweep on random hulls") {
    SplitMix64 rng(31);
    for (int iter = 0; iter < 12; ++iter) {
        std::vector<PointF> pts;
        for (int i = 0; i < 30; ++i) pts.push_back({rng.uniform(0, 80), rng.uniform(0, 80)});
        auto hull = convex_hull(pts);
        RotatedRect r = min_perimeter_rect(hull);
        auto swept = oracle::sweep_min_perimeter(pts, 0.1);
        CHECK(r.perimeter() <= swept.perimeter + 1e-9);  // calipers is at least as good
        CHECK(r.perimeter() >= swept.perimeter * (1 - 0.005));
    }
}

TEST_CASE("min_perimeter_rect is never worse than the axis-aligned box") {
    SplitMix64 rng(37);
    std::vector<PointF> pts;
    for (int i = 0; i < 25; ++i) pts.push_back({rng.uniform(0, 60), rng.uniform(0, 40)});
    auto hull = convex_hull(pts);
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (const auto& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    double aabb = 2 * ((max_x - min_x) + (max_y - min_y));
    CHECK(min_perimeter_rect(hull).perimeter() <= aabb + 1e-9);
}

TEST_CASE("min_perimeter_rect rejects degenerate hulls") {
    CHECK_THROWS_AS(min_perimeter_rect({{0, 0}, {5, 5}}), GeometryError);
}

TEST_CASE("fit_ellipse recovers exact samples") {
    const double theta = 25.0 * std::numbers::pi / 180.0;
    auto pts = oracle::ellipse_samples(50, 40, 30, 10, theta, 100);
    Ellipse e = fit_ellipse(pts);
    CHECK(std::abs(e.cx - 50) < 0.5);
    CHECK(std::abs(e.cy - 40) < 0.5);
    CHECK(std::abs(e.a - 30) / 30 < 0.01);
    CHECK(std::abs(e.b - 10) / 10 < 0.01);
    CHECK(oracle::axis_angle_diff_deg(e.theta * 180 / std::numbers::pi, 25) < 1.0);
}

TEST_CASE("fit_ellipse on a circle reports theta 0 and equal axes") {
    auto pts = oracle::ellipse_samples(10, 20, 7, 7, 0.3, 64);
    Ellipse e = fit_ellipse(pts);
    CHECK(e.a == doctest::Approx(e.b).epsilon(1e-6));
    CHECK(e.theta == 0.0);
}

TEST_CASE("fit_ellipse rejects degenerate input") {
    CHECK_THROWS_AS(fit_ellipse(std::vector<PointF>{{0, 0}, {1, 0}, {2, 1}, {3, 2}}),
                    GeometryError);
    std::vector<PointF> line;
    for (int i = 0; i < 20; ++i) line.push_back({static_cast<double>(i), 2.0 * i + 1});
    CHECK_THROWS_AS(fit_ellipse(line), GeometryError);
}

TEST_CASE("fit_ellipse is invariant under permutation and translation") {
    SplitMix64 rng(43);
    auto pts = oracle::ellipse_samples(30, 25, 22, 9, 1.0, 60);
    Ellipse base = fit_ellipse(pts);

    auto shuffled = pts;
    deterministic_shuffle(shuffled, rng);
    Ellipse perm = fit_ellipse(shuffled);
    CHECK(perm.cx == doctest::Approx(base.cx).epsilon(1e-9));
    CHECK(perm.a == doctest::Approx(base.a).epsilon(1e-9));
    CHECK(perm.theta == doctest::Approx(base.theta).epsilon(1e-9));

    for (int iter = 0; iter < 5; ++iter) {
        double dx = static_cast<double>(rng.uniform_int(-300, 300));
        double dy = static_cast<double>(rng.uniform_int(-300, 300));
        auto moved = pts;
        for (auto& p : moved) {
            p.x += dx;
            p.y += dy;
        }
        Ellipse m = fit_ellipse(moved);
        CHECK(std::abs(m.cx - base.cx - dx) < 1e-6);
        CHECK(std::abs(m.cy - base.cy - dy) < 1e-6);
        CHECK(std::abs(m.a - base.a) < 1e-6);
        CHECK(std::abs(m.b - base.b) < 1e-6);
        CHECK(std::abs(m.theta - base.theta) < 1e-6);
    }
}

TEST_CASE("rasterize_ellipse_perimeter: unit circle ring") {
    Ellipse e{0, 0, 1, 1, 0};
    auto pts = rasterize_ellipse_perimeter(e);
    std::set<std::pair<int, int>> got;
    for (const auto& p : pts) got.insert({p.x, p.y});
    std::set<std::pair<int, int>> expect = {{1, 0},  {0, 1},  {-1, 0}, {0, -1},
                                            {1, 1},  {-1, 1}, {-1, -1}, {1, -1}};
    CHECK(got == expect);
}

TEST_CASE("rasterize_ellipse_perimeter: r=10 circle stays in the distance band") {
    Ellipse e{40, 40, 10, 10, 0};
    auto pts = rasterize_ellipse_perimeter(e);
    CHECK(pts.size() >= 20);
    for (const auto& p : pts) {
        double d = std::hypot(p.x - 40.0, p.y - 40.0);
        CHECK(std::abs(d - 10.0) <= 1.0);
    }
    // Closed 8-connected ring: every pixel has at least two neighbors.
    std::set<std::pair<int, int>> s;
    for (const auto& p : pts) s.insert({p.x, p.y});
    for (const auto& p : pts) {
        int neighbors = 0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (s.count({p.x + dx, p.y + dy})) ++neighbors;
            }
        CHECK(neighbors >= 2);
    }
}

TEST_CASE("rasterize_ellipse_perimeter: degenerate a=b=1 stays within 8 pixels") {
    Ellipse e{3, 3, 1, 1, 0};
    auto pts = rasterize_ellipse_perimeter(e);
    CHECK(!pts.empty());
    CHECK(pts.size() <= 8);
}

}  // TEST_SUITE
