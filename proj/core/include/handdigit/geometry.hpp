#pragma once

#include <vector>

#include "handdigit/image.hpp"

namespace handdigit {

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

struct PointF {
    double x = 0;
    double y = 0;
};

struct BBox {
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive
    int width() const { return max_x - min_x + 1; }
    int height() const { return max_y - min_y + 1; }
};

/// 8-connected pixel component. pixels are sorted row-major, so
/// pixels.front() is the topmost-leftmost pixel.
struct Region {
    std::vector<Point> pixels;
    BBox bbox;
    std::size_t area() const { return pixels.size(); }
    PointF barycenter() const;
};

/// Components of the true set, sorted by area descending; ties break on
/// the smaller (y, x) of the topmost-leftmost pixel.
std::vector<Region> connected_components(const BinaryMask& mask);

/// Ellipse with semi-axes a >= b > 0 and major-axis angle theta in
/// [0, pi) measured from the +x axis.
struct Ellipse {
    double cx = 0, cy = 0;
    double a = 0, b = 0;
    double theta = 0;
};

/// Rectangle centered at center with half extents (half_w along the
/// angle direction, half_h across it).
struct RotatedRect {
    PointF center;
    double half_w = 0, half_h = 0;
    double angle = 0;  // radians in [0, pi/2)
    double perimeter() const { return 4.0 * (half_w + half_h); }
};

enum class SEShape { Diamond, Disk };
enum class MorphOp { Dilate, Erode };

/// Diamond: |dx|+|dy| <= radius. Disk: dx^2+dy^2 <= radius^2.
struct StructuringElement {
    SEShape shape = SEShape::Diamond;
    int radius = 1;
    std::vector<Point> offsets() const;
};

/// Dilation is the union of SE translates over true pixels (clipped to
/// the canvas); erosion keeps pixels whose whole SE translate is true,
/// with outside-image counting as false. Backed by exact L1/L2 distance
/// transforms, so large elements stay O(pixels).
BinaryMask morph(const BinaryMask& mask, MorphOp op, const StructuringElement& se);

inline BinaryMask dilate(const BinaryMask& m, const StructuringElement& se) {
    return morph(m, MorphOp::Dilate, se);
}
inline BinaryMask erode(const BinaryMask& m, const StructuringElement& se) {
    return morph(m, MorphOp::Erode, se);
}

/// Minimal convex polygon containing all points, counterclockwise in
/// the x-right/y-up sense; collinear boundary points are dropped. A
/// single input point yields a 1-vertex hull, collinear input a
/// 2-vertex segment. Throws GeometryError on empty input.
std::vector<PointF> convex_hull(std::vector<PointF> points);

/// Rotating-calipers search over hull-edge-aligned rectangles; returns
/// the minimum-perimeter one, angles folded to [0, pi/2) and ties
/// broken toward the smaller angle. Throws GeometryError if the hull is
/// degenerate (fewer than 3 vertices or zero area).
RotatedRect min_perimeter_rect(const std::vector<PointF>& hull);

/// Direct least-squares conic fit constrained to an ellipse
/// (Fitzgibbon/Halir-Flusser reduced 3x3 eigenproblem, no iteration).
/// Input is centered and scaled internally for conditioning. Requires
/// >= 5 points spanning a non-degenerate conic; near-circular results
/// report theta = 0.
Ellipse fit_ellipse(const std::vector<PointF>& points);
Ellipse fit_ellipse(const std::vector<Point>& points);

/// Deduplicated integer perimeter pixels from dense parametric
/// sampling (at least 4 * ceil(2*pi*a) angles); result sorted
/// row-major and 8-connected for a >= b >= 1.
std::vector<Point> rasterize_ellipse_perimeter(const Ellipse& e);

}  // namespace handdigit
