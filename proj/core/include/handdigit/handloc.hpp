#pragma once

#include <optional>
#include <vector>

#include "handdigit/geometry.hpp"
#include "handdigit/image.hpp"

namespace handdigit {

enum class LocateMethod { Ellipse, Comparison };

/// Result of deciding which skin regions are hands. hands holds at most
/// two regions; face at most one, disjoint from hands.
struct LocalizationOutcome {
    std::vector<Region> hands;
    std::optional<Region> face;
    LocateMethod method = LocateMethod::Comparison;
    /// Perimeter skin ratios per examined region (ellipse method only),
    /// in examination order.
    std::vector<double> ratios;
};

/// Ellipse method: for each of the (up to) three largest regions, fit
/// an ellipse to the region's edge pixels and measure the fraction of
/// the rasterized ellipse perimeter that lies on skin. The fraction is
/// high for a compact blob (face) and low for a hand, whose perimeter
/// crosses the gaps between fingers. The single highest-ratio region at
/// or above the threshold is the face; everything else is a hand (two
/// largest kept). face_ratio_threshold must lie in (0, 1).
LocalizationOutcome locate_ellipse_method(const BinaryMask& mask, const EdgeMap& edges,
                                          double face_ratio_threshold);

/// Comparison method over the (up to) three largest regions:
///  - 3 regions: the face is the one that is both largest and has the
///    highest barycenter (smallest row); if the two criteria disagree,
///    the higher barycenter wins.
///  - 2 regions: areas within ratio < 1.5 mean two hands; otherwise the
///    face is picked by the same criteria.
///  - 1 region: assumed to be a hand.
LocalizationOutcome locate_comparison_method(const std::vector<Region>& regions, int image_height);

struct OrientationParams {
    double dilate_factor = 0.04;  // diamond radius = max(1, round(f * H))
    double erode_factor = 0.10;   // disk radius = max(1, round(f * H))
};

struct HandOrientation {
    double theta = 0;  // radians in [0, pi)
    Ellipse ellipse;
    bool corrected = true;  // false if the morphology-corrected fit fell back
};

/// Orientation of a hand mask: diamond dilation (bridges inter-finger
/// gaps) then disk erosion (strips the thumb), then a least-squares
/// ellipse fit of the remaining pixel coordinates. Falls back to the
/// uncorrected mask if the corrected one has too few pixels.
HandOrientation hand_orientation(const BinaryMask& hand_mask, const OrientationParams& params = {});

struct RotateParams {
    OrientationParams orientation;
    /// Corrections smaller than this are skipped: resampling for a
    /// sub-resolution angle only degrades the raster.
    double min_rotation_deg = 0.5;
    double target_tolerance_deg = 0.5;
    int max_refinements = 3;
};

/// Rotates the mask by (90deg - theta) about its barycenter with
/// nearest-neighbor sampling into a canvas that contains the rotated
/// bounding box, refining until the re-fitted major axis is vertical.
BinaryMask rotate_to_vertical(const BinaryMask& hand_mask, double theta,
                              const RotateParams& params = {});

/// Plain rotation primitive used by rotate_to_vertical (delta radians,
/// about the true-pixel barycenter).
BinaryMask rotate_mask(const BinaryMask& mask, double delta);

enum class FingerSide { Up, Down };

struct FingerHalf {
    FingerSide side = FingerSide::Up;
    bool low_confidence = false;
    std::size_t up_count = 0;
    std::size_t down_count = 0;
};

/// Splits the mask along the ellipse minor axis (the line through the
/// center perpendicular to the major axis); the half with fewer skin
/// pixels is the finger side. Exact ties choose Up and set
/// low_confidence.
FingerHalf finger_half(const Ellipse& e, const BinaryMask& mask);

BinaryMask flip_vertical(const BinaryMask& mask);

/// Copies a region into a snug mask with the given padding; origin
/// receives the canvas offset of the region's bounding box.
BinaryMask region_to_mask(const Region& region, int pad, Point* origin = nullptr);

}  // namespace handdigit
