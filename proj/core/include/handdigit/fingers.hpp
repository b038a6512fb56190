#pragma once

#include <utility>

#include "handdigit/geometry.hpp"
#include "handdigit/image.hpp"

namespace handdigit {

/// Minimum-perimeter bounding rectangle of the hand pixels, with the
/// larger dimension taken as the hand length.
struct HandBounds {
    RotatedRect rect;
    double hand_length = 0;
    double hand_width = 0;
};

/// Axis-aligned palm search window. height ~ 0.496 * hand length,
/// width ~ 0.44 * hand length (rounded).
struct PalmWindow {
    int x = 0, y = 0;       // top-left pixel
    int width = 0, height = 0;
    std::size_t skin_count = 0;
};

/// Convex hull of the pixel squares (corners at +-0.5 around each
/// boundary pixel) -> min-perimeter rectangle. Throws GeometryError on
/// an empty or degenerate (e.g. single-pixel) mask.
HandBounds hand_bounds(const BinaryMask& mask);

/// Anthropometric palm dimensions: length = 0.496 * hand_length,
/// width = 0.44 * hand_length. hand_length must be > 0.
std::pair<double, double> palm_dims(double hand_length);

/// Deterministic replacement for a random window search: stride-1
/// integral-image sweep returning the placement with the maximum skin
/// count; ties take the smallest (y, then x). dims = (length, width) as
/// produced by palm_dims; the rounded window must fit the canvas.
PalmWindow locate_palm(const BinaryMask& mask, std::pair<double, double> dims);

/// Clears every pixel inside or on the circle circumscribing the palm
/// window and every pixel strictly below the window's bottom row; what
/// remains are the finger candidates (possibly nothing, for a fist).
BinaryMask strip_to_fingers(const BinaryMask& mask, const PalmWindow& palm);

}  // namespace handdigit
