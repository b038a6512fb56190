#pragma once

#include <vector>

#include "handdigit/image.hpp"

namespace handdigit {

/// Sobel magnitude plus gradient direction quantized to one of four
/// bins: 0 = 0deg, 1 = 45deg, 2 = 90deg, 3 = 135deg (ties broken toward
/// the lower angle; zero magnitude reports 0deg).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;
    std::vector<std::uint8_t> direction;

    double mag(int x, int y) const { return magnitude[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t dir(int x, int y) const {
        return direction[static_cast<std::size_t>(y) * width + x];
    }
};

/// BT.601 luma plane (same weights as rgb_to_ycbcr).
GrayImage to_gray(const ImageRGB& img);

/// Gaussian blur, std sigma, kernel radius ceil(3*sigma), edge-clamped.
/// Taps are accumulated symmetrically so a 90-degree rotation of the
/// input rotates the output exactly.
std::vector<double> gaussian_blur(const GrayImage& img, double sigma);

GradientField sobel_gradient(const std::vector<double>& plane, int width, int height);

/// Canny: blur, Sobel, direction-quantized non-maximum suppression,
/// then two-threshold hysteresis (weak pixels in [t_low, t_high) are
/// kept iff 8-connected, transitively, to a pixel >= t_high).
/// Requires 0 < t_low < t_high.
EdgeMap canny(const GrayImage& img, double sigma, double t_low, double t_high);

/// Same, with thresholds given as fractions of the maximum gradient
/// magnitude observed in this image. Requires 0 < low_frac < high_frac.
EdgeMap canny_fractional(const GrayImage& img, double sigma, double low_frac, double high_frac);

}  // namespace handdigit
