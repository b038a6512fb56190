#pragma once

#include <array>
#include <string>
#include <vector>

#include "handdigit/image.hpp"

namespace handdigit {

/// Column projection of the finger mask, normalized by hand length.
struct Histogram {
    std::vector<double> bins;
    double hand_length = 0;
};

struct Peak {
    int x = 0;      // bin index
    double y = 0;   // normalized amplitude, > 0
};

/// The 17-slot vector (n, dist_x1..4, dist_y1..4, r_x1..4, r_y1..4).
/// Slots at index >= n are zero; r_x4 and r_y4 are structurally zero
/// (only three successive-distance ratios exist).
struct FeatureVector {
    int n = 0;
    std::array<double, 4> dist_x{};
    std::array<double, 4> dist_y{};
    std::array<double, 4> r_x{};
    std::array<double, 4> r_y{};

    std::array<double, 17> to_array() const;
    static FeatureVector from_array(const std::array<double, 17>& a);
    bool operator==(const FeatureVector&) const = default;
};

/// bins[x] = (true pixels in column x) / hand_length. hand_length > 0.
Histogram project_histogram(const BinaryMask& finger_mask, double hand_length);

/// Centered moving average with edge-clamped indices; window must be
/// odd, window 1 is the identity.
Histogram smooth(const Histogram& h, int window);

/// Strict local maxima (virtual zero bins beyond both ends; plateaus
/// take their leftmost index), filtered by y >= min_rel_amplitude *
/// max(h), then greedy highest-amplitude selection suppressing any
/// candidate closer than min_separation bins to a kept peak, capped at
/// five. Result sorted by x ascending. 0 < min_rel_amplitude < 1.
std::vector<Peak> detect_peaks(const Histogram& h, double min_rel_amplitude, int min_separation);

/// Assembles the vector from <= 5 peaks sorted by x ascending.
/// dist_i = |p_i - p_{i+1}|; r_i = dist_i / dist_{i+1} when both are
/// nonzero, else 0.
FeatureVector feature_vector(const std::vector<Peak>& peaks);

/// One CSV row: <label,>n,dist_x1..4,dist_y1..4,r_x1..4,r_y1..4.
/// Doubles are written in shortest round-trip form.
std::string to_csv_row(const FeatureVector& v, int label = -1);

}  // namespace handdigit
