#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handdigit/geometry.hpp"
#include "handdigit/image.hpp"

namespace handdigit {

/// Pose of one rendered hand. scale is the hand length in pixels
/// (wrist bottom to the longest fingertip); rotation is the hand-axis
/// angle in degrees, like the ellipse orientation, with 90 meaning
/// fingers straight up. Chroma pairs are (Cb, Cr); the skin pair must
/// lie inside the crisp skin box, the background pair outside it.
struct HandPose {
    int digit = 1;
    double center_x = 0, center_y = 0;
    double scale = 100;
    double rotation_deg = 90;
    std::vector<double> finger_jitter_deg;  // per finger; missing entries are 0
    int skin_cb = 105, skin_cr = 160;
    int bg_cb = 128, bg_cr = 128;
    int canvas_width = 160, canvas_height = 160;
    int chroma_noise = 0;  // uniform +-noise on (Cb, Cr), per pixel
    std::uint64_t noise_seed = 0;
};

struct FingerSegment {
    PointF base;
    PointF tip;
    double radius = 0;
};

struct GroundTruth {
    int digit = 1;
    BinaryMask mask;
    PointF palm_center;
    double palm_radius = 0;  // mean palm semi-axis
    std::vector<FingerSegment> fingers;  // ordered left to right in canonical pose
    double orientation_deg = 90;         // rotation mod 180
};

/// Number of extended fingers each digit shows (3, 6, 7, 8, 9 share
/// three fingers but differ in spacing and length patterns).
int finger_count(int digit);

/// Hard-edged render: a pixel is skin iff its center falls inside the
/// palm ellipse, wrist stub, or a finger capsule; the ground-truth mask
/// is the same predicate, so the interior matches the crisp skin mask
/// exactly. Throws if the hand does not fit the canvas.
std::pair<ImageRGB, GroundTruth> render_hand(const HandPose& pose);

struct PoseRanges {
    double scale_min = 80, scale_max = 130;
    double rotation_min_deg = 10, rotation_max_deg = 170;
    double jitter_max_deg = 3;
    int skin_cb_min = 82, skin_cb_max = 122;
    int skin_cr_min = 142, skin_cr_max = 200;
    int canvas_width = 0, canvas_height = 0;  // 0 = derive from scale_max
    int chroma_noise = 0;
};

struct ManifestEntry {
    std::string path;
    int label = 1;
    HandPose pose;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::string to_json() const;
    static DatasetManifest from_json(const std::string& text);
};

/// Samples one pose per (digit, index) from the ranges; derived from a
/// per-image sub-seed, so the result does not depend on evaluation
/// order. Throws ParamError if the ranges cannot fit the canvas.
HandPose sample_pose(int digit, int index, std::uint64_t seed, const PoseRanges& ranges);

/// Renders count_per_digit images per digit into out_dir (PPM files
/// plus manifest.json); byte-identical for identical seeds.
DatasetManifest generate_dataset(int count_per_digit, std::uint64_t seed,
                                 const PoseRanges& ranges, const std::string& out_dir);

}  // namespace handdigit
