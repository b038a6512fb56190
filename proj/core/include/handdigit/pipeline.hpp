#pragma once

#include <optional>
#include <string>
#include <vector>

#include "handdigit/edge.hpp"
#include "handdigit/features.hpp"
#include "handdigit/fingers.hpp"
#include "handdigit/handloc.hpp"
#include "handdigit/image.hpp"
#include "handdigit/learner.hpp"
#include "handdigit/skin.hpp"

namespace handdigit {

/// Every stage parameter in one place. The defaults run the full
/// pipeline with no configuration file.
struct PipelineConfig {
    int lowpass_radius = 1;
    SkinParams skin;

    double canny_sigma = 1.4;
    double canny_low_frac = 0.1;
    double canny_high_frac = 0.3;

    LocateMethod locate_method = LocateMethod::Ellipse;
    double face_ratio_threshold = 0.8;
    std::size_t min_region_area = 9;

    OrientationParams orientation;
    RotateParams rotate;

    int smooth_window = 5;
    double min_rel_amplitude = 0.1;
    double min_separation_frac = 0.08;

    LearnerKind learner = LearnerKind::ID3;
    int id3_bins = 8;
    double beta = 2.0;
    double train_fraction = 0.7;
    std::uint64_t seed = 1;

    std::string to_json() const;
    static PipelineConfig from_json(const std::string& text);
    static PipelineConfig load(const std::string& path);
};

/// Everything recognize() learned about one image. digit is present iff
/// no stage errored; a rejected result names the failing stage.
struct RecognitionResult {
    std::optional<int> digit;
    std::string rejected_stage;  // empty on success
    std::string message;

    // Diagnostics.
    std::size_t region_count = 0;
    LocateMethod method = LocateMethod::Ellipse;
    std::vector<double> face_ratios;
    bool face_found = false;
    bool second_hand_ignored = false;
    double theta_deg = 0;
    FingerSide finger_side = FingerSide::Up;
    bool flip_applied = false;
    bool low_confidence_side = false;
    double hand_length = 0;
    PalmWindow palm;
    std::vector<Peak> peaks;
    FeatureVector features;
    bool features_valid = false;

    std::string to_json() const;
};

/// Feature extraction through the full stage chain:
/// lowpass -> YCbCr -> skin mask -> (edges) -> localization ->
/// orientation + vertical adjustment + finger-side flip -> bounds ->
/// palm -> strip -> histogram -> peaks -> feature vector.
RecognitionResult extract_features(const ImageRGB& img, const PipelineConfig& cfg);

/// extract_features plus classification with the given tree.
RecognitionResult recognize(const ImageRGB& img, const PipelineConfig& cfg,
                            const DecisionTree& tree);

/// Stage entry points used by the CLI so intermediate artifacts can be
/// passed between subcommands.
BinaryMask stage_skin_mask(const ImageRGB& img, const PipelineConfig& cfg);
EdgeMap stage_edges(const ImageRGB& img, const PipelineConfig& cfg);
LocalizationOutcome stage_locate(const BinaryMask& mask, const EdgeMap* edges,
                                 const PipelineConfig& cfg);

struct AdjustedHand {
    BinaryMask mask;  // vertical, fingers up
    double theta_deg = 0;
    FingerSide side = FingerSide::Up;
    bool flipped = false;
    bool low_confidence = false;
};

/// Orientation, vertical adjustment, and finger-side flip for one hand
/// region mask.
AdjustedHand stage_adjust(const BinaryMask& hand_mask, const PipelineConfig& cfg);

struct FingerIsolation {
    BinaryMask fingers;
    double hand_length = 0;
    PalmWindow palm;
};

FingerIsolation stage_fingers(const BinaryMask& adjusted_mask, const PipelineConfig& cfg);

struct FeatureStage {
    std::vector<Peak> peaks;
    FeatureVector vector;
};

FeatureStage stage_featurize(const BinaryMask& finger_mask, double hand_length,
                             const PipelineConfig& cfg);

}  // namespace handdigit
