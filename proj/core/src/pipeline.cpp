#include "handdigit/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "handdigit/error.hpp"

namespace handdigit {

using json = nlohmann::json;

BinaryMask stage_skin_mask(const ImageRGB& img, const PipelineConfig& cfg) {
    ImageRGB filtered = lowpass(img, cfg.lowpass_radius);
    return skin_mask(rgb_to_ycbcr(filtered), cfg.skin);
}

EdgeMap stage_edges(const ImageRGB& img, const PipelineConfig& cfg) {
    ImageRGB filtered = lowpass(img, cfg.lowpass_radius);
    return canny_fractional(to_gray(filtered), cfg.canny_sigma, cfg.canny_low_frac,
                            cfg.canny_high_frac);
}

LocalizationOutcome stage_locate(const BinaryMask& mask, const EdgeMap* edges,
                                 const PipelineConfig& cfg) {
    if (cfg.locate_method == LocateMethod::Ellipse) {
        if (!edges) throw ParamError("locate: ellipse method needs an edge map");
        return locate_ellipse_method(mask, *edges, cfg.face_ratio_threshold);
    }
    auto regions = connected_components(mask);
    std::erase_if(regions, [&](const Region& r) { return r.area() < cfg.min_region_area; });
    return locate_comparison_method(regions, mask.height);
}

namespace {

// Snug copy with a small border; rotation canvases are sized for the
// rotated input box and can be much wider than the hand itself.
BinaryMask crop_to_content(const BinaryMask& mask, int pad) {
    int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
    if (max_x < min_x) return mask;
    BinaryMask out(max_x - min_x + 1 + 2 * pad, max_y - min_y + 1 + 2 * pad);
    for (int y = min_y; y <= max_y; ++y)
        for (int x = min_x; x <= max_x; ++x)
            if (mask.at(x, y)) out.set(x - min_x + pad, y - min_y + pad, true);
    return out;
}

}  // namespace

AdjustedHand stage_adjust(const BinaryMask& hand_mask, const PipelineConfig& cfg) {
    AdjustedHand out;
    HandOrientation orient = hand_orientation(hand_mask, cfg.orientation);
    out.theta_deg = orient.theta * 180.0 / std::numbers::pi;

    RotateParams rp = cfg.rotate;
    rp.orientation = cfg.orientation;
    BinaryMask vertical = crop_to_content(rotate_to_vertical(hand_mask, orient.theta, rp), 2);

    // Post-rotation fit of the full mask (stable for upright hands);
    // the corrected fit is only needed for the initial estimate.
    std::vector<Point> pts;
    for (int y = 0; y < vertical.height; ++y)
        for (int x = 0; x < vertical.width; ++x)
            if (vertical.at(x, y)) pts.push_back({x, y});
    HandOrientation after;
    after.ellipse = fit_ellipse(pts);
    after.theta = after.ellipse.theta;
    // The least-squares center of a filled blob sits at its centroid,
    // which the heavy palm pulls away from the hand's middle; the
    // half-split expects an ellipse spanning the whole hand, so the
    // split line is re-anchored at the vertical midpoint of the mask.
    Ellipse split = after.ellipse;
    int min_y = vertical.height, max_y = -1;
    for (int y = 0; y < vertical.height; ++y)
        for (int x = 0; x < vertical.width; ++x)
            if (vertical.at(x, y)) {
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                break;
            }
    if (max_y >= min_y) split.cy = 0.5 * (min_y + max_y);
    FingerHalf half = finger_half(split, vertical);
    out.side = half.side;
    out.low_confidence = half.low_confidence;
    if (half.side == FingerSide::Down) {
        vertical = flip_vertical(vertical);
        out.flipped = true;
    }
    out.mask = std::move(vertical);
    return out;
}

FingerIsolation stage_fingers(const BinaryMask& adjusted_mask, const PipelineConfig& cfg) {
    (void)cfg;
    FingerIsolation out;
    HandBounds hb = hand_bounds(adjusted_mask);
    out.hand_length = hb.hand_length;
    out.palm = locate_palm(adjusted_mask, palm_dims(hb.hand_length));
    out.fingers = strip_to_fingers(adjusted_mask, out.palm);
    return out;
}

FeatureStage stage_featurize(const BinaryMask& finger_mask, double hand_length,
                             const PipelineConfig& cfg) {
    FeatureStage out;
    Histogram h = project_histogram(finger_mask, hand_length);
    Histogram sm = smooth(h, cfg.smooth_window);
    int min_sep = static_cast<int>(std::lround(cfg.min_separation_frac * sm.bins.size()));
    out.peaks = detect_peaks(sm, cfg.min_rel_amplitude, min_sep);
    out.vector = feature_vector(out.peaks);
    return out;
}

namespace {

// Runs one stage, converting any library error into a rejection that
// names the stage.
template <typename Fn>
bool run_stage(RecognitionResult& result, const char* stage, Fn&& fn) {
    try {
        fn();
        return true;
    } catch (const Error& e) {
        result.rejected_stage = stage;
        result.message = e.what();
        return false;
    }
}

}  // namespace

RecognitionResult extract_features(const ImageRGB& img, const PipelineConfig& cfg) {
    RecognitionResult result;
    result.method = cfg.locate_method;

    BinaryMask mask;
    if (!run_stage(result, "skin-mask", [&] { mask = stage_skin_mask(img, cfg); })) return result;

    LocalizationOutcome outcome;
    if (!run_stage(result, "locate", [&] {
            if (cfg.locate_method == LocateMethod::Ellipse) {
                EdgeMap edges = stage_edges(img, cfg);
                auto pruned = mask;  // drop speck regions before scoring
                auto regions = connected_components(mask);
                for (const auto& r : regions)
                    if (r.area() < cfg.min_region_area)
                        for (const auto& p : r.pixels) pruned.set(p.x, p.y, false);
                outcome = locate_ellipse_method(pruned, edges, cfg.face_ratio_threshold);
            } else {
                outcome = stage_locate(mask, nullptr, cfg);
            }
        }))
        return result;

    result.region_count = outcome.hands.size() + (outcome.face ? 1 : 0);
    result.face_ratios = outcome.ratios;
    result.face_found = outcome.face.has_value();
    if (outcome.hands.empty()) {
        result.rejected_stage = "locate";
        result.message = "no hand region found";
        return result;
    }
    // Two hands: the larger one is processed, the other only flagged.
    const Region* hand = &outcome.hands[0];
    for (const auto& h : outcome.hands)
        if (h.area() > hand->area()) hand = &h;
    result.second_hand_ignored = outcome.hands.size() > 1;

    AdjustedHand adjusted;
    if (!run_stage(result, "adjust", [&] {
            BinaryMask hand_mask = region_to_mask(*hand, 2);
            adjusted = stage_adjust(hand_mask, cfg);
        }))
        return result;
    result.theta_deg = adjusted.theta_deg;
    result.finger_side = adjusted.side;
    result.flip_applied = adjusted.flipped;
    result.low_confidence_side = adjusted.low_confidence;

    FingerIsolation isolation;
    if (!run_stage(result, "fingers", [&] { isolation = stage_fingers(adjusted.mask, cfg); }))
        return result;
    result.hand_length = isolation.hand_length;
    result.palm = isolation.palm;

    FeatureStage fs;
    if (!run_stage(result, "featurize", [&] {
            fs = stage_featurize(isolation.fingers, isolation.hand_length, cfg);
        }))
        return result;
    result.peaks = fs.peaks;
    result.features = fs.vector;
    result.features_valid = true;
    return result;
}

RecognitionResult recognize(const ImageRGB& img, const PipelineConfig& cfg,
                            const DecisionTree& tree) {
    RecognitionResult result = extract_features(img, cfg);
    if (!result.features_valid) return result;
    if (!run_stage(result, "classify", [&] { result.digit = classify(tree, result.features); }))
        return result;
    return result;
}

// ---------------------------------------------------------------------------
// Config serialization

std::string PipelineConfig::to_json() const {
    json j;
    j["lowpass_radius"] = lowpass_radius;
    j["skin"]["mode"] = skin.mode == SkinMode::Crisp ? "crisp" : "fuzzy";
    j["skin"]["crisp"] = {skin.crisp.cb_min, skin.crisp.cb_max, skin.crisp.cr_min,
                          skin.crisp.cr_max};
    j["skin"]["fuzzy"] = json::parse(skin.fuzzy.to_json());
    j["canny"]["sigma"] = canny_sigma;
    j["canny"]["low_frac"] = canny_low_frac;
    j["canny"]["high_frac"] = canny_high_frac;
    j["locate"]["method"] = locate_method == LocateMethod::Ellipse ? "ellipse" : "comparison";
    j["locate"]["face_ratio_threshold"] = face_ratio_threshold;
    j["locate"]["min_region_area"] = min_region_area;
    j["morph"]["dilate_factor"] = orientation.dilate_factor;
    j["morph"]["erode_factor"] = orientation.erode_factor;
    j["rotate"]["min_rotation_deg"] = rotate.min_rotation_deg;
    j["rotate"]["target_tolerance_deg"] = rotate.target_tolerance_deg;
    j["rotate"]["max_refinements"] = rotate.max_refinements;
    j["features"]["smooth_window"] = smooth_window;
    j["features"]["min_rel_amplitude"] = min_rel_amplitude;
    j["features"]["min_separation_frac"] = min_separation_frac;
    switch (learner) {
        case LearnerKind::ID3: j["learner"]["kind"] = "id3"; break;
        case LearnerKind::C45: j["learner"]["kind"] = "c45"; break;
        case LearnerKind::C45Beta: j["learner"]["kind"] = "c45beta"; break;
    }
    j["learner"]["id3_bins"] = id3_bins;
    j["learner"]["beta"] = beta;
    j["learner"]["train_fraction"] = train_fraction;
    j["seed"] = seed;
    return j.dump(2);
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParamError(std::string("config json: ") + e.what());
    }
    PipelineConfig cfg;
    cfg.lowpass_radius = j.value("lowpass_radius", cfg.lowpass_radius);
    if (j.contains("skin")) {
        const auto& s = j["skin"];
        if (s.contains("mode")) {
            std::string mode = s["mode"].get<std::string>();
            if (mode == "crisp") cfg.skin.mode = SkinMode::Crisp;
            else if (mode == "fuzzy") cfg.skin.mode = SkinMode::Fuzzy;
            else throw ParamError("config json: skin.mode must be 'crisp' or 'fuzzy'");
        }
        if (s.contains("crisp")) {
            const auto& c = s["crisp"];
            if (!c.is_array() || c.size() != 4)
                throw ParamError("config json: skin.crisp must be [cb_min,cb_max,cr_min,cr_max]");
            cfg.skin.crisp = {c[0].get<int>(), c[1].get<int>(), c[2].get<int>(), c[3].get<int>()};
        }
        if (s.contains("fuzzy")) cfg.skin.fuzzy = FuzzySkinSystem::from_json(s["fuzzy"].dump());
    }
    if (j.contains("canny")) {
        cfg.canny_sigma = j["canny"].value("sigma", cfg.canny_sigma);
        cfg.canny_low_frac = j["canny"].value("low_frac", cfg.canny_low_frac);
        cfg.canny_high_frac = j["canny"].value("high_frac", cfg.canny_high_frac);
    }
    if (j.contains("locate")) {
        const auto& l = j["locate"];
        if (l.contains("method")) {
            std::string m = l["method"].get<std::string>();
            if (m == "ellipse") cfg.locate_method = LocateMethod::Ellipse;
            else if (m == "comparison") cfg.locate_method = LocateMethod::Comparison;
            else throw ParamError("config json: locate.method must be 'ellipse' or 'comparison'");
        }
        cfg.face_ratio_threshold = l.value("face_ratio_threshold", cfg.face_ratio_threshold);
        cfg.min_region_area = l.value("min_region_area", cfg.min_region_area);
    }
    if (j.contains("morph")) {
        cfg.orientation.dilate_factor = j["morph"].value("dilate_factor", cfg.orientation.dilate_factor);
        cfg.orientation.erode_factor = j["morph"].value("erode_factor", cfg.orientation.erode_factor);
    }
    if (j.contains("rotate")) {
        cfg.rotate.min_rotation_deg = j["rotate"].value("min_rotation_deg", cfg.rotate.min_rotation_deg);
        cfg.rotate.target_tolerance_deg =
            j["rotate"].value("target_tolerance_deg", cfg.rotate.target_tolerance_deg);
        cfg.rotate.max_refinements = j["rotate"].value("max_refinements", cfg.rotate.max_refinements);
    }
    if (j.contains("features")) {
        cfg.smooth_window = j["features"].value("smooth_window", cfg.smooth_window);
        cfg.min_rel_amplitude = j["features"].value("min_rel_amplitude", cfg.min_rel_amplitude);
        cfg.min_separation_frac =
            j["features"].value("min_separation_frac", cfg.min_separation_frac);
    }
    if (j.contains("learner")) {
        const auto& l = j["learner"];
        if (l.contains("kind")) {
            std::string k = l["kind"].get<std::string>();
            if (k == "id3") cfg.learner = LearnerKind::ID3;
            else if (k == "c45") cfg.learner = LearnerKind::C45;
            else if (k == "c45beta") cfg.learner = LearnerKind::C45Beta;
            else throw ParamError("config json: learner.kind must be id3, c45 or c45beta");
        }
        cfg.id3_bins = l.value("id3_bins", cfg.id3_bins);
        cfg.beta = l.value("beta", cfg.beta);
        cfg.train_fraction = l.value("train_fraction", cfg.train_fraction);
    }
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParamError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string RecognitionResult::to_json() const {
    json j;
    if (digit) j["digit"] = *digit;
    else j["digit"] = nullptr;
    j["rejected_stage"] = rejected_stage;
    j["message"] = message;
    j["region_count"] = region_count;
    j["method"] = method == LocateMethod::Ellipse ? "ellipse" : "comparison";
    j["face_ratios"] = face_ratios;
    j["face_found"] = face_found;
    j["second_hand_ignored"] = second_hand_ignored;
    j["theta_deg"] = theta_deg;
    j["finger_side"] = finger_side == FingerSide::Up ? "up" : "down";
    j["flip_applied"] = flip_applied;
    j["low_confidence_side"] = low_confidence_side;
    j["hand_length"] = hand_length;
    j["palm"] = {{"x", palm.x}, {"y", palm.y}, {"width", palm.width}, {"height", palm.height},
                 {"skin_count", palm.skin_count}};
    json peaks_json = json::array();
    for (const auto& p : peaks) peaks_json.push_back({{"x", p.x}, {"y", p.y}});
    j["peaks"] = std::move(peaks_json);
    if (features_valid) {
        j["features"] = features.to_array();
    } else {
        j["features"] = nullptr;
    }
    return j.dump(2);
}

}  // namespace handdigit
