#include "handdigit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <numbers>

#include "handdigit/error.hpp"
#include "handdigit/parallel.hpp"
#include "handdigit/pnm.hpp"
#include "handdigit/rng.hpp"

namespace handdigit {

using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// Canonical hand frame: palm center at the origin, fingers toward -y,
// all lengths as fractions of the hand length (wrist bottom +0.335 to
// the longest fingertip -0.665, total span 1.0).
constexpr double kPalmHalfW = 0.22;
constexpr double kPalmHalfH = 0.248;
constexpr double kWristHalfW = 0.15;
constexpr double kWristTop = 0.175;
constexpr double kWristBottom = 0.335;
constexpr double kFingerRadius = 0.018;
constexpr double kTipConeLen = 0.045;

struct FingerSpec {
    double u;    // lateral base offset
    double len;  // tip height above the palm top
};

struct DigitLayout {
    std::vector<FingerSpec> fingers;
    double wrist_offset;  // lateral, balances uneven finger lengths
};

// Per-digit layouts. Lateral offsets set the histogram peak spacing
// pattern (distinct gap ratios per digit), lengths alternate strongly
// so successive amplitude differences stay far from zero after the
// palm circle removes the finger bases.
const DigitLayout& digit_layout(int digit) {
    static const std::vector<DigitLayout> layouts = {
        /*1*/ {{{0.00, 0.417}}, 0.0},
        /*2*/ {{{-0.12, 0.417}, {0.12, 0.20}}, 0.0},
        /*3*/ {{{-0.21, 0.40}, {0.00, 0.23}, {0.21, 0.40}}, 0.0},
        /*4*/ {{{-0.2175, 0.417}, {-0.0725, 0.18}, {0.0725, 0.417}, {0.2175, 0.10}}, 0.0},
        /*5*/ {{{-0.21, 0.417}, {-0.105, 0.17}, {0.00, 0.417}, {0.105, 0.17}, {0.21, 0.417}}, 0.0},
        /*6*/ {{{-0.21, 0.10}, {0.045, 0.417}, {0.21, 0.11}}, 0.0},
        /*7*/ {{{-0.21, 0.40}, {-0.045, 0.22}, {0.21, 0.417}}, 0.0},
        /*8*/ {{{-0.21, 0.11}, {0.025, 0.417}, {0.21, 0.10}}, 0.0},
        /*9*/ {{{-0.21, 0.417}, {-0.025, 0.24}, {0.21, 0.40}}, 0.0},
    };
    if (digit < 1 || digit > 9) throw ParamError("digit must be in 1..9");
    return layouts[static_cast<std::size_t>(digit - 1)];
}

struct FingerGeom {
    double bx, by;  // base
    double tx, ty;  // tip point
};

double palm_boundary_y(double u) {
    double t = u / kPalmHalfW;
    double s = 1.0 - t * t;
    return s > 0 ? -kPalmHalfH * std::sqrt(s) : 0.0;
}

std::vector<FingerGeom> finger_geometry(const HandPose& pose) {
    const auto& layout = digit_layout(pose.digit).fingers;
    std::vector<FingerGeom> out;
    out.reserve(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& f = layout[i];
        double by = 0.90 * palm_boundary_y(f.u);  // base slightly inside the palm
        double ty = -(kPalmHalfH + f.len);
        double jit = i < pose.finger_jitter_deg.size() ? pose.finger_jitter_deg[i] : 0.0;
        double jr = jit * kPi / 180.0;
        // Tilt about the base.
        double dx = 0.0 - 0.0, dy = ty - by;
        double c = std::cos(jr), s = std::sin(jr);
        FingerGeom g;
        g.bx = f.u;
        g.by = by;
        g.tx = f.u + c * dx - s * dy;
        g.ty = by + s * dx + c * dy;
        out.push_back(g);
    }
    return out;
}

bool in_finger(const FingerGeom& g, double qx, double qy) {
    double ax = g.tx - g.bx, ay = g.ty - g.by;
    double len = std::sqrt(ax * ax + ay * ay);
    if (len <= 0) return false;
    double dx = ax / len, dy = ay / len;
    double vx = qx - g.bx, vy = qy - g.by;
    double t = vx * dx + vy * dy;
    double perp = std::abs(vx * dy - vy * dx);
    double cone = std::min(kTipConeLen, 0.4 * len);
    double shaft_end = len - cone;
    if (t < 0) return vx * vx + vy * vy <= kFingerRadius * kFingerRadius;
    if (t <= shaft_end) return perp <= kFingerRadius;
    if (t <= len) return perp <= kFingerRadius * (len - t) / cone;
    return false;
}

bool in_hand(const std::vector<FingerGeom>& fingers, double wrist_off, double qx, double qy) {
    double px = qx / kPalmHalfW, py = qy / kPalmHalfH;
    if (px * px + py * py <= 1.0) return true;
    if (std::abs(qx - wrist_off) <= kWristHalfW && qy >= kWristTop && qy <= kWristBottom)
        return true;
    for (const auto& f : fingers)
        if (in_finger(f, qx, qy)) return true;
    return false;
}

}  // namespace

int finger_count(int digit) {
    return static_cast<int>(digit_layout(digit).fingers.size());
}

std::pair<ImageRGB, GroundTruth> render_hand(const HandPose& pose) {
    if (pose.scale <= 0) throw ParamError("render_hand: scale must be > 0");
    if (pose.canvas_width < 1 || pose.canvas_height < 1)
        throw ParamError("render_hand: canvas must be at least 1x1");

    auto fingers = finger_geometry(pose);
    const double wrist_off = digit_layout(pose.digit).wrist_offset;

    // Tight canonical bounds (finger tilt included), then the rotated
    // footprint must stay inside the canvas.
    double min_x = std::min(-kPalmHalfW, wrist_off - kWristHalfW);
    double max_x = std::max(kPalmHalfW, wrist_off + kWristHalfW);
    double min_y = -kPalmHalfH, max_y = kWristBottom;
    for (const auto& f : fingers) {
        min_x = std::min({min_x, f.bx - kFingerRadius, f.tx - kFingerRadius});
        max_x = std::max({max_x, f.bx + kFingerRadius, f.tx + kFingerRadius});
        min_y = std::min({min_y, f.ty});
    }
    const double rot = (pose.rotation_deg - 90.0) * kPi / 180.0;
    const double c = std::cos(rot), s = std::sin(rot);
    double fx_min = 1e300, fx_max = -1e300, fy_min = 1e300, fy_max = -1e300;
    double corners[4][2] = {{min_x, min_y}, {max_x, min_y}, {min_x, max_y}, {max_x, max_y}};
    for (auto& p : corners) {
        double x = pose.center_x + pose.scale * (c * p[0] - s * p[1]);
        double y = pose.center_y + pose.scale * (s * p[0] + c * p[1]);
        fx_min = std::min(fx_min, x);
        fx_max = std::max(fx_max, x);
        fy_min = std::min(fy_min, y);
        fy_max = std::max(fy_max, y);
    }
    if (fx_min < 1.0 || fy_min < 1.0 || fx_max > pose.canvas_width - 2.0 ||
        fy_max > pose.canvas_height - 2.0)
        throw ParamError("render_hand: hand does not fit the canvas");

    ImageRGB img(pose.canvas_width, pose.canvas_height);
    GroundTruth gt;
    gt.digit = pose.digit;
    gt.mask = BinaryMask(pose.canvas_width, pose.canvas_height);
    gt.palm_center = {pose.center_x, pose.center_y};
    gt.palm_radius = 0.5 * (kPalmHalfW + kPalmHalfH) * pose.scale;
    gt.orientation_deg = std::fmod(std::fmod(pose.rotation_deg, 180.0) + 180.0, 180.0);
    for (const auto& f : fingers) {
        FingerSegment seg;
        seg.base = {pose.center_x + pose.scale * (c * f.bx - s * f.by),
                    pose.center_y + pose.scale * (s * f.bx + c * f.by)};
        seg.tip = {pose.center_x + pose.scale * (c * f.tx - s * f.ty),
                   pose.center_y + pose.scale * (s * f.tx + c * f.ty)};
        seg.radius = kFingerRadius * pose.scale;
        gt.fingers.push_back(seg);
    }

    std::uint8_t skin_r, skin_g, skin_b, bg_r, bg_g, bg_b;
    ycbcr_to_rgb(150, pose.skin_cb, pose.skin_cr, skin_r, skin_g, skin_b);
    ycbcr_to_rgb(200, pose.bg_cb, pose.bg_cr, bg_r, bg_g, bg_b);

    const double inv_scale = 1.0 / pose.scale;
    for (int y = 0; y < pose.canvas_height; ++y) {
        for (int x = 0; x < pose.canvas_width; ++x) {
            double dx = (x - pose.center_x) * inv_scale, dy = (y - pose.center_y) * inv_scale;
            double qx = c * dx + s * dy;
            double qy = -s * dx + c * dy;
            bool skin = in_hand(fingers, wrist_off, qx, qy);
            if (skin) gt.mask.set(x, y, true);
            if (pose.chroma_noise > 0) {
                SplitMix64 rng(mix_seed(pose.noise_seed,
                                        static_cast<std::uint64_t>(y) * pose.canvas_width + x));
                int span = 2 * pose.chroma_noise + 1;
                int dcb = static_cast<int>(rng.bounded(span)) - pose.chroma_noise;
                int dcr = static_cast<int>(rng.bounded(span)) - pose.chroma_noise;
                int cb = std::clamp((skin ? pose.skin_cb : pose.bg_cb) + dcb, 0, 255);
                int cr = std::clamp((skin ? pose.skin_cr : pose.bg_cr) + dcr, 0, 255);
                std::uint8_t r, g, b;
                ycbcr_to_rgb(skin ? 150 : 200, cb, cr, r, g, b);
                img.set(x, y, r, g, b);
            } else if (skin) {
                img.set(x, y, skin_r, skin_g, skin_b);
            } else {
                img.set(x, y, bg_r, bg_g, bg_b);
            }
        }
    }
    return {std::move(img), std::move(gt)};
}

HandPose sample_pose(int digit, int index, std::uint64_t seed, const PoseRanges& ranges) {
    if (!(ranges.scale_min > 0) || ranges.scale_max < ranges.scale_min)
        throw ParamError("sample_pose: bad scale range");
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(digit), static_cast<std::uint64_t>(index)));

    HandPose pose;
    pose.digit = digit;
    pose.scale = rng.uniform(ranges.scale_min, ranges.scale_max);
    pose.rotation_deg = rng.uniform(ranges.rotation_min_deg, ranges.rotation_max_deg);
    int nf = finger_count(digit);
    for (int i = 0; i < nf; ++i)
        pose.finger_jitter_deg.push_back(rng.uniform(-ranges.jitter_max_deg, ranges.jitter_max_deg));
    pose.skin_cb = static_cast<int>(rng.uniform_int(ranges.skin_cb_min, ranges.skin_cb_max));
    pose.skin_cr = static_cast<int>(rng.uniform_int(ranges.skin_cr_min, ranges.skin_cr_max));
    pose.bg_cb = 128;
    pose.bg_cr = 128;
    pose.chroma_noise = ranges.chroma_noise;
    pose.noise_seed = mix_seed(seed, static_cast<std::uint64_t>(digit) * 64 + 7,
                               static_cast<std::uint64_t>(index));

    int side = ranges.canvas_width > 0
                   ? ranges.canvas_width
                   : static_cast<int>(std::ceil(1.62 * ranges.scale_max)) + 8;
    pose.canvas_width = side;
    pose.canvas_height = ranges.canvas_height > 0 ? ranges.canvas_height : side;

    // Any rotation of the hand stays within this radius of the palm
    // center, so a center inside these margins always fits.
    double reach = 0.79 * pose.scale;
    double lo_x = reach + 2, hi_x = pose.canvas_width - reach - 3;
    double lo_y = reach + 2, hi_y = pose.canvas_height - reach - 3;
    if (lo_x > hi_x || lo_y > hi_y)
        throw ParamError("sample_pose: unsatisfiable pose range (canvas too small for scale)");
    pose.center_x = rng.uniform(lo_x, hi_x);
    pose.center_y = rng.uniform(lo_y, hi_y);
    return pose;
}

namespace {

json pose_to_json(const HandPose& p) {
    json j;
    j["digit"] = p.digit;
    j["center"] = {p.center_x, p.center_y};
    j["scale"] = p.scale;
    j["rotation_deg"] = p.rotation_deg;
    j["finger_jitter_deg"] = p.finger_jitter_deg;
    j["skin_cb"] = p.skin_cb;
    j["skin_cr"] = p.skin_cr;
    j["bg_cb"] = p.bg_cb;
    j["bg_cr"] = p.bg_cr;
    j["canvas"] = {p.canvas_width, p.canvas_height};
    j["chroma_noise"] = p.chroma_noise;
    j["noise_seed"] = p.noise_seed;
    return j;
}

HandPose pose_from_json(const json& j) {
    HandPose p;
    p.digit = j.at("digit").get<int>();
    p.center_x = j.at("center")[0].get<double>();
    p.center_y = j.at("center")[1].get<double>();
    p.scale = j.at("scale").get<double>();
    p.rotation_deg = j.at("rotation_deg").get<double>();
    p.finger_jitter_deg = j.at("finger_jitter_deg").get<std::vector<double>>();
    p.skin_cb = j.at("skin_cb").get<int>();
    p.skin_cr = j.at("skin_cr").get<int>();
    p.bg_cb = j.at("bg_cb").get<int>();
    p.bg_cr = j.at("bg_cr").get<int>();
    p.canvas_width = j.at("canvas")[0].get<int>();
    p.canvas_height = j.at("canvas")[1].get<int>();
    p.chroma_noise = j.value("chroma_noise", 0);
    p.noise_seed = j.value("noise_seed", std::uint64_t{0});
    return p;
}

}  // namespace

std::string DatasetManifest::to_json() const {
    json arr = json::array();
    for (const auto& e : entries) {
        json j;
        j["path"] = e.path;
        j["label"] = e.label;
        j["pose"] = pose_to_json(e.pose);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

DatasetManifest DatasetManifest::from_json(const std::string& text) {
    json arr;
    try {
        arr = json::parse(text);
    } catch (const json::exception& e) {
        throw DecodeError(std::string("manifest json: ") + e.what());
    }
    if (!arr.is_array()) throw DecodeError("manifest json: expected an array");
    DatasetManifest m;
    for (const auto& j : arr) {
        ManifestEntry e;
        e.path = j.at("path").get<std::string>();
        e.label = j.at("label").get<int>();
        e.pose = pose_from_json(j.at("pose"));
        m.entries.push_back(std::move(e));
    }
    return m;
}

DatasetManifest generate_dataset(int count_per_digit, std::uint64_t seed, const PoseRanges& ranges,
                                 const std::string& out_dir) {
    if (count_per_digit < 1) throw ParamError("generate_dataset: count_per_digit must be >= 1");
    std::filesystem::create_directories(out_dir);

    DatasetManifest manifest;
    manifest.entries.resize(static_cast<std::size_t>(count_per_digit) * 9);
    for (int digit = 1; digit <= 9; ++digit) {
        for (int k = 0; k < count_per_digit; ++k) {
            std::size_t idx = static_cast<std::size_t>(digit - 1) * count_per_digit + k;
            char name[64];
            std::snprintf(name, sizeof name, "img_d%d_%04d.ppm", digit, k);
            ManifestEntry& e = manifest.entries[idx];
            e.path = name;
            e.label = digit;
            e.pose = sample_pose(digit, k, seed, ranges);
        }
    }
    parallel_for_index(manifest.entries.size(), [&](std::size_t i) {
        const ManifestEntry& e = manifest.entries[i];
        auto [img, gt] = render_hand(e.pose);
        save_ppm((std::filesystem::path(out_dir) / e.path).string(), img);
    });
    write_file((std::filesystem::path(out_dir) / "manifest.json").string(),
               [&] {
                   auto s = manifest.to_json();
                   return std::vector<std::uint8_t>(s.begin(), s.end());
               }());
    return manifest;
}

}  // namespace handdigit
