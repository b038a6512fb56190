#pragma once

#include <array>
#include <string>

#include "handdigit/image.hpp"

namespace handdigit {

/// Inclusive chroma box for the crisp skin decision.
struct CrispSkinRange {
    int cb_min = 77;
    int cb_max = 127;
    int cr_min = 139;
    int cr_max = 210;
};

/// true iff cb and cr both fall inside the (inclusive) crisp box.
bool classify_crisp(int cb, int cr, const CrispSkinRange& range = {});

/// Trapezoidal membership function with breakpoints a <= b <= c <= d:
/// 0 outside [a, d], 1 on [b, c], linear ramps between.
struct Trapezoid {
    double a = 0, b = 0, c = 0, d = 0;
    double membership(double x) const;
};

/// Zero-order Takagi-Sugeno system over (Cb, Cr). Each input has three
/// fuzzy sets (dark/medium/light); rules[i][j] is the constant consequent
/// for Cb-set i and Cr-set j, with AND = min. Output is the firing-
/// strength-weighted average of consequents; the skin decision is
/// score >= tau.
struct FuzzySkinSystem {
    std::array<Trapezoid, 3> cb_sets;  // dark, medium, light
    std::array<Trapezoid, 3> cr_sets;
    double rules[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double tau = 0.5;

    /// Default system: the medium sets plateau exactly on the crisp box
    /// with 10-unit shoulders; only medium AND medium concludes skin.
    static FuzzySkinSystem defaults();

    /// Throws ParamError on out-of-order breakpoints, gaps in the
    /// [0,255] coverage, or consequents/tau outside [0,1].
    void validate() const;

    static FuzzySkinSystem from_json(const std::string& text);
    std::string to_json() const;
};

struct FuzzyDecision {
    double score;
    bool skin;
};

FuzzyDecision classify_fuzzy(int cb, int cr, const FuzzySkinSystem& sys);

enum class SkinMode { Crisp, Fuzzy };

struct SkinParams {
    SkinMode mode = SkinMode::Fuzzy;
    CrispSkinRange crisp;
    FuzzySkinSystem fuzzy = FuzzySkinSystem::defaults();
};

/// Per-pixel application of the selected classifier.
BinaryMask skin_mask(const ImageYCbCr& img, const SkinParams& params);

}  // namespace handdigit
