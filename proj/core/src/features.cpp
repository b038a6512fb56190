#include "handdigit/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "handdigit/error.hpp"

namespace handdigit {

std::array<double, 17> FeatureVector::to_array() const {
    std::array<double, 17> a{};
    a[0] = n;
    for (int i = 0; i < 4; ++i) {
        a[1 + i] = dist_x[i];
        a[5 + i] = dist_y[i];
        a[9 + i] = r_x[i];
        a[13 + i] = r_y[i];
    }
    return a;
}

FeatureVector FeatureVector::from_array(const std::array<double, 17>& a) {
    FeatureVector v;
    v.n = static_cast<int>(a[0]);
    for (int i = 0; i < 4; ++i) {
        v.dist_x[i] = a[1 + i];
        v.dist_y[i] = a[5 + i];
        v.r_x[i] = a[9 + i];
        v.r_y[i] = a[13 + i];
    }
    return v;
}

Histogram project_histogram(const BinaryMask& finger_mask, double hand_length) {
    if (!(hand_length > 0)) throw ParamError("project_histogram: hand_length must be > 0");
    Histogram h;
    h.hand_length = hand_length;
    h.bins.assign(finger_mask.width, 0.0);
    for (int y = 0; y < finger_mask.height; ++y)
        for (int x = 0; x < finger_mask.width; ++x)
            if (finger_mask.at(x, y)) h.bins[x] += 1.0;
    for (auto& b : h.bins) b /= hand_length;
    return h;
}

Histogram smooth(const Histogram& h, int window) {
    if (window < 1 || window % 2 == 0)
        throw ParamError("smooth: window must be an odd integer >= 1");
    if (window == 1 || h.bins.empty()) return h;
    const int n = static_cast<int>(h.bins.size());
    const int r = window / 2;
    Histogram out;
    out.hand_length = h.hand_length;
    out.bins.assign(h.bins.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int d = -r; d <= r; ++d) {
            int j = std::clamp(i + d, 0, n - 1);
            s += h.bins[j];
        }
        out.bins[i] = s / window;
    }
    return out;
}

std::vector<Peak> detect_peaks(const Histogram& h, double min_rel_amplitude, int min_separation) {
    if (!(min_rel_amplitude > 0.0 && min_rel_amplitude < 1.0))
        throw ParamError("detect_peaks: min_rel_amplitude must be in (0,1)");
    if (min_separation < 0) throw ParamError("detect_peaks: min_separation must be >= 0");

    const int n = static_cast<int>(h.bins.size());
    auto val = [&](int i) { return (i < 0 || i >= n) ? 0.0 : h.bins[i]; };

    double max_v = 0;
    for (double v : h.bins) max_v = std::max(max_v, v);
    if (max_v <= 0) return {};
    const double floor_v = min_rel_amplitude * max_v;

    // Candidates: leftmost index of each maximal constant run that rises
    // on the left and falls on the right (bins beyond the ends are zero).
    std::vector<Peak> candidates;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && h.bins[j + 1] == h.bins[i]) ++j;
        if (h.bins[i] > 0 && val(i - 1) < h.bins[i] && val(j + 1) < h.bins[i] &&
            h.bins[i] >= floor_v) {
            candidates.push_back({i, h.bins[i]});
        }
        i = j + 1;
    }

    // Greedy by amplitude (ties toward smaller x), suppressing anything
    // closer than min_separation to a kept peak; at most five.
    std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        return a.y != b.y ? a.y > b.y : a.x < b.x;
    });
    std::vector<Peak> kept;
    for (const auto& c : candidates) {
        bool blocked = false;
        for (const auto& k : kept)
            if (std::abs(k.x - c.x) < min_separation) {
                blocked = true;
                break;
            }
        if (!blocked) {
            kept.push_back(c);
            if (kept.size() == 5) break;
        }
    }
    std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.x < b.x; });
    return kept;
}

FeatureVector feature_vector(const std::vector<Peak>& peaks) {
    if (peaks.size() > 5) throw ParamError("feature_vector: more than 5 peaks");
    FeatureVector v;
    v.n = static_cast<int>(peaks.size());
    for (int i = 0; i + 1 < v.n && i < 4; ++i) {
        v.dist_x[i] = std::abs(static_cast<double>(peaks[i].x) - peaks[i + 1].x);
        v.dist_y[i] = std::abs(peaks[i].y - peaks[i + 1].y);
    }
    for (int i = 0; i < 3; ++i) {
        if (v.dist_x[i] != 0.0 && v.dist_x[i + 1] != 0.0) v.r_x[i] = v.dist_x[i] / v.dist_x[i + 1];
        if (v.dist_y[i] != 0.0 && v.dist_y[i + 1] != 0.0) v.r_y[i] = v.dist_y[i] / v.dist_y[i + 1];
    }
    return v;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace

std::string to_csv_row(const FeatureVector& v, int label) {
    std::string row;
    if (label >= 0) {
        row += std::to_string(label);
        row += ',';
    }
    auto a = v.to_array();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) row += ',';
        append_double(row, a[i]);
    }
    return row;
}

}  // namespace handdigit
