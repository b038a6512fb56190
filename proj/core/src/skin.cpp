#include "handdigit/skin.hpp"

#include <nlohmann/json.hpp>

#include "handdigit/error.hpp"

namespace handdigit {

using json = nlohmann::json;

bool classify_crisp(int cb, int cr, const CrispSkinRange& range) {
    return cb >= range.cb_min && cb <= range.cb_max && cr >= range.cr_min && cr <= range.cr_max;
}

double Trapezoid::membership(double x) const {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);  // a < x < b implies b > a
    return (d - x) / (d - c);             // c < x <= d implies d > c
}

FuzzySkinSystem FuzzySkinSystem::defaults() {
    FuzzySkinSystem s;
    s.cb_sets = {Trapezoid{0, 0, 67, 77}, Trapezoid{67, 77, 127, 137}, Trapezoid{127, 137, 255, 255}};
    s.cr_sets = {Trapezoid{0, 0, 129, 139}, Trapezoid{129, 139, 210, 220}, Trapezoid{210, 220, 255, 255}};
    s.rules[1][1] = 1.0;
    s.tau = 0.5;
    return s;
}

void FuzzySkinSystem::validate() const {
    auto check_input = [](const std::array<Trapezoid, 3>& sets, const char* name) {
        for (const auto& t : sets) {
            if (!(t.a <= t.b && t.b <= t.c && t.c <= t.d))
                throw ParamError(std::string("fuzzy system: ") + name +
                                 " trapezoid breakpoints out of order");
        }
        for (int x = 0; x <= 255; ++x) {
            double m = 0;
            for (const auto& t : sets) m = std::max(m, t.membership(x));
            if (m <= 0.0)
                throw ParamError(std::string("fuzzy system: ") + name +
                                 " sets do not cover channel value " + std::to_string(x));
        }
    };
    check_input(cb_sets, "Cb");
    check_input(cr_sets, "Cr");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (rules[i][j] < 0.0 || rules[i][j] > 1.0)
                throw ParamError("fuzzy system: rule consequent outside [0,1]");
    if (tau < 0.0 || tau > 1.0) throw ParamError("fuzzy system: tau outside [0,1]");
}

FuzzyDecision classify_fuzzy(int cb, int cr, const FuzzySkinSystem& sys) {
    double mu_cb[3], mu_cr[3];
    for (int i = 0; i < 3; ++i) {
        mu_cb[i] = sys.cb_sets[i].membership(cb);
        mu_cr[i] = sys.cr_sets[i].membership(cr);
    }
    double wsum = 0.0, wz = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (mu_cb[i] == 0.0) continue;
        for (int j = 0; j < 3; ++j) {
            double w = std::min(mu_cb[i], mu_cr[j]);
            if (w == 0.0) continue;
            wsum += w;
            wz += w * sys.rules[i][j];
        }
    }
    double score = wsum > 0.0 ? wz / wsum : 0.0;
    return {score, score >= sys.tau};
}

BinaryMask skin_mask(const ImageYCbCr& img, const SkinParams& params) {
    BinaryMask mask(img.width, img.height);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    if (params.mode == SkinMode::Crisp) {
        for (std::size_t p = 0; p < n; ++p)
            mask.bits[p] = classify_crisp(img.data[p * 3 + 1], img.data[p * 3 + 2], params.crisp);
    } else {
        // 256x256 chroma lookup; per-pixel inference would redo identical work.
        std::vector<std::uint8_t> lut(65536);
        for (int cb = 0; cb < 256; ++cb)
            for (int cr = 0; cr < 256; ++cr)
                lut[static_cast<std::size_t>(cb) * 256 + cr] =
                    classify_fuzzy(cb, cr, params.fuzzy).skin;
        for (std::size_t p = 0; p < n; ++p)
            mask.bits[p] =
                lut[static_cast<std::size_t>(img.data[p * 3 + 1]) * 256 + img.data[p * 3 + 2]];
    }
    return mask;
}

static json trapezoid_json(const Trapezoid& t) { return json::array({t.a, t.b, t.c, t.d}); }

static Trapezoid trapezoid_from(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 4)
        throw ParamError(std::string("fuzzy system json: ") + where + " must be [a,b,c,d]");
    return Trapezoid{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

std::string FuzzySkinSystem::to_json() const {
    json j;
    const char* names[3] = {"dark", "medium", "light"};
    for (int i = 0; i < 3; ++i) {
        j["cb"][names[i]] = trapezoid_json(cb_sets[i]);
        j["cr"][names[i]] = trapezoid_json(cr_sets[i]);
    }
    j["rules"] = json::array();
    for (int i = 0; i < 3; ++i) j["rules"].push_back(json::array({rules[i][0], rules[i][1], rules[i][2]}));
    j["tau"] = tau;
    return j.dump(2);
}

FuzzySkinSystem FuzzySkinSystem::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParamError(std::string("fuzzy system json: ") + e.what());
    }
    FuzzySkinSystem s = defaults();
    const char* names[3] = {"dark", "medium", "light"};
    if (j.contains("cb"))
        for (int i = 0; i < 3; ++i)
            if (j["cb"].contains(names[i])) s.cb_sets[i] = trapezoid_from(j["cb"][names[i]], "cb");
    if (j.contains("cr"))
        for (int i = 0; i < 3; ++i)
            if (j["cr"].contains(names[i])) s.cr_sets[i] = trapezoid_from(j["cr"][names[i]], "cr");
    if (j.contains("rules")) {
        const auto& r = j["rules"];
        if (!r.is_array() || r.size() != 3) throw ParamError("fuzzy system json: rules must be 3x3");
        for (int i = 0; i < 3; ++i) {
            if (!r[i].is_array() || r[i].size() != 3)
                throw ParamError("fuzzy system json: rules must be 3x3");
            for (int k = 0; k < 3; ++k) s.rules[i][k] = r[i][k].get<double>();
        }
    }
    if (j.contains("tau")) s.tau = j["tau"].get<double>();
    s.validate();
    return s;
}

}  // namespace handdigit
