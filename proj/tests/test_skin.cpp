#include <doctest.h>

#include "handdigit/error.hpp"
#include "handdigit/skin.hpp"

using namespace handdigit;

TEST_SUITE("skin") {

TEST_CASE("classify_crisp examples") {
    CHECK(classify_crisp(100, 170));
    CHECK(classify_crisp(77, 139));   // bounds inclusive
    CHECK(classify_crisp(127, 210));
    CHECK_FALSE(classify_crisp(50, 100));
    CHECK_FALSE(classify_crisp(76, 170));
    CHECK_FALSE(classify_crisp(100, 211));
}

TEST_CASE("classify_crisp matches the double-inequality oracle on the full grid") {
    CrispSkinRange r;
    for (int cb = 0; cb < 256; ++cb)
        for (int cr = 0; cr < 256; ++cr) {
            bool expect = (77 <= cb && cb <= 127) && (139 <= cr && cr <= 210);
            if (classify_crisp(cb, cr, r) != expect) {
                FAIL("mismatch at cb=", cb, " cr=", cr);
            }
        }
}

TEST_CASE("membership: plateau, ramp midpoint, outside support") {
    CHECK(Trapezoid{0, 0, 77, 87}.membership(40) == 1.0);
    CHECK(Trapezoid{67, 77, 127, 137}.membership(132) == doctest::Approx(0.5));
    CHECK(Trapezoid{67, 77, 127, 137}.membership(200) == 0.0);
    // Degenerate ramp: a == b evaluates to 1 at that point.
    CHECK(Trapezoid{10, 10, 20, 30}.membership(10) == 1.0);
}

TEST_CASE("fuzzy system construction rejects out-of-order breakpoints") {
    FuzzySkinSystem s = FuzzySkinSystem::defaults();
    s.cb_sets[1] = Trapezoid{77, 67, 127, 137};
    CHECK_THROWS_AS(s.validate(), ParamError);
}

TEST_CASE("fuzzy system construction rejects coverage gaps") {
    FuzzySkinSystem s = FuzzySkinSystem::defaults();
    s.cb_sets[0] = Trapezoid{0, 0, 10, 20};
    s.cb_sets[1] = Trapezoid{40, 50, 127, 137};  // hole in (20, 40)
    CHECK_THROWS_AS(s.validate(), ParamError);
}

TEST_CASE("classify_fuzzy examples") {
    FuzzySkinSystem sys = FuzzySkinSystem::defaults();
    auto core = classify_fuzzy(100, 170, sys);
    CHECK(core.score == 1.0);
    CHECK(core.skin);
    auto far = classify_fuzzy(0, 0, sys);
    CHECK(far.score == 0.0);
    CHECK_FALSE(far.skin);
    // Cb on the dark/medium ramp midpoint, Cr in the core.
    auto mid = classify_fuzzy(72, 170, sys);
    CHECK(mid.score == doctest::Approx(0.5));
    CHECK(mid.skin);
}

TEST_CASE("fuzzy equals crisp outside the 10-unit shoulders, score 1 in the core") {
    FuzzySkinSystem sys = FuzzySkinSystem::defaults();
    CrispSkinRange r;
    for (int cb = 0; cb < 256; ++cb)
        for (int cr = 0; cr < 256; ++cr) {
            bool in_core = classify_crisp(cb, cr, r);
            bool in_shoulder_box = (cb >= 67 && cb <= 137 && cr >= 129 && cr <= 220);
            auto fd = classify_fuzzy(cb, cr, sys);
            if (in_core) {
                if (fd.score != 1.0) FAIL("core score != 1 at ", cb, ",", cr);
            } else if (!in_shoulder_box) {
                if (fd.score != 0.0) FAIL("outside-shoulder score != 0 at ", cb, ",", cr);
            }
            if (in_core && !fd.skin) FAIL("fuzzy rejects crisp-core pixel at ", cb, ",", cr);
        }
}

TEST_CASE("fuzzy score is monotone across the Cb shoulders") {
    FuzzySkinSystem sys = FuzzySkinSystem::defaults();
    const int cr = 170;
    double prev = -1;
    for (int cb = 67; cb <= 77; ++cb) {
        double s = classify_fuzzy(cb, cr, sys).score;
        CHECK(s >= prev);
        prev = s;
    }
    prev = 2;
    for (int cb = 127; cb <= 137; ++cb) {
        double s = classify_fuzzy(cb, cr, sys).score;
        CHECK(s <= prev);
        prev = s;
    }
}

TEST_CASE("skin_mask: crisp in-range and out-of-range images") {
    ImageYCbCr in(4, 3);
    for (std::size_t p = 0; p < 12; ++p) {
        in.data[p * 3] = 99;
        in.data[p * 3 + 1] = 100;
        in.data[p * 3 + 2] = 170;
    }
    SkinParams params;
    params.mode = SkinMode::Crisp;
    BinaryMask m = skin_mask(in, params);
    CHECK(m.count_true() == 12);

    for (std::size_t p = 0; p < 12; ++p) {
        in.data[p * 3 + 1] = 128;
        in.data[p * 3 + 2] = 128;
    }
    CHECK(skin_mask(in, params).count_true() == 0);

    ImageYCbCr one(1, 1);
    one.data = {50, 100, 170};
    CHECK(skin_mask(one, params).count_true() == 1);
}

TEST_CASE("fuzzy mask includes every crisp pixel on shoulder-chroma images") {
    ImageYCbCr img(71, 2);
    // Row of pixels sweeping the whole cb shoulder range at fixed cr.
    for (int x = 0; x <= 70; ++x) {
        int cb = 67 + x;  // 67..137
        for (int y = 0; y < 2; ++y) {
            std::size_t i = img.index(x, y);
            img.data[i] = 120;
            img.data[i + 1] = static_cast<std::uint8_t>(cb);
            img.data[i + 2] = static_cast<std::uint8_t>(y == 0 ? 139 : 170);
        }
    }
    SkinParams crisp;
    crisp.mode = SkinMode::Crisp;
    SkinParams fuzzy;
    fuzzy.mode = SkinMode::Fuzzy;
    BinaryMask mc = skin_mask(img, crisp);
    BinaryMask mf = skin_mask(img, fuzzy);
    std::size_t fuzzy_only = 0;
    for (std::size_t i = 0; i < mc.bits.size(); ++i) {
        if (mc.bits[i]) CHECK(mf.bits[i]);  // set inclusion
        if (mf.bits[i] && !mc.bits[i]) ++fuzzy_only;
    }
    CHECK(mf.count_true() >= mc.count_true());
    CHECK(fuzzy_only > 0);  // shoulders really do admit extra pixels
}

TEST_CASE("fuzzy parameters round-trip through JSON") {
    FuzzySkinSystem sys = FuzzySkinSystem::defaults();
    sys.tau = 0.4;
    sys.rules[0][1] = 0.25;
    FuzzySkinSystem back = FuzzySkinSystem::from_json(sys.to_json());
    CHECK(back.tau == 0.4);
    CHECK(back.rules[0][1] == 0.25);
    CHECK(back.cb_sets[1].b == 77);
    for (int cb = 0; cb < 256; cb += 3)
        for (int cr = 0; cr < 256; cr += 3)
            CHECK(classify_fuzzy(cb, cr, back).score == classify_fuzzy(cb, cr, sys).score);
}

}  // TEST_SUITE
