#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "screencode/vision.hpp"

using namespace screencode;
using namespace screencode::vision;
using fixtures::uniform_frame;

TEST_CASE("frame_diff_score") {
    SUBCASE("identical frames score zero") {
        const Frame a = uniform_frame(16, 16, 120);
        CHECK(frame_diff_score(a, a).value == 0.0);
    }
    SUBCASE("black vs white is maximal") {
        const Frame a = uniform_frame(16, 16, 0);
        const Frame b = uniform_frame(16, 16, 255);
        CHECK(frame_diff_score(a, b).value == doctest::Approx(1.0));
    }
    SUBCASE("2x1 frames, grays (0,0) vs (51,0), hand arithmetic") {
        Frame a = uniform_frame(2, 1, 0);
        Frame b = uniform_frame(2, 1, 0);
        fixtures::set_pixel(b, 0, 0, 51, 51, 51);
        CHECK(frame_diff_score(a, b).value == doctest::Approx(0.1));  // (51/255)/2
    }
    SUBCASE("symmetry on random frames") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 20; ++t) {
            Frame a = uniform_frame(9, 7, 0);
            Frame b = uniform_frame(9, 7, 0);
            for (auto* f : {&a, &b}) {
                for (auto& px : f->pixels) px = static_cast<uint8_t>(rng() % 256);
            }
            CHECK(frame_diff_score(a, b).value == frame_diff_score(b, a).value);
        }
    }
    SUBCASE("grayscale uses the truncated channel mean") {
        Frame a = uniform_frame(1, 1, 0);
        Frame b = uniform_frame(1, 1, 0);
        fixtures::set_pixel(a, 0, 0, 0, 1, 1);  // gray = 0
        fixtures::set_pixel(b, 0, 0, 1, 1, 1);  // gray = 1
        CHECK(frame_diff_score(a, b).value == doctest::Approx(1.0 / 255.0));
    }
    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(frame_diff_score(uniform_frame(2, 2, 0), uniform_frame(3, 2, 0)),
                        std::invalid_argument);
    }
}

TEST_CASE("detect_vertical_shift recovers synthetic offsets") {
    SUBCASE("10 px upward shift on a textured image") {
        const Frame a = fixtures::textured_frame(100, 120, 42, 0);
        const Frame b = fixtures::textured_frame(100, 120, 42, 10);  // content moved up 10
        const auto result = detect_vertical_shift(a, b);
        CHECK(result.offset_px == 10);
        CHECK(result.detected);
        CHECK(result.correlation == doctest::Approx(1.0));
    }
    SUBCASE("identical frames: zero offset, below threshold") {
        const Frame a = fixtures::textured_frame(100, 120, 42, 0);
        const auto result = detect_vertical_shift(a, a);
        CHECK(result.offset_px == 0);
        CHECK(!result.detected);
    }
    SUBCASE("uncorrelated noise is not a shift") {
        const Frame a = fixtures::textured_frame(100, 120, 1, 0);
        const Frame b = fixtures::textured_frame(100, 120, 2, 0);  // different texture stream
        // oracle: exhaustive scan of every offset on the row profiles
        const auto result = detect_vertical_shift(a, b);
        CHECK(!result.detected);
    }
    SUBCASE("downward shifts carry negative sign") {
        const Frame a = fixtures::textured_frame(100, 120, 42, 20);
        const Frame b = fixtures::textured_frame(100, 120, 42, 13);  // content moved down 7
        const auto result = detect_vertical_shift(a, b);
        CHECK(result.offset_px == -7);
        CHECK(result.detected);
    }
    SUBCASE("constant frames have zero correlation, not NaN") {
        const Frame a = uniform_frame(50, 60, 100);
        const auto result = detect_vertical_shift(a, a);
        CHECK(result.correlation == 0.0);
        CHECK(!result.detected);
    }
}

TEST_CASE("detect_cursor on a moving blob") {
    SUBCASE("diagonal march (10,10) to (90,90)") {
        std::vector<std::pair<int, int>> path{{10, 10}, {30, 30}, {50, 50}, {70, 70}, {90, 90}};
        const auto seq = fixtures::blob_sequence(path);
        const auto traj = detect_cursor(seq);
        // each pair re-identifies the component at the pair's first frame
        REQUIRE(traj.points.size() == 4);
        for (size_t i = 0; i < traj.points.size(); ++i) {
            const auto truth = fixtures::blob_centroid(path[i].first, path[i].second);
            CHECK(traj.points[i].frame_index == static_cast<int>(i));
            CHECK(std::abs(traj.points[i].x - truth.first) <= 1.0);
            CHECK(std::abs(traj.points[i].y - truth.second) <= 1.0);
        }
        CHECK(traj.activity_ratio == doctest::Approx(1.0));
    }
    SUBCASE("identical frames produce no points and pattern None") {
        const auto seq = fixtures::blob_sequence({{40, 40}, {40, 40}, {40, 40}, {40, 40}, {40, 40}});
        const auto traj = detect_cursor(seq);
        CHECK(traj.points.empty());
        CHECK(traj.pattern == MotionPattern::None);
        CHECK(traj.activity_ratio == 0.0);
    }
    SUBCASE("blob atop a scrolling background is recovered after compensation") {
        FrameSequence seq;
        seq.fps = 1.0;
        std::vector<std::pair<int, int>> path{{20, 30}, {50, 52}, {80, 74}, {110, 96}, {140, 118}};
        for (size_t i = 0; i < path.size(); ++i) {
            Frame f = fixtures::textured_frame(200, 180, 99, static_cast<int>(i) * 10,
                                               static_cast<int>(i));
            fixtures::draw_blob(f, path[i].first, path[i].second);
            seq.frames.push_back(std::move(f));
        }
        const auto traj = detect_cursor(seq);
        REQUIRE(traj.points.size() >= 4);  // >= 95% of moving pairs localized
        double err = 0;
        for (const auto& p : traj.points) {
            const auto truth =
                fixtures::blob_centroid(path[p.frame_index].first, path[p.frame_index].second);
            err += std::hypot(p.x - truth.first, p.y - truth.second);
        }
        CHECK(err / traj.points.size() <= 3.0);
    }
    SUBCASE("too-short sequences throw") {
        const auto seq = fixtures::blob_sequence({{10, 10}});
        CHECK_THROWS_AS(detect_cursor(seq), std::invalid_argument);
    }
}

TEST_CASE("classify_motion_pattern") {
    const auto pts = [](std::initializer_list<std::pair<double, double>> list) {
        std::vector<CursorPoint> out;
        int i = 0;
        for (const auto& [x, y] : list) out.push_back({i++, x, y});
        return out;
    };
    CHECK(classify_motion_pattern({}) == MotionPattern::None);
    CHECK(classify_motion_pattern(pts({{50, 50}, {50, 50}, {50, 50}})) == MotionPattern::Static);
    CHECK(classify_motion_pattern(pts({{10, 100}, {60, 101}, {110, 99}, {160, 100}})) ==
          MotionPattern::LinearHorizontal);
    CHECK(classify_motion_pattern(pts({{100, 10}, {101, 60}, {99, 110}, {100, 160}})) ==
          MotionPattern::LinearVertical);
    CHECK(classify_motion_pattern(pts({{10, 10}, {300, 250}, {20, 400}})) == MotionPattern::Jump);
    // single localized point has no displacement: the trajectory invariant
    // (None iff no points) makes it Static
    CHECK(classify_motion_pattern(pts({{5, 5}})) == MotionPattern::Static);
    // jitter below the static radius
    CHECK(classify_motion_pattern(pts({{50, 50}, {53, 52}, {48, 49}, {51, 47}})) ==
          MotionPattern::Static);
}

TEST_CASE("detect_keyframes") {
    SUBCASE("identical frames yield only frame 0") {
        FrameSequence seq;
        for (int i = 0; i < 10; ++i) seq.frames.push_back(uniform_frame(8, 8, 33, i));
        CHECK(detect_keyframes(seq) == std::vector<int>{0});
    }
    SUBCASE("white,white,black,black,white with tau 0.12") {
        FrameSequence seq;
        for (int gray : {255, 255, 0, 0, 255}) {
            seq.frames.push_back(uniform_frame(8, 8, gray, static_cast<int>(seq.size())));
        }
        CHECK(detect_keyframes(seq) == std::vector<int>{0, 2, 4});
    }
    SUBCASE("unreachable threshold keeps only frame 0") {
        FrameSequence seq;
        for (int gray : {255, 0, 255, 0}) {
            seq.frames.push_back(uniform_frame(8, 8, gray, static_cast<int>(seq.size())));
        }
        VisionConfig cfg;
        cfg.keyframe_tau = 1.0;
        CHECK(detect_keyframes(seq, cfg) == std::vector<int>{0});
    }
    SUBCASE("strictly increasing and always contains 0") {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 10; ++t) {
            FrameSequence seq;
            for (int i = 0; i < 30; ++i) {
                seq.frames.push_back(uniform_frame(8, 8, static_cast<int>(rng() % 256), i));
            }
            const auto keyframes = detect_keyframes(seq);
            REQUIRE(!keyframes.empty());
            CHECK(keyframes[0] == 0);
            for (size_t i = 1; i < keyframes.size(); ++i) CHECK(keyframes[i] > keyframes[i - 1]);
        }
    }
    SUBCASE("empty sequence throws") {
        CHECK_THROWS_AS(detect_keyframes(FrameSequence{}), std::invalid_argument);
    }
}

TEST_CASE("overlay_highlight") {
    SUBCASE("changed pixels are exactly the 3 px outline") {
        const Frame frame = uniform_frame(100, 100, 200);
        const AttentionBox box{10, 10, 20, 20};
        const Frame out = overlay_highlight(frame, box);

        std::set<std::pair<int, int>> changed;
        for (int y = 0; y < 100; ++y) {
            for (int x = 0; x < 100; ++x) {
                const size_t at = (static_cast<size_t>(y) * 100 + x) * 3;
                if (out.pixels[at] != frame.pixels[at] ||
                    out.pixels[at + 1] != frame.pixels[at + 1] ||
                    out.pixels[at + 2] != frame.pixels[at + 2]) {
                    changed.insert({x, y});
                }
            }
        }
        // analytic outline: box minus its 3 px inset
        std::set<std::pair<int, int>> outline;
        for (int y = 10; y < 30; ++y) {
            for (int x = 10; x < 30; ++x) {
                if (x < 13 || x >= 27 || y < 13 || y >= 27) outline.insert({x, y});
            }
        }
        CHECK(changed == outline);
        CHECK(changed.size() == 20 * 20 - 14 * 14);
    }
    SUBCASE("interior pixels are byte-identical for a near-full-frame box") {
        Frame frame = uniform_frame(60, 60, 90);
        std::mt19937_64 rng(3);
        for (auto& px : frame.pixels) px = static_cast<uint8_t>(rng() % 200);
        const Frame out = overlay_highlight(frame, {2, 2, 56, 56});
        for (int y = 5; y < 55; ++y) {
            for (int x = 5; x < 55; ++x) {
                const size_t at = (static_cast<size_t>(y) * 60 + x) * 3;
                REQUIRE(out.pixels[at] == frame.pixels[at]);
                REQUIRE(out.pixels[at + 1] == frame.pixels[at + 1]);
                REQUIRE(out.pixels[at + 2] == frame.pixels[at + 2]);
            }
        }
    }
    SUBCASE("degenerate and out-of-bounds boxes throw") {
        const Frame frame = uniform_frame(50, 50, 10);
        CHECK_THROWS_AS(overlay_highlight(frame, {0, 0, 0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(overlay_highlight(frame, {40, 40, 20, 20}), std::invalid_argument);
        CHECK_THROWS_AS(overlay_highlight(frame, {-1, 0, 10, 10}), std::invalid_argument);
    }
}

TEST_CASE("shift recovery within one pixel across the supported range") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 30; ++t) {
        const int true_shift = 4 + static_cast<int>(rng() % 37);  // [4, 40]
        const int sign = (rng() % 2) ? 1 : -1;
        const uint64_t salt = rng();
        const Frame a = fixtures::textured_frame(120, 160, salt, 100);
        const Frame b = fixtures::textured_frame(120, 160, salt, 100 + sign * true_shift);
        const auto result = detect_vertical_shift(a, b);
        REQUIRE(result.detected);
        CHECK(std::abs(result.offset_px - sign * true_shift) <= 1);
        CHECK((result.offset_px > 0) == (sign > 0));
    }
}
