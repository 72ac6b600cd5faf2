#pragma once

// Classical vision kernels backing the agent pipelines: frame-difference
// scoring, vertical content-shift detection, cursor tracking by frame
// differencing, motion-pattern classification, keyframe detection, and
// attention-box overlays.

#include <optional>
#include <string_view>
#include <vector>

#include "screencode/frame.hpp"

namespace screencode::vision {

struct VisionConfig {
    double keyframe_tau = 0.12;          // diff score above which a frame is a keyframe
    int cursor_diff_threshold = 25;      // 8-bit grayscale delta for the cursor mask
    int cursor_min_area_px = 8;          // candidate component area band
    int cursor_max_area_px = 900;
    int max_shift_px = 120;              // vertical shift search radius
    int min_shift_px = 4;                // below this a shift does not count as detected
    double min_shift_correlation = 0.9;
    double static_radius_px = 8.0;       // max displacement still classified Static
    double linear_direction_fraction = 0.7;
    double linear_backtrack_fraction = 0.1;
};

struct DiffScore {
    double value = 0.0;  // mean |gray(a)-gray(b)| / 255, in [0,1]
};

DiffScore frame_diff_score(const Frame& a, const Frame& b);

struct ShiftResult {
    int offset_px = 0;  // positive = content moved up between a and b
    double correlation = 0.0;
    bool detected = false;
};

// Row-profile normalized cross-correlation over offsets in
// [-max_shift, max_shift]; smaller offsets win ties. The search radius is
// clamped below height/2 so profiles always overlap by at least half.
ShiftResult detect_vertical_shift(const Frame& a, const Frame& b, const VisionConfig& cfg = {});

enum class MotionPattern { Static, LinearHorizontal, LinearVertical, Jump, None };
std::string_view to_string(MotionPattern p);

struct CursorPoint {
    int frame_index = 0;
    double x = 0.0;
    double y = 0.0;
};

struct CursorTrajectory {
    std::vector<CursorPoint> points;  // sorted by frame_index
    MotionPattern pattern = MotionPattern::None;
    double activity_ratio = 0.0;      // fraction of frame pairs with cursor motion
};

// Tracks the cursor across consecutive frame pairs: compensate a detected
// vertical shift (only when compensation shrinks the changed-pixel set — a
// profile match caused by the moving component itself is not a scroll),
// threshold the grayscale difference, extract 4-connected components within
// the area band, and follow the component nearest the previously tracked
// point (mask centroid seeds the first pair; ties break by smaller area,
// then top-left-most centroid). Each pair with a match contributes the
// matched component's centroid, in the coordinates of the pair's first
// frame.
CursorTrajectory detect_cursor(const FrameSequence& seq,
                               std::optional<std::pair<double, double>> prior = std::nullopt,
                               const VisionConfig& cfg = {});

// Same, restricted to frames [begin, end] inclusive.
CursorTrajectory detect_cursor_range(const FrameSequence& seq,
                                     int begin,
                                     int end,
                                     std::optional<std::pair<double, double>> prior = std::nullopt,
                                     const VisionConfig& cfg = {});

MotionPattern classify_motion_pattern(const std::vector<CursorPoint>& points,
                                      const VisionConfig& cfg = {});

// Frame 0 plus every frame whose diff score against its predecessor exceeds
// tau; strictly increasing.
std::vector<int> detect_keyframes(const FrameSequence& seq, const VisionConfig& cfg = {});

struct AttentionBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

// Copy of the frame with a 3 px red outline just inside the box; interior
// pixels are untouched.
Frame overlay_highlight(const Frame& frame, const AttentionBox& box);

}  // namespace screencode::vision
