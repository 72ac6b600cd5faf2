#include "screencode/vision.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace screencode::vision {

namespace {

void require_same_dimensions(const Frame& a, const Frame& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("frame dimension mismatch: " + std::to_string(a.width) + "x" +
                                    std::to_string(a.height) + " vs " + std::to_string(b.width) +
                                    "x" + std::to_string(b.height));
    }
}

std::vector<double> row_profile(const Frame& f) {
    std::vector<double> profile(f.height, 0.0);
    for (int y = 0; y < f.height; ++y) {
        long sum = 0;
        for (int x = 0; x < f.width; ++x) sum += f.gray(x, y);
        profile[y] = static_cast<double>(sum) / f.width;
    }
    return profile;
}

// Pearson correlation; 0 for degenerate (constant) slices.
double correlation(const std::vector<double>& a, int a_off,
                   const std::vector<double>& b, int b_off, int len) {
    double mean_a = 0, mean_b = 0;
    for (int i = 0; i < len; ++i) {
        mean_a += a[a_off + i];
        mean_b += b[b_off + i];
    }
    mean_a /= len;
    mean_b /= len;
    double cov = 0, var_a = 0, var_b = 0;
    for (int i = 0; i < len; ++i) {
        const double da = a[a_off + i] - mean_a;
        const double db = b[b_off + i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a < 1e-12 || var_b < 1e-12) return 0.0;
    return cov / std::sqrt(var_a * var_b);
}

struct MaskComponent {
    long area = 0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
};

// 4-connected components of a binary mask stored row-major.
std::vector<MaskComponent> connected_components(const std::vector<uint8_t>& mask, int w, int h) {
    std::vector<MaskComponent> components;
    std::vector<uint8_t> seen(mask.size(), 0);
    std::deque<int> queue;
    for (int start = 0; start < w * h; ++start) {
        if (!mask[start] || seen[start]) continue;
        MaskComponent comp;
        double sum_x = 0, sum_y = 0;
        seen[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            const int at = queue.front();
            queue.pop_front();
            const int x = at % w;
            const int y = at / w;
            comp.area += 1;
            sum_x += x;
            sum_y += y;
            const int neighbors[4] = {at - 1, at + 1, at - w, at + w};
            const bool valid[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
            for (int k = 0; k < 4; ++k) {
                if (valid[k] && mask[neighbors[k]] && !seen[neighbors[k]]) {
                    seen[neighbors[k]] = 1;
                    queue.push_back(neighbors[k]);
                }
            }
        }
        comp.centroid_x = sum_x / comp.area;
        comp.centroid_y = sum_y / comp.area;
        components.push_back(comp);
    }
    return components;
}

}  // namespace

std::string_view to_string(MotionPattern p) {
    switch (p) {
        case MotionPattern::Static: return "Static";
        case MotionPattern::LinearHorizontal: return "LinearHorizontal";
        case MotionPattern::LinearVertical: return "LinearVertical";
        case MotionPattern::Jump: return "Jump";
        case MotionPattern::None: return "None";
    }
    return "?";
}

DiffScore frame_diff_score(const Frame& a, const Frame& b) {
    require_same_dimensions(a, b);
    long long total = 0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            total += std::abs(a.gray(x, y) - b.gray(x, y));
        }
    }
    const double n = static_cast<double>(a.width) * a.height;
    return DiffScore{static_cast<double>(total) / (255.0 * n)};
}

ShiftResult detect_vertical_shift(const Frame& a, const Frame& b, const VisionConfig& cfg) {
    require_same_dimensions(a, b);
    const int h = a.height;
    const int max_shift = std::min(cfg.max_shift_px, h / 2 - 1);
    if (max_shift < 0) return {};

    const auto prof_a = row_profile(a);
    const auto prof_b = row_profile(b);

    ShiftResult best;
    best.correlation = -2.0;
    // Smallest |offset| first, positive before negative, so ties resolve to
    // the least motion.
    for (int mag = 0; mag <= max_shift; ++mag) {
        for (int sign : {+1, -1}) {
            if (mag == 0 && sign < 0) continue;
            const int d = mag * sign;
            // content moved up by d: b[y] == a[y + d] over the overlap
            const int y_begin = std::max(0, -d);
            const int len = h - std::abs(d);
            const double corr = correlation(prof_a, y_begin + d, prof_b, y_begin, len);
            if (corr > best.correlation) {
                best.correlation = corr;
                best.offset_px = d;
            }
        }
    }
    best.detected = std::abs(best.offset_px) >= cfg.min_shift_px &&
                    best.correlation >= cfg.min_shift_correlation;
    return best;
}

MotionPattern classify_motion_pattern(const std::vector<CursorPoint>& points,
                                      const VisionConfig& cfg) {
    if (points.empty()) return MotionPattern::None;
    if (points.size() == 1) return MotionPattern::Static;

    double max_disp_sq = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        for (size_t j = i + 1; j < points.size(); ++j) {
            const double dx = points[j].x - points[i].x;
            const double dy = points[j].y - points[i].y;
            max_disp_sq = std::max(max_disp_sq, dx * dx + dy * dy);
        }
    }
    if (max_disp_sq < cfg.static_radius_px * cfg.static_radius_px) return MotionPattern::Static;

    double path_len = 0, len_x = 0, len_y = 0;
    for (size_t i = 1; i < points.size(); ++i) {
        const double dx = points[i].x - points[i - 1].x;
        const double dy = points[i].y - points[i - 1].y;
        path_len += std::hypot(dx, dy);
        len_x += std::abs(dx);
        len_y += std::abs(dy);
    }
    if (path_len <= 0) return MotionPattern::Static;

    const auto monotone_within_backtrack = [&](auto coord) {
        const double net = coord(points.back()) - coord(points.front());
        const double dir = net >= 0 ? 1.0 : -1.0;
        double backtrack = 0, total = 0;
        for (size_t i = 1; i < points.size(); ++i) {
            const double d = coord(points[i]) - coord(points[i - 1]);
            total += std::abs(d);
            if (dir * d < 0) backtrack += -dir * d;
        }
        return total <= 0 || backtrack <= cfg.linear_backtrack_fraction * total;
    };

    const bool horizontal_ok = len_x >= cfg.linear_direction_fraction * path_len &&
                               monotone_within_backtrack([](const CursorPoint& p) { return p.x; });
    const bool vertical_ok = len_y >= cfg.linear_direction_fraction * path_len &&
                             monotone_within_backtrack([](const CursorPoint& p) { return p.y; });
    if (horizontal_ok && (!vertical_ok || len_x >= len_y)) return MotionPattern::LinearHorizontal;
    if (vertical_ok) return MotionPattern::LinearVertical;
    return MotionPattern::Jump;
}

CursorTrajectory detect_cursor_range(const FrameSequence& seq,
                                     int begin,
                                     int end,
                                     std::optional<std::pair<double, double>> prior,
                                     const VisionConfig& cfg) {
    if (begin < 0 || end >= static_cast<int>(seq.size()) || end < begin) {
        throw std::invalid_argument("cursor range out of bounds");
    }
    if (end - begin + 1 < 2) {
        throw std::invalid_argument("cursor detection needs at least 2 frames");
    }

    const int w = seq.width();
    const int h = seq.height();
    CursorTrajectory traj;
    std::optional<std::pair<double, double>> previous = prior;

    const auto masked_count = [&](const Frame& a, const Frame& b, int d) {
        long count = 0;
        for (int y = std::max(0, -d); y < std::min(h, h - d); ++y) {
            for (int x = 0; x < w; ++x) {
                if (std::abs(a.gray(x, y + d) - b.gray(x, y)) > cfg.cursor_diff_threshold) ++count;
            }
        }
        return count;
    };

    for (int i = begin + 1; i <= end; ++i) {
        const Frame& a = seq.frames[i - 1];
        const Frame& b = seq.frames[i];
        const ShiftResult shift = detect_vertical_shift(a, b, cfg);
        // Compensation must shrink the changed-pixel set; a profile match
        // produced by the moving component itself (no real scroll) does not.
        int d = 0;
        if (shift.detected && shift.offset_px != 0 &&
            masked_count(a, b, shift.offset_px) < masked_count(a, b, 0)) {
            d = shift.offset_px;
        }

        // Difference over the shift-compensated overlap: b[y] vs a[y+d].
        const int y_begin = std::max(0, -d);
        const int y_end = std::min(h, h - d);
        std::vector<uint8_t> mask(static_cast<size_t>(w) * h, 0);
        long mask_count = 0;
        double mask_sum_x = 0, mask_sum_y = 0;
        for (int y = y_begin; y < y_end; ++y) {
            for (int x = 0; x < w; ++x) {
                if (std::abs(a.gray(x, y + d) - b.gray(x, y)) > cfg.cursor_diff_threshold) {
                    mask[static_cast<size_t>(y) * w + x] = 1;
                    ++mask_count;
                    mask_sum_x += x;
                    mask_sum_y += y;
                }
            }
        }
        if (mask_count == 0) continue;

        auto components = connected_components(mask, w, h);
        std::erase_if(components, [&](const MaskComponent& c) {
            return c.area < cfg.cursor_min_area_px || c.area > cfg.cursor_max_area_px;
        });
        if (components.empty()) continue;

        const std::pair<double, double> ref =
            previous ? *previous
                     : std::pair<double, double>{mask_sum_x / mask_count, mask_sum_y / mask_count};
        const MaskComponent* chosen = nullptr;
        double chosen_dist = 0;
        for (const auto& c : components) {
            const double dx = c.centroid_x - ref.first;
            const double dy = c.centroid_y - ref.second;
            const double dist = dx * dx + dy * dy;
            const bool better =
                !chosen || dist < chosen_dist ||
                (dist == chosen_dist &&
                 (c.area < chosen->area ||
                  (c.area == chosen->area && (c.centroid_y < chosen->centroid_y ||
                                              (c.centroid_y == chosen->centroid_y &&
                                               c.centroid_x < chosen->centroid_x)))));
            if (better) {
                chosen = &c;
                chosen_dist = dist;
            }
        }
        // The mask lives in the later frame's rows; the re-identified
        // component is the cursor at the earlier frame, so its centroid is
        // expressed in that frame's coordinates (+d under compensation).
        traj.points.push_back({i - 1, chosen->centroid_x, chosen->centroid_y + d});
        previous = {chosen->centroid_x, chosen->centroid_y + d};
    }

    traj.activity_ratio = static_cast<double>(traj.points.size()) / (end - begin);
    traj.pattern = classify_motion_pattern(traj.points, cfg);
    return traj;
}

CursorTrajectory detect_cursor(const FrameSequence& seq,
                               std::optional<std::pair<double, double>> prior,
                               const VisionConfig& cfg) {
    if (seq.size() < 2) throw std::invalid_argument("cursor detection needs at least 2 frames");
    return detect_cursor_range(seq, 0, static_cast<int>(seq.size()) - 1, prior, cfg);
}

std::vector<int> detect_keyframes(const FrameSequence& seq, const VisionConfig& cfg) {
    if (seq.empty()) throw std::invalid_argument("keyframe detection needs at least 1 frame");
    std::vector<int> keyframes{0};
    for (size_t i = 1; i < seq.size(); ++i) {
        if (frame_diff_score(seq.frames[i - 1], seq.frames[i]).value > cfg.keyframe_tau) {
            keyframes.push_back(static_cast<int>(i));
        }
    }
    return keyframes;
}

Frame overlay_highlight(const Frame& frame, const AttentionBox& box) {
    if (box.w <= 0 || box.h <= 0) {
        throw std::invalid_argument("attention box must have positive extent");
    }
    if (box.x < 0 || box.y < 0 || box.x + box.w > frame.width || box.y + box.h > frame.height) {
        throw std::invalid_argument("attention box out of frame bounds");
    }
    constexpr int kThickness = 3;
    Frame out = frame;
    for (int y = box.y; y < box.y + box.h; ++y) {
        for (int x = box.x; x < box.x + box.w; ++x) {
            const bool outline = x < box.x + kThickness || x >= box.x + box.w - kThickness ||
                                 y < box.y + kThickness || y >= box.y + box.h - kThickness;
            if (!outline) continue;
            const size_t at = (static_cast<size_t>(y) * frame.width + x) * 3;
            out.pixels[at] = 255;
            out.pixels[at + 1] = 0;
            out.pixels[at + 2] = 0;
        }
    }
    return out;
}

}  // namespace screencode::vision
