#pragma once

// Hand-built frame fixtures for the vision oracles: uniform canvases, blobs,
// procedural row textures with exact translation. Kept independent of the
// synth module so tests can cross-check both.

#include <cstdint>
#include <random>
#include <vector>

#include "screencode/frame.hpp"
#include "screencode/util.hpp"

namespace fixtures {

inline screencode::Frame uniform_frame(int w, int h, int gray, int index = 0) {
    screencode::Frame f;
    f.index = index;
    f.timestamp_s = index;
    f.width = w;
    f.height = h;
    f.pixels.assign(static_cast<size_t>(w) * h * 3, static_cast<uint8_t>(gray));
    return f;
}

inline void set_pixel(screencode::Frame& f, int x, int y, int r, int g, int b) {
    const size_t at = (static_cast<size_t>(y) * f.width + x) * 3;
    f.pixels[at] = static_cast<uint8_t>(r);
    f.pixels[at + 1] = static_cast<uint8_t>(g);
    f.pixels[at + 2] = static_cast<uint8_t>(b);
}

inline void fill_rect(screencode::Frame& f, int x0, int y0, int w, int h, int gray) {
    for (int y = y0; y < y0 + h && y < f.height; ++y) {
        for (int x = x0; x < x0 + w && x < f.width; ++x) {
            if (x >= 0 && y >= 0) set_pixel(f, x, y, gray, gray, gray);
        }
    }
}

// Aperiodic per-row texture keyed by the absolute (scrolled) row index, so a
// vertical offset is an exact translation with fresh rows at the edge.
inline int texture_row_gray(uint64_t salt, int absolute_row, int lo = 60, int hi = 200) {
    const uint64_t h =
        screencode::util::mix_seed(salt, static_cast<uint64_t>(absolute_row + (1 << 20)));
    return lo + static_cast<int>(h % static_cast<uint64_t>(hi - lo + 1));
}

inline screencode::Frame textured_frame(int w, int h, uint64_t salt, int scroll_offset,
                                        int index = 0) {
    screencode::Frame f = uniform_frame(w, h, 0, index);
    for (int y = 0; y < h; ++y) {
        const int gray = texture_row_gray(salt, y + scroll_offset);
        for (int x = 0; x < w; ++x) set_pixel(f, x, y, gray, gray, gray);
    }
    return f;
}

constexpr int kBlobW = 12;
constexpr int kBlobH = 18;

inline void draw_blob(screencode::Frame& f, int x, int y, int gray = 16) {
    fill_rect(f, x, y, kBlobW, kBlobH, gray);
}

inline std::pair<double, double> blob_centroid(int x, int y) {
    return {x + (kBlobW - 1) / 2.0, y + (kBlobH - 1) / 2.0};
}

// Blob hopping along a path over a uniform background.
inline screencode::FrameSequence blob_sequence(const std::vector<std::pair<int, int>>& path,
                                               int w = 160, int h = 140, int bg = 230) {
    screencode::FrameSequence seq;
    seq.fps = 1.0;
    for (size_t i = 0; i < path.size(); ++i) {
        screencode::Frame f = uniform_frame(w, h, bg, static_cast<int>(i));
        draw_blob(f, path[i].first, path[i].second);
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

}  // namespace fixtures
