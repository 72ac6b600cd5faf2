#pragma once

#include <cstdint>
#include <vector>

namespace screencode {

// One raster frame, row-major 8-bit RGB. Immutable once built.
struct Frame {
    int index = 0;
    double timestamp_s = 0.0;
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // width * height * 3 bytes

    // Unweighted channel mean, truncated. The grayscale basis for every
    // frame-differencing kernel.
    int gray(int x, int y) const {
        const size_t at = (static_cast<size_t>(y) * width + x) * 3;
        return (pixels[at] + pixels[at + 1] + pixels[at + 2]) / 3;
    }
};

struct FrameSequence {
    std::vector<Frame> frames;
    double fps = 1.0;

    bool empty() const { return frames.empty(); }
    size_t size() const { return frames.size(); }
    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int height() const { return frames.empty() ? 0 : frames.front().height; }
};

}  // namespace screencode
