#include "screencode/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "screencode/png_io.hpp"
#include "screencode/util.hpp"

namespace screencode {

namespace fs = std::filesystem;

FrameSequence load_frame_sequence(const fs::path& source, double fps) {
    if (fps <= 0) throw std::invalid_argument("fps must be positive");
    if (!fs::exists(source)) {
        throw std::runtime_error("source not found: " + source.string());
    }
    if (!fs::is_directory(source)) {
        throw std::runtime_error("source is not a directory (configure a decoder command for "
                                 "video files): " +
                                 source.string());
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source)) {
        if (!entry.is_regular_file()) continue;
        if (util::to_lower(entry.path().extension().string()) == ".png") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        throw std::runtime_error("no frames found in " + source.string());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    FrameSequence seq;
    seq.fps = fps;
    seq.frames.reserve(files.size());
    for (size_t i = 0; i < files.size(); ++i) {
        Frame frame = read_png(files[i]);
        frame.index = static_cast<int>(i);
        frame.timestamp_s = static_cast<double>(i) / fps;
        if (i > 0 && (frame.width != seq.frames.front().width ||
                      frame.height != seq.frames.front().height)) {
            throw std::runtime_error(
                "frame dimensions differ from first frame (" +
                std::to_string(seq.frames.front().width) + "x" +
                std::to_string(seq.frames.front().height) + "): " + files[i].string());
        }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

FrameSequence decode_and_load(const fs::path& video,
                              double fps,
                              const std::string& decoder_command,
                              const fs::path& work_dir) {
    if (!fs::exists(video)) throw std::runtime_error("source not found: " + video.string());
    if (decoder_command.empty()) throw std::runtime_error("no decoder command configured");
    fs::create_directories(work_dir);

    std::string cmd = decoder_command;
    for (const auto& [key, value] :
         std::vector<std::pair<std::string, std::string>>{{"{input}", video.string()},
                                                          {"{outdir}", work_dir.string()},
                                                          {"{fps}", util::format_double(fps, 3)}}) {
        size_t pos = 0;
        while ((pos = cmd.find(key, pos)) != std::string::npos) {
            cmd.replace(pos, key.size(), value);
            pos += value.size();
        }
    }
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
        throw std::runtime_error("decoder command failed (exit " + std::to_string(rc) +
                                 "): " + cmd);
    }
    return load_frame_sequence(work_dir, fps);
}

std::vector<EvaluationUnit> segment_fixed(const FrameSequence& seq,
                                          double window_s,
                                          const std::string& unit_id_prefix) {
    if (window_s <= 0) throw std::invalid_argument("window_s must be positive");
    if (seq.empty()) throw std::invalid_argument("cannot segment an empty sequence");

    const size_t n = seq.size();
    const size_t window_frames =
        std::max<size_t>(1, static_cast<size_t>(std::llround(window_s * seq.fps)));

    std::vector<std::pair<size_t, size_t>> chunks;  // [begin, end)
    for (size_t begin = 0; begin < n; begin += window_frames) {
        chunks.emplace_back(begin, std::min(begin + window_frames, n));
    }
    // Tail rule: a final partial window shorter than half the window merges
    // into the previous unit.
    if (chunks.size() >= 2) {
        const size_t tail = chunks.back().second - chunks.back().first;
        if (tail * 2 < window_frames) {
            chunks[chunks.size() - 2].second = chunks.back().second;
            chunks.pop_back();
        }
    }

    std::vector<EvaluationUnit> units;
    units.reserve(chunks.size());
    for (size_t k = 0; k < chunks.size(); ++k) {
        EvaluationUnit unit;
        char id[32];
        std::snprintf(id, sizeof(id), "u%03zu", k);
        unit.unit_id = unit_id_prefix + id;
        unit.start_s = seq.frames[chunks[k].first].timestamp_s;
        unit.duration_s = static_cast<double>(chunks[k].second - chunks[k].first) / seq.fps;
        for (size_t i = chunks[k].first; i < chunks[k].second; ++i) {
            unit.frame_indices.push_back(static_cast<int>(i));
        }
        units.push_back(std::move(unit));
    }
    return units;
}

}  // namespace screencode
