#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "screencode/frame.hpp"
#include "screencode/taxonomy.hpp"

namespace screencode {

// Loads a directory of lexicographically ordered PNG frames. Timestamps are
// index/fps; all frames must share dimensions (the offending file is named
// otherwise). 1 fps sampling happens upstream; the declared fps is trusted.
FrameSequence load_frame_sequence(const std::filesystem::path& source, double fps);

// Runs an external decoder (command template with {input}, {outdir} and
// {fps} placeholders) to turn a video file into a PNG directory, then loads
// that directory.
FrameSequence decode_and_load(const std::filesystem::path& video,
                              double fps,
                              const std::string& decoder_command,
                              const std::filesystem::path& work_dir);

// Cuts the sequence into consecutive non-overlapping windows of window_s
// seconds. A trailing partial window is kept when it spans at least half of
// window_s and merged into the previous unit otherwise; every frame lands in
// exactly one unit. Unit ids are "<prefix>u000", "<prefix>u001", ...
std::vector<EvaluationUnit> segment_fixed(const FrameSequence& seq,
                                          double window_s = 20.0,
                                          const std::string& unit_id_prefix = "");

}  // namespace screencode
