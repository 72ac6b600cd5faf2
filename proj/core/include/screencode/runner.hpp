#pragma once

// Batch orchestration: enumerate a corpus directory of videos, run the
// selected strategy on every 20-second unit, and write predictions, traces
// and a reproducibility manifest to the run directory.

#include <filesystem>
#include <string>
#include <vector>

#include "screencode/config.hpp"

namespace screencode {

struct UnitStatus {
    std::string unit_id;
    std::string status;  // "ok" | "flagged" | "error"
    std::string detail;
};

struct RunSummary {
    int videos = 0;
    int units = 0;
    int flagged = 0;
    int errors = 0;
    std::filesystem::path predictions_path;
    std::vector<UnitStatus> unit_statuses;
};

// Videos are the sorted subdirectories of input_dir holding PNG frames; a
// directory that itself holds PNGs counts as a single video.
std::vector<std::filesystem::path> list_videos(const std::filesystem::path& input_dir);

RunSummary run_corpus(const RunConfig& config);

}  // namespace screencode
