#include "screencode/runner.hpp"

#include <algorithm>
#include <memory>

#include "screencode/ingest.hpp"
#include "screencode/label_io.hpp"
#include "screencode/util.hpp"

namespace screencode {

namespace fs = std::filesystem;

std::vector<fs::path> list_videos(const fs::path& input_dir) {
    if (!fs::is_directory(input_dir)) {
        throw std::runtime_error("input directory not found: " + input_dir.string());
    }
    std::vector<fs::path> videos;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (!entry.is_directory()) continue;
        for (const auto& file : fs::directory_iterator(entry.path())) {
            if (file.is_regular_file() &&
                util::to_lower(file.path().extension().string()) == ".png") {
                videos.push_back(entry.path());
                break;
            }
        }
    }
    if (videos.empty()) {
        // the input directory itself may be a single video
        for (const auto& file : fs::directory_iterator(input_dir)) {
            if (file.is_regular_file() &&
                util::to_lower(file.path().extension().string()) == ".png") {
                videos.push_back(input_dir);
                break;
            }
        }
    }
    if (videos.empty()) {
        throw std::runtime_error("no videos (PNG directories) under " + input_dir.string());
    }
    std::sort(videos.begin(), videos.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return videos;
}

namespace {

struct VideoResult {
    std::string name;
    std::vector<LabelRecord> records;
    std::vector<LabelRecord> raw_records;  // workflow only
    std::vector<UnitStatus> statuses;
    nlohmann::json traces = nlohmann::json::array();
};

VideoResult process_video(const fs::path& video_dir,
                          const RunConfig& config,
                          vlm::VlmProvider& provider,
                          const PromptLibrary& prompts) {
    VideoResult result;
    result.name = video_dir.filename().string();
    const FrameSequence seq = load_frame_sequence(video_dir, config.fps);
    const auto units = segment_fixed(seq, config.window_s, result.name + "_");

    const auto note = [&](const LabelRecord& record, const std::string& error) {
        UnitStatus status{record.unit_id, "ok", ""};
        if (!error.empty()) {
            status.status = "error";
            status.detail = error;
        } else if (record.flagged) {
            status.status = "flagged";
        }
        result.statuses.push_back(std::move(status));
    };

    switch (config.mode) {
        case RunConfig::Mode::Single: {
            const auto exemplars = baseline::default_exemplars();
            const auto baseline_cfg = config.baseline_config();
            for (const auto& unit : units) {
                LabelRecord record;
                std::string error;
                try {
                    record = baseline::few_shot_classify(unit, seq, provider, prompts,
                                                         baseline_cfg, exemplars);
                } catch (const vlm::VlmError& e) {
                    record.unit_id = unit.unit_id;
                    record.flagged = true;
                    error = e.what();
                }
                note(record, error);
                result.records.push_back(std::move(record));
            }
            break;
        }
        case RunConfig::Mode::Workflow: {
            const auto wf = workflow::run_workflow(seq, units, provider, prompts,
                                                   config.workflow_config(), result.name);
            result.records = wf.records;
            result.raw_records = wf.raw_records;
            result.traces.push_back(wf.trace);
            for (const auto& record : wf.records) note(record, "");
            break;
        }
        case RunConfig::Mode::React: {
            const auto react_cfg = config.react_config();
            for (const auto& unit : units) {
                LabelRecord record;
                std::string error;
                nlohmann::json trace;
                try {
                    auto outcome = react::run_react(unit, seq, provider, prompts, react_cfg);
                    record = std::move(outcome.record);
                    trace = react::state_to_json(outcome.state);
                } catch (const std::exception& e) {
                    record.unit_id = unit.unit_id;
                    record.flagged = true;
                    error = e.what();
                    trace = {{"unit_id", unit.unit_id}, {"error", error}};
                }
                note(record, error);
                result.traces.push_back(std::move(trace));
                result.records.push_back(std::move(record));
            }
            break;
        }
    }
    return result;
}

}  // namespace

RunSummary run_corpus(const RunConfig& config) {
    config.validate();
    const auto videos = list_videos(config.input_dir);
    const PromptLibrary prompts = PromptLibrary::load(config.prompt_dir);

    std::unique_ptr<vlm::VlmProvider> provider;
    if (config.mock) {
        provider = std::make_unique<vlm::MockVlmProvider>(vlm::MockScript::load(config.mock_script));
    } else {
        provider = std::make_unique<vlm::HttpVlmProvider>(config.provider_config());
    }

    std::vector<VideoResult> results(videos.size());
    util::parallel_for(videos.size(), config.jobs, [&](size_t v) {
        results[v] = process_video(videos[v], config, *provider, prompts);
    });

    fs::create_directories(config.output_dir);
    const fs::path traces_dir = config.output_dir / "traces";
    fs::create_directories(traces_dir);

    RunSummary summary;
    summary.videos = static_cast<int>(videos.size());
    std::vector<LabelRecord> all_records, all_raw;
    for (const auto& result : results) {
        all_records.insert(all_records.end(), result.records.begin(), result.records.end());
        all_raw.insert(all_raw.end(), result.raw_records.begin(), result.raw_records.end());
        for (const auto& status : result.statuses) {
            ++summary.units;
            if (status.status == "flagged") ++summary.flagged;
            if (status.status == "error") ++summary.errors;
            summary.unit_statuses.push_back(status);
        }
        if (!result.traces.empty()) {
            const char* kind = config.mode == RunConfig::Mode::Workflow ? "workflow" : "react";
            util::write_text_file(traces_dir / (result.name + "_" + kind + ".json"),
                                  result.traces.dump(2) + "\n");
        }
    }

    summary.predictions_path = config.output_dir / "predictions.tsv";
    write_label_file(summary.predictions_path, all_records);
    if (config.mode == RunConfig::Mode::Workflow) {
        write_label_file(config.output_dir / "predictions_raw.tsv", all_raw);
    }

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config.to_json();
    manifest["videos"] = nlohmann::json::array();
    for (const auto& video : videos) manifest["videos"].push_back(video.filename().string());
    manifest["units"] = nlohmann::json::array();
    for (const auto& status : summary.unit_statuses) {
        nlohmann::json u{{"unit_id", status.unit_id}, {"status", status.status}};
        if (!status.detail.empty()) u["detail"] = status.detail;
        manifest["units"].push_back(std::move(u));
    }
    manifest["summary"] = {{"videos", summary.videos},
                           {"units", summary.units},
                           {"flagged", summary.flagged},
                           {"errors", summary.errors}};
    util::write_text_file(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
    return summary;
}

}  // namespace screencode
