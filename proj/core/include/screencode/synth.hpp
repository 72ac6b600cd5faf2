#pragma once

// Seeded generator of synthetic screen-recording fixtures: frame sequences,
// gold labels per 20-second unit, and cooperative mock-provider scripts.
// Every output is a pure function of the spec and its seed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screencode/frame.hpp"
#include "screencode/taxonomy.hpp"
#include "screencode/vlm.hpp"

namespace screencode::synth {

struct BehaviorSpan {
    Scene scene = Scene::Web;
    Action action = Action::SearchingInternet;
    double duration_s = 20.0;
};

struct VideoSpec {
    std::string name;
    std::vector<BehaviorSpan> spans;
};

struct CorpusSpec {
    uint64_t seed = 1;
    int frame_width = 320;
    int frame_height = 240;
    double fps = 1.0;
    double window_s = 20.0;
    bool fixture_tagging = true;
    // Share of scene segments whose scripted provider reply gains a
    // scene-incompatible action, for validation-effectiveness experiments.
    double inject_incompatible_fraction = 0.0;
    std::vector<VideoSpec> videos;
};

CorpusSpec corpus_spec_from_json(const nlohmann::json& j);
nlohmann::json corpus_spec_to_json(const CorpusSpec& spec);

// Random spec helper: 20 s spans, adjacent spans always change scene, every
// span's action compatible with its scene.
CorpusSpec make_random_spec(uint64_t seed, int n_videos, double video_length_s,
                            int width = 320, int height = 240);

// One planned span: frame range, scripted cursor path, content-change
// schedule.
struct SpanPlan {
    Scene scene;
    Action action;
    int first_frame = 0;
    int last_frame = 0;  // inclusive
    int scroll_step = 0;
    std::vector<int> burst_frames;  // absolute frame indices with content writes
    std::vector<std::optional<std::pair<int, int>>> cursor;  // glyph top-left per span frame
};

struct VideoPlan {
    std::string name;
    int width = 0;
    int height = 0;
    double fps = 1.0;
    int frame_count = 0;
    std::vector<SpanPlan> spans;
    std::vector<int> scene_change_frames;              // {0} plus scene-change starts
    std::vector<std::pair<int, int>> segments;         // maximal same-scene frame runs
    std::vector<std::optional<std::pair<double, double>>> cursor_truth;  // centroid per frame
};

VideoPlan plan_video(const CorpusSpec& spec, size_t video_index);
FrameSequence render_video(const VideoPlan& plan);

std::vector<LabelRecord> gold_for_video(const CorpusSpec& spec, const VideoPlan& plan);

vlm::MockScript build_mock_script(const CorpusSpec& spec, const std::vector<VideoPlan>& plans);

struct GeneratedCorpus {
    std::vector<VideoPlan> plans;
    std::vector<LabelRecord> gold;
    vlm::MockScript script;
};

// In-memory generation (plans, gold, script) without touching the disk.
GeneratedCorpus build_corpus(const CorpusSpec& spec);

// Writes <out>/<video>/frame_NNNNNN.png, gold.tsv, mock_script.tsv and
// corpus_manifest.json.
GeneratedCorpus generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

// Cursor glyph geometry (shared with tests that check tracking tolerances).
inline constexpr int kCursorGlyphWidth = 12;
inline constexpr int kCursorGlyphHeight = 18;
inline constexpr int kCursorGlyphGray = 16;

}  // namespace screencode::synth
