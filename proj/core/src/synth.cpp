#include "screencode/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "screencode/ingest.hpp"
#include "screencode/label_io.hpp"
#include "screencode/png_io.hpp"
#include "screencode/prompts.hpp"
#include "screencode/util.hpp"

namespace screencode::synth {

namespace {

// Deterministic splitmix-style stream; avoids distribution portability
// concerns entirely.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
    double unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
};

// --- scene template geometry --------------------------------------------

// Per-row content texture, x-independent so scrolled content translates
// exactly. Band limits keep |content - chrome| <= 24 at region boundaries
// (below the cursor mask threshold).
int content_gray(Scene scene, int content_y) {
    const uint64_t h = util::mix_seed(0xC0FFEEULL + static_cast<uint64_t>(scene) * 977,
                                      static_cast<uint64_t>(content_y + 1'000'000));
    switch (scene) {
        case Scene::GAI: return 78 + static_cast<int>(h % 31);    // [78, 108]
        case Scene::Web: return 141 + static_cast<int>(h % 45);   // [141, 185]
        case Scene::Docs: return 216 + static_cast<int>(h % 37);  // [216, 252]
    }
    return 128;
}

struct Layout {
    int w, h;
    // Chrome gray at a screen position, or -1 for scrollable content.
    int chrome_gray(Scene scene, int x, int y) const {
        switch (scene) {
            case Scene::GAI:
                if (x < 56) return 84;                     // sidebar
                if (y >= 212 && y < 232) {
                    return (x >= 64 && x < w - 16) ? 150 : 84;  // input box band
                }
                if (y >= 232) return 84;
                return -1;
            case Scene::Web:
                if (y < 28) {
                    return (x >= 64 && x < 256 && y >= 8 && y < 22) ? 173 : 165;  // search box
                }
                return -1;
            case Scene::Docs:
                if (y < 20) return 228;                    // toolbar
                if (x < 12 || x >= w - 12) return 200;     // page margins
                return -1;
        }
        return -1;
    }
};

// A rectangle written onto a scene canvas: either anchored to content
// coordinates (scrolls with the page) or to the fixed chrome.
struct Drawing {
    int x = 0, y = 0, w = 0, h = 0;  // y is a content coordinate unless in_chrome
    int gray = 0;
    bool in_chrome = false;
};

struct SceneCanvas {
    int scroll = 0;
    int write_count = 0;
    std::vector<Drawing> drawings;

    void put(const Drawing& d) {
        // A write to an existing rectangle replaces it.
        for (auto& existing : drawings) {
            if (existing.x == d.x && existing.y == d.y && existing.w == d.w &&
                existing.h == d.h && existing.in_chrome == d.in_chrome) {
                existing.gray = d.gray;
                return;
            }
        }
        drawings.push_back(d);
    }
};

void fill_rect(Frame& frame, int x0, int y0, int w, int h, int gray) {
    const int x1 = std::min(frame.width, x0 + w);
    const int y1 = std::min(frame.height, y0 + h);
    for (int y = std::max(0, y0); y < y1; ++y) {
        for (int x = std::max(0, x0); x < x1; ++x) {
            const size_t at = (static_cast<size_t>(y) * frame.width + x) * 3;
            frame.pixels[at] = frame.pixels[at + 1] = frame.pixels[at + 2] =
                static_cast<uint8_t>(gray);
        }
    }
}

// Screen band of scrollable content rows for a scene.
std::pair<int, int> content_rows(Scene scene, int h) {
    switch (scene) {
        case Scene::GAI: return {0, 212};
        case Scene::Web: return {28, h};
        case Scene::Docs: return {20, h};
    }
    return {0, h};
}

// --- action choreography ---------------------------------------------------

bool uses_typing_slots(Action a) {
    return a == Action::SearchingInternet || a == Action::PromptingGAI ||
           a == Action::GroupDocumentCoEditing || a == Action::TickingAnswers;
}

int burst_stride(Action a) { return a == Action::TickingAnswers ? 3 : 2; }

// Slot rectangle for the k-th content write of an action. Chrome-anchored
// slots (search box, GAI input) rewrite one spot; content-anchored slots
// advance like lines of text, cycling over a fixed window.
// Gray cycles are sized so every write changes enough mass to clear the
// localized-diff floor against any background row of its scene.
Drawing slot_drawing(Scene scene, Action action, int slot_index, int write_count, int scroll) {
    Drawing d;
    switch (action) {
        case Action::SearchingInternet:
            d = {70, 10, 150, 10, 0, true};
            d.gray = (write_count % 2) ? 240 : 60;
            return d;
        case Action::PromptingGAI:
            d = {70, 214, 160, 8, 0, true};
            d.gray = (write_count % 2) ? 200 : 30;
            return d;
        case Action::GroupDocumentCoEditing:
            d = {40, scroll + 34 + (slot_index % 14) * 12, 160, 8, 0, false};
            d.gray = (write_count % 2) ? 130 : 40;
            return d;
        case Action::TickingAnswers:
            d = {40, scroll + 44 + (slot_index % 5) * 22, 180, 10, 0, false};
            d.gray = (write_count % 2) ? 60 : 160;
            return d;
        default:
            break;
    }
    (void)scene;
    return d;
}

constexpr int kSweepStep = 15;
constexpr int kSweepStartX = 20;

int sweep_row(Scene scene) {
    switch (scene) {
        case Scene::GAI: return 60;
        case Scene::Web: return 70;
        case Scene::Docs: return 60;
    }
    return 60;
}

std::pair<int, int> parked_cursor(Scene scene) {
    switch (scene) {
        case Scene::GAI: return {264, 180};
        case Scene::Web: return {272, 200};
        case Scene::Docs: return {272, 196};
    }
    return {272, 196};
}

}  // namespace

// ---------------------------------------------------------------------------
// Spec handling

CorpusSpec corpus_spec_from_json(const nlohmann::json& j) {
    CorpusSpec spec;
    spec.seed = j.value("seed", 1ULL);
    spec.frame_width = j.value("frame_width", 320);
    spec.frame_height = j.value("frame_height", 240);
    spec.fps = j.value("fps", 1.0);
    spec.window_s = j.value("window_s", 20.0);
    spec.fixture_tagging = j.value("fixture_tagging", true);
    spec.inject_incompatible_fraction = j.value("inject_incompatible_fraction", 0.0);

    if (j.contains("videos")) {
        for (const auto& vj : j.at("videos")) {
            VideoSpec video;
            video.name = vj.at("name").get<std::string>();
            for (const auto& sj : vj.at("spans")) {
                BehaviorSpan span;
                const auto scene = scene_from_string(sj.at("scene").get<std::string>());
                const auto action = action_from_string(sj.at("action").get<std::string>());
                if (!scene) throw std::runtime_error("unknown scene in spec");
                if (!action) throw std::runtime_error("unknown action in spec");
                span.scene = *scene;
                span.action = *action;
                span.duration_s = sj.value("duration_s", 20.0);
                video.spans.push_back(span);
            }
            spec.videos.push_back(std::move(video));
        }
    } else if (j.contains("random")) {
        const auto& r = j.at("random");
        const CorpusSpec random_spec =
            make_random_spec(spec.seed, r.value("n_videos", 1), r.value("video_length_s", 60.0),
                             spec.frame_width, spec.frame_height);
        spec.videos = random_spec.videos;
    } else {
        throw std::runtime_error("corpus spec needs either \"videos\" or \"random\"");
    }
    return spec;
}

nlohmann::json corpus_spec_to_json(const CorpusSpec& spec) {
    nlohmann::json j;
    j["seed"] = spec.seed;
    j["frame_width"] = spec.frame_width;
    j["frame_height"] = spec.frame_height;
    j["fps"] = spec.fps;
    j["window_s"] = spec.window_s;
    j["fixture_tagging"] = spec.fixture_tagging;
    j["inject_incompatible_fraction"] = spec.inject_incompatible_fraction;
    j["videos"] = nlohmann::json::array();
    for (const auto& video : spec.videos) {
        nlohmann::json vj;
        vj["name"] = video.name;
        vj["spans"] = nlohmann::json::array();
        for (const auto& span : video.spans) {
            vj["spans"].push_back({{"scene", std::string(to_string(span.scene))},
                                   {"action", std::string(to_string(span.action))},
                                   {"duration_s", span.duration_s}});
        }
        j["videos"].push_back(std::move(vj));
    }
    return j;
}

CorpusSpec make_random_spec(uint64_t seed, int n_videos, double video_length_s, int width,
                            int height) {
    // Scrolling stays out of the GAI scene: its fixed input band sits inside
    // the scroll region and would blur the shift evidence.
    static const std::map<Scene, std::vector<Action>> catalog{
        {Scene::Web,
         {Action::SearchingInternet, Action::ReadingWithHighlighting, Action::CopyAndPaste,
          Action::ReadingWithScrolling, Action::Freezing}},
        {Scene::Docs,
         {Action::GroupDocumentCoEditing, Action::TickingAnswers,
          Action::ReadingWithHighlighting, Action::CopyAndPaste, Action::ReadingWithScrolling,
          Action::Freezing}},
        {Scene::GAI,
         {Action::PromptingGAI, Action::ReadingWithHighlighting, Action::CopyAndPaste,
          Action::Freezing}},
    };

    CorpusSpec spec;
    spec.seed = seed;
    spec.frame_width = width;
    spec.frame_height = height;
    Rng rng(util::mix_seed(seed, 0x5eedULL));
    for (int v = 0; v < n_videos; ++v) {
        VideoSpec video;
        char name[32];
        std::snprintf(name, sizeof(name), "vid%03d", v);
        video.name = name;
        int remaining = static_cast<int>(std::llround(video_length_s));
        std::optional<Scene> previous;
        while (remaining > 0) {
            const int span_s = std::min(remaining, 20);
            std::vector<Scene> choices;
            for (Scene s : kAllScenes) {
                if (!previous || s != *previous) choices.push_back(s);
            }
            const Scene scene = choices[rng.next() % choices.size()];
            const auto& actions = catalog.at(scene);
            const Action action = actions[rng.next() % actions.size()];
            video.spans.push_back({scene, action, static_cast<double>(span_s)});
            previous = scene;
            remaining -= span_s;
        }
        spec.videos.push_back(std::move(video));
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Planning

VideoPlan plan_video(const CorpusSpec& spec, size_t video_index) {
    if (video_index >= spec.videos.size()) throw std::out_of_range("video index out of range");
    const VideoSpec& video = spec.videos[video_index];
    if (video.spans.empty()) throw std::runtime_error("video has no spans: " + video.name);

    VideoPlan plan;
    plan.name = video.name;
    plan.width = spec.frame_width;
    plan.height = spec.frame_height;
    plan.fps = spec.fps;

    int frame = 0;
    int scroll_by_scene[3] = {0, 0, 0};
    std::optional<Scene> previous_scene;
    for (size_t k = 0; k < video.spans.size(); ++k) {
        const BehaviorSpan& span = video.spans[k];
        const int n = static_cast<int>(std::llround(span.duration_s * spec.fps));
        if (n <= 0) throw std::runtime_error("zero-duration span in video " + video.name);
        const auto allowed = compatible_scenes(span.action);
        if (!allowed.count(span.scene)) {
            throw std::runtime_error("incompatible span: action " +
                                     std::string(to_string(span.action)) +
                                     " cannot occur in scene " +
                                     std::string(to_string(span.scene)));
        }

        Rng rng(util::mix_seed(spec.seed, util::fnv1a64(video.name) ^ (k * 7919)));
        SpanPlan sp;
        sp.scene = span.scene;
        sp.action = span.action;
        sp.first_frame = frame;
        sp.last_frame = frame + n - 1;
        sp.cursor.assign(n, std::nullopt);

        const int row0 = sweep_row(span.scene);
        switch (span.action) {
            case Action::ReadingWithScrolling:
                sp.scroll_step = rng.range(5, 9);
                break;
            case Action::Freezing:
                break;
            case Action::PromptingGAI:
            case Action::GroupDocumentCoEditing:
            case Action::TickingAnswers: {
                const auto park = parked_cursor(span.scene);
                for (int i = 0; i < n; ++i) sp.cursor[i] = park;
                if (span.action == Action::TickingAnswers) {
                    // jump among answer rows
                    for (int i = 0; i < n; ++i) {
                        const int row = 44 + ((i * 2 + rng.range(0, 1)) % 5) * 22 +
                                        content_rows(span.scene, spec.frame_height).first;
                        sp.cursor[i] = {60 + rng.range(0, 140), row - 4};
                    }
                }
                break;
            }
            case Action::ReadingWithHighlighting: {
                int x = kSweepStartX;
                for (int i = 0; i < n; ++i) {
                    sp.cursor[i] = {x, row0 + rng.range(-1, 1)};
                    x = std::min(x + kSweepStep, spec.frame_width - kCursorGlyphWidth - 20);
                }
                break;
            }
            case Action::CopyAndPaste: {
                const int sweep_frames = std::max(3, (n * 3) / 5);
                int x = kSweepStartX;
                for (int i = 0; i < n; ++i) {
                    if (i < sweep_frames) {
                        sp.cursor[i] = {x, row0 + rng.range(-1, 1)};
                        x = std::min(x + kSweepStep, spec.frame_width - kCursorGlyphWidth - 20);
                    } else {
                        sp.cursor[i] = {44, row0 + 86};  // parked at the paste target
                    }
                }
                break;
            }
            case Action::SearchingInternet: {
                // convex-ish arc between result links; consecutive chords stay
                // shorter than two-apart chords so tracking's
                // nearest-to-previous association holds
                const double cx = 140, cy = 78;
                const double radius = 30 + rng.range(0, 10);
                double theta = rng.unit() * 6.28318530718;
                const double dtheta = (25 + rng.range(0, 15)) * 3.14159265359 / 180.0;
                for (int i = 0; i < n; ++i) {
                    const int px = static_cast<int>(std::lround(cx + radius * std::cos(theta)));
                    const int py = static_cast<int>(std::lround(cy + radius * std::sin(theta)));
                    sp.cursor[i] = {std::clamp(px, 80, 200), std::clamp(py, 32, 120)};
                    theta += dtheta;
                }
                break;
            }
        }

        if (uses_typing_slots(span.action)) {
            const int stride = burst_stride(span.action);
            for (int i = 1; i < n; i += stride) sp.burst_frames.push_back(frame + i);
        }
        if (span.action == Action::CopyAndPaste) {
            const int sweep_frames = std::max(3, (n * 3) / 5);
            if (sweep_frames < n) sp.burst_frames.push_back(frame + sweep_frames);  // paste
        }

        if (!previous_scene || *previous_scene != span.scene) {
            plan.scene_change_frames.push_back(frame);
        }
        previous_scene = span.scene;
        plan.spans.push_back(std::move(sp));
        frame += n;
    }
    plan.frame_count = frame;
    (void)scroll_by_scene;

    // Maximal same-scene runs: merge adjacent spans with equal scenes.
    std::optional<Scene> run_scene;
    for (const auto& sp : plan.spans) {
        if (run_scene && *run_scene == sp.scene) {
            plan.segments.back().second = sp.last_frame;
        } else {
            plan.segments.emplace_back(sp.first_frame, sp.last_frame);
            run_scene = sp.scene;
        }
    }

    plan.cursor_truth.assign(plan.frame_count, std::nullopt);
    for (const auto& sp : plan.spans) {
        for (int i = sp.first_frame; i <= sp.last_frame; ++i) {
            const auto& c = sp.cursor[i - sp.first_frame];
            if (c) {
                plan.cursor_truth[i] = {c->first + (kCursorGlyphWidth - 1) / 2.0,
                                        c->second + (kCursorGlyphHeight - 1) / 2.0};
            }
        }
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Rendering

FrameSequence render_video(const VideoPlan& plan) {
    const Layout layout{plan.width, plan.height};
    FrameSequence seq;
    seq.fps = plan.fps;
    seq.frames.reserve(plan.frame_count);

    std::map<Scene, SceneCanvas> canvases;
    std::map<Scene, int> slot_cursor;  // next content slot per scene

    for (const auto& sp : plan.spans) {
        SceneCanvas& canvas = canvases[sp.scene];
        const int n = sp.last_frame - sp.first_frame + 1;
        int highlight_prev_x = kSweepStartX;

        for (int i = 0; i < n; ++i) {
            const int frame_index = sp.first_frame + i;
            if (sp.scroll_step > 0) canvas.scroll += sp.scroll_step;

            const auto [content_top_now, content_bottom_now] = content_rows(sp.scene, plan.height);
            // content drawings live in content coordinates:
            //   cy = screen_y - content_top + scroll
            const auto to_content_y = [&](int screen_y) {
                return screen_y - content_top_now + canvas.scroll;
            };
            const bool burst = std::find(sp.burst_frames.begin(), sp.burst_frames.end(),
                                         frame_index) != sp.burst_frames.end();
            if (burst && uses_typing_slots(sp.action)) {
                const int slot = slot_cursor[sp.scene]++;
                Drawing d = slot_drawing(sp.scene, sp.action, slot, canvas.write_count++,
                                         canvas.scroll);
                canvas.put(d);
            }
            if (burst && sp.action == Action::CopyAndPaste) {
                canvas.put({60, to_content_y(sweep_row(sp.scene) + 110), 120, 10, 56, false});
            }
            if (sp.action == Action::ReadingWithHighlighting && sp.cursor[i]) {
                const int cur_x = sp.cursor[i]->first;
                if (cur_x > highlight_prev_x) {
                    const int band_gray =
                        sp.scene == Scene::GAI ? 40 : (sp.scene == Scene::Web ? 100 : 175);
                    canvas.put({highlight_prev_x, to_content_y(sweep_row(sp.scene) + 22),
                                cur_x - highlight_prev_x, 8, band_gray, false});
                    highlight_prev_x = cur_x;
                }
            }

            Frame frame;
            frame.index = frame_index;
            frame.timestamp_s = frame_index / plan.fps;
            frame.width = plan.width;
            frame.height = plan.height;
            frame.pixels.resize(static_cast<size_t>(plan.width) * plan.height * 3);

            const auto [content_top, content_bottom] = content_rows(sp.scene, plan.height);
            for (int y = 0; y < plan.height; ++y) {
                for (int x = 0; x < plan.width; ++x) {
                    int gray = layout.chrome_gray(sp.scene, x, y);
                    if (gray < 0) {
                        gray = content_gray(sp.scene, y - content_top + canvas.scroll);
                    }
                    const size_t at = (static_cast<size_t>(y) * plan.width + x) * 3;
                    frame.pixels[at] = frame.pixels[at + 1] = frame.pixels[at + 2] =
                        static_cast<uint8_t>(gray);
                }
            }
            for (const auto& d : canvas.drawings) {
                if (d.in_chrome) {
                    fill_rect(frame, d.x, d.y, d.w, d.h, d.gray);
                    continue;
                }
                const int screen_y = d.y - canvas.scroll + content_top;
                const int y0 = std::max(screen_y, content_top);
                const int y1 = std::min(screen_y + d.h, content_bottom);
                if (y1 > y0) fill_rect(frame, d.x, y0, d.w, y1 - y0, d.gray);
            }
            if (sp.cursor[i]) {
                fill_rect(frame, sp.cursor[i]->first, sp.cursor[i]->second, kCursorGlyphWidth,
                          kCursorGlyphHeight, kCursorGlyphGray);
            }
            seq.frames.push_back(std::move(frame));
        }
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Gold labels and mock scripts

namespace {

FrameSequence timeline_only(const VideoPlan& plan) {
    FrameSequence seq;
    seq.fps = plan.fps;
    seq.frames.resize(plan.frame_count);
    for (int i = 0; i < plan.frame_count; ++i) {
        seq.frames[i].index = i;
        seq.frames[i].timestamp_s = i / plan.fps;
    }
    return seq;
}

nlohmann::json gold_reply_json(const LabelRecord& record) {
    nlohmann::json j;
    j["scenes"] = nlohmann::json::array();
    for (Scene s : record.scenes) j["scenes"].push_back(std::string(to_string(s)));
    j["actions"] = nlohmann::json::array();
    j["confidences"] = nlohmann::json::object();
    j["evidence"] = nlohmann::json::object();
    for (Action a : record.actions) {
        const std::string name(to_string(a));
        j["actions"].push_back(name);
        j["confidences"][name] = 0.9;
        j["evidence"][name] = "scripted: " + std::string(action_definition(a));
    }
    return j;
}

Action pick_incompatible_action(Scene scene, Rng& rng) {
    std::vector<Action> candidates;
    for (Action a : kAllActions) {
        if (!compatible_scenes(a).count(scene)) candidates.push_back(a);
    }
    return candidates[rng.next() % candidates.size()];
}

}  // namespace

std::vector<LabelRecord> gold_for_video(const CorpusSpec& spec, const VideoPlan& plan) {
    const FrameSequence timeline = timeline_only(plan);
    const auto units = segment_fixed(timeline, spec.window_s, plan.name + "_");

    std::vector<LabelRecord> gold;
    gold.reserve(units.size());
    for (const auto& unit : units) {
        LabelRecord record;
        record.unit_id = unit.unit_id;
        const int first = unit.frame_indices.front();
        const int last = unit.frame_indices.back();
        for (const auto& sp : plan.spans) {
            if (sp.first_frame <= last && first <= sp.last_frame) {
                record.scenes.insert(sp.scene);
                record.actions.insert(sp.action);
            }
        }
        if (!check_compatibility(record).empty()) {
            throw std::runtime_error("generator produced incompatible gold for " + record.unit_id);
        }
        gold.push_back(std::move(record));
    }
    return gold;
}

vlm::MockScript build_mock_script(const CorpusSpec& spec, const std::vector<VideoPlan>& plans) {
    vlm::MockScript script;
    script.default_response = "I cannot determine the label for this input.";
    Rng inject_rng(util::mix_seed(spec.seed, 0x1badULL));

    for (size_t v = 0; v < plans.size(); ++v) {
        const VideoPlan& plan = plans[v];

        // scene classification replies, keyed by block-start frame
        for (int frame : plan.scene_change_frames) {
            Scene scene = plan.spans.front().scene;
            for (const auto& sp : plan.spans) {
                if (sp.first_frame <= frame && frame <= sp.last_frame) {
                    scene = sp.scene;
                    break;
                }
            }
            nlohmann::json reply{{"scene", std::string(to_string(scene))}};
            script.rules.push_back(
                {fixture_tag(plan.name + ":f" + std::to_string(frame)), reply.dump()});
        }

        // behavior-classification replies per scene segment
        for (const auto& [seg_first, seg_last] : plan.segments) {
            nlohmann::json reply;
            reply["actions"] = nlohmann::json::array();
            reply["confidences"] = nlohmann::json::object();
            reply["evidence"] = nlohmann::json::object();
            Scene seg_scene = plan.spans.front().scene;
            for (const auto& sp : plan.spans) {
                if (sp.first_frame >= seg_first && sp.last_frame <= seg_last) {
                    seg_scene = sp.scene;
                    const std::string name(to_string(sp.action));
                    bool already = false;
                    for (const auto& existing : reply["actions"]) {
                        if (existing == name) already = true;
                    }
                    if (already) continue;
                    reply["actions"].push_back(name);
                    reply["confidences"][name] = 0.9;
                    reply["evidence"][name] = "scripted: " + std::string(action_definition(sp.action));
                }
            }
            if (spec.inject_incompatible_fraction > 0 &&
                inject_rng.unit() < spec.inject_incompatible_fraction) {
                const Action bad = pick_incompatible_action(seg_scene, inject_rng);
                const std::string name(to_string(bad));
                reply["actions"].push_back(name);
                reply["confidences"][name] = 0.6;
                reply["evidence"][name] = "injected incompatible candidate";
            }
            script.rules.push_back({fixture_tag(plan.name + ":seg" + std::to_string(seg_first) +
                                                "-" + std::to_string(seg_last)),
                                    reply.dump()});
        }

        // per-unit replies: few-shot / ClassifyBehavior, then the ReAct
        // transcript (probe, classify, finish-with-gold)
        const auto gold = gold_for_video(spec, plan);
        for (const auto& record : gold) {
            const nlohmann::json reply = gold_reply_json(record);
            script.rules.push_back({fixture_tag(record.unit_id), reply.dump()});

            nlohmann::json s1{{"thought", "inspect cursor evidence first"},
                              {"action", "CursorProbe"},
                              {"action_input", ""}};
            nlohmann::json s2{{"thought", "classify the sampled frames"},
                              {"action", "ClassifyBehavior"},
                              {"action_input", ""}};
            nlohmann::json s3{{"thought", "evidence and classification agree"},
                              {"action", "Finish"},
                              {"action_input", reply}};
            script.rules.push_back({fixture_tag(record.unit_id + ":s1"), s1.dump()});
            script.rules.push_back({fixture_tag(record.unit_id + ":s2"), s2.dump()});
            script.rules.push_back({fixture_tag(record.unit_id + ":s3"), s3.dump()});
        }
        (void)v;
    }
    return script;
}

GeneratedCorpus build_corpus(const CorpusSpec& spec) {
    GeneratedCorpus corpus;
    for (size_t v = 0; v < spec.videos.size(); ++v) {
        corpus.plans.push_back(plan_video(spec, v));
    }
    for (const auto& plan : corpus.plans) {
        const auto gold = gold_for_video(spec, plan);
        corpus.gold.insert(corpus.gold.end(), gold.begin(), gold.end());
    }
    corpus.script = build_mock_script(spec, corpus.plans);
    return corpus;
}

GeneratedCorpus generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
    GeneratedCorpus corpus = build_corpus(spec);
    std::filesystem::create_directories(out_dir);

    for (const auto& plan : corpus.plans) {
        const FrameSequence seq = render_video(plan);
        const auto video_dir = out_dir / plan.name;
        std::filesystem::create_directories(video_dir);
        for (const auto& frame : seq.frames) {
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%06d.png", frame.index);
            write_png(video_dir / name, frame);
        }
    }
    write_label_file(out_dir / "gold.tsv", corpus.gold, /*prediction_columns=*/false);
    corpus.script.save(out_dir / "mock_script.tsv");

    nlohmann::json manifest;
    manifest["spec"] = corpus_spec_to_json(spec);
    manifest["videos"] = nlohmann::json::array();
    for (const auto& plan : corpus.plans) {
        nlohmann::json vj;
        vj["name"] = plan.name;
        vj["frames"] = plan.frame_count;
        vj["scene_change_frames"] = plan.scene_change_frames;
        nlohmann::json segs = nlohmann::json::array();
        for (const auto& [a, b] : plan.segments) segs.push_back({a, b});
        vj["segments"] = segs;
        manifest["videos"].push_back(std::move(vj));
    }
    util::write_text_file(out_dir / "corpus_manifest.json", manifest.dump(2) + "\n");
    return corpus;
}

}  // namespace screencode::synth
