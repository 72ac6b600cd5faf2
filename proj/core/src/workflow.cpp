#include "screencode/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "screencode/baseline.hpp"
#include "screencode/png_io.hpp"
#include "screencode/util.hpp"

namespace screencode::workflow {

using vision::MotionPattern;

namespace {

// Bounding box of pixels whose grayscale changed between two frames, as a
// fraction of frame area; 0 when nothing changed.
double changed_bbox_fraction(const Frame& a, const Frame& b) {
    int min_x = a.width, max_x = -1, min_y = a.height, max_y = -1;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (a.gray(x, y) != b.gray(x, y)) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
        }
    }
    if (max_x < 0) return 0.0;
    const double area = static_cast<double>(max_x - min_x + 1) * (max_y - min_y + 1);
    return area / (static_cast<double>(a.width) * a.height);
}

std::optional<Scene> parse_scene_reply(const std::string& text) {
    const auto obj = vlm::extract_first_object(text);
    if (!obj) return std::nullopt;
    if (obj->contains("scene") && (*obj)["scene"].is_string()) {
        return scene_from_string((*obj)["scene"].get<std::string>());
    }
    if (obj->contains("scenes") && (*obj)["scenes"].is_array() && !(*obj)["scenes"].empty() &&
        (*obj)["scenes"][0].is_string()) {
        return scene_from_string((*obj)["scenes"][0].get<std::string>());
    }
    return std::nullopt;
}

}  // namespace

SegmentEvidence collect_segment_evidence(const FrameSequence& seq,
                                         const SceneSegment& segment,
                                         const WorkflowConfig& config) {
    SegmentEvidence evidence;
    evidence.pair_count = segment.end_index - segment.start_index;

    double max_consecutive_diff = 0.0;
    for (int i = segment.start_index + 1; i <= segment.end_index; ++i) {
        const Frame& a = seq.frames[i - 1];
        const Frame& b = seq.frames[i];
        const auto shift = vision::detect_vertical_shift(a, b, config.vision);
        const double diff = vision::frame_diff_score(a, b).value;
        max_consecutive_diff = std::max(max_consecutive_diff, diff);
        if (shift.detected) {
            ++evidence.shift_pair_count;
        } else if (diff >= config.localized_min_diff &&
                   changed_bbox_fraction(a, b) < config.localized_max_bbox_fraction) {
            ++evidence.localized_pair_count;
        }
        if (diff > config.vision.keyframe_tau) ++evidence.interior_keyframe_count;
    }
    if (evidence.pair_count >= 1) {
        evidence.cursor = vision::detect_cursor_range(seq, segment.start_index,
                                                      segment.end_index, std::nullopt,
                                                      config.vision);
    }

    // Frozen means no cursor and no content change across any frame pair;
    // the cheap consecutive check gates the full pairwise scan.
    if (evidence.cursor.points.empty() && max_consecutive_diff < config.freeze_diff_eps) {
        evidence.frozen = true;
        for (int i = segment.start_index; evidence.frozen && i <= segment.end_index; ++i) {
            for (int j = i + 1; j <= segment.end_index; ++j) {
                if (vision::frame_diff_score(seq.frames[i], seq.frames[j]).value >=
                    config.freeze_diff_eps) {
                    evidence.frozen = false;
                    break;
                }
            }
        }
    }
    return evidence;
}

std::vector<SceneSegment> osds_segment(const FrameSequence& seq,
                                       vlm::VlmProvider& provider,
                                       const PromptLibrary& prompts,
                                       const WorkflowConfig& config,
                                       const std::string& video_tag,
                                       nlohmann::json* trace) {
    if (seq.empty()) throw std::invalid_argument("cannot segment an empty sequence");
    const auto keyframes = vision::detect_keyframes(seq, config.vision);

    struct Block {
        int start, end;
        Scene scene;
        bool flagged;
    };
    std::vector<Block> blocks;
    std::optional<Scene> previous_scene;

    for (size_t k = 0; k < keyframes.size(); ++k) {
        const int start = keyframes[k];
        const int end =
            k + 1 < keyframes.size() ? keyframes[k + 1] - 1 : static_cast<int>(seq.size()) - 1;

        vlm::ChatRequest request;
        request.model_id = config.model_id;
        vlm::ChatMessage user;
        user.role = "user";
        user.parts.push_back(vlm::ContentPart::make_text(prompts.render(
            "scene_classify",
            {{"FIXTURE_TAG", fixture_tag(video_tag + ":f" + std::to_string(start))}})));
        user.parts.push_back(vlm::ContentPart::make_image(encode_png(seq.frames[start])));
        request.messages.push_back(std::move(user));

        std::optional<Scene> scene;
        std::string raw_reply;
        try {
            vlm::ChatResponse response = provider.complete(request);
            raw_reply = response.text;
            scene = parse_scene_reply(response.text);
            if (!scene) {
                // one corrective retry
                vlm::ChatMessage fix;
                fix.role = "user";
                fix.parts.push_back(vlm::ContentPart::make_text(
                    "Reply with exactly {\"scene\": \"gai\" | \"web\" | \"docs\"}. " +
                    fixture_tag(video_tag + ":f" + std::to_string(start))));
                request.messages.push_back(std::move(fix));
                response = provider.complete(request);
                raw_reply = response.text;
                scene = parse_scene_reply(response.text);
            }
        } catch (const vlm::VlmError&) {
            scene = std::nullopt;
        }

        Block block{start, end, Scene::Web, false};
        if (scene) {
            block.scene = *scene;
        } else {
            // inherit the previous block's scene and flag it
            block.scene = previous_scene.value_or(Scene::Web);
            block.flagged = true;
        }
        previous_scene = block.scene;
        if (trace) {
            (*trace)["osds_blocks"].push_back({{"start", start},
                                               {"end", end},
                                               {"scene", std::string(to_string(block.scene))},
                                               {"reply", raw_reply},
                                               {"flagged", block.flagged}});
        }
        blocks.push_back(block);
    }

    // Merge adjacent same-scene blocks; merging twice equals merging once.
    std::vector<SceneSegment> segments;
    for (const auto& block : blocks) {
        if (!segments.empty() && segments.back().scene == block.scene) {
            segments.back().end_index = block.end;
            segments.back().source_keyframes.push_back(block.start);
            segments.back().flagged = segments.back().flagged || block.flagged;
        } else {
            SceneSegment segment;
            segment.id = static_cast<int>(segments.size());
            segment.start_index = block.start;
            segment.end_index = block.end;
            segment.scene = block.scene;
            segment.source_keyframes = {block.start};
            segment.flagged = block.flagged;
            segments.push_back(std::move(segment));
        }
    }
    return segments;
}

std::string cursor_summary_text(const vision::CursorTrajectory& cursor, int pair_count) {
    std::string out;
    out += "pattern: " + std::string(vision::to_string(cursor.pattern)) + "\n";
    out += "activity_ratio: " + util::format_double(cursor.activity_ratio, 2) + " (" +
           std::to_string(cursor.points.size()) + " of " + std::to_string(pair_count) +
           " frame pairs with cursor motion)\n";
    if (!cursor.points.empty()) {
        out += "path: ";
        const size_t max_points = 10;
        const size_t step = std::max<size_t>(1, cursor.points.size() / max_points);
        for (size_t i = 0; i < cursor.points.size(); i += step) {
            if (i) out += " -> ";
            out += "(" + util::format_double(cursor.points[i].x, 0) + "," +
                   util::format_double(cursor.points[i].y, 0) + ")@f" +
                   std::to_string(cursor.points[i].frame_index);
        }
        out += "\n";
    }
    return out;
}

std::vector<ActionCandidate> icvp_classify(const SceneSegment& segment,
                                           const FrameSequence& seq,
                                           vlm::VlmProvider& provider,
                                           const PromptLibrary& prompts,
                                           const WorkflowConfig& config,
                                           const std::string& video_tag,
                                           const SegmentEvidence& evidence,
                                           nlohmann::json* trace) {
    const std::string tag = fixture_tag(video_tag + ":seg" + std::to_string(segment.start_index) +
                                        "-" + std::to_string(segment.end_index));
    const std::string guidance_name =
        "icvp_guidance_" + std::string(to_string(segment.scene));

    vlm::ChatRequest request;
    request.model_id = config.model_id;
    vlm::ChatMessage user;
    user.role = "user";
    user.parts.push_back(vlm::ContentPart::make_text(prompts.render(
        "icvp_task", {{"SCENE", std::string(to_string(segment.scene))},
                      {"CURSOR_SUMMARY", cursor_summary_text(evidence.cursor, evidence.pair_count)},
                      {"GUIDANCE", prompts.text(guidance_name)},
                      {"TAXONOMY", taxonomy_prompt_block()},
                      {"FIXTURE_TAG", tag}})));

    // Attention box around the cursor activity region, padded and clamped.
    std::optional<vision::AttentionBox> box;
    if (!evidence.cursor.points.empty()) {
        double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
        for (const auto& p : evidence.cursor.points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        constexpr int pad = 20;
        const int x0 = std::max(0, static_cast<int>(min_x) - pad);
        const int y0 = std::max(0, static_cast<int>(min_y) - pad);
        const int x1 = std::min(seq.width(), static_cast<int>(max_x) + pad);
        const int y1 = std::min(seq.height(), static_cast<int>(max_y) + pad);
        if (x1 - x0 >= 8 && y1 - y0 >= 8) box = vision::AttentionBox{x0, y0, x1 - x0, y1 - y0};
    }

    int attached = 0;
    for (int i = segment.start_index;
         i <= segment.end_index && attached < config.image_budget;
         i += std::max(1, config.icvp_frame_stride), ++attached) {
        const Frame& frame = seq.frames[i];
        user.parts.push_back(vlm::ContentPart::make_image(
            encode_png(box ? vision::overlay_highlight(frame, *box) : frame)));
    }
    request.messages.push_back(std::move(user));

    vlm::ChatResponse response;
    vlm::ParseResult parsed;
    try {
        response = provider.complete(request);
        parsed = vlm::parse_structured_label(response.text);
        if (!parsed.ok()) {
            vlm::ChatMessage fix;
            fix.role = "user";
            fix.parts.push_back(vlm::ContentPart::make_text(
                "Reply with a single JSON object with fields actions, confidences and "
                "evidence only. " +
                tag));
            request.messages.push_back(std::move(fix));
            response = provider.complete(request);
            parsed = vlm::parse_structured_label(response.text);
        }
    } catch (const vlm::VlmError& e) {
        parsed.failure = e.what();
    }

    if (trace) {
        (*trace)["icvp"].push_back({{"segment", segment.id},
                                    {"tag", tag},
                                    {"reply", response.text},
                                    {"parse_ok", parsed.ok()},
                                    {"warnings", parsed.warnings}});
    }

    std::vector<ActionCandidate> candidates;
    if (!parsed.ok()) return candidates;  // caller flags the segment

    for (Action a : parsed.label->actions) {
        ActionCandidate candidate;
        candidate.action = a;
        candidate.confidence = parsed.label->confidences.count(a)
                                   ? parsed.label->confidences.at(a)
                                   : 0.5;
        if (parsed.label->evidence.count(a)) candidate.evidence_text = parsed.label->evidence.at(a);
        candidate.cursor_pattern = evidence.cursor.pattern;
        candidate.segment_id = segment.id;
        candidates.push_back(std::move(candidate));
    }
    return candidates;
}

namespace {

struct SignalCheck {
    bool passed;
    std::vector<std::string> reasons;
};

SignalCheck check_signals(const ActionCandidate& candidate,
                          const SceneSegment& segment,
                          const SegmentEvidence& e) {
    SignalCheck out{true, {}};
    const auto require = [&](const char* name, bool ok) {
        out.reasons.push_back(std::string(name) + (ok ? ":ok" : ":fail"));
        out.passed = out.passed && ok;
    };
    const MotionPattern p = e.cursor.pattern;

    switch (candidate.action) {
        case Action::ReadingWithScrolling:
            require("vertical-shift>=2", e.shift_pair_count >= 2);
            require("cursor-quiet",
                    p == MotionPattern::Static || p == MotionPattern::None);
            break;
        case Action::ReadingWithHighlighting:
            require("cursor-linear-horizontal", p == MotionPattern::LinearHorizontal);
            require("no-vertical-shift", e.shift_pair_count == 0);
            break;
        case Action::Freezing:
            require("no-cursor", e.cursor.points.empty());
            require("all-diffs-below-eps", e.frozen);
            break;
        case Action::GroupDocumentCoEditing:
            require("scene-docs", segment.scene == Scene::Docs);
            require("localized-diffs>=3", e.localized_pair_count >= 3);
            break;
        case Action::PromptingGAI:
            require("scene-gai", segment.scene == Scene::GAI);
            require("localized-diffs>=2", e.localized_pair_count >= 2);
            break;
        case Action::SearchingInternet:
            require("scene-web", segment.scene == Scene::Web);
            require("keyframe-or-localized-diffs>=2",
                    e.interior_keyframe_count >= 1 || e.localized_pair_count >= 2);
            break;
        case Action::TickingAnswers:
            require("scene-docs", segment.scene == Scene::Docs);
            require("localized-diffs>=1", e.localized_pair_count >= 1);
            break;
        case Action::CopyAndPaste:
            require("cursor-select-then-jump",
                    p == MotionPattern::LinearHorizontal || p == MotionPattern::Jump);
            require("evidence-text", !candidate.evidence_text.empty());
            break;
    }
    return out;
}

}  // namespace

std::vector<ValidationVerdict> evbm_validate(const std::vector<ActionCandidate>& candidates,
                                             const SceneSegment& segment,
                                             const FrameSequence& seq,
                                             const WorkflowConfig& config) {
    const SegmentEvidence evidence = collect_segment_evidence(seq, segment, config);

    std::vector<ValidationVerdict> verdicts;
    verdicts.reserve(candidates.size());
    for (const auto& candidate : candidates) {
        ValidationVerdict verdict;
        verdict.candidate = candidate;

        const bool compatible = compatible_scenes(candidate.action).count(segment.scene) > 0;
        if (!compatible) {
            verdict.kept = false;
            verdict.reasons.push_back("scene-incompatible");
            verdicts.push_back(std::move(verdict));
            continue;
        }

        SignalCheck signals = check_signals(candidate, segment, evidence);
        verdict.reasons = std::move(signals.reasons);
        if (signals.passed) {
            verdict.kept = true;
        } else if (candidate.confidence >= config.confidence_override) {
            verdict.kept = true;
            verdict.reasons.push_back("confidence-override");
        } else {
            verdict.kept = false;
        }
        verdicts.push_back(std::move(verdict));
    }
    return verdicts;
}

WorkflowResult run_workflow(const FrameSequence& seq,
                            const std::vector<EvaluationUnit>& units,
                            vlm::VlmProvider& provider,
                            const PromptLibrary& prompts,
                            const WorkflowConfig& config,
                            const std::string& video_tag) {
    WorkflowResult result;
    result.trace = nlohmann::json::object();
    result.trace["video"] = video_tag;

    result.segments = osds_segment(seq, provider, prompts, config, video_tag, &result.trace);

    struct SegmentOutcome {
        std::vector<ActionCandidate> candidates;
        std::vector<ValidationVerdict> verdicts;
        bool flagged = false;
    };
    std::vector<SegmentOutcome> outcomes(result.segments.size());

    for (size_t s = 0; s < result.segments.size(); ++s) {
        const SceneSegment& segment = result.segments[s];
        const SegmentEvidence evidence = collect_segment_evidence(seq, segment, config);
        auto candidates = icvp_classify(segment, seq, provider, prompts, config, video_tag,
                                        evidence, &result.trace);
        outcomes[s].flagged = segment.flagged || candidates.empty();
        outcomes[s].verdicts = evbm_validate(candidates, segment, seq, config);
        outcomes[s].candidates = std::move(candidates);

        nlohmann::json verdict_trace = nlohmann::json::array();
        for (const auto& v : outcomes[s].verdicts) {
            verdict_trace.push_back({{"action", std::string(to_string(v.candidate.action))},
                                     {"confidence", v.candidate.confidence},
                                     {"kept", v.kept},
                                     {"reasons", v.reasons}});
        }
        result.trace["evbm"].push_back(
            {{"segment", segment.id}, {"verdicts", std::move(verdict_trace)}});
        for (auto& v : outcomes[s].verdicts) result.verdicts.push_back(v);
    }

    // Unit mapping: union over overlapping segments; confidences keep the max
    // across contributing verdicts; evidence concatenates.
    for (const auto& unit : units) {
        LabelRecord record, raw;
        record.unit_id = unit.unit_id;
        raw.unit_id = unit.unit_id;
        const int first = unit.frame_indices.front();
        const int last = unit.frame_indices.back();

        for (size_t s = 0; s < result.segments.size(); ++s) {
            const SceneSegment& segment = result.segments[s];
            if (segment.start_index > last || segment.end_index < first) continue;

            record.scenes.insert(segment.scene);
            raw.scenes.insert(segment.scene);
            record.flagged = record.flagged || outcomes[s].flagged;
            raw.flagged = record.flagged;

            for (const auto& candidate : outcomes[s].candidates) {
                raw.actions.insert(candidate.action);
                auto [it, inserted] =
                    raw.confidences.emplace(candidate.action, candidate.confidence);
                if (!inserted) it->second = std::max(it->second, candidate.confidence);
            }
            for (const auto& verdict : outcomes[s].verdicts) {
                if (!verdict.kept) continue;
                const Action a = verdict.candidate.action;
                record.actions.insert(a);
                auto [it, inserted] = record.confidences.emplace(a, verdict.candidate.confidence);
                if (!inserted) it->second = std::max(it->second, verdict.candidate.confidence);
                if (!verdict.candidate.evidence_text.empty()) {
                    auto& evidence = record.evidence[a];
                    if (!evidence.empty()) evidence += " | ";
                    evidence += verdict.candidate.evidence_text;
                }
            }
        }
        result.records.push_back(std::move(record));
        result.raw_records.push_back(std::move(raw));
    }
    return result;
}

}  // namespace screencode::workflow
