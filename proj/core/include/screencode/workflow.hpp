#pragma once

// Three-agent workflow: OSDS segments the video into scene-homogeneous
// spans, ICVP classifies behaviors per span with cursor-informed prompting,
// EVBM validates candidates against visual evidence, and the orchestrator
// maps kept actions back onto the 20-second evaluation units.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screencode/frame.hpp"
#include "screencode/prompts.hpp"
#include "screencode/taxonomy.hpp"
#include "screencode/vision.hpp"
#include "screencode/vlm.hpp"

namespace screencode::workflow {

struct WorkflowConfig {
    vision::VisionConfig vision;
    std::string model_id;
    int image_budget = 20;
    int icvp_frame_stride = 4;       // every 4th frame of a segment goes to the VLM
    double confidence_override = 0.85;
    double localized_min_diff = 0.005;
    double localized_max_bbox_fraction = 0.3;
    double freeze_diff_eps = 0.005;
};

struct SceneSegment {
    int id = 0;
    int start_index = 0;
    int end_index = 0;  // inclusive
    Scene scene = Scene::Web;
    std::vector<int> source_keyframes;
    bool flagged = false;  // scene classification fell back / parse failed
};

struct ActionCandidate {
    Action action = Action::Freezing;
    double confidence = 0.0;
    std::string evidence_text;
    vision::MotionPattern cursor_pattern = vision::MotionPattern::None;
    int segment_id = 0;
};

struct ValidationVerdict {
    ActionCandidate candidate;
    bool kept = false;
    std::vector<std::string> reasons;  // satisfied/failed signal names
};

// Per-segment visual evidence shared by ICVP and EVBM.
struct SegmentEvidence {
    int pair_count = 0;
    int shift_pair_count = 0;        // consecutive pairs with a detected vertical shift
    int localized_pair_count = 0;    // diff >= eps, bbox < 30% of frame, no shift
    int interior_keyframe_count = 0; // keyframes strictly after the segment start
    bool frozen = false;             // no cursor points and all pairwise diffs < eps
    vision::CursorTrajectory cursor;
};

SegmentEvidence collect_segment_evidence(const FrameSequence& seq,
                                         const SceneSegment& segment,
                                         const WorkflowConfig& config);

// Keyframes partition the video into content blocks; the first frame of each
// block is classified by the provider; adjacent same-scene blocks merge.
// A failed classification inherits the previous block's scene and flags the
// segment. video_tag keys the scripted mock ("<video>:f<frame>").
std::vector<SceneSegment> osds_segment(const FrameSequence& seq,
                                       vlm::VlmProvider& provider,
                                       const PromptLibrary& prompts,
                                       const WorkflowConfig& config,
                                       const std::string& video_tag,
                                       nlohmann::json* trace = nullptr);

std::vector<ActionCandidate> icvp_classify(const SceneSegment& segment,
                                           const FrameSequence& seq,
                                           vlm::VlmProvider& provider,
                                           const PromptLibrary& prompts,
                                           const WorkflowConfig& config,
                                           const std::string& video_tag,
                                           const SegmentEvidence& evidence,
                                           nlohmann::json* trace = nullptr);

// A candidate is kept iff all its required signals hold, or its confidence
// clears the override threshold while staying scene-compatible.
// Scene-incompatible candidates are always dropped.
std::vector<ValidationVerdict> evbm_validate(const std::vector<ActionCandidate>& candidates,
                                             const SceneSegment& segment,
                                             const FrameSequence& seq,
                                             const WorkflowConfig& config);

std::string cursor_summary_text(const vision::CursorTrajectory& cursor, int pair_count);

struct WorkflowResult {
    std::vector<LabelRecord> records;      // post-validation, one per unit
    std::vector<LabelRecord> raw_records;  // pre-validation candidate mapping
    std::vector<SceneSegment> segments;
    std::vector<ValidationVerdict> verdicts;
    nlohmann::json trace;  // per-segment prompts, raw replies, verdicts
};

WorkflowResult run_workflow(const FrameSequence& seq,
                            const std::vector<EvaluationUnit>& units,
                            vlm::VlmProvider& provider,
                            const PromptLibrary& prompts,
                            const WorkflowConfig& config,
                            const std::string& video_tag);

}  // namespace screencode::workflow
