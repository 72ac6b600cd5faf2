#pragma once

// Few-shot single-VLM coder: one prompt per evaluation unit asking for the
// unit's scenes and actions, with a fixed textual exemplar block.

#include <string>
#include <vector>

#include "screencode/frame.hpp"
#include "screencode/prompts.hpp"
#include "screencode/taxonomy.hpp"
#include "screencode/vlm.hpp"

namespace screencode::baseline {

struct Exemplar {
    std::string description;
    vlm::StructuredLabel label;
};

struct BaselineConfig {
    int exemplar_count = 3;
    int image_budget = 20;  // max frames attached per request
    std::string model_id;
};

// Built-in exemplars; a config file can swap in others.
std::vector<Exemplar> default_exemplars();

std::string render_exemplars(const std::vector<Exemplar>& exemplars, int count);

// Evenly subsamples at most `budget` of the unit's frames.
std::vector<int> select_frames(const std::vector<int>& frame_indices, int budget);

// One provider call per unit on the happy path; one corrective re-prompt on a
// parse failure; a second failure yields an empty record with flagged=true.
// Provider errors propagate (the runner records them as unit failures).
LabelRecord few_shot_classify(const EvaluationUnit& unit,
                              const FrameSequence& seq,
                              vlm::VlmProvider& provider,
                              const PromptLibrary& prompts,
                              const BaselineConfig& config,
                              const std::vector<Exemplar>& exemplars);

// Shared with the other strategies: StructuredLabel -> LabelRecord.
LabelRecord label_to_record(const std::string& unit_id, const vlm::StructuredLabel& label);

}  // namespace screencode::baseline
