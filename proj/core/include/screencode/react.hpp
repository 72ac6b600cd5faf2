#pragma once

// ReAct-style loop: the model interleaves reasoning with tool calls
// (segmentation probe, cursor probe, shift probe, behavior classification,
// compatibility check) and terminates with Finish; a Reflection stage then
// calibrates confidences and flags anomalies.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screencode/frame.hpp"
#include "screencode/prompts.hpp"
#include "screencode/taxonomy.hpp"
#include "screencode/vision.hpp"
#include "screencode/vlm.hpp"

namespace screencode::react {

struct ReactConfig {
    vision::VisionConfig vision;
    std::string model_id;
    int max_steps = 8;
    double incompatibility_penalty = 0.3;  // confidence reduction per incompatible action
    double review_threshold = 0.5;         // flag records with any confidence below this
    int image_budget = 20;
};

struct ScratchpadEntry {
    std::string thought;
    std::string action_name;
    std::string action_input;
    std::string observation;

    bool operator==(const ScratchpadEntry&) const = default;
};

struct ReactState {
    std::string unit_id;
    std::vector<ScratchpadEntry> scratchpad;
    int step = 0;
    bool done = false;
    std::optional<vlm::StructuredLabel> final_label;
};

nlohmann::json state_to_json(const ReactState& state);
ReactState state_from_json(const nlohmann::json& j);

// Everything a tool may touch while executing.
struct ToolContext {
    const EvaluationUnit& unit;
    const FrameSequence& seq;
    vlm::VlmProvider& provider;
    const PromptLibrary& prompts;
    const ReactConfig& config;
};

class ToolRegistry {
public:
    // The registry is closed: the six standard tools, nothing else.
    static ToolRegistry standard();

    bool has(const std::string& name) const;
    std::string execute(const std::string& name, const std::string& input,
                        ToolContext& ctx) const;
    std::vector<std::string> names() const;
    std::string descriptions_text() const;

private:
    struct Tool {
        std::string name;
        std::string description;
        std::function<std::string(const std::string&, ToolContext&)> run;
    };
    std::vector<Tool> tools_;
};

// One reason->act->observe cycle. An unparseable reply appends an
// "invalid action" observation; provider errors append an error observation;
// both consume a step. Finish parses its action_input into the final label.
ReactState react_step(ReactState state,
                      vlm::VlmProvider& provider,
                      const ToolRegistry& tools,
                      ToolContext& ctx,
                      const PromptLibrary& prompts,
                      const ReactConfig& config);

// Reflection: every scene-incompatible action keeps its label but loses
// incompatibility_penalty confidence (floored at 0) and the record is
// flagged; low-confidence records are flagged for review too.
LabelRecord reflect(const vlm::StructuredLabel& label,
                    const ReactState& state,
                    const ReactConfig& config);

struct ReactOutcome {
    LabelRecord record;
    ReactState state;
};

ReactOutcome run_react(const EvaluationUnit& unit,
                       const FrameSequence& seq,
                       vlm::VlmProvider& provider,
                       const PromptLibrary& prompts,
                       const ReactConfig& config);

}  // namespace screencode::react
