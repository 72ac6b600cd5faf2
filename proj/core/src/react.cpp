#include "screencode/react.hpp"

#include <algorithm>

#include "screencode/baseline.hpp"
#include "screencode/label_io.hpp"
#include "screencode/png_io.hpp"
#include "screencode/util.hpp"
#include "screencode/workflow.hpp"

namespace screencode::react {

using vlm::ContentPart;

nlohmann::json state_to_json(const ReactState& state) {
    nlohmann::json j;
    j["unit_id"] = state.unit_id;
    j["step"] = state.step;
    j["done"] = state.done;
    j["scratchpad"] = nlohmann::json::array();
    for (const auto& entry : state.scratchpad) {
        j["scratchpad"].push_back({{"thought", entry.thought},
                                   {"action", entry.action_name},
                                   {"action_input", entry.action_input},
                                   {"observation", entry.observation}});
    }
    if (state.final_label) {
        nlohmann::json label;
        label["scenes"] = nlohmann::json::array();
        for (Scene s : state.final_label->scenes) label["scenes"].push_back(std::string(to_string(s)));
        label["actions"] = nlohmann::json::array();
        label["confidences"] = nlohmann::json::object();
        label["evidence"] = nlohmann::json::object();
        for (Action a : state.final_label->actions) {
            const std::string name(to_string(a));
            label["actions"].push_back(name);
            if (state.final_label->confidences.count(a))
                label["confidences"][name] = state.final_label->confidences.at(a);
            if (state.final_label->evidence.count(a))
                label["evidence"][name] = state.final_label->evidence.at(a);
        }
        j["final_label"] = std::move(label);
    }
    return j;
}

ReactState state_from_json(const nlohmann::json& j) {
    ReactState state;
    state.unit_id = j.value("unit_id", "");
    state.step = j.value("step", 0);
    state.done = j.value("done", false);
    for (const auto& entry : j.value("scratchpad", nlohmann::json::array())) {
        state.scratchpad.push_back({entry.value("thought", ""), entry.value("action", ""),
                                    entry.value("action_input", ""),
                                    entry.value("observation", "")});
    }
    if (j.contains("final_label")) {
        const auto parsed = vlm::parse_structured_label(j["final_label"].dump());
        if (parsed.ok()) state.final_label = parsed.label;
    }
    return state;
}

// ---------------------------------------------------------------------------
// Tools

namespace {

std::string segment_probe(const std::string&, ToolContext& ctx) {
    const auto& indices = ctx.unit.frame_indices;
    std::string out = "pair diff scores:";
    std::vector<int> keyframes;
    for (size_t k = 1; k < indices.size(); ++k) {
        const double diff = vision::frame_diff_score(ctx.seq.frames[indices[k - 1]],
                                                     ctx.seq.frames[indices[k]])
                                .value;
        out += " " + util::format_double(diff, 4);
        if (diff > ctx.config.vision.keyframe_tau) keyframes.push_back(indices[k]);
    }
    out += "; keyframes within unit:";
    if (keyframes.empty()) out += " none";
    for (int k : keyframes) out += " " + std::to_string(k);
    return out;
}

std::string cursor_probe(const std::string&, ToolContext& ctx) {
    const auto& indices = ctx.unit.frame_indices;
    if (indices.size() < 2) return "unit too short for cursor tracking";
    const auto cursor = vision::detect_cursor_range(ctx.seq, indices.front(), indices.back(),
                                                    std::nullopt, ctx.config.vision);
    return workflow::cursor_summary_text(cursor, static_cast<int>(indices.size()) - 1);
}

std::string shift_probe(const std::string&, ToolContext& ctx) {
    const auto& indices = ctx.unit.frame_indices;
    int detected = 0;
    std::string offsets;
    for (size_t k = 1; k < indices.size(); ++k) {
        const auto shift = vision::detect_vertical_shift(
            ctx.seq.frames[indices[k - 1]], ctx.seq.frames[indices[k]], ctx.config.vision);
        if (shift.detected) {
            ++detected;
            offsets += " " + std::to_string(shift.offset_px);
        }
    }
    std::string out = "vertical shifts detected in " + std::to_string(detected) + " of " +
                      std::to_string(indices.size() - 1) + " pairs";
    if (detected) out += "; offsets:" + offsets;
    return out;
}

std::string classify_behavior(const std::string&, ToolContext& ctx) {
    vlm::ChatRequest request;
    request.model_id = ctx.config.model_id;
    vlm::ChatMessage user;
    user.role = "user";
    user.parts.push_back(ContentPart::make_text(
        ctx.prompts.render("classify_behavior", {{"TAXONOMY", taxonomy_prompt_block()},
                                                 {"FIXTURE_TAG", fixture_tag(ctx.unit.unit_id)}})));
    for (int idx : baseline::select_frames(ctx.unit.frame_indices, ctx.config.image_budget)) {
        user.parts.push_back(ContentPart::make_image(encode_png(ctx.seq.frames[idx])));
    }
    request.messages.push_back(std::move(user));
    return ctx.provider.complete(request).text;
}

std::string compatibility_check(const std::string& input, ToolContext&) {
    const auto parsed = vlm::parse_structured_label(input);
    if (!parsed.ok()) return "could not parse a label object from the input";
    LabelRecord record;
    record.scenes = parsed.label->scenes;
    record.actions = parsed.label->actions;
    const auto violations = check_compatibility(record);
    if (violations.empty()) return "compatible: every action fits the given scenes";
    std::string out = "violations:";
    for (const auto& v : violations) {
        std::vector<std::string> names;
        for (Scene s : v.required_scenes) names.emplace_back(to_string(s));
        out += " " + std::string(to_string(v.action)) + " requires {" +
               util::join(names, ",") + "};";
    }
    return out;
}

}  // namespace

ToolRegistry ToolRegistry::standard() {
    ToolRegistry registry;
    registry.tools_ = {
        {"SegmentProbe",
         "report frame-pair diff scores and keyframes inside the unit (input: none)",
         segment_probe},
        {"CursorProbe",
         "track the cursor across the unit and report its pattern and path (input: none)",
         cursor_probe},
        {"ShiftProbe",
         "report detected vertical content shifts between consecutive frames (input: none)",
         shift_probe},
        {"ClassifyBehavior",
         "ask the vision model to code the unit's frames against the scheme (input: none)",
         classify_behavior},
        {"CompatibilityCheck",
         "check a label object for scene-action compatibility (input: the label JSON)",
         compatibility_check},
        {"Finish",
         "finish with the final label (input: the label JSON)",
         [](const std::string&, ToolContext&) -> std::string { return "final label recorded"; }},
    };
    return registry;
}

bool ToolRegistry::has(const std::string& name) const {
    return std::any_of(tools_.begin(), tools_.end(),
                       [&](const Tool& t) { return t.name == name; });
}

std::string ToolRegistry::execute(const std::string& name, const std::string& input,
                                  ToolContext& ctx) const {
    for (const auto& tool : tools_) {
        if (tool.name == name) return tool.run(input, ctx);
    }
    throw std::runtime_error("unknown tool: " + name);
}

std::vector<std::string> ToolRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& tool : tools_) out.push_back(tool.name);
    return out;
}

std::string ToolRegistry::descriptions_text() const {
    std::string out;
    for (const auto& tool : tools_) {
        out += "- " + tool.name + ": " + tool.description + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Loop

namespace {

std::string render_scratchpad(const ReactState& state) {
    std::string out;
    for (const auto& entry : state.scratchpad) {
        out += "Thought: " + entry.thought + "\n";
        out += "Action: " + entry.action_name + "\n";
        if (!entry.action_input.empty()) out += "Action input: " + entry.action_input + "\n";
        out += "Observation: " + entry.observation + "\n";
    }
    return out;
}

}  // namespace

ReactState react_step(ReactState state,
                      vlm::VlmProvider& provider,
                      const ToolRegistry& tools,
                      ToolContext& ctx,
                      const PromptLibrary& prompts,
                      const ReactConfig& config) {
    if (state.done) return state;

    vlm::ChatRequest request;
    request.model_id = config.model_id;
    vlm::ChatMessage system;
    system.role = "system";
    system.parts.push_back(ContentPart::make_text(prompts.render(
        "react_system",
        {{"TOOLS", tools.descriptions_text()}, {"TAXONOMY", taxonomy_prompt_block()}})));
    request.messages.push_back(std::move(system));

    vlm::ChatMessage user;
    user.role = "user";
    std::string text = "Unit " + state.unit_id + ", step " + std::to_string(state.step + 1) +
                       " of " + std::to_string(config.max_steps) + ".\n";
    if (!state.scratchpad.empty()) text += "Progress so far:\n" + render_scratchpad(state);
    text += fixture_tag(state.unit_id + ":s" + std::to_string(state.step + 1));
    user.parts.push_back(ContentPart::make_text(std::move(text)));
    request.messages.push_back(std::move(user));

    ScratchpadEntry entry;
    try {
        const vlm::ChatResponse response = provider.complete(request);
        const auto obj = vlm::extract_first_object(response.text);
        std::string action;
        if (obj && obj->contains("action") && (*obj)["action"].is_string()) {
            action = (*obj)["action"].get<std::string>();
        }
        if (!obj || !tools.has(action)) {
            entry.action_name = "(invalid)";
            entry.observation =
                "invalid action, choose from: " + util::join(tools.names(), ", ");
        } else {
            entry.thought = obj->value("thought", "");
            entry.action_name = action;
            if (obj->contains("action_input")) {
                const auto& input = (*obj)["action_input"];
                entry.action_input = input.is_string() ? input.get<std::string>() : input.dump();
            }
            if (action == "Finish") {
                const auto parsed = vlm::parse_structured_label(entry.action_input);
                if (parsed.ok()) {
                    state.final_label = parsed.label;
                    state.done = true;
                    entry.observation = "final label recorded";
                } else {
                    entry.observation =
                        "invalid action_input for Finish; expected a label object";
                }
            } else {
                try {
                    entry.observation = tools.execute(action, entry.action_input, ctx);
                } catch (const std::exception& e) {
                    entry.observation = std::string("tool error: ") + e.what();
                }
            }
        }
    } catch (const vlm::VlmError& e) {
        entry.action_name = "(provider-error)";
        entry.observation = std::string("provider error: ") + e.what();
    }

    state.scratchpad.push_back(std::move(entry));
    state.step += 1;
    return state;
}

LabelRecord reflect(const vlm::StructuredLabel& label,
                    const ReactState& state,
                    const ReactConfig& config) {
    LabelRecord record = baseline::label_to_record(state.unit_id, label);

    const auto violations = check_compatibility(record);
    for (const auto& violation : violations) {
        double& confidence = record.confidences[violation.action];
        confidence = std::max(0.0, confidence - config.incompatibility_penalty);
        std::vector<std::string> names;
        for (Scene s : violation.required_scenes) names.emplace_back(to_string(s));
        auto& note = record.evidence[violation.action];
        if (!note.empty()) note += " | ";
        note += "reflection: incompatible with detected scenes (requires " +
                util::join(names, ",") + "); confidence lowered";
    }

    bool flagged = !violations.empty();
    for (const auto& [action, confidence] : record.confidences) {
        if (confidence < config.review_threshold) flagged = true;
    }
    record.flagged = flagged;
    return record;
}

ReactOutcome run_react(const EvaluationUnit& unit,
                       const FrameSequence& seq,
                       vlm::VlmProvider& provider,
                       const PromptLibrary& prompts,
                       const ReactConfig& config) {
    const ToolRegistry tools = ToolRegistry::standard();
    ToolContext ctx{unit, seq, provider, prompts, config};

    ReactState state;
    state.unit_id = unit.unit_id;
    while (!state.done && state.step < config.max_steps) {
        state = react_step(std::move(state), provider, tools, ctx, prompts, config);
    }

    ReactOutcome outcome;
    if (state.final_label) {
        outcome.record = reflect(*state.final_label, state, config);
    } else {
        outcome.record = reflect(vlm::StructuredLabel{}, state, config);
        outcome.record.flagged = true;  // step exhaustion without Finish
    }
    outcome.state = std::move(state);
    return outcome;
}

}  // namespace screencode::react
