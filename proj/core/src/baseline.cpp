#include "screencode/baseline.hpp"

#include <algorithm>

#include "screencode/label_io.hpp"
#include "screencode/png_io.hpp"

namespace screencode::baseline {

std::vector<Exemplar> default_exemplars() {
    std::vector<Exemplar> out;
    {
        Exemplar e;
        e.description =
            "A search engine results page; the cursor jumps between result links while a "
            "query sits in the search box, and a new results page appears midway.";
        e.label.scenes = {Scene::Web};
        e.label.actions = {Action::SearchingInternet};
        e.label.confidences = {{Action::SearchingInternet, 0.95}};
        out.push_back(std::move(e));
    }
    {
        Exemplar e;
        e.description =
            "A shared group document; new sentences appear line by line near the text "
            "caret while the rest of the page stays still.";
        e.label.scenes = {Scene::Docs};
        e.label.actions = {Action::GroupDocumentCoEditing};
        e.label.confidences = {{Action::GroupDocumentCoEditing, 0.95}};
        out.push_back(std::move(e));
    }
    {
        Exemplar e;
        e.description =
            "A generative AI chat; text grows in the prompt box at the bottom, then the "
            "conversation thread is read while it scrolls upward.";
        e.label.scenes = {Scene::GAI};
        e.label.actions = {Action::PromptingGAI, Action::ReadingWithScrolling};
        e.label.confidences = {{Action::PromptingGAI, 0.9}, {Action::ReadingWithScrolling, 0.8}};
        out.push_back(std::move(e));
    }
    {
        Exemplar e;
        e.description = "Nothing on the screen changes for the whole segment.";
        e.label.actions = {Action::Freezing};
        e.label.confidences = {{Action::Freezing, 0.9}};
        out.push_back(std::move(e));
    }
    return out;
}

std::string render_exemplars(const std::vector<Exemplar>& exemplars, int count) {
    std::string out;
    const int n = std::min<int>(count, static_cast<int>(exemplars.size()));
    for (int i = 0; i < n; ++i) {
        const Exemplar& e = exemplars[i];
        nlohmann::json label;
        label["scenes"] = nlohmann::json::array();
        for (Scene s : e.label.scenes) label["scenes"].push_back(std::string(to_string(s)));
        label["actions"] = nlohmann::json::array();
        for (Action a : e.label.actions) label["actions"].push_back(std::string(to_string(a)));
        label["confidences"] = nlohmann::json::object();
        for (const auto& [a, v] : e.label.confidences)
            label["confidences"][std::string(to_string(a))] = v;
        out += "Example " + std::to_string(i + 1) + ": " + e.description + "\n";
        out += "Label: " + label.dump() + "\n";
    }
    return out;
}

std::vector<int> select_frames(const std::vector<int>& frame_indices, int budget) {
    if (budget <= 0 || static_cast<int>(frame_indices.size()) <= budget) return frame_indices;
    std::vector<int> out;
    out.reserve(budget);
    const double step = static_cast<double>(frame_indices.size()) / budget;
    for (int k = 0; k < budget; ++k) {
        out.push_back(frame_indices[static_cast<size_t>(k * step)]);
    }
    return out;
}

LabelRecord label_to_record(const std::string& unit_id, const vlm::StructuredLabel& label) {
    LabelRecord record;
    record.unit_id = unit_id;
    record.scenes = label.scenes;
    record.actions = label.actions;
    for (Action a : label.actions) {
        auto it = label.confidences.find(a);
        record.confidences[a] = it != label.confidences.end() ? it->second : 0.5;
        auto ev = label.evidence.find(a);
        if (ev != label.evidence.end()) record.evidence[a] = ev->second;
    }
    return record;
}

LabelRecord few_shot_classify(const EvaluationUnit& unit,
                              const FrameSequence& seq,
                              vlm::VlmProvider& provider,
                              const PromptLibrary& prompts,
                              const BaselineConfig& config,
                              const std::vector<Exemplar>& exemplars) {
    vlm::ChatRequest request;
    request.model_id = config.model_id;

    vlm::ChatMessage system;
    system.role = "system";
    system.parts.push_back(vlm::ContentPart::make_text(
        prompts.render("few_shot_system", {{"TAXONOMY", taxonomy_prompt_block()}})));
    request.messages.push_back(std::move(system));

    vlm::ChatMessage user;
    user.role = "user";
    user.parts.push_back(vlm::ContentPart::make_text(prompts.render(
        "few_shot_user", {{"EXEMPLARS", render_exemplars(exemplars, config.exemplar_count)},
                          {"FIXTURE_TAG", fixture_tag(unit.unit_id)}})));
    for (int idx : select_frames(unit.frame_indices, config.image_budget)) {
        user.parts.push_back(vlm::ContentPart::make_image(encode_png(seq.frames[idx])));
    }
    request.messages.push_back(std::move(user));

    vlm::ChatResponse response = provider.complete(request);
    vlm::ParseResult parsed = vlm::parse_structured_label(response.text);
    if (!parsed.ok()) {
        // one corrective re-prompt, then give up and flag
        vlm::ChatMessage assistant;
        assistant.role = "assistant";
        assistant.parts.push_back(vlm::ContentPart::make_text(response.text));
        request.messages.push_back(std::move(assistant));
        vlm::ChatMessage fix;
        fix.role = "user";
        fix.parts.push_back(vlm::ContentPart::make_text(
            "Reply with a single JSON object with fields scenes, actions, confidences and "
            "evidence, and no other text. " +
            fixture_tag(unit.unit_id)));
        request.messages.push_back(std::move(fix));
        response = provider.complete(request);
        parsed = vlm::parse_structured_label(response.text);
    }
    if (!parsed.ok()) {
        LabelRecord record;
        record.unit_id = unit.unit_id;
        record.flagged = true;
        return record;
    }
    return label_to_record(unit.unit_id, *parsed.label);
}

}  // namespace screencode::baseline
