#include "screencode/taxonomy.hpp"

#include "screencode/util.hpp"

namespace screencode {

std::string_view to_string(Scene s) {
    switch (s) {
        case Scene::GAI: return "gai";
        case Scene::Web: return "web";
        case Scene::Docs: return "docs";
    }
    return "?";
}

std::string_view to_string(Action a) {
    switch (a) {
        case Action::SearchingInternet: return "searching_internet";
        case Action::TickingAnswers: return "ticking_answers";
        case Action::ReadingWithHighlighting: return "reading_with_highlighting";
        case Action::CopyAndPaste: return "copy_and_paste";
        case Action::PromptingGAI: return "prompting_gai";
        case Action::GroupDocumentCoEditing: return "group_document_co_editing";
        case Action::ReadingWithScrolling: return "reading_with_scrolling";
        case Action::Freezing: return "freezing";
    }
    return "?";
}

std::string_view to_string(IcapLevel l) {
    switch (l) {
        case IcapLevel::Active: return "active";
        case IcapLevel::Constructive: return "constructive";
        case IcapLevel::Interactive: return "interactive";
        case IcapLevel::Passive: return "passive";
        case IcapLevel::Conceal: return "conceal";
    }
    return "?";
}

namespace {

std::string normalize_name(std::string_view name) {
    std::string s = util::to_lower(util::trim(name));
    for (char& c : s) {
        if (c == ' ' || c == '-') c = '_';
    }
    return s;
}

}  // namespace

std::optional<Scene> scene_from_string(std::string_view name) {
    const std::string s = normalize_name(name);
    for (Scene scene : kAllScenes) {
        if (s == to_string(scene)) return scene;
    }
    return std::nullopt;
}

std::optional<Action> action_from_string(std::string_view name) {
    const std::string s = normalize_name(name);
    for (Action action : kAllActions) {
        if (s == to_string(action)) return action;
    }
    return std::nullopt;
}

std::string_view action_definition(Action a) {
    switch (a) {
        case Action::SearchingInternet:
            return "looking up information with a web search engine or another online source";
        case Action::TickingAnswers:
            return "selecting or correcting answers in multiple-choice questions";
        case Action::ReadingWithHighlighting:
            return "reading while marking text on screen with the cursor";
        case Action::CopyAndPaste:
            return "copying selected content and pasting it into the shared group document";
        case Action::PromptingGAI:
            return "writing prompts for a generative AI tool";
        case Action::GroupDocumentCoEditing:
            return "editing the shared group document: adding, deleting, or revising content";
        case Action::ReadingWithScrolling:
            return "reading content while scrolling up or down, possibly with minor cursor movement";
        case Action::Freezing:
            return "no on-screen activity detected";
    }
    return "?";
}

SceneSet compatible_scenes(Action a) {
    static const SceneSet all{Scene::GAI, Scene::Web, Scene::Docs};
    switch (a) {
        case Action::SearchingInternet: return {Scene::Web};
        case Action::TickingAnswers: return {Scene::Docs};
        case Action::ReadingWithHighlighting: return all;
        case Action::CopyAndPaste: return all;
        case Action::PromptingGAI: return {Scene::GAI};
        case Action::GroupDocumentCoEditing: return {Scene::Docs};
        case Action::ReadingWithScrolling: return all;
        case Action::Freezing: return all;
    }
    return all;
}

IcapLevel icap_level(Action a) {
    switch (a) {
        case Action::SearchingInternet: return IcapLevel::Active;
        case Action::TickingAnswers: return IcapLevel::Active;
        case Action::ReadingWithHighlighting: return IcapLevel::Active;
        case Action::CopyAndPaste: return IcapLevel::Active;
        case Action::PromptingGAI: return IcapLevel::Constructive;
        case Action::GroupDocumentCoEditing: return IcapLevel::Interactive;
        case Action::ReadingWithScrolling: return IcapLevel::Passive;
        case Action::Freezing: return IcapLevel::Conceal;
    }
    return IcapLevel::Active;
}

std::vector<CompatibilityViolation> check_compatibility(const LabelRecord& record) {
    std::vector<CompatibilityViolation> violations;
    for (Action a : record.actions) {
        if (a == Action::Freezing && record.scenes.empty()) continue;
        const SceneSet required = compatible_scenes(a);
        bool intersects = false;
        for (Scene s : record.scenes) {
            if (required.count(s)) {
                intersects = true;
                break;
            }
        }
        if (!intersects) violations.push_back({a, required});
    }
    return violations;
}

}  // namespace screencode
