#pragma once

// Label taxonomy for on-screen collaborative-learning behavior coding: three
// scene types, eight actions, and the engagement level each action maps to.
// A 20-second evaluation unit carries a SET of scenes and a SET of actions.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace screencode {

enum class Scene { GAI, Web, Docs };

enum class Action {
    SearchingInternet,
    TickingAnswers,
    ReadingWithHighlighting,
    CopyAndPaste,
    PromptingGAI,
    GroupDocumentCoEditing,
    ReadingWithScrolling,
    Freezing,
};

enum class IcapLevel { Active, Constructive, Interactive, Passive, Conceal };

inline constexpr std::array<Scene, 3> kAllScenes{Scene::GAI, Scene::Web, Scene::Docs};
inline constexpr std::array<Action, 8> kAllActions{
    Action::SearchingInternet,    Action::TickingAnswers,
    Action::ReadingWithHighlighting, Action::CopyAndPaste,
    Action::PromptingGAI,         Action::GroupDocumentCoEditing,
    Action::ReadingWithScrolling, Action::Freezing,
};

// Stable serialization names ("gai", "searching_internet", ...).
std::string_view to_string(Scene s);
std::string_view to_string(Action a);
std::string_view to_string(IcapLevel l);

// Tolerant parse: case-insensitive, spaces and hyphens fold to underscores.
std::optional<Scene> scene_from_string(std::string_view name);
std::optional<Action> action_from_string(std::string_view name);

// One-line operational definition, used when composing classification prompts.
std::string_view action_definition(Action a);

using SceneSet = std::set<Scene>;
using ActionSet = std::set<Action>;

SceneSet compatible_scenes(Action a);
IcapLevel icap_level(Action a);

struct EvaluationUnit {
    std::string unit_id;
    double start_s = 0.0;
    double duration_s = 20.0;
    std::vector<int> frame_indices;  // non-empty, strictly increasing
};

// Gold or predicted labels for one evaluation unit. Confidence, evidence and
// the review flag are only populated on predictions.
struct LabelRecord {
    std::string unit_id;
    SceneSet scenes;
    ActionSet actions;
    std::map<Action, double> confidences;
    std::map<Action, std::string> evidence;
    bool flagged = false;

    bool operator==(const LabelRecord&) const = default;
};

struct CompatibilityViolation {
    Action action;
    SceneSet required_scenes;

    bool operator==(const CompatibilityViolation&) const = default;
};

// Returns each action in the record whose compatible-scene set does not
// intersect the record's scenes. Freezing with an empty scene set is allowed
// (a frozen screen may be unclassifiable); every other action needs a scene.
std::vector<CompatibilityViolation> check_compatibility(const LabelRecord& record);

}  // namespace screencode
