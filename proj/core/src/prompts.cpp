#include "screencode/prompts.hpp"

#include <stdexcept>

#include "screencode/taxonomy.hpp"
#include "screencode/util.hpp"

namespace screencode {

namespace {

constexpr const char* kFewShotSystem = R"(You code on-screen collaborative-learning behavior from screen-recording frames.
Each task shows the sampled frames of one 20-second segment of a student's screen.

Coding scheme:
{{TAXONOMY}}

Decide which scenes are visible anywhere in the segment and which actions occur.
A segment may contain several scenes and several actions. Use "freezing" only
when nothing on the screen changes.

Reply with a single JSON object and nothing else:
{"scenes": ["..."], "actions": ["..."], "confidences": {"<action>": 0.0-1.0}, "evidence": {"<action>": "<short rationale>"}}
)";

constexpr const char* kFewShotUser = R"(Here are worked examples of coded segments:
{{EXEMPLARS}}

Now code the following segment. The frames below were sampled at one frame per second.
{{FIXTURE_TAG}}
)";

constexpr const char* kSceneClassify = R"(Classify the on-screen scene shown in this frame.
Scenes:
- gai: a generative AI chat interface (prompt box, conversation thread)
- web: web content such as a search engine or article page
- docs: a shared group document editor

Reply with a single JSON object: {"scene": "gai" | "web" | "docs"}
{{FIXTURE_TAG}}
)";

constexpr const char* kIcvpTask = R"(You analyze one scene-homogeneous span of a screen recording.
Scene for this span: {{SCENE}}

Cursor evidence extracted by frame differencing:
{{CURSOR_SUMMARY}}

Scene-specific guidance:
{{GUIDANCE}}

Coding scheme:
{{TAXONOMY}}

The attached frames were sampled from the span; a red box, when present,
marks the region of cursor activity. Decide which actions occur in this span.

Reply with a single JSON object and nothing else:
{"actions": ["..."], "confidences": {"<action>": 0.0-1.0}, "evidence": {"<action>": "<short rationale>"}}
{{FIXTURE_TAG}}
)";

constexpr const char* kGuidanceGai = R"(In a generative AI interface, look for prompt composition: text growing in the
input box, send actions, and new responses streaming into the thread. Repeated
localized changes near the input box indicate prompting_gai. A still thread
with a slowly moving cursor indicates reading; no change at all is freezing.)";

constexpr const char* kGuidanceWeb = R"(On web content, look for query typing in the search box, result pages replacing
each other, and link-to-link cursor jumps (searching_internet). A horizontal
cursor sweep over text suggests reading_with_highlighting or copy_and_paste;
steady vertical content movement with a quiet cursor suggests
reading_with_scrolling.)";

constexpr const char* kGuidanceDocs = R"(In a shared document, look for text being added, deleted, or revised
(group_document_co_editing), answer options being ticked or corrected
(ticking_answers), and pasted blocks appearing after a cursor jump
(copy_and_paste). Content moving vertically under a quiet cursor is
reading_with_scrolling.)";

constexpr const char* kReactSystem = R"(You analyze one 20-second segment of a screen recording step by step.
At each step, choose exactly one tool, observe its result, and adjust.

Available tools:
{{TOOLS}}

Coding scheme:
{{TAXONOMY}}

Reply with a single JSON object and nothing else:
{"thought": "<your reasoning>", "action": "<tool name>", "action_input": "<tool input>"}

Call Finish when you are confident; its action_input must be the final label
object: {"scenes": [...], "actions": [...], "confidences": {...}, "evidence": {...}}
)";

constexpr const char* kClassifyBehavior = R"(Code the on-screen behavior in these frames from one 20-second segment.

Coding scheme:
{{TAXONOMY}}

Reply with a single JSON object and nothing else:
{"scenes": ["..."], "actions": ["..."], "confidences": {"<action>": 0.0-1.0}, "evidence": {"<action>": "<short rationale>"}}
{{FIXTURE_TAG}}
)";

std::map<std::string, std::string> builtin_templates() {
    return {
        {"few_shot_system", kFewShotSystem},
        {"few_shot_user", kFewShotUser},
        {"scene_classify", kSceneClassify},
        {"icvp_task", kIcvpTask},
        {"icvp_guidance_gai", kGuidanceGai},
        {"icvp_guidance_web", kGuidanceWeb},
        {"icvp_guidance_docs", kGuidanceDocs},
        {"react_system", kReactSystem},
        {"classify_behavior", kClassifyBehavior},
    };
}

}  // namespace

PromptLibrary PromptLibrary::builtin() {
    PromptLibrary lib;
    lib.templates_ = builtin_templates();
    return lib;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib = builtin();
    if (dir.empty() || !std::filesystem::is_directory(dir)) return lib;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        lib.templates_[entry.path().stem().string()] = util::read_text_file(entry.path());
    }
    return lib;
}

const std::string& PromptLibrary::text(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw std::runtime_error("unknown prompt template: " + name);
    return it->second;
}

std::string PromptLibrary::render(
    const std::string& name,
    const std::vector<std::pair<std::string, std::string>>& vars) const {
    return util::render_template(text(name), vars);
}

std::vector<std::string> PromptLibrary::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : templates_) out.push_back(name);
    return out;
}

std::string taxonomy_prompt_block() {
    std::string out;
    for (Action a : kAllActions) {
        std::vector<std::string> scenes;
        for (Scene s : compatible_scenes(a)) scenes.emplace_back(to_string(s));
        out += "- ";
        out += to_string(a);
        out += " (engagement: ";
        out += to_string(icap_level(a));
        out += "; scenes: ";
        out += util::join(scenes, ", ");
        out += "): ";
        out += action_definition(a);
        out += "\n";
    }
    return out;
}

std::string fixture_tag(const std::string& id) { return "[FIXTURE:" + id + "]"; }

}  // namespace screencode
