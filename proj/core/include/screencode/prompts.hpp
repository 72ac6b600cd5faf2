#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace screencode {

// Prompt templates ship as editable files under prompts/ (<name>.txt);
// built-in defaults with the same content back them so the library works
// without the files. {{NAME}} placeholders are substituted at render time.
class PromptLibrary {
public:
    static PromptLibrary builtin();
    // Builtin templates with any <name>.txt found in dir layered on top.
    static PromptLibrary load(const std::filesystem::path& dir);

    const std::string& text(const std::string& name) const;
    std::string render(const std::string& name,
                       const std::vector<std::pair<std::string, std::string>>& vars) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, std::string> templates_;
};

// Behavior-coding scheme rendered as prompt text: every action with its
// engagement level, compatible scenes, and operational definition.
std::string taxonomy_prompt_block();

// Marker the pipeline embeds in every prompt so the scripted mock can key
// canned replies to synthetic units.
std::string fixture_tag(const std::string& id);

}  // namespace screencode
