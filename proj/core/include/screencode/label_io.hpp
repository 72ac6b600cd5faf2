#pragma once

// Label file format: one record per line, UTF-8, tab-separated.
//   unit_id <TAB> scenes <TAB> actions [<TAB> confidences [<TAB> evidence [<TAB> flagged]]]
// scenes/actions are semicolon-joined names; confidences are
// "action=0.9000" pairs; evidence values are backslash-escaped
// (\t \n \; \\). Lines starting with '#' are comments.

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "screencode/taxonomy.hpp"

namespace screencode {

std::string record_to_tsv_line(const LabelRecord& record, bool prediction_columns);
LabelRecord record_from_tsv_line(const std::string& line);

void write_label_file(const std::filesystem::path& path,
                      const std::vector<LabelRecord>& records,
                      bool prediction_columns = true);
std::vector<LabelRecord> read_label_file(const std::filesystem::path& path);

nlohmann::json record_to_json(const LabelRecord& record);
LabelRecord record_from_json(const nlohmann::json& j);

}  // namespace screencode
