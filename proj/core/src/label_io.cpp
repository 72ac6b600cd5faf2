#include "screencode/label_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "screencode/util.hpp"

namespace screencode {

namespace {

std::string escape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case ';': out += "\\;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_field(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        ++i;
        switch (s[i]) {
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case ';': out += ';'; break;
            case '\\': out += '\\'; break;
            default: out += s[i];
        }
    }
    return out;
}

// Splits on ';' but not on '\;'.
std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string current;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            current += s[i];
            current += s[i + 1];
            ++i;
        } else if (s[i] == ';') {
            out.push_back(current);
            current.clear();
        } else {
            current += s[i];
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

Scene parse_scene_or_throw(const std::string& name) {
    auto s = scene_from_string(name);
    if (!s) throw std::runtime_error("unknown scene name: " + name);
    return *s;
}

Action parse_action_or_throw(const std::string& name) {
    auto a = action_from_string(name);
    if (!a) throw std::runtime_error("unknown action name: " + name);
    return *a;
}

}  // namespace

std::string record_to_tsv_line(const LabelRecord& record, bool prediction_columns) {
    std::vector<std::string> scenes, actions;
    for (Scene s : record.scenes) scenes.emplace_back(to_string(s));
    for (Action a : record.actions) actions.emplace_back(to_string(a));

    std::string line = record.unit_id;
    line += '\t';
    line += util::join(scenes, ";");
    line += '\t';
    line += util::join(actions, ";");
    if (!prediction_columns) return line;

    std::vector<std::string> confs, evid;
    for (const auto& [a, v] : record.confidences)
        confs.push_back(std::string(to_string(a)) + "=" + util::format_double(v));
    for (const auto& [a, text] : record.evidence)
        evid.push_back(std::string(to_string(a)) + "=" + escape_field(text));
    line += '\t';
    line += util::join(confs, ";");
    line += '\t';
    line += util::join(evid, ";");
    line += '\t';
    line += record.flagged ? '1' : '0';
    return line;
}

LabelRecord record_from_tsv_line(const std::string& line) {
    const auto fields = util::split(line, '\t');
    if (fields.size() < 3) {
        throw std::runtime_error("label line needs at least 3 tab-separated fields: " + line);
    }
    LabelRecord record;
    record.unit_id = fields[0];
    if (record.unit_id.empty()) throw std::runtime_error("empty unit_id in label line");
    for (const auto& name : split_list(fields[1])) {
        if (!util::trim(name).empty()) record.scenes.insert(parse_scene_or_throw(name));
    }
    for (const auto& name : split_list(fields[2])) {
        if (!util::trim(name).empty()) record.actions.insert(parse_action_or_throw(name));
    }
    if (fields.size() > 3) {
        for (const auto& pair : split_list(fields[3])) {
            if (util::trim(pair).empty()) continue;
            const size_t eq = pair.find('=');
            if (eq == std::string::npos) throw std::runtime_error("bad confidence entry: " + pair);
            record.confidences[parse_action_or_throw(pair.substr(0, eq))] =
                std::stod(pair.substr(eq + 1));
        }
    }
    if (fields.size() > 4) {
        for (const auto& pair : split_list(fields[4])) {
            if (util::trim(pair).empty()) continue;
            const size_t eq = pair.find('=');
            if (eq == std::string::npos) throw std::runtime_error("bad evidence entry: " + pair);
            record.evidence[parse_action_or_throw(pair.substr(0, eq))] =
                unescape_field(pair.substr(eq + 1));
        }
    }
    if (fields.size() > 5) {
        const std::string flag = util::trim(fields[5]);
        record.flagged = (flag == "1" || flag == "true");
    }
    return record;
}

void write_label_file(const std::filesystem::path& path,
                      const std::vector<LabelRecord>& records,
                      bool prediction_columns) {
    std::string out = "# unit_id\tscenes\tactions";
    if (prediction_columns) out += "\tconfidences\tevidence\tflagged";
    out += '\n';
    for (const auto& record : records) {
        out += record_to_tsv_line(record, prediction_columns);
        out += '\n';
    }
    util::write_text_file(path, out);
}

std::vector<LabelRecord> read_label_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path.string());
    std::vector<LabelRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            records.push_back(record_from_tsv_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return records;
}

nlohmann::json record_to_json(const LabelRecord& record) {
    nlohmann::json j;
    j["unit_id"] = record.unit_id;
    j["scenes"] = nlohmann::json::array();
    for (Scene s : record.scenes) j["scenes"].push_back(std::string(to_string(s)));
    j["actions"] = nlohmann::json::array();
    for (Action a : record.actions) j["actions"].push_back(std::string(to_string(a)));
    j["confidences"] = nlohmann::json::object();
    for (const auto& [a, v] : record.confidences) j["confidences"][std::string(to_string(a))] = v;
    j["evidence"] = nlohmann::json::object();
    for (const auto& [a, text] : record.evidence) j["evidence"][std::string(to_string(a))] = text;
    j["flagged"] = record.flagged;
    return j;
}

LabelRecord record_from_json(const nlohmann::json& j) {
    LabelRecord record;
    record.unit_id = j.value("unit_id", "");
    for (const auto& name : j.value("scenes", nlohmann::json::array()))
        record.scenes.insert(parse_scene_or_throw(name.get<std::string>()));
    for (const auto& name : j.value("actions", nlohmann::json::array()))
        record.actions.insert(parse_action_or_throw(name.get<std::string>()));
    if (j.contains("confidences")) {
        for (const auto& [name, v] : j.at("confidences").items())
            record.confidences[parse_action_or_throw(name)] = v.get<double>();
    }
    if (j.contains("evidence")) {
        for (const auto& [name, text] : j.at("evidence").items())
            record.evidence[parse_action_or_throw(name)] = text.get<std::string>();
    }
    record.flagged = j.value("flagged", false);
    return record;
}

}  // namespace screencode
