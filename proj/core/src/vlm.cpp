#include "screencode/vlm.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "screencode/util.hpp"

namespace screencode::vlm {

using nlohmann::json;

std::string request_text(const ChatRequest& req) {
    std::string out;
    for (const auto& msg : req.messages) {
        for (const auto& part : msg.parts) {
            if (part.kind == ContentPart::Kind::Text) {
                out += part.text;
                out += '\n';
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structured-output parsing

std::optional<json> extract_first_object(const std::string& text) {
    size_t search_from = 0;
    while (true) {
        const size_t open = text.find('{', search_from);
        if (open == std::string::npos) return std::nullopt;

        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (size_t i = open; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                --depth;
                if (depth == 0) {
                    json parsed = json::parse(text.substr(open, i - open + 1), nullptr, false);
                    if (!parsed.is_discarded()) return parsed;
                    break;  // balanced but not valid JSON; try the next '{'
                }
            }
        }
        search_from = open + 1;
    }
}

namespace {

std::string strip_code_fences(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "```") == 0) {
            i += 3;
            // swallow an optional language tag directly after the fence
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])))) ++i;
        } else {
            out += text[i++];
        }
    }
    return out;
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

ParseResult parse_structured_label(const std::string& text) {
    ParseResult result;
    result.raw_text = text;

    std::optional<json> obj;
    try {
        obj = extract_first_object(strip_code_fences(text));
    } catch (...) {
        obj = std::nullopt;
    }
    if (!obj) {
        result.failure = "no JSON object found in reply";
        return result;
    }

    StructuredLabel label;
    const json& j = *obj;
    if (j.contains("scenes") && j["scenes"].is_array()) {
        for (const auto& item : j["scenes"]) {
            if (!item.is_string()) {
                result.warnings.push_back("non-string scene entry dropped");
                continue;
            }
            if (auto s = scene_from_string(item.get<std::string>())) {
                label.scenes.insert(*s);
            } else {
                result.warnings.push_back("unknown scene " + item.get<std::string>());
            }
        }
    }
    if (j.contains("actions") && j["actions"].is_array()) {
        for (const auto& item : j["actions"]) {
            if (!item.is_string()) {
                result.warnings.push_back("non-string action entry dropped");
                continue;
            }
            if (auto a = action_from_string(item.get<std::string>())) {
                label.actions.insert(*a);
            } else {
                result.warnings.push_back("unknown action " + item.get<std::string>());
            }
        }
    }
    if (j.contains("confidences") && j["confidences"].is_object()) {
        for (const auto& [name, value] : j["confidences"].items()) {
            const auto a = action_from_string(name);
            if (!a) {
                result.warnings.push_back("unknown action " + name + " in confidences");
                continue;
            }
            if (!label.actions.count(*a)) {
                result.warnings.push_back("confidence for absent action " + name + " dropped");
                continue;
            }
            if (!value.is_number()) {
                result.warnings.push_back("non-numeric confidence for " + name + " dropped");
                continue;
            }
            label.confidences[*a] = clip01(value.get<double>());
        }
    }
    if (j.contains("evidence") && j["evidence"].is_object()) {
        for (const auto& [name, value] : j["evidence"].items()) {
            const auto a = action_from_string(name);
            if (!a || !label.actions.count(*a)) continue;
            if (value.is_string()) label.evidence[*a] = value.get<std::string>();
        }
    }
    for (Action a : label.actions) {
        if (!label.confidences.count(a)) label.confidences[a] = 0.5;
    }
    result.label = std::move(label);
    return result;
}

// ---------------------------------------------------------------------------
// Rate limiter

RateLimiter::RateLimiter(int requests_per_minute)
    : rpm_(requests_per_minute),
      tokens_(requests_per_minute > 0 ? requests_per_minute : 0),
      last_refill_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    if (rpm_ <= 0) return;
    std::unique_lock lock(mu_);
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        const double elapsed_s = std::chrono::duration<double>(now - last_refill_).count();
        tokens_ = std::min<double>(rpm_, tokens_ + elapsed_s * rpm_ / 60.0);
        last_refill_ = now;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const double wait_s = (1.0 - tokens_) * 60.0 / rpm_;
        lock.unlock();
        std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
        lock.lock();
    }
}

// ---------------------------------------------------------------------------
// HTTP provider

json build_wire_body(const ChatRequest& req) {
    json body;
    body["model"] = req.model_id;
    body["temperature"] = req.temperature;
    body["max_tokens"] = req.max_tokens;
    body["messages"] = json::array();
    for (const auto& msg : req.messages) {
        json m;
        m["role"] = msg.role;
        if (msg.parts.size() == 1 && msg.parts[0].kind == ContentPart::Kind::Text) {
            m["content"] = msg.parts[0].text;
        } else {
            json parts = json::array();
            for (const auto& part : msg.parts) {
                if (part.kind == ContentPart::Kind::Text) {
                    parts.push_back({{"type", "text"}, {"text", part.text}});
                } else {
                    parts.push_back(
                        {{"type", "image_url"},
                         {"image_url",
                          {{"url", "data:image/png;base64," +
                                       util::base64_encode(part.png.data(), part.png.size())}}}});
                }
            }
            m["content"] = std::move(parts);
        }
        body["messages"].push_back(std::move(m));
    }
    return body;
}

namespace {

// "http://host:1234/v1" -> {"http://host:1234", "/v1"}
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const size_t scheme = endpoint.find("://");
    const size_t path_start =
        endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string path = endpoint.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {endpoint.substr(0, path_start), path};
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpVlmProvider::HttpVlmProvider(HttpProviderConfig config)
    : config_(std::move(config)), limiter_(config_.rate_limit_rpm) {
    auto [host, path] = split_endpoint(config_.endpoint);
    host_ = std::move(host);
    path_prefix_ = std::move(path);
}

ChatResponse HttpVlmProvider::complete(const ChatRequest& req) {
    ChatRequest wire = req;
    if (wire.model_id.empty()) wire.model_id = config_.model_id;
    const std::string body = build_wire_body(wire).dump();
    const std::string path = path_prefix_ + "/chat/completions";

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    const int attempts = 1 + std::max(0, config_.max_retries);
    std::string last_error;
    int last_status = 0;
    const auto started = std::chrono::steady_clock::now();

    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.backoff_base_ms << (attempt - 1)));
        }
        limiter_.acquire();

        httplib::Client client(host_);
        client.set_connection_timeout(config_.timeout_s);
        client.set_read_timeout(config_.timeout_s);
        client.set_write_timeout(config_.timeout_s);

        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            last_error = "network failure: " + httplib::to_string(res.error());
            last_status = 0;
            continue;  // timeouts and connection errors retry
        }
        if (res->status < 200 || res->status >= 300) {
            last_status = res->status;
            last_error = "status " + std::to_string(res->status);
            if (retryable_status(res->status)) continue;
            throw VlmError(VlmErrorKind::Http,
                           "provider rejected request (" + last_error + ")", res->status);
        }

        json payload = json::parse(res->body, nullptr, false);
        if (payload.is_discarded() || !payload.contains("choices") ||
            !payload["choices"].is_array() || payload["choices"].empty()) {
            throw VlmError(VlmErrorKind::Payload, "malformed provider payload");
        }
        const json& choice = payload["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content")) {
            throw VlmError(VlmErrorKind::Payload, "malformed provider payload: missing content");
        }

        ChatResponse response;
        const json& content = choice["message"]["content"];
        response.text = content.is_string() ? content.get<std::string>() : content.dump();
        if (payload.contains("usage")) {
            response.usage.prompt_tokens = payload["usage"].value("prompt_tokens", 0L);
            response.usage.completion_tokens = payload["usage"].value("completion_tokens", 0L);
        }
        response.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
        return response;
    }

    if (last_status != 0) {
        throw VlmError(VlmErrorKind::Http,
                       "provider unavailable after " + std::to_string(attempts) + " attempts (" +
                           last_error + ")",
                       last_status);
    }
    throw VlmError(VlmErrorKind::Network, "provider unreachable after " +
                                              std::to_string(attempts) + " attempts (" +
                                              last_error + ")");
}

// ---------------------------------------------------------------------------
// Scripted mock

namespace {

std::string escape_script(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_script(std::string_view s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out += s[i];
            continue;
        }
        ++i;
        switch (s[i]) {
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case '\\': out += '\\'; break;
            default: out += s[i];
        }
    }
    return out;
}

}  // namespace

MockScript MockScript::load(const std::filesystem::path& path) {
    MockScript script;
    const std::string content = util::read_text_file(path);
    size_t line_no = 0;
    for (const auto& raw_line : util::split(content, '\n')) {
        ++line_no;
        std::string line = raw_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": mock script line needs tag<TAB>response");
        }
        const std::string tag = line.substr(0, tab);
        const std::string response = unescape_script(line.substr(tab + 1));
        if (tag == "default") {
            script.default_response = response;
        } else {
            script.rules.push_back({tag, response});
        }
    }
    return script;
}

void MockScript::save(const std::filesystem::path& path) const {
    std::string out = "# tag\tresponse\n";
    for (const auto& rule : rules) {
        out += rule.tag;
        out += '\t';
        out += escape_script(rule.response);
        out += '\n';
    }
    out += "default\t";
    out += escape_script(default_response);
    out += '\n';
    util::write_text_file(path, out);
}

ChatResponse mock_resolve(const ChatRequest& req, const MockScript& script) {
    const std::string text = request_text(req);
    for (const auto& rule : script.rules) {
        if (text.find(rule.tag) != std::string::npos) {
            return ChatResponse{rule.response, {}, 0};
        }
    }
    return ChatResponse{script.default_response, {}, 0};
}

}  // namespace screencode::vlm
