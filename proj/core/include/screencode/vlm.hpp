#pragma once

// Provider-agnostic chat-completion client for vision-language models over
// an OpenAI-compatible wire protocol, plus structured-output parsing and a
// deterministic scripted mock for offline runs.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screencode/taxonomy.hpp"

namespace screencode::vlm {

struct ContentPart {
    enum class Kind { Text, ImagePng };
    Kind kind = Kind::Text;
    std::string text;
    std::vector<uint8_t> png;

    static ContentPart make_text(std::string t) { return {Kind::Text, std::move(t), {}}; }
    static ContentPart make_image(std::vector<uint8_t> bytes) {
        return {Kind::ImagePng, {}, std::move(bytes)};
    }
};

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::vector<ContentPart> parts;
};

struct ChatRequest {
    std::string model_id;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 1024;
};

// All text parts concatenated; what the mock matches fixture tags against.
std::string request_text(const ChatRequest& req);

struct TokenUsage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
};

struct ChatResponse {
    std::string text;
    TokenUsage usage;
    long latency_ms = 0;
};

enum class VlmErrorKind { Network, Http, Payload };

class VlmError : public std::runtime_error {
public:
    VlmError(VlmErrorKind kind, const std::string& message, int status = 0)
        : std::runtime_error(message), kind_(kind), status_(status) {}
    VlmErrorKind kind() const { return kind_; }
    int status() const { return status_; }

private:
    VlmErrorKind kind_;
    int status_;
};

class VlmProvider {
public:
    virtual ~VlmProvider() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
};

// ---------------------------------------------------------------------------
// Structured-output parsing

struct StructuredLabel {
    SceneSet scenes;
    ActionSet actions;
    std::map<Action, double> confidences;  // keys ⊆ actions, values in [0,1]
    std::map<Action, std::string> evidence;

    bool operator==(const StructuredLabel&) const = default;
};

struct ParseResult {
    std::optional<StructuredLabel> label;
    std::string failure;  // set when label is empty
    std::vector<std::string> warnings;
    std::string raw_text;

    bool ok() const { return label.has_value(); }
};

// Never throws on arbitrary text: strips code fences, finds the first
// balanced JSON object, reads scenes/actions/confidences/evidence. Unknown
// names are dropped with a warning; missing confidences default to 0.5.
ParseResult parse_structured_label(const std::string& text);

// First parsable balanced {...} in the text, or nullopt.
std::optional<nlohmann::json> extract_first_object(const std::string& text);

// ---------------------------------------------------------------------------
// Token-bucket rate limiter (requests per minute; <=0 disables)

class RateLimiter {
public:
    explicit RateLimiter(int requests_per_minute = 0);
    void acquire();

private:
    int rpm_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
    std::mutex mu_;
};

// ---------------------------------------------------------------------------
// HTTP provider (OpenAI-compatible /chat/completions)

struct HttpProviderConfig {
    std::string endpoint;                             // e.g. "http://host:port/v1"
    std::string model_id;
    std::string api_key_env = "SCREENCODE_API_KEY";   // credentials read from env
    int max_retries = 3;                              // extra attempts after the first
    int backoff_base_ms = 1000;                       // 1 s, 2 s, 4 s
    int timeout_s = 120;
    int rate_limit_rpm = 0;
};

class HttpVlmProvider : public VlmProvider {
public:
    explicit HttpVlmProvider(HttpProviderConfig config);
    ChatResponse complete(const ChatRequest& req) override;

private:
    HttpProviderConfig config_;
    std::string host_;         // scheme://host[:port]
    std::string path_prefix_;  // e.g. "/v1"
    RateLimiter limiter_;
};

nlohmann::json build_wire_body(const ChatRequest& req);

// ---------------------------------------------------------------------------
// Scripted mock provider

// Script file: tab-separated "tag<TAB>response" lines (response may use \t,
// \n and \\ escapes); the tag "default" sets the fallback response; '#'
// lines are comments. The first rule whose tag occurs in the request text
// wins.
struct MockScript {
    struct Rule {
        std::string tag;
        std::string response;
    };
    std::vector<Rule> rules;
    std::string default_response;

    static MockScript load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

ChatResponse mock_resolve(const ChatRequest& req, const MockScript& script);

class MockVlmProvider : public VlmProvider {
public:
    explicit MockVlmProvider(MockScript script) : script_(std::move(script)) {}
    ChatResponse complete(const ChatRequest& req) override { return mock_resolve(req, script_); }

private:
    MockScript script_;
};

}  // namespace screencode::vlm
