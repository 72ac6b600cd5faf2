#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "screencode/baseline.hpp"
#include "screencode/react.hpp"
#include "screencode/vision.hpp"
#include "screencode/vlm.hpp"
#include "screencode/workflow.hpp"

namespace screencode {

inline constexpr const char* kVersion = "0.1.0";

// Invalid configuration; the CLI maps this to a usage error (exit 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    enum class Mode { Single, Workflow, React };
    Mode mode = Mode::Single;

    std::filesystem::path input_dir;
    std::filesystem::path output_dir;

    // provider
    bool mock = false;
    std::filesystem::path mock_script;
    std::string endpoint;
    std::string model_id;
    std::string credentials_env = "SCREENCODE_API_KEY";
    int rate_limit_rpm = 0;
    int max_retries = 3;
    int backoff_base_ms = 1000;
    int timeout_s = 120;

    // ingest
    double fps = 1.0;
    double window_s = 20.0;
    std::string decoder_command;

    vision::VisionConfig vision;

    // strategy tunables
    int image_budget = 20;
    int exemplar_count = 3;
    int icvp_frame_stride = 4;
    double confidence_override = 0.85;
    double localized_min_diff = 0.005;
    double localized_max_bbox_fraction = 0.3;
    double freeze_diff_eps = 0.005;
    int max_steps = 8;
    double incompatibility_penalty = 0.3;
    double review_threshold = 0.5;

    // execution
    int jobs = 1;
    std::filesystem::path prompt_dir;

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    // Throws ConfigError: a non-mock run needs an endpoint and a credentials
    // variable name; thresholds must sit in their documented ranges.
    void validate() const;

    workflow::WorkflowConfig workflow_config() const;
    react::ReactConfig react_config() const;
    baseline::BaselineConfig baseline_config() const;
    vlm::HttpProviderConfig provider_config() const;
};

std::string_view to_string(RunConfig::Mode mode);
std::optional<RunConfig::Mode> mode_from_string(std::string_view name);

}  // namespace screencode
