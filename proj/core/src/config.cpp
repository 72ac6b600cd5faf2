#include "screencode/config.hpp"

#include "screencode/util.hpp"

namespace screencode {

std::string_view to_string(RunConfig::Mode mode) {
    switch (mode) {
        case RunConfig::Mode::Single: return "single";
        case RunConfig::Mode::Workflow: return "workflow";
        case RunConfig::Mode::React: return "react";
    }
    return "?";
}

std::optional<RunConfig::Mode> mode_from_string(std::string_view name) {
    const std::string s = util::to_lower(util::trim(name));
    if (s == "single") return RunConfig::Mode::Single;
    if (s == "workflow") return RunConfig::Mode::Workflow;
    if (s == "react") return RunConfig::Mode::React;
    return std::nullopt;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("mode")) {
        const auto mode = mode_from_string(j["mode"].get<std::string>());
        if (!mode) throw ConfigError("unknown mode: " + j["mode"].get<std::string>());
        c.mode = *mode;
    }
    c.input_dir = j.value("input_dir", std::string());
    c.output_dir = j.value("output_dir", std::string());
    c.mock = j.value("mock", false);
    c.mock_script = j.value("mock_script", std::string());
    c.endpoint = j.value("endpoint", std::string());
    c.model_id = j.value("model_id", std::string());
    c.credentials_env = j.value("credentials_env", std::string("SCREENCODE_API_KEY"));
    c.rate_limit_rpm = j.value("rate_limit_rpm", 0);
    c.max_retries = j.value("max_retries", 3);
    c.backoff_base_ms = j.value("backoff_base_ms", 1000);
    c.timeout_s = j.value("timeout_s", 120);
    c.fps = j.value("fps", 1.0);
    c.window_s = j.value("window_s", 20.0);
    c.decoder_command = j.value("decoder_command", std::string());

    if (j.contains("vision")) {
        const auto& v = j["vision"];
        c.vision.keyframe_tau = v.value("keyframe_tau", c.vision.keyframe_tau);
        c.vision.cursor_diff_threshold =
            v.value("cursor_diff_threshold", c.vision.cursor_diff_threshold);
        c.vision.cursor_min_area_px = v.value("cursor_min_area_px", c.vision.cursor_min_area_px);
        c.vision.cursor_max_area_px = v.value("cursor_max_area_px", c.vision.cursor_max_area_px);
        c.vision.max_shift_px = v.value("max_shift_px", c.vision.max_shift_px);
        c.vision.min_shift_px = v.value("min_shift_px", c.vision.min_shift_px);
        c.vision.min_shift_correlation =
            v.value("min_shift_correlation", c.vision.min_shift_correlation);
        c.vision.static_radius_px = v.value("static_radius_px", c.vision.static_radius_px);
        c.vision.linear_direction_fraction =
            v.value("linear_direction_fraction", c.vision.linear_direction_fraction);
        c.vision.linear_backtrack_fraction =
            v.value("linear_backtrack_fraction", c.vision.linear_backtrack_fraction);
    }

    c.image_budget = j.value("image_budget", 20);
    c.exemplar_count = j.value("exemplar_count", 3);
    c.icvp_frame_stride = j.value("icvp_frame_stride", 4);
    c.confidence_override = j.value("confidence_override", 0.85);
    c.localized_min_diff = j.value("localized_min_diff", 0.005);
    c.localized_max_bbox_fraction = j.value("localized_max_bbox_fraction", 0.3);
    c.freeze_diff_eps = j.value("freeze_diff_eps", 0.005);
    c.max_steps = j.value("max_steps", 8);
    c.incompatibility_penalty = j.value("incompatibility_penalty", 0.3);
    c.review_threshold = j.value("review_threshold", 0.5);
    c.jobs = j.value("jobs", 1);
    c.prompt_dir = j.value("prompt_dir", std::string());
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["mode"] = std::string(to_string(mode));
    j["input_dir"] = input_dir.string();
    j["output_dir"] = output_dir.string();
    j["mock"] = mock;
    j["mock_script"] = mock_script.string();
    j["endpoint"] = endpoint;
    j["model_id"] = model_id;
    j["credentials_env"] = credentials_env;
    j["rate_limit_rpm"] = rate_limit_rpm;
    j["max_retries"] = max_retries;
    j["backoff_base_ms"] = backoff_base_ms;
    j["timeout_s"] = timeout_s;
    j["fps"] = fps;
    j["window_s"] = window_s;
    j["decoder_command"] = decoder_command;
    j["vision"] = {{"keyframe_tau", vision.keyframe_tau},
                   {"cursor_diff_threshold", vision.cursor_diff_threshold},
                   {"cursor_min_area_px", vision.cursor_min_area_px},
                   {"cursor_max_area_px", vision.cursor_max_area_px},
                   {"max_shift_px", vision.max_shift_px},
                   {"min_shift_px", vision.min_shift_px},
                   {"min_shift_correlation", vision.min_shift_correlation},
                   {"static_radius_px", vision.static_radius_px},
                   {"linear_direction_fraction", vision.linear_direction_fraction},
                   {"linear_backtrack_fraction", vision.linear_backtrack_fraction}};
    j["image_budget"] = image_budget;
    j["exemplar_count"] = exemplar_count;
    j["icvp_frame_stride"] = icvp_frame_stride;
    j["confidence_override"] = confidence_override;
    j["localized_min_diff"] = localized_min_diff;
    j["localized_max_bbox_fraction"] = localized_max_bbox_fraction;
    j["freeze_diff_eps"] = freeze_diff_eps;
    j["max_steps"] = max_steps;
    j["incompatibility_penalty"] = incompatibility_penalty;
    j["review_threshold"] = review_threshold;
    j["jobs"] = jobs;
    j["prompt_dir"] = prompt_dir.string();
    return j;
}

void RunConfig::validate() const {
    if (input_dir.empty()) throw ConfigError("missing input directory (--in)");
    if (output_dir.empty()) throw ConfigError("missing output directory (--out)");
    if (!mock) {
        if (endpoint.empty()) {
            throw ConfigError("a non-mock run needs --endpoint (or --mock <script>)");
        }
        if (credentials_env.empty()) {
            throw ConfigError("a non-mock run needs --credentials-env");
        }
    } else if (mock_script.empty()) {
        throw ConfigError("--mock needs a script path");
    }
    if (fps <= 0) throw ConfigError("fps must be positive");
    if (window_s <= 0) throw ConfigError("window seconds must be positive");
    if (image_budget < 1) throw ConfigError("image budget must be at least 1");
    if (max_steps < 1) throw ConfigError("max steps must be at least 1");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    const auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(confidence_override) || !in01(incompatibility_penalty) ||
        !in01(review_threshold) || !in01(localized_max_bbox_fraction) ||
        !in01(vision.keyframe_tau) || !in01(vision.min_shift_correlation)) {
        throw ConfigError("thresholds must lie in [0,1]");
    }
}

workflow::WorkflowConfig RunConfig::workflow_config() const {
    workflow::WorkflowConfig c;
    c.vision = vision;
    c.model_id = model_id;
    c.image_budget = image_budget;
    c.icvp_frame_stride = icvp_frame_stride;
    c.confidence_override = confidence_override;
    c.localized_min_diff = localized_min_diff;
    c.localized_max_bbox_fraction = localized_max_bbox_fraction;
    c.freeze_diff_eps = freeze_diff_eps;
    return c;
}

react::ReactConfig RunConfig::react_config() const {
    react::ReactConfig c;
    c.vision = vision;
    c.model_id = model_id;
    c.max_steps = max_steps;
    c.incompatibility_penalty = incompatibility_penalty;
    c.review_threshold = review_threshold;
    c.image_budget = image_budget;
    return c;
}

baseline::BaselineConfig RunConfig::baseline_config() const {
    baseline::BaselineConfig c;
    c.exemplar_count = exemplar_count;
    c.image_budget = image_budget;
    c.model_id = model_id;
    return c;
}

vlm::HttpProviderConfig RunConfig::provider_config() const {
    vlm::HttpProviderConfig c;
    c.endpoint = endpoint;
    c.model_id = model_id;
    c.api_key_env = credentials_env;
    c.max_retries = max_retries;
    c.backoff_base_ms = backoff_base_ms;
    c.timeout_s = timeout_s;
    c.rate_limit_rpm = rate_limit_rpm;
    return c;
}

}  // namespace screencode
