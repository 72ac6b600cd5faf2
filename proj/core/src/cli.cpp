#include "screencode/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

#include "screencode/config.hpp"
#include "screencode/metrics.hpp"
#include "screencode/runner.hpp"
#include "screencode/synth.hpp"
#include "screencode/util.hpp"

namespace screencode {

namespace {

int do_run(const RunConfig& config) {
    const RunSummary summary = run_corpus(config);
    std::cout << "mode " << to_string(config.mode) << ": " << summary.videos << " videos, "
              << summary.units << " units (" << summary.flagged << " flagged, "
              << summary.errors << " errors)\n"
              << "predictions: " << summary.predictions_path.string() << "\n";
    return 0;
}

int do_eval(const std::string& gold, const std::string& pred, const std::string& report_dir,
            bool vacuous_zero) {
    metrics::MetricsOptions opt;
    opt.vacuous_f1_is_one = !vacuous_zero;
    const auto report = metrics::evaluate_corpus(gold, pred, opt);
    const std::string text = metrics::render_report_text(report);
    std::cout << text;
    if (!report_dir.empty()) {
        util::write_text_file(std::filesystem::path(report_dir) / "report.txt", text);
        util::write_text_file(std::filesystem::path(report_dir) / "report.json",
                              metrics::report_to_json(report).dump(2) + "\n");
    }
    return 0;
}

int do_synth(const std::string& spec_path, const std::string& out_dir,
             std::optional<uint64_t> seed, std::optional<double> inject) {
    nlohmann::json spec_json = nlohmann::json::parse(util::read_text_file(spec_path), nullptr,
                                                     /*allow_exceptions=*/false);
    if (spec_json.is_discarded()) {
        throw ConfigError("corpus spec is not valid JSON: " + spec_path);
    }
    if (seed) spec_json["seed"] = *seed;
    synth::CorpusSpec spec = synth::corpus_spec_from_json(spec_json);
    if (inject) spec.inject_incompatible_fraction = *inject;
    const auto corpus = synth::generate_corpus(spec, out_dir);
    int frames = 0;
    for (const auto& plan : corpus.plans) frames += plan.frame_count;
    std::cout << "generated " << corpus.plans.size() << " videos (" << frames << " frames), "
              << corpus.gold.size() << " gold units into " << out_dir << "\n";
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"screencode: batch coding of on-screen collaborative-learning behavior"};
    app.require_subcommand(1);

    // --config seeds every run flag; explicit flags then override it.
    RunConfig config;
    std::string config_path;
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") config_path = args[i + 1];
    }
    if (!config_path.empty()) {
        nlohmann::json j =
            nlohmann::json::parse(util::read_text_file(config_path), nullptr, false);
        if (j.is_discarded()) {
            std::cerr << "config file is not valid JSON: " << config_path << "\n";
            return 1;
        }
        try {
            config = RunConfig::from_json(j);
        } catch (const std::exception& e) {
            std::cerr << "bad config file: " << e.what() << "\n";
            return 1;
        }
    }

    auto* run = app.add_subcommand("run", "classify a corpus of screen recordings");
    std::string mode_name(to_string(config.mode));
    std::string ignored_config;
    run->add_option("--config", ignored_config, "JSON config file (flags override it)");
    run->add_option("--mode", mode_name, "single | workflow | react");
    run->add_option("--in", config.input_dir, "corpus directory (one PNG directory per video)");
    run->add_option("--out", config.output_dir, "run directory for predictions and traces");
    std::string mock_script;
    run->add_option("--mock", mock_script, "mock-provider script; no endpoint needed");
    run->add_option("--endpoint", config.endpoint, "chat-completions endpoint, e.g. https://host/v1");
    run->add_option("--model", config.model_id, "model id sent on the wire");
    run->add_option("--credentials-env", config.credentials_env,
                    "environment variable holding the API key");
    run->add_option("--fps", config.fps, "frames per second of the sampled input");
    run->add_option("--window-s", config.window_s, "evaluation-unit window in seconds");
    run->add_option("--decoder-cmd", config.decoder_command,
                    "external decoder template with {input} {outdir} {fps}");
    run->add_option("--jobs", config.jobs, "parallel video workers");
    run->add_option("--image-budget", config.image_budget, "max frames per provider request");
    run->add_option("--exemplars", config.exemplar_count, "few-shot exemplar count");
    run->add_option("--max-steps", config.max_steps, "ReAct step budget");
    run->add_option("--rate-limit", config.rate_limit_rpm, "requests per minute (0 = off)");
    run->add_option("--prompts", config.prompt_dir, "prompt template directory");
    run->add_option("--keyframe-tau", config.vision.keyframe_tau, "keyframe diff threshold");
    run->add_option("--lambda", config.incompatibility_penalty,
                    "reflection incompatibility penalty");

    auto* eval = app.add_subcommand("eval", "score predictions against gold labels");
    std::string gold_path, pred_path, report_dir;
    bool vacuous_zero = false;
    eval->add_option("--gold", gold_path, "gold label file")->required();
    eval->add_option("--pred", pred_path, "prediction label file")->required();
    eval->add_option("--report", report_dir, "directory for report.txt / report.json");
    eval->add_flag("--vacuous-f1-zero", vacuous_zero,
                   "score absent-everywhere classes as F1 0 instead of 1");

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string spec_path, synth_out;
    std::optional<uint64_t> seed;
    std::optional<double> inject;
    synth_cmd->add_option("--spec", spec_path, "corpus spec JSON")->required();
    synth_cmd->add_option("--out", synth_out, "output corpus directory")->required();
    synth_cmd->add_option("--seed", seed, "override the spec's seed");
    synth_cmd->add_option("--inject-incompatible", inject,
                          "fraction of segments given a scene-incompatible scripted action");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints help to stdout itself; errors go to stderr
        const int code = app.exit(e, std::cout, std::cerr);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            const auto mode = mode_from_string(mode_name);
            if (!mode) throw ConfigError("unknown mode: " + mode_name);
            config.mode = *mode;
            if (!mock_script.empty()) {
                config.mock = true;
                config.mock_script = mock_script;
            }
            config.validate();
            return do_run(config);
        }
        if (eval->parsed()) return do_eval(gold_path, pred_path, report_dir, vacuous_zero);
        if (synth_cmd->parsed()) return do_synth(spec_path, synth_out, seed, inject);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args);
}

}  // namespace screencode
