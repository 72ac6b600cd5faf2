#include <doctest.h>

#include <random>

#include "screencode/ingest.hpp"
#include "screencode/react.hpp"
#include "screencode/synth.hpp"

using namespace screencode;
using namespace screencode::react;

namespace {

struct ReactFixture {
    synth::CorpusSpec spec;
    synth::VideoPlan plan;
    FrameSequence seq;
    std::vector<EvaluationUnit> units;
    std::vector<LabelRecord> gold;
    vlm::MockScript script;
    PromptLibrary prompts = PromptLibrary::builtin();
    ReactConfig config;

    ReactFixture() {
        spec.seed = 44;
        spec.videos.push_back({"vid000",
                               {{Scene::Docs, Action::GroupDocumentCoEditing, 20.0},
                                {Scene::Web, Action::ReadingWithScrolling, 20.0}}});
        plan = synth::plan_video(spec, 0);
        seq = synth::render_video(plan);
        units = segment_fixed(seq, spec.window_s, "vid000_");
        gold = synth::gold_for_video(spec, plan);
        script = synth::build_mock_script(spec, {plan});
    }
};

struct ScriptedProvider : vlm::VlmProvider {
    std::vector<std::string> replies;
    size_t next = 0;
    vlm::ChatResponse complete(const vlm::ChatRequest&) override {
        const std::string reply = next < replies.size() ? replies[next] : replies.back();
        ++next;
        return {reply, {}, 0};
    }
};

vlm::StructuredLabel make_label(SceneSet scenes, ActionSet actions,
                                std::map<Action, double> confidences = {}) {
    vlm::StructuredLabel label;
    label.scenes = std::move(scenes);
    label.actions = std::move(actions);
    label.confidences = std::move(confidences);
    for (Action a : label.actions) {
        if (!label.confidences.count(a)) label.confidences[a] = 0.5;
    }
    return label;
}

}  // namespace

TEST_CASE("react_step executes the chosen tool and appends the observation") {
    ReactFixture fx;
    ScriptedProvider provider;
    provider.replies = {
        R"({"thought":"look at the cursor","action":"CursorProbe","action_input":""})"};
    const ToolRegistry tools = ToolRegistry::standard();
    ToolContext ctx{fx.units[0], fx.seq, provider, fx.prompts, fx.config};

    ReactState state;
    state.unit_id = fx.units[0].unit_id;
    state = react_step(std::move(state), provider, tools, ctx, fx.prompts, fx.config);
    REQUIRE(state.scratchpad.size() == 1);
    CHECK(state.scratchpad[0].thought == "look at the cursor");
    CHECK(state.scratchpad[0].action_name == "CursorProbe");
    CHECK(state.scratchpad[0].observation.find("pattern:") != std::string::npos);
    CHECK(state.step == 1);
    CHECK(!state.done);
}

TEST_CASE("react_step terminal Finish captures the label") {
    ReactFixture fx;
    ScriptedProvider provider;
    provider.replies = {
        R"({"thought":"done","action":"Finish","action_input":{"scenes":["docs"],"actions":["group_document_co_editing"],"confidences":{"group_document_co_editing":0.9}}})"};
    const ToolRegistry tools = ToolRegistry::standard();
    ToolContext ctx{fx.units[0], fx.seq, provider, fx.prompts, fx.config};

    ReactState state;
    state.unit_id = fx.units[0].unit_id;
    state = react_step(std::move(state), provider, tools, ctx, fx.prompts, fx.config);
    CHECK(state.done);
    REQUIRE(state.final_label.has_value());
    CHECK(state.final_label->actions == ActionSet{Action::GroupDocumentCoEditing});
}

TEST_CASE("react_step gibberish appends the invalid-action observation") {
    ReactFixture fx;
    ScriptedProvider provider;
    provider.replies = {"utter nonsense with no object"};
    const ToolRegistry tools = ToolRegistry::standard();
    ToolContext ctx{fx.units[0], fx.seq, provider, fx.prompts, fx.config};

    ReactState state;
    state.unit_id = fx.units[0].unit_id;
    state = react_step(std::move(state), provider, tools, ctx, fx.prompts, fx.config);
    REQUIRE(state.scratchpad.size() == 1);
    CHECK(state.scratchpad[0].observation.find("invalid action, choose from:") !=
          std::string::npos);
    CHECK(state.scratchpad[0].observation.find("CursorProbe") != std::string::npos);
    CHECK(state.step == 1);
    CHECK(!state.done);
}

TEST_CASE("unknown tool names count as invalid actions") {
    ReactFixture fx;
    ScriptedProvider provider;
    provider.replies = {R"({"thought":"hm","action":"LaunchRockets","action_input":""})"};
    const ToolRegistry tools = ToolRegistry::standard();
    ToolContext ctx{fx.units[0], fx.seq, provider, fx.prompts, fx.config};
    ReactState state;
    state.unit_id = fx.units[0].unit_id;
    state = react_step(std::move(state), provider, tools, ctx, fx.prompts, fx.config);
    CHECK(state.scratchpad[0].observation.find("invalid action") != std::string::npos);
}

TEST_CASE("reflect") {
    ReactConfig config;
    ReactState state;
    state.unit_id = "u";

    SUBCASE("incompatible action loses exactly lambda and is flagged") {
        const auto label = make_label({Scene::Web}, {Action::PromptingGAI},
                                      {{Action::PromptingGAI, 0.8}});
        const LabelRecord record = reflect(label, state, config);
        CHECK(record.confidences.at(Action::PromptingGAI) == doctest::Approx(0.5));
        CHECK(record.flagged);
        CHECK(record.actions.count(Action::PromptingGAI));  // retained, not deleted
        CHECK(record.evidence.at(Action::PromptingGAI).find("reflection") != std::string::npos);
    }
    SUBCASE("fully compatible confident record is untouched") {
        const auto label = make_label({Scene::Web}, {Action::SearchingInternet},
                                      {{Action::SearchingInternet, 0.9}});
        const LabelRecord record = reflect(label, state, config);
        CHECK(record.confidences.at(Action::SearchingInternet) == doctest::Approx(0.9));
        CHECK(!record.flagged);
    }
    SUBCASE("low confidence alone flags for review") {
        const auto label = make_label({Scene::Web}, {Action::SearchingInternet},
                                      {{Action::SearchingInternet, 0.2}});
        CHECK(reflect(label, state, config).flagged);
    }
    SUBCASE("penalty floors at zero") {
        const auto label = make_label({Scene::Web}, {Action::PromptingGAI},
                                      {{Action::PromptingGAI, 0.1}});
        CHECK(reflect(label, state, config).confidences.at(Action::PromptingGAI) == 0.0);
    }
    SUBCASE("freezing with no scenes is not an incompatibility") {
        const auto label = make_label({}, {Action::Freezing}, {{Action::Freezing, 0.9}});
        const LabelRecord record = reflect(label, state, config);
        CHECK(!record.flagged);
        CHECK(record.confidences.at(Action::Freezing) == doctest::Approx(0.9));
    }
}

TEST_CASE("reflection property over randomized records") {
    ReactConfig config;
    std::mt19937_64 rng(2025);
    for (int t = 0; t < 1000; ++t) {
        vlm::StructuredLabel label;
        for (Scene s : kAllScenes) {
            if (rng() % 2) label.scenes.insert(s);
        }
        for (Action a : kAllActions) {
            if (rng() % 3 == 0) {
                label.actions.insert(a);
                label.confidences[a] = (rng() % 101) / 100.0;
            }
        }
        ReactState state;
        state.unit_id = "u" + std::to_string(t);
        const LabelRecord record = reflect(label, state, config);

        LabelRecord pre;
        pre.scenes = label.scenes;
        pre.actions = label.actions;
        const auto violations = check_compatibility(pre);
        std::set<Action> violating;
        for (const auto& v : violations) violating.insert(v.action);

        for (Action a : label.actions) {
            const double before = label.confidences.at(a);
            const double after = record.confidences.at(a);
            if (violating.count(a)) {
                CHECK(after ==
                      doctest::Approx(std::max(0.0, before - config.incompatibility_penalty)));
            } else {
                CHECK(after == doctest::Approx(before));
            }
        }
        if (!violations.empty()) CHECK(record.flagged);  // zero unflagged incompatibilities
    }
}

TEST_CASE("run_react follows the scripted three-step transcript to the gold label") {
    ReactFixture fx;
    vlm::MockVlmProvider provider(fx.script);
    for (size_t u = 0; u < fx.units.size(); ++u) {
        const auto outcome = run_react(fx.units[u], fx.seq, provider, fx.prompts, fx.config);
        CAPTURE(fx.units[u].unit_id);
        CHECK(outcome.record.scenes == fx.gold[u].scenes);
        CHECK(outcome.record.actions == fx.gold[u].actions);
        CHECK(!outcome.record.flagged);
        CHECK(outcome.state.scratchpad.size() == 3);  // probe, classify, finish
        CHECK(outcome.state.done);
        // the ClassifyBehavior observation carries the inner reply
        CHECK(outcome.state.scratchpad[1].observation.find("actions") != std::string::npos);
    }
}

TEST_CASE("a script that never finishes exhausts the step budget") {
    ReactFixture fx;
    ScriptedProvider provider;
    provider.replies = {R"({"thought":"probe again","action":"ShiftProbe","action_input":""})"};
    const auto outcome = run_react(fx.units[0], fx.seq, provider, fx.prompts, fx.config);
    CHECK(outcome.state.step == fx.config.max_steps);
    CHECK(!outcome.state.done);
    CHECK(outcome.state.scratchpad.size() == static_cast<size_t>(fx.config.max_steps));
    CHECK(outcome.record.flagged);
    CHECK(outcome.record.actions.empty());
}

TEST_CASE("provider errors append an error observation and consume a step") {
    ReactFixture fx;
    struct FailingProvider : vlm::VlmProvider {
        vlm::ChatResponse complete(const vlm::ChatRequest&) override {
            throw vlm::VlmError(vlm::VlmErrorKind::Network, "provider unreachable");
        }
    } provider;
    const auto outcome = run_react(fx.units[0], fx.seq, provider, fx.prompts, fx.config);
    CHECK(outcome.record.flagged);
    REQUIRE(!outcome.state.scratchpad.empty());
    CHECK(outcome.state.scratchpad[0].observation.find("provider error") != std::string::npos);
}

TEST_CASE("trace serialization round-trips losslessly") {
    ReactFixture fx;
    vlm::MockVlmProvider provider(fx.script);
    const auto outcome = run_react(fx.units[0], fx.seq, provider, fx.prompts, fx.config);

    const auto j = state_to_json(outcome.state);
    const ReactState back = state_from_json(j);
    CHECK(back.unit_id == outcome.state.unit_id);
    CHECK(back.step == outcome.state.step);
    CHECK(back.done == outcome.state.done);
    REQUIRE(back.scratchpad.size() == outcome.state.scratchpad.size());
    for (size_t i = 0; i < back.scratchpad.size(); ++i) {
        CHECK(back.scratchpad[i] == outcome.state.scratchpad[i]);
    }
    REQUIRE(back.final_label.has_value());
    CHECK(back.final_label->actions == outcome.state.final_label->actions);
    CHECK(state_to_json(back) == j);
}

TEST_CASE("compatibility check tool reports violations") {
    ReactFixture fx;
    ScriptedProvider provider;
    provider.replies = {
        R"({"thought":"check","action":"CompatibilityCheck","action_input":{"scenes":["web"],"actions":["prompting_gai"]}})"};
    const ToolRegistry tools = ToolRegistry::standard();
    ToolContext ctx{fx.units[0], fx.seq, provider, fx.prompts, fx.config};
    ReactState state;
    state.unit_id = fx.units[0].unit_id;
    state = react_step(std::move(state), provider, tools, ctx, fx.prompts, fx.config);
    CHECK(state.scratchpad[0].observation.find("prompting_gai") != std::string::npos);
    CHECK(state.scratchpad[0].observation.find("violations") != std::string::npos);
}
