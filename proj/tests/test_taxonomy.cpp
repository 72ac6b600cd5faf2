#include <doctest.h>

#include "screencode/taxonomy.hpp"

using namespace screencode;

TEST_CASE("scene column matches the coding scheme") {
    CHECK(compatible_scenes(Action::PromptingGAI) == SceneSet{Scene::GAI});
    CHECK(compatible_scenes(Action::SearchingInternet) == SceneSet{Scene::Web});
    CHECK(compatible_scenes(Action::TickingAnswers) == SceneSet{Scene::Docs});
    CHECK(compatible_scenes(Action::GroupDocumentCoEditing) == SceneSet{Scene::Docs});
    const SceneSet all{Scene::GAI, Scene::Web, Scene::Docs};
    CHECK(compatible_scenes(Action::ReadingWithHighlighting) == all);
    CHECK(compatible_scenes(Action::CopyAndPaste) == all);
    CHECK(compatible_scenes(Action::ReadingWithScrolling) == all);
    CHECK(compatible_scenes(Action::Freezing) == all);
}

TEST_CASE("every action has a non-empty compatible-scene set") {
    for (Action a : kAllActions) CHECK(!compatible_scenes(a).empty());
}

TEST_CASE("engagement-level mapping, all eight rows") {
    CHECK(icap_level(Action::SearchingInternet) == IcapLevel::Active);
    CHECK(icap_level(Action::TickingAnswers) == IcapLevel::Active);
    CHECK(icap_level(Action::ReadingWithHighlighting) == IcapLevel::Active);
    CHECK(icap_level(Action::CopyAndPaste) == IcapLevel::Active);
    CHECK(icap_level(Action::PromptingGAI) == IcapLevel::Constructive);
    CHECK(icap_level(Action::GroupDocumentCoEditing) == IcapLevel::Interactive);
    CHECK(icap_level(Action::ReadingWithScrolling) == IcapLevel::Passive);
    CHECK(icap_level(Action::Freezing) == IcapLevel::Conceal);
}

TEST_CASE("serialization names are stable and round-trip") {
    CHECK(to_string(Scene::GAI) == "gai");
    CHECK(to_string(Scene::Web) == "web");
    CHECK(to_string(Scene::Docs) == "docs");
    for (Scene s : kAllScenes) CHECK(scene_from_string(to_string(s)) == s);
    for (Action a : kAllActions) CHECK(action_from_string(to_string(a)) == a);
    CHECK(action_from_string("Searching Internet") == Action::SearchingInternet);
    CHECK(action_from_string("COPY-AND-PASTE") == Action::CopyAndPaste);
    CHECK(!action_from_string("flying").has_value());
}

TEST_CASE("check_compatibility") {
    LabelRecord r;
    r.unit_id = "u";

    SUBCASE("matching row is compatible") {
        r.scenes = {Scene::Web};
        r.actions = {Action::SearchingInternet};
        CHECK(check_compatibility(r).empty());
    }
    SUBCASE("GAI action on a web scene violates") {
        r.scenes = {Scene::Web};
        r.actions = {Action::PromptingGAI};
        const auto violations = check_compatibility(r);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].action == Action::PromptingGAI);
        CHECK(violations[0].required_scenes == SceneSet{Scene::GAI});
    }
    SUBCASE("freezing needs no scene") {
        r.scenes = {};
        r.actions = {Action::Freezing};
        CHECK(check_compatibility(r).empty());
    }
    SUBCASE("non-freezing actions need at least one scene") {
        r.scenes = {};
        r.actions = {Action::ReadingWithScrolling};
        CHECK(check_compatibility(r).size() == 1);
    }
}

TEST_CASE("compatibility is equivalent to non-empty intersection") {
    // exhaustive over all scene subsets and single actions
    for (Action a : kAllActions) {
        for (int mask = 0; mask < 8; ++mask) {
            LabelRecord r;
            r.unit_id = "u";
            r.actions = {a};
            for (int b = 0; b < 3; ++b) {
                if (mask & (1 << b)) r.scenes.insert(kAllScenes[b]);
            }
            bool intersects = false;
            for (Scene s : r.scenes) {
                if (compatible_scenes(a).count(s)) intersects = true;
            }
            const bool exempt = a == Action::Freezing && r.scenes.empty();
            CHECK(check_compatibility(r).empty() == (intersects || exempt));
        }
    }
}
