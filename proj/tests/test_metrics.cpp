#include <doctest.h>

#include <filesystem>
#include <random>

#include "screencode/label_io.hpp"
#include "screencode/metrics.hpp"
#include "screencode/util.hpp"

using namespace screencode;
using namespace screencode::metrics;

namespace {

LabelRecord rec(const std::string& id, SceneSet scenes, ActionSet actions) {
    LabelRecord r;
    r.unit_id = id;
    r.scenes = std::move(scenes);
    r.actions = std::move(actions);
    return r;
}

// The worked two-unit scene instance: gold {Web},{Docs}; pred {Web,GAI},{Docs}.
std::pair<std::vector<LabelRecord>, std::vector<LabelRecord>> two_unit_example() {
    std::vector<LabelRecord> gold{rec("u1", {Scene::Web}, {}), rec("u2", {Scene::Docs}, {})};
    std::vector<LabelRecord> pred{rec("u1", {Scene::Web, Scene::GAI}, {}),
                                  rec("u2", {Scene::Docs}, {})};
    return {gold, pred};
}

LabelRecord random_record(std::mt19937_64& rng, const std::string& id) {
    LabelRecord r;
    r.unit_id = id;
    for (Scene s : kAllScenes) {
        if (rng() % 2) r.scenes.insert(s);
    }
    for (Action a : kAllActions) {
        if (rng() % 3 == 0) r.actions.insert(a);
    }
    return r;
}

}  // namespace

TEST_CASE("confusion counts on the worked example") {
    const auto [gold, pred] = two_unit_example();
    const auto corpus = align_by_unit(gold, pred);
    const auto gai = confusion_counts(corpus, Scene::GAI);
    CHECK(gai.tp == 0);
    CHECK(gai.fp == 1);
    CHECK(gai.fn == 0);
    const auto web = confusion_counts(corpus, Scene::Web);
    CHECK(web.tp == 1);
    CHECK(web.fp == 0);
    CHECK(web.fn == 0);
}

TEST_CASE("missing predictions score all-negative; duplicates are errors") {
    const auto gold = std::vector<LabelRecord>{rec("u1", {Scene::Web}, {Action::Freezing})};
    SUBCASE("missing pred becomes fn") {
        const auto corpus = align_by_unit(gold, {});
        const auto counts = confusion_counts(corpus, Action::Freezing);
        CHECK(counts.fn == 1);
        CHECK(counts.tp == 0);
        CHECK(corpus.missing_pred_ids == std::vector<std::string>{"u1"});
    }
    SUBCASE("duplicate gold id") {
        auto dup = gold;
        dup.push_back(gold[0]);
        CHECK_THROWS_WITH_AS(align_by_unit(dup, {}), doctest::Contains("u1"),
                             std::runtime_error);
    }
    SUBCASE("duplicate pred id") {
        const std::vector<LabelRecord> pred{gold[0], gold[0]};
        CHECK_THROWS_WITH_AS(align_by_unit(gold, pred), doctest::Contains("u1"),
                             std::runtime_error);
    }
}

TEST_CASE("macro F1") {
    const auto [gold, pred] = two_unit_example();
    const auto corpus = align_by_unit(gold, pred);
    SUBCASE("worked example: GAI=0, Web=1, Docs=1, macro 2/3") {
        CHECK(scene_macro_f1(corpus) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("perfect prediction is 1.0") {
        const auto perfect = align_by_unit(gold, gold);
        CHECK(scene_macro_f1(perfect) == 1.0);
    }
    SUBCASE("all-wrong single class is 0.0") {
        const ConfusionCounts wrong{0, 3, 3};
        CHECK(f1_from_counts(wrong) == 0.0);
    }
    SUBCASE("vacuous class convention is configurable") {
        const ConfusionCounts vacuous{0, 0, 0};
        CHECK(f1_from_counts(vacuous) == 1.0);
        MetricsOptions zero;
        zero.vacuous_f1_is_one = false;
        CHECK(f1_from_counts(vacuous, zero) == 0.0);
    }
}

TEST_CASE("hamming loss") {
    const auto [gold, pred] = two_unit_example();
    SUBCASE("worked example: one mismatch in 2x3 cells") {
        CHECK(scene_hamming_loss(align_by_unit(gold, pred)) ==
              doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
    SUBCASE("identical files score 0") {
        CHECK(scene_hamming_loss(align_by_unit(gold, gold)) == 0.0);
    }
    SUBCASE("complement prediction scores 1") {
        std::vector<LabelRecord> complement;
        for (const auto& g : gold) {
            LabelRecord c;
            c.unit_id = g.unit_id;
            for (Scene s : kAllScenes) {
                if (!g.scenes.count(s)) c.scenes.insert(s);
            }
            complement.push_back(std::move(c));
        }
        CHECK(scene_hamming_loss(align_by_unit(gold, complement)) == 1.0);
    }
}

TEST_CASE("micro F1 pools counts over classes") {
    std::vector<LabelRecord> gold{rec("u1", {}, {Action::Freezing}),
                                  rec("u2", {}, {Action::SearchingInternet})};
    std::vector<LabelRecord> pred{rec("u1", {}, {Action::Freezing}),
                                  rec("u2", {}, {Action::Freezing})};
    SUBCASE("hand pool: TP=1 FP=1 FN=1 gives 0.5") {
        CHECK(action_micro_f1(align_by_unit(gold, pred)) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("identical is 1.0") {
        CHECK(action_micro_f1(align_by_unit(gold, gold)) == 1.0);
    }
    SUBCASE("disjoint predictions are 0.0") {
        std::vector<LabelRecord> disjoint{rec("u1", {}, {Action::TickingAnswers}),
                                          rec("u2", {}, {Action::TickingAnswers})};
        CHECK(action_micro_f1(align_by_unit(gold, disjoint)) == 0.0);
    }
}

TEST_CASE("hierarchical hamming loss") {
    // node set: 3 scenes + 16 valid pairs + freezing-under-root = 20
    CHECK(hierarchy_nodes().size() == 20);

    SUBCASE("identical records cost 0") {
        const auto gold =
            std::vector<LabelRecord>{rec("u1", {Scene::Web}, {Action::SearchingInternet})};
        CHECK(hierarchical_hamming_loss(align_by_unit(gold, gold)) == 0.0);
    }
    SUBCASE("wrong scene suppresses pair costs below it") {
        const auto gold =
            std::vector<LabelRecord>{rec("u1", {Scene::Web}, {Action::SearchingInternet})};
        const auto pred =
            std::vector<LabelRecord>{rec("u1", {Scene::Docs}, {Action::SearchingInternet})};
        // scene nodes web and docs mismatch; every pair under them is suppressed
        CHECK(hierarchical_hamming_loss(align_by_unit(gold, pred)) ==
              doctest::Approx(2.0 / 20.0).epsilon(1e-12));
    }
    SUBCASE("matching scene exposes pair-level costs") {
        const auto gold =
            std::vector<LabelRecord>{rec("u1", {Scene::Web}, {Action::SearchingInternet})};
        const auto pred =
            std::vector<LabelRecord>{rec("u1", {Scene::Web}, {Action::ReadingWithScrolling})};
        // pairs (web,searching) fn and (web,reading_with_scrolling) fp
        CHECK(hierarchical_hamming_loss(align_by_unit(gold, pred)) ==
              doctest::Approx(2.0 / 20.0).epsilon(1e-12));
    }
    SUBCASE("freezing errors also cost at the virtual root") {
        const auto gold = std::vector<LabelRecord>{rec("u1", {Scene::Web}, {Action::Freezing})};
        const auto pred = std::vector<LabelRecord>{rec("u1", {Scene::Web}, {})};
        // (web,freezing) pair + root-level freezing node
        CHECK(hierarchical_hamming_loss(align_by_unit(gold, pred)) ==
              doctest::Approx(2.0 / 20.0).epsilon(1e-12));
    }
}

TEST_CASE("cohen kappa") {
    SUBCASE("worked example: p_o 0.75, p_e 0.5") {
        CHECK(cohen_kappa({"a", "a", "b", "b"}, {"a", "a", "b", "a"}) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("identical lists score 1") {
        CHECK(cohen_kappa({"x", "y", "z"}, {"x", "y", "z"}) == 1.0);
    }
    SUBCASE("disjoint constant raters: p_e = 0, kappa = 0") {
        CHECK(cohen_kappa({"a", "a"}, {"b", "b"}) == doctest::Approx(0.0));
    }
    SUBCASE("identical constant raters: chance agreement is total, kappa = 1") {
        CHECK(cohen_kappa({"a", "a"}, {"a", "a"}) == 1.0);
    }
    SUBCASE("kappa is invariant under category relabeling") {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 20; ++t) {
            std::vector<std::string> a, b, a2, b2;
            for (int i = 0; i < 24; ++i) {
                const int ca = static_cast<int>(rng() % 3);
                const int cb = static_cast<int>(rng() % 3);
                a.push_back(std::string(1, static_cast<char>('a' + ca)));
                b.push_back(std::string(1, static_cast<char>('a' + cb)));
                a2.push_back("label_" + std::to_string(2 - ca));
                b2.push_back("label_" + std::to_string(2 - cb));
            }
            CHECK(cohen_kappa(a, b) == doctest::Approx(cohen_kappa(a2, b2)).epsilon(1e-12));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(cohen_kappa({}, {}), std::invalid_argument);
        CHECK_THROWS_AS(cohen_kappa({"a"}, {"a", "b"}), std::invalid_argument);
    }
}

TEST_CASE("metric monotonicity: flipping one correct cell never helps") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 120; ++t) {
        std::vector<LabelRecord> gold, pred;
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            gold.push_back(random_record(rng, "u" + std::to_string(i)));
            pred.push_back(gold.back());  // start from a perfect prediction
        }
        const auto before = align_by_unit(gold, pred);
        const double hamming_before = action_hamming_loss(before);
        const double micro_before = action_micro_f1(before);

        // flip one action cell that currently agrees
        const int unit = static_cast<int>(rng() % n);
        const Action a = kAllActions[rng() % kAllActions.size()];
        if (pred[unit].actions.count(a)) {
            pred[unit].actions.erase(a);
        } else {
            pred[unit].actions.insert(a);
        }
        const auto after = align_by_unit(gold, pred);
        CHECK(action_hamming_loss(after) >= hamming_before);
        CHECK(action_micro_f1(after) <= micro_before);
    }
}

TEST_CASE("evaluate_corpus end to end") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "screencode_metrics_test";
    fs::create_directories(dir);
    const auto [gold, pred] = two_unit_example();
    write_label_file(dir / "gold.tsv", gold, false);
    write_label_file(dir / "pred.tsv", pred);

    const auto report = evaluate_corpus(dir / "gold.tsv", dir / "pred.tsv");
    CHECK(report.n_units == 2);
    CHECK(report.scene_macro_f1 == doctest::Approx(2.0 / 3.0));
    CHECK(report.scene_hamming == doctest::Approx(1.0 / 6.0));
    CHECK(report.per_class.size() == 11);
    REQUIRE(report.kappa.has_value());

    const std::string text = render_report_text(report);
    CHECK(text.find("scene") != std::string::npos);
    CHECK(text.find("0.667") != std::string::npos);
    CHECK(text.find("0.167") != std::string::npos);

    SUBCASE("identical files give perfect scores") {
        write_label_file(dir / "pred2.tsv", gold);
        const auto perfect = evaluate_corpus(dir / "gold.tsv", dir / "pred2.tsv");
        CHECK(perfect.scene_macro_f1 == 1.0);
        CHECK(perfect.scene_hamming == 0.0);
        CHECK(perfect.action_micro_f1 == 1.0);
        CHECK(perfect.action_hamming == 0.0);
        CHECK(perfect.action_hier_hamming == 0.0);
        CHECK(*perfect.kappa == 1.0);
    }
    SUBCASE("duplicate unit ids in a file are an error naming the id") {
        auto dup = gold;
        dup.push_back(gold[0]);
        write_label_file(dir / "dup.tsv", dup, false);
        CHECK_THROWS_WITH_AS(evaluate_corpus(dir / "dup.tsv", dir / "pred.tsv"),
                             doctest::Contains("u1"), std::runtime_error);
    }
}
