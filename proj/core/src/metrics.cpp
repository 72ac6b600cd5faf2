#include "screencode/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "screencode/label_io.hpp"
#include "screencode/util.hpp"

namespace screencode::metrics {

AlignedCorpus align_by_unit(const std::vector<LabelRecord>& gold,
                            const std::vector<LabelRecord>& pred) {
    std::set<std::string> gold_ids;
    for (const auto& record : gold) {
        if (!gold_ids.insert(record.unit_id).second) {
            throw std::runtime_error("duplicate unit_id in gold: " + record.unit_id);
        }
    }
    std::map<std::string, const LabelRecord*> pred_by_id;
    for (const auto& record : pred) {
        if (!pred_by_id.emplace(record.unit_id, &record).second) {
            throw std::runtime_error("duplicate unit_id in predictions: " + record.unit_id);
        }
    }

    AlignedCorpus corpus;
    corpus.gold = gold;
    corpus.pred.reserve(gold.size());
    for (const auto& record : gold) {
        auto it = pred_by_id.find(record.unit_id);
        if (it == pred_by_id.end()) {
            LabelRecord empty;
            empty.unit_id = record.unit_id;
            corpus.pred.push_back(std::move(empty));  // scores all-negative
            corpus.missing_pred_ids.push_back(record.unit_id);
        } else {
            corpus.pred.push_back(*it->second);
        }
    }
    for (const auto& record : pred) {
        if (!gold_ids.count(record.unit_id)) corpus.pred_only_ids.push_back(record.unit_id);
    }
    return corpus;
}

namespace {

template <typename Label>
ConfusionCounts count_label(const AlignedCorpus& corpus, Label label) {
    ConfusionCounts c;
    for (size_t i = 0; i < corpus.gold.size(); ++i) {
        bool in_gold, in_pred;
        if constexpr (std::is_same_v<Label, Scene>) {
            in_gold = corpus.gold[i].scenes.count(label) > 0;
            in_pred = corpus.pred[i].scenes.count(label) > 0;
        } else {
            in_gold = corpus.gold[i].actions.count(label) > 0;
            in_pred = corpus.pred[i].actions.count(label) > 0;
        }
        if (in_gold && in_pred) ++c.tp;
        else if (!in_gold && in_pred) ++c.fp;
        else if (in_gold && !in_pred) ++c.fn;
    }
    return c;
}

template <typename Label, size_t N>
double hamming_over(const AlignedCorpus& corpus, const std::array<Label, N>& labels) {
    if (corpus.gold.empty()) return 0.0;
    long mismatches = 0;
    for (size_t i = 0; i < corpus.gold.size(); ++i) {
        for (Label label : labels) {
            bool in_gold, in_pred;
            if constexpr (std::is_same_v<Label, Scene>) {
                in_gold = corpus.gold[i].scenes.count(label) > 0;
                in_pred = corpus.pred[i].scenes.count(label) > 0;
            } else {
                in_gold = corpus.gold[i].actions.count(label) > 0;
                in_pred = corpus.pred[i].actions.count(label) > 0;
            }
            if (in_gold != in_pred) ++mismatches;
        }
    }
    return static_cast<double>(mismatches) /
           (static_cast<double>(corpus.gold.size()) * labels.size());
}

}  // namespace

ConfusionCounts confusion_counts(const AlignedCorpus& corpus, Scene scene) {
    return count_label(corpus, scene);
}

ConfusionCounts confusion_counts(const AlignedCorpus& corpus, Action action) {
    return count_label(corpus, action);
}

double precision_from_counts(const ConfusionCounts& c) {
    if (c.tp + c.fp == 0) return c.fn == 0 ? 1.0 : 0.0;
    return static_cast<double>(c.tp) / (c.tp + c.fp);
}

double recall_from_counts(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) return c.fp == 0 ? 1.0 : 0.0;
    return static_cast<double>(c.tp) / (c.tp + c.fn);
}

double f1_from_counts(const ConfusionCounts& c, const MetricsOptions& opt) {
    if (c.tp == 0 && c.fp == 0 && c.fn == 0) return opt.vacuous_f1_is_one ? 1.0 : 0.0;
    return 2.0 * c.tp / (2.0 * c.tp + c.fp + c.fn);
}

double macro_f1(std::span<const ConfusionCounts> per_class, const MetricsOptions& opt) {
    if (per_class.empty()) throw std::invalid_argument("macro_f1 needs at least one class");
    double sum = 0;
    for (const auto& c : per_class) sum += f1_from_counts(c, opt);
    return sum / per_class.size();
}

double micro_f1(std::span<const ConfusionCounts> per_class, const MetricsOptions& opt) {
    if (per_class.empty()) throw std::invalid_argument("micro_f1 needs at least one class");
    ConfusionCounts pooled;
    for (const auto& c : per_class) {
        pooled.tp += c.tp;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
    }
    return f1_from_counts(pooled, opt);
}

double scene_macro_f1(const AlignedCorpus& corpus, const MetricsOptions& opt) {
    std::vector<ConfusionCounts> per_class;
    for (Scene s : kAllScenes) per_class.push_back(confusion_counts(corpus, s));
    return macro_f1(per_class, opt);
}

double scene_hamming_loss(const AlignedCorpus& corpus) {
    return hamming_over(corpus, kAllScenes);
}

double action_micro_f1(const AlignedCorpus& corpus, const MetricsOptions& opt) {
    std::vector<ConfusionCounts> per_class;
    for (Action a : kAllActions) per_class.push_back(confusion_counts(corpus, a));
    return micro_f1(per_class, opt);
}

double action_hamming_loss(const AlignedCorpus& corpus) {
    return hamming_over(corpus, kAllActions);
}

std::vector<HierarchyNode> hierarchy_nodes() {
    std::vector<HierarchyNode> nodes;
    for (Scene s : kAllScenes) nodes.push_back({s, std::nullopt});
    for (Action a : kAllActions) {
        for (Scene s : compatible_scenes(a)) nodes.push_back({s, a});
    }
    nodes.push_back({std::nullopt, Action::Freezing});  // under the virtual root
    return nodes;
}

double hierarchical_hamming_loss(const AlignedCorpus& corpus) {
    if (corpus.gold.empty()) return 0.0;
    const auto nodes = hierarchy_nodes();
    const auto present = [](const LabelRecord& r, const HierarchyNode& node) {
        if (node.scene && node.action) {
            return r.scenes.count(*node.scene) > 0 && r.actions.count(*node.action) > 0;
        }
        if (node.scene) return r.scenes.count(*node.scene) > 0;
        return r.actions.count(*node.action) > 0;
    };

    long cost = 0;
    for (size_t i = 0; i < corpus.gold.size(); ++i) {
        const LabelRecord& g = corpus.gold[i];
        const LabelRecord& p = corpus.pred[i];
        for (const auto& node : nodes) {
            if (node.scene && node.action) {
                // suppressed under a mismatched scene ancestor
                const bool scene_matches =
                    (g.scenes.count(*node.scene) > 0) == (p.scenes.count(*node.scene) > 0);
                if (scene_matches && present(g, node) != present(p, node)) ++cost;
            } else if (present(g, node) != present(p, node)) {
                ++cost;
            }
        }
    }
    return static_cast<double>(cost) / (static_cast<double>(corpus.gold.size()) * nodes.size());
}

double cohen_kappa(const std::vector<std::string>& rater_a,
                   const std::vector<std::string>& rater_b) {
    if (rater_a.empty()) throw std::invalid_argument("cohen_kappa needs at least one item");
    if (rater_a.size() != rater_b.size()) {
        throw std::invalid_argument("cohen_kappa rater length mismatch: " +
                                    std::to_string(rater_a.size()) + " vs " +
                                    std::to_string(rater_b.size()));
    }
    const double n = static_cast<double>(rater_a.size());
    long agree = 0;
    std::map<std::string, long> marg_a, marg_b;
    for (size_t i = 0; i < rater_a.size(); ++i) {
        if (rater_a[i] == rater_b[i]) ++agree;
        ++marg_a[rater_a[i]];
        ++marg_b[rater_b[i]];
    }
    const double p_o = agree / n;
    double p_e = 0;
    for (const auto& [category, count_a] : marg_a) {
        auto it = marg_b.find(category);
        if (it != marg_b.end()) p_e += (count_a / n) * (it->second / n);
    }
    if (std::abs(1.0 - p_e) < 1e-15) return p_o >= 1.0 - 1e-15 ? 1.0 : 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

double mean_binarized_kappa(const AlignedCorpus& corpus) {
    if (corpus.gold.empty()) return 0.0;
    std::vector<double> kappas;
    const auto binarized = [&](auto member, auto label) {
        std::vector<std::string> a, b;
        for (size_t i = 0; i < corpus.gold.size(); ++i) {
            a.push_back((corpus.gold[i].*member).count(label) ? "present" : "absent");
            b.push_back((corpus.pred[i].*member).count(label) ? "present" : "absent");
        }
        return cohen_kappa(a, b);
    };
    for (Scene s : kAllScenes) kappas.push_back(binarized(&LabelRecord::scenes, s));
    for (Action a : kAllActions) kappas.push_back(binarized(&LabelRecord::actions, a));
    double sum = 0;
    for (double k : kappas) sum += k;
    return sum / kappas.size();
}

EvaluationReport evaluate(const std::vector<LabelRecord>& gold,
                          const std::vector<LabelRecord>& pred,
                          const MetricsOptions& opt) {
    const AlignedCorpus corpus = align_by_unit(gold, pred);
    EvaluationReport report;
    report.n_units = static_cast<long>(corpus.gold.size());
    if (corpus.gold.empty()) {
        report.mismatch_notes.push_back("gold file contains no units");
        return report;
    }
    report.scene_macro_f1 = scene_macro_f1(corpus, opt);
    report.scene_hamming = scene_hamming_loss(corpus);
    report.action_micro_f1 = action_micro_f1(corpus, opt);
    report.action_hamming = action_hamming_loss(corpus);
    report.action_hier_hamming = hierarchical_hamming_loss(corpus);
    report.kappa = mean_binarized_kappa(corpus);

    for (Scene s : kAllScenes) {
        const auto counts = confusion_counts(corpus, s);
        report.per_class.push_back({std::string(to_string(s)), precision_from_counts(counts),
                                    recall_from_counts(counts), f1_from_counts(counts, opt),
                                    counts});
    }
    for (Action a : kAllActions) {
        const auto counts = confusion_counts(corpus, a);
        report.per_class.push_back({std::string(to_string(a)), precision_from_counts(counts),
                                    recall_from_counts(counts), f1_from_counts(counts, opt),
                                    counts});
    }
    for (const auto& id : corpus.missing_pred_ids) {
        report.mismatch_notes.push_back("no prediction for unit " + id + " (scored all-negative)");
    }
    for (const auto& id : corpus.pred_only_ids) {
        report.mismatch_notes.push_back("prediction for unknown unit " + id + " (ignored)");
    }
    return report;
}

EvaluationReport evaluate_corpus(const std::filesystem::path& gold_file,
                                 const std::filesystem::path& pred_file,
                                 const MetricsOptions& opt) {
    return evaluate(read_label_file(gold_file), read_label_file(pred_file), opt);
}

std::string render_report_text(const EvaluationReport& report) {
    using util::format_double;
    std::string out;
    out += "units evaluated: " + std::to_string(report.n_units) + "\n\n";
    out += "task      F1      HL\n";
    out += "scene    " + format_double(report.scene_macro_f1, 3) + "   " +
           format_double(report.scene_hamming, 3) + "   (macro F1 / Hamming loss)\n";
    out += "action   " + format_double(report.action_micro_f1, 3) + "   " +
           format_double(report.action_hamming, 3) + "   (micro F1 / Hamming loss)\n";
    out += "action hierarchical Hamming loss: " + format_double(report.action_hier_hamming, 4) +
           "\n";
    if (report.kappa) {
        out += "mean per-label kappa: " + format_double(*report.kappa, 4) + "\n";
    }
    out += "\nper-class breakdown:\n";
    out += "  label                         prec    rec     f1      tp    fp    fn\n";
    for (const auto& pc : report.per_class) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %-28s %.3f   %.3f   %.3f   %4ld  %4ld  %4ld\n",
                      pc.label.c_str(), pc.precision, pc.recall, pc.f1, pc.counts.tp,
                      pc.counts.fp, pc.counts.fn);
        out += line;
    }
    if (!report.mismatch_notes.empty()) {
        out += "\nunit-id mismatches:\n";
        for (const auto& note : report.mismatch_notes) out += "  " + note + "\n";
    }
    return out;
}

nlohmann::json report_to_json(const EvaluationReport& report) {
    nlohmann::json j;
    j["n_units"] = report.n_units;
    j["scene"] = {{"macro_f1", report.scene_macro_f1}, {"hamming_loss", report.scene_hamming}};
    j["action"] = {{"micro_f1", report.action_micro_f1},
                   {"hamming_loss", report.action_hamming},
                   {"hierarchical_hamming_loss", report.action_hier_hamming}};
    if (report.kappa) j["mean_binarized_kappa"] = *report.kappa;
    j["per_class"] = nlohmann::json::array();
    for (const auto& pc : report.per_class) {
        j["per_class"].push_back({{"label", pc.label},
                                  {"precision", pc.precision},
                                  {"recall", pc.recall},
                                  {"f1", pc.f1},
                                  {"tp", pc.counts.tp},
                                  {"fp", pc.counts.fp},
                                  {"fn", pc.counts.fn}});
    }
    j["mismatch_notes"] = report.mismatch_notes;
    return j;
}

}  // namespace screencode::metrics
