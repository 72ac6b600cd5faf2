#pragma once

// Multi-label evaluation over 20-second units: per-class confusion counts,
// precision/recall/F1, macro F1, Hamming loss, hierarchical Hamming loss,
// micro F1, and Cohen's kappa.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "screencode/taxonomy.hpp"

namespace screencode::metrics {

struct ConfusionCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

struct MetricsOptions {
    // F1 of a class with tp=fp=fn=0 (absent everywhere). The 1.0 convention
    // keeps never-occurring classes from capping macro F1.
    bool vacuous_f1_is_one = true;
};

// Gold and predictions paired by unit_id. A missing prediction scores as
// all-negative; prediction-only ids are reported, duplicates are an error.
struct AlignedCorpus {
    std::vector<LabelRecord> gold;
    std::vector<LabelRecord> pred;  // same length/order as gold
    std::vector<std::string> pred_only_ids;
    std::vector<std::string> missing_pred_ids;
};

AlignedCorpus align_by_unit(const std::vector<LabelRecord>& gold,
                            const std::vector<LabelRecord>& pred);

ConfusionCounts confusion_counts(const AlignedCorpus& corpus, Scene scene);
ConfusionCounts confusion_counts(const AlignedCorpus& corpus, Action action);

double precision_from_counts(const ConfusionCounts& c);
double recall_from_counts(const ConfusionCounts& c);
double f1_from_counts(const ConfusionCounts& c, const MetricsOptions& opt = {});

double macro_f1(std::span<const ConfusionCounts> per_class, const MetricsOptions& opt = {});
double micro_f1(std::span<const ConfusionCounts> per_class, const MetricsOptions& opt = {});

double scene_macro_f1(const AlignedCorpus& corpus, const MetricsOptions& opt = {});
double scene_hamming_loss(const AlignedCorpus& corpus);
double action_micro_f1(const AlignedCorpus& corpus, const MetricsOptions& opt = {});
double action_hamming_loss(const AlignedCorpus& corpus);

// Node set: the 3 scene nodes, every valid (scene, action) pair from the
// coding scheme, and freezing under a virtual root. A pair node only costs
// when its scene node agrees between gold and prediction, so errors are not
// double-counted under a wrong ancestor.
struct HierarchyNode {
    std::optional<Scene> scene;
    std::optional<Action> action;  // both set: pair node; action only: root-level node
};
std::vector<HierarchyNode> hierarchy_nodes();
double hierarchical_hamming_loss(const AlignedCorpus& corpus);

// Chance-corrected agreement for single-category sequences.
double cohen_kappa(const std::vector<std::string>& rater_a,
                   const std::vector<std::string>& rater_b);

// Presence/absence kappa per label, averaged over the 3 scenes + 8 actions.
double mean_binarized_kappa(const AlignedCorpus& corpus);

struct PerClassMetrics {
    std::string label;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    ConfusionCounts counts;
};

struct EvaluationReport {
    long n_units = 0;
    double scene_macro_f1 = 0;
    double scene_hamming = 0;
    double action_micro_f1 = 0;
    double action_hamming = 0;
    double action_hier_hamming = 0;
    std::optional<double> kappa;
    std::vector<PerClassMetrics> per_class;  // 3 scenes then 8 actions
    std::vector<std::string> mismatch_notes;
};

EvaluationReport evaluate(const std::vector<LabelRecord>& gold,
                          const std::vector<LabelRecord>& pred,
                          const MetricsOptions& opt = {});
EvaluationReport evaluate_corpus(const std::filesystem::path& gold_file,
                                 const std::filesystem::path& pred_file,
                                 const MetricsOptions& opt = {});

std::string render_report_text(const EvaluationReport& report);
nlohmann::json report_to_json(const EvaluationReport& report);

}  // namespace screencode::metrics
