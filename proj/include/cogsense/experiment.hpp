#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cogsense/config.hpp"
#include "cogsense/fusion.hpp"
#include "cogsense/metrics.hpp"

namespace cogsense {

// Evaluation products for one fusion rule.
struct FuserResult {
    FuserSpec spec;
    RocCurve roc;
    double auc_value = 0.0;
    ConfusionMatrix confusion_matrix;
    double detection_rate = 0.0;    // TP / positives at the default threshold
    double false_alarm_rate = 0.0;  // FP / negatives at the default threshold
    TrainingRecord training;        // adaptive fusers only (empty otherwise)
    bool has_training_record = false;
    std::string fuser_json;         // trained parameters (adaptive fusers only)
};

struct RunSummary {
    ScenarioConfig config;
    std::vector<FuserResult> fusers;
    std::size_t training_trials = 0;
    std::size_t evaluation_trials = 0;
    double wall_seconds = 0.0;  // diagnostic only; never serialized
};

// Pre-trained fuser parameters that replace in-run training.
struct LoadedFusers {
    std::optional<AdaptiveFuser> nlms;
    std::optional<MlpFuser> mlp;
};

// One synthesized trial at the fusion center.
struct TrialData {
    int label = 0;
    std::vector<double> features;  // per-user fusion features (no bias entry)
    std::vector<int> bits;         // per-user hard decisions for rule-based fusion
};

// Synthesize all trials of the scenario. Deterministic in (config, seed) and
// independent of `threads`.
std::vector<TrialData> synthesize_trials(const ScenarioConfig& config, unsigned threads = 1);

// Full pipeline: synthesize, train adaptive fusers on the leading
// train_fraction of trials, evaluate every configured fuser on the rest.
RunSummary run_experiment(const ScenarioConfig& config, unsigned threads = 1,
                          const LoadedFusers* loaded = nullptr);

// Train the adaptive fusers of the scenario and return their serialized
// parameters keyed by fuser name ("nlms"/"mlp").
std::vector<std::pair<std::string, std::string>> train_fusers(const ScenarioConfig& config,
                                                              unsigned threads = 1);

// Write roc_<fuser>.csv, confusion_<fuser>.csv, training_<fuser>.csv and
// summary.json into out_dir. All contents are rendered and validated before
// the first byte is written; on failure nothing is left behind.
// Returns the paths written.
std::vector<std::string> emit_outputs(const RunSummary& summary, const std::string& out_dir);

// The serialized summary.json body (deterministic, 9 significant digits).
std::string render_summary_json(const RunSummary& summary);

}  // namespace cogsense
