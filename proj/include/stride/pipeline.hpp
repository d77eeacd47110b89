// The end-to-end path for one task: decompose, attach features, score,
// aggregate, classify. Shared by the evaluation harness and calibration so
// every caller sees identical predictions.
#pragma once

#include <string>
#include <vector>

#include "stride/decomposer.hpp"
#include "stride/recommender.hpp"

namespace stride {

/// Component switches for ablation runs; all false is the full pipeline.
struct AblationFlags {
  bool disable_decomposition = false;  // collapse to one max-feature subtask
  bool disable_tds = false;            // classifier ignores dynamism promotion
  bool equal_tds_weights = false;      // force alpha = beta = gamma
  bool disable_sr = false;             // self-reflection forced off everywhere
  bool disable_feedback = false;       // score with the pre-calibration snapshot

  bool any() const {
    return disable_decomposition || disable_tds || equal_tds_weights || disable_sr ||
           disable_feedback;
  }
};

AblationFlags ablation_flags_from_names(const std::vector<std::string>& names);

struct PipelineResult {
  TaskGraph graph;
  TaskProfile profile;
  Recommendation recommendation;
  std::vector<std::string> warnings;
};

// Effective scoring config after ablations: feedback reversion first, then
// coefficient equalization (mean of the configured triple, rescaled to keep
// alpha + beta <= 1).
ScoringConfig apply_ablations(const ScoringConfig& config, const AblationFlags& flags);

// Fills each subtask's features from the task's label-keyed feature map,
// falling back to rule-based estimation for labels the map does not cover.
TaskGraph attach_features(TaskGraph graph, const TaskDescription& task,
                          const EstimationRules& rules);

// Element-wise maxima (booleans OR) across all subtasks.
SubtaskFeatures max_features(const TaskGraph& graph);

// Replaces the subtask list with one synthetic subtask carrying max_features.
TaskGraph collapse_graph(const TaskGraph& graph);

PipelineResult run_task(const TaskDescription& task, const Lexicon& lexicon,
                        const ScoringConfig& config, const KBStore& kb,
                        const AblationFlags& flags = {});

}  // namespace stride
