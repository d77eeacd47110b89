// Evaluation harness: baseline policies, corpus-level method comparison with
// per-domain accuracy, and the single-task pipeline entry point.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stride/calibration.hpp"
#include "stride/pipeline.hpp"

namespace stride {

enum class Method { STRIDE, NAIVE, HEURISTIC };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// Always deploys the most autonomous tier.
Modality baseline_naive(const TaskDescription& task);

// Agent only when both reasoning depth and tool need hit their maxima;
// assistant when either signal is present at all; LLM call otherwise.
Modality baseline_heuristic(const SubtaskFeatures& task_max_features);

struct MetricsRow {
  std::string method;
  double accuracy = 0.0;
  double overengineering_reduction = 0.0;
  double resource_savings = 0.0;
  std::map<Domain, double> per_domain_accuracy;
  std::optional<double> expert_agreement;  // only when the corpus has expert labels
};

struct MetricsTable {
  std::vector<MetricsRow> rows;  // one per evaluated method, request order
  std::vector<std::string> task_ids;
  std::map<std::string, std::vector<Modality>> predictions;  // method name -> per task
};

// Runs every requested method over the labeled corpus; reduction and savings
// are measured against the naive all-agent baseline. Deterministic given
// (corpus, config, kb, flags); ablation flags apply to the STRIDE rows only.
MetricsTable evaluate(const std::vector<TaskDescription>& corpus, const Lexicon& lexicon,
                      const ScoringConfig& config, const KBStore& kb,
                      const std::vector<Method>& methods, const AblationFlags& flags = {});

// Full pipeline for one task, rendered for the given persona. The modality in
// the report equals what evaluate records for the task.
Report run_pipeline(const TaskDescription& task, const ScoringConfig& config,
                    const KBStore& kb, const Lexicon& lexicon, Persona persona);

Json metrics_to_json(const MetricsTable& table);
std::string metrics_to_csv(const MetricsTable& table);

}  // namespace stride
