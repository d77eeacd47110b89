#include "stride/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stride {

AblationFlags ablation_flags_from_names(const std::vector<std::string>& names) {
  AblationFlags flags;
  for (const auto& name : names) {
    if (name == "disable_decomposition") flags.disable_decomposition = true;
    else if (name == "disable_tds") flags.disable_tds = true;
    else if (name == "equal_tds_weights") flags.equal_tds_weights = true;
    else if (name == "disable_sr") flags.disable_sr = true;
    else if (name == "disable_feedback") flags.disable_feedback = true;
    else if (!name.empty())
      throw std::invalid_argument("unknown ablation flag: " + name);
  }
  return flags;
}

ScoringConfig apply_ablations(const ScoringConfig& config, const AblationFlags& flags) {
  ScoringConfig out = config;
  if (flags.disable_feedback) {
    if (config.pre_feedback) {
      out.weights = config.pre_feedback->first;
      out.coeffs = config.pre_feedback->second;
    } else {
      out.weights = {0.25, 0.25, 0.25, 0.25};
      out.coeffs = {0.5, 0.5, 0.5};
    }
  }
  if (flags.equal_tds_weights) {
    double mean = (out.coeffs.alpha + out.coeffs.beta + out.coeffs.gamma) / 3.0;
    if (2.0 * mean > 1.0) mean = 0.5;
    out.coeffs = {mean, mean, mean};
  }
  out.validate();
  return out;
}

TaskGraph attach_features(TaskGraph graph, const TaskDescription& task,
                          const EstimationRules& rules) {
  for (auto& subtask : graph.subtasks) {
    auto it = task.subtask_features.find(subtask.label);
    subtask.features =
        it != task.subtask_features.end() ? it->second : estimate_features(task, rules);
  }
  return graph;
}

SubtaskFeatures max_features(const TaskGraph& graph) {
  SubtaskFeatures out;
  for (const auto& s : graph.subtasks) {
    const SubtaskFeatures& f = s.features;
    out.reasoning_depth = std::max(out.reasoning_depth, f.reasoning_depth);
    out.tool_need = std::max(out.tool_need, f.tool_need);
    out.state_need = std::max(out.state_need, f.state_need);
    out.risk = std::max(out.risk, f.risk);
    out.workflow_variability = std::max(out.workflow_variability, f.workflow_variability);
    out.tool_volatility = std::max(out.tool_volatility, f.tool_volatility);
    out.model_instability = std::max(out.model_instability, f.model_instability);
    out.conditional_branches = out.conditional_branches || f.conditional_branches;
    out.nondeterministic_tools = out.nondeterministic_tools || f.nondeterministic_tools;
    out.needs_midexec_validation =
        out.needs_midexec_validation || f.needs_midexec_validation;
  }
  return out;
}

TaskGraph collapse_graph(const TaskGraph& graph) {
  TaskGraph out;
  out.task_id = graph.task_id;
  Subtask whole;
  whole.id = "whole_task";
  whole.action_verb = "perform";
  whole.target_noun = "task";
  whole.label = "Whole Task";
  whole.features = max_features(graph);
  out.subtasks.push_back(std::move(whole));
  return out;
}

PipelineResult run_task(const TaskDescription& task, const Lexicon& lexicon,
                        const ScoringConfig& config, const KBStore& kb,
                        const AblationFlags& flags) {
  ScoringConfig effective = apply_ablations(config, flags);

  PipelineResult result;
  result.graph =
      attach_features(decompose(task, lexicon, &result.warnings), task, effective.estimation);
  if (flags.disable_decomposition) result.graph = collapse_graph(result.graph);

  std::map<std::string, SubtaskScores> scores;
  for (const auto& subtask : result.graph.subtasks) {
    SubtaskScores sc = score_subtask(subtask.features, effective);
    if (flags.disable_sr) sc.sr = false;
    scores[subtask.id] = sc;
  }

  result.profile = aggregate_profile(result.graph, scores, task.domain);
  ClassifyOptions options;
  options.ignore_tds = flags.disable_tds;
  result.recommendation = classify(result.profile, kb, effective, options);
  return result;
}

}  // namespace stride
