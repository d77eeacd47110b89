// Task-level aggregation, the modality rule cascade, and persona-aware
// report rendering.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stride/knowledge_base.hpp"
#include "stride/scoring.hpp"
#include "stride/task_model.hpp"

namespace stride {

struct TaskProfile {
  std::string task_id;
  double max_ass = 0.0;
  double mean_ass = 0.0;
  double max_tds = 0.0;
  bool any_sr = false;
  size_t subtask_count = 0;
  int max_risk = 0;
  Domain domain = Domain::OTHER;
  std::vector<std::pair<std::string, SubtaskScores>> per_subtask;  // graph order
};

enum class Persona { DEVELOPER, MANAGER };

std::string to_string(Persona p);
Persona persona_from_string(const std::string& s);

/// One classifier rule that fired, with the values that triggered it and the
/// modality standing after it.
struct RuleFiring {
  std::string rule;
  Json values;
  Modality resulting_modality = Modality::LLM_CALL;
};

struct Recommendation {
  Modality modality = Modality::LLM_CALL;
  std::vector<RuleFiring> rationale;  // nonempty; last entry carries `modality`
  std::vector<std::pair<std::string, double>> kb_evidence;  // (pattern_id, similarity)
  Json config_echo;
};

struct ClassifyOptions {
  bool ignore_tds = false;  // promotion considers self-reflection only
};

// Aggregates per-subtask scores into the task profile. Throws when the score
// map misses or over-covers the graph's subtasks, naming the offending ids.
TaskProfile aggregate_profile(const TaskGraph& graph,
                              const std::map<std::string, SubtaskScores>& scores,
                              Domain domain);

// Deterministic rule cascade: suitability band, then at most one promotion
// (dynamism at or above tds_promote, or any self-reflection flag), then a KB
// advisory note when a high-similarity pattern's majority outcome disagrees
// by one tier. The KB never overrides the decision.
Recommendation classify(const TaskProfile& profile, const KBStore& kb,
                        const ScoringConfig& config, const ClassifyOptions& options = {});

struct Report {
  Json machine;       // JSON document
  std::string human;  // plain-text rendering of the same content
};

// DEVELOPER reports carry per-subtask scores, reflection hooks to enable, and
// KB tool recommendations; MANAGER reports carry the decision, a summary
// paragraph, the risk level, and the relative cost band. Modality and
// rationale are identical across personas.
Report render_report(const Recommendation& rec, const TaskProfile& profile,
                     Persona persona, const KBStore& kb);

}  // namespace stride
