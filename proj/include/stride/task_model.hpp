// Domain types shared by every module: tasks, subtasks, dependency graphs,
// execution modalities, and the structural checks that keep graphs valid.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace stride {

using Json = nlohmann::ordered_json;

enum class Domain { SRE, COMPLIANCE, AUTOMATION, SUPPORT, OTHER };

// Execution tiers, totally ordered by autonomy: LLM_CALL < AI_ASSISTANT < AGENTIC_AI.
enum class Modality { LLM_CALL = 0, AI_ASSISTANT = 1, AGENTIC_AI = 2 };

enum class EdgeKind { TEMPORAL, DATA_FLOW };

std::string to_string(Domain d);
std::string to_string(Modality m);
std::string to_string(EdgeKind k);
Domain domain_from_string(const std::string& s);
Modality modality_from_string(const std::string& s);
EdgeKind edge_kind_from_string(const std::string& s);

/// Per-subtask signals consumed by the scoring rules.
/// Discrete fields are 0..2 scales; continuous fields live in [0,1].
struct SubtaskFeatures {
  int reasoning_depth = 0;  // 0 shallow, 1 medium, 2 deep
  int tool_need = 0;        // 0 none, 1 single, 2 multiple
  int state_need = 0;       // 0 none, 1 ephemeral, 2 persistent
  int risk = 0;             // 0 low, 1 medium, 2 high
  double workflow_variability = 0.0;
  double tool_volatility = 0.0;
  double model_instability = 0.0;
  bool conditional_branches = false;
  bool nondeterministic_tools = false;
  bool needs_midexec_validation = false;

  // Empty when all fields are in range; otherwise one message per violation.
  std::vector<std::string> check() const;

  bool operator==(const SubtaskFeatures&) const = default;
};

struct Subtask {
  std::string id;  // unique within its graph
  std::string action_verb;
  std::string target_noun;
  std::string label;
  SubtaskFeatures features;
};

struct DependencyEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::TEMPORAL;

  bool operator==(const DependencyEdge&) const = default;
};

struct TaskGraph {
  std::string task_id;
  std::vector<Subtask> subtasks;  // kept in extraction (text) order
  std::vector<DependencyEdge> edges;

  const Subtask* find(const std::string& id) const;
};

struct TaskDescription {
  std::string id;
  std::string text;
  Domain domain = Domain::OTHER;
  std::vector<std::string> declared_tools;
  std::optional<Modality> gold_modality;         // present in labeled corpora
  std::optional<Modality> expert_label;          // optional human annotation
  std::map<std::string, SubtaskFeatures> subtask_features;  // keyed by subtask label
};

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks every TaskGraph invariant: at least one subtask, unique subtask ids,
// nonempty verbs/nouns, edge endpoints resolve, no self-loops, no duplicate
// edges, acyclic. Violations are data, not failures.
ValidationResult validate_graph(const TaskGraph& graph);

// Deterministic topological order: edge sources precede targets, ties broken
// lexicographically by subtask id. Throws std::invalid_argument if the graph
// fails validate_graph.
std::vector<std::string> topological_order(const TaskGraph& graph);

// --- corpus file format (line-delimited JSON, one task per line) ---

TaskDescription task_from_json(const Json& j);
Json task_to_json(const TaskDescription& task);
SubtaskFeatures features_from_json(const Json& j);
Json features_to_json(const SubtaskFeatures& f);

std::vector<TaskDescription> load_corpus(const std::string& path);

Json graph_to_json(const TaskGraph& graph);

}  // namespace stride
