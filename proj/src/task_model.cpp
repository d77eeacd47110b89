#include "stride/task_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace stride {

std::string to_string(Domain d) {
  switch (d) {
    case Domain::SRE: return "SRE";
    case Domain::COMPLIANCE: return "COMPLIANCE";
    case Domain::AUTOMATION: return "AUTOMATION";
    case Domain::SUPPORT: return "SUPPORT";
    case Domain::OTHER: return "OTHER";
  }
  return "OTHER";
}

std::string to_string(Modality m) {
  switch (m) {
    case Modality::LLM_CALL: return "LLM_CALL";
    case Modality::AI_ASSISTANT: return "AI_ASSISTANT";
    case Modality::AGENTIC_AI: return "AGENTIC_AI";
  }
  return "LLM_CALL";
}

std::string to_string(EdgeKind k) {
  return k == EdgeKind::TEMPORAL ? "TEMPORAL" : "DATA_FLOW";
}

Domain domain_from_string(const std::string& s) {
  if (s == "SRE") return Domain::SRE;
  if (s == "COMPLIANCE") return Domain::COMPLIANCE;
  if (s == "AUTOMATION") return Domain::AUTOMATION;
  if (s == "SUPPORT") return Domain::SUPPORT;
  if (s == "OTHER") return Domain::OTHER;
  throw std::invalid_argument("unknown domain: " + s);
}

Modality modality_from_string(const std::string& s) {
  if (s == "LLM_CALL") return Modality::LLM_CALL;
  if (s == "AI_ASSISTANT") return Modality::AI_ASSISTANT;
  if (s == "AGENTIC_AI") return Modality::AGENTIC_AI;
  throw std::invalid_argument("unknown modality: " + s);
}

EdgeKind edge_kind_from_string(const std::string& s) {
  if (s == "TEMPORAL") return EdgeKind::TEMPORAL;
  if (s == "DATA_FLOW") return EdgeKind::DATA_FLOW;
  throw std::invalid_argument("unknown edge kind: " + s);
}

std::vector<std::string> SubtaskFeatures::check() const {
  std::vector<std::string> out;
  auto in_range = [](int v) { return v >= 0 && v <= 2; };
  auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_range(reasoning_depth)) out.push_back("reasoning_depth out of {0,1,2}");
  if (!in_range(tool_need)) out.push_back("tool_need out of {0,1,2}");
  if (!in_range(state_need)) out.push_back("state_need out of {0,1,2}");
  if (!in_range(risk)) out.push_back("risk out of {0,1,2}");
  if (!unit(workflow_variability)) out.push_back("workflow_variability out of [0,1]");
  if (!unit(tool_volatility)) out.push_back("tool_volatility out of [0,1]");
  if (!unit(model_instability)) out.push_back("model_instability out of [0,1]");
  return out;
}

const Subtask* TaskGraph::find(const std::string& id) const {
  for (const auto& s : subtasks)
    if (s.id == id) return &s;
  return nullptr;
}

namespace {

// Tarjan strongly connected components; every SCC with more than one node is
// reported as a cycle. Node order follows the subtask list, so output is
// deterministic.
struct SccFinder {
  const std::vector<std::string>& nodes;
  const std::unordered_map<std::string, std::vector<std::string>>& adj;
  std::unordered_map<std::string, int> index, low;
  std::unordered_set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::vector<std::vector<std::string>> cycles;

  void run() {
    for (const auto& n : nodes)
      if (!index.count(n)) visit(n);
  }

  void visit(const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = adj.find(v);
    if (it != adj.end()) {
      for (const auto& w : it->second) {
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      while (true) {
        std::string w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
        if (w == v) break;
      }
      if (comp.size() > 1) {
        std::sort(comp.begin(), comp.end());
        cycles.push_back(std::move(comp));
      }
    }
  }
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

ValidationResult validate_graph(const TaskGraph& graph) {
  ValidationResult result;
  auto flag = [&](std::string msg) {
    result.ok = false;
    result.violations.push_back(std::move(msg));
  };

  if (graph.subtasks.empty()) flag("no subtasks");

  std::unordered_set<std::string> ids;
  for (const auto& s : graph.subtasks) {
    if (s.id.empty()) flag("subtask with empty id");
    if (!ids.insert(s.id).second) flag("duplicate subtask id " + s.id);
    if (s.action_verb.empty()) flag("subtask " + s.id + ": empty action_verb");
    if (s.target_noun.empty()) flag("subtask " + s.id + ": empty target_noun");
  }

  std::set<std::tuple<std::string, std::string, EdgeKind>> seen_edges;
  for (const auto& e : graph.edges) {
    if (e.from == e.to) flag("self-loop at " + e.from);
    if (!ids.count(e.from)) flag("dangling endpoint " + e.from);
    if (!ids.count(e.to)) flag("dangling endpoint " + e.to);
    if (!seen_edges.insert({e.from, e.to, e.kind}).second)
      flag("duplicate edge " + e.from + "->" + e.to + " (" + to_string(e.kind) + ")");
  }

  std::vector<std::string> nodes;
  nodes.reserve(graph.subtasks.size());
  for (const auto& s : graph.subtasks) nodes.push_back(s.id);
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& e : graph.edges)
    if (ids.count(e.from) && ids.count(e.to) && e.from != e.to)
      adj[e.from].push_back(e.to);

  SccFinder scc{nodes, adj, {}, {}, {}, {}, 0, {}};
  scc.run();
  for (const auto& cycle : scc.cycles) flag("cycle: " + join(cycle, ","));

  return result;
}

std::vector<std::string> topological_order(const TaskGraph& graph) {
  auto validation = validate_graph(graph);
  if (!validation.ok)
    throw std::invalid_argument("topological_order on invalid graph: " +
                                join(validation.violations, "; "));

  std::unordered_map<std::string, int> indegree;
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& s : graph.subtasks) indegree[s.id] = 0;
  for (const auto& e : graph.edges) {
    adj[e.from].push_back(e.to);
    ++indegree[e.to];
  }

  std::set<std::string> ready;  // ordered set gives the lexicographic tie-break
  for (const auto& [id, deg] : indegree)
    if (deg == 0) ready.insert(id);

  std::vector<std::string> order;
  order.reserve(graph.subtasks.size());
  while (!ready.empty()) {
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(next);
    for (const auto& succ : adj[next])
      if (--indegree[succ] == 0) ready.insert(succ);
  }
  return order;
}

SubtaskFeatures features_from_json(const Json& j) {
  SubtaskFeatures f;
  f.reasoning_depth = j.value("reasoning_depth", 0);
  f.tool_need = j.value("tool_need", 0);
  f.state_need = j.value("state_need", 0);
  if (j.contains("risk") && j.at("risk").is_string()) {
    const std::string r = j.at("risk").get<std::string>();
    if (r == "Low") f.risk = 0;
    else if (r == "Medium") f.risk = 1;
    else if (r == "High") f.risk = 2;
    else throw std::invalid_argument("unknown risk level: " + r);
  } else {
    f.risk = j.value("risk", 0);
  }
  f.workflow_variability = j.value("workflow_variability", 0.0);
  f.tool_volatility = j.value("tool_volatility", 0.0);
  f.model_instability = j.value("model_instability", 0.0);
  f.conditional_branches = j.value("conditional_branches", false);
  f.nondeterministic_tools = j.value("nondeterministic_tools", false);
  f.needs_midexec_validation = j.value("midexec_validation", false);
  auto problems = f.check();
  if (!problems.empty())
    throw std::invalid_argument("invalid subtask features: " + join(problems, "; "));
  return f;
}

Json features_to_json(const SubtaskFeatures& f) {
  Json j;
  j["reasoning_depth"] = f.reasoning_depth;
  j["tool_need"] = f.tool_need;
  j["state_need"] = f.state_need;
  j["risk"] = f.risk;
  j["workflow_variability"] = f.workflow_variability;
  j["tool_volatility"] = f.tool_volatility;
  j["model_instability"] = f.model_instability;
  j["conditional_branches"] = f.conditional_branches;
  j["nondeterministic_tools"] = f.nondeterministic_tools;
  j["midexec_validation"] = f.needs_midexec_validation;
  return j;
}

TaskDescription task_from_json(const Json& j) {
  TaskDescription t;
  t.id = j.at("id").get<std::string>();
  t.text = j.at("text").get<std::string>();
  if (t.id.empty()) throw std::invalid_argument("task with empty id");
  if (t.text.empty()) throw std::invalid_argument("task " + t.id + ": empty text");
  t.domain = domain_from_string(j.value("domain", "OTHER"));
  if (j.contains("declared_tools"))
    t.declared_tools = j.at("declared_tools").get<std::vector<std::string>>();
  if (j.contains("gold_modality"))
    t.gold_modality = modality_from_string(j.at("gold_modality").get<std::string>());
  if (j.contains("expert_label"))
    t.expert_label = modality_from_string(j.at("expert_label").get<std::string>());
  if (j.contains("subtask_features"))
    for (const auto& [label, jf] : j.at("subtask_features").items())
      t.subtask_features[label] = features_from_json(jf);
  return t;
}

Json task_to_json(const TaskDescription& task) {
  Json j;
  j["id"] = task.id;
  j["text"] = task.text;
  j["domain"] = to_string(task.domain);
  j["declared_tools"] = task.declared_tools;
  if (task.gold_modality) j["gold_modality"] = to_string(*task.gold_modality);
  if (task.expert_label) j["expert_label"] = to_string(*task.expert_label);
  if (!task.subtask_features.empty()) {
    Json jf = Json::object();
    for (const auto& [label, f] : task.subtask_features)
      jf[label] = features_to_json(f);
    j["subtask_features"] = jf;
  }
  return j;
}

std::vector<TaskDescription> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<TaskDescription> tasks;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": corpus parse error: " + e.what());
    }
    TaskDescription task = task_from_json(j);
    if (!seen.insert(task.id).second)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate task id " + task.id);
    tasks.push_back(std::move(task));
  }
  return tasks;
}

Json graph_to_json(const TaskGraph& graph) {
  Json j;
  j["task_id"] = graph.task_id;
  Json subs = Json::array();
  for (const auto& s : graph.subtasks) {
    Json js;
    js["id"] = s.id;
    js["action_verb"] = s.action_verb;
    js["target_noun"] = s.target_noun;
    js["label"] = s.label;
    js["features"] = features_to_json(s.features);
    subs.push_back(js);
  }
  j["subtasks"] = subs;
  Json edges = Json::array();
  for (const auto& e : graph.edges) {
    Json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["kind"] = to_string(e.kind);
    edges.push_back(je);
  }
  j["edges"] = edges;
  return j;
}

}  // namespace stride
