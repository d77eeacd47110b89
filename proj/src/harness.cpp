#include "stride/harness.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stride {

std::string to_string(Method m) {
  switch (m) {
    case Method::STRIDE: return "stride";
    case Method::NAIVE: return "naive";
    case Method::HEURISTIC: return "heuristic";
  }
  return "stride";
}

Method method_from_string(const std::string& s) {
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "stride") return Method::STRIDE;
  if (lower == "naive") return Method::NAIVE;
  if (lower == "heuristic") return Method::HEURISTIC;
  throw std::invalid_argument("unknown method: " + s);
}

Modality baseline_naive(const TaskDescription&) { return Modality::AGENTIC_AI; }

Modality baseline_heuristic(const SubtaskFeatures& task_max_features) {
  if (task_max_features.reasoning_depth >= 2 && task_max_features.tool_need >= 2)
    return Modality::AGENTIC_AI;
  if (task_max_features.reasoning_depth >= 1 || task_max_features.tool_need >= 1)
    return Modality::AI_ASSISTANT;
  return Modality::LLM_CALL;
}

namespace {

std::vector<Modality> predict(Method method, const std::vector<TaskDescription>& corpus,
                              const Lexicon& lexicon, const ScoringConfig& config,
                              const KBStore& kb, const AblationFlags& flags) {
  std::vector<Modality> out;
  out.reserve(corpus.size());
  for (const auto& task : corpus) {
    switch (method) {
      case Method::NAIVE:
        out.push_back(baseline_naive(task));
        break;
      case Method::HEURISTIC: {
        TaskGraph graph =
            attach_features(decompose(task, lexicon), task, config.estimation);
        out.push_back(baseline_heuristic(max_features(graph)));
        break;
      }
      case Method::STRIDE:
        out.push_back(run_task(task, lexicon, config, kb, flags).recommendation.modality);
        break;
    }
  }
  return out;
}

}  // namespace

MetricsTable evaluate(const std::vector<TaskDescription>& corpus, const Lexicon& lexicon,
                      const ScoringConfig& config, const KBStore& kb,
                      const std::vector<Method>& methods, const AblationFlags& flags) {
  for (const auto& task : corpus)
    if (!task.gold_modality)
      throw std::invalid_argument("evaluate: task " + task.id + " has no gold_modality");

  MetricsTable table;
  for (const auto& task : corpus) table.task_ids.push_back(task.id);
  if (methods.empty()) return table;
  if (corpus.empty()) throw std::invalid_argument("evaluate: empty corpus");

  std::vector<Modality> gold;
  gold.reserve(corpus.size());
  for (const auto& task : corpus) gold.push_back(*task.gold_modality);

  // Reduction and savings are always measured against the naive baseline.
  std::vector<Modality> naive =
      predict(Method::NAIVE, corpus, lexicon, config, kb, flags);
  std::map<Modality, double> cost_model = {
      {Modality::LLM_CALL, config.cost_llm_call},
      {Modality::AI_ASSISTANT, config.cost_ai_assistant},
      {Modality::AGENTIC_AI, config.cost_agentic_ai},
  };

  for (Method method : methods) {
    std::vector<Modality> predictions =
        method == Method::NAIVE ? naive
                                : predict(method, corpus, lexicon, config, kb, flags);

    MetricsRow row;
    row.method = to_string(method);
    row.accuracy = accuracy(predictions, gold);
    row.overengineering_reduction = overengineering_reduction(predictions, gold, naive);
    row.resource_savings = resource_savings(predictions, naive, cost_model);

    std::map<Domain, std::pair<size_t, size_t>> domain_counts;  // hits, totals
    size_t expert_hits = 0, expert_total = 0;
    for (size_t i = 0; i < corpus.size(); ++i) {
      auto& [hits, total] = domain_counts[corpus[i].domain];
      ++total;
      if (predictions[i] == gold[i]) ++hits;
      if (corpus[i].expert_label) {
        ++expert_total;
        if (predictions[i] == *corpus[i].expert_label) ++expert_hits;
      }
    }
    for (const auto& [domain, counts] : domain_counts)
      row.per_domain_accuracy[domain] =
          static_cast<double>(counts.first) / static_cast<double>(counts.second);
    if (expert_total > 0)
      row.expert_agreement =
          static_cast<double>(expert_hits) / static_cast<double>(expert_total);

    table.predictions[row.method] = std::move(predictions);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Report run_pipeline(const TaskDescription& task, const ScoringConfig& config,
                    const KBStore& kb, const Lexicon& lexicon, Persona persona) {
  PipelineResult result;
  try {
    result = run_task(task, lexicon, config, kb);
  } catch (const DecompositionError& e) {
    throw DecompositionError("task " + task.id + ": " + e.what());
  }
  return render_report(result.recommendation, result.profile, persona, kb);
}

Json metrics_to_json(const MetricsTable& table) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json jr;
    jr["method"] = row.method;
    jr["accuracy"] = row.accuracy;
    jr["overengineering_reduction"] = row.overengineering_reduction;
    jr["resource_savings"] = row.resource_savings;
    Json domains = Json::object();
    for (const auto& [domain, acc] : row.per_domain_accuracy)
      domains[to_string(domain)] = acc;
    jr["per_domain_accuracy"] = domains;
    if (row.expert_agreement) jr["expert_agreement"] = *row.expert_agreement;
    rows.push_back(jr);
  }
  j["rows"] = rows;
  j["task_ids"] = table.task_ids;
  Json predictions = Json::object();
  for (const auto& [method, mods] : table.predictions) {
    Json list = Json::array();
    for (Modality m : mods) list.push_back(to_string(m));
    predictions[method] = list;
  }
  j["predictions"] = predictions;
  return j;
}

std::string metrics_to_csv(const MetricsTable& table) {
  static const Domain kDomains[] = {Domain::SRE, Domain::COMPLIANCE, Domain::AUTOMATION,
                                    Domain::SUPPORT, Domain::OTHER};
  std::ostringstream out;
  out << "method,accuracy,overengineering_reduction,resource_savings";
  for (Domain d : kDomains) out << ",accuracy_" << to_string(d);
  out << "\n";
  out.precision(10);
  for (const auto& row : table.rows) {
    out << row.method << "," << row.accuracy << "," << row.overengineering_reduction
        << "," << row.resource_savings;
    for (Domain d : kDomains) {
      out << ",";
      auto it = row.per_domain_accuracy.find(d);
      if (it != row.per_domain_accuracy.end()) out << it->second;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace stride
