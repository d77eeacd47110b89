#include "stride/recommender.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stride {

std::string to_string(Persona p) {
  return p == Persona::DEVELOPER ? "DEVELOPER" : "MANAGER";
}

Persona persona_from_string(const std::string& s) {
  std::string lower;
  for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "developer") return Persona::DEVELOPER;
  if (lower == "manager") return Persona::MANAGER;
  throw std::invalid_argument("unknown persona: " + s);
}

TaskProfile aggregate_profile(const TaskGraph& graph,
                              const std::map<std::string, SubtaskScores>& scores,
                              Domain domain) {
  std::vector<std::string> missing, extra;
  std::set<std::string> graph_ids;
  for (const auto& s : graph.subtasks) {
    graph_ids.insert(s.id);
    if (!scores.count(s.id)) missing.push_back(s.id);
  }
  for (const auto& [id, sc] : scores)
    if (!graph_ids.count(id)) extra.push_back(id);
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream msg;
    msg << "aggregate_profile: score map does not cover the graph";
    if (!missing.empty()) {
      msg << "; missing:";
      for (const auto& id : missing) msg << " " << id;
    }
    if (!extra.empty()) {
      msg << "; extra:";
      for (const auto& id : extra) msg << " " << id;
    }
    throw std::invalid_argument(msg.str());
  }
  if (graph.subtasks.empty())
    throw std::invalid_argument("aggregate_profile: graph has no subtasks");

  TaskProfile profile;
  profile.task_id = graph.task_id;
  profile.domain = domain;
  profile.subtask_count = graph.subtasks.size();
  double sum_ass = 0.0;
  for (const auto& s : graph.subtasks) {
    const SubtaskScores& sc = scores.at(s.id);
    profile.per_subtask.emplace_back(s.id, sc);
    profile.max_ass = std::max(profile.max_ass, sc.ass);
    profile.max_tds = std::max(profile.max_tds, sc.tds);
    profile.any_sr = profile.any_sr || sc.sr;
    profile.max_risk = std::max(profile.max_risk, s.features.risk);
    sum_ass += sc.ass;
  }
  profile.mean_ass = sum_ass / static_cast<double>(graph.subtasks.size());
  return profile;
}

namespace {

Modality promote(Modality m) {
  return m == Modality::AGENTIC_AI ? Modality::AGENTIC_AI
                                   : static_cast<Modality>(static_cast<int>(m) + 1);
}

int level_distance(Modality a, Modality b) {
  return std::abs(static_cast<int>(a) - static_cast<int>(b));
}

}  // namespace

Recommendation classify(const TaskProfile& profile, const KBStore& kb,
                        const ScoringConfig& config, const ClassifyOptions& options) {
  config.validate();
  Recommendation rec;
  rec.config_echo = config_to_json(config);

  Modality band;
  if (profile.max_ass < config.band_low)
    band = Modality::LLM_CALL;
  else if (profile.max_ass < config.band_high)
    band = Modality::AI_ASSISTANT;
  else
    band = Modality::AGENTIC_AI;
  {
    RuleFiring firing;
    firing.rule = "suitability_band";
    firing.values["max_ass"] = profile.max_ass;
    firing.values["band_low"] = config.band_low;
    firing.values["band_high"] = config.band_high;
    firing.values["band"] = to_string(band);
    firing.resulting_modality = band;
    rec.rationale.push_back(std::move(firing));
  }

  Modality decided = band;
  bool tds_trigger = !options.ignore_tds && profile.max_tds >= config.tds_promote;
  if (tds_trigger || profile.any_sr) {
    decided = promote(band);  // never promoted twice
    RuleFiring firing;
    firing.rule = "dynamism_promotion";
    firing.values["max_tds"] = profile.max_tds;
    firing.values["tds_promote"] = config.tds_promote;
    firing.values["tds_trigger"] = tds_trigger;
    firing.values["any_sr"] = profile.any_sr;
    firing.resulting_modality = decided;
    rec.rationale.push_back(std::move(firing));
  }

  // KB retrieval: best match per subtask, deduplicated, strongest first.
  std::map<std::string, double> best;
  for (const auto& [subtask_id, unused] : profile.per_subtask) {
    for (const auto& hit : kb.query_similar(subtask_id, 1)) {
      auto [it, inserted] = best.emplace(hit.record.pattern_id, hit.similarity);
      if (!inserted) it->second = std::max(it->second, hit.similarity);
    }
  }
  rec.kb_evidence.assign(best.begin(), best.end());
  std::stable_sort(rec.kb_evidence.begin(), rec.kb_evidence.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  if (rec.kb_evidence.size() > 5) rec.kb_evidence.resize(5);

  if (!rec.kb_evidence.empty() && rec.kb_evidence.front().second >= 0.8) {
    const PatternRecord* top = kb.find(rec.kb_evidence.front().first);
    std::int64_t total = top->total_outcomes();
    if (total > 0) {
      for (const auto& [m, count] : top->observed_modality_counts) {
        if (count * 2 > total && level_distance(m, decided) == 1) {
          // Advisory only: the historical majority disagrees by one tier.
          RuleFiring firing;
          firing.rule = "kb_advisory";
          firing.values["pattern_id"] = top->pattern_id;
          firing.values["similarity"] = rec.kb_evidence.front().second;
          firing.values["majority_modality"] = to_string(m);
          firing.values["override"] = false;
          firing.resulting_modality = decided;
          rec.rationale.push_back(std::move(firing));
          break;
        }
      }
    }
  }

  rec.modality = decided;
  return rec;
}

namespace {

Json rationale_to_json(const std::vector<RuleFiring>& rationale) {
  Json out = Json::array();
  for (const auto& firing : rationale) {
    Json jf;
    jf["rule"] = firing.rule;
    jf["values"] = firing.values;
    jf["resulting_modality"] = to_string(firing.resulting_modality);
    out.push_back(jf);
  }
  return out;
}

const char* risk_name(int risk) {
  return risk <= 0 ? "Low" : risk == 1 ? "Medium" : "High";
}

std::string cost_band(Modality m, const ScoringConfig& config) {
  double cost = config.cost_of(m);
  double base = config.cost_of(Modality::LLM_CALL);
  std::ostringstream out;
  out << (m == Modality::LLM_CALL ? "low" : m == Modality::AI_ASSISTANT ? "medium" : "high");
  out << " (" << cost / base << "x LLM-call baseline)";
  return out.str();
}

std::string summary_paragraph(const Recommendation& rec, const TaskProfile& profile) {
  std::ostringstream out;
  out << "Recommended modality for task " << profile.task_id << " is "
      << to_string(rec.modality) << ". The strongest subtask suitability is "
      << profile.max_ass << " across " << profile.subtask_count
      << (profile.subtask_count == 1 ? " subtask" : " subtasks")
      << ", with peak dynamism " << profile.max_tds << ". ";
  bool promoted = false;
  for (const auto& firing : rec.rationale)
    if (firing.rule == "dynamism_promotion") promoted = true;
  if (promoted)
    out << "Dynamism or self-reflection requirements promoted the recommendation by one "
           "tier. ";
  out << "Overall risk is " << risk_name(profile.max_risk) << ".";
  return out.str();
}

}  // namespace

Report render_report(const Recommendation& rec, const TaskProfile& profile,
                     Persona persona, const KBStore& kb) {
  ScoringConfig config = config_from_json(rec.config_echo);

  Json doc;
  doc["task_id"] = profile.task_id;
  doc["modality"] = to_string(rec.modality);
  doc["rationale"] = rationale_to_json(rec.rationale);
  doc["persona"] = to_string(persona);

  Json scores;
  scores["max_ass"] = profile.max_ass;
  scores["mean_ass"] = profile.mean_ass;
  scores["max_tds"] = profile.max_tds;
  scores["any_sr"] = profile.any_sr;
  scores["subtask_count"] = profile.subtask_count;
  scores["risk"] = risk_name(profile.max_risk);
  if (persona == Persona::DEVELOPER) {
    Json per = Json::array();
    for (const auto& [id, sc] : profile.per_subtask) {
      Json js;
      js["id"] = id;
      js["ass"] = sc.ass;
      js["tds"] = sc.tds;
      js["sr"] = sc.sr;
      if (sc.tds_clamped) js["tds_clamped"] = true;
      per.push_back(js);
    }
    scores["per_subtask"] = per;
  }
  doc["scores"] = scores;

  if (persona == Persona::DEVELOPER) {
    Json hooks = Json::array();
    for (const auto& [id, sc] : profile.per_subtask)
      if (sc.sr) hooks.push_back(id);
    doc["sr_hooks"] = hooks;

    Json tools = Json::object();
    for (const auto& [id, unused] : profile.per_subtask) {
      auto hits = kb.query_similar(id, 1);
      if (!hits.empty() && hits.front().similarity >= 0.8 &&
          !hits.front().record.tool_recommendations.empty())
        tools[id] = hits.front().record.tool_recommendations;
    }
    if (!tools.empty()) doc["tool_recommendations"] = tools;
  } else {
    doc["summary"] = summary_paragraph(rec, profile);
    doc["cost_band"] = cost_band(rec.modality, config);
  }

  doc["config_echo"] = rec.config_echo;
  Json evidence = Json::array();
  for (const auto& [pattern_id, similarity] : rec.kb_evidence) {
    Json je;
    je["pattern_id"] = pattern_id;
    je["similarity"] = similarity;
    evidence.push_back(je);
  }
  doc["kb_evidence"] = evidence;

  std::ostringstream text;
  text << "=== Modality recommendation: " << profile.task_id << " ===\n";
  text << "Persona: " << to_string(persona) << "\n";
  text << "Modality: " << to_string(rec.modality) << "\n";
  text << "Scores: max_ass=" << profile.max_ass << " mean_ass=" << profile.mean_ass
       << " max_tds=" << profile.max_tds << " any_sr=" << (profile.any_sr ? "yes" : "no")
       << " risk=" << risk_name(profile.max_risk) << "\n";
  text << "Rationale:\n";
  for (const auto& firing : rec.rationale)
    text << "  - " << firing.rule << " " << firing.values.dump()
         << " -> " << to_string(firing.resulting_modality) << "\n";
  if (persona == Persona::DEVELOPER) {
    text << "Subtasks:\n";
    for (const auto& [id, sc] : profile.per_subtask)
      text << "  - " << id << ": ass=" << sc.ass << " tds=" << sc.tds
           << " sr=" << (sc.sr ? "yes" : "no") << "\n";
    if (doc.contains("sr_hooks") && !doc["sr_hooks"].empty()) {
      text << "Reflection hooks to enable:";
      for (const auto& id : doc["sr_hooks"]) text << " " << id.get<std::string>();
      text << "\n";
    }
    if (doc.contains("tool_recommendations")) {
      text << "Tool recommendations:\n";
      for (const auto& [id, list] : doc["tool_recommendations"].items()) {
        text << "  - " << id << ":";
        for (const auto& tool : list) text << " " << tool.get<std::string>();
        text << "\n";
      }
    }
  } else {
    text << "Summary: " << doc["summary"].get<std::string>() << "\n";
    text << "Cost band: " << doc["cost_band"].get<std::string>() << "\n";
  }
  if (!rec.kb_evidence.empty()) {
    text << "KB evidence:\n";
    for (const auto& [pattern_id, similarity] : rec.kb_evidence)
      text << "  - " << pattern_id << " (similarity " << similarity << ")\n";
  }

  return {std::move(doc), text.str()};
}

}  // namespace stride
