#include "stride/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stride {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "; ";
    out += parts[i];
  }
  return out;
}

void require_valid(const std::vector<std::string>& problems, const char* what) {
  if (!problems.empty())
    throw std::invalid_argument(std::string(what) + ": " + join(problems));
}

bool contains_token(const std::string& text, const std::string& word) {
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)); };
  size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_word(text[pos - 1]);
    size_t end = pos + word.size();
    bool right_ok = end >= text.size() || !is_word(text[end]);
    if (left_ok && right_ok) return true;
    pos = end;
  }
  return false;
}

}  // namespace

std::vector<std::string> ScoreWeights::check() const {
  std::vector<std::string> out;
  for (double w : {reasoning, tools, state, risk})
    if (!(w >= 0.0) || !std::isfinite(w)) {
      out.push_back("weights must be nonnegative and finite");
      break;
    }
  double sum = reasoning + tools + state + risk;
  if (std::fabs(sum - 1.0) > kWeightSumTolerance)
    out.push_back("weights must sum to 1 (got " + std::to_string(sum) + ")");
  return out;
}

std::vector<std::string> DynamismCoefficients::check() const {
  std::vector<std::string> out;
  for (double c : {alpha, beta, gamma})
    if (!(c >= 0.0) || !std::isfinite(c)) {
      out.push_back("coefficients must be nonnegative and finite");
      break;
    }
  if (alpha + beta > 1.0 + kWeightSumTolerance)
    out.push_back("alpha + beta must not exceed 1");
  if (gamma > 1.0 + kWeightSumTolerance)
    out.push_back("gamma must not exceed 1");
  return out;
}

std::vector<std::string> ScoringConfig::check() const {
  std::vector<std::string> out = weights.check();
  for (auto& p : coeffs.check()) out.push_back(p);
  if (!(theta >= 0.0 && theta <= 1.0)) out.push_back("theta must be in [0,1]");
  if (!(band_low >= 0.0 && band_low < band_high && band_high <= 2.0))
    out.push_back("bands must satisfy 0 <= band_low < band_high <= 2");
  if (!(tds_promote >= 0.0 && tds_promote <= 1.0))
    out.push_back("tds_promote must be in [0,1]");
  for (double c : {cost_llm_call, cost_ai_assistant, cost_agentic_ai})
    if (!(c > 0.0)) out.push_back("cost model entries must be positive");
  if (pre_feedback) {
    for (auto& p : pre_feedback->first.check())
      out.push_back("pre_feedback: " + p);
    for (auto& p : pre_feedback->second.check())
      out.push_back("pre_feedback: " + p);
  }
  return out;
}

void ScoringConfig::validate() const { require_valid(check(), "invalid scoring config"); }

double ScoringConfig::cost_of(Modality m) const {
  switch (m) {
    case Modality::LLM_CALL: return cost_llm_call;
    case Modality::AI_ASSISTANT: return cost_ai_assistant;
    case Modality::AGENTIC_AI: return cost_agentic_ai;
  }
  return cost_llm_call;
}

double agentic_suitability(const SubtaskFeatures& features, const ScoreWeights& weights) {
  require_valid(weights.check(), "invalid score weights");
  require_valid(features.check(), "invalid subtask features");
  return weights.reasoning * features.reasoning_depth +
         weights.tools * features.tool_need +
         weights.state * features.state_need +
         weights.risk * features.risk;
}

double true_dynamism(const SubtaskFeatures& features, const DynamismCoefficients& coeffs,
                     bool* clamped) {
  require_valid(coeffs.check(), "invalid dynamism coefficients");
  require_valid(features.check(), "invalid subtask features");
  double raw = coeffs.alpha * features.workflow_variability +
               coeffs.beta * features.tool_volatility -
               coeffs.gamma * features.model_instability;
  double value = std::clamp(raw, 0.0, 1.0);
  if (clamped) *clamped = value != raw;
  return value;
}

bool self_reflection(const SubtaskFeatures& features, double tds, double theta) {
  if (!(tds >= 0.0 && tds <= 1.0)) throw std::invalid_argument("tds must be in [0,1]");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must be in [0,1]");
  return tds >= theta && (features.conditional_branches ||
                          features.nondeterministic_tools ||
                          features.needs_midexec_validation);
}

SubtaskScores score_subtask(const SubtaskFeatures& features, const ScoringConfig& config) {
  SubtaskScores scores;
  scores.ass = agentic_suitability(features, config.weights);
  scores.tds = true_dynamism(features, config.coeffs, &scores.tds_clamped);
  scores.sr = self_reflection(features, scores.tds, config.theta);
  return scores;
}

SubtaskFeatures estimate_features(const TaskDescription& task, const EstimationRules& rules) {
  SubtaskFeatures f;
  size_t tool_count = task.declared_tools.size();
  f.tool_need = tool_count == 0 ? 0 : tool_count == 1 ? 1 : 2;

  size_t volatile_tools = 0;
  for (const auto& tool : task.declared_tools)
    if (tool.size() > 9 && tool.compare(tool.size() - 9, 9, ":volatile") == 0)
      ++volatile_tools;
  f.tool_volatility =
      std::clamp(rules.volatility_per_volatile_tool * static_cast<double>(volatile_tools),
                 0.0, 1.0);
  f.nondeterministic_tools = volatile_tools > 0;

  std::string text;
  text.reserve(task.text.size());
  for (char c : task.text) text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  static const char* kConditionalCues[] = {"if", "when", "unless", "depending", "otherwise"};
  bool conditional = false;
  for (const char* cue : kConditionalCues)
    if (contains_token(text, cue)) conditional = true;
  f.conditional_branches = conditional;
  f.workflow_variability =
      std::clamp(conditional ? rules.workflow_per_conditional_cue : 0.0, 0.0, 1.0);
  f.model_instability = std::clamp(rules.default_model_instability, 0.0, 1.0);
  return f;
}

namespace {

ScoreWeights weights_from_json(const Json& j) {
  ScoreWeights w;
  w.reasoning = j.at("r").get<double>();
  w.tools = j.at("t").get<double>();
  w.state = j.at("s").get<double>();
  w.risk = j.at("rho").get<double>();
  return w;
}

Json weights_to_json(const ScoreWeights& w) {
  Json j;
  j["r"] = w.reasoning;
  j["t"] = w.tools;
  j["s"] = w.state;
  j["rho"] = w.risk;
  return j;
}

DynamismCoefficients coeffs_from_json(const Json& j) {
  DynamismCoefficients c;
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.gamma = j.at("gamma").get<double>();
  return c;
}

Json coeffs_to_json(const DynamismCoefficients& c) {
  Json j;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  return j;
}

}  // namespace

ScoringConfig config_from_json(const Json& j) {
  ScoringConfig config;
  config.weights = weights_from_json(j.at("weights"));
  config.coeffs = coeffs_from_json(j.at("coeffs"));
  config.theta = j.at("theta").get<double>();
  config.band_low = j.at("band_low").get<double>();
  config.band_high = j.at("band_high").get<double>();
  config.tds_promote = j.at("tds_promote").get<double>();
  if (j.contains("estimation")) {
    const Json& je = j.at("estimation");
    config.estimation.workflow_per_conditional_cue =
        je.value("workflow_per_conditional_cue", 0.4);
    config.estimation.volatility_per_volatile_tool =
        je.value("volatility_per_volatile_tool", 0.4);
    config.estimation.default_model_instability =
        je.value("default_model_instability", 0.1);
  }
  if (j.contains("cost_model")) {
    const Json& jc = j.at("cost_model");
    config.cost_llm_call = jc.value("llm_call", 1.0);
    config.cost_ai_assistant = jc.value("ai_assistant", 3.0);
    config.cost_agentic_ai = jc.value("agentic_ai", 10.0);
  }
  if (j.contains("pre_feedback")) {
    const Json& jp = j.at("pre_feedback");
    config.pre_feedback = {weights_from_json(jp.at("weights")),
                           coeffs_from_json(jp.at("coeffs"))};
  }
  if (j.contains("provider") && j.at("provider").contains("uri"))
    config.provider_uri = j.at("provider").at("uri").get<std::string>();
  config.validate();
  return config;
}

Json config_to_json(const ScoringConfig& config) {
  Json j;
  j["weights"] = weights_to_json(config.weights);
  j["coeffs"] = coeffs_to_json(config.coeffs);
  j["theta"] = config.theta;
  j["band_low"] = config.band_low;
  j["band_high"] = config.band_high;
  j["tds_promote"] = config.tds_promote;
  Json je;
  je["workflow_per_conditional_cue"] = config.estimation.workflow_per_conditional_cue;
  je["volatility_per_volatile_tool"] = config.estimation.volatility_per_volatile_tool;
  je["default_model_instability"] = config.estimation.default_model_instability;
  j["estimation"] = je;
  Json jc;
  jc["llm_call"] = config.cost_llm_call;
  jc["ai_assistant"] = config.cost_ai_assistant;
  jc["agentic_ai"] = config.cost_agentic_ai;
  j["cost_model"] = jc;
  if (config.pre_feedback) {
    Json jp;
    jp["weights"] = weights_to_json(config.pre_feedback->first);
    jp["coeffs"] = coeffs_to_json(config.pre_feedback->second);
    j["pre_feedback"] = jp;
  }
  if (config.provider_uri) j["provider"] = Json{{"uri", *config.provider_uri}};
  return j;
}

ScoringConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": config parse error: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace stride
