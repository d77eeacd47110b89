// Per-subtask scoring: agentic suitability (weighted feature sum), true
// dynamism (workflow-credited variability), and the self-reflection rule.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stride/task_model.hpp"

namespace stride {

/// Weights of the suitability sum. Must be nonnegative and sum to 1.
struct ScoreWeights {
  double reasoning = 0.4;
  double tools = 0.3;
  double state = 0.2;
  double risk = 0.1;

  std::vector<std::string> check() const;
};

/// Dynamism mix: alpha credits workflow variability, beta credits tool
/// volatility, gamma discounts model instability. alpha + beta <= 1 and
/// gamma <= 1 keep the raw score inside [-1, 1] before clamping.
struct DynamismCoefficients {
  double alpha = 0.6;
  double beta = 0.4;
  double gamma = 0.2;

  std::vector<std::string> check() const;
};

// Constants for estimating features when a corpus task carries none.
struct EstimationRules {
  double workflow_per_conditional_cue = 0.4;  // any conditional cue in the text
  double volatility_per_volatile_tool = 0.4;  // per declared "<tool>:volatile"
  double default_model_instability = 0.1;
};

struct ScoringConfig {
  ScoreWeights weights;
  DynamismCoefficients coeffs;
  double theta = 0.5;        // dynamism threshold for the self-reflection rule
  double band_low = 0.5;     // suitability below this -> LLM_CALL
  double band_high = 1.5;    // suitability below this -> AI_ASSISTANT
  double tds_promote = 0.6;  // dynamism at or above this promotes one tier
  EstimationRules estimation;
  double cost_llm_call = 1.0;
  double cost_ai_assistant = 3.0;
  double cost_agentic_ai = 10.0;
  // Uncalibrated snapshot used when outcome-driven calibration is ablated.
  std::optional<std::pair<ScoreWeights, DynamismCoefficients>> pre_feedback;
  // External decomposer endpoint ("cmd:..." or "http(s)://..."); the built-in
  // lexicon decomposer runs when absent.
  std::optional<std::string> provider_uri;

  std::vector<std::string> check() const;
  void validate() const;  // throws std::invalid_argument on any violation

  double cost_of(Modality m) const;
};

struct SubtaskScores {
  double ass = 0.0;  // agentic suitability, in [0, 2]
  double tds = 0.0;  // true dynamism, clamped to [0, 1]
  bool sr = false;
  bool tds_clamped = false;  // set when the raw dynamism fell outside [0, 1]
};

// w_r*R + w_t*T + w_s*S + w_rho*rho. Throws if weights do not sum to 1 or
// any input is out of range.
double agentic_suitability(const SubtaskFeatures& features, const ScoreWeights& weights);

// clamp(alpha*W + beta*V - gamma*M, 0, 1). `clamped`, when given, reports
// whether clamping fired.
double true_dynamism(const SubtaskFeatures& features, const DynamismCoefficients& coeffs,
                     bool* clamped = nullptr);

// True iff tds >= theta and at least one trigger flag (conditional branches,
// nondeterministic tools, mid-execution validation) is set.
bool self_reflection(const SubtaskFeatures& features, double tds, double theta);

SubtaskScores score_subtask(const SubtaskFeatures& features, const ScoringConfig& config);

// Fallback when a corpus task supplies no features for a subtask: derive
// coarse signals from the declared tool list and conditional cues in the text.
SubtaskFeatures estimate_features(const TaskDescription& task, const EstimationRules& rules);

// --- config file format (JSON) ---

ScoringConfig config_from_json(const Json& j);
Json config_to_json(const ScoringConfig& config);
ScoringConfig load_config(const std::string& path);

}  // namespace stride
