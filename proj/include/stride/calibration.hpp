// Grid-search calibration of the scoring config against a labeled corpus,
// plus the three evaluation metrics.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stride/pipeline.hpp"

namespace stride {

/// Candidate values per tunable parameter. Empty lists fall back to the base
/// config's current value. Weight quadruples are normalized to sum 1 before
/// evaluation.
struct GridSpec {
  std::vector<double> w_r, w_t, w_s, w_rho;
  std::vector<double> alpha, beta, gamma;
  std::vector<double> theta;
  std::vector<double> band_low, band_high;
  std::vector<double> tds_promote;

  std::vector<std::string> check() const;
};

GridSpec grid_from_json(const Json& j);
GridSpec load_grid(const std::string& path);

struct GridPointResult {
  std::vector<double> parameters;  // raw candidate tuple, spec order
  double accuracy = 0.0;
  size_t agent_predictions = 0;
};

struct CalibrationResult {
  ScoringConfig best_config;
  double best_accuracy = 0.0;
  size_t evaluated_points = 0;
  size_t skipped_points = 0;  // combinations violating config invariants
  std::optional<std::string> tie_note;
  std::vector<GridPointResult> points;  // evaluation order, for CSV emission
};

// Exhaustive search over the candidate cross product, re-running the full
// pipeline per point. Best accuracy wins; ties prefer fewer AGENTIC_AI
// predictions, then the lexicographically smaller raw parameter tuple.
// Throws on an empty corpus or any unlabeled task.
CalibrationResult grid_search(const std::vector<TaskDescription>& corpus,
                              const GridSpec& grid, const Lexicon& lexicon,
                              const ScoringConfig& base, const KBStore& kb = {});

// Fraction of exact matches. Throws on length mismatch or empty input.
double accuracy(const std::vector<Modality>& predictions,
                const std::vector<Modality>& gold);

// 1 - U(predictions)/U(baseline), where U counts AGENTIC_AI predictions whose
// gold label is lower; 0 when the baseline makes none.
double overengineering_reduction(const std::vector<Modality>& predictions,
                                 const std::vector<Modality>& gold,
                                 const std::vector<Modality>& baseline_predictions);

// 1 - cost(predictions)/cost(baseline) under the given per-modality cost.
// Throws when the cost model misses a modality.
double resource_savings(const std::vector<Modality>& predictions,
                        const std::vector<Modality>& baseline_predictions,
                        const std::map<Modality, double>& cost_model);

Json calibration_to_json(const CalibrationResult& result);
std::string calibration_points_csv(const CalibrationResult& result);

}  // namespace stride
