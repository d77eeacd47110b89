#include "stride/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stride {

double accuracy(const std::vector<Modality>& predictions,
                const std::vector<Modality>& gold) {
  if (predictions.size() != gold.size())
    throw std::invalid_argument("accuracy: prediction/gold length mismatch");
  if (predictions.empty()) throw std::invalid_argument("accuracy: empty input");
  size_t hits = 0;
  for (size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == gold[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

namespace {

size_t unnecessary_agents(const std::vector<Modality>& predictions,
                          const std::vector<Modality>& gold) {
  size_t count = 0;
  for (size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == Modality::AGENTIC_AI && gold[i] < Modality::AGENTIC_AI)
      ++count;
  return count;
}

}  // namespace

double overengineering_reduction(const std::vector<Modality>& predictions,
                                 const std::vector<Modality>& gold,
                                 const std::vector<Modality>& baseline_predictions) {
  if (predictions.size() != gold.size() || baseline_predictions.size() != gold.size())
    throw std::invalid_argument("overengineering_reduction: length mismatch");
  size_t baseline = unnecessary_agents(baseline_predictions, gold);
  if (baseline == 0) return 0.0;
  return 1.0 - static_cast<double>(unnecessary_agents(predictions, gold)) /
                   static_cast<double>(baseline);
}

double resource_savings(const std::vector<Modality>& predictions,
                        const std::vector<Modality>& baseline_predictions,
                        const std::map<Modality, double>& cost_model) {
  if (predictions.size() != baseline_predictions.size())
    throw std::invalid_argument("resource_savings: length mismatch");
  auto cost_of = [&](Modality m) {
    auto it = cost_model.find(m);
    if (it == cost_model.end())
      throw std::invalid_argument("resource_savings: cost model misses " + to_string(m));
    return it->second;
  };
  double cost = 0.0, baseline = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    cost += cost_of(predictions[i]);
    baseline += cost_of(baseline_predictions[i]);
  }
  return 1.0 - cost / baseline;
}

std::vector<std::string> GridSpec::check() const {
  std::vector<std::string> out;
  auto nonneg = [&](const std::vector<double>& values, const char* name) {
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        out.push_back(std::string(name) + " candidates must be nonnegative");
  };
  nonneg(w_r, "w_r");
  nonneg(w_t, "w_t");
  nonneg(w_s, "w_s");
  nonneg(w_rho, "w_rho");
  nonneg(alpha, "alpha");
  nonneg(beta, "beta");
  nonneg(gamma, "gamma");
  auto unit = [&](const std::vector<double>& values, const char* name) {
    for (double v : values)
      if (!(v >= 0.0 && v <= 1.0))
        out.push_back(std::string(name) + " candidates must be in [0,1]");
  };
  unit(theta, "theta");
  unit(tds_promote, "tds_promote");
  auto band = [&](const std::vector<double>& values, const char* name) {
    for (double v : values)
      if (!(v >= 0.0 && v <= 2.0))
        out.push_back(std::string(name) + " candidates must be in [0,2]");
  };
  band(band_low, "band_low");
  band(band_high, "band_high");
  return out;
}

namespace {

// Candidate axes in the fixed tuple order used for tie-breaking.
std::vector<std::vector<double>> grid_axes(const GridSpec& grid, const ScoringConfig& base) {
  auto axis = [](const std::vector<double>& candidates, double fallback) {
    return candidates.empty() ? std::vector<double>{fallback} : candidates;
  };
  return {
      axis(grid.w_r, base.weights.reasoning),
      axis(grid.w_t, base.weights.tools),
      axis(grid.w_s, base.weights.state),
      axis(grid.w_rho, base.weights.risk),
      axis(grid.alpha, base.coeffs.alpha),
      axis(grid.beta, base.coeffs.beta),
      axis(grid.gamma, base.coeffs.gamma),
      axis(grid.theta, base.theta),
      axis(grid.band_low, base.band_low),
      axis(grid.band_high, base.band_high),
      axis(grid.tds_promote, base.tds_promote),
  };
}

// Builds the config for one tuple; returns false when the combination
// violates config invariants (and should be skipped, not evaluated).
bool config_for_tuple(const std::vector<double>& tuple, const ScoringConfig& base,
                      ScoringConfig& out) {
  out = base;
  double weight_sum = tuple[0] + tuple[1] + tuple[2] + tuple[3];
  if (weight_sum <= 0.0) return false;
  out.weights = {tuple[0] / weight_sum, tuple[1] / weight_sum, tuple[2] / weight_sum,
                 tuple[3] / weight_sum};
  out.coeffs = {tuple[4], tuple[5], tuple[6]};
  out.theta = tuple[7];
  out.band_low = tuple[8];
  out.band_high = tuple[9];
  out.tds_promote = tuple[10];
  return out.check().empty();
}

}  // namespace

CalibrationResult grid_search(const std::vector<TaskDescription>& corpus,
                              const GridSpec& grid, const Lexicon& lexicon,
                              const ScoringConfig& base, const KBStore& kb) {
  if (corpus.empty()) throw std::invalid_argument("grid_search: empty corpus");
  for (const auto& task : corpus)
    if (!task.gold_modality)
      throw std::invalid_argument("grid_search: task " + task.id + " has no gold_modality");
  auto problems = grid.check();
  if (!problems.empty())
    throw std::invalid_argument("grid_search: invalid grid: " + problems.front());

  std::vector<std::vector<double>> axes = grid_axes(grid, base);
  std::vector<Modality> gold;
  gold.reserve(corpus.size());
  for (const auto& task : corpus) gold.push_back(*task.gold_modality);

  CalibrationResult result;
  bool have_best = false;
  std::vector<double> best_tuple;
  size_t best_agents = 0;
  bool tied = false;

  std::vector<size_t> index(axes.size(), 0);
  bool done = false;
  while (!done) {
    std::vector<double> tuple(axes.size());
    for (size_t i = 0; i < axes.size(); ++i) tuple[i] = axes[i][index[i]];

    ScoringConfig candidate;
    if (config_for_tuple(tuple, base, candidate)) {
      std::vector<Modality> predictions;
      predictions.reserve(corpus.size());
      size_t agents = 0;
      for (const auto& task : corpus) {
        Modality m = run_task(task, lexicon, candidate, kb).recommendation.modality;
        if (m == Modality::AGENTIC_AI) ++agents;
        predictions.push_back(m);
      }
      double acc = accuracy(predictions, gold);
      result.points.push_back({tuple, acc, agents});
      ++result.evaluated_points;

      bool better = false;
      if (!have_best || acc > result.best_accuracy) {
        better = true;
        tied = false;
      } else if (acc == result.best_accuracy) {
        tied = true;
        if (agents < best_agents || (agents == best_agents && tuple < best_tuple))
          better = true;
      }
      if (better) {
        have_best = true;
        result.best_accuracy = acc;
        result.best_config = candidate;
        best_tuple = tuple;
        best_agents = agents;
      }
    } else {
      ++result.skipped_points;
    }

    size_t axis = axes.size();
    while (true) {
      if (axis == 0) {
        done = true;
        break;
      }
      --axis;
      if (++index[axis] < axes[axis].size()) break;
      index[axis] = 0;
    }
  }

  if (!have_best)
    throw std::invalid_argument("grid_search: no grid point satisfies config invariants");
  if (tied)
    result.tie_note = "accuracy tie broken by fewer AGENTIC_AI predictions, then "
                      "lexicographic parameter order";
  return result;
}

GridSpec grid_from_json(const Json& j) {
  GridSpec grid;
  auto read = [&](const char* key, std::vector<double>& out) {
    if (j.contains(key)) out = j.at(key).get<std::vector<double>>();
  };
  read("w_r", grid.w_r);
  read("w_t", grid.w_t);
  read("w_s", grid.w_s);
  read("w_rho", grid.w_rho);
  read("alpha", grid.alpha);
  read("beta", grid.beta);
  read("gamma", grid.gamma);
  read("theta", grid.theta);
  read("band_low", grid.band_low);
  read("band_high", grid.band_high);
  read("tds_promote", grid.tds_promote);
  auto problems = grid.check();
  if (!problems.empty())
    throw std::invalid_argument("invalid grid spec: " + problems.front());
  return grid;
}

GridSpec load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": grid parse error: " + e.what());
  }
  return grid_from_json(j);
}

Json calibration_to_json(const CalibrationResult& result) {
  Json j;
  j["best_config"] = config_to_json(result.best_config);
  j["best_accuracy"] = result.best_accuracy;
  j["evaluated_points"] = result.evaluated_points;
  j["skipped_points"] = result.skipped_points;
  if (result.tie_note) j["tie_note"] = *result.tie_note;
  return j;
}

std::string calibration_points_csv(const CalibrationResult& result) {
  std::ostringstream out;
  out << "w_r,w_t,w_s,w_rho,alpha,beta,gamma,theta,band_low,band_high,tds_promote,"
         "accuracy,agent_predictions\n";
  out.precision(10);
  for (const auto& point : result.points) {
    for (double v : point.parameters) out << v << ",";
    out << point.accuracy << "," << point.agent_predictions << "\n";
  }
  return out.str();
}

}  // namespace stride
