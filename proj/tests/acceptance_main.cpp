// Acceptance suite: runs every release criterion against the shipped data
// files and prints one PASS/FAIL line per criterion. Exit code 0 only when
// all criteria hold.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stride/harness.hpp"

using namespace stride;

namespace {

struct Context {
  std::vector<TaskDescription> corpus;
  Lexicon lexicon;
  ScoringConfig config;
  KBStore kb;
};

struct Criterion {
  int number;
  std::string description;
  std::function<bool(const Context&, std::string&)> run;
};

bool near(double value, double target, double tolerance) {
  return std::fabs(value - target) <= tolerance;
}

const MetricsRow& row(const MetricsTable& table, const std::string& method) {
  for (const auto& r : table.rows)
    if (r.method == method) return r;
  throw std::logic_error("missing method row " + method);
}

// --- criterion 1: reference fixture modalities and dynamism scores ---

bool criterion_fixtures(const Context& ctx, std::string& detail) {
  const std::vector<std::pair<std::string, double>> expected = {
      {"LLM_CALL", 0.10}, {"AI_ASSISTANT", 0.35}, {"AGENTIC_AI", 0.78},
      {"AGENTIC_AI", 0.85}, {"AGENTIC_AI", 0.80}};
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  for (size_t i = 0; i < expected.size(); ++i) {
    Report report = run_pipeline(ctx.corpus[i], ctx.config, ctx.kb, ctx.lexicon,
                                 Persona::DEVELOPER);
    std::string modality = report.machine.at("modality").get<std::string>();
    double tds = report.machine.at("scores").at("max_tds").get<double>();
    if (modality != expected[i].first) {
      detail += ctx.corpus[i].id + " modality " + modality + " != " + expected[i].first + "; ";
      ok = false;
    }
    if (!near(tds, expected[i].second, 0.05)) {
      detail += ctx.corpus[i].id + " tds " + std::to_string(tds) + " outside +-0.05 of " +
                std::to_string(expected[i].second) + "; ";
      ok = false;
    }
  }
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  if (elapsed.count() >= 1.0) {
    detail += "runtime " + std::to_string(elapsed.count()) + "s >= 1s; ";
    ok = false;
  }
  if (ok)
    detail = "5/5 modalities, all TDS within +-0.05, " +
             std::to_string(elapsed.count()) + "s";
  return ok;
}

// --- criterion 2: accuracy bands on the desk corpus ---

bool criterion_accuracy(const Context& ctx, std::string& detail) {
  MetricsTable table = evaluate(ctx.corpus, ctx.lexicon, ctx.config, ctx.kb,
                                {Method::STRIDE, Method::NAIVE, Method::HEURISTIC});
  double naive = row(table, "naive").accuracy;
  double heuristic = row(table, "heuristic").accuracy;
  double stride = row(table, "stride").accuracy;
  detail = "naive=" + std::to_string(100 * naive) +
           "% heuristic=" + std::to_string(100 * heuristic) +
           "% stride=" + std::to_string(100 * stride) + "%";
  bool ok = true;
  if (!near(100 * naive, 33.3, 0.1)) ok = false;
  if (heuristic < 0.60 || heuristic > 0.75) ok = false;
  if (stride < 0.90) ok = false;
  return ok;
}

// --- criterion 3: over-engineering reduction and resource savings ---

bool criterion_efficiency(const Context& ctx, std::string& detail) {
  MetricsTable table = evaluate(ctx.corpus, ctx.lexicon, ctx.config, ctx.kb,
                                {Method::STRIDE, Method::NAIVE});
  const MetricsRow& stride = row(table, "stride");
  const MetricsRow& naive = row(table, "naive");
  detail = "reduction=" + std::to_string(100 * stride.overengineering_reduction) +
           "% savings=" + std::to_string(100 * stride.resource_savings) + "%";
  return stride.overengineering_reduction >= 0.40 && stride.resource_savings >= 0.30 &&
         naive.overengineering_reduction == 0.0 && naive.resource_savings == 0.0;
}

// --- criterion 4: every ablation strictly hurts; self-reflection most ---

bool criterion_ablations(const Context& ctx, std::string& detail) {
  double full = evaluate(ctx.corpus, ctx.lexicon, ctx.config, ctx.kb, {Method::STRIDE})
                    .rows[0].accuracy;
  const std::vector<std::string> flag_names = {
      "disable_decomposition", "disable_tds", "equal_tds_weights", "disable_sr",
      "disable_feedback"};
  bool ok = true;
  double sr_accuracy = 1.0;
  double best_other = -1.0;
  detail = "full=" + std::to_string(100 * full) + "%";
  for (const auto& name : flag_names) {
    AblationFlags flags = ablation_flags_from_names({name});
    double accuracy =
        evaluate(ctx.corpus, ctx.lexicon, ctx.config, ctx.kb, {Method::STRIDE}, flags)
            .rows[0].accuracy;
    detail += " " + name + "=" + std::to_string(100 * accuracy) + "%";
    if (accuracy >= full) ok = false;
    if (name == "disable_sr")
      sr_accuracy = accuracy;
    else
      best_other = std::max(best_other, full - accuracy);
  }
  if (full - sr_accuracy <= best_other) {
    detail += " (self-reflection drop not the largest)";
    ok = false;
  }
  return ok;
}

// --- criterion 5: property suites ---

bool sr_truth_table() {
  for (int mask = 0; mask < 8; ++mask)
    for (double tds : {0.49, 0.5}) {
      SubtaskFeatures f;
      f.conditional_branches = mask & 1;
      f.nondeterministic_tools = mask & 2;
      f.needs_midexec_validation = mask & 4;
      bool expected = tds >= 0.5 && (mask != 0);
      if (self_reflection(f, tds, 0.5) != expected) return false;
    }
  return true;
}

bool monotonicity_1000() {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> level(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ScoreWeights weights;
  DynamismCoefficients coeffs;
  for (int trial = 0; trial < 1000; ++trial) {
    SubtaskFeatures f;
    f.reasoning_depth = level(rng);
    f.tool_need = level(rng);
    f.state_need = level(rng);
    f.risk = level(rng);
    f.workflow_variability = 0.05 + 0.85 * unit(rng);
    f.tool_volatility = 0.05 + 0.85 * unit(rng);
    f.model_instability = 0.3 * unit(rng);

    double ass = agentic_suitability(f, weights);
    double tds = true_dynamism(f, coeffs);
    if (ass < 0.0 || ass > 2.0) return false;

    SubtaskFeatures g = f;
    if (g.tool_need < 2) {
      ++g.tool_need;
      if (!(agentic_suitability(g, weights) > ass)) return false;
    }
    g = f;
    if (g.state_need < 2) {
      ++g.state_need;
      if (!(agentic_suitability(g, weights) > ass)) return false;
    }
    g = f;
    g.workflow_variability = std::min(1.0, g.workflow_variability + 0.05);
    if (true_dynamism(g, coeffs) < tds) return false;
    g = f;
    g.tool_volatility = std::min(1.0, g.tool_volatility + 0.05);
    if (true_dynamism(g, coeffs) < tds) return false;
    g = f;
    g.model_instability = std::min(1.0, g.model_instability + 0.05);
    if (true_dynamism(g, coeffs) > tds) return false;
  }
  return true;
}

bool fuzz_acyclicity(const Context& ctx) {
  std::vector<std::string> vocabulary(ctx.lexicon.action_verbs.begin(),
                                      ctx.lexicon.action_verbs.end());
  vocabulary.insert(vocabulary.end(), ctx.lexicon.target_nouns.begin(),
                    ctx.lexicon.target_nouns.end());
  vocabulary.insert(vocabulary.end(), ctx.lexicon.temporal_cues.begin(),
                    ctx.lexicon.temporal_cues.end());
  vocabulary.insert(vocabulary.end(), {"informs", "feeds", "and", "the", "nonsense"});
  std::mt19937 rng(7777);
  for (int sentence = 0; sentence < 100; ++sentence) {
    std::string text;
    size_t words = 4 + rng() % 24;
    for (size_t w = 0; w < words; ++w) {
      if (w) text += " ";
      text += vocabulary[rng() % vocabulary.size()];
    }
    TaskDescription task;
    task.id = "fuzz";
    task.text = text;
    if (!validate_graph(decompose(task, ctx.lexicon)).ok) return false;
  }
  return true;
}

bool kb_roundtrip_random() {
  std::mt19937 rng(31415);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    KBStore store;
    size_t n = rng() % 7;
    for (size_t i = 0; i < n; ++i) {
      PatternRecord r;
      r.pattern_id = "p" + std::to_string(i);
      r.canonical_label = "Label " + std::to_string(rng() % 30);
      r.domain = static_cast<Domain>(rng() % 5);
      r.start_frequency = unit(rng);
      r.success_rate = unit(rng);
      store.ingest_pattern(r);
      for (int k = static_cast<int>(rng() % 4); k > 0; --k)
        store.record_outcome(r.pattern_id, static_cast<Modality>(rng() % 3),
                             rng() % 2 == 0);
    }
    if (!(import_kb(export_kb(store)) == store)) return false;
  }
  return true;
}

bool plant_and_recover(const Context& ctx) {
  Lexicon lexicon;
  lexicon.action_verbs = {"search", "book", "deploy", "test"};
  lexicon.target_nouns = {"flights", "hotels", "service", "suite"};
  lexicon.temporal_cues = {"before"};

  auto feat = [](int r, int t, int s, int rho, double w, double v) {
    SubtaskFeatures f;
    f.reasoning_depth = r;
    f.tool_need = t;
    f.state_need = s;
    f.risk = rho;
    f.workflow_variability = w;
    f.tool_volatility = v;
    return f;
  };
  auto task = [](const std::string& id, const std::string& text, const std::string& label,
                 const SubtaskFeatures& f) {
    TaskDescription t;
    t.id = id;
    t.text = text;
    t.subtask_features[label] = f;
    return t;
  };
  std::vector<TaskDescription> corpus = {
      task("p1", "search flights", "Search Flights", feat(1, 0, 0, 0, 0, 0)),
      task("p2", "book hotels", "Book Hotels", feat(2, 1, 1, 1, 0, 0)),
      task("p3", "deploy service", "Deploy Service", feat(1, 1, 1, 1, 0.9, 0.4)),
      task("p4", "test suite", "Test Suite", feat(2, 2, 2, 2, 0, 0)),
  };
  ScoringConfig planted;  // bands 0.5/1.5, tds_promote 0.6
  for (auto& t : corpus)
    t.gold_modality = run_task(t, lexicon, planted, {}).recommendation.modality;

  GridSpec grid;
  grid.band_low = {0.3, 0.5};
  grid.band_high = {1.0, 1.5};
  grid.tds_promote = {0.6, 0.8};
  CalibrationResult result = grid_search(corpus, grid, lexicon, planted);
  return result.best_accuracy == 1.0 && result.best_config.band_low == 0.5 &&
         result.best_config.band_high == 1.5 && result.best_config.tds_promote == 0.6;
}

bool byte_identical_runs(const Context& ctx) {
  auto run = [&] {
    MetricsTable table =
        evaluate(ctx.corpus, ctx.lexicon, ctx.config, ctx.kb,
                 {Method::STRIDE, Method::NAIVE, Method::HEURISTIC});
    Report report = run_pipeline(ctx.corpus[2], ctx.config, ctx.kb, ctx.lexicon,
                                 Persona::DEVELOPER);
    return metrics_to_json(table).dump(2) + "\n" + metrics_to_csv(table) + "\n" +
           report.machine.dump(2) + "\n" + report.human;
  };
  return run() == run();
}

bool criterion_properties(const Context& ctx, std::string& detail) {
  struct Property {
    const char* name;
    bool ok;
  };
  std::vector<Property> checks = {
      {"sr_truth_table_16", sr_truth_table()},
      {"monotonicity_1000", monotonicity_1000()},
      {"fuzz_acyclicity_100", fuzz_acyclicity(ctx)},
      {"kb_roundtrip_random", kb_roundtrip_random()},
      {"grid_plant_and_recover", plant_and_recover(ctx)},
      {"byte_identical_runs", byte_identical_runs(ctx)},
  };
  bool ok = true;
  for (const auto& check : checks) {
    if (!check.ok) {
      ok = false;
      detail += std::string(check.name) + " failed; ";
    }
  }
  if (ok) detail = "all 6 property suites hold";
  return ok;
}

// --- criterion 6: classifier invariants over randomized profiles ---

bool criterion_classifier_invariants(const Context& ctx, std::string& detail) {
  std::mt19937 rng(60606);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KBStore kb;
  auto band_of = [](const Recommendation& rec) {
    return rec.rationale.front().values.at("band").get<std::string>();
  };
  for (int trial = 0; trial < 1000; ++trial) {
    ScoringConfig config;
    TaskProfile profile;
    profile.task_id = "random";
    profile.max_ass = 2.0 * unit(rng);
    profile.mean_ass = profile.max_ass;
    profile.max_tds = unit(rng);
    profile.any_sr = rng() % 2 == 0;
    profile.subtask_count = 1;
    profile.per_subtask = {{"sub", {profile.max_ass, profile.max_tds, profile.any_sr,
                                    false}}};

    Recommendation rec = classify(profile, kb, config);
    Modality base = rec.rationale.front().resulting_modality;
    if (static_cast<int>(rec.modality) > static_cast<int>(base) + 1) {
      detail = "promotion cap violated";
      return false;
    }

    double c = 0.2 + 0.79 * unit(rng);  // common positive scale, bands stay legal
    ScoringConfig scaled = config;
    scaled.band_low *= c;
    scaled.band_high *= c;
    TaskProfile scaled_profile = profile;
    scaled_profile.max_ass *= c;
    scaled_profile.mean_ass *= c;
    scaled_profile.per_subtask[0].second.ass *= c;
    if (band_of(classify(scaled_profile, kb, scaled)) != band_of(rec)) {
      detail = "suitability band changed under common positive scaling";
      return false;
    }
  }
  detail = "promotion cap and scaling invariance over 1000 profiles";
  return true;
}

}  // namespace

int main() {
  Context ctx;
  try {
    ctx.corpus = load_corpus("data/corpus/desk.jsonl");
    ctx.lexicon = load_lexicon("data/lexicon/default.json");
    ctx.config = load_config("config/default.json");
    ctx.kb = load_kb("data/kb/seed.json");
  } catch (const std::exception& e) {
    std::printf("FAIL setup: %s\n", e.what());
    return 1;
  }

  std::vector<Criterion> criteria = {
      {1, "reference fixtures: 5/5 modalities, TDS within +-0.05, under 1s",
       criterion_fixtures},
      {2, "desk corpus accuracy bands (naive 33.3 +- 0.1, heuristic 60-75, stride >= 90)",
       criterion_accuracy},
      {3, "stride efficiency vs naive (reduction >= 40%, savings >= 30%, naive = 0)",
       criterion_efficiency},
      {4, "each ablation strictly reduces accuracy; self-reflection drop largest",
       criterion_ablations},
      {5, "property suites (SR table, monotonicity, acyclicity, KB round-trip, "
          "plant-and-recover, byte-identical runs)",
       criterion_properties},
      {6, "classifier invariants (promotion cap, band scaling) over 1000 profiles",
       criterion_classifier_invariants},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(ctx, detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion.number,
                criterion.description.c_str(), detail.empty() ? "" : " — ",
                detail.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
