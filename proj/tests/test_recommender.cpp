#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "stride/recommender.hpp"

using namespace stride;
using doctest::Approx;

namespace {

TaskGraph two_subtask_graph() {
  TaskGraph g;
  g.task_id = "t";
  g.subtasks.push_back({"alpha", "do", "thing", "Alpha", {}});
  g.subtasks.back().features.risk = 1;
  g.subtasks.push_back({"beta", "do", "thing", "Beta", {}});
  g.subtasks.back().features.risk = 2;
  return g;
}

TaskProfile profile_of(double max_ass, double max_tds, bool any_sr,
                       const std::string& subtask_id = "some_subtask") {
  TaskProfile p;
  p.task_id = "t";
  p.max_ass = max_ass;
  p.mean_ass = max_ass;
  p.max_tds = max_tds;
  p.any_sr = any_sr;
  p.subtask_count = 1;
  p.max_risk = 1;
  p.per_subtask = {{subtask_id, SubtaskScores{max_ass, max_tds, any_sr, false}}};
  return p;
}

std::string base_band_of(const Recommendation& rec) {
  REQUIRE_FALSE(rec.rationale.empty());
  CHECK(rec.rationale.front().rule == "suitability_band");
  return rec.rationale.front().values.at("band").get<std::string>();
}

}  // namespace

TEST_CASE("aggregate_profile computes max, mean, and risk over subtasks") {
  TaskGraph g = two_subtask_graph();
  std::map<std::string, SubtaskScores> scores = {
      {"alpha", {0.3, 0.1, false, false}},
      {"beta", {2.0, 0.7, true, false}},
  };
  TaskProfile p = aggregate_profile(g, scores, Domain::SRE);
  CHECK(p.max_ass == Approx(2.0));
  CHECK(p.mean_ass == Approx(1.15));
  CHECK(p.max_tds == Approx(0.7));
  CHECK(p.any_sr);
  CHECK(p.max_risk == 2);
  CHECK(p.subtask_count == 2);
  REQUIRE(p.per_subtask.size() == 2);
  CHECK(p.per_subtask[0].first == "alpha");  // graph order preserved

  TaskGraph single;
  single.task_id = "s";
  single.subtasks.push_back({"only", "do", "thing", "Only", {}});
  TaskProfile sp = aggregate_profile(single, {{"only", {0.4, 0.2, false, false}}},
                                     Domain::OTHER);
  CHECK(sp.max_ass == sp.mean_ass);
}

TEST_CASE("aggregate_profile names missing and extra score ids") {
  TaskGraph g = two_subtask_graph();
  std::map<std::string, SubtaskScores> missing = {{"alpha", {}}};
  CHECK_THROWS_WITH_AS(aggregate_profile(g, missing, Domain::SRE),
                       doctest::Contains("beta"), std::invalid_argument);
  std::map<std::string, SubtaskScores> extra = {
      {"alpha", {}}, {"beta", {}}, {"gamma", {}}};
  CHECK_THROWS_WITH_AS(aggregate_profile(g, extra, Domain::SRE),
                       doctest::Contains("gamma"), std::invalid_argument);
}

TEST_CASE("classify reproduces the three reference profiles") {
  ScoringConfig config;
  KBStore kb;
  CHECK(classify(profile_of(0.3, 0.10, false), kb, config).modality ==
        Modality::LLM_CALL);
  CHECK(classify(profile_of(1.0, 0.35, false), kb, config).modality ==
        Modality::AI_ASSISTANT);
  CHECK(classify(profile_of(2.0, 0.78, true), kb, config).modality ==
        Modality::AGENTIC_AI);
}

TEST_CASE("promotion fires once and only once") {
  ScoringConfig config;
  KBStore kb;
  // High dynamism and reflection together still promote a single tier.
  CHECK(classify(profile_of(0.3, 0.9, true), kb, config).modality ==
        Modality::AI_ASSISTANT);
  CHECK(classify(profile_of(1.0, 0.9, true), kb, config).modality ==
        Modality::AGENTIC_AI);
  CHECK(classify(profile_of(2.0, 0.9, true), kb, config).modality ==
        Modality::AGENTIC_AI);
  // Below both triggers nothing moves.
  CHECK(classify(profile_of(1.0, 0.59, false), kb, config).modality ==
        Modality::AI_ASSISTANT);
}

TEST_CASE("rationale is nonempty and its tail matches the decision") {
  ScoringConfig config;
  KBStore kb;
  for (auto& profile : {profile_of(0.3, 0.1, false), profile_of(1.2, 0.95, true)}) {
    Recommendation rec = classify(profile, kb, config);
    REQUIRE_FALSE(rec.rationale.empty());
    CHECK(rec.rationale.back().resulting_modality == rec.modality);
  }
}

TEST_CASE("kb advisory notes a one-tier disagreement without overriding") {
  ScoringConfig config;
  KBStore kb;
  PatternRecord record;
  record.pattern_id = "some_subtask";
  record.canonical_label = "Some Subtask";
  record.domain = Domain::SRE;
  record.observed_modality_counts = {{Modality::AGENTIC_AI, 9},
                                     {Modality::AI_ASSISTANT, 1}};
  kb.ingest_pattern(record);

  // Decision lands on AI_ASSISTANT; the KB majority says AGENTIC_AI.
  Recommendation rec = classify(profile_of(1.0, 0.2, false), kb, config);
  CHECK(rec.modality == Modality::AI_ASSISTANT);  // advisory only
  bool advisory = false;
  for (const auto& firing : rec.rationale)
    if (firing.rule == "kb_advisory") {
      advisory = true;
      CHECK(firing.values.at("majority_modality") == "AGENTIC_AI");
      CHECK(firing.values.at("override") == false);
    }
  CHECK(advisory);
  REQUIRE_FALSE(rec.kb_evidence.empty());
  CHECK(rec.kb_evidence.front().first == "some_subtask");
  CHECK(rec.kb_evidence.front().second == Approx(1.0));

  // Two tiers apart: no advisory note.
  Recommendation far = classify(profile_of(0.2, 0.1, false), kb, config);
  CHECK(far.modality == Modality::LLM_CALL);
  for (const auto& firing : far.rationale) CHECK(firing.rule != "kb_advisory");

  // Below the similarity threshold: evidence may exist, but no advisory rule.
  Recommendation weak =
      classify(profile_of(1.0, 0.2, false, "entirely_different_tokens"), kb, config);
  for (const auto& firing : weak.rationale) CHECK(firing.rule != "kb_advisory");
}

TEST_CASE("base band is invariant under common positive scaling") {
  KBStore kb;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ass(0.0, 2.0);
  std::uniform_real_distribution<double> scale(0.2, 0.99);
  for (int trial = 0; trial < 300; ++trial) {
    ScoringConfig config;
    TaskProfile p = profile_of(ass(rng), 0.0, false);
    std::string band = base_band_of(classify(p, kb, config));

    double c = scale(rng);  // keep scaled bands within their legal ranges
    ScoringConfig scaled = config;
    scaled.band_low *= c;
    scaled.band_high *= c;
    TaskProfile sp = p;
    sp.max_ass *= c;
    sp.mean_ass *= c;
    sp.per_subtask[0].second.ass *= c;
    CHECK(base_band_of(classify(sp, kb, scaled)) == band);
  }
}

TEST_CASE("promotion is monotone in its threshold and in dynamism") {
  KBStore kb;
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    ScoringConfig config;
    config.tds_promote = unit(rng);
    TaskProfile p = profile_of(2.0 * unit(rng), unit(rng), rng() % 2 == 0);

    Modality base = classify(p, kb, config).modality;
    ScoringConfig stricter = config;
    stricter.tds_promote = std::min(1.0, config.tds_promote + unit(rng) * 0.5);
    CHECK(classify(p, kb, stricter).modality <= base);

    TaskProfile livelier = p;
    livelier.max_tds = std::min(1.0, p.max_tds + unit(rng) * 0.5);
    livelier.per_subtask[0].second.tds = livelier.max_tds;
    CHECK(classify(livelier, kb, config).modality >= base);
  }
}

TEST_CASE("developer and manager reports differ in detail, not decision") {
  ScoringConfig config;
  KBStore kb = load_kb("data/kb/seed.json");

  TaskProfile p;
  p.task_id = "travel";
  p.max_ass = 2.0;
  p.mean_ass = 1.2;
  p.max_tds = 0.78;
  p.any_sr = true;
  p.subtask_count = 4;
  p.max_risk = 2;
  p.domain = Domain::AUTOMATION;
  p.per_subtask = {
      {"search_flights", {2.0, 0.78, true, false}},
      {"find_hotels", {1.3, 0.52, true, false}},
      {"activity_research", {0.9, 0.38, false, false}},
      {"budget_planning", {1.0, 0.32, false, false}},
  };
  Recommendation rec = classify(p, kb, config);
  CHECK(rec.modality == Modality::AGENTIC_AI);

  Report dev = render_report(rec, p, Persona::DEVELOPER, kb);
  CHECK(dev.machine.at("modality") == "AGENTIC_AI");
  CHECK(dev.machine.at("persona") == "DEVELOPER");
  CHECK(dev.machine.at("scores").at("per_subtask").size() == 4);
  REQUIRE(dev.machine.contains("tool_recommendations"));
  std::string tools = dev.machine.at("tool_recommendations").dump();
  CHECK(tools.find("flight_search_api") != std::string::npos);
  CHECK(tools.find("hotel_booking_api") != std::string::npos);
  CHECK(dev.machine.at("sr_hooks").size() == 2);
  CHECK(dev.machine.contains("config_echo"));

  Report mgr = render_report(rec, p, Persona::MANAGER, kb);
  CHECK(mgr.machine.at("modality") == "AGENTIC_AI");
  CHECK(mgr.machine.at("scores").at("risk") == "High");
  CHECK_FALSE(mgr.machine.at("scores").contains("per_subtask"));
  CHECK(mgr.machine.contains("summary"));
  CHECK(mgr.machine.at("cost_band").get<std::string>().find("10") != std::string::npos);
  CHECK(mgr.machine.contains("config_echo"));

  // Same recommendation serialized for both personas.
  CHECK(dev.machine.at("modality") == mgr.machine.at("modality"));
  CHECK(dev.machine.at("rationale") == mgr.machine.at("rationale"));
  CHECK(dev.machine.at("kb_evidence") == mgr.machine.at("kb_evidence"));
  CHECK_FALSE(dev.human.empty());
  CHECK_FALSE(mgr.human.empty());
}

TEST_CASE("an empty knowledge base only drops the tool section") {
  ScoringConfig config;
  KBStore empty;
  TaskProfile p = profile_of(2.0, 0.78, true, "search_flights");
  Recommendation rec = classify(p, empty, config);
  Report dev = render_report(rec, p, Persona::DEVELOPER, empty);
  CHECK_FALSE(dev.machine.contains("tool_recommendations"));
  CHECK(dev.machine.at("modality") == "AGENTIC_AI");
  CHECK(dev.machine.at("scores").contains("per_subtask"));
  CHECK(dev.machine.at("kb_evidence").empty());
}

TEST_CASE("report json carries the contract keys") {
  ScoringConfig config;
  KBStore kb;
  TaskProfile p = profile_of(0.3, 0.1, false);
  Report report = render_report(classify(p, kb, config), p, Persona::DEVELOPER, kb);
  for (const char* key :
       {"task_id", "modality", "rationale", "persona", "scores", "config_echo",
        "kb_evidence"})
    CHECK(report.machine.contains(key));
}
