// Historical pattern store: canonical subtask patterns with frequency,
// tool-recommendation, and outcome statistics, retrieved by token-set overlap.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "stride/task_model.hpp"

namespace stride {

struct PatternRecord {
  std::string pattern_id;
  std::string canonical_label;
  Domain domain = Domain::OTHER;
  double start_frequency = 0.0;  // fraction of tasks where the pattern comes first
  std::vector<std::string> tool_recommendations;
  double success_rate = 0.0;
  std::map<Modality, std::int64_t> observed_modality_counts;

  std::vector<std::string> check() const;
  std::int64_t total_outcomes() const;

  bool operator==(const PatternRecord&) const = default;
};

struct SimilarPattern {
  PatternRecord record;
  double similarity = 0.0;  // token-set Jaccard, in (0, 1]
};

/// Single-writer store. The version strictly increases on every mutation,
/// making stale snapshots detectable.
class KBStore {
 public:
  // Upsert by pattern_id; bumps the version. Throws on invalid records.
  void ingest_pattern(const PatternRecord& record);

  // Token-set Jaccard between the query and each canonical label. Returns at
  // most k results sorted by (similarity desc, pattern_id asc), zero-overlap
  // records excluded. Pure read.
  std::vector<SimilarPattern> query_similar(const std::string& label, size_t k) const;

  // Counts the deployment under `deployed` and folds `succeeded` into the
  // running-mean success rate. Throws on unknown pattern ids.
  void record_outcome(const std::string& pattern_id, Modality deployed, bool succeeded);

  const PatternRecord* find(const std::string& pattern_id) const;
  size_t size() const { return records_.size(); }
  std::int64_t version() const { return version_; }

  bool operator==(const KBStore&) const = default;

 private:
  std::map<std::string, PatternRecord> records_;
  std::int64_t version_ = 0;

  friend Json export_kb(const KBStore& store);
  friend KBStore import_kb(const Json& document);
};

// Lowercase alphanumeric token set; shared with label matching elsewhere.
std::vector<std::string> label_tokens(const std::string& label);

Json export_kb(const KBStore& store);
KBStore import_kb(const Json& document);  // throws on malformed documents

KBStore load_kb(const std::string& path);
void save_kb(const KBStore& store, const std::string& path);

}  // namespace stride
