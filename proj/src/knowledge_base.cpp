#include "stride/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stride {

std::vector<std::string> PatternRecord::check() const {
  std::vector<std::string> out;
  if (pattern_id.empty()) out.push_back("empty pattern_id");
  if (canonical_label.empty()) out.push_back("empty canonical_label");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(start_frequency)) out.push_back("start_frequency out of [0,1]");
  if (!unit(success_rate)) out.push_back("success_rate out of [0,1]");
  for (const auto& [m, count] : observed_modality_counts)
    if (count < 0) out.push_back("negative count for " + to_string(m));
  return out;
}

std::int64_t PatternRecord::total_outcomes() const {
  std::int64_t total = 0;
  for (const auto& [m, count] : observed_modality_counts) total += count;
  return total;
}

std::vector<std::string> label_tokens(const std::string& label) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

namespace {

double jaccard(const std::string& a, const std::string& b) {
  std::set<std::string> sa, sb;
  for (auto& t : label_tokens(a)) sa.insert(t);
  for (auto& t : label_tokens(b)) sb.insert(t);
  if (sa.empty() || sb.empty()) return 0.0;
  size_t common = 0;
  for (const auto& t : sa)
    if (sb.count(t)) ++common;
  size_t total = sa.size() + sb.size() - common;
  return total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
}

}  // namespace

void KBStore::ingest_pattern(const PatternRecord& record) {
  auto problems = record.check();
  if (!problems.empty()) {
    std::string msg = "invalid pattern record";
    for (const auto& p : problems) msg += "; " + p;
    throw std::invalid_argument(msg);
  }
  records_[record.pattern_id] = record;
  ++version_;
}

std::vector<SimilarPattern> KBStore::query_similar(const std::string& label,
                                                   size_t k) const {
  if (k < 1) throw std::invalid_argument("query_similar requires k >= 1");
  std::vector<SimilarPattern> hits;
  for (const auto& [id, record] : records_) {
    double sim = jaccard(label, record.canonical_label);
    if (sim > 0.0) hits.push_back({record, sim});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.record.pattern_id < b.record.pattern_id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

void KBStore::record_outcome(const std::string& pattern_id, Modality deployed,
                             bool succeeded) {
  auto it = records_.find(pattern_id);
  if (it == records_.end())
    throw std::invalid_argument("record_outcome: unknown pattern " + pattern_id);
  PatternRecord& record = it->second;
  std::int64_t n = record.total_outcomes();
  record.success_rate = (record.success_rate * static_cast<double>(n) +
                         (succeeded ? 1.0 : 0.0)) /
                        static_cast<double>(n + 1);
  ++record.observed_modality_counts[deployed];
  ++version_;
}

const PatternRecord* KBStore::find(const std::string& pattern_id) const {
  auto it = records_.find(pattern_id);
  return it == records_.end() ? nullptr : &it->second;
}

Json export_kb(const KBStore& store) {
  Json j;
  j["version"] = store.version_;
  Json records = Json::array();
  for (const auto& [id, record] : store.records_) {
    Json jr;
    jr["pattern_id"] = record.pattern_id;
    jr["canonical_label"] = record.canonical_label;
    jr["domain"] = to_string(record.domain);
    jr["start_frequency"] = record.start_frequency;
    jr["tool_recommendations"] = record.tool_recommendations;
    jr["success_rate"] = record.success_rate;
    Json counts = Json::object();
    for (const auto& [m, count] : record.observed_modality_counts)
      counts[to_string(m)] = count;
    jr["observed_modality_counts"] = counts;
    records.push_back(jr);
  }
  j["records"] = records;
  return j;
}

KBStore import_kb(const Json& document) {
  KBStore store;
  try {
    for (const auto& jr : document.at("records")) {
      PatternRecord record;
      record.pattern_id = jr.at("pattern_id").get<std::string>();
      record.canonical_label = jr.at("canonical_label").get<std::string>();
      record.domain = domain_from_string(jr.value("domain", "OTHER"));
      record.start_frequency = jr.value("start_frequency", 0.0);
      if (jr.contains("tool_recommendations"))
        record.tool_recommendations =
            jr.at("tool_recommendations").get<std::vector<std::string>>();
      record.success_rate = jr.value("success_rate", 0.0);
      if (jr.contains("observed_modality_counts"))
        for (const auto& [name, count] : jr.at("observed_modality_counts").items())
          record.observed_modality_counts[modality_from_string(name)] =
              count.get<std::int64_t>();
      auto problems = record.check();
      if (!problems.empty())
        throw std::invalid_argument("record " + record.pattern_id + ": " + problems.front());
      if (store.records_.count(record.pattern_id))
        throw std::invalid_argument("duplicate pattern_id " + record.pattern_id);
      store.records_[record.pattern_id] = std::move(record);
    }
    store.version_ = document.at("version").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed knowledge-base document: ") + e.what());
  }
  return store;
}

KBStore load_kb(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open knowledge-base file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": knowledge-base parse error: " + e.what());
  }
  return import_kb(j);
}

void save_kb(const KBStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write knowledge-base file: " + path);
  out << export_kb(store).dump(2) << "\n";
}

}  // namespace stride
