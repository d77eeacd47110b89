// Deterministic lexicon-based task decomposition: action-verb / target-noun
// extraction, temporal and data-flow edge inference, and a pluggable provider
// contract for externally hosted decomposers.
#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stride/task_model.hpp"

namespace stride {

struct Lexicon {
  std::set<std::string> action_verbs;
  std::set<std::string> target_nouns;
  std::vector<std::string> temporal_cues;  // ordered; may contain multi-word phrases
  // Token-level entries map one surface form to one canonical form.
  // Pair-level entries ("plan itinerary" -> "search flights") canonicalize a
  // matched verb+noun pair jointly.
  std::map<std::string, std::string> synonyms;
  std::vector<std::string> data_flow_cues;  // defaults applied by load/check

  std::vector<std::string> check() const;
  void validate() const;
};

Lexicon lexicon_from_json(const Json& j);
Json lexicon_to_json(const Lexicon& lexicon);
Lexicon load_lexicon(const std::string& path);

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One subtask per matched (verb, noun) pair after canonicalization, in text
// order, duplicates collapsed. When nothing matches, a single
// (respond, query) subtask carries the whole description. Edges come from
// infer_dependencies. The result always passes validate_graph.
TaskGraph decompose(const TaskDescription& description, const Lexicon& lexicon,
                    std::vector<std::string>* warnings = nullptr);

// TEMPORAL edges from cue phrases linking two subtask spans ("X before Y"
// gives X->Y, "X after Y" gives Y->X); DATA_FLOW edges from
// output-consumption cues ("results inform"). Edges that would close a cycle
// are dropped, later-in-text first, one warning per drop.
std::vector<DependencyEdge> infer_dependencies(const std::vector<Subtask>& subtasks,
                                               const std::string& text,
                                               const Lexicon& lexicon,
                                               std::vector<std::string>* warnings = nullptr);

// --- external provider contract ---

struct ProviderTriple {
  std::string action_verb;
  std::string target_noun;
  std::string label;  // optional; derived from the pair when empty
};

struct DependencyHint {
  std::string from_label;
  std::string to_label;
  EdgeKind kind = EdgeKind::TEMPORAL;
};

struct ProviderResponse {
  std::vector<ProviderTriple> triples;
  std::vector<DependencyHint> hints;
};

class DecomposerProvider {
 public:
  virtual ~DecomposerProvider() = default;
  virtual std::string name() const = 0;
  // Throws on transport failure; malformed payloads surface as
  // DecompositionError from decompose_via_provider.
  virtual ProviderResponse run(const TaskDescription& description) = 0;
};

// Provider triples are canonicalized through the lexicon synonym map and
// assembled exactly as in decompose; hints are unioned with inferred edges
// (hints are processed last, so they are dropped first on cycle conflicts).
// Zero triples fall back to the single-subtask graph with a warning.
TaskGraph decompose_via_provider(const TaskDescription& description,
                                 DecomposerProvider& provider, const Lexicon& lexicon,
                                 std::vector<std::string>* warnings = nullptr);

// Wire request/response helpers shared by all transports.
Json provider_request_json(const TaskDescription& description);
ProviderResponse parse_provider_response(const Json& j);

// Builds a provider from a provider.uri value: "cmd:<shell command>" pipes
// the request JSON through a process, "http(s)://..." POSTs it.
std::unique_ptr<DecomposerProvider> make_provider(const std::string& uri);
std::unique_ptr<DecomposerProvider> make_http_provider(const std::string& url);

}  // namespace stride
