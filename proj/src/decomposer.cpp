#include "stride/decomposer.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace stride {

namespace {

const std::vector<std::string> kDefaultDataFlowCues = {"informs", "inform", "feeds",
                                                       "feed"};

// Cue phrases read right-to-left ("X after Y" means Y precedes X).
const std::unordered_set<std::string> kBackwardCues = {"after", "once"};

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
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

std::string title_case(const std::string& word) {
  if (word.empty()) return word;
  std::string out = word;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string pair_label(const std::string& verb, const std::string& noun) {
  return title_case(verb) + " " + title_case(noun);
}

std::string pair_id(const std::string& verb, const std::string& noun) {
  return verb + "_" + noun;
}

struct Match {
  std::string verb;
  std::string noun;
  size_t span_begin = 0;  // token index of the earlier of verb/noun
  size_t span_end = 0;    // token index of the later of verb/noun
};

// Core extraction: canonicalize tokens, pair each recognized noun with its
// nearest preceding verb (nearest following verb when none precedes), then
// apply pair-level synonyms and collapse duplicates keeping the first span.
std::vector<Match> extract_matches(const std::string& text, const Lexicon& lexicon) {
  std::vector<std::string> tokens = tokenize(text);
  for (auto& t : tokens) {
    auto it = lexicon.synonyms.find(t);
    if (it != lexicon.synonyms.end()) t = it->second;
  }

  std::vector<size_t> verb_positions;
  std::vector<size_t> noun_positions;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (lexicon.action_verbs.count(tokens[i]))
      verb_positions.push_back(i);
    else if (lexicon.target_nouns.count(tokens[i]))
      noun_positions.push_back(i);
  }

  std::vector<Match> matches;
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t ni : noun_positions) {
    auto after = std::upper_bound(verb_positions.begin(), verb_positions.end(), ni);
    size_t vi;
    if (after != verb_positions.begin())
      vi = *std::prev(after);  // nearest preceding verb
    else if (after != verb_positions.end())
      vi = *after;  // nearest following verb
    else
      continue;  // no verbs anywhere

    std::string verb = tokens[vi];
    std::string noun = tokens[ni];
    auto pit = lexicon.synonyms.find(verb + " " + noun);
    if (pit != lexicon.synonyms.end()) {
      std::istringstream ss(pit->second);
      ss >> verb >> noun;
    }
    if (!seen.insert({verb, noun}).second) continue;
    matches.push_back({verb, noun, std::min(vi, ni), std::max(vi, ni)});
  }
  return matches;
}

struct CueHit {
  size_t position = 0;
  EdgeKind kind = EdgeKind::TEMPORAL;
  bool backward = false;
};

std::vector<CueHit> find_cues(const std::vector<std::string>& tokens,
                              const Lexicon& lexicon) {
  std::vector<CueHit> hits;
  auto scan = [&](const std::vector<std::string>& cues, EdgeKind kind) {
    for (const auto& cue : cues) {
      std::vector<std::string> cue_tokens = tokenize(cue);
      if (cue_tokens.empty()) continue;
      for (size_t i = 0; i + cue_tokens.size() <= tokens.size(); ++i) {
        bool hit = true;
        for (size_t j = 0; j < cue_tokens.size(); ++j)
          if (tokens[i + j] != cue_tokens[j]) {
            hit = false;
            break;
          }
        if (hit)
          hits.push_back({i, kind,
                          kind == EdgeKind::TEMPORAL && kBackwardCues.count(cue_tokens[0]) > 0});
      }
    }
  };
  scan(lexicon.temporal_cues, EdgeKind::TEMPORAL);
  scan(lexicon.data_flow_cues.empty() ? kDefaultDataFlowCues : lexicon.data_flow_cues,
       EdgeKind::DATA_FLOW);
  std::sort(hits.begin(), hits.end(),
            [](const CueHit& a, const CueHit& b) { return a.position < b.position; });
  return hits;
}

// True when `to` already reaches `from`, i.e. adding from->to closes a cycle.
bool creates_cycle(const std::unordered_map<std::string, std::vector<std::string>>& adj,
                   const std::string& from, const std::string& to) {
  std::vector<std::string> stack = {to};
  std::unordered_set<std::string> visited;
  while (!stack.empty()) {
    std::string node = stack.back();
    stack.pop_back();
    if (node == from) return true;
    if (!visited.insert(node).second) continue;
    auto it = adj.find(node);
    if (it != adj.end())
      for (const auto& next : it->second) stack.push_back(next);
  }
  return false;
}

// Shared edge assembly: candidates arrive ordered (earlier in text first);
// duplicates collapse silently, cycle-closing candidates drop with a warning.
std::vector<DependencyEdge> assemble_edges(
    const std::vector<DependencyEdge>& candidates, std::vector<std::string>* warnings) {
  std::vector<DependencyEdge> edges;
  std::set<std::tuple<std::string, std::string, EdgeKind>> seen;
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& e : candidates) {
    if (e.from == e.to) continue;
    if (!seen.insert({e.from, e.to, e.kind}).second) continue;
    if (creates_cycle(adj, e.from, e.to)) {
      if (warnings)
        warnings->push_back("dropped cycle-forming edge " + e.from + "->" + e.to +
                            " (" + to_string(e.kind) + ")");
      continue;
    }
    adj[e.from].push_back(e.to);
    edges.push_back(e);
  }
  return edges;
}

std::vector<Subtask> assemble_subtasks(const std::vector<ProviderTriple>& triples) {
  std::vector<Subtask> subtasks;
  std::set<std::string> seen_ids;
  for (const auto& t : triples) {
    std::string id = pair_id(t.action_verb, t.target_noun);
    if (!seen_ids.insert(id).second) continue;
    Subtask s;
    s.id = id;
    s.action_verb = t.action_verb;
    s.target_noun = t.target_noun;
    s.label = t.label.empty() ? pair_label(t.action_verb, t.target_noun) : t.label;
    subtasks.push_back(std::move(s));
  }
  return subtasks;
}

Subtask fallback_subtask() {
  Subtask s;
  s.id = "respond_query";
  s.action_verb = "respond";
  s.target_noun = "query";
  s.label = "Respond Query";
  return s;
}

}  // namespace

std::vector<std::string> Lexicon::check() const {
  std::vector<std::string> out;
  for (const auto& cue : temporal_cues)
    if (tokenize(cue).empty()) out.push_back("empty temporal cue phrase");
  for (const auto& [surface, canonical] : synonyms) {
    std::vector<std::string> canon_tokens = tokenize(canonical);
    if (tokenize(surface).size() != canon_tokens.size()) {
      out.push_back("synonym arity mismatch: " + surface + " -> " + canonical);
      continue;
    }
    if (canon_tokens.size() == 1) {
      if (!action_verbs.count(canon_tokens[0]) && !target_nouns.count(canon_tokens[0]))
        out.push_back("synonym target not in lexicon: " + canonical);
    } else if (canon_tokens.size() == 2) {
      if (!action_verbs.count(canon_tokens[0]))
        out.push_back("pair synonym verb not in lexicon: " + canon_tokens[0]);
      if (!target_nouns.count(canon_tokens[1]))
        out.push_back("pair synonym noun not in lexicon: " + canon_tokens[1]);
    } else {
      out.push_back("synonym entries must map one token or one verb+noun pair: " + surface);
    }
  }
  return out;
}

void Lexicon::validate() const {
  auto problems = check();
  if (!problems.empty()) {
    std::string msg = "invalid lexicon";
    for (const auto& p : problems) msg += "; " + p;
    throw std::invalid_argument(msg);
  }
}

TaskGraph decompose(const TaskDescription& description, const Lexicon& lexicon,
                    std::vector<std::string>* warnings) {
  if (description.text.empty())
    throw std::invalid_argument("decompose: empty task text (task " + description.id + ")");
  lexicon.validate();

  std::vector<Match> matches = extract_matches(description.text, lexicon);
  TaskGraph graph;
  graph.task_id = description.id;
  if (matches.empty()) {
    graph.subtasks.push_back(fallback_subtask());
    return graph;
  }
  for (const auto& m : matches) {
    Subtask s;
    s.id = pair_id(m.verb, m.noun);
    s.action_verb = m.verb;
    s.target_noun = m.noun;
    s.label = pair_label(m.verb, m.noun);
    graph.subtasks.push_back(std::move(s));
  }
  graph.edges = infer_dependencies(graph.subtasks, description.text, lexicon, warnings);
  return graph;
}

std::vector<DependencyEdge> infer_dependencies(const std::vector<Subtask>& subtasks,
                                               const std::string& text,
                                               const Lexicon& lexicon,
                                               std::vector<std::string>* warnings) {
  if (subtasks.size() < 2) return {};

  std::vector<Match> matches = extract_matches(text, lexicon);
  std::unordered_map<std::string, const Subtask*> by_id;
  for (const auto& s : subtasks) by_id[s.id] = &s;

  // Only matches that correspond to actual subtasks can anchor edges.
  std::vector<Match> anchored;
  for (const auto& m : matches)
    if (by_id.count(pair_id(m.verb, m.noun))) anchored.push_back(m);
  if (anchored.size() < 2) return {};

  std::vector<std::string> tokens = tokenize(text);
  std::vector<DependencyEdge> candidates;
  for (const CueHit& cue : find_cues(tokens, lexicon)) {
    const Match* before = nullptr;
    const Match* after = nullptr;
    for (const auto& m : anchored) {
      if (m.span_end < cue.position && (!before || m.span_end > before->span_end))
        before = &m;
      if (m.span_begin > cue.position && (!after || m.span_begin < after->span_begin))
        after = &m;
    }
    if (!before || !after) continue;
    std::string x = pair_id(before->verb, before->noun);
    std::string y = pair_id(after->verb, after->noun);
    if (cue.backward) std::swap(x, y);
    candidates.push_back({x, y, cue.kind});
  }
  return assemble_edges(candidates, warnings);
}

TaskGraph decompose_via_provider(const TaskDescription& description,
                                 DecomposerProvider& provider, const Lexicon& lexicon,
                                 std::vector<std::string>* warnings) {
  if (description.text.empty())
    throw std::invalid_argument("decompose: empty task text (task " + description.id + ")");
  lexicon.validate();

  ProviderResponse response;
  try {
    response = provider.run(description);
  } catch (const DecompositionError&) {
    throw;
  } catch (const std::exception& e) {
    throw DecompositionError("provider " + provider.name() + " failed: " + e.what());
  }

  // Canonicalize through the same synonym map the lexicon path uses.
  std::vector<ProviderTriple> triples;
  for (auto t : response.triples) {
    auto canon = [&](std::string& word) {
      auto it = lexicon.synonyms.find(word);
      if (it != lexicon.synonyms.end() && tokenize(it->second).size() == 1)
        word = it->second;
    };
    canon(t.action_verb);
    canon(t.target_noun);
    auto pit = lexicon.synonyms.find(t.action_verb + " " + t.target_noun);
    if (pit != lexicon.synonyms.end()) {
      std::istringstream ss(pit->second);
      std::string v, n;
      ss >> v >> n;
      t.action_verb = v;
      t.target_noun = n;
      t.label.clear();  // label follows the canonical pair
    }
    if (t.action_verb.empty() || t.target_noun.empty())
      throw DecompositionError("provider " + provider.name() +
                               " returned a triple with an empty verb or noun");
    triples.push_back(std::move(t));
  }

  TaskGraph graph;
  graph.task_id = description.id;
  if (triples.empty()) {
    if (warnings)
      warnings->push_back("provider " + provider.name() +
                          " returned no subtasks; using fallback decomposition");
    graph.subtasks.push_back(fallback_subtask());
    return graph;
  }
  graph.subtasks = assemble_subtasks(triples);

  std::unordered_map<std::string, std::string> id_by_label;
  for (const auto& s : graph.subtasks) id_by_label[s.label] = s.id;

  std::vector<DependencyEdge> candidates =
      infer_dependencies(graph.subtasks, description.text, lexicon, warnings);
  for (const auto& hint : response.hints) {
    auto from = id_by_label.find(hint.from_label);
    auto to = id_by_label.find(hint.to_label);
    if (from == id_by_label.end() || to == id_by_label.end())
      throw DecompositionError("provider " + provider.name() +
                               " hint references unknown subtask label: " +
                               (from == id_by_label.end() ? hint.from_label : hint.to_label));
    candidates.push_back({from->second, to->second, hint.kind});
  }
  graph.edges = assemble_edges(candidates, warnings);

  auto validation = validate_graph(graph);
  if (!validation.ok)
    throw DecompositionError("provider " + provider.name() +
                             " produced an invalid graph: " + validation.violations.front());
  return graph;
}

Json provider_request_json(const TaskDescription& description) {
  Json j;
  j["id"] = description.id;
  j["text"] = description.text;
  return j;
}

ProviderResponse parse_provider_response(const Json& j) {
  ProviderResponse response;
  for (const auto& jt : j.at("subtasks")) {
    ProviderTriple t;
    t.action_verb = jt.at("action_verb").get<std::string>();
    t.target_noun = jt.at("target_noun").get<std::string>();
    t.label = jt.value("label", "");
    response.triples.push_back(std::move(t));
  }
  if (j.contains("dependency_hints"))
    for (const auto& jh : j.at("dependency_hints")) {
      DependencyHint h;
      h.from_label = jh.at("from").get<std::string>();
      h.to_label = jh.at("to").get<std::string>();
      h.kind = edge_kind_from_string(jh.value("kind", "TEMPORAL"));
      response.hints.push_back(std::move(h));
    }
  return response;
}

Lexicon lexicon_from_json(const Json& j) {
  Lexicon lexicon;
  for (const auto& v : j.at("action_verbs")) lexicon.action_verbs.insert(v.get<std::string>());
  for (const auto& n : j.at("target_nouns")) lexicon.target_nouns.insert(n.get<std::string>());
  for (const auto& c : j.at("temporal_cues")) lexicon.temporal_cues.push_back(c.get<std::string>());
  for (const auto& [surface, canonical] : j.at("synonyms").items())
    lexicon.synonyms[surface] = canonical.get<std::string>();
  if (j.contains("data_flow_cues"))
    for (const auto& c : j.at("data_flow_cues"))
      lexicon.data_flow_cues.push_back(c.get<std::string>());
  lexicon.validate();
  return lexicon;
}

Json lexicon_to_json(const Lexicon& lexicon) {
  Json j;
  j["action_verbs"] = lexicon.action_verbs;
  j["target_nouns"] = lexicon.target_nouns;
  j["temporal_cues"] = lexicon.temporal_cues;
  Json syn = Json::object();
  for (const auto& [surface, canonical] : lexicon.synonyms) syn[surface] = canonical;
  j["synonyms"] = syn;
  if (!lexicon.data_flow_cues.empty()) j["data_flow_cues"] = lexicon.data_flow_cues;
  return j;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": lexicon parse error: " + e.what());
  }
  return lexicon_from_json(j);
}

namespace {

class CommandProvider : public DecomposerProvider {
 public:
  explicit CommandProvider(std::string command) : command_(std::move(command)) {}

  std::string name() const override { return "cmd:" + command_; }

  ProviderResponse run(const TaskDescription& description) override {
    static std::atomic<unsigned> counter{0};
    std::string request = provider_request_json(description).dump();
    std::string tmp = "/tmp/stride_provider_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter.fetch_add(1)) + ".json";
    {
      std::ofstream out(tmp);
      if (!out) throw std::runtime_error("cannot write provider request file");
      out << request;
    }
    std::string full = command_ + " < " + tmp;
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) {
      std::remove(tmp.c_str());
      throw std::runtime_error("cannot launch provider command");
    }
    std::string output;
    std::array<char, 4096> buffer;
    size_t n;
    while ((n = ::fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
      output.append(buffer.data(), n);
    int status = ::pclose(pipe);
    std::remove(tmp.c_str());
    if (status != 0)
      throw std::runtime_error("provider command exited with status " +
                               std::to_string(status));
    try {
      return parse_provider_response(Json::parse(output));
    } catch (const nlohmann::json::exception& e) {
      throw DecompositionError("provider " + name() +
                               " returned malformed output: " + e.what());
    }
  }

 private:
  std::string command_;
};

}  // namespace

std::unique_ptr<DecomposerProvider> make_provider(const std::string& uri) {
  if (uri.rfind("cmd:", 0) == 0)
    return std::make_unique<CommandProvider>(uri.substr(4));
  if (uri.rfind("http://", 0) == 0 || uri.rfind("https://", 0) == 0)
    return make_http_provider(uri);
  throw std::invalid_argument("unsupported provider.uri scheme: " + uri);
}

}  // namespace stride
