// stride — design-time modality recommendation CLI.
//
// Subcommands: decompose, score, recommend, evaluate, calibrate, kb.
// Exit codes: 0 success, 1 input error, 2 internal error.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "stride/harness.hpp"

namespace {

using namespace stride;

std::string default_config_path() {
  if (const char* env = std::getenv("STRIDE_CONFIG")) return env;
  return "config/default.json";
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string current;
  for (char c : csv) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

KBStore load_kb_or_empty(const std::string& path, bool explicit_path) {
  if (!std::filesystem::exists(path)) {
    if (explicit_path) throw std::runtime_error("knowledge-base file not found: " + path);
    return {};
  }
  return load_kb(path);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

struct CommonOptions {
  std::string config_path = default_config_path();
  std::string lexicon_path = "data/lexicon/default.json";
  std::string kb_path = "data/kb/seed.json";
  bool kb_explicit = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Scoring config file")
      ->capture_default_str();
  cmd->add_option("--lexicon", opts.lexicon_path, "Lexicon file")->capture_default_str();
  cmd->add_option("--kb", opts.kb_path, "Knowledge-base file")
      ->capture_default_str()
      ->each([&opts](const std::string&) { opts.kb_explicit = true; });
}

int run(int argc, char** argv) {
  CLI::App app{"Design-time selection between LLM calls, AI assistants, and agentic AI"};
  app.require_subcommand(1);

  // --- decompose ---
  std::string decompose_file;
  std::string provider_uri;
  CommonOptions decompose_opts;
  auto* cmd_decompose = app.add_subcommand("decompose", "Decompose tasks into subtask DAGs");
  cmd_decompose->add_option("task-file", decompose_file, "Line-delimited JSON task file")
      ->required();
  cmd_decompose->add_option("--provider", provider_uri,
                            "provider.uri (cmd:<command> or http(s)://...)");
  add_common(cmd_decompose, decompose_opts);

  // --- score ---
  std::string score_file;
  CommonOptions score_opts;
  auto* cmd_score = app.add_subcommand("score", "Score each subtask of each task");
  cmd_score->add_option("task-file", score_file, "Line-delimited JSON task file")->required();
  add_common(cmd_score, score_opts);

  // --- recommend ---
  std::string recommend_file;
  std::string persona_name = "developer";
  std::string recommend_out;
  bool recommend_json = false;
  CommonOptions recommend_opts;
  auto* cmd_recommend = app.add_subcommand("recommend", "Recommend a modality per task");
  cmd_recommend->add_option("task-file", recommend_file, "Line-delimited JSON task file")
      ->required();
  cmd_recommend->add_option("--persona", persona_name, "developer|manager")
      ->capture_default_str();
  cmd_recommend->add_option("--out", recommend_out, "Directory for per-task report JSON");
  cmd_recommend->add_flag("--json", recommend_json, "Print machine-readable reports");
  add_common(cmd_recommend, recommend_opts);

  // --- evaluate ---
  std::string evaluate_file;
  std::string methods_csv = "stride,naive,heuristic";
  std::string ablate_csv;
  std::string evaluate_out = "metrics";
  CommonOptions evaluate_opts;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "Compare methods on a labeled corpus");
  cmd_evaluate->add_option("corpus", evaluate_file, "Labeled corpus file")->required();
  cmd_evaluate->add_option("--methods", methods_csv, "Comma-separated method list")
      ->capture_default_str();
  cmd_evaluate->add_option("--ablate", ablate_csv,
                           "Comma-separated ablation flags (applied to stride)");
  cmd_evaluate->add_option("--out", evaluate_out, "Output prefix for .json/.csv")
      ->capture_default_str();
  add_common(cmd_evaluate, evaluate_opts);

  // --- calibrate ---
  std::string calibrate_file;
  std::string grid_path;
  std::string calibrate_out = "calibration";
  CommonOptions calibrate_opts;
  auto* cmd_calibrate = app.add_subcommand("calibrate", "Grid-search the scoring config");
  cmd_calibrate->add_option("corpus", calibrate_file, "Labeled corpus file")->required();
  cmd_calibrate->add_option("--grid", grid_path, "Grid spec JSON file")->required();
  cmd_calibrate->add_option("--out", calibrate_out, "Output prefix for .json/.csv")
      ->capture_default_str();
  add_common(cmd_calibrate, calibrate_opts);

  // --- kb ---
  auto* cmd_kb = app.add_subcommand("kb", "Knowledge-base import/export");
  cmd_kb->require_subcommand(1);
  std::string kb_file;
  std::string kb_store = "data/kb/store.json";
  auto* cmd_kb_import = cmd_kb->add_subcommand("import", "Validate a KB file into the store");
  cmd_kb_import->add_option("file", kb_file, "KB JSON document")->required();
  cmd_kb_import->add_option("--store", kb_store, "Store file")->capture_default_str();
  auto* cmd_kb_export = cmd_kb->add_subcommand("export", "Write the store to a KB file");
  cmd_kb_export->add_option("file", kb_file, "Destination KB JSON document")->required();
  cmd_kb_export->add_option("--store", kb_store, "Store file")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*cmd_decompose) {
    Lexicon lexicon = load_lexicon(decompose_opts.lexicon_path);
    std::unique_ptr<DecomposerProvider> provider;
    if (!provider_uri.empty()) provider = make_provider(provider_uri);
    for (const auto& task : load_corpus(decompose_file)) {
      std::vector<std::string> warnings;
      TaskGraph graph = provider ? decompose_via_provider(task, *provider, lexicon, &warnings)
                                 : decompose(task, lexicon, &warnings);
      Json j = graph_to_json(graph);
      if (!warnings.empty()) j["warnings"] = warnings;
      std::cout << j.dump() << "\n";
      for (const auto& w : warnings) std::cerr << "warning: " << task.id << ": " << w << "\n";
    }
    return 0;
  }

  if (*cmd_score) {
    ScoringConfig config = load_config(score_opts.config_path);
    Lexicon lexicon = load_lexicon(score_opts.lexicon_path);
    KBStore kb;  // scoring alone never consults the KB
    for (const auto& task : load_corpus(score_file)) {
      PipelineResult result = run_task(task, lexicon, config, kb);
      Json j;
      j["task_id"] = task.id;
      Json subs = Json::array();
      for (const auto& [id, sc] : result.profile.per_subtask) {
        Json js;
        js["id"] = id;
        js["ass"] = sc.ass;
        js["tds"] = sc.tds;
        js["sr"] = sc.sr;
        subs.push_back(js);
      }
      j["subtasks"] = subs;
      j["max_ass"] = result.profile.max_ass;
      j["mean_ass"] = result.profile.mean_ass;
      j["max_tds"] = result.profile.max_tds;
      j["any_sr"] = result.profile.any_sr;
      std::cout << j.dump() << "\n";
    }
    return 0;
  }

  if (*cmd_recommend) {
    ScoringConfig config = load_config(recommend_opts.config_path);
    Lexicon lexicon = load_lexicon(recommend_opts.lexicon_path);
    KBStore kb = load_kb_or_empty(recommend_opts.kb_path, recommend_opts.kb_explicit);
    Persona persona = persona_from_string(persona_name);
    if (!recommend_out.empty()) std::filesystem::create_directories(recommend_out);
    for (const auto& task : load_corpus(recommend_file)) {
      Report report = run_pipeline(task, config, kb, lexicon, persona);
      if (recommend_json)
        std::cout << report.machine.dump() << "\n";
      else
        std::cout << report.human << "\n";
      if (!recommend_out.empty())
        write_file(recommend_out + "/" + task.id + ".report.json",
                   report.machine.dump(2) + "\n");
    }
    return 0;
  }

  if (*cmd_evaluate) {
    ScoringConfig config = load_config(evaluate_opts.config_path);
    Lexicon lexicon = load_lexicon(evaluate_opts.lexicon_path);
    KBStore kb = load_kb_or_empty(evaluate_opts.kb_path, evaluate_opts.kb_explicit);
    std::vector<Method> methods;
    for (const auto& name : split_csv(methods_csv))
      methods.push_back(method_from_string(name));
    AblationFlags flags = ablation_flags_from_names(split_csv(ablate_csv));
    MetricsTable table =
        evaluate(load_corpus(evaluate_file), lexicon, config, kb, methods, flags);
    std::string csv = metrics_to_csv(table);
    write_file(evaluate_out + ".json", metrics_to_json(table).dump(2) + "\n");
    write_file(evaluate_out + ".csv", csv);
    std::cout << csv;
    return 0;
  }

  if (*cmd_calibrate) {
    ScoringConfig config = load_config(calibrate_opts.config_path);
    Lexicon lexicon = load_lexicon(calibrate_opts.lexicon_path);
    KBStore kb = load_kb_or_empty(calibrate_opts.kb_path, calibrate_opts.kb_explicit);
    CalibrationResult result =
        grid_search(load_corpus(calibrate_file), load_grid(grid_path), lexicon, config, kb);
    write_file(calibrate_out + ".json", calibration_to_json(result).dump(2) + "\n");
    write_file(calibrate_out + ".csv", calibration_points_csv(result));
    std::cout << calibration_to_json(result).dump(2) << "\n";
    return 0;
  }

  if (*cmd_kb) {
    if (*cmd_kb_import) {
      KBStore incoming = load_kb(kb_file);
      save_kb(incoming, kb_store);
      std::cout << "imported " << incoming.size() << " patterns (version "
                << incoming.version() << ") into " << kb_store << "\n";
    } else {
      KBStore store = load_kb(kb_store);
      save_kb(store, kb_file);
      std::cout << "exported " << store.size() << " patterns (version "
                << store.version() << ") to " << kb_file << "\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
