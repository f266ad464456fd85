#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sciret/sciret.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

sciret::Day require_date(const std::string& s, const char* what) {
  const auto d = sciret::parse_date(s);
  if (!d) throw std::invalid_argument(std::string(what) + " is not a YYYY-MM-DD date: " + s);
  return *d;
}

struct Flags {
  std::string method = "textrank";
  std::string window_start, window_end;
  std::string observation_start, observation_end;
  std::vector<std::string> min_daily;
  std::string cooccurrence = "overlap";
  bool no_cache = false;
};

// Applies the string-valued flags to the config; numeric flags bind directly.
void finish_config(sciret::RunConfig& c, const Flags& f) {
  const auto m = sciret::to_lower_ascii(f.method);
  if (m == "both") {
    c.methods = {sciret::Method::TextRank, sciret::Method::Rake};
  } else {
    c.methods = {sciret::parse_method(m)};
  }
  if (!f.window_start.empty()) c.ingest.window_start = require_date(f.window_start, "window-start");
  if (!f.window_end.empty()) c.ingest.window_end = require_date(f.window_end, "window-end");
  if (!f.observation_start.empty())
    c.bursts.observation_start = require_date(f.observation_start, "observation-start");
  if (!f.observation_end.empty()) c.bursts.observation_end = require_date(f.observation_end, "observation-end");
  for (const auto& entry : f.min_daily) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("min-daily expects PLATFORM=N, got " + entry);
    c.bursts.min_daily[sciret::Platform::parse(entry.substr(0, eq))] = std::stoi(entry.substr(eq + 1));
  }
  const auto co = sciret::to_lower_ascii(f.cooccurrence);
  if (co == "overlap") {
    c.bursts.cooccurrence = sciret::CooccurrenceMode::Overlap;
  } else if (co == "same_start" || co == "same-start") {
    c.bursts.cooccurrence = sciret::CooccurrenceMode::SameStart;
  } else {
    throw std::invalid_argument("cooccurrence must be overlap or same_start");
  }
  c.use_cache = !f.no_cache;
}

int report(const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  if (fs::exists(dir / "INCOMPLETE")) {
    std::cerr << "run in " << out_dir << " is incomplete:\n" << sciret::read_file(dir / "INCOMPLETE");
    return sciret::kExitStageFailure;
  }
  if (!fs::is_regular_file(dir / "manifest.json")) {
    std::cerr << "no manifest in " << out_dir << "\n";
    return sciret::kExitInvalidConfig;
  }
  const auto manifest = nlohmann::json::parse(sciret::read_file(dir / "manifest.json"));
  std::cout << "stage: " << manifest.at("stage").get<std::string>() << "\n";
  std::cout << "corpus digest: " << manifest.at("corpus_digest").get<std::string>() << "\n";
  for (const auto& [k, v] : manifest.at("counts").items()) std::cout << "  " << k << ": " << v << "\n";
  if (manifest.contains("method_spearman"))
    std::cout << "textrank/rake spearman: " << manifest.at("method_spearman").get<double>() << "\n";
  for (const auto& note : manifest.at("notes")) std::cout << "note: " << note.get<std::string>() << "\n";
  for (const char* table : {"score_summary.csv", "trajectories.csv"}) {
    if (!fs::is_regular_file(dir / table)) continue;
    std::cout << "\n" << table << "\n" << sciret::read_file(dir / table);
  }
  return sciret::kExitOk;
}

struct SimFlags {
  std::size_t n_articles = 50;
  std::string decay = "0.8,0.5,0.3,0.2";
  double platform_bonus = 0.0;
  int min_length = 1;
  int max_length = 4;
  double cooccur_prob = 0.2;
  double text_missing_rate = 0.0;
  std::size_t phrases = 8;
};

int simulate(const SimFlags& s, const sciret::RunConfig& c) {
  namespace fs = std::filesystem;
  sciret::SynthSpec spec;
  spec.n_articles = s.n_articles;
  spec.decay_profile = parse_list(s.decay);
  spec.platform_bonus = s.platform_bonus;
  spec.plan_options.min_length = s.min_length;
  spec.plan_options.max_length = s.max_length;
  spec.plan_options.cooccur_prob = s.cooccur_prob;
  spec.text_missing_rate = s.text_missing_rate;
  spec.phrases_per_abstract = s.phrases;
  spec.seed = c.trajectory.seed;
  spec.burst_params = c.bursts;
  const auto corpus = sciret::generate_synthetic(spec);
  fs::create_directories(c.out_dir);
  const fs::path dir(c.out_dir);
  std::ostringstream a, m, p;
  sciret::write_jsonl(a, corpus.articles);
  sciret::write_jsonl(m, corpus.mentions);
  sciret::write_plan(p, corpus.planned);
  sciret::write_file_atomic(dir / "articles.jsonl", a.str());
  sciret::write_file_atomic(dir / "mentions.jsonl", m.str());
  sciret::write_file_atomic(dir / "plan.jsonl", p.str());
  std::cout << "wrote " << corpus.articles.size() << " articles, " << corpus.mentions.size() << " mentions, "
            << corpus.planned.size() << " planned bursts to " << c.out_dir << "\n";
  return sciret::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure how much of an abstract's key information survives in online mentions."};
  app.set_config("--config", "", "Flat key=value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  sciret::RunConfig config;
  Flags flags;
  if (const char* env = std::getenv("SCIRET_OUT_DIR"); env && *env) config.out_dir = env;

  app.add_option("--articles", config.articles_path, "Articles JSONL file");
  app.add_option("--mentions", config.mentions_path, "Mentions JSONL file");
  app.add_option("--out", config.out_dir, "Output directory (default $SCIRET_OUT_DIR or sciret-out)");
  app.add_option("--method", flags.method, "textrank, rake or both")->capture_default_str();
  app.add_option("--min-abstract-chars", config.ingest.min_abstract_chars)->capture_default_str();
  app.add_option("--window-start", flags.window_start, "First day of the corpus window");
  app.add_option("--window-end", flags.window_end, "Last day of the corpus window");
  app.add_option("--textrank-window", config.textrank.window)->capture_default_str();
  app.add_option("--damping", config.textrank.pagerank.damping)->capture_default_str();
  app.add_option("--pagerank-eps", config.textrank.pagerank.eps)->capture_default_str();
  app.add_option("--pagerank-max-iter", config.textrank.pagerank.max_iter)->capture_default_str();
  app.add_option("--base-threshold", config.bursts.base_threshold)->capture_default_str();
  app.add_option("--min-daily", flags.min_daily, "Per-platform daily minimum, PLATFORM=N (repeatable)");
  app.add_option("--elevation-ratio", config.bursts.elevation_ratio)->capture_default_str();
  app.add_option("--burst-window", config.bursts.window, "Days on each side of a candidate day")
      ->capture_default_str();
  app.add_option("--min-burst-mentions", config.bursts.min_burst_mentions)->capture_default_str();
  app.add_option("--observation-start", flags.observation_start, "Clip surrounding-day means to this first day");
  app.add_option("--observation-end", flags.observation_end, "Clip surrounding-day means to this last day");
  app.add_option("--cooccurrence", flags.cooccurrence, "overlap or same_start")->capture_default_str();
  app.add_option("--min-cases", config.trajectory.min_cases)->capture_default_str();
  app.add_option("--resamples", config.trajectory.resamples)->capture_default_str();
  app.add_option("--level", config.trajectory.level)->capture_default_str();
  app.add_option("--seed", config.trajectory.seed)->capture_default_str();
  app.add_flag("--per-group", config.trajectory.per_group, "One value per burst group in trajectories");
  app.add_option("--max-length", config.max_trajectory_length, "Longest sequence length reported")
      ->capture_default_str();
  app.add_option("--bin-width", config.bin_width)->capture_default_str();
  app.add_option("--group-field", config.group_field, "discipline or published_year")->capture_default_str();
  app.add_option("--workers", config.workers)->capture_default_str();
  app.add_flag("--no-cache", flags.no_cache, "Recompute cached keyphrases and scores");
  app.add_flag("--verbose", "Log stage progress to stderr");

  const std::pair<const char*, sciret::Stage> stages[] = {
      {"ingest", sciret::Stage::Ingest},       {"keyphrases", sciret::Stage::Keyphrases},
      {"score", sciret::Stage::Score},         {"bursts", sciret::Stage::Bursts},
      {"sequences", sciret::Stage::Sequences}, {"analyze", sciret::Stage::Analyze},
      {"run", sciret::Stage::Analyze}};
  std::vector<std::pair<CLI::App*, sciret::Stage>> stage_commands;
  for (const auto& [name, stage] : stages) {
    const std::string desc = std::string(name) == "run" ? "Run every stage"
                                                        : "Run the pipeline through the " + std::string(name) + " stage";
    stage_commands.emplace_back(app.add_subcommand(name, desc), stage);
  }
  auto* report_cmd = app.add_subcommand("report", "Summarise a finished run directory");

  SimFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a seeded synthetic corpus into the output directory");
  sim_cmd->add_option("--n-articles", sim.n_articles)->capture_default_str();
  sim_cmd->add_option("--decay", sim.decay, "Phrase inclusion probability per position")->capture_default_str();
  sim_cmd->add_option("--platform-bonus", sim.platform_bonus)->capture_default_str();
  sim_cmd->add_option("--min-length", sim.min_length)->capture_default_str();
  sim_cmd->add_option("--max-length", sim.max_length)->capture_default_str();
  sim_cmd->add_option("--cooccur-prob", sim.cooccur_prob)->capture_default_str();
  sim_cmd->add_option("--text-missing-rate", sim.text_missing_rate)->capture_default_str();
  sim_cmd->add_option("--phrases", sim.phrases, "Keyphrases per abstract")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sciret::kExitInvalidConfig;
  }

  try {
    finish_config(config, flags);
  } catch (const std::exception& e) {
    std::cerr << "sciret: invalid configuration: " << e.what() << "\n";
    return sciret::kExitInvalidConfig;
  }

  if (report_cmd->parsed()) return report(config.out_dir);
  if (sim_cmd->parsed()) {
    try {
      return simulate(sim, config);
    } catch (const std::invalid_argument& e) {
      std::cerr << "sciret: " << e.what() << "\n";
      return sciret::kExitInvalidConfig;
    }
  }

  for (const auto& [cmd, stage] : stage_commands) {
    if (!cmd->parsed()) continue;
    const auto result = sciret::run_pipeline(config, stage, app.count("--verbose") ? &std::cerr : nullptr);
    if (result.exit_code != sciret::kExitOk) {
      std::cerr << "sciret: " << result.stage << " failed: " << result.message << "\n";
      return result.exit_code;
    }
    std::cout << "sciret: " << result.stage << " complete, outputs in " << config.out_dir << "\n";
    return sciret::kExitOk;
  }
  return sciret::kExitInvalidConfig;
}
