#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "sciret/analytics.hpp"
#include "sciret/bursts.hpp"
#include "sciret/corpus.hpp"
#include "sciret/dumps.hpp"
#include "sciret/keyphrase.hpp"
#include "sciret/retention.hpp"

namespace sciret {

inline constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Utilities

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes through a temporary file so readers never see a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// Runs fn(i) for i in [0, n) on `workers` threads. Callers write results into
// slot i, so output order never depends on scheduling.
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Configuration

enum class Stage { Ingest, Keyphrases, Score, Bursts, Sequences, Analyze };

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Keyphrases: return "keyphrases";
    case Stage::Score: return "score";
    case Stage::Bursts: return "bursts";
    case Stage::Sequences: return "sequences";
    case Stage::Analyze: return "analyze";
  }
  return "unknown";
}

enum ExitCode : int {
  kExitOk = 0,
  kExitStageFailure = 1,
  kExitInvalidConfig = 2,
  kExitIngestFailure = 3,
  kExitEmptyCorpus = 4,
};

struct RunConfig {
  std::string articles_path;
  std::string mentions_path;
  std::string out_dir = "sciret-out";
  std::vector<Method> methods = {Method::TextRank};
  IngestConfig ingest;
  TextRankOptions textrank;
  BurstParams bursts;
  TrajectoryOptions trajectory;
  std::size_t max_trajectory_length = 20;
  double bin_width = 0.01;
  std::string group_field = "discipline";
  unsigned workers = 1;
  bool use_cache = true;

  void validate() const {
    namespace fs = std::filesystem;
    if (articles_path.empty() || mentions_path.empty()) throw std::invalid_argument("input paths are required");
    if (!fs::is_regular_file(articles_path)) throw std::invalid_argument("articles file not found: " + articles_path);
    if (!fs::is_regular_file(mentions_path)) throw std::invalid_argument("mentions file not found: " + mentions_path);
    if (out_dir.empty()) throw std::invalid_argument("output directory is required");
    if (methods.empty()) throw std::invalid_argument("at least one keyphrase method is required");
    if (textrank.window < 2) throw std::invalid_argument("textrank window must be >= 2");
    if (!(textrank.pagerank.damping > 0.0 && textrank.pagerank.damping < 1.0))
      throw std::invalid_argument("damping must lie in (0, 1)");
    if (trajectory.resamples < 1) throw std::invalid_argument("resamples must be >= 1");
    if (!(trajectory.level > 0.0 && trajectory.level < 1.0)) throw std::invalid_argument("level must lie in (0, 1)");
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    (void)article_field(ArticleRecord{}, group_field);
    bursts.validate();
  }
};

// Reference tracked-post counts per platform used to document how the
// logarithmic weighting relates to the shipped daily minimums.
struct ThresholdReference {
  Platform::Kind platform;
  long long tracked_posts;
};
inline constexpr ThresholdReference kReferencePostCounts[] = {
    {Platform::Kind::Blog, 135494},     {Platform::Kind::Facebook, 130502}, {Platform::Kind::News, 258367},
    {Platform::Kind::Twitter, 4426264}, {Platform::Kind::Wikipedia, 5976},
};
inline constexpr long long kReferenceTotalPosts = 4956603;

inline std::string threshold_note(const BurstParams& params) {
  std::string shipped, formula;
  for (const auto& ref : kReferencePostCounts) {
    const Platform p(ref.platform);
    if (!shipped.empty()) {
      shipped += ", ";
      formula += ", ";
    }
    shipped += p.name() + " " + std::to_string(BurstParams::default_min_daily().at(p));
    formula += p.name() + " " +
               std::to_string(platform_threshold(ref.tracked_posts, kReferenceTotalPosts, params.base_threshold));
  }
  return "daily minimums default to the published table (" + shipped +
         "); recomputing ceil(base * ln(n_platform) / ln(n_total)) from the reference tracked-post counts gives (" +
         formula + "), so the table values are used as shipped";
}

// ---------------------------------------------------------------------------
// Run state

struct RunResult {
  int exit_code = kExitOk;
  std::string stage;
  std::string message;
  nlohmann::json manifest;
};

struct PipelineState {
  CorpusStore store;
  std::string articles_digest;
  std::string mentions_digest;
  std::map<Method, std::vector<KeyphraseSet>> keyphrases;  // ordered by article id
  std::map<Method, std::size_t> excluded_articles;
  std::map<Method, std::unordered_map<std::string, double>> scores;  // mention id -> value
  std::vector<BurstSequence> sequences;                              // unscored
  std::map<Method, std::vector<BurstSequence>> scored;
};

namespace detail {

inline std::string keyphrase_cache_key(const RunConfig& c, const std::string& articles_digest) {
  std::ostringstream k;
  k << kVersion << '|' << articles_digest << '|' << c.ingest.min_abstract_chars << '|' << c.textrank.window << '|'
    << c.textrank.pagerank.damping << '|' << c.textrank.pagerank.eps << '|' << c.textrank.pagerank.max_iter;
  for (const auto m : c.methods) k << '|' << method_name(m);
  return sha256_hex(k.str());
}

inline std::string score_cache_key(const RunConfig& c, const std::string& keyphrase_key,
                                   const std::string& mentions_digest) {
  std::ostringstream k;
  k << keyphrase_key << '|' << mentions_digest << '|'
    << (c.ingest.window_start ? format_date(*c.ingest.window_start) : "-") << '|'
    << (c.ingest.window_end ? format_date(*c.ingest.window_end) : "-");
  return sha256_hex(k.str());
}

inline bool cache_hit(const std::filesystem::path& dump, const std::filesystem::path& key_file, const std::string& key) {
  namespace fs = std::filesystem;
  if (!fs::is_regular_file(dump) || !fs::is_regular_file(key_file)) return false;
  return read_file(key_file) == key + "\n";
}

inline nlohmann::json ingest_json(const IngestStats& s) {
  return {{"articles_read", s.articles_read},
          {"articles_kept", s.articles_kept},
          {"articles_invalid", s.articles_invalid},
          {"articles_short", s.articles_short},
          {"articles_duplicate", s.articles_duplicate},
          {"mentions_read", s.mentions_read},
          {"mentions_kept", s.mentions_kept},
          {"mentions_invalid", s.mentions_invalid},
          {"mentions_unknown_article", s.mentions_unknown_article},
          {"mentions_duplicate", s.mentions_duplicate},
          {"mentions_out_of_window", s.mentions_out_of_window},
          {"mentions_with_text", s.mentions_with_text},
          {"mentions_english", s.mentions_english}};
}

inline nlohmann::json params_json(const RunConfig& c) {
  nlohmann::json min_daily = nlohmann::json::object();
  for (const auto& [p, v] : c.bursts.min_daily) min_daily[p.name()] = v;
  nlohmann::json methods = nlohmann::json::array();
  for (const auto m : c.methods) methods.push_back(method_name(m));
  return {
      {"methods", methods},
      {"min_abstract_chars", c.ingest.min_abstract_chars},
      {"window_start", c.ingest.window_start ? nlohmann::json(format_date(*c.ingest.window_start)) : nlohmann::json()},
      {"window_end", c.ingest.window_end ? nlohmann::json(format_date(*c.ingest.window_end)) : nlohmann::json()},
      {"textrank", {{"window", c.textrank.window},
                    {"damping", c.textrank.pagerank.damping},
                    {"eps", c.textrank.pagerank.eps},
                    {"max_iter", c.textrank.pagerank.max_iter}}},
      {"bursts", {{"base_threshold", c.bursts.base_threshold},
                  {"min_daily", min_daily},
                  {"elevation_ratio", c.bursts.elevation_ratio},
                  {"window_days", c.bursts.window},
                  {"min_burst_mentions", c.bursts.min_burst_mentions},
                  {"surrounding_mean", c.bursts.observation_start || c.bursts.observation_end
                                           ? "clipped to observation window"
                                           : "2 * window days, absent days zero"},
                  {"cooccurrence", c.bursts.cooccurrence == CooccurrenceMode::Overlap ? "overlap" : "same_start"}}},
      {"analytics", {{"min_cases", c.trajectory.min_cases},
                     {"resamples", c.trajectory.resamples},
                     {"level", c.trajectory.level},
                     {"seed", c.trajectory.seed},
                     {"per_group", c.trajectory.per_group},
                     {"max_trajectory_length", c.max_trajectory_length},
                     {"bin_width", c.bin_width},
                     {"group_field", c.group_field}}},
  };
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Stages

class Pipeline {
 public:
  explicit Pipeline(RunConfig config) : config_(std::move(config)) {}

  const PipelineState& state() const { return state_; }
  const RunConfig& config() const { return config_; }

  void ingest() {
    const auto articles_bytes = read_file(config_.articles_path);
    const auto mentions_bytes = read_file(config_.mentions_path);
    state_.articles_digest = sha256_hex(articles_bytes);
    state_.mentions_digest = sha256_hex(mentions_bytes);
    std::istringstream a(articles_bytes), m(mentions_bytes);
    state_.store = sciret::ingest(a, m, config_.ingest);
  }

  void keyphrases() {
    const auto dir = out_dir();
    const auto dump = dir / "keyphrases.jsonl";
    const auto key_file = dir / "keyphrases.key";
    keyphrase_key_ = detail::keyphrase_cache_key(config_, state_.articles_digest);
    state_.keyphrases.clear();
    state_.excluded_articles.clear();
    if (config_.use_cache && detail::cache_hit(dump, key_file, keyphrase_key_)) {
      std::ifstream in(dump);
      for (auto& set : read_keyphrase_dump(in)) state_.keyphrases[set.method].push_back(std::move(set));
      for (const auto m : config_.methods)
        state_.excluded_articles[m] = state_.store.articles().size() - state_.keyphrases[m].size();
      return;
    }
    std::vector<const ArticleRecord*> articles;
    for (const auto& [id, a] : state_.store.articles()) articles.push_back(&a);
    std::ostringstream out;
    for (const auto method : config_.methods) {
      std::vector<std::optional<KeyphraseSet>> slots(articles.size());
      parallel_for(articles.size(), config_.workers, [&](std::size_t i) {
        try {
          slots[i] = extract_keyphrases(method, articles[i]->abstract, articles[i]->article_id, config_.textrank);
        } catch (const NoKeyphrasesError&) {
          slots[i].reset();
        }
      });
      auto& sets = state_.keyphrases[method];
      for (auto& s : slots) {
        if (s) {
          sets.push_back(std::move(*s));
        } else {
          ++state_.excluded_articles[method];
        }
      }
      state_.excluded_articles.try_emplace(method, 0);
      write_keyphrase_dump(out, sets);
    }
    write_file_atomic(dump, out.str());
    write_file_atomic(key_file, keyphrase_key_ + "\n");
  }

  void score() {
    const auto dir = out_dir();
    const auto dump = dir / "scores.jsonl";
    const auto key_file = dir / "scores.key";
    const auto key = detail::score_cache_key(config_, keyphrase_key_, state_.mentions_digest);
    state_.scores.clear();
    if (config_.use_cache && detail::cache_hit(dump, key_file, key)) {
      std::ifstream in(dump);
      for (const auto& r : read_score_dump(in)) state_.scores[r.method][r.mention_id] = r.value;
      return;
    }
    std::vector<ScoreRecord> records;
    for (const auto method : config_.methods) {
      const auto& sets = state_.keyphrases[method];
      std::vector<std::vector<ScoreRecord>> slots(sets.size());
      parallel_for(sets.size(), config_.workers, [&](std::size_t i) {
        const PhraseMatcher matcher(sets[i]);
        for (const auto& m : state_.store.mentions_of(sets[i].article_id)) {
          if (!m.has_text() || !m.english) continue;
          slots[i].push_back({m.mention_id, m.article_id, m.platform, method, matcher.score_text(*m.text).value});
        }
      });
      for (auto& slot : slots)
        for (auto& r : slot) {
          state_.scores[method][r.mention_id] = r.value;
          records.push_back(std::move(r));
        }
    }
    std::ostringstream out;
    write_score_dump(out, records);
    write_file_atomic(dump, out.str());
    write_file_atomic(key_file, key + "\n");
  }

  void bursts() {
    std::vector<std::string> ids;
    for (const auto& [id, a] : state_.store.articles()) ids.push_back(id);
    std::vector<std::optional<BurstSequence>> slots(ids.size());
    parallel_for(ids.size(), config_.workers, [&](std::size_t i) {
      std::vector<Burst> found;
      for (const auto* series : state_.store.series_of(ids[i])) {
        auto b = detect_bursts(*series, config_.bursts);
        found.insert(found.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
      }
      if (!found.empty())
        slots[i] = build_sequence(ids[i], group_cooccurring(std::move(found), config_.bursts.cooccurrence));
    });
    state_.sequences.clear();
    for (auto& s : slots)
      if (s) state_.sequences.push_back(std::move(*s));
    std::ostringstream out;
    write_burst_dump(out, state_.sequences);
    write_file_atomic(out_dir() / "bursts.jsonl", out.str());
  }

  // Attaches burst-level scores (median of member mention scores) per method
  // and writes the scored burst dump plus a per-sequence table.
  void sequences() {
    state_.scored.clear();
    std::ostringstream dump;
    for (const auto method : config_.methods) {
      auto seqs = state_.sequences;
      const auto& scores = state_.scores[method];
      for (auto& seq : seqs)
        for (auto& g : seq.groups)
          for (auto& b : g.bursts) {
            std::vector<double> values;
            for (const auto& id : b.mention_ids)
              if (const auto it = scores.find(id); it != scores.end()) values.push_back(it->second);
            b.score = score_burst(std::span<const double>(values));
          }
      write_burst_dump(dump, seqs, method);
      state_.scored[method] = std::move(seqs);
    }
    write_file_atomic(out_dir() / "bursts_scored.jsonl", dump.str());

    std::ostringstream table;
    table << "article_id,length,platform_count,n_bursts,first_platforms\n";
    for (const auto& seq : state_.sequences) {
      std::string first;
      for (const auto& p : seq.groups.front().platforms) first += (first.empty() ? "" : "|") + p.name();
      table << csv_field(seq.article_id) << ',' << seq.length() << ',' << seq.platform_count() << ','
            << seq.burst_count() << ',' << first << '\n';
    }
    write_file_atomic(out_dir() / "sequences.csv", table.str());
  }

  void analyze() {
    std::ostringstream traj, strata, platforms, hetero, dist, summary, groups;
    traj << "method,length,position,n,median,ci_low,ci_high,valid,n_sequences,min_cases\n";
    strata << "method,first_platform,length,position,n,median,ci_low,ci_high,valid,n_sequences\n";
    platforms << "method,platform,n_bursts,n_scored,median_score,mentions_total,mentions_in_bursts,"
                 "pct_mentions_in_bursts,n_first,pct_first,expected_pct_first,pct_bursts_first,n_cooccurring,"
                 "n_solo,median_cooccurring,median_solo\n";
    hetero << "method,length,platform_count,n,median\n";
    dist << "method,bin_low,bin_high,count\n";
    summary << "method,n_bursts,n_scored,zero_fraction,max_score\n";
    groups << "method,field,label,n,median\n";

    std::map<Platform, std::size_t> mention_totals;
    for (const auto& m : state_.store.mentions()) ++mention_totals[m.platform];
    std::size_t max_length = 0;
    for (const auto& s : state_.sequences) max_length = std::max(max_length, s.length());
    max_length = std::min(max_length, config_.max_trajectory_length);

    for (const auto method : config_.methods) {
      const std::string mname(method_name(method));
      const auto& seqs = state_.scored.at(method);
      for (std::size_t len = 2; len <= max_length; ++len) {
        const auto report = trajectory_medians(seqs, len, config_.trajectory);
        if (report.n_sequences == 0) continue;
        for (const auto& p : report.positions)
          traj << mname << ',' << len << ',' << p.position << ',' << p.n << ',' << csv_number(p.median) << ','
               << csv_number(p.ci_low) << ',' << csv_number(p.ci_high) << ',' << (report.valid ? 1 : 0) << ','
               << report.n_sequences << ',' << report.min_cases << '\n';
        for (const auto& [platform, r] : stratify_by_first_platform(seqs, len, config_.trajectory))
          for (const auto& p : r.positions)
            strata << mname << ',' << platform.name() << ',' << len << ',' << p.position << ',' << p.n << ','
                   << csv_number(p.median) << ',' << csv_number(p.ci_low) << ',' << csv_number(p.ci_high) << ','
                   << (r.valid ? 1 : 0) << ',' << r.n_sequences << '\n';
      }
      for (const auto& [p, r] : platform_report(seqs, mention_totals))
        platforms << mname << ',' << p.name() << ',' << r.n_bursts << ',' << r.n_scored << ','
                  << csv_number(r.median_score) << ',' << r.mentions_total << ',' << r.mentions_in_bursts << ','
                  << csv_number(r.pct_mentions_in_bursts, 2) << ',' << r.first.n_first << ','
                  << csv_number(r.first.pct_first, 2) << ',' << csv_number(r.first.expected_pct_first, 2) << ','
                  << csv_number(r.first.pct_bursts_first, 2) << ',' << r.cooccurrence.n_co << ','
                  << r.cooccurrence.n_solo << ',' << csv_number(r.cooccurrence.median_co) << ','
                  << csv_number(r.cooccurrence.median_solo) << '\n';
      for (const auto& [key, cell] : heterogeneity_analysis(seqs))
        hetero << mname << ',' << key.first << ',' << key.second << ',' << cell.n << ',' << csv_number(cell.median)
               << '\n';
      const auto d = score_distribution(seqs, config_.bin_width);
      for (const auto& [bin, count] : d.bins)
        dist << mname << ',' << csv_number(static_cast<double>(bin) * d.bin_width) << ','
             << csv_number(static_cast<double>(bin + 1) * d.bin_width) << ',' << count << '\n';
      std::size_t n_bursts = 0;
      for (const auto& s : seqs) n_bursts += s.burst_count();
      summary << mname << ',' << n_bursts << ',' << d.n << ',' << csv_number(d.zero_fraction) << ','
              << csv_number(d.max_score) << '\n';
      for (const auto& [label, cell] : group_median_by(seqs, state_.store.articles(), config_.group_field))
        groups << mname << ',' << config_.group_field << ',' << csv_field(label) << ',' << cell.n << ','
               << csv_number(cell.median) << '\n';
    }
    const auto dir = out_dir();
    write_file_atomic(dir / "trajectories.csv", traj.str());
    write_file_atomic(dir / "trajectories_by_first_platform.csv", strata.str());
    write_file_atomic(dir / "platforms.csv", platforms.str());
    write_file_atomic(dir / "heterogeneity.csv", hetero.str());
    write_file_atomic(dir / "score_distribution.csv", dist.str());
    write_file_atomic(dir / "score_summary.csv", summary.str());
    write_file_atomic(dir / "group_medians.csv", groups.str());
  }

  // Rank correlation between the methods' burst scores, when both ran.
  std::optional<double> method_correlation() const {
    if (!state_.scored.contains(Method::TextRank) || !state_.scored.contains(Method::Rake)) return std::nullopt;
    std::vector<double> x, y;
    const auto& a = state_.scored.at(Method::TextRank);
    const auto& b = state_.scored.at(Method::Rake);
    for (std::size_t s = 0; s < a.size(); ++s)
      for (std::size_t g = 0; g < a[s].groups.size(); ++g)
        for (std::size_t k = 0; k < a[s].groups[g].bursts.size(); ++k) {
          const auto& sa = a[s].groups[g].bursts[k].score;
          const auto& sb = b[s].groups[g].bursts[k].score;
          if (sa && sb) {
            x.push_back(*sa);
            y.push_back(*sb);
          }
        }
    if (x.size() < 2) return std::nullopt;
    return spearman(x, y);
  }

  nlohmann::json manifest(Stage until) const {
    namespace fs = std::filesystem;
    nlohmann::json counts = detail::ingest_json(state_.store.stats());
    if (until >= Stage::Keyphrases) {
      for (const auto& [m, sets] : state_.keyphrases) {
        counts["keyphrase_sets_" + std::string(method_name(m))] = sets.size();
        counts["articles_without_keyphrases_" + std::string(method_name(m))] = state_.excluded_articles.at(m);
      }
    }
    if (until >= Stage::Score)
      for (const auto& [m, s] : state_.scores) counts["scored_mentions_" + std::string(method_name(m))] = s.size();
    if (until >= Stage::Bursts) {
      std::size_t n_bursts = 0, n_groups = 0;
      for (const auto& s : state_.sequences) {
        n_bursts += s.burst_count();
        n_groups += s.length();
      }
      counts["bursts"] = n_bursts;
      counts["burst_groups"] = n_groups;
      counts["sequences"] = state_.sequences.size();
    }
    nlohmann::json m{
        {"tool", "sciret"},
        {"version", kVersion},
        {"stage", stage_name(until)},
        {"inputs",
         {{"articles", {{"file", fs::path(config_.articles_path).filename().string()}, {"sha256", state_.articles_digest}}},
          {"mentions", {{"file", fs::path(config_.mentions_path).filename().string()}, {"sha256", state_.mentions_digest}}}}},
        {"corpus_digest", sha256_hex(state_.articles_digest + state_.mentions_digest)},
        {"params", detail::params_json(config_)},
        {"seed", config_.trajectory.seed},
        {"counts", counts},
        {"notes", nlohmann::json::array({threshold_note(config_.bursts)})},
    };
    if (until >= Stage::Sequences) {
      if (const auto rho = method_correlation()) m["method_spearman"] = *rho;
    }
    return m;
  }

  std::filesystem::path out_dir() const { return std::filesystem::path(config_.out_dir); }

 private:
  RunConfig config_;
  PipelineState state_;
  std::string keyphrase_key_;
};

// Runs every stage up to and including `until`. Failures name the stage and
// leave an INCOMPLETE marker instead of a manifest.
inline RunResult run_pipeline(const RunConfig& config, Stage until = Stage::Analyze,
                              std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  RunResult result;
  try {
    config.validate();
  } catch (const std::exception& e) {
    return {kExitInvalidConfig, "config", e.what(), {}};
  }
  Pipeline pipeline(config);
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return {kExitInvalidConfig, "config", "cannot create output directory: " + ec.message(), {}};
  fs::remove(dir / "manifest.json", ec);
  fs::remove(dir / "INCOMPLETE", ec);

  auto fail = [&](int code, Stage stage, const std::string& message) {
    std::ofstream(dir / "INCOMPLETE") << "stage: " << stage_name(stage) << "\nerror: " << message << "\n";
    return RunResult{code, std::string(stage_name(stage)), message, {}};
  };
  auto say = [&](Stage s) {
    if (log) *log << "[sciret] " << stage_name(s) << "\n";
  };

  Stage current = Stage::Ingest;
  try {
    say(current);
    try {
      pipeline.ingest();
    } catch (const std::exception& e) {
      return fail(kExitIngestFailure, current, e.what());
    }
    if (log)
      for (const auto& d : pipeline.state().store.stats().diagnostics) *log << "[sciret] skipped " << d << "\n";
    const auto& stats = pipeline.state().store.stats();
    if (stats.articles_kept == 0 || stats.mentions_kept == 0) {
      return fail(kExitEmptyCorpus, current,
                  stats.articles_kept == 0 ? "no usable articles" : "no usable mentions");
    }
    const std::pair<Stage, void (Pipeline::*)()> steps[] = {
        {Stage::Keyphrases, &Pipeline::keyphrases}, {Stage::Score, &Pipeline::score},
        {Stage::Bursts, &Pipeline::bursts},         {Stage::Sequences, &Pipeline::sequences},
        {Stage::Analyze, &Pipeline::analyze}};
    for (const auto& [stage, fn] : steps) {
      if (stage > until) break;
      current = stage;
      say(stage);
      (pipeline.*fn)();
    }
    result.manifest = pipeline.manifest(until);
    write_file_atomic(dir / "manifest.json", result.manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    return fail(kExitStageFailure, current, e.what());
  }
  result.stage = stage_name(until);
  return result;
}

}  // namespace sciret
