#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sciret/bursts.hpp"
#include "sciret/corpus.hpp"
#include "sciret/stats.hpp"

namespace sciret {

inline std::uint64_t stable_tag(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t stable_tag(const Platform& p) { return stable_tag(p.name()); }

template <class Fn>
void for_each_burst(std::span<const BurstSequence> sequences, Fn&& fn) {
  for (const auto& seq : sequences)
    for (std::size_t g = 0; g < seq.groups.size(); ++g)
      for (const auto& b : seq.groups[g].bursts) fn(b, seq.groups[g], seq);
}

// ---------------------------------------------------------------------------
// Trajectories

struct TrajectoryOptions {
  std::size_t min_cases = 200;
  int resamples = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
  bool per_group = false;  // one value (group median) per group instead of per burst
};

struct PositionStat {
  int position = 0;
  std::size_t n = 0;
  double median = std::numeric_limits<double>::quiet_NaN();
  double ci_low = std::numeric_limits<double>::quiet_NaN();
  double ci_high = std::numeric_limits<double>::quiet_NaN();
};

struct TrajectoryReport {
  std::size_t length = 0;
  std::size_t n_sequences = 0;
  std::size_t min_cases = 0;
  bool per_group = false;
  bool valid = false;
  std::string note;
  std::vector<PositionStat> positions;
};

namespace detail {

inline std::vector<double> scored_values(const BurstGroup& g, bool per_group) {
  std::vector<double> vals;
  for (const auto& b : g.bursts)
    if (b.score) vals.push_back(*b.score);
  if (per_group && !vals.empty()) return {median(vals)};
  return vals;
}

}  // namespace detail

// Median score (with bootstrap CI) at each position of all sequences of
// exactly length L. Any position with fewer than min_cases values makes the
// whole length invalid.
inline TrajectoryReport trajectory_medians(std::span<const BurstSequence> sequences, std::size_t length,
                                           const TrajectoryOptions& options = {}, std::uint64_t stratum = 0) {
  TrajectoryReport report;
  report.length = length;
  report.min_cases = options.min_cases;
  report.per_group = options.per_group;
  std::vector<std::vector<double>> values(length);
  for (const auto& seq : sequences) {
    if (seq.length() != length) continue;
    ++report.n_sequences;
    for (std::size_t p = 0; p < length; ++p) {
      auto v = detail::scored_values(seq.groups[p], options.per_group);
      values[p].insert(values[p].end(), v.begin(), v.end());
    }
  }
  if (report.n_sequences == 0) {
    report.note = "no sequences of length " + std::to_string(length);
    return report;
  }
  report.valid = true;
  for (std::size_t p = 0; p < length; ++p) {
    PositionStat stat;
    stat.position = static_cast<int>(p + 1);
    stat.n = values[p].size();
    if (!values[p].empty()) {
      stat.median = median(values[p]);
      const auto ci = bootstrap_median_ci(values[p], options.resamples, options.level,
                                          substream_seed(options.seed, {length, p + 1, stratum}));
      stat.ci_low = ci.low;
      stat.ci_high = ci.high;
    }
    if (stat.n < options.min_cases && report.valid) {
      report.valid = false;
      report.note = "position " + std::to_string(p + 1) + " has " + std::to_string(stat.n) + " cases, below " +
                    std::to_string(options.min_cases);
    }
    report.positions.push_back(stat);
  }
  return report;
}

// A sequence joins stratum P when P is among the platforms of its first
// group, so multi-platform first groups count in several strata.
inline std::map<Platform, TrajectoryReport> stratify_by_first_platform(std::span<const BurstSequence> sequences,
                                                                       std::size_t length,
                                                                       const TrajectoryOptions& options = {}) {
  std::map<Platform, std::vector<BurstSequence>> strata;
  for (const auto& seq : sequences) {
    if (seq.length() != length) continue;
    for (const auto& p : seq.groups.front().platforms) strata[p].push_back(seq);
  }
  std::map<Platform, TrajectoryReport> out;
  for (const auto& [p, seqs] : strata) out.emplace(p, trajectory_medians(seqs, length, options, stable_tag(p)));
  return out;
}

// ---------------------------------------------------------------------------
// Platform-level tables

struct FirstBurstRow {
  std::size_t n_bursts = 0;
  std::size_t n_first = 0;
  double pct_first = 0.0;          // share of all first-position bursts
  double expected_pct_first = 0.0;  // share of all bursts
  double pct_bursts_first = 0.0;    // share of this platform's bursts that are first
};

inline std::map<Platform, FirstBurstRow> first_burst_distribution(std::span<const BurstSequence> sequences) {
  std::map<Platform, FirstBurstRow> rows;
  std::size_t total = 0, total_first = 0;
  for_each_burst(sequences, [&](const Burst& b, const BurstGroup&, const BurstSequence&) {
    auto& r = rows[b.platform];
    ++r.n_bursts;
    ++total;
    if (b.position == 1) {
      ++r.n_first;
      ++total_first;
    }
  });
  for (auto& [p, r] : rows) {
    r.expected_pct_first = 100.0 * static_cast<double>(r.n_bursts) / static_cast<double>(total);
    r.pct_first = total_first ? 100.0 * static_cast<double>(r.n_first) / static_cast<double>(total_first) : 0.0;
    r.pct_bursts_first = 100.0 * static_cast<double>(r.n_first) / static_cast<double>(r.n_bursts);
  }
  return rows;
}

struct CooccurrenceRow {
  std::size_t n_co = 0;
  std::size_t n_solo = 0;
  std::size_t n_co_scored = 0;
  std::size_t n_solo_scored = 0;
  std::optional<double> median_co;
  std::optional<double> median_solo;
};

// A burst co-occurs when its group holds at least two bursts.
inline std::map<Platform, CooccurrenceRow> cooccurrence_comparison(std::span<const BurstSequence> sequences) {
  std::map<Platform, CooccurrenceRow> rows;
  std::map<Platform, std::pair<std::vector<double>, std::vector<double>>> values;
  for_each_burst(sequences, [&](const Burst& b, const BurstGroup& g, const BurstSequence&) {
    auto& r = rows[b.platform];
    auto& [co, solo] = values[b.platform];
    if (g.cooccurring()) {
      ++r.n_co;
      if (b.score) co.push_back(*b.score);
    } else {
      ++r.n_solo;
      if (b.score) solo.push_back(*b.score);
    }
  });
  for (auto& [p, r] : rows) {
    const auto& [co, solo] = values[p];
    r.n_co_scored = co.size();
    r.n_solo_scored = solo.size();
    if (!co.empty()) r.median_co = median(co);
    if (!solo.empty()) r.median_solo = median(solo);
  }
  return rows;
}

struct MedianCell {
  std::size_t n = 0;
  double median = std::numeric_limits<double>::quiet_NaN();
};

// Median burst score by (sequence length, distinct platforms in the sequence).
inline std::map<std::pair<std::size_t, std::size_t>, MedianCell> heterogeneity_analysis(
    std::span<const BurstSequence> sequences) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> values;
  for (const auto& seq : sequences) {
    auto& v = values[{seq.length(), seq.platform_count()}];
    for (const auto& g : seq.groups)
      for (const auto& b : g.bursts)
        if (b.score) v.push_back(*b.score);
  }
  std::map<std::pair<std::size_t, std::size_t>, MedianCell> out;
  for (const auto& [key, v] : values)
    if (!v.empty()) out[key] = {v.size(), median(v)};
  return out;
}

struct ScoreDistribution {
  std::size_t n = 0;  // scored bursts
  std::size_t zeros = 0;
  double zero_fraction = 0.0;
  double max_score = 0.0;
  double bin_width = 0.01;
  std::map<long, std::size_t> bins;  // bin index -> count, non-zero scores only
};

inline ScoreDistribution score_distribution(std::span<const BurstSequence> sequences, double bin_width = 0.01) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram bin width must be positive");
  ScoreDistribution d;
  d.bin_width = bin_width;
  for_each_burst(sequences, [&](const Burst& b, const BurstGroup&, const BurstSequence&) {
    if (!b.score) return;
    ++d.n;
    d.max_score = std::max(d.max_score, *b.score);
    if (*b.score == 0.0) {
      ++d.zeros;
      return;
    }
    ++d.bins[static_cast<long>(std::floor(*b.score / bin_width + 1e-9))];
  });
  d.zero_fraction = d.n ? static_cast<double>(d.zeros) / static_cast<double>(d.n) : 0.0;
  return d;
}

inline const std::string kUncategorized = "Uncategorized";

// Supported fields: "discipline", "published_year".
inline std::optional<std::string> article_field(const ArticleRecord& a, std::string_view field) {
  if (field == "discipline") return a.discipline;
  if (field == "published_year") {
    if (!a.published) return std::nullopt;
    return std::to_string(int(std::chrono::year_month_day(*a.published).year()));
  }
  throw std::invalid_argument("unknown article field: " + std::string(field));
}

inline std::map<std::string, MedianCell> group_median_by(std::span<const BurstSequence> sequences,
                                                         const std::map<std::string, ArticleRecord>& articles,
                                                         std::string_view field = "discipline") {
  std::map<std::string, std::vector<double>> values;
  for_each_burst(sequences, [&](const Burst& b, const BurstGroup&, const BurstSequence& seq) {
    if (!b.score) return;
    std::optional<std::string> label;
    if (const auto it = articles.find(seq.article_id); it != articles.end()) label = article_field(it->second, field);
    values[label.value_or(kUncategorized)].push_back(*b.score);
  });
  std::map<std::string, MedianCell> out;
  for (const auto& [label, v] : values) out[label] = {v.size(), median(v)};
  return out;
}

struct PlatformRow {
  std::size_t n_bursts = 0;
  std::size_t n_scored = 0;
  std::optional<double> median_score;
  std::size_t mentions_total = 0;
  std::size_t mentions_in_bursts = 0;
  double pct_mentions_in_bursts = 0.0;
  FirstBurstRow first;
  CooccurrenceRow cooccurrence;
};

// Per-platform summary; mention totals come from the corpus.
inline std::map<Platform, PlatformRow> platform_report(std::span<const BurstSequence> sequences,
                                                       const std::map<Platform, std::size_t>& mention_totals) {
  std::map<Platform, PlatformRow> rows;
  std::map<Platform, std::vector<double>> scores;
  for_each_burst(sequences, [&](const Burst& b, const BurstGroup&, const BurstSequence&) {
    auto& r = rows[b.platform];
    ++r.n_bursts;
    r.mentions_in_bursts += b.size;
    if (b.score) scores[b.platform].push_back(*b.score);
  });
  const auto first = first_burst_distribution(sequences);
  const auto co = cooccurrence_comparison(sequences);
  for (auto& [p, r] : rows) {
    if (const auto it = scores.find(p); it != scores.end()) {
      r.n_scored = it->second.size();
      r.median_score = median(it->second);
    }
    if (const auto it = mention_totals.find(p); it != mention_totals.end()) r.mentions_total = it->second;
    r.pct_mentions_in_bursts =
        r.mentions_total ? 100.0 * static_cast<double>(r.mentions_in_bursts) / static_cast<double>(r.mentions_total)
                         : 0.0;
    r.first = first.at(p);
    r.cooccurrence = co.at(p);
  }
  return rows;
}

}  // namespace sciret
