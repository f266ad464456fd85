#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sciret/corpus.hpp"
#include "sciret/dates.hpp"
#include "sciret/platform.hpp"

namespace sciret {

// Per-platform daily minimum as ceil(base * ln(n_platform) / ln(n_total)),
// never below 1.
inline int platform_threshold(long long n_platform, long long n_total, int base = 10) {
  if (n_platform < 0 || n_total < 2 || n_platform > n_total)
    throw std::invalid_argument("platform_threshold needs 0 <= n_platform <= n_total and n_total >= 2");
  if (n_platform <= 1) return 1;
  const double ratio = std::log(static_cast<double>(n_platform)) / std::log(static_cast<double>(n_total));
  return std::max(1, static_cast<int>(std::ceil(static_cast<double>(base) * ratio)));
}

enum class CooccurrenceMode {
  Overlap,    // day ranges intersect
  SameStart,  // identical start day
};

struct BurstParams {
  int base_threshold = 10;
  std::map<Platform, int> min_daily = default_min_daily();
  double elevation_ratio = 2.0;
  int window = 7;
  int min_burst_mentions = 1;
  // When set, the surrounding-day mean only uses neighbour days inside this
  // range; otherwise it is always taken over exactly 2 * window days.
  std::optional<Day> observation_start;
  std::optional<Day> observation_end;
  CooccurrenceMode cooccurrence = CooccurrenceMode::Overlap;

  // Daily minimums used for the burst framework's weighted platforms.
  static std::map<Platform, int> default_min_daily() {
    return {{Platform::Kind::Blog, 7},
            {Platform::Kind::Facebook, 8},
            {Platform::Kind::News, 8},
            {Platform::Kind::Twitter, 9},
            {Platform::Kind::Wikipedia, 7}};
  }

  int min_daily_for(const Platform& p) const {
    const auto it = min_daily.find(p);
    return it == min_daily.end() ? base_threshold : it->second;
  }

  void validate() const {
    if (base_threshold < 1) throw std::invalid_argument("base_threshold must be >= 1");
    for (const auto& [p, v] : min_daily)
      if (v < 1) throw std::invalid_argument("min_daily for " + p.name() + " must be >= 1");
    if (!(elevation_ratio > 1.0)) throw std::invalid_argument("elevation ratio must be > 1");
    if (window < 1) throw std::invalid_argument("burst window must be >= 1 day");
    if (min_burst_mentions < 1) throw std::invalid_argument("min_burst_mentions must be >= 1");
    if (observation_start && observation_end && *observation_end < *observation_start)
      throw std::invalid_argument("observation window ends before it starts");
  }
};

struct Burst {
  std::string article_id;
  Platform platform;
  Day start_day{};
  Day end_day{};
  Day peak_day{};
  std::vector<std::string> mention_ids;
  std::size_t size = 0;
  std::optional<double> score;
  std::optional<int> position;

  friend bool operator==(const Burst&, const Burst&) = default;
};

struct BurstGroup {
  std::vector<Burst> bursts;  // ordered by (start_day, platform)
  Day anchor_day{};
  std::set<Platform> platforms;

  bool cooccurring() const { return bursts.size() >= 2; }
};

struct BurstSequence {
  std::string article_id;
  std::vector<BurstGroup> groups;  // anchor days strictly increasing

  std::size_t length() const { return groups.size(); }
  std::size_t platform_count() const {
    std::set<Platform> all;
    for (const auto& g : groups) all.insert(g.platforms.begin(), g.platforms.end());
    return all.size();
  }
  std::size_t burst_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.bursts.size();
    return n;
  }
};

// A day qualifies when its count reaches the platform minimum and is at least
// elevation_ratio times the mean count of the surrounding days [d-w, d+w]
// (d excluded, absent days zero). Runs of consecutive qualifying days merge
// into one burst; the peak is the earliest day with the maximum count.
inline std::vector<Burst> detect_bursts(const DailySeries& series, const BurstParams& params) {
  params.validate();
  const int min_daily = params.min_daily_for(series.platform);
  const std::chrono::days w{params.window};

  std::vector<Day> qualifying;
  for (const auto& [day, count] : series.counts) {
    if (count < min_daily) continue;
    Day lo = day - w, hi = day + w;
    double span_days = 2.0 * params.window;
    if (params.observation_start || params.observation_end) {
      if (params.observation_start) lo = std::max(lo, *params.observation_start);
      if (params.observation_end) hi = std::min(hi, *params.observation_end);
      span_days = hi < lo ? 0.0 : static_cast<double>((hi - lo).count() + 1) - (day >= lo && day <= hi ? 1.0 : 0.0);
    }
    double surrounding = 0.0;
    for (auto it = series.counts.lower_bound(lo); it != series.counts.end() && it->first <= hi; ++it)
      if (it->first != day) surrounding += it->second;
    const double mean = span_days > 0.0 ? surrounding / span_days : 0.0;
    if (static_cast<double>(count) >= params.elevation_ratio * mean) qualifying.push_back(day);
  }

  std::vector<Burst> bursts;
  for (std::size_t i = 0; i < qualifying.size();) {
    std::size_t j = i;
    while (j + 1 < qualifying.size() && qualifying[j + 1] - qualifying[j] == std::chrono::days{1}) ++j;
    Burst b;
    b.article_id = series.article_id;
    b.platform = series.platform;
    b.start_day = qualifying[i];
    b.end_day = qualifying[j];
    int peak_count = -1;
    for (std::size_t k = i; k <= j; ++k) {
      const Day d = qualifying[k];
      const int c = series.counts.at(d);
      b.size += static_cast<std::size_t>(c);
      if (c > peak_count) {
        peak_count = c;
        b.peak_day = d;
      }
      if (const auto m = series.members.find(d); m != series.members.end())
        b.mention_ids.insert(b.mention_ids.end(), m->second.begin(), m->second.end());
    }
    if (b.size >= static_cast<std::size_t>(params.min_burst_mentions)) bursts.push_back(std::move(b));
    i = j + 1;
  }
  return bursts;
}

// Connected components of the co-occurrence relation, ordered by anchor day.
inline std::vector<BurstGroup> group_cooccurring(std::vector<Burst> bursts,
                                                 CooccurrenceMode mode = CooccurrenceMode::Overlap) {
  if (bursts.empty()) return {};
  for (const auto& b : bursts)
    if (b.article_id != bursts.front().article_id)
      throw std::invalid_argument("group_cooccurring expects bursts of a single article");
  std::sort(bursts.begin(), bursts.end(), [](const Burst& a, const Burst& b) {
    return std::tie(a.start_day, a.platform, a.end_day) < std::tie(b.start_day, b.platform, b.end_day);
  });

  std::vector<BurstGroup> groups;
  Day reach{};
  for (auto& b : bursts) {
    const bool joins = !groups.empty() && (mode == CooccurrenceMode::Overlap ? b.start_day <= reach
                                                                              : b.start_day == groups.back().anchor_day);
    if (!joins) {
      groups.emplace_back();
      groups.back().anchor_day = b.start_day;
      reach = b.end_day;
    }
    reach = std::max(reach, b.end_day);
    groups.back().platforms.insert(b.platform);
    groups.back().bursts.push_back(std::move(b));
  }
  return groups;
}

// Orders groups by anchor day and numbers every member burst 1..length.
inline BurstSequence build_sequence(std::string article_id, std::vector<BurstGroup> groups) {
  std::sort(groups.begin(), groups.end(),
            [](const BurstGroup& a, const BurstGroup& b) { return a.anchor_day < b.anchor_day; });
  for (std::size_t i = 1; i < groups.size(); ++i)
    if (groups[i].anchor_day == groups[i - 1].anchor_day)
      throw std::invalid_argument("two burst groups share anchor day " + format_date(groups[i].anchor_day) +
                                  " in " + article_id);
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (auto& b : groups[i].bursts) {
      if (b.article_id != article_id) throw std::invalid_argument("burst from another article in sequence");
      b.position = static_cast<int>(i + 1);
    }
  return BurstSequence{std::move(article_id), std::move(groups)};
}

// Detection, grouping and sequencing for every article in the store that has
// at least one burst. Output is ordered by article id.
inline std::vector<BurstSequence> build_sequences(const CorpusStore& store, const BurstParams& params) {
  std::vector<BurstSequence> out;
  std::map<std::string, std::vector<Burst>> by_article;
  for (const auto& s : store.series()) {
    auto found = detect_bursts(s, params);
    auto& dst = by_article[s.article_id];
    dst.insert(dst.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  for (auto& [id, bursts] : by_article) {
    if (bursts.empty()) continue;
    out.push_back(build_sequence(id, group_cooccurring(std::move(bursts), params.cooccurrence)));
  }
  return out;
}

}  // namespace sciret
