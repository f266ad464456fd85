#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sciret/bursts.hpp"
#include "sciret/dumps.hpp"

using namespace sciret;
using std::chrono::days;

namespace {

const Day kDay0 = Day{std::chrono::year{2018} / 3 / 1};

DailySeries series(std::vector<int> counts, Platform p = Platform::Kind::Twitter, int offset = 0) {
  DailySeries s;
  s.article_id = "a";
  s.platform = p;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    const Day d = kDay0 + days(offset + static_cast<int>(i));
    s.counts[d] = counts[i];
    for (int k = 0; k < counts[i]; ++k) s.members[d].push_back(format_date(d) + "/" + std::to_string(k));
  }
  return s;
}

Burst burst(const Platform& p, int start, int end, const std::string& article = "a") {
  Burst b;
  b.article_id = article;
  b.platform = p;
  b.start_day = kDay0 + days(start);
  b.end_day = kDay0 + days(end);
  b.peak_day = b.start_day;
  b.size = 10;
  return b;
}

// Brute-force qualifying days straight from the definition.
std::set<Day> oracle_days(const DailySeries& s, const BurstParams& p) {
  std::set<Day> out;
  const int min_daily = p.min_daily_for(s.platform);
  for (const auto& [d, c] : s.counts) {
    if (c < min_daily) continue;
    double sum = 0;
    for (int k = -p.window; k <= p.window; ++k) {
      if (k == 0) continue;
      const auto it = s.counts.find(d + days(k));
      if (it != s.counts.end()) sum += it->second;
    }
    if (c >= p.elevation_ratio * sum / (2.0 * p.window)) out.insert(d);
  }
  return out;
}

}  // namespace

TEST(Threshold, HandDerivedValues) {
  EXPECT_EQ(platform_threshold(1000, 1000, 10), 10);
  EXPECT_EQ(platform_threshold(1, 1000000, 10), 1);
  EXPECT_EQ(platform_threshold(0, 1000000, 10), 1);
  EXPECT_EQ(platform_threshold(135494, 4956603, 10), 8);
  EXPECT_THROW(platform_threshold(10, 5, 10), std::invalid_argument);
}

TEST(Threshold, ShippedDefaultsFollowThePublishedTable) {
  const BurstParams p;
  EXPECT_EQ(p.min_daily_for(Platform::Kind::Blog), 7);
  EXPECT_EQ(p.min_daily_for(Platform::Kind::Facebook), 8);
  EXPECT_EQ(p.min_daily_for(Platform::Kind::News), 8);
  EXPECT_EQ(p.min_daily_for(Platform::Kind::Twitter), 9);
  EXPECT_EQ(p.min_daily_for(Platform::Kind::Wikipedia), 7);
  EXPECT_EQ(p.min_daily_for(Platform::other("reddit")), 10);
}

TEST(BurstParams, Validation) {
  BurstParams p;
  p.elevation_ratio = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.window = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.min_daily[Platform::Kind::News] = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(DetectBursts, EmptyAndFlatBelowMinimum) {
  const BurstParams p;
  EXPECT_TRUE(detect_bursts(series({}), p).empty());
  EXPECT_TRUE(detect_bursts(series(std::vector<int>(40, 8)), p).empty());
}

TEST(DetectBursts, SingleSpike) {
  std::vector<int> counts(30, 0);
  counts[15] = 50;
  const auto b = detect_bursts(series(counts), BurstParams{});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].start_day, kDay0 + days(15));
  EXPECT_EQ(b[0].end_day, b[0].start_day);
  EXPECT_EQ(b[0].peak_day, b[0].start_day);
  EXPECT_EQ(b[0].size, 50u);
  EXPECT_EQ(b[0].mention_ids.size(), 50u);
}

TEST(DetectBursts, ConstantSeriesInsideObservationWindow) {
  // Every neighbour day exists, so each day's surrounding mean equals its own count.
  BurstParams p;
  p.observation_start = kDay0;
  p.observation_end = kDay0 + days(59);
  EXPECT_TRUE(detect_bursts(series(std::vector<int>(60, 18)), p).empty());
  // Under the plain rule interior days still fail; only days near the series
  // edges, whose missing neighbours count as zero, can qualify.
  for (const auto& b : detect_bursts(series(std::vector<int>(60, 18)), BurstParams{})) {
    EXPECT_TRUE(b.end_day < kDay0 + days(7) || b.start_day > kDay0 + days(52));
  }
}

TEST(DetectBursts, UniformlyElevatedBlockDoesNotQualifyInside) {
  // 10 zeros, 30 days at 20, 10 zeros: interior days fail the elevation test.
  std::vector<int> counts(50, 0);
  for (int i = 10; i < 40; ++i) counts[i] = 20;
  const auto s = series(counts);
  const BurstParams p;
  const auto b = detect_bursts(s, p);
  std::set<Day> detected;
  for (const auto& x : b)
    for (Day d = x.start_day; d <= x.end_day; d += days(1)) detected.insert(d);
  EXPECT_EQ(detected, oracle_days(s, p));
  for (const auto& d : detected) EXPECT_TRUE(d < kDay0 + days(17) || d > kDay0 + days(32));
}

TEST(DetectBursts, AdjacentQualifyingDaysMergeWithEarliestPeak) {
  std::vector<int> counts(40, 0);
  counts[20] = 30;
  counts[21] = 40;
  counts[22] = 40;
  const auto b = detect_bursts(series(counts), BurstParams{});
  // Day 20: 30 >= 2 * 80/14; day 21: 40 >= 2 * 70/14; day 22 likewise.
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].start_day, kDay0 + days(20));
  EXPECT_EQ(b[0].end_day, kDay0 + days(22));
  EXPECT_EQ(b[0].peak_day, kDay0 + days(21));
  EXPECT_EQ(b[0].size, 110u);
}

TEST(DetectBursts, GapSplitsBursts) {
  std::vector<int> counts(60, 0);
  counts[10] = 20;
  counts[40] = 25;
  const auto b = detect_bursts(series(counts), BurstParams{});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_LT(b[0].end_day, b[1].start_day);
}

TEST(DetectBursts, PlatformMinimumApplies) {
  std::vector<int> counts(30, 0);
  counts[15] = 8;
  EXPECT_TRUE(detect_bursts(series(counts, Platform::Kind::Twitter), BurstParams{}).empty());
  EXPECT_EQ(detect_bursts(series(counts, Platform::Kind::News), BurstParams{}).size(), 1u);
}

TEST(DetectBursts, MatchesDefinitionOnRandomSeries) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> counts(60);
    for (auto& c : counts) c = rng() % 4 == 0 ? static_cast<int>(rng() % 30) : static_cast<int>(rng() % 3);
    const auto s = series(counts, trial % 2 ? Platform::Kind::News : Platform::Kind::Twitter);
    BurstParams p;
    p.window = 1 + static_cast<int>(rng() % 9);
    p.elevation_ratio = 1.5 + (rng() % 4) * 0.5;
    const auto bursts = detect_bursts(s, p);
    std::set<Day> detected;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < bursts.size(); ++i) {
      const auto& b = bursts[i];
      EXPECT_LE(b.start_day, b.peak_day);
      EXPECT_LE(b.peak_day, b.end_day);
      EXPECT_EQ(b.size, b.mention_ids.size());
      EXPECT_GE(s.counts.at(b.peak_day), p.min_daily_for(s.platform));
      if (i > 0) {
        EXPECT_GT(b.start_day - bursts[i - 1].end_day, days(1));
      }
      for (Day d = b.start_day; d <= b.end_day; d += days(1)) detected.insert(d);
      for (const auto& id : b.mention_ids) EXPECT_TRUE(ids.insert(id).second);
      for (Day d = b.start_day; d <= b.end_day; d += days(1))
        EXPECT_LE(s.counts.at(d), s.counts.at(b.peak_day));
      for (Day d = b.start_day; d < b.peak_day; d += days(1)) EXPECT_LT(s.counts.at(d), s.counts.at(b.peak_day));
    }
    EXPECT_EQ(detected, oracle_days(s, p));

    // Shifting the series shifts every burst by the same amount.
    const int k = static_cast<int>(rng() % 100);
    const auto shifted = detect_bursts(series(counts, s.platform, k), p);
    ASSERT_EQ(shifted.size(), bursts.size());
    for (std::size_t i = 0; i < bursts.size(); ++i) {
      EXPECT_EQ(shifted[i].start_day, bursts[i].start_day + days(k));
      EXPECT_EQ(shifted[i].end_day, bursts[i].end_day + days(k));
    }

    // Doubling keeps every burst day whose count already met the minimum.
    std::vector<int> doubled = counts;
    for (auto& c : doubled) c *= 2;
    const auto twice = detect_bursts(series(doubled, s.platform), p);
    std::set<Day> twice_days;
    for (const auto& b : twice)
      for (Day d = b.start_day; d <= b.end_day; d += days(1)) twice_days.insert(d);
    for (const auto& d : detected) EXPECT_TRUE(twice_days.contains(d));
  }
}

TEST(Grouping, SameDayBurstsOnTwoPlatformsFormOneGroup) {
  const auto groups = group_cooccurring({burst(Platform::Kind::News, 5, 5), burst(Platform::Kind::Twitter, 5, 5)});
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].platforms.size(), 2u);
  EXPECT_TRUE(groups[0].cooccurring());
  const auto seq = build_sequence("a", groups);
  EXPECT_EQ(seq.length(), 1u);
}

TEST(Grouping, DistantBurstsStaySeparate) {
  const auto groups = group_cooccurring({burst(Platform::Kind::News, 35, 35), burst(Platform::Kind::News, 5, 5)});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].anchor_day, kDay0 + days(5));
  EXPECT_FALSE(groups[0].cooccurring());
}

TEST(Grouping, TransitiveOverlapFormsOneGroup) {
  // A overlaps B, B overlaps C, A and C are disjoint.
  const auto groups = group_cooccurring({burst(Platform::Kind::Blog, 0, 2), burst(Platform::Kind::News, 2, 4),
                                         burst(Platform::Kind::Twitter, 4, 6)});
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].bursts.size(), 3u);
  EXPECT_EQ(groups[0].anchor_day, kDay0);
}

TEST(Grouping, SameStartModeIsStricter) {
  const std::vector<Burst> bursts = {burst(Platform::Kind::Blog, 0, 2), burst(Platform::Kind::News, 1, 3)};
  EXPECT_EQ(group_cooccurring(bursts, CooccurrenceMode::Overlap).size(), 1u);
  EXPECT_EQ(group_cooccurring(bursts, CooccurrenceMode::SameStart).size(), 2u);
}

TEST(Grouping, RejectsMixedArticles) {
  EXPECT_THROW(group_cooccurring({burst(Platform::Kind::Blog, 0, 0, "a"), burst(Platform::Kind::Blog, 9, 9, "b")}),
               std::invalid_argument);
}

TEST(Grouping, MatchesUnionFindOnRandomIntervals) {
  std::mt19937 rng(4);
  const Platform platforms[] = {Platform::Kind::Blog, Platform::Kind::News, Platform::Kind::Twitter,
                                Platform::Kind::Facebook, Platform::Kind::Wikipedia};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Burst> bursts;
    const std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      const int s = static_cast<int>(rng() % 40);
      bursts.push_back(burst(platforms[i % 5], s, s + static_cast<int>(rng() % 4)));
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (bursts[i].start_day <= bursts[j].end_day && bursts[j].start_day <= bursts[i].end_day)
          parent[find(i)] = find(j);
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) roots.insert(find(i));
    const auto groups = group_cooccurring(bursts);
    EXPECT_EQ(groups.size(), roots.size());
    const auto seq = build_sequence("a", groups);
    for (std::size_t g = 1; g < seq.groups.size(); ++g) EXPECT_LT(seq.groups[g - 1].anchor_day, seq.groups[g].anchor_day);
    for (std::size_t g = 0; g < seq.groups.size(); ++g) {
      Day earliest = seq.groups[g].bursts.front().start_day;
      for (const auto& b : seq.groups[g].bursts) {
        EXPECT_EQ(b.position, static_cast<int>(g + 1));
        earliest = std::min(earliest, b.start_day);
      }
      EXPECT_EQ(seq.groups[g].anchor_day, earliest);
    }
  }
}

TEST(Sequence, OrdersGroupsAndNumbersPositions) {
  std::vector<BurstGroup> groups;
  for (int start : {40, 0, 20}) groups.push_back(group_cooccurring({burst(Platform::Kind::News, start, start)})[0]);
  const auto seq = build_sequence("a", groups);
  ASSERT_EQ(seq.length(), 3u);
  EXPECT_EQ(seq.groups[0].anchor_day, kDay0);
  EXPECT_EQ(seq.groups[2].bursts[0].position, 3);
  EXPECT_EQ(seq.platform_count(), 1u);
}

TEST(Sequence, DuplicateAnchorsAreRejected) {
  std::vector<BurstGroup> groups = {group_cooccurring({burst(Platform::Kind::News, 3, 3)})[0],
                                    group_cooccurring({burst(Platform::Kind::Blog, 3, 3)})[0]};
  EXPECT_THROW(build_sequence("a", groups), std::invalid_argument);
}

TEST(Sequence, PlatformCountMayExceedLength) {
  const auto seq = build_sequence(
      "a", group_cooccurring({burst(Platform::Kind::News, 5, 5), burst(Platform::Kind::Twitter, 5, 6)}));
  EXPECT_EQ(seq.length(), 1u);
  EXPECT_EQ(seq.platform_count(), 2u);
}

TEST(Sequence, StoreWideBuildAndDumpRoundTrip) {
  std::vector<MentionRecord> mentions;
  auto add = [&](const std::string& article, Platform p, int day, int n) {
    for (int k = 0; k < n; ++k) {
      MentionRecord m;
      m.article_id = article;
      m.platform = p;
      m.day = kDay0 + days(day);
      m.mention_id = article + "/" + p.name() + "/" + std::to_string(day) + "/" + std::to_string(k);
      m.source_id = m.mention_id;
      mentions.push_back(m);
    }
  };
  add("a", Platform::Kind::News, 10, 12);
  add("a", Platform::Kind::Twitter, 10, 15);
  add("a", Platform::Kind::Blog, 40, 9);
  add("b", Platform::Kind::Twitter, 3, 2);
  const auto store = CorpusStore::from_records({{"a", "x", {}, {}, {}}, {"b", "y", {}, {}, {}}}, mentions);
  const auto seqs = build_sequences(store, BurstParams{});
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(seqs[0].length(), 2u);
  EXPECT_EQ(seqs[0].burst_count(), 3u);

  std::stringstream buf;
  write_burst_dump(buf, seqs);
  const auto back = read_burst_dump(buf);
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].length(), 2u);
  for (std::size_t g = 0; g < 2; ++g) {
    EXPECT_EQ(back[0].groups[g].anchor_day, seqs[0].groups[g].anchor_day);
    EXPECT_EQ(back[0].groups[g].bursts, seqs[0].groups[g].bursts);
  }
  buf.clear();
  buf.seekg(0);
  const auto first = nlohmann::json::parse(buf.str().substr(0, buf.str().find('\n')));
  EXPECT_EQ(first.at("group_id"), "a#1");
  EXPECT_TRUE(first.at("cooccurring").get<bool>());
}
