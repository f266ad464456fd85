#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sciret/bursts.hpp"
#include "sciret/dates.hpp"
#include "sciret/platform.hpp"
#include "sciret/stats.hpp"

namespace sciret {

struct PlannedBurst {
  Platform platform;
  int size = 0;      // mentions, split as evenly as possible over the days
  int duration = 1;  // consecutive days
};

struct PlannedGroup {
  std::vector<PlannedBurst> bursts;  // co-occurring: all start on the same day
  int gap_days = 30;                 // days after the previous group's anchor
};

struct ArticlePlan {
  std::vector<PlannedGroup> groups;
  std::optional<std::string> discipline;
};

// Random plan generation, used when SynthSpec::plans is empty.
struct PlanOptions {
  int min_length = 1;
  int max_length = 4;
  double cooccur_prob = 0.2;  // chance that a group spans several platforms
  int max_group_platforms = 3;
  int extra_size = 12;  // size drawn from [min_daily * duration, + extra_size]
  int max_duration = 2;
  int min_gap = 0;  // 0: derived from the burst window
  int max_gap = 0;
};

struct SynthSpec {
  std::size_t n_articles = 50;
  std::vector<std::pair<Platform, double>> platform_volumes = {
      {Platform::Kind::Twitter, 0.55}, {Platform::Kind::News, 0.15}, {Platform::Kind::Blog, 0.12},
      {Platform::Kind::Facebook, 0.12}, {Platform::Kind::Wikipedia, 0.06}};
  // Phrase inclusion probability by sequence position; the last entry is
  // reused for later positions.
  std::vector<double> decay_profile = {0.8, 0.5, 0.3, 0.2};
  // Added to the inclusion probability per distinct platform beyond the first.
  double platform_bonus = 0.0;
  std::vector<ArticlePlan> plans;
  PlanOptions plan_options;
  std::size_t phrases_per_abstract = 8;
  double text_missing_rate = 0.0;
  int background_mentions = 3;  // scattered single mentions outside bursts
  std::uint64_t seed = 1;
  Day start_day = Day{std::chrono::year{2017} / 1 / 1};
  BurstParams burst_params;
};

class SynthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlannedBurstRecord {
  std::string article_id;
  Platform platform;
  Day start_day{};
  Day end_day{};
  int position = 0;
  int size = 0;
  double inclusion = 0.0;
};

struct SyntheticCorpus {
  std::vector<nlohmann::json> articles;
  std::vector<nlohmann::json> mentions;
  std::vector<PlannedBurstRecord> planned;
  // Abstract phrases per article, as written into the abstract.
  std::map<std::string, std::vector<std::string>> phrases;
};

namespace detail {

inline const std::vector<std::string>& noun_bank() {
  static const std::vector<std::string> bank = {
      "tumor",     "cohort",   "protein",   "vaccine",   "membrane",   "neuron",    "enzyme",    "genome",
      "receptor",  "antibody", "pathway",   "mutation",  "lesion",     "biomarker", "cortex",    "plasma",
      "insulin",   "glucose",  "hormone",   "microbe",   "parasite",   "bacterium", "embryo",    "ligand",
      "peptide",   "kinase",   "neutron",   "photon",    "galaxy",     "planet",    "asteroid",  "glacier",
      "aquifer",   "sediment", "polymer",   "catalyst",  "solvent",    "alloy",     "magnet",    "laser",
      "sensor",    "battery",  "turbine",   "reactor",   "voltage",    "circuit",   "algorithm", "database",
      "server",    "robot",    "drone",     "satellite", "telescope",  "rainfall",  "drought",   "wildfire",
      "forest",    "wetland",  "coral",     "reef",      "fishery",    "livestock", "wheat",     "maize",
      "rice",      "soil",     "nitrogen",  "carbon",    "methane",    "ozone",     "aerosol",   "economy",
      "tariff",    "wage",     "pension",   "voter",     "election",   "parliament", "migration", "poverty",
      "literacy",  "school",   "teacher",   "student",   "curriculum", "nurse",     "surgeon",   "therapy",
      "dementia",  "stroke",   "obesity",   "caffeine",  "sleep",      "diet",      "placebo",   "dosage"};
  return bank;
}

// Sentence glue made only of closed-class words, so it never forms a phrase.
inline constexpr std::array<const char*, 4> kAbstractFrames = {
    "The %s and the %s are in the %s .", "There is the %s , with the %s and the %s .",
    "Both the %s and the %s are with the %s .", "It is about the %s , the %s and the %s ."};

inline constexpr std::array<const char*, 5> kMentionLeads = {"This is about", "So here it is about",
                                                             "We are all about", "It was about", "Here is what"};

inline std::string fill_frame(const char* frame, const std::vector<std::string>& parts) {
  std::string out;
  std::size_t k = 0;
  for (const char* p = frame; *p; ++p) {
    if (p[0] == '%' && p[1] == 's') {
      out += parts[k++ % parts.size()];
      ++p;
    } else {
      out += *p;
    }
  }
  return out;
}

inline Platform pick_platform(Rng& rng, const std::vector<std::pair<Platform, double>>& volumes,
                              const std::set<Platform>& exclude) {
  double total = 0.0;
  for (const auto& [p, w] : volumes)
    if (!exclude.contains(p)) total += w;
  if (total <= 0.0) throw SynthError("no platform left to draw from");
  double u = rng.uniform() * total;
  for (const auto& [p, w] : volumes) {
    if (exclude.contains(p)) continue;
    if (u < w) return p;
    u -= w;
  }
  for (auto it = volumes.rbegin(); it != volumes.rend(); ++it)
    if (!exclude.contains(it->first)) return it->first;
  throw SynthError("no platform left to draw from");
}

}  // namespace detail

inline ArticlePlan make_plan(Rng& rng, const SynthSpec& spec) {
  const auto& o = spec.plan_options;
  const int window = spec.burst_params.window;
  const int min_gap = o.min_gap > 0 ? o.min_gap : 2 * window + o.max_duration + 2;
  const int max_gap = std::max(min_gap, o.max_gap > 0 ? o.max_gap : min_gap + 20);
  ArticlePlan plan;
  const int length = rng.between(o.min_length, o.max_length);
  const int max_platforms = std::min<int>(o.max_group_platforms, static_cast<int>(spec.platform_volumes.size()));
  for (int g = 0; g < length; ++g) {
    PlannedGroup group;
    group.gap_days = g == 0 ? 0 : rng.between(min_gap, max_gap);
    const int n_platforms = max_platforms > 1 && rng.bernoulli(o.cooccur_prob) ? rng.between(2, max_platforms) : 1;
    std::set<Platform> used;
    for (int k = 0; k < n_platforms; ++k) {
      PlannedBurst b;
      b.platform = detail::pick_platform(rng, spec.platform_volumes, used);
      used.insert(b.platform);
      b.duration = rng.between(1, std::max(1, o.max_duration));
      const int floor_size = spec.burst_params.min_daily_for(b.platform) * b.duration;
      b.size = rng.between(floor_size, floor_size + std::max(0, o.extra_size));
      group.bursts.push_back(b);
    }
    plan.groups.push_back(std::move(group));
  }
  return plan;
}

// Builds articles whose abstracts are assembled from a phrase bank and
// mentions placed day by day so that every planned burst is exactly what
// burst detection recovers. Mentions at position p carry each abstract phrase
// independently with the position's inclusion probability.
inline SyntheticCorpus generate_synthetic(const SynthSpec& spec) {
  for (const double q : spec.decay_profile)
    if (q < 0.0 || q > 1.0) throw SynthError("inclusion probabilities must lie in [0, 1]");
  if (spec.decay_profile.empty()) throw SynthError("decay profile must not be empty");
  if (spec.text_missing_rate < 0.0 || spec.text_missing_rate > 1.0)
    throw SynthError("text_missing_rate must lie in [0, 1]");
  if (!spec.plans.empty() && spec.plans.size() != spec.n_articles)
    throw SynthError("explicit plans must cover every article");
  const auto& bank = detail::noun_bank();
  if (spec.phrases_per_abstract == 0 || spec.phrases_per_abstract * 2 > bank.size())
    throw SynthError("phrases_per_abstract out of range");
  spec.burst_params.validate();

  static const std::array<const char*, 4> kDisciplines = {"Biomedical Sciences", "Social Sciences",
                                                         "Physical Sciences", "General"};
  SyntheticCorpus corpus;
  const int window = spec.burst_params.window;
  for (std::size_t a = 0; a < spec.n_articles; ++a) {
    Rng rng(substream_seed(spec.seed, {a}));
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "10.5555/syn.%05zu", a);
    const std::string article_id = idbuf;

    ArticlePlan plan = spec.plans.empty() ? make_plan(rng, spec) : spec.plans[a];
    if (plan.groups.empty()) throw SynthError("article " + article_id + " has an empty burst plan");
    if (!plan.discipline && a % 5 != 4) plan.discipline = kDisciplines[a % 5 % kDisciplines.size()];

    // Phrases: 1-2 distinct bank words each, no word shared between phrases.
    std::vector<std::size_t> words(bank.size());
    for (std::size_t i = 0; i < words.size(); ++i) words[i] = i;
    for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[rng.index(i)]);
    std::vector<std::string> phrases;
    std::size_t next_word = 0;
    for (std::size_t k = 0; k < spec.phrases_per_abstract; ++k) {
      std::string phrase = bank[words[next_word++]];
      if (rng.bernoulli(0.5)) phrase += " " + bank[words[next_word++]];
      phrases.push_back(std::move(phrase));
    }

    std::string abstract;
    std::size_t cursor = 0;
    while (abstract.size() < 520 || cursor < phrases.size()) {
      const char* frame = detail::kAbstractFrames[rng.index(detail::kAbstractFrames.size())];
      std::vector<std::string> parts;
      for (int k = 0; k < 3; ++k)
        parts.push_back(cursor < phrases.size() ? phrases[cursor++] : phrases[rng.index(phrases.size())]);
      if (!abstract.empty()) abstract += ' ';
      abstract += detail::fill_frame(frame, parts);
    }
    nlohmann::json article{{"article_id", article_id},
                           {"title", "Synthetic study " + std::to_string(a)},
                           {"abstract", abstract},
                           {"published", format_date(spec.start_day)}};
    if (plan.discipline) article["discipline"] = *plan.discipline;
    corpus.articles.push_back(std::move(article));
    corpus.phrases[article_id] = phrases;

    std::set<Platform> seq_platforms;
    for (const auto& g : plan.groups)
      for (const auto& b : g.bursts) seq_platforms.insert(b.platform);
    const double bonus = spec.platform_bonus * static_cast<double>(seq_platforms.size() - 1);

    std::size_t mention_counter = 0;
    auto emit_mention = [&](const Platform& platform, Day day, double inclusion) {
      char mid[64];
      std::snprintf(mid, sizeof mid, "%s/m%06zu", article_id.c_str(), mention_counter);
      nlohmann::json m{{"mention_id", mid},
                       {"article_id", article_id},
                       {"platform", platform.name()},
                       {"timestamp", format_date(day) + "T12:00:00Z"},
                       {"source_id", "src-" + std::to_string(a) + "-" + std::to_string(mention_counter)},
                       {"lang", "en"}};
      ++mention_counter;
      if (rng.bernoulli(spec.text_missing_rate)) {
        m["text"] = nullptr;
      } else {
        std::string text = detail::kMentionLeads[rng.index(detail::kMentionLeads.size())];
        bool any = false;
        for (const auto& p : phrases) {
          if (!rng.bernoulli(inclusion)) continue;
          text += any ? " , and the " : " the ";
          text += p;
          any = true;
        }
        if (!any) text += " it";
        text += " .";
        m["text"] = text;
      }
      corpus.mentions.push_back(std::move(m));
    };

    Day anchor = spec.start_day + std::chrono::days{60 + static_cast<int>(rng.index(30))};
    Day first_anchor = anchor;
    int previous_span = 0;
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
      const auto& group = plan.groups[g];
      if (group.bursts.empty()) throw SynthError("article " + article_id + " has an empty burst group");
      if (g > 0) {
        if (group.gap_days <= 2 * window + previous_span)
          throw SynthError("article " + article_id + ": gap of " + std::to_string(group.gap_days) +
                           " days lets neighbouring bursts interfere");
        anchor += std::chrono::days{group.gap_days};
      }
      const double q = std::clamp(spec.decay_profile[std::min(g, spec.decay_profile.size() - 1)] + bonus, 0.0, 1.0);
      std::set<Platform> seen;
      previous_span = 0;
      for (const auto& b : group.bursts) {
        if (!seen.insert(b.platform).second)
          throw SynthError("article " + article_id + " repeats a platform within one group");
        if (b.duration < 1) throw SynthError("article " + article_id + ": burst duration must be >= 1");
        const int min_daily = spec.burst_params.min_daily_for(b.platform);
        const int base = b.size / b.duration, extra = b.size % b.duration;
        if (base < min_daily)
          throw SynthError("article " + article_id + ": burst of " + std::to_string(b.size) + " mentions over " +
                           std::to_string(b.duration) + " day(s) on " + b.platform.name() +
                           " falls below the daily minimum " + std::to_string(min_daily));
        // Elevation within a multi-day burst: the smallest day must clear the
        // surrounding mean formed by its sibling days.
        if (b.duration > 1 &&
            static_cast<double>(base) < spec.burst_params.elevation_ratio * static_cast<double>(b.size - base) /
                                            (2.0 * window))
          throw SynthError("article " + article_id + ": multi-day burst is too uneven to be detected");
        for (int d = 0; d < b.duration; ++d) {
          const int count = base + (d < extra ? 1 : 0);
          for (int k = 0; k < count; ++k) emit_mention(b.platform, anchor + std::chrono::days{d}, q);
        }
        corpus.planned.push_back({article_id, b.platform, anchor, anchor + std::chrono::days{b.duration - 1},
                                  static_cast<int>(g + 1), b.size, q});
        previous_span = std::max(previous_span, b.duration);
      }
    }

    // Scattered single mentions well before the first burst.
    for (int k = 0; k < spec.background_mentions; ++k) {
      const auto& platform = detail::pick_platform(rng, spec.platform_volumes, {});
      if (spec.burst_params.min_daily_for(platform) <= spec.background_mentions) continue;
      const Day day = first_anchor - std::chrono::days{window + 2 + static_cast<int>(rng.index(40))};
      emit_mention(platform, day, spec.decay_profile.back());
    }
  }
  return corpus;
}

inline void write_jsonl(std::ostream& out, const std::vector<nlohmann::json>& records) {
  for (const auto& r : records) out << r.dump() << '\n';
}

inline void write_plan(std::ostream& out, const std::vector<PlannedBurstRecord>& planned) {
  for (const auto& p : planned)
    out << nlohmann::json{{"article_id", p.article_id},
                          {"platform", p.platform.name()},
                          {"start_day", format_date(p.start_day)},
                          {"end_day", format_date(p.end_day)},
                          {"position", p.position},
                          {"size", p.size},
                          {"inclusion", p.inclusion}}
                   .dump()
        << '\n';
}

}  // namespace sciret
