#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sciret/dates.hpp"
#include "sciret/platform.hpp"
#include "sciret/text.hpp"

namespace sciret {

struct ArticleRecord {
  std::string article_id;
  std::string abstract;
  std::optional<std::string> title;
  std::optional<Day> published;
  std::optional<std::string> discipline;

  friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

struct MentionRecord {
  std::string mention_id;
  std::string article_id;
  Platform platform;
  Day day{};                        // UTC calendar day of the timestamp
  std::string timestamp;            // as given
  std::optional<std::string> text;  // cleaned; absent when collection failed
  std::string source_id;
  std::optional<std::string> lang;
  bool english = true;  // filled in at ingest

  bool has_text() const { return text.has_value() && !text->empty(); }
  friend bool operator==(const MentionRecord&, const MentionRecord&) = default;
};

// Mention counts per calendar day for one (article, platform); days that are
// absent count as zero.
struct DailySeries {
  std::string article_id;
  Platform platform;
  std::map<Day, int> counts;
  std::map<Day, std::vector<std::string>> members;  // mention ids per day

  friend bool operator==(const DailySeries&, const DailySeries&) = default;
};

// ---------------------------------------------------------------------------
// Per-mention operations

// Two mentions are the same instance only if platform, source, cleaned text
// and day all coincide. A mention without text keys on its own id instead, as
// nothing shows that two text-less posts are the same post.
inline std::string dedup_key(const MentionRecord& m) {
  std::string key = m.platform.name();
  key += '\x1f';
  key += m.source_id;
  key += '\x1f';
  if (m.text.has_value()) {
    key += 'T';
    key += clean_text(*m.text);
  } else {
    key += 'I';
    key += m.mention_id;
  }
  key += '\x1f';
  key += format_date(m.day);
  return key;
}

using LanguageHeuristic = std::function<bool(std::string_view text)>;

// English if at least 5% of the tokens are English stopwords. Texts shorter
// than ten tokens are let through.
inline bool stopword_ratio_is_english(std::string_view text) {
  std::size_t words = 0, stop = 0;
  for (const auto& sentence : segment(text)) {
    for (const auto& w : sentence) {
      if (!detail::has_word_char(w)) continue;
      ++words;
      if (english_stopwords().contains(to_lower_ascii(w))) ++stop;
    }
  }
  if (words < 10) return true;
  return static_cast<double>(stop) >= 0.05 * static_cast<double>(words);
}

inline bool filter_language(const MentionRecord& m, const LanguageHeuristic& heuristic = stopword_ratio_is_english) {
  if (m.lang.has_value() && !m.lang->empty()) {
    const auto primary = to_lower_ascii(m.lang->substr(0, m.lang->find_first_of("-_")));
    return primary == "en";
  }
  if (!m.text.has_value()) return true;
  return heuristic ? heuristic(*m.text) : true;
}

// ---------------------------------------------------------------------------
// Ingest

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestConfig {
  std::size_t min_abstract_chars = 500;
  std::optional<Day> window_start;
  std::optional<Day> window_end;
  LanguageHeuristic language = stopword_ratio_is_english;
  std::size_t max_diagnostics = 50;
};

struct IngestStats {
  std::size_t articles_read = 0;
  std::size_t articles_kept = 0;
  std::size_t articles_invalid = 0;
  std::size_t articles_short = 0;
  std::size_t articles_duplicate = 0;
  std::size_t mentions_read = 0;
  std::size_t mentions_kept = 0;
  std::size_t mentions_invalid = 0;
  std::size_t mentions_unknown_article = 0;
  std::size_t mentions_duplicate = 0;
  std::size_t mentions_out_of_window = 0;
  std::size_t mentions_with_text = 0;
  std::size_t mentions_english = 0;
  std::vector<std::string> diagnostics;
};

// Immutable after ingest; safe for concurrent readers.
class CorpusStore {
 public:
  const std::map<std::string, ArticleRecord>& articles() const { return articles_; }
  const std::vector<MentionRecord>& mentions() const { return mentions_; }
  const IngestStats& stats() const { return stats_; }

  const ArticleRecord* article(const std::string& id) const {
    const auto it = articles_.find(id);
    return it == articles_.end() ? nullptr : &it->second;
  }

  // Mentions of one article, ordered by (day, platform, mention_id).
  std::span<const MentionRecord> mentions_of(const std::string& article_id) const {
    const auto it = ranges_.find(article_id);
    if (it == ranges_.end()) return {};
    return std::span<const MentionRecord>(mentions_).subspan(it->second.first, it->second.second);
  }

  // All series, ordered by (article_id, platform).
  const std::vector<DailySeries>& series() const { return series_; }

  std::vector<const DailySeries*> series_of(const std::string& article_id) const {
    std::vector<const DailySeries*> out;
    for (const auto& s : series_)
      if (s.article_id == article_id) out.push_back(&s);
    return out;
  }

  const DailySeries* series_for(const std::string& article_id, const Platform& platform) const {
    for (const auto& s : series_)
      if (s.article_id == article_id && s.platform == platform) return &s;
    return nullptr;
  }

  friend bool operator==(const CorpusStore& a, const CorpusStore& b) {
    return a.articles_ == b.articles_ && a.mentions_ == b.mentions_ && a.series_ == b.series_;
  }

  // Builds a store from already-validated records (duplicates are dropped).
  static CorpusStore from_records(std::vector<ArticleRecord> articles, std::vector<MentionRecord> mentions,
                                  IngestStats stats = {}) {
    CorpusStore store;
    store.stats_ = std::move(stats);
    for (auto& a : articles) store.articles_.emplace(a.article_id, std::move(a));
    std::sort(mentions.begin(), mentions.end(), [](const MentionRecord& x, const MentionRecord& y) {
      return std::tie(x.article_id, x.day, x.platform, x.mention_id) <
             std::tie(y.article_id, y.day, y.platform, y.mention_id);
    });
    store.mentions_ = std::move(mentions);
    for (std::size_t i = 0; i < store.mentions_.size();) {
      std::size_t j = i;
      while (j < store.mentions_.size() && store.mentions_[j].article_id == store.mentions_[i].article_id) ++j;
      store.ranges_.emplace(store.mentions_[i].article_id, std::make_pair(i, j - i));
      i = j;
    }
    std::map<std::pair<std::string, Platform>, DailySeries> series;
    for (const auto& m : store.mentions_) {
      auto& s = series[{m.article_id, m.platform}];
      s.article_id = m.article_id;
      s.platform = m.platform;
      s.counts[m.day] += 1;
      s.members[m.day].push_back(m.mention_id);
    }
    for (auto& [key, s] : series) store.series_.push_back(std::move(s));
    return store;
  }

 private:
  std::map<std::string, ArticleRecord> articles_;
  std::vector<MentionRecord> mentions_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> ranges_;
  std::vector<DailySeries> series_;
  IngestStats stats_;
};

namespace detail {

using nlohmann::json;

inline std::optional<std::string> optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

inline std::string required_string(const json& j, const char* key) {
  auto v = optional_string(j, key);
  if (!v || v->empty()) throw std::invalid_argument(std::string("missing required field '") + key + "'");
  return *v;
}

inline ArticleRecord parse_article(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  ArticleRecord a;
  a.article_id = required_string(j, "article_id");
  a.abstract = required_string(j, "abstract");
  a.title = optional_string(j, "title");
  if (auto p = optional_string(j, "published")) {
    a.published = parse_timestamp_day(*p);
    if (!a.published) throw std::invalid_argument("field 'published' is not an ISO-8601 date");
  }
  a.discipline = optional_string(j, "discipline");
  if (a.discipline && a.discipline->empty()) a.discipline.reset();
  return a;
}

inline MentionRecord parse_mention(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  MentionRecord m;
  m.mention_id = required_string(j, "mention_id");
  m.article_id = required_string(j, "article_id");
  m.platform = Platform::parse(required_string(j, "platform"));
  m.timestamp = required_string(j, "timestamp");
  const auto day = parse_timestamp_day(m.timestamp);
  if (!day) throw std::invalid_argument("field 'timestamp' is not ISO-8601");
  m.day = *day;
  m.source_id = required_string(j, "source_id");
  m.text = optional_string(j, "text");
  m.lang = optional_string(j, "lang");
  return m;
}

inline void note(IngestStats& stats, const IngestConfig& config, std::string message) {
  if (stats.diagnostics.size() < config.max_diagnostics) stats.diagnostics.push_back(std::move(message));
}

}  // namespace detail

// Reads line-delimited article and mention records. Bad lines, short
// abstracts, unknown articles, out-of-window mentions and duplicates are
// counted and skipped; only an unreadable stream is fatal.
inline CorpusStore ingest(std::istream& articles_in, std::istream& mentions_in, const IngestConfig& config = {}) {
  if (!articles_in) throw IngestError("articles stream is not readable");
  if (!mentions_in) throw IngestError("mentions stream is not readable");
  IngestStats stats;
  std::vector<ArticleRecord> articles;
  std::unordered_set<std::string> article_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(articles_in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++stats.articles_read;
    ArticleRecord a;
    try {
      a = detail::parse_article(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      ++stats.articles_invalid;
      detail::note(stats, config, "articles:" + std::to_string(line_no) + ": " + e.what());
      continue;
    }
    a.abstract = clean_text(a.abstract);
    if (a.abstract.size() < config.min_abstract_chars) {
      ++stats.articles_short;
      continue;
    }
    if (!article_ids.insert(a.article_id).second) {
      ++stats.articles_duplicate;
      continue;
    }
    articles.push_back(std::move(a));
  }
  if (articles_in.bad()) throw IngestError("error while reading articles stream");

  std::vector<MentionRecord> mentions;
  std::unordered_set<std::string> mention_ids, keys;
  line_no = 0;
  while (std::getline(mentions_in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++stats.mentions_read;
    MentionRecord m;
    try {
      m = detail::parse_mention(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      ++stats.mentions_invalid;
      detail::note(stats, config, "mentions:" + std::to_string(line_no) + ": " + e.what());
      continue;
    }
    if (!article_ids.contains(m.article_id)) {
      ++stats.mentions_unknown_article;
      continue;
    }
    if ((config.window_start && m.day < *config.window_start) || (config.window_end && m.day > *config.window_end)) {
      ++stats.mentions_out_of_window;
      continue;
    }
    if (m.text) m.text = clean_text(*m.text);
    if (mention_ids.contains(m.mention_id) || !keys.insert(dedup_key(m)).second) {
      ++stats.mentions_duplicate;
      continue;
    }
    mention_ids.insert(m.mention_id);
    m.english = filter_language(m, config.language);
    if (m.has_text()) ++stats.mentions_with_text;
    if (m.english) ++stats.mentions_english;
    mentions.push_back(std::move(m));
  }
  if (mentions_in.bad()) throw IngestError("error while reading mentions stream");

  stats.articles_kept = articles.size();
  stats.mentions_kept = mentions.size();
  return CorpusStore::from_records(std::move(articles), std::move(mentions), std::move(stats));
}

inline CorpusStore ingest_files(const std::string& articles_path, const std::string& mentions_path,
                                const IngestConfig& config = {}) {
  std::ifstream a(articles_path), m(mentions_path);
  if (!a) throw IngestError("cannot open articles file: " + articles_path);
  if (!m) throw IngestError("cannot open mentions file: " + mentions_path);
  return ingest(a, m, config);
}

}  // namespace sciret
