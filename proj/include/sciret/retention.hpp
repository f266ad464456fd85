#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sciret/keyphrase.hpp"
#include "sciret/stats.hpp"
#include "sciret/text.hpp"

namespace sciret {

struct RetentionScore {
  double value = 0.0;
  Method method = Method::TextRank;
  std::size_t matched = 0;
  std::size_t total = 0;
};

namespace detail {

inline std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(std::move(w));
  return out;
}

inline bool contains_run(std::span<const std::string> haystack, std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

}  // namespace detail

// True iff the phrase's lemma sequence occurs contiguously in the mention.
inline bool match_phrase(const Keyphrase& phrase, std::span<const std::string> mention_lemmas) {
  const auto needle = detail::split_spaces(to_lower_ascii(phrase.lemma_form));
  return detail::contains_run(mention_lemmas, needle);
}

// Precomputed phrase lemma sequences for scoring many mentions of one article.
class PhraseMatcher {
 public:
  explicit PhraseMatcher(const KeyphraseSet& set) : set_(&set) {
    if (!(set.total_rank > 0.0)) throw std::invalid_argument("keyphrase set has zero total rank");
    phrases_.reserve(set.phrases.size());
    for (const auto& p : set.phrases) phrases_.push_back(detail::split_spaces(to_lower_ascii(p.lemma_form)));
  }

  RetentionScore score_lemmas(std::span<const std::string> lemmas) const {
    RetentionScore s{0.0, set_->method, 0, set_->phrases.size()};
    if (lemmas.empty()) return s;
    double mass = 0.0;
    for (std::size_t i = 0; i < phrases_.size(); ++i) {
      if (detail::contains_run(lemmas, phrases_[i])) {
        mass += set_->phrases[i].rank;
        ++s.matched;
      }
    }
    s.value = s.matched == phrases_.size() ? 1.0 : std::clamp(mass / set_->total_rank, 0.0, 1.0);
    return s;
  }

  RetentionScore score_text(std::string_view text, const Tagger& tagger = default_tagger()) const {
    const auto lemmas = document_lemmas(clean_text(text), tagger);
    return score_lemmas(lemmas);
  }

 private:
  const KeyphraseSet* set_;
  std::vector<std::vector<std::string>> phrases_;
};

// Rank mass of the abstract keyphrases found in the mention over the rank
// mass of all abstract keyphrases.
inline RetentionScore score_mention(const KeyphraseSet& keyphrases, std::string_view mention_text,
                                    const Tagger& tagger = default_tagger()) {
  return PhraseMatcher(keyphrases).score_text(mention_text, tagger);
}

// Median of the mention scores in a burst; nullopt marks a burst without any
// scorable mention.
inline std::optional<double> score_burst(std::span<const double> scores) {
  if (scores.empty()) return std::nullopt;
  return median(scores);
}

inline std::optional<double> score_burst(std::span<const RetentionScore> scores) {
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.value);
  return score_burst(std::span<const double>(values));
}

// Diagnostic variant: scores the burst's texts as a single document.
inline double score_burst_concat(const KeyphraseSet& keyphrases, std::span<const std::string> mention_texts,
                                 const Tagger& tagger = default_tagger()) {
  if (mention_texts.empty()) throw std::invalid_argument("score_burst_concat needs at least one text");
  std::string joined;
  for (std::size_t i = 0; i < mention_texts.size(); ++i) {
    if (i) joined += " . ";
    joined += mention_texts[i];
  }
  return score_mention(keyphrases, joined, tagger).value;
}

}  // namespace sciret
