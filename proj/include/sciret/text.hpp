#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sciret/platform.hpp"

namespace sciret {

// ---------------------------------------------------------------------------
// Cleaning

namespace detail {

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool istarts_with(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const char a = static_cast<char>(std::tolower(static_cast<unsigned char>(s[pos + i])));
    if (a != prefix[i]) return false;
  }
  return true;
}

}  // namespace detail

// Strips URLs (http://, https://, www.), drops control characters, collapses
// whitespace runs to one space and trims. Idempotent.
inline std::string clean_text(std::string_view raw) {
  // Control characters go first so that removing them can never splice
  // together a URL that the next step would miss.
  std::string no_ctrl;
  no_ctrl.reserve(raw.size());
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (detail::is_space(c)) {
      no_ctrl.push_back(' ');
    } else if (c < 0x20 || c == 0x7f) {
      continue;
    } else {
      no_ctrl.push_back(ch);
    }
  }

  std::string no_urls;
  no_urls.reserve(no_ctrl.size());
  for (std::size_t i = 0; i < no_ctrl.size();) {
    if (detail::istarts_with(no_ctrl, i, "http://") || detail::istarts_with(no_ctrl, i, "https://") ||
        detail::istarts_with(no_ctrl, i, "www.")) {
      while (i < no_ctrl.size() && no_ctrl[i] != ' ') ++i;
      no_urls.push_back(' ');
      continue;
    }
    no_urls.push_back(no_ctrl[i++]);
  }

  std::string out;
  out.reserve(no_urls.size());
  bool pending_space = false;
  for (const char ch : no_urls) {
    if (ch == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stopwords

inline const std::unordered_set<std::string>& english_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "among", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing", "down",
      "during", "each", "either", "few", "for", "from", "further", "had", "has", "have",
      "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
      "however", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "may", "me",
      "might", "more", "most", "must", "my", "myself", "no", "nor", "not", "now", "of", "off",
      "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
      "per", "same", "shall", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
      "those", "through", "thus", "to", "too", "under", "until", "up", "upon", "us", "very",
      "via", "was", "we", "were", "what", "when", "where", "whether", "which", "while", "who",
      "whom", "whose", "why", "will", "with", "within", "without", "would", "yet", "you",
      "your", "yours", "yourself", "yourselves"};
  return words;
}

// ---------------------------------------------------------------------------
// Tokens

enum class Pos { Noun, Propn, Adj, Verb, Num, Other };

inline std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Propn: return "PROPN";
    case Pos::Adj: return "ADJ";
    case Pos::Verb: return "VERB";
    case Pos::Num: return "NUM";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

// Tokens that may appear in keyphrases and lemma graphs.
inline bool is_content(Pos pos) {
  return pos == Pos::Noun || pos == Pos::Propn || pos == Pos::Adj || pos == Pos::Num;
}

struct Token {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::Other;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;  // document-wide ordinal
};

namespace detail {

inline bool is_ascii_alpha(unsigned char c) { return (c | 0x20) >= 'a' && (c | 0x20) <= 'z'; }
inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

inline bool has_word_char(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return is_ascii_alpha(c) || is_digit(c) || c >= 0x80;
  });
}

inline bool looks_numeric(std::string_view s) {
  if (s.empty()) return false;
  const auto c0 = static_cast<unsigned char>(s[0]);
  if (is_digit(c0)) return true;
  return s.size() > 1 && (c0 == '-' || c0 == '+' || c0 == '.') &&
         is_digit(static_cast<unsigned char>(s[1]));
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> set = {
      "e.g.", "i.e.", "al.", "fig.", "figs.", "vs.", "etc.", "approx.", "dr.", "mr.", "mrs.",
      "ms.", "prof.", "no.", "vol.", "eq.", "cf.", "ca.", "st.", "jr.", "sr.", "inc.", "ltd.",
      "co.", "dept.", "univ.", "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.",
      "sept.", "oct.", "nov.", "dec.", "resp.", "ref.", "refs."};
  return set;
}

// "U.S.", "e.g.", or a single capital initial such as "J.".
inline bool is_abbreviation(std::string_view with_period) {
  if (abbreviations().contains(to_lower_ascii(with_period))) return true;
  if (with_period.size() == 2 && is_upper(static_cast<unsigned char>(with_period[0]))) return true;
  std::size_t segments = 0, i = 0;
  while (i < with_period.size()) {
    std::size_t letters = 0;
    while (i < with_period.size() && is_ascii_alpha(static_cast<unsigned char>(with_period[i]))) {
      ++i;
      ++letters;
    }
    if (letters == 0 || letters > 2 || i >= with_period.size() || with_period[i] != '.') return false;
    ++i;
    ++segments;
  }
  return segments >= 2;
}

inline bool is_leading_punct(unsigned char c) {
  return c == '"' || c == '\'' || c == '(' || c == '[' || c == '{' || c == '<' || c == '`';
}
inline bool is_trailing_punct(unsigned char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}' || c == '>' || c == ',' ||
         c == ';' || c == ':' || c == '!' || c == '?' || c == '.' || c == '`';
}
inline bool is_inner_break(unsigned char c) {
  return c == ',' || c == ';' || c == ':' || c == '(' || c == ')' || c == '[' || c == ']' ||
         c == '{' || c == '}' || c == '"' || c == '!' || c == '?';
}

// Multi-byte curly quotes and dashes, treated like their ASCII counterparts.
inline std::size_t utf8_punct_len(std::string_view s, std::size_t pos) {
  static constexpr std::array<std::string_view, 6> kMarks = {
      "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x94",
      "\xE2\x80\xA6"};
  for (const auto mark : kMarks)
    if (s.substr(pos, mark.size()) == mark) return mark.size();
  return 0;
}

inline std::size_t utf8_punct_len_before(std::string_view s, std::size_t end) {
  if (end < 3) return 0;
  return utf8_punct_len(s, end - 3) == 3 ? 3 : 0;
}

struct Piece {
  std::string text;
  bool punct = false;
};

// Splits one whitespace-free chunk into word and punctuation pieces. Internal
// hyphens, periods, percent signs and digit-separating ',;:' stay inside the
// word so that "95%CI", "0.03;0.22" and "placebo-controlled" survive intact.
inline void split_chunk(std::string_view chunk, std::vector<Piece>& out) {
  std::vector<Piece> lead, trail;
  std::size_t b = 0, e = chunk.size();
  while (b < e) {
    if (is_leading_punct(static_cast<unsigned char>(chunk[b]))) {
      lead.push_back({std::string(1, chunk[b]), true});
      ++b;
    } else if (const auto n = utf8_punct_len(chunk, b); n > 0 && b + n <= e) {
      lead.push_back({std::string(chunk.substr(b, n)), true});
      b += n;
    } else {
      break;
    }
  }
  while (e > b) {
    const auto c = static_cast<unsigned char>(chunk[e - 1]);
    if (c == '.' && e - b >= 2 && has_word_char(chunk.substr(b, e - b - 1)) &&
        is_abbreviation(chunk.substr(b, e - b))) {
      break;
    }
    if (is_trailing_punct(c)) {
      // Group runs of the same mark ("...", "?!" stays two pieces).
      std::size_t s = e - 1;
      while (s > b && chunk[s - 1] == chunk[e - 1]) --s;
      trail.push_back({std::string(chunk.substr(s, e - s)), true});
      e = s;
    } else if (const auto n = utf8_punct_len_before(chunk, e); n > 0 && e - n >= b) {
      trail.push_back({std::string(chunk.substr(e - n, n)), true});
      e -= n;
    } else {
      break;
    }
  }
  for (auto& p : lead) out.push_back(std::move(p));

  std::string_view core = chunk.substr(b, e - b);
  std::size_t start = 0;
  auto emit_word = [&](std::string_view w) {
    if (w.empty()) return;
    // Possessive clitic becomes its own token.
    if (w.size() > 2 && (ends_with(w, "'s") || ends_with(w, "'S"))) {
      out.push_back({std::string(w.substr(0, w.size() - 2)), false});
      out.push_back({std::string(w.substr(w.size() - 2)), true});
      return;
    }
    if (w.size() > 4 && ends_with(w, "\xE2\x80\x99s")) {
      out.push_back({std::string(w.substr(0, w.size() - 4)), false});
      out.push_back({std::string(w.substr(w.size() - 4)), true});
      return;
    }
    out.push_back({std::string(w), !has_word_char(w)});
  };
  for (std::size_t i = 0; i < core.size(); ++i) {
    const auto c = static_cast<unsigned char>(core[i]);
    if (!is_inner_break(c)) continue;
    const bool digit_sep = (c == ',' || c == ';' || c == ':') && i > 0 && i + 1 < core.size() &&
                           is_digit(static_cast<unsigned char>(core[i - 1])) &&
                           is_digit(static_cast<unsigned char>(core[i + 1]));
    if (digit_sep) continue;
    emit_word(core.substr(start, i - start));
    out.push_back({std::string(1, core[i]), true});
    start = i + 1;
  }
  emit_word(core.substr(start));

  for (auto it = trail.rbegin(); it != trail.rend(); ++it) out.push_back(std::move(*it));
}

inline bool is_terminal(const Piece& p) {
  return p.punct && !p.text.empty() &&
         std::all_of(p.text.begin(), p.text.end(), [](char c) { return c == '.' || c == '!' || c == '?'; });
}

}  // namespace detail

// Sentence segmentation and tokenization. Sentences end at '.', '!' or '?'
// pieces; abbreviations keep their period and do not end a sentence.
inline std::vector<std::vector<std::string>> segment(std::string_view document) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  std::vector<detail::Piece> pieces;
  std::size_t i = 0;
  while (i < document.size()) {
    while (i < document.size() && detail::is_space(static_cast<unsigned char>(document[i]))) ++i;
    const std::size_t start = i;
    while (i < document.size() && !detail::is_space(static_cast<unsigned char>(document[i]))) ++i;
    if (start == i) break;
    pieces.clear();
    detail::split_chunk(document.substr(start, i - start), pieces);
    for (auto& p : pieces) {
      const bool terminal = detail::is_terminal(p);
      if (current.empty() && p.punct && !sentences.empty() &&
          !detail::is_leading_punct(static_cast<unsigned char>(p.text[0]))) {
        // A stray mark at a sentence start belongs to the previous sentence.
        sentences.back().push_back(std::move(p.text));
        continue;
      }
      current.push_back(std::move(p.text));
      if (terminal) {
        sentences.push_back(std::move(current));
        current.clear();
      }
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

// ---------------------------------------------------------------------------
// Lemmatization

namespace detail {

inline const std::unordered_map<std::string, std::string>& lemma_exceptions() {
  static const std::unordered_map<std::string, std::string> map = {
      {"children", "child"},        {"women", "woman"},         {"men", "man"},
      {"people", "people"},         {"mice", "mouse"},          {"feet", "foot"},
      {"teeth", "tooth"},           {"analyses", "analysis"},   {"diagnoses", "diagnosis"},
      {"hypotheses", "hypothesis"}, {"theses", "thesis"},       {"crises", "crisis"},
      {"syntheses", "synthesis"},   {"prognoses", "prognosis"}, {"criteria", "criterion"},
      {"phenomena", "phenomenon"},  {"data", "data"},           {"media", "media"},
      {"news", "news"},             {"series", "series"},       {"species", "species"},
      {"diabetes", "diabetes"},     {"measles", "measles"},     {"mumps", "mumps"},
      {"lens", "lens"},             {"gas", "gas"},             {"bias", "bias"},
      {"biases", "bias"},           {"viruses", "virus"},       {"statuses", "status"},
      {"indices", "index"},         {"matrices", "matrix"},     {"vertices", "vertex"},
      {"appendices", "appendix"},   {"economics", "economics"}, {"physics", "physics"},
      {"mathematics", "mathematics"}, {"genetics", "genetics"}, {"ethics", "ethics"},
      {"politics", "politics"},     {"lives", "life"},          {"wives", "wife"},
      {"leaves", "leaf"},           {"halves", "half"},         {"selves", "self"}};
  return map;
}

inline std::string depluralize(const std::string& w) {
  if (auto it = lemma_exceptions().find(w); it != lemma_exceptions().end()) return it->second;
  if (w.size() <= 3) return w;
  if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") ||
      ends_with(w, "xes") || ends_with(w, "zzes"))
    return w.substr(0, w.size() - 2);
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is"))
    return w.substr(0, w.size() - 1);
  return w;
}

}  // namespace detail

// Lowercase, suffix-stripping lemmatizer. The result depends on the surface
// form only, so the same word gets the same lemma in abstracts and mentions
// regardless of how it was tagged.
inline std::string lemmatize(std::string_view surface) {
  std::string lower = to_lower_ascii(surface);
  if (lower.empty()) return lower;
  if (detail::looks_numeric(lower)) return lower;
  if (std::none_of(lower.begin(), lower.end(),
                   [](char c) { return detail::is_ascii_alpha(static_cast<unsigned char>(c)); }))
    return lower;
  if (lower == "\xE2\x80\x99s") return "'s";
  const auto hyphen = lower.rfind('-');
  if (hyphen != std::string::npos && hyphen + 1 < lower.size())
    return lower.substr(0, hyphen + 1) + detail::depluralize(lower.substr(hyphen + 1));
  return detail::depluralize(lower);
}

// ---------------------------------------------------------------------------
// Tagging

struct TaggedWord {
  Pos pos = Pos::Other;
  std::string lemma;
};

// Tagging contract. Implementations receive one sentence of surface tokens
// (punctuation included) and return one TaggedWord per token with a non-empty
// lowercase lemma. tag_sentence must be safe to call concurrently.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<TaggedWord> tag_sentence(std::span<const std::string> words) const = 0;
};

// Lexicon-plus-suffix-rule tagger: closed-class word list, a small verb and
// adjective lexicon, suffix heuristics, capitalization (PROPN) and digits (NUM).
class RuleTagger final : public Tagger {
 public:
  std::vector<TaggedWord> tag_sentence(std::span<const std::string> words) const override {
    std::vector<TaggedWord> out(words.size());
    std::vector<char> participle(words.size(), 0);  // 'd' for -ed, 'g' for -ing
    for (std::size_t i = 0; i < words.size(); ++i) {
      out[i].lemma = lemmatize(words[i]);
      out[i].pos = first_pass(words, i, participle[i]);
    }
    std::vector<Pos> provisional(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) provisional[i] = out[i].pos;
    // A participle right after a noun or a subject pronoun is read as the
    // predicate ("group received", "we searched").
    auto predicate = [&](std::size_t k) {
      if (k == 0) return false;
      return provisional[k - 1] == Pos::Noun || provisional[k - 1] == Pos::Propn ||
             subjects().contains(to_lower_ascii(words[k - 1]));
    };
    for (std::size_t k = words.size(); k-- > 0;) {
      if (!participle[k]) continue;
      const bool before_nominal =
          k + 1 < words.size() &&
          (out[k + 1].pos == Pos::Noun || out[k + 1].pos == Pos::Propn || out[k + 1].pos == Pos::Adj);
      // "reduced pain and improved function": coordinated with an earlier predicate.
      bool coordinated = false;
      if (k > 1 && (words[k - 1] == "and" || words[k - 1] == "or"))
        for (std::size_t j = 0; j + 1 < k && !coordinated; ++j) coordinated = participle[j] == participle[k] && predicate(j);
      if (before_nominal && !predicate(k) && !coordinated) {
        out[k].pos = Pos::Adj;
      } else if (participle[k] == 'g' && k > 0 &&
                 (determiners().contains(to_lower_ascii(words[k - 1])) || out[k - 1].pos == Pos::Adj)) {
        out[k].pos = Pos::Noun;
      } else {
        out[k].pos = Pos::Verb;
      }
    }
    return out;
  }

  static const std::unordered_set<std::string>& closed_class() {
    static const std::unordered_set<std::string> set = [] {
      std::unordered_set<std::string> s(english_stopwords());
      for (const char* w :
           {"across", "along", "around", "behind", "beyond", "despite", "toward", "towards", "near",
            "since", "unto", "amid", "like", "although", "though", "whereas", "unless", "nor",
            "every", "another", "neither", "many", "several", "much", "less", "least", "still",
            "even", "already", "always", "never", "often", "sometimes", "usually", "currently",
            "respectively", "rather", "quite", "well", "therefore", "hence", "moreover",
            "furthermore", "indeed", "also", "one", "ones", "'s", "\xE2\x80\x99s", "it's",
            "there's", "cannot", "can't", "don't", "doesn't", "didn't", "isn't", "aren't",
            "wasn't", "weren't", "won't", "via", "ie", "eg", "e.g.", "i.e.", "etc.", "et", "al.",
            "vs.", "cf.", "be", "been", "being"})
        s.insert(w);
      return s;
    }();
    return set;
  }

 private:
  static const std::unordered_set<std::string>& determiners() {
    static const std::unordered_set<std::string> set = {
        "the", "a", "an", "this", "that", "these", "those", "its", "their", "our",
        "his", "her", "my", "your", "each", "every", "any", "some", "no"};
    return set;
  }

  static const std::unordered_set<std::string>& subjects() {
    static const std::unordered_set<std::string> set = {"i",  "we",  "you",   "he",  "she",
                                                        "it", "they", "which", "who", "that"};
    return set;
  }

  static bool opens_clause(std::string_view w) {
    return w == ":" || w == ";" || w == "(" || w == "[" || w == "\"" || w == "'" || w == "\xE2\x80\x9C" ||
           w == "\xE2\x80\x98";
  }

  static const std::unordered_set<std::string>& compound_adjective_tails() {
    static const std::unordered_set<std::string> set = {"term",  "based", "related",   "specific", "scale",
                                                        "wide",  "level", "dependent", "free",     "like",
                                                        "sized", "old",   "controlled"};
    return set;
  }

  static const std::unordered_set<std::string>& verbs() {
    static const std::unordered_set<std::string> set = {
        "improve", "show", "shown", "showed", "suggest", "indicate", "demonstrate", "reveal",
        "find", "found", "reduce", "examine", "investigate", "assess", "evaluate", "compare",
        "identify", "provide", "remain", "become", "became", "make", "made", "take", "took",
        "taken", "give", "gave", "given", "include", "occur", "require", "exist", "seem",
        "appear", "propose", "conclude", "predict", "affect", "determine", "obtain", "achieve",
        "enable", "allow", "lead", "led", "cause", "explain", "describe", "consider", "perform",
        "contribute", "help", "know", "known", "see", "seen", "saw", "get", "got", "go", "went",
        "gone", "come", "came", "tend", "fail", "explore", "enhance", "prevent", "mediate",
        "underlie", "emerge", "persist", "worsen", "say", "said", "think", "thought",
        "read", "write", "wrote", "written", "tell", "told", "believe", "want", "argue",
        "confirm", "highlight", "remains", "increases", "decreases"};
    return set;
  }

  static const std::unordered_set<std::string>& adjectives() {
    static const std::unordered_set<std::string> set = {
        "adult", "different", "significant", "high", "higher", "highest", "low", "lower",
        "lowest", "new", "large", "larger", "largest", "small", "smaller", "smallest", "young",
        "younger", "old", "older", "deep", "early", "late", "recent", "good", "bad", "best",
        "better", "worse", "worst", "great", "greater", "major", "minor", "main", "important",
        "common", "similar", "public", "specific", "novel", "overall", "first", "second", "third",
        "last", "long", "short", "strong", "weak", "positive", "negative", "chronic", "acute",
        "severe", "mild", "moderate", "healthy", "potential", "possible", "likely", "open",
        "free", "full", "key", "primary", "secondary", "previous", "current", "future", "various",
        "multiple", "single", "whole", "certain", "random", "elderly", "male", "female",
        "pregnant", "obese", "rare", "true", "false", "wide", "broad", "poor", "rich", "rapid",
        "slow", "fast", "direct", "indirect", "average", "median", "mean", "daily", "annual",
        "human", "modest", "usual", "robust", "simple", "complex", "clear", "available", "relevant"};
    return set;
  }

  static const std::unordered_set<std::string>& noun_exceptions() {
    static const std::unordered_set<std::string> set = {
        // -al
        "trial", "animal", "hospital", "signal", "interval", "material", "journal", "capital",
        "proposal", "survival", "approval", "removal", "arrival", "rival", "total", "principal",
        "terminal", "criminal", "mineral", "metal", "portal", "festival", "canal", "referral",
        "withdrawal", "rehearsal", "disposal", "renewal", "denial", "appraisal", "tutorial",
        "editorial", "individual", "manual", "recital", "arsenal", "cereal", "crystal",
        "pedal", "petal", "ritual", "scandal", "spiral", "vessel",
        // -ic
        "topic", "clinic", "music", "logic", "epidemic", "pandemic", "traffic", "mechanic",
        "graphic", "public", "fabric", "panic", "tonic", "rubric", "critic", "arsenic", "plastic",
        // -ive / -able / -ible
        "detective", "objective", "executive", "representative", "relative", "derivative",
        "alternative", "initiative", "incentive", "perspective", "narrative", "directive",
        "table", "variable", "vegetable", "cable", "syllable", "constable", "timetable",
        // -ed / -ing that are nouns
        "speed", "breed", "creed", "greed", "hundred", "kindred", "thing", "spring", "string",
        "ring", "king", "sibling", "morning", "evening", "ceiling", "building", "funding",
        "meeting", "setting", "finding", "wedding", "pudding", "clothing", "offspring", "swing",
        "wing", "sting", "nothing", "something", "anything", "everything", "during", "bring",
        "pudding", "ping", "being",
        // -ly
        "family", "supply", "reply", "italy", "assembly", "anomaly", "monopoly", "rally", "ally",
        "belly", "jelly", "bully", "july", "apply", "comply", "multiply", "butterfly", "homily"};
    return set;
  }

  static bool adjective_suffix(const std::string& w) {
    using detail::ends_with;
    if (noun_exceptions().contains(w)) return false;
    if (w.size() >= 6 && ends_with(w, "al")) return true;
    if (w.size() >= 5 && (ends_with(w, "ive") || ends_with(w, "ous") || ends_with(w, "ful")))
      return true;
    if (w.size() >= 6 && ends_with(w, "less")) return true;
    if (w.size() >= 5 && ends_with(w, "ic")) return true;
    if (w.size() >= 6 && (ends_with(w, "able") || ends_with(w, "ible") || ends_with(w, "ular")))
      return true;
    return false;
  }

  Pos first_pass(std::span<const std::string> words, std::size_t i, char& participle) const {
    using detail::ends_with;
    const std::string& w = words[i];
    if (!detail::has_word_char(w)) return Pos::Other;
    if (detail::looks_numeric(w)) return Pos::Num;
    const std::string lower = to_lower_ascii(w);

    // Mid-token capitals (QoL, PubMed, RNA) or embedded digits (COVID-19).
    const bool inner_caps = w.size() >= 2 && std::any_of(w.begin() + 1, w.end(), [](char c) {
                              return detail::is_upper(static_cast<unsigned char>(c));
                            });
    const bool inner_digit = std::any_of(w.begin(), w.end(), [](char c) {
      return detail::is_digit(static_cast<unsigned char>(c));
    });
    if (inner_caps || inner_digit) return Pos::Propn;
    if (closed_class().contains(lower)) return Pos::Other;
    if (i > 0 && detail::is_upper(static_cast<unsigned char>(w[0])) && !opens_clause(words[i - 1])) return Pos::Propn;

    const std::string lemma = lemmatize(lower);
    if (verbs().contains(lower) || verbs().contains(lemma)) {
      return Pos::Verb;
    }
    if (adjectives().contains(lower)) return Pos::Adj;

    // Suffix rules look at the last hyphen segment: "long-term", "placebo-controlled".
    const auto hyphen = lower.rfind('-');
    const std::string tail = hyphen == std::string::npos ? lower : lower.substr(hyphen + 1);
    if (hyphen != std::string::npos && compound_adjective_tails().contains(tail)) return Pos::Adj;
    if (noun_exceptions().contains(tail)) return Pos::Noun;
    if (adjectives().contains(tail) || adjective_suffix(tail)) return Pos::Adj;
    if (tail.size() >= 5 && ends_with(tail, "ly")) return Pos::Other;
    if (tail.size() >= 5 && ends_with(tail, "ings")) return Pos::Noun;
    if (tail.size() >= 5 && ends_with(tail, "ed")) {
      participle = 'd';
      return Pos::Verb;
    }
    if (tail.size() >= 6 && ends_with(tail, "ing")) {
      participle = 'g';
      return Pos::Verb;
    }
    if (tail.size() >= 6 && (ends_with(tail, "ize") || ends_with(tail, "izes"))) return Pos::Verb;
    return Pos::Noun;
  }
};

inline const Tagger& default_tagger() {
  static const RuleTagger tagger;
  return tagger;
}

// Segments, tokenizes and tags a cleaned document.
inline std::vector<Token> tag(std::string_view document, const Tagger& tagger = default_tagger()) {
  std::vector<Token> tokens;
  const auto sentences = segment(document);
  std::size_t index = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto tagged = tagger.tag_sentence(sentences[s]);
    for (std::size_t k = 0; k < sentences[s].size(); ++k) {
      Token t;
      t.surface = sentences[s][k];
      t.lemma = tagged[k].lemma.empty() ? to_lower_ascii(t.surface) : tagged[k].lemma;
      t.pos = tagged[k].pos;
      t.sentence_index = s;
      t.token_index = index++;
      tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

// Lemma sequence of a document, punctuation included, as used for phrase
// matching.
inline std::vector<std::string> document_lemmas(std::string_view document,
                                                const Tagger& tagger = default_tagger()) {
  std::vector<std::string> lemmas;
  for (auto& t : tag(document, tagger)) lemmas.push_back(std::move(t.lemma));
  return lemmas;
}

}  // namespace sciret
