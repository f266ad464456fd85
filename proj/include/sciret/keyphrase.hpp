#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sciret/pagerank.hpp"
#include "sciret/text.hpp"

namespace sciret {

enum class Method { TextRank, Rake };

inline std::string_view method_name(Method m) { return m == Method::TextRank ? "textrank" : "rake"; }

inline Method parse_method(std::string_view s) {
  const std::string n = to_lower_ascii(s);
  if (n == "textrank") return Method::TextRank;
  if (n == "rake") return Method::Rake;
  throw std::invalid_argument("unknown keyphrase method: " + std::string(s));
}

struct Keyphrase {
  std::string lemma_form;    // space-joined lemmas
  std::string surface_form;  // first surface occurrence
  double rank = 0.0;
};

struct KeyphraseSet {
  std::string article_id;
  Method method = Method::TextRank;
  std::vector<Keyphrase> phrases;  // rank descending, lemma_form ascending on ties
  double total_rank = 0.0;
};

// Raised when an abstract yields no candidate phrase; such articles are
// excluded from scoring.
class NoKeyphrasesError : public std::runtime_error {
 public:
  explicit NoKeyphrasesError(const std::string& article_id)
      : std::runtime_error("no keyphrases" + (article_id.empty() ? "" : " for " + article_id)) {}
};

// ---------------------------------------------------------------------------
// Candidates

struct Candidate {
  std::vector<std::size_t> positions;  // indices into the token list
  std::string lemma_form;
  std::string surface_form;
};

namespace detail {

inline constexpr std::size_t kMaxCandidateTokens = 6;

inline void emit_span(const std::vector<Token>& tokens, std::vector<std::size_t> span,
                      std::vector<std::vector<std::size_t>>& out) {
  // Trailing adjectives cannot end a phrase.
  while (!span.empty() && tokens[span.back()].pos == Pos::Adj) span.pop_back();
  if (span.empty()) return;
  if (span.size() <= kMaxCandidateTokens) {
    out.push_back(std::move(span));
    return;
  }
  // Split before the rightmost adjective so it stays with the nouns it
  // modifies; without one, keep the last six tokens together.
  std::size_t cut = 0;
  for (std::size_t k = span.size(); k-- > 1;) {
    if (tokens[span[k]].pos == Pos::Adj) {
      cut = k;
      break;
    }
  }
  if (cut == 0) cut = span.size() - kMaxCandidateTokens;
  emit_span(tokens, {span.begin(), span.begin() + static_cast<std::ptrdiff_t>(cut)}, out);
  emit_span(tokens, {span.begin() + static_cast<std::ptrdiff_t>(cut), span.end()}, out);
}

inline std::string join_field(const std::vector<Token>& tokens, const std::vector<std::size_t>& span,
                              std::string Token::*field) {
  std::string s;
  for (std::size_t k = 0; k < span.size(); ++k) {
    if (k) s.push_back(' ');
    s += tokens[span[k]].*field;
  }
  return s;
}

}  // namespace detail

// Maximal spans matching (ADJ|NOUN|PROPN|NUM)* (NOUN|PROPN|NUM) inside one
// sentence; spans longer than six tokens are split; duplicates by lemma form
// keep their first occurrence.
inline std::vector<Candidate> extract_candidates(const std::vector<Token>& tokens) {
  std::vector<std::vector<std::size_t>> spans;
  std::vector<std::size_t> run;
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    const bool extend = i < tokens.size() && is_content(tokens[i].pos) &&
                        (run.empty() || tokens[run.back()].sentence_index == tokens[i].sentence_index);
    if (extend) {
      run.push_back(i);
      continue;
    }
    if (!run.empty()) detail::emit_span(tokens, std::move(run), spans);
    run.clear();
    if (i < tokens.size() && is_content(tokens[i].pos)) run.push_back(i);
  }

  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  for (auto& span : spans) {
    Candidate c;
    c.lemma_form = detail::join_field(tokens, span, &Token::lemma);
    if (!seen.insert(c.lemma_form).second) continue;
    c.surface_form = detail::join_field(tokens, span, &Token::surface);
    c.positions = std::move(span);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lemma graph

struct LemmaNode {
  std::string lemma;
  Pos pos = Pos::Noun;
  friend auto operator<=>(const LemmaNode&, const LemmaNode&) = default;
};

// Undirected co-occurrence graph over content tokens. Nodes are kept sorted so
// that node indices, and everything derived from them, are deterministic.
class LemmaGraph {
 public:
  LemmaGraph() = default;
  LemmaGraph(std::vector<LemmaNode> nodes, const std::map<std::pair<std::size_t, std::size_t>, double>& edges)
      : nodes_(std::move(nodes)), adjacency_(nodes_.size()), edges_(edges) {
    for (const auto& [key, w] : edges_) {
      adjacency_[key.first].emplace_back(key.second, w);
      adjacency_[key.second].emplace_back(key.first, w);
    }
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<LemmaNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::size_t, double>>& neighbors(std::size_t i) const { return adjacency_[i]; }

  std::ptrdiff_t index_of(const LemmaNode& node) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
    return it != nodes_.end() && *it == node ? it - nodes_.begin() : -1;
  }

  // Weight of the edge between two nodes, 0 when absent.
  double weight(const LemmaNode& a, const LemmaNode& b) const {
    auto i = index_of(a), j = index_of(b);
    if (i < 0 || j < 0) return 0.0;
    if (i > j) std::swap(i, j);
    const auto it = edges_.find({std::size_t(i), std::size_t(j)});
    return it == edges_.end() ? 0.0 : it->second;
  }

 private:
  std::vector<LemmaNode> nodes_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
  std::map<std::pair<std::size_t, std::size_t>, double> edges_;
};

// Nodes for every content token; an edge for each pair of content tokens less
// than `window` positions apart in the same sentence, weighted by count.
inline LemmaGraph build_lemma_graph(const std::vector<Token>& tokens, int window = 3) {
  if (window < 2) throw std::invalid_argument("lemma graph window must be >= 2");
  std::vector<LemmaNode> nodes;
  for (const auto& t : tokens)
    if (is_content(t.pos)) nodes.push_back({t.lemma, t.pos});
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto index = [&](const Token& t) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), LemmaNode{t.lemma, t.pos}) - nodes.begin());
  };
  std::map<std::pair<std::size_t, std::size_t>, double> edges;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_content(tokens[i].pos)) continue;
    for (std::size_t j = i + 1; j < tokens.size() && j - i < static_cast<std::size_t>(window); ++j) {
      if (tokens[j].sentence_index != tokens[i].sentence_index) break;
      if (!is_content(tokens[j].pos)) continue;
      auto a = index(tokens[i]), b = index(tokens[j]);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      edges[{a, b}] += 1.0;
    }
  }
  return LemmaGraph(std::move(nodes), edges);
}

inline std::map<LemmaNode, double> pagerank_map(const LemmaGraph& graph, const PageRankParams& params = {}) {
  const auto ranks = pagerank(graph, params);
  std::map<LemmaNode, double> out;
  for (std::size_t i = 0; i < ranks.size(); ++i) out.emplace(graph.nodes()[i], ranks[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Extraction

struct TextRankOptions {
  int window = 3;
  PageRankParams pagerank;
};

namespace detail {

inline KeyphraseSet finish_set(std::string article_id, Method method, std::vector<Keyphrase> phrases) {
  if (phrases.empty()) throw NoKeyphrasesError(article_id);
  std::sort(phrases.begin(), phrases.end(), [](const Keyphrase& a, const Keyphrase& b) {
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.lemma_form < b.lemma_form;
  });
  KeyphraseSet set{std::move(article_id), method, std::move(phrases), 0.0};
  for (const auto& p : set.phrases) set.total_rank += p.rank;
  if (!(set.total_rank > 0.0)) throw NoKeyphrasesError(set.article_id);
  return set;
}

}  // namespace detail

// Tag, extract candidates, rank lemma-graph nodes with PageRank, then score
// each candidate as the sum of its tokens' node ranks discounted by
// 1 + ln(1 + length). Every candidate is kept.
inline KeyphraseSet textrank_keyphrases(std::string_view abstract, std::string article_id = {},
                                        const TextRankOptions& options = {},
                                        const Tagger& tagger = default_tagger()) {
  const auto tokens = tag(clean_text(abstract), tagger);
  const auto candidates = extract_candidates(tokens);
  if (candidates.empty()) throw NoKeyphrasesError(article_id);
  const auto graph = build_lemma_graph(tokens, options.window);
  const auto ranks = pagerank(graph, options.pagerank);

  std::vector<Keyphrase> phrases;
  phrases.reserve(candidates.size());
  for (const auto& c : candidates) {
    double mass = 0.0;
    for (const auto pos : c.positions) {
      const auto idx = graph.index_of({tokens[pos].lemma, tokens[pos].pos});
      mass += ranks[static_cast<std::size_t>(idx)];
    }
    const double len = static_cast<double>(c.positions.size());
    phrases.push_back({c.lemma_form, c.surface_form, mass / (1.0 + std::log(1.0 + len))});
  }
  return detail::finish_set(std::move(article_id), Method::TextRank, std::move(phrases));
}

// Rapid automatic keyword extraction: candidates are maximal runs of tokens
// between stopwords, punctuation and sentence breaks; a word scores
// degree/frequency over all candidate occurrences and a phrase scores the sum
// of its words.
inline KeyphraseSet rake_keyphrases(std::string_view abstract, std::string article_id = {},
                                    const std::unordered_set<std::string>& stopwords = english_stopwords(),
                                    const Tagger& tagger = default_tagger()) {
  if (stopwords.empty()) throw std::invalid_argument("RAKE needs a non-empty stopword list");
  const auto tokens = tag(clean_text(abstract), tagger);

  std::vector<std::vector<std::size_t>> runs;
  std::vector<std::size_t> run;
  auto flush = [&] {
    if (!run.empty()) runs.push_back(run);
    run.clear();
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    const bool delimiter = !detail::has_word_char(t.surface) || stopwords.contains(to_lower_ascii(t.surface)) ||
                           stopwords.contains(t.lemma);
    if (!run.empty() && tokens[run.back()].sentence_index != t.sentence_index) flush();
    if (delimiter) {
      flush();
    } else {
      run.push_back(i);
    }
  }
  flush();
  if (runs.empty()) throw NoKeyphrasesError(article_id);

  std::unordered_map<std::string, double> degree, frequency;
  for (const auto& r : runs) {
    for (const auto pos : r) {
      degree[tokens[pos].lemma] += static_cast<double>(r.size());
      frequency[tokens[pos].lemma] += 1.0;
    }
  }

  std::vector<Keyphrase> phrases;
  std::unordered_set<std::string> seen;
  for (const auto& r : runs) {
    std::string lemma_form = detail::join_field(tokens, r, &Token::lemma);
    if (!seen.insert(lemma_form).second) continue;
    double rank = 0.0;
    for (const auto pos : r) rank += degree[tokens[pos].lemma] / frequency[tokens[pos].lemma];
    phrases.push_back({std::move(lemma_form), detail::join_field(tokens, r, &Token::surface), rank});
  }
  return detail::finish_set(std::move(article_id), Method::Rake, std::move(phrases));
}

inline KeyphraseSet extract_keyphrases(Method method, std::string_view abstract, std::string article_id = {},
                                       const TextRankOptions& options = {},
                                       const Tagger& tagger = default_tagger()) {
  if (method == Method::TextRank) return textrank_keyphrases(abstract, std::move(article_id), options, tagger);
  return rake_keyphrases(abstract, std::move(article_id), english_stopwords(), tagger);
}

}  // namespace sciret
