#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sciret/dumps.hpp"
#include "sciret/keyphrase.hpp"

using namespace sciret;

namespace {

// Tags each word from a fixed table (default OTHER); lemma is the lowercase word.
class TableTagger final : public Tagger {
 public:
  explicit TableTagger(std::map<std::string, Pos> table) : table_(std::move(table)) {}
  std::vector<TaggedWord> tag_sentence(std::span<const std::string> words) const override {
    std::vector<TaggedWord> out;
    for (const auto& w : words) {
      const auto it = table_.find(w);
      out.push_back({it == table_.end() ? Pos::Other : it->second, to_lower_ascii(w)});
    }
    return out;
  }

 private:
  std::map<std::string, Pos> table_;
};

std::set<std::string> lemma_forms(const std::vector<Candidate>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(c.lemma_form);
  return out;
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Independent TextRank: words are generated with known tags, so candidate
// spans, the co-occurrence matrix and the ranks are recomputed from scratch.
struct OracleDoc {
  std::vector<std::vector<std::string>> sentences;
  std::map<std::string, Pos> table;

  std::string text() const {
    std::string s;
    for (const auto& sent : sentences) {
      for (const auto& w : sent) s += w + " ";
      s += ". ";
    }
    return s;
  }
};

std::map<std::string, double> oracle_textrank(const OracleDoc& doc) {
  auto content = [&](const std::string& w) {
    const auto it = doc.table.find(w);
    return it != doc.table.end() && it->second != Pos::Verb && it->second != Pos::Other;
  };
  std::vector<std::string> nodes;
  for (const auto& s : doc.sentences)
    for (const auto& w : s)
      if (content(w)) nodes.push_back(w);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const std::size_t n = nodes.size();
  auto idx = [&](const std::string& w) { return std::lower_bound(nodes.begin(), nodes.end(), w) - nodes.begin(); };
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const auto& s : doc.sentences)
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size() && j < i + 3; ++j)
        if (content(s[i]) && content(s[j]) && s[i] != s[j]) {
          w[idx(s[i])][idx(s[j])] += 1;
          w[idx(s[j])][idx(s[i])] += 1;
        }
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n), strength(n);
  for (std::size_t u = 0; u < n; ++u) strength[u] = std::accumulate(w[u].begin(), w[u].end(), 0.0);
  for (int it = 0; it < 600; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      y[v] = 0.15 / static_cast<double>(n);
      for (std::size_t u = 0; u < n; ++u)
        if (w[u][v] > 0) y[v] += 0.85 * w[u][v] / strength[u] * x[u];
    }
    x.swap(y);
  }
  const double total = std::accumulate(x.begin(), x.end(), 0.0);

  std::map<std::string, double> phrases;
  for (const auto& s : doc.sentences) {
    std::vector<std::string> run;
    auto flush = [&] {
      while (!run.empty() && doc.table.at(run.back()) == Pos::Adj) run.pop_back();
      if (run.empty()) return;
      std::string form;
      double mass = 0;
      for (const auto& t : run) {
        form += (form.empty() ? "" : " ") + t;
        mass += x[idx(t)] / total;
      }
      phrases.emplace(form, mass / (1 + std::log(1 + static_cast<double>(run.size()))));
      run.clear();
    };
    for (const auto& t : s) {
      if (content(t)) {
        run.push_back(t);
      } else {
        flush();
        run.clear();
      }
    }
    flush();
  }
  return phrases;
}

OracleDoc random_doc(std::mt19937& rng) {
  OracleDoc doc;
  const Pos kinds[] = {Pos::Noun, Pos::Noun, Pos::Propn, Pos::Adj, Pos::Num, Pos::Verb, Pos::Other};
  const std::size_t vocab = 4 + rng() % 10;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < vocab; ++i) {
    words.push_back("w" + std::to_string(i));
    doc.table[words.back()] = kinds[rng() % std::size(kinds)];
  }
  doc.table["stop"] = Pos::Other;
  const std::size_t n_sent = 1 + rng() % 4;
  for (std::size_t s = 0; s < n_sent; ++s) {
    std::vector<std::string> sent;
    std::size_t run = 0;
    const std::size_t len = 1 + rng() % 10;
    for (std::size_t k = 0; k < len; ++k) {
      auto w = words[rng() % words.size()];
      const auto pos = doc.table[w];
      run = pos == Pos::Verb || pos == Pos::Other ? 0 : run + 1;
      if (run > 5) {  // keep spans short enough that no split applies
        w = "stop";
        run = 0;
      }
      sent.push_back(w);
    }
    doc.sentences.push_back(sent);
  }
  return doc;
}

}  // namespace

TEST(Candidates, AdultPatients) {
  const auto c = extract_candidates(tag("Adult patients."));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].lemma_form, "adult patient");
  EXPECT_EQ(c[0].surface_form, "Adult patients");
}

TEST(Candidates, AllVerbSentenceHasNone) { EXPECT_TRUE(extract_candidates(tag("Show reduce improve.")).empty()); }

TEST(Candidates, NumberAdjectivesNoun) {
  const auto c = extract_candidates(tag("We included 34 randomised controlled trials."));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].surface_form, "34 randomised controlled trials");
  EXPECT_EQ(c[0].positions.size(), 4u);
}

TEST(Candidates, LongSpansSplitAtRightmostAdjective) {
  const TableTagger tagger({{"a1", Pos::Adj}, {"a2", Pos::Adj}, {"a3", Pos::Adj}, {"n1", Pos::Noun},
                            {"n2", Pos::Noun}, {"n3", Pos::Noun}, {"n4", Pos::Noun}, {"n5", Pos::Noun},
                            {"n6", Pos::Noun}, {"n7", Pos::Noun}, {"n8", Pos::Noun}});
  EXPECT_EQ(lemma_forms(extract_candidates(tag("a1 a2 n1 n2 a3 n3 n4 n5", tagger))),
            (std::set<std::string>{"a1 a2 n1 n2", "a3 n3 n4 n5"}));
  EXPECT_EQ(lemma_forms(extract_candidates(tag("n1 n2 n3 n4 n5 n6 n7 n8", tagger))),
            (std::set<std::string>{"n1 n2", "n3 n4 n5 n6 n7 n8"}));
  EXPECT_EQ(lemma_forms(extract_candidates(tag("n1 n2 a1", tagger))), (std::set<std::string>{"n1 n2"}));
}

TEST(Candidates, DuplicatesKeepFirstSurface) {
  const auto c = extract_candidates(tag("Cancer trials improve care. We saw one cancer trial."));
  const auto forms = lemma_forms(c);
  EXPECT_EQ(forms, (std::set<std::string>{"cancer trial", "care"}));
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].surface_form, "Cancer trials");
}

TEST(Candidates, SentenceOrderDoesNotChangeTheSet) {
  const std::vector<std::string> sentences = {"Exercise therapy reduced chronic pain.",
                                              "We searched PubMed for randomised trials.",
                                              "Adult patients showed small benefits.", "The evidence quality is low."};
  const auto reference = lemma_forms(extract_candidates(tag(sentences[0] + " " + sentences[1] + " " + sentences[2] +
                                                            " " + sentences[3])));
  std::vector<std::size_t> order = {0, 1, 2, 3};
  while (std::next_permutation(order.begin(), order.end())) {
    std::string doc;
    for (auto i : order) doc += sentences[i] + " ";
    EXPECT_EQ(lemma_forms(extract_candidates(tag(doc))), reference);
  }
}

TEST(TextRank, SingleNounAbstract) {
  const auto set = textrank_keyphrases("Cancer.", "a");
  ASSERT_EQ(set.phrases.size(), 1u);
  EXPECT_GT(set.total_rank, 0.0);
  EXPECT_NEAR(set.phrases[0].rank, 1.0 / (1.0 + std::log(2.0)), 1e-12);
}

TEST(TextRank, DisjointSingleNounSentencesTie) {
  const auto set = textrank_keyphrases("Cancer. Therapy.", "a");
  ASSERT_EQ(set.phrases.size(), 2u);
  EXPECT_DOUBLE_EQ(set.phrases[0].rank, set.phrases[1].rank);
  EXPECT_EQ(set.phrases[0].lemma_form, "cancer");
}

TEST(TextRank, NoCandidatesIsAnError) {
  EXPECT_THROW(textrank_keyphrases("", "a"), NoKeyphrasesError);
  EXPECT_THROW(textrank_keyphrases("It is what it is.", "a"), NoKeyphrasesError);
  try {
    textrank_keyphrases("and the", "a");
  } catch (const NoKeyphrasesError& e) {
    EXPECT_NE(std::string(e.what()).find("no keyphrases"), std::string::npos);
  }
}

TEST(TextRank, MatchesIndependentOracleOnRandomDocuments) {
  std::mt19937 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto doc = random_doc(rng);
    const TableTagger tagger(doc.table);
    const auto expected = oracle_textrank(doc);
    if (expected.empty()) {
      EXPECT_THROW(textrank_keyphrases(doc.text(), "x", {}, tagger), NoKeyphrasesError);
      continue;
    }
    PageRankParams tight;
    tight.eps = 1e-14;
    tight.max_iter = 10000;
    const auto set = textrank_keyphrases(doc.text(), "x", {3, tight}, tagger);
    ASSERT_EQ(set.phrases.size(), expected.size());
    for (const auto& p : set.phrases) {
      ASSERT_TRUE(expected.contains(p.lemma_form)) << p.lemma_form;
      EXPECT_NEAR(p.rank, expected.at(p.lemma_form), 1e-9);
    }
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(TextRank, GoldenFixture) {
  const auto set = textrank_keyphrases(read(SCIRET_TEST_DATA "/fixture_abstract.txt"), "fixture");
  std::istringstream golden(read(SCIRET_TEST_DATA "/fixture_textrank.tsv"));
  std::vector<Keyphrase> expected;
  for (std::string line; std::getline(golden, line);) {
    std::istringstream fields(line);
    Keyphrase k;
    std::string rank;
    std::getline(fields, k.lemma_form, '\t');
    std::getline(fields, k.surface_form, '\t');
    std::getline(fields, rank);
    k.rank = std::stod(rank);
    expected.push_back(k);
  }
  ASSERT_EQ(set.phrases.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(set.phrases[i].lemma_form, expected[i].lemma_form) << i;
    EXPECT_EQ(set.phrases[i].surface_form, expected[i].surface_form) << i;
    EXPECT_NEAR(set.phrases[i].rank, expected[i].rank, 1e-9) << i;
  }
}

TEST(Rake, DeepLearning) {
  const auto set = rake_keyphrases("deep learning", "a");
  ASSERT_EQ(set.phrases.size(), 1u);
  EXPECT_EQ(set.phrases[0].lemma_form, "deep learning");
  EXPECT_DOUBLE_EQ(set.phrases[0].rank, 4.0);
}

TEST(Rake, AllStopwordsIsAnError) { EXPECT_THROW(rake_keyphrases("the and of it is", "a"), NoKeyphrasesError); }

TEST(Rake, DisjointEqualLengthCandidatesTie) {
  const auto set = rake_keyphrases("gene expression and protein folding", "a");
  ASSERT_EQ(set.phrases.size(), 2u);
  EXPECT_DOUBLE_EQ(set.phrases[0].rank, set.phrases[1].rank);
}

TEST(Rake, DegreeOverFrequency) {
  // "cell": freq 2, degree 2 + 1 = 3 -> 1.5; "growth": 2/1 = 2.
  const auto set = rake_keyphrases("cell growth, of cell", "a");
  ASSERT_EQ(set.phrases.size(), 2u);
  EXPECT_EQ(set.phrases[0].lemma_form, "cell growth");
  EXPECT_DOUBLE_EQ(set.phrases[0].rank, 3.5);
  EXPECT_DOUBLE_EQ(set.phrases[1].rank, 1.5);
  EXPECT_THROW(rake_keyphrases("x", "a", {}), std::invalid_argument);
}

TEST(KeyphraseSets, ContractOnFixture) {
  const auto text = read(SCIRET_TEST_DATA "/fixture_abstract.txt");
  std::set<std::string> tr, rk;
  for (const auto method : {Method::TextRank, Method::Rake}) {
    const auto set = extract_keyphrases(method, text, "fixture");
    double total = 0;
    std::set<std::string> forms;
    for (const auto& p : set.phrases) {
      EXPECT_GE(p.rank, 0.0);
      EXPECT_TRUE(forms.insert(p.lemma_form).second);
      EXPECT_FALSE(tag(p.lemma_form).empty());
      total += p.rank;
    }
    EXPECT_NEAR(set.total_rank, total, 1e-12);
    for (std::size_t i = 1; i < set.phrases.size(); ++i)
      EXPECT_TRUE(set.phrases[i - 1].rank > set.phrases[i].rank ||
                  (set.phrases[i - 1].rank == set.phrases[i].rank &&
                   set.phrases[i - 1].lemma_form < set.phrases[i].lemma_form));
    (method == Method::TextRank ? tr : rk) = forms;
  }
  std::vector<std::string> common;
  std::set_intersection(tr.begin(), tr.end(), rk.begin(), rk.end(), std::back_inserter(common));
  EXPECT_FALSE(common.empty());
}

TEST(KeyphraseSets, DumpRoundTrip) {
  const auto text = read(SCIRET_TEST_DATA "/fixture_abstract.txt");
  const std::vector<KeyphraseSet> sets = {extract_keyphrases(Method::TextRank, text, "a"),
                                          extract_keyphrases(Method::Rake, text, "a")};
  std::stringstream buf;
  write_keyphrase_dump(buf, sets);
  const auto back = read_keyphrase_dump(buf);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(back[s].method, sets[s].method);
    ASSERT_EQ(back[s].phrases.size(), sets[s].phrases.size());
    for (std::size_t i = 0; i < sets[s].phrases.size(); ++i) {
      EXPECT_EQ(back[s].phrases[i].lemma_form, sets[s].phrases[i].lemma_form);
      EXPECT_DOUBLE_EQ(back[s].phrases[i].rank, sets[s].phrases[i].rank);
    }
    EXPECT_NEAR(back[s].total_rank, sets[s].total_rank, 1e-12);
  }
}
