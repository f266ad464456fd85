#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sciret/retention.hpp"

using namespace sciret;

namespace {

KeyphraseSet make_set(std::vector<std::pair<std::string, double>> phrases, Method method = Method::TextRank) {
  KeyphraseSet set;
  set.article_id = "a";
  set.method = method;
  for (auto& [form, rank] : phrases) {
    set.phrases.push_back({form, form, rank});
    set.total_rank += rank;
  }
  return set;
}

const std::vector<std::string> kVocab = {"gene", "cell", "tumor", "rate", "dose", "risk", "age", "brain", "heart", "lung"};

// Brute force: slide every phrase over every start position of the word list.
double oracle_score(const KeyphraseSet& set, const std::string& text) {
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) words.push_back(w);
  double found = 0;
  for (const auto& p : set.phrases) {
    std::vector<std::string> needle;
    std::istringstream pin(p.lemma_form);
    for (std::string w; pin >> w;) needle.push_back(w);
    bool hit = false;
    for (std::size_t i = 0; i + needle.size() <= words.size() && !hit; ++i) {
      bool all = true;
      for (std::size_t k = 0; k < needle.size(); ++k) all = all && words[i + k] == needle[k];
      hit = all;
    }
    if (hit) found += p.rank;
  }
  return found / set.total_rank;
}

}  // namespace

TEST(MatchPhrase, ContiguousAndOrdered) {
  const Keyphrase control{"control group", "control group", 1.0};
  const std::vector<std::string> yes = {"the", "control", "group", "did"};
  const std::vector<std::string> reversed = {"group", "control"};
  const std::vector<std::string> gap = {"control", "the", "group"};
  EXPECT_TRUE(match_phrase(control, yes));
  EXPECT_FALSE(match_phrase(control, reversed));
  EXPECT_FALSE(match_phrase(control, gap));
}

TEST(MatchPhrase, LemmaLevel) {
  const Keyphrase trials{"trial", "trials", 1.0};
  EXPECT_TRUE(match_phrase(trials, document_lemmas("a trial")));
  EXPECT_TRUE(match_phrase(trials, document_lemmas("Two TRIALS were run.")));
  const Keyphrase upper{"Cancer Trial", "Cancer Trials", 1.0};
  EXPECT_TRUE(match_phrase(upper, document_lemmas("cancer trials")));
}

TEST(ScoreMention, HandExamples) {
  const auto set = make_set({{"alpha", 0.5}, {"beta", 0.3}, {"gamma", 0.2}});
  EXPECT_DOUBLE_EQ(score_mention(set, "alpha beta gamma").value, 1.0);
  EXPECT_DOUBLE_EQ(score_mention(set, "nothing here").value, 0.0);
  const auto ac = score_mention(set, "we saw alpha and gamma");
  EXPECT_NEAR(ac.value, 0.7, 1e-12);
  EXPECT_EQ(ac.matched, 2u);
  EXPECT_EQ(ac.total, 3u);
  EXPECT_DOUBLE_EQ(score_mention(set, "").value, 0.0);
}

TEST(ScoreMention, ZeroTotalRankIsAContractViolation) {
  EXPECT_THROW(score_mention(make_set({{"alpha", 0.0}}), "alpha"), std::invalid_argument);
  EXPECT_THROW(score_mention(make_set({}), "alpha"), std::invalid_argument);
}

TEST(ScoreMention, MatchesBruteForceOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rank(0.001, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<std::string, double>> phrases;
    std::set<std::string> forms;
    const std::size_t n = 1 + rng() % 8;
    while (phrases.size() < n) {
      std::string form;
      const std::size_t len = 1 + rng() % 3;
      for (std::size_t k = 0; k < len; ++k) form += (k ? " " : "") + kVocab[rng() % kVocab.size()];
      if (forms.insert(form).second) phrases.emplace_back(form, rank(rng));
    }
    const auto set = make_set(phrases, trial % 2 ? Method::Rake : Method::TextRank);
    std::string text;
    const std::size_t len = rng() % 30;
    for (std::size_t k = 0; k < len; ++k) text += kVocab[rng() % kVocab.size()] + " ";
    const auto s = score_mention(set, text);
    EXPECT_NEAR(s.value, oracle_score(set, text), 1e-12) << text;
    EXPECT_GE(s.value, 0.0);
    EXPECT_LE(s.value, 1.0);
    EXPECT_LE(s.matched, s.total);
    EXPECT_EQ(s.method, set.method);
    EXPECT_EQ(s.value == 0.0, s.matched == 0);
    EXPECT_EQ(s.value == 1.0, s.matched == s.total);
  }
}

TEST(ScoreMention, Monotonicity) {
  std::mt19937_64 rng(8);
  const auto set = make_set({{"gene", 0.4}, {"cell rate", 0.35}, {"tumor dose risk", 0.25}});
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t k = 0; k < rng() % 10; ++k) text += kVocab[rng() % kVocab.size()] + " ";
    const double before = score_mention(set, text).value;
    const auto& p = set.phrases[rng() % set.phrases.size()];
    EXPECT_GE(score_mention(set, text + " " + p.surface_form).value, before);
    EXPECT_GE(score_mention(set, p.surface_form + " . " + text).value, before);
  }
}

TEST(ScoreMention, ScaleFree) {
  const auto a = make_set({{"gene", 0.4}, {"cell rate", 0.35}, {"tumor dose risk", 0.25}});
  const auto b = make_set({{"gene", 40.0}, {"cell rate", 35.0}, {"tumor dose risk", 25.0}});
  for (const char* text : {"gene", "cell rate and gene", "tumor dose risk", "cell", ""})
    EXPECT_NEAR(score_mention(a, text).value, score_mention(b, text).value, 1e-12);
}

TEST(ScoreMention, AbstractAgainstItsOwnPhrasesScoresOne) {
  const std::string abstract =
      "Exercise therapy is widely recommended for adult patients with chronic low back pain. "
      "We searched PubMed and Embase for randomised controlled trials. Exercise therapy reduced pain "
      "intensity and improved physical function compared with usual care.";
  for (const auto method : {Method::TextRank, Method::Rake}) {
    const auto set = extract_keyphrases(method, abstract, "a");
    EXPECT_NEAR(score_mention(set, abstract).value, 1.0, 1e-9);
  }
}

TEST(ScoreBurst, Median) {
  const std::vector<double> odd = {0.1, 0.2, 0.3}, even = {0.1, 0.3}, outlier = {0.0, 0.0, 0.9};
  EXPECT_NEAR(*score_burst(std::span<const double>(odd)), 0.2, 1e-12);
  EXPECT_NEAR(*score_burst(std::span<const double>(even)), 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(*score_burst(std::span<const double>(outlier)), 0.0);
  EXPECT_FALSE(score_burst(std::span<const double>()).has_value());
  const std::vector<RetentionScore> scores = {{0.4, Method::TextRank, 1, 2}, {0.6, Method::TextRank, 1, 2}};
  EXPECT_NEAR(*score_burst(std::span<const RetentionScore>(scores)), 0.5, 1e-12);
}

TEST(ScoreBurstConcat, Examples) {
  const auto set = make_set({{"alpha", 0.5}, {"beta", 0.3}, {"gamma", 0.2}});
  const std::vector<std::string> one = {"alpha and beta"};
  EXPECT_DOUBLE_EQ(score_burst_concat(set, one), score_mention(set, one[0]).value);
  const std::vector<std::string> disjoint = {"alpha", "gamma"};
  EXPECT_NEAR(score_burst_concat(set, disjoint), 0.7, 1e-12);
  const std::vector<double> separate = {score_mention(set, "alpha").value, score_mention(set, "gamma").value};
  EXPECT_NEAR(*score_burst(std::span<const double>(separate)), 0.35, 1e-12);
  const std::vector<std::string> none = {"nothing", "at all"};
  EXPECT_DOUBLE_EQ(score_burst_concat(set, none), 0.0);
  EXPECT_THROW(score_burst_concat(set, std::vector<std::string>{}), std::invalid_argument);
}

TEST(ScoreBurstConcat, NeverBelowMedian) {
  std::mt19937_64 rng(12);
  const auto set = make_set({{"gene", 0.4}, {"cell rate", 0.35}, {"tumor dose risk", 0.25}, {"brain", 0.1}});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts(1 + rng() % 5);
    std::vector<double> scores;
    for (auto& t : texts) {
      for (std::size_t k = 0; k < rng() % 8; ++k) t += kVocab[rng() % kVocab.size()] + " ";
      scores.push_back(score_mention(set, t).value);
    }
    EXPECT_GE(score_burst_concat(set, texts) + 1e-12, *score_burst(std::span<const double>(scores)));
  }
}
