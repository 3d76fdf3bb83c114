#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "../oracles/bleu_oracle.hpp"
#include "../oracles/chrf_oracle.hpp"
#include "metricga/error.hpp"
#include "metricga/metrics.hpp"

using namespace metricga;
namespace m = metricga::metrics;

namespace {

using Strings = std::vector<std::string>;

std::string random_sentence(std::mt19937& rng, const Strings& vocab, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::string s;
  for (int i = 0, n = len(rng); i < n; ++i) {
    if (i) s += ' ';
    s += vocab[rng() % vocab.size()];
  }
  return s;
}

const Strings kVocab{"the", "cat", "sat", "on", "mat", "a", "dog", "ran", "č", "žena", ".", "of"};

}  // namespace

TEST(SentenceBleu, PerfectMatchIsExactly100) {
  EXPECT_EQ(m::sentence_bleu("the cat sat on the mat", Strings{"the cat sat on the mat"}), 100.0);
  EXPECT_EQ(m::sentence_bleu("a", Strings{"a"}), 100.0);
}

TEST(SentenceBleu, EmptyHypothesisScoresZero) {
  EXPECT_EQ(m::sentence_bleu("", Strings{"the cat"}), 0.0);
  EXPECT_EQ(m::sentence_bleu("", Strings{""}), 0.0);
}

TEST(SentenceBleu, EmptyReferenceListThrows) {
  EXPECT_THROW(m::sentence_bleu("a", Strings{}), InvalidArgument);
}

TEST(SentenceBleu, ShortHypothesisHandValue) {
  // Orders 1-3 match fully, no 4-grams, brevity penalty exp(1 - 4/3).
  const double expected = 100.0 * std::exp(1.0 - 4.0 / 3.0);
  EXPECT_NEAR(m::sentence_bleu("the cat sat", Strings{"the cat sat down"}), expected, 1e-9);
  EXPECT_NEAR(oracle::sentence_bleu("the cat sat", {"the cat sat down"}), expected, 1e-9);
}

TEST(SentenceBleu, SmoothingHandValue) {
  // hyp "a b c d" vs ref "a b x d": p1 = 3/4, p2 = 1/3, p3 = 0 -> 1/(2*2),
  // p4 = 0 -> 1/(4*1).
  const double expected = 100.0 * std::exp((std::log(0.75) + std::log(1.0 / 3) + std::log(0.25) + std::log(0.25)) / 4);
  EXPECT_NEAR(m::sentence_bleu("a b c d", Strings{"a b x d"}), expected, 1e-9);
}

TEST(SentenceBleu, NoMatchesIsZero) {
  EXPECT_EQ(m::sentence_bleu("x y z", Strings{"a b c"}), 0.0);
}

TEST(SentenceBleu, MultiReferenceIsMeanOfSingle) {
  const Strings refs{"the cat sat on the mat", "a cat was sitting on the mat"};
  const double a = m::sentence_bleu("the cat sat on a mat", Strings{refs[0]});
  const double b = m::sentence_bleu("the cat sat on a mat", Strings{refs[1]});
  EXPECT_NEAR(m::sentence_bleu("the cat sat on a mat", refs), (a + b) / 2, 1e-12);
}

TEST(SentenceBleu, MatchesOracleOnRandomPairs) {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto hyp = random_sentence(rng, kVocab, 0, 12);
    const Strings refs{random_sentence(rng, kVocab, 1, 12), random_sentence(rng, kVocab, 1, 12)};
    const double got = m::sentence_bleu(hyp, refs);
    EXPECT_NEAR(got, oracle::sentence_bleu(hyp, refs), 1e-9) << hyp << " | " << refs[0];
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 100.0);
  }
}

TEST(CorpusBleu, IdenticalCorpusIs100) {
  std::vector<m::BleuSegment> segs{{tokenize("a b c d e"), {tokenize("a b c d e")}},
                                   {tokenize("x y z w"), {tokenize("x y z w")}}};
  EXPECT_NEAR(m::corpus_bleu(segs), 100.0, 1e-9);
}

TEST(CorpusBleu, SingleSegmentIsUnsmoothedSentenceValue) {
  const auto hyp = tokenize("the cat sat on the mat today");
  const auto ref = tokenize("the cat sat on a mat today");
  std::vector<m::BleuSegment> segs{{hyp, {ref}}};
  m::BleuReference r(ref);
  EXPECT_NEAR(m::corpus_bleu(segs), m::bleu_from_stats(r.stats(hyp), m::BleuSmoothing::none, false), 1e-12);
}

TEST(CorpusBleu, ThreeSegmentPooledCounts) {
  const Strings hyps{"the cat sat on the mat", "a dog ran off", "it is raining now"};
  const std::vector<Strings> refs{{"the cat sat on a mat"}, {"the dog ran off"}, {"it is raining today"}};
  std::vector<m::BleuSegment> segs;
  for (std::size_t i = 0; i < hyps.size(); ++i) segs.push_back({tokenize(hyps[i]), {tokenize(refs[i][0])}});
  // Pooled by hand: 1-grams 11/14, 2-grams 7/11, 3-grams 4/8, 4-grams 1/5,
  // lengths 14 vs 14 (BP 1).
  const double hand = 100.0 * std::exp((std::log(11.0 / 14) + std::log(7.0 / 11) + std::log(4.0 / 8) + std::log(1.0 / 5)) / 4);
  EXPECT_NEAR(m::corpus_bleu(segs), hand, 1e-9);
  EXPECT_NEAR(m::corpus_bleu(segs), oracle::corpus_bleu(hyps, refs), 1e-9);
}

TEST(CorpusBleu, InvariantUnderReordering) {
  std::mt19937 rng(3);
  Strings hyps;
  std::vector<Strings> refs;
  for (int i = 0; i < 8; ++i) {
    hyps.push_back(random_sentence(rng, kVocab, 4, 10));
    refs.push_back({random_sentence(rng, kVocab, 4, 10), random_sentence(rng, kVocab, 4, 10)});
  }
  auto build = [&](const std::vector<int>& order) {
    std::vector<m::BleuSegment> segs;
    for (int i : order) segs.push_back({tokenize(hyps[i]), {tokenize(refs[i][0]), tokenize(refs[i][1])}});
    return m::corpus_bleu(segs);
  };
  const double a = build({0, 1, 2, 3, 4, 5, 6, 7});
  EXPECT_NEAR(a, build({7, 3, 5, 1, 0, 2, 6, 4}), 1e-9);
  EXPECT_NEAR(a, oracle::corpus_bleu(hyps, refs), 1e-9);
}

TEST(CorpusBleu, Errors) {
  EXPECT_THROW(m::corpus_bleu(std::vector<m::BleuSegment>{}), InvalidArgument);
  std::vector<m::BleuSegment> ragged{{tokenize("a"), {tokenize("a")}}, {tokenize("b"), {tokenize("b"), tokenize("c")}}};
  EXPECT_THROW(m::corpus_bleu(ragged), InvalidArgument);
}

TEST(SentenceChrf, Examples) {
  EXPECT_EQ(m::sentence_chrf("the cat", Strings{"the cat"}), 100.0);
  EXPECT_EQ(m::sentence_chrf("", Strings{"the cat"}), 0.0);
  EXPECT_THROW(m::sentence_chrf("a", Strings{}), InvalidArgument);
}

TEST(SentenceChrf, AbcdAbceHandValue) {
  // Orders 1-4: matches 3/4, 2/3, 1/2, 0/1; P = R so F2 equals their mean.
  const double hand = 100.0 * (3.0 / 4 + 2.0 / 3 + 1.0 / 2 + 0.0) / 4;
  EXPECT_NEAR(m::sentence_chrf("abcd", Strings{"abce"}), hand, 1e-9);
  EXPECT_NEAR(oracle::sentence_chrf("abcd", {"abce"}), hand, 1e-9);
}

TEST(SentenceChrf, WhitespaceIgnored) {
  EXPECT_EQ(m::sentence_chrf("thecat", Strings{"the cat"}), 100.0);
}

TEST(SentenceChrf, SwapExchangesPrecisionAndRecall) {
  const auto fwd = oracle::average_pr(oracle::chrf_counts("the cat sat", "a cat sat down"));
  const auto rev = oracle::average_pr(oracle::chrf_counts("a cat sat down", "the cat sat"));
  EXPECT_NEAR(fwd.precision, rev.recall, 1e-12);
  EXPECT_NEAR(fwd.recall, rev.precision, 1e-12);
  EXPECT_NEAR(m::sentence_chrf("the cat sat", Strings{"a cat sat down"}), oracle::f_beta(fwd), 1e-9);
  EXPECT_NEAR(m::sentence_chrf("a cat sat down", Strings{"the cat sat"}), oracle::f_beta(rev), 1e-9);
}

TEST(SentenceChrf, MatchesOracleOnRandomPairs) {
  std::mt19937 rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto hyp = random_sentence(rng, kVocab, 0, 10);
    const Strings refs{random_sentence(rng, kVocab, 1, 10)};
    const double got = m::sentence_chrf(hyp, refs);
    EXPECT_NEAR(got, oracle::sentence_chrf(hyp, refs), 1e-9) << hyp << " | " << refs[0];
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 100.0);
  }
}

TEST(CorpusChrf, Examples) {
  std::vector<m::ChrfSegment> same{{"a b c", {"a b c"}}, {"dog", {"dog"}}};
  EXPECT_NEAR(m::corpus_chrf(same), 100.0, 1e-9);
  std::vector<m::ChrfSegment> one{{"the cat sat", {"a cat sat"}}};
  EXPECT_NEAR(m::corpus_chrf(one), m::sentence_chrf("the cat sat", Strings{"a cat sat"}), 1e-12);
}

TEST(CorpusChrf, TwoSegmentPooledCounts) {
  const Strings hyps{"abcd", "xyz"};
  const std::vector<Strings> refs{{"abce"}, {"xyw"}};
  std::vector<m::ChrfSegment> segs{{hyps[0], refs[0]}, {hyps[1], refs[1]}};
  // Pooled: order1 5/7 both sides, order2 3/5, order3 1/3, order4 0/1.
  const double hand = 100.0 * (5.0 / 7 + 3.0 / 5 + 1.0 / 3 + 0.0) / 4;
  EXPECT_NEAR(m::corpus_chrf(segs), hand, 1e-9);
  EXPECT_NEAR(m::corpus_chrf(segs), oracle::corpus_chrf(hyps, refs), 1e-9);
}

TEST(CorpusChrf, InvariantUnderReordering) {
  std::vector<m::ChrfSegment> a{{"the cat", {"a cat"}}, {"dog ran", {"dogs run"}}, {"x", {"y"}}};
  std::vector<m::ChrfSegment> b{a[2], a[0], a[1]};
  EXPECT_NEAR(m::corpus_chrf(a), m::corpus_chrf(b), 1e-12);
}

TEST(LengthNormalizedLogprob, Examples) {
  EXPECT_EQ(m::length_normalized_logprob({"a b c d", -4.0, Origin::beam}), -1.0);
  EXPECT_EQ(m::length_normalized_logprob({"", -2.0, Origin::beam}), -2.0);
  EXPECT_EQ(m::length_normalized_logprob({"a b", std::nullopt, Origin::user}),
            -std::numeric_limits<double>::infinity());
}

TEST(LengthNormalizedLogprob, ArgmaxMatchesHandRanking) {
  // -6/3 = -2, -2/1 = -2, -3/4 = -0.75, -5/5 = -1: index 2 wins.
  std::vector<HypothesisRecord> hyps{{"a b c", -6.0, Origin::beam},
                                     {"a", -2.0, Origin::beam},
                                     {"a b c d", -3.0, Origin::beam},
                                     {"a b c d e", -5.0, Origin::beam}};
  std::size_t best = 0;
  for (std::size_t i = 1; i < hyps.size(); ++i) {
    if (m::length_normalized_logprob(hyps[i]) > m::length_normalized_logprob(hyps[best])) best = i;
  }
  EXPECT_EQ(best, 2u);
}
