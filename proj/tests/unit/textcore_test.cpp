#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "metricga/error.hpp"
#include "metricga/textcore.hpp"

using namespace metricga;

namespace {

std::vector<std::string> strs(const TokenSequence& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(x.str());
  return out;
}

TokenSequence toks(std::initializer_list<const char*> words) {
  TokenSequence out;
  for (const auto* w : words) out.emplace_back(w);
  return out;
}

}  // namespace

TEST(Tokenize, SplitsOnWhitespace) {
  EXPECT_EQ(strs(tokenize("Genetic algorithm .")), (std::vector<std::string>{"Genetic", "algorithm", "."}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(strs(tokenize("a\t b")), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(strs(tokenize("  lead and trail \n")), (std::vector<std::string>{"lead", "and", "trail"}));
}

TEST(Tokenize, UnicodeWhitespaceSeparates) {
  // U+00A0 no-break space and U+3000 ideographic space.
  EXPECT_EQ(strs(tokenize("a\xC2\xA0" "b\xE3\x80\x80" "c")), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(strs(tokenize("kočka pije")), (std::vector<std::string>{"kočka", "pije"}));
}

TEST(Token, RejectsEmptyAndWhitespace) {
  EXPECT_THROW(Token(""), InvalidArgument);
  EXPECT_THROW(Token("a b"), InvalidArgument);
  EXPECT_THROW(Token("a\tb"), InvalidArgument);
  EXPECT_NO_THROW(Token("ok"));
}

TEST(Detokenize, JoinsWithSingleSpace) {
  EXPECT_EQ(detokenize(toks({"a", "b"})), "a b");
  EXPECT_EQ(detokenize(TokenSequence{}), "");
  EXPECT_EQ(detokenize(tokenize("  x \t\n y  z ")), "x y z");
}

TEST(Detokenize, RoundTripLaw) {
  std::mt19937 rng(7);
  const std::vector<std::string> alphabet{"a", "bb", "čč", ".", "42", "x-y"};
  for (int trial = 0; trial < 200; ++trial) {
    TokenSequence x;
    const int n = static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) x.emplace_back(alphabet[rng() % alphabet.size()]);
    EXPECT_EQ(tokenize(detokenize(x)), x);
    const auto s = detokenize(x);
    EXPECT_EQ(s.find("  "), std::string::npos);
    if (!s.empty()) {
      EXPECT_NE(s.front(), ' ');
      EXPECT_NE(s.back(), ' ');
    }
  }
}

TEST(CharNgrams, Examples) {
  const auto two = char_ngrams("ab cd", 2);
  EXPECT_EQ(two.counts, (std::map<std::string, std::size_t>{{"ab", 1}, {"bc", 1}, {"cd", 1}}));
  EXPECT_EQ(char_ngrams("aaa", 1).counts, (std::map<std::string, std::size_t>{{"a", 3}}));
  EXPECT_TRUE(char_ngrams("a", 2).counts.empty());
  EXPECT_THROW(char_ngrams("abc", 0), InvalidArgument);
}

TEST(CharNgrams, MultibyteCharactersCountOnce) {
  const auto one = char_ngrams("čč", 1);
  EXPECT_EQ(one.counts.size(), 1u);
  EXPECT_EQ(one.count("č"), 2u);
  EXPECT_EQ(char_ngrams("čab", 3).total(), 1u);
}

TEST(CharNgrams, InvariantUnderWhitespaceInsertion) {
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(char_ngrams("thecatsat", n).counts, char_ngrams(" the\tcat  sat\n", n).counts);
  }
}

TEST(WordNgrams, Examples) {
  EXPECT_EQ(word_ngrams(toks({"a", "b", "a"}), 1).counts,
            (std::map<std::string, std::size_t>{{"a", 2}, {"b", 1}}));
  EXPECT_EQ(word_ngrams(toks({"a", "b", "c"}), 2).counts,
            (std::map<std::string, std::size_t>{{"a b", 1}, {"b c", 1}}));
  EXPECT_TRUE(word_ngrams(TokenSequence{}, 1).counts.empty());
  EXPECT_THROW(word_ngrams(toks({"a"}), 0), InvalidArgument);
}

TEST(WordNgrams, TotalEqualsWindowCount) {
  const auto t = tokenize("one two three two one four");
  for (std::size_t n = 1; n <= 8; ++n) {
    const std::size_t expected = t.size() >= n ? t.size() - n + 1 : 0;
    EXPECT_EQ(word_ngrams(t, n).total(), expected) << "order " << n;
  }
}

TEST(Utf8, InvalidBytesBecomeReplacement) {
  const auto d = text::decode_utf8("a\xFF" "b");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[1], U'�');
  EXPECT_EQ(text::encode_utf8(text::decode_utf8("žluťoučký")), "žluťoučký");
}
