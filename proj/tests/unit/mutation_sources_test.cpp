#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "metricga/error.hpp"
#include "metricga/mutation_sources.hpp"

using namespace metricga;
using namespace metricga::mutation;

namespace {

using Strings = std::vector<std::string>;

Strings strs(const TokenPool& p) {
  Strings out;
  for (const auto& t : p.tokens()) out.push_back(t.str());
  return out;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(InitPool, Examples) {
  EXPECT_EQ(strs(pool_from_init(std::vector<TokenSequence>{tokenize("a b"), tokenize("b c")})), (Strings{"a", "b", "c"}));
  EXPECT_EQ(strs(pool_from_init(std::vector<TokenSequence>{tokenize("x y x")})), (Strings{"x", "y"}));
  const std::vector<TokenSequence> h{tokenize("q w e"), tokenize("e r")};
  EXPECT_EQ(strs(pool_from_init(h)), strs(pool_from_init(h)));
  EXPECT_THROW(pool_from_init(std::vector<TokenSequence>{}), InvalidArgument);
  EXPECT_EQ(pool_from_init(h).provenance(), (std::set<Provenance>{Provenance::init}));
}

TEST(LexiconPool, Examples) {
  const std::vector<LexiconEntry> lex{{"kočka", {Token("cat"), Token("cats")}}, {"pes", {Token("dog")}}};
  EXPECT_EQ(strs(pool_from_lexicon(tokenize("kočka"), lex)), (Strings{"cat", "cats"}));
  EXPECT_TRUE(pool_from_lexicon(tokenize("auto"), lex).empty());
  const Lemmatizer lemma = [](const std::string& s) { return s == "kočky" ? std::string("kočka") : s; };
  EXPECT_EQ(strs(pool_from_lexicon(tokenize("kočka kočky pes"), lex, lemma)), (Strings{"cat", "cats", "dog"}));
}

TEST(WordlistPool, Examples) {
  EXPECT_EQ(strs(pool_from_wordlist(Strings{"cat", "dog", ""})), (Strings{"cat", "dog"}));
  EXPECT_EQ(strs(pool_from_wordlist(Strings{"cat", "cat", "dog"})), (Strings{"cat", "dog"}));
  EXPECT_TRUE(pool_from_wordlist(Strings{}).empty());
  EXPECT_EQ(strs(pool_from_wordlist(Strings{"  a b ", "\tc"})), (Strings{"a", "b", "c"}));
}

TEST(Union, Examples) {
  const TokenPool ab(tokenize("a b"), Provenance::init);
  const TokenPool bc(tokenize("b c"), Provenance::wordlist);
  const TokenPool empty;
  EXPECT_EQ(strs(union_pools(std::vector<TokenPool>{ab, bc})), (Strings{"a", "b", "c"}));
  EXPECT_EQ(strs(union_pools(std::vector<TokenPool>{ab, empty})), strs(ab));
  const TokenPool cd(tokenize("c d"), Provenance::lexicon);
  const auto left = union_pools(std::vector<TokenPool>{union_pools(std::vector<TokenPool>{ab, bc}), cd});
  const auto right = union_pools(std::vector<TokenPool>{ab, union_pools(std::vector<TokenPool>{bc, cd})});
  const auto l = strs(left);
  const auto r = strs(right);
  EXPECT_EQ(std::set<std::string>(l.begin(), l.end()), std::set<std::string>(r.begin(), r.end()));
  EXPECT_EQ(union_pools(std::vector<TokenPool>{ab, bc}).provenance(),
            (std::set<Provenance>{Provenance::init, Provenance::wordlist}));
  EXPECT_TRUE(union_pools(std::vector<TokenPool>{ab, bc}).contains(Token("c")));
}

TEST(Lexicon, ParsesTsvAndAccumulates) {
  const auto lex = parse_lexicon(Strings{"kočka\tcat", "kočka\tcats", "", "pes\tdog"});
  ASSERT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex[0].source_lemma, "kočka");
  ASSERT_EQ(lex[0].target_forms.size(), 2u);
  EXPECT_EQ(lex[0].target_forms[1].str(), "cats");
  try {
    parse_lexicon(Strings{"a\tb", "no tab here"});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Files, LoadAndErrors) {
  const auto words = temp_file("mg_words.txt", "cat\ndog\n\ncat\n");
  EXPECT_EQ(strs(load_wordlist(words)), (Strings{"cat", "dog"}));
  const auto lex = temp_file("mg_lex.tsv", "pes\tdog\n");
  EXPECT_EQ(load_lexicon(lex).size(), 1u);
  EXPECT_TRUE(load_wordlist(temp_file("mg_empty.txt", "")).empty());
  EXPECT_THROW(load_wordlist("/nonexistent/words.txt"), IoError);
  std::remove(words.c_str());
  std::remove(lex.c_str());
}

TEST(PoolRecipe, ComposesPerCase) {
  SentenceCase c{"c", "kočka pije", {"the cat drinks"}, {{"a cat drinks", -1.0, Origin::beam}}};
  PoolRecipe r;
  r.init = true;
  r.lexicon = std::vector<LexiconEntry>{{"kočka", {Token("cat")}}, {"pije", {Token("drinks"), Token("drink")}}};
  r.wordlist = pool_from_wordlist(Strings{"zebra", "cat"});
  EXPECT_EQ(strs(r.build(c)), (Strings{"a", "cat", "drinks", "drink", "zebra"}));
  PoolRecipe none;
  EXPECT_TRUE(none.build(c).empty());
}

TEST(TokenPool, EveryTokenIsValidGenePayload) {
  const auto p = pool_from_wordlist(Strings{"  a\tb  ", "č d"});
  for (const auto& t : p.tokens()) {
    EXPECT_FALSE(t.str().empty());
    EXPECT_FALSE(text::contains_whitespace(t.str()));
  }
}
