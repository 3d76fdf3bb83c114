#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metricga/sentence_case.hpp"
#include "metricga/textcore.hpp"

namespace metricga::mutation {

enum class Provenance { init, lexicon, wordlist };

// Deduplicated tokens in first-seen order.
class TokenPool {
 public:
  TokenPool() = default;
  TokenPool(std::span<const Token> tokens, Provenance provenance);

  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  const std::set<Provenance>& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  bool contains(const Token& t) const;

  friend TokenPool union_pools(std::span<const TokenPool> pools);

 private:
  void add(const Token& t);

  std::vector<Token> tokens_;
  std::set<std::string> index_;
  std::set<Provenance> provenance_;
};

struct LexiconEntry {
  std::string source_lemma;
  std::vector<Token> target_forms;
};

using Lemmatizer = std::function<std::string(const std::string&)>;

// Every token of every hypothesis. Throws InvalidArgument on an empty list.
TokenPool pool_from_init(std::span<const TokenSequence> hypotheses);

// Target forms of every source token whose lemma has an entry. The default
// lemmatizer is the identity.
TokenPool pool_from_lexicon(std::span<const Token> src_tokens, std::span<const LexiconEntry> lexicon,
                            const Lemmatizer& lemmatize = {});

// One or more whitespace-separated tokens per line; blank lines skipped.
TokenPool pool_from_wordlist(std::span<const std::string> lines);

TokenPool union_pools(std::span<const TokenPool> pools);

// Throws IoError if the file cannot be read.
std::vector<std::string> read_lines(const std::string& path);

// `source_lemma<TAB>target_form` per line; repeated lemmas accumulate forms.
// Throws ParseError for a line without a tab.
std::vector<LexiconEntry> parse_lexicon(std::span<const std::string> lines);
std::vector<LexiconEntry> load_lexicon(const std::string& path);

TokenPool load_wordlist(const std::string& path);

// Which sources make up a case's mutation pool; composed per case because
// the init and lexicon pools depend on the case.
struct PoolRecipe {
  bool init = false;
  std::optional<std::vector<LexiconEntry>> lexicon;
  std::optional<TokenPool> wordlist;

  TokenPool build(const SentenceCase& c) const;
};

}  // namespace metricga::mutation
