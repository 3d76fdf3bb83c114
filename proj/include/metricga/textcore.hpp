#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metricga {

// A single whitespace-free, non-empty word. The empty gene of a chromosome
// is not a Token.
class Token {
 public:
  // Throws InvalidArgument for empty text or text containing whitespace.
  explicit Token(std::string text);

  const std::string& str() const noexcept { return text_; }
  std::size_t size() const noexcept { return text_.size(); }

  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;

 private:
  struct Trusted {};
  Token(std::string text, Trusted) : text_(std::move(text)) {}
  friend std::vector<Token> tokenize(std::string_view text);

  std::string text_;
};

using TokenSequence = std::vector<Token>;

// Multiset of n-grams of one fixed order. Keys are the concatenated units:
// characters are concatenated directly, words are joined with a single
// space (unambiguous because tokens never contain whitespace).
struct NgramCounts {
  std::size_t order = 1;
  std::map<std::string, std::size_t> counts;

  std::size_t total() const;
  std::size_t count(std::string_view key) const;
};

// Splits on runs of Unicode whitespace.
std::vector<Token> tokenize(std::string_view text);

std::string detokenize(std::span<const Token> tokens);

// Character n-grams over `text` with every whitespace character removed.
NgramCounts char_ngrams(std::string_view text, std::size_t order);

NgramCounts word_ngrams(std::span<const Token> tokens, std::size_t order);

namespace text {

bool is_space(char32_t c) noexcept;

// Lenient UTF-8 decoding: an invalid byte becomes U+FFFD and decoding
// resumes at the next byte.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);

// Code points of `text` with all whitespace removed.
std::u32string strip_whitespace(std::string_view text);

bool contains_whitespace(std::string_view text);

}  // namespace text

}  // namespace metricga
