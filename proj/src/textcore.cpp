#include "metricga/textcore.hpp"

#include <utility>

#include "metricga/error.hpp"

namespace metricga {

namespace text {
namespace {

struct Decoded {
  char32_t code_point;
  std::size_t length;
};

constexpr char32_t kReplacement = 0xFFFD;

Decoded decode_one(std::string_view s, std::size_t i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  if (lead < 0x80) return {lead, 1};

  std::size_t length = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    return {kReplacement, 1};
  }
  if (i + length > s.size()) return {kReplacement, 1};
  for (std::size_t k = 1; k < length; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {kReplacement, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms and surrogates are rejected.
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[length] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {kReplacement, 1};
  }
  return {cp, length};
}

}  // namespace

bool is_space(char32_t c) noexcept {
  // Same set as Python's str.isspace().
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x1C: case 0x1D: case 0x1E: case 0x1F: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const auto d = decode_one(text, i);
    out.push_back(d.code_point);
    i += d.length;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::u32string strip_whitespace(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const auto d = decode_one(text, i);
    if (!is_space(d.code_point)) out.push_back(d.code_point);
    i += d.length;
  }
  return out;
}

bool contains_whitespace(std::string_view text) {
  for (std::size_t i = 0; i < text.size();) {
    const auto d = decode_one(text, i);
    if (is_space(d.code_point)) return true;
    i += d.length;
  }
  return false;
}

}  // namespace text

Token::Token(std::string text) : text_(std::move(text)) {
  if (text_.empty()) throw InvalidArgument("token must not be empty");
  if (text::contains_whitespace(text_)) {
    throw InvalidArgument("token must not contain whitespace: '" + text_ + "'");
  }
}

std::size_t NgramCounts::total() const {
  std::size_t sum = 0;
  for (const auto& [key, n] : counts) sum += n;
  return sum;
}

std::size_t NgramCounts::count(std::string_view key) const {
  const auto it = counts.find(std::string(key));
  return it == counts.end() ? 0 : it->second;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t start = 0;
  bool in_token = false;
  for (std::size_t i = 0; i < s.size();) {
    const auto d = text::decode_one(s, i);
    if (text::is_space(d.code_point)) {
      if (in_token) {
        tokens.push_back(Token(std::string(s.substr(start, i - start)), Token::Trusted{}));
        in_token = false;
      }
    } else if (!in_token) {
      start = i;
      in_token = true;
    }
    i += d.length;
  }
  if (in_token) tokens.push_back(Token(std::string(s.substr(start)), Token::Trusted{}));
  return tokens;
}

std::string detokenize(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].str();
  }
  return out;
}

NgramCounts char_ngrams(std::string_view s, std::size_t order) {
  if (order == 0) throw InvalidArgument("n-gram order must be >= 1");
  NgramCounts result{order, {}};
  const auto chars = text::strip_whitespace(s);
  if (chars.size() < order) return result;
  for (std::size_t i = 0; i + order <= chars.size(); ++i) {
    ++result.counts[text::encode_utf8(std::u32string_view(chars).substr(i, order))];
  }
  return result;
}

NgramCounts word_ngrams(std::span<const Token> tokens, std::size_t order) {
  if (order == 0) throw InvalidArgument("n-gram order must be >= 1");
  NgramCounts result{order, {}};
  if (tokens.size() < order) return result;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    ++result.counts[detokenize(tokens.subspan(i, order))];
  }
  return result;
}

}  // namespace metricga
