#include "metricga/mutation_sources.hpp"

#include <fstream>
#include <map>

#include "metricga/error.hpp"

namespace metricga::mutation {

TokenPool::TokenPool(std::span<const Token> tokens, Provenance provenance) {
  provenance_.insert(provenance);
  for (const auto& t : tokens) add(t);
}

bool TokenPool::contains(const Token& t) const { return index_.count(t.str()) != 0; }

void TokenPool::add(const Token& t) {
  if (index_.insert(t.str()).second) tokens_.push_back(t);
}

TokenPool pool_from_init(std::span<const TokenSequence> hypotheses) {
  if (hypotheses.empty()) throw InvalidArgument("init pool needs at least one hypothesis");
  TokenSequence all;
  for (const auto& h : hypotheses) all.insert(all.end(), h.begin(), h.end());
  return TokenPool(all, Provenance::init);
}

TokenPool pool_from_lexicon(std::span<const Token> src_tokens, std::span<const LexiconEntry> lexicon,
                            const Lemmatizer& lemmatize) {
  std::map<std::string_view, const LexiconEntry*> by_lemma;
  for (const auto& e : lexicon) by_lemma.emplace(e.source_lemma, &e);
  TokenSequence forms;
  for (const auto& t : src_tokens) {
    const std::string lemma = lemmatize ? lemmatize(t.str()) : t.str();
    const auto it = by_lemma.find(lemma);
    if (it == by_lemma.end()) continue;
    forms.insert(forms.end(), it->second->target_forms.begin(), it->second->target_forms.end());
  }
  return TokenPool(forms, Provenance::lexicon);
}

TokenPool pool_from_wordlist(std::span<const std::string> lines) {
  TokenSequence words;
  for (const auto& line : lines) {
    auto toks = tokenize(line);
    words.insert(words.end(), toks.begin(), toks.end());
  }
  return TokenPool(words, Provenance::wordlist);
}

TokenPool union_pools(std::span<const TokenPool> pools) {
  TokenPool out;
  for (const auto& p : pools) {
    out.provenance_.insert(p.provenance_.begin(), p.provenance_.end());
    for (const auto& t : p.tokens_) out.add(t);
  }
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return lines;
}

std::vector<LexiconEntry> parse_lexicon(std::span<const std::string> lines) {
  std::vector<LexiconEntry> entries;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(i + 1, "lexicon line has no tab");
    const auto lemma = tokenize(line.substr(0, tab));
    const auto forms = tokenize(line.substr(tab + 1));
    if (lemma.size() != 1 || forms.empty()) {
      throw ParseError(i + 1, "expected 'lemma<TAB>form'");
    }
    const auto [it, fresh] = index.emplace(lemma.front().str(), entries.size());
    if (fresh) entries.push_back({lemma.front().str(), {}});
    auto& target = entries[it->second].target_forms;
    target.insert(target.end(), forms.begin(), forms.end());
  }
  return entries;
}

std::vector<LexiconEntry> load_lexicon(const std::string& path) {
  const auto lines = read_lines(path);
  return parse_lexicon(lines);
}

TokenPool load_wordlist(const std::string& path) {
  const auto lines = read_lines(path);
  return pool_from_wordlist(lines);
}

TokenPool PoolRecipe::build(const SentenceCase& c) const {
  std::vector<TokenPool> parts;
  if (init) {
    std::vector<TokenSequence> hyps;
    for (const auto& h : c.hyps) hyps.push_back(tokenize(h.text));
    parts.push_back(pool_from_init(hyps));
  }
  if (lexicon) parts.push_back(pool_from_lexicon(tokenize(c.src), *lexicon));
  if (wordlist) parts.push_back(*wordlist);
  return union_pools(parts);
}

}  // namespace metricga::mutation
