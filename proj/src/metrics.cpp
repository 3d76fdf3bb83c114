#include "metricga/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metricga/error.hpp"

namespace metricga::metrics {

namespace {

using WordNgramMap = std::unordered_map<std::string, std::size_t>;

void count_word_ngrams(std::span<const Token> tokens, std::size_t order, WordNgramMap& out) {
  if (tokens.size() < order) return;
  std::string key;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    key.clear();
    for (std::size_t k = 0; k < order; ++k) {
      if (k) key.push_back(' ');
      key += tokens[i + k].str();
    }
    ++out[key];
  }
}

constexpr double kPercent = 100.0;

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

double bleu_from_stats(const BleuStats& s, BleuSmoothing smoothing, bool effective_order) {
  if (std::all_of(s.matches.begin(), s.matches.end(), [](std::size_t m) { return m == 0; })) {
    return 0.0;
  }
  double bp = 1.0;
  if (s.hyp_len < s.ref_len) {
    bp = std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.hyp_len));
  }

  // Precisions are kept as fractions so that a perfect match yields
  // exp(0) and therefore exactly 100.
  std::array<double, kBleuMaxOrder> precision{};
  std::size_t used_orders = kBleuMaxOrder;
  double smooth = 1.0;
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    if (s.totals[n] == 0) break;
    if (effective_order) used_orders = n + 1;
    const auto total = static_cast<double>(s.totals[n]);
    if (s.matches[n] == 0) {
      if (smoothing == BleuSmoothing::exp) {
        smooth *= 2.0;
        precision[n] = 1.0 / (smooth * total);
      }
    } else {
      precision[n] = static_cast<double>(s.matches[n]) / total;
    }
  }

  double log_sum = 0.0;
  for (std::size_t n = 0; n < used_orders; ++n) {
    if (precision[n] <= 0.0) return 0.0;
    log_sum += std::log(precision[n]);
  }
  return kPercent * bp * std::exp(log_sum / static_cast<double>(used_orders));
}

BleuReference::BleuReference(std::span<const Token> ref) : length_(ref.size()) {
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) count_word_ngrams(ref, n + 1, ngrams_[n]);
}

BleuStats BleuReference::stats(std::span<const Token> hyp) const {
  BleuStats s;
  s.hyp_len = hyp.size();
  s.ref_len = length_;
  WordNgramMap counts;
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    counts.clear();
    count_word_ngrams(hyp, n + 1, counts);
    s.totals[n] = hyp.size() > n ? hyp.size() - n : 0;
    for (const auto& [key, c] : counts) {
      const auto it = ngrams_[n].find(key);
      if (it != ngrams_[n].end()) s.matches[n] += std::min(c, it->second);
    }
  }
  return s;
}

double sentence_bleu(std::span<const Token> hyp, std::span<const BleuReference> refs) {
  if (refs.empty()) throw InvalidArgument("sentence_bleu needs at least one reference");
  double sum = 0.0;
  for (const auto& r : refs) sum += bleu_from_stats(r.stats(hyp), BleuSmoothing::exp, true);
  return sum / static_cast<double>(refs.size());
}

double sentence_bleu(std::span<const Token> hyp, std::span<const TokenSequence> refs) {
  if (refs.empty()) throw InvalidArgument("sentence_bleu needs at least one reference");
  std::vector<BleuReference> prepared;
  prepared.reserve(refs.size());
  for (const auto& r : refs) prepared.emplace_back(r);
  return sentence_bleu(hyp, std::span<const BleuReference>(prepared));
}

double sentence_bleu(std::string_view hyp, std::span<const std::string> refs) {
  std::vector<TokenSequence> tokenized;
  tokenized.reserve(refs.size());
  for (const auto& r : refs) tokenized.push_back(tokenize(r));
  const auto hyp_tokens = tokenize(hyp);
  return sentence_bleu(std::span<const Token>(hyp_tokens), std::span<const TokenSequence>(tokenized));
}

double corpus_bleu(std::span<const BleuSegment> segments) {
  if (segments.empty()) throw InvalidArgument("corpus_bleu needs a non-empty corpus");
  const std::size_t streams = segments.front().refs.size();
  if (streams == 0) throw InvalidArgument("corpus_bleu needs references");
  for (const auto& seg : segments) {
    if (seg.refs.size() != streams) {
      throw InvalidArgument("corpus_bleu needs the same number of references per segment");
    }
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < streams; ++r) {
    BleuStats pooled;
    for (const auto& seg : segments) pooled += BleuReference(seg.refs[r]).stats(seg.hyp);
    sum += bleu_from_stats(pooled, BleuSmoothing::none, false);
  }
  return sum / static_cast<double>(streams);
}

ChrfStats& ChrfStats::operator+=(const ChrfStats& other) {
  for (std::size_t n = 0; n < kChrfCharOrder; ++n) {
    hyp[n] += other.hyp[n];
    ref[n] += other.ref[n];
    match[n] += other.match[n];
  }
  return *this;
}

double chrf_from_stats(const ChrfStats& s, double beta) {
  const double factor = beta * beta;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  std::size_t effective = 0;
  for (std::size_t n = 0; n < kChrfCharOrder; ++n) {
    if (s.hyp[n] == 0 || s.ref[n] == 0) continue;
    avg_prec += static_cast<double>(s.match[n]) / static_cast<double>(s.hyp[n]);
    avg_rec += static_cast<double>(s.match[n]) / static_cast<double>(s.ref[n]);
    ++effective;
  }
  if (effective == 0) return 0.0;
  avg_prec /= static_cast<double>(effective);
  avg_rec /= static_cast<double>(effective);
  if (avg_prec + avg_rec <= 0.0) return 0.0;
  return kPercent * (1.0 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec);
}

ChrfReference::ChrfReference(std::string_view ref)
    : chars_(std::make_unique<std::u32string>(text::strip_whitespace(ref))) {
  const std::u32string_view view(*chars_);
  for (std::size_t n = 0; n < kChrfCharOrder; ++n) {
    const std::size_t order = n + 1;
    if (view.size() < order) break;
    totals_[n] = view.size() - order + 1;
    for (std::size_t i = 0; i + order <= view.size(); ++i) ++ngrams_[n][view.substr(i, order)];
  }
}

ChrfStats ChrfReference::stats(std::string_view hyp) const {
  ChrfStats s;
  const auto chars = text::strip_whitespace(hyp);
  const std::u32string_view view(chars);
  std::unordered_map<std::u32string_view, std::size_t> counts;
  for (std::size_t n = 0; n < kChrfCharOrder; ++n) {
    const std::size_t order = n + 1;
    s.ref[n] = totals_[n];
    if (view.size() < order) continue;
    s.hyp[n] = view.size() - order + 1;
    counts.clear();
    for (std::size_t i = 0; i + order <= view.size(); ++i) ++counts[view.substr(i, order)];
    for (const auto& [key, c] : counts) {
      const auto it = ngrams_[n].find(key);
      if (it != ngrams_[n].end()) s.match[n] += std::min(c, it->second);
    }
  }
  return s;
}

double sentence_chrf(std::string_view hyp, std::span<const ChrfReference> refs) {
  if (refs.empty()) throw InvalidArgument("sentence_chrf needs at least one reference");
  double sum = 0.0;
  for (const auto& r : refs) sum += chrf_from_stats(r.stats(hyp));
  return sum / static_cast<double>(refs.size());
}

double sentence_chrf(std::string_view hyp, std::span<const std::string> refs) {
  if (refs.empty()) throw InvalidArgument("sentence_chrf needs at least one reference");
  std::vector<ChrfReference> prepared;
  prepared.reserve(refs.size());
  for (const auto& r : refs) prepared.emplace_back(r);
  return sentence_chrf(hyp, std::span<const ChrfReference>(prepared));
}

double corpus_chrf(std::span<const ChrfSegment> segments) {
  if (segments.empty()) throw InvalidArgument("corpus_chrf needs a non-empty corpus");
  const std::size_t streams = segments.front().refs.size();
  if (streams == 0) throw InvalidArgument("corpus_chrf needs references");
  for (const auto& seg : segments) {
    if (seg.refs.size() != streams) {
      throw InvalidArgument("corpus_chrf needs the same number of references per segment");
    }
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < streams; ++r) {
    ChrfStats pooled;
    for (const auto& seg : segments) pooled += ChrfReference(seg.refs[r]).stats(seg.hyp);
    sum += chrf_from_stats(pooled);
  }
  return sum / static_cast<double>(streams);
}

double length_normalized_logprob(const HypothesisRecord& h) {
  if (!h.logprob) return -std::numeric_limits<double>::infinity();
  const auto n = tokenize(h.text).size();
  return *h.logprob / static_cast<double>(std::max<std::size_t>(1, n));
}

}  // namespace metricga::metrics
