#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metricga/sentence_case.hpp"
#include "metricga/textcore.hpp"

// Native string metrics. BLEU and ChrF are on a 0-100 scale; an empty
// hypothesis scores 0 under every metric.
namespace metricga::metrics {

inline constexpr std::size_t kBleuMaxOrder = 4;
inline constexpr std::size_t kChrfCharOrder = 6;
inline constexpr double kChrfBeta = 2.0;

struct BleuStats {
  std::array<std::size_t, kBleuMaxOrder> matches{};
  std::array<std::size_t, kBleuMaxOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& other);
};

enum class BleuSmoothing { none, exp };

// `effective_order` drops orders for which the hypothesis has no n-grams
// from the geometric mean (sentence-level behaviour).
double bleu_from_stats(const BleuStats& stats, BleuSmoothing smoothing, bool effective_order);

// Reference n-gram counts computed once and matched against many hypotheses.
class BleuReference {
 public:
  explicit BleuReference(std::span<const Token> ref);

  BleuStats stats(std::span<const Token> hyp) const;
  std::size_t length() const noexcept { return length_; }

 private:
  std::array<std::unordered_map<std::string, std::size_t>, kBleuMaxOrder> ngrams_;
  std::size_t length_ = 0;
};

// Mean over references of single-reference BLEU with exponential smoothing.
double sentence_bleu(std::span<const Token> hyp, std::span<const TokenSequence> refs);
double sentence_bleu(std::span<const Token> hyp, std::span<const BleuReference> refs);
double sentence_bleu(std::string_view hyp, std::span<const std::string> refs);

struct BleuSegment {
  TokenSequence hyp;
  std::vector<TokenSequence> refs;
};

// Pooled counts, no smoothing. With R references per segment the result is
// the mean of the R single-reference corpus scores; every segment must
// carry the same number of references.
double corpus_bleu(std::span<const BleuSegment> segments);

struct ChrfStats {
  std::array<std::size_t, kChrfCharOrder> hyp{};
  std::array<std::size_t, kChrfCharOrder> ref{};
  std::array<std::size_t, kChrfCharOrder> match{};

  ChrfStats& operator+=(const ChrfStats& other);
};

// Orders where either side has no n-grams are skipped in the macro-average.
double chrf_from_stats(const ChrfStats& stats, double beta = kChrfBeta);

class ChrfReference {
 public:
  explicit ChrfReference(std::string_view ref);

  ChrfStats stats(std::string_view hyp) const;

  ChrfReference(const ChrfReference&) = delete;
  ChrfReference& operator=(const ChrfReference&) = delete;
  ChrfReference(ChrfReference&&) noexcept = default;
  ChrfReference& operator=(ChrfReference&&) noexcept = default;

 private:
  // Keys are views into `chars_`; the buffer is never modified after
  // construction so the views stay valid across moves.
  std::unique_ptr<std::u32string> chars_;
  std::array<std::unordered_map<std::u32string_view, std::size_t>, kChrfCharOrder> ngrams_;
  std::array<std::size_t, kChrfCharOrder> totals_{};
};

double sentence_chrf(std::string_view hyp, std::span<const std::string> refs);
double sentence_chrf(std::string_view hyp, std::span<const ChrfReference> refs);

struct ChrfSegment {
  std::string hyp;
  std::vector<std::string> refs;
};

double corpus_chrf(std::span<const ChrfSegment> segments);

// logprob / max(1, token count). A missing logprob ranks below everything.
double length_normalized_logprob(const HypothesisRecord& h);

}  // namespace metricga::metrics
