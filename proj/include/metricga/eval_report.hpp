#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metricga/fitness.hpp"
#include "metricga/sentence_case.hpp"

namespace metricga::report {

enum class RerankKind { logprob, oracle, mbr };

struct RerankMode {
  RerankKind kind = RerankKind::logprob;
  // Summed metric for oracle / MBR reranking.
  std::vector<fitness::FitnessComponent> metric;

  static RerankMode logprob() { return {RerankKind::logprob, {}}; }
  static RerankMode oracle(std::vector<fitness::FitnessComponent> metric) {
    return {RerankKind::oracle, std::move(metric)};
  }
  static RerankMode mbr(std::vector<fitness::FitnessComponent> metric) {
    return {RerankKind::mbr, std::move(metric)};
  }
};

struct RerankChoice {
  std::size_t index = 0;
  // Length-normalised log-prob in logprob mode, the fitness otherwise.
  fitness::FitnessValue value;
};

// Ties go to the lowest index. Oracle mode without references throws
// InvalidArgument.
RerankChoice rerank_choice(const SentenceCase& c, const RerankMode& mode);

inline std::size_t rerank(const SentenceCase& c, const RerankMode& mode) {
  return rerank_choice(c, mode).index;
}

struct MetricValue {
  std::string name;
  double value = 0.0;
};

// Corpus BLEU / ChrF for native metrics; unweighted mean of oracle segment
// scores for external ones.
std::vector<MetricValue> corpus_report(std::span<const SentenceCase> cases,
                                       std::span<const std::string> chosen,
                                       std::span<const fitness::FitnessComponent> metrics);

// Per-segment oracle scores of `chosen`, one vector per metric.
std::vector<std::vector<double>> segment_scores(std::span<const SentenceCase> cases,
                                                std::span<const std::string> chosen,
                                                std::span<const fitness::FitnessComponent> metrics);

struct RatioTable {
  double improved = 0.0;
  double degraded = 0.0;
  double unchanged = 0.0;
};

// Percentages of segments where `ga` is strictly above, strictly below or
// exactly equal to `baseline`.
RatioTable ratio_table(std::span<const double> ga, std::span<const double> baseline);

struct BootstrapReport {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t resamples = 0;
  // Fraction of resamples where mean(a) <= mean(b).
  std::optional<double> p_better;
};

// Percentile bootstrap over segments resampled with replacement. The
// interval is the 2.5 / 97.5 percentile of the resampled means of `a`.
BootstrapReport paired_bootstrap(std::span<const double> a, std::span<const double> b,
                                 std::size_t resamples, std::uint64_t seed);

BootstrapReport bootstrap_ci(std::span<const double> a, std::size_t resamples, std::uint64_t seed);

}  // namespace metricga::report
