#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metricga/metrics.hpp"
#include "metricga/scorer_bridge.hpp"
#include "metricga/sentence_case.hpp"

namespace metricga::fitness {

enum class MetricKind { bleu, chrf, external };

struct FitnessComponent {
  MetricKind metric = MetricKind::chrf;
  // Display name; "bleu" / "chrf" for the native metrics.
  std::string name;
  std::shared_ptr<scoring::ScorerClient> scorer;  // external only
  bool needs_reference = true;
  bool needs_source = false;

  static FitnessComponent bleu();
  static FitnessComponent chrf();
  static FitnessComponent external(std::string name, std::shared_ptr<scoring::ScorerClient> scorer,
                                   bool needs_reference, bool needs_source = true);
};

// Fitness against the true references.
struct OracleMode {
  std::vector<std::string> references;
};

// Expected utility against a fixed pseudo-reference set.
struct MbrMode {
  std::vector<std::string> pseudo_references;
};

using FitnessMode = std::variant<OracleMode, MbrMode>;

struct FitnessSpec {
  std::vector<FitnessComponent> components;
  FitnessMode mode;

  bool is_mbr() const noexcept { return std::holds_alternative<MbrMode>(mode); }
  // References (oracle) or pseudo-references (MBR).
  const std::vector<std::string>& targets() const noexcept;
  bool needs_targets() const noexcept;
  // Throws InvalidArgument.
  void validate() const;

  static FitnessSpec oracle(std::vector<FitnessComponent> components,
                            std::vector<std::string> references);
  static FitnessSpec mbr(std::vector<FitnessComponent> components,
                         std::vector<std::string> pseudo_references);
};

enum class ModeKind { oracle, mbr };

// Whitespace-normalised hypothesis texts, in input order.
std::vector<std::string> normalized_hypotheses(const SentenceCase& c);
// Distinct normalised hypothesis texts in first-seen order.
std::vector<std::string> pseudo_references(const SentenceCase& c);

// Oracle mode uses the case references; MBR mode uses the case's
// pseudo-references, which stay fixed for the whole run.
FitnessSpec spec_for_case(const std::vector<FitnessComponent>& components, ModeKind kind,
                          const SentenceCase& c);

struct FitnessValue {
  double total = 0.0;
  std::vector<double> per_component;

  friend bool operator==(const FitnessValue&, const FitnessValue&) = default;
};

// Scores candidates for a single source sentence. Reference statistics are
// computed once at construction; reference-needing components average over
// every target, reference-free ones score (src, candidate) once.
class Evaluator {
 public:
  Evaluator(FitnessSpec spec, std::string src);

  FitnessValue evaluate(std::string_view candidate);
  // Distinct candidate strings are scored once; each external component
  // receives one batch.
  std::vector<FitnessValue> evaluate(std::span<const std::string> candidates);

  const FitnessSpec& spec() const noexcept { return spec_; }

 private:
  std::vector<std::vector<double>> score_components(std::span<const std::string> unique);

  FitnessSpec spec_;
  std::string src_;
  std::vector<metrics::BleuReference> bleu_refs_;
  std::vector<metrics::ChrfReference> chrf_refs_;
};

FitnessValue evaluate(const FitnessSpec& spec, std::string_view src, std::string_view candidate);

std::vector<FitnessValue> evaluate_population(const FitnessSpec& spec, std::string_view src,
                                              std::span<const std::string> candidates);

struct RankedCandidate {
  std::size_t index = 0;
  FitnessValue fitness;
};

// Candidates by total, descending; ties keep the lower original index first.
std::vector<RankedCandidate> rank(std::span<const FitnessValue> values);

std::vector<RankedCandidate> mbr_rank(const FitnessSpec& spec, std::string_view src,
                                      std::span<const std::string> candidates);

}  // namespace metricga::fitness
