#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metricga/fitness.hpp"
#include "metricga/mutation_sources.hpp"
#include "metricga/sentence_case.hpp"
#include "metricga/textcore.hpp"

namespace metricga::ga {

using Rng = std::mt19937_64;

// A token or the empty placeholder.
class Gene {
 public:
  Gene() = default;  // empty
  explicit Gene(Token token) : text_(std::move(token).str()) {}

  static Gene empty() { return Gene(); }

  bool is_empty() const noexcept { return text_.empty(); }
  // Empty string for the placeholder.
  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Gene&, const Gene&) = default;

 private:
  std::string text_;
};

struct Chromosome {
  std::vector<Gene> genes;

  std::size_t length() const noexcept { return genes.size(); }
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GAConfig {
  std::size_t population_size = 2000;
  std::size_t generations = 300;
  double crossover_rate = 0.1;
  double length_factor = 1.1;
  std::size_t tournament_size = 3;
  // Per-gene token replacement rate; 1/L when unset.
  std::optional<double> mutation_rate;
  // Insertion and deletion happen at mutation_rate * indel_ratio.
  double indel_ratio = 0.1;
  std::uint64_t seed = 0;

  // Throws InvalidArgument.
  void validate() const;
};

struct MutationRates {
  double replace = 0.0;
  double indel = 0.0;

  static MutationRates for_length(std::size_t length, const GAConfig& config);
};

// ceil(2 * longest * k), rounded up to an even number and at least 2.
std::size_t chromosome_length(std::span<const TokenSequence> hypotheses, double k);

// [t1, _, t2, _, ..., tn, _] right-padded with empty genes to `length`.
Chromosome encode(std::span<const Token> tokens, std::size_t length);
TokenSequence decode(const Chromosome& c);
std::string decode_text(const Chromosome& c);

// Highest total among `members`; ties go to the lowest index.
std::size_t tournament_winner(std::span<const double> totals, std::span<const std::size_t> members);

// Tournament around the individual at `focus`: the focus plus
// tournament_size - 1 opponents drawn uniformly from the other individuals
// (opponents may coincide with each other).
std::size_t tournament_select(std::span<const double> totals, std::size_t focus,
                              std::size_t tournament_size, Rng& rng);

// c1 = p1[:i] + p2[i:], c2 = p2[:i] + p1[i:], for 1 <= i <= L-1.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& p1, const Chromosome& p2, std::size_t i);

// One uniform draw u per gene. Token gene: u < replace swaps in a random
// pool token, replace <= u < replace + indel deletes it. Empty gene:
// u < indel inserts a random pool token.
Chromosome mutate(Chromosome c, const mutation::TokenPool& pool, Rng& rng, const MutationRates& rates);

struct Individual {
  Chromosome chromosome;
  std::optional<fitness::FitnessValue> fitness;
  std::size_t born_in_generation = 0;
  bool is_initial = false;
};

struct TracePoint {
  double best = 0.0;
  double mean = 0.0;
};

struct GAResult {
  std::string best_text;
  fitness::FitnessValue best_fitness;
  bool is_novel = false;
  std::size_t best_generation = 0;
  // One point per bred generation (1..G).
  std::vector<TracePoint> trace;
};

// Observer for property checks and logging; called after each population
// (including the initial one) has been evaluated.
using GenerationObserver = std::function<void(std::size_t generation, std::span<const Individual>)>;

// Generation 0 is the initial hypotheses replicated round-robin to the
// population size; with zero generations the result is a plain reranking
// of the initial hypotheses. The best individual ever evaluated is returned.
GAResult run(const SentenceCase& c, const fitness::FitnessSpec& spec, const mutation::TokenPool& pool,
             const GAConfig& config, const GenerationObserver& observer = {});

}  // namespace metricga::ga
