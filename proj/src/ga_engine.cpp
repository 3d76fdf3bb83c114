#include "metricga/ga_engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "metricga/error.hpp"

namespace metricga::ga {

void GAConfig::validate() const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw InvalidArgument("population size must be an even number >= 2");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw InvalidArgument("crossover rate must lie in [0, 1]");
  }
  if (!(length_factor >= 1.0)) throw InvalidArgument("length factor must be >= 1");
  if (tournament_size < 1) throw InvalidArgument("tournament size must be >= 1");
  if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
    throw InvalidArgument("mutation rate must lie in [0, 1]");
  }
  if (!(indel_ratio >= 0.0)) throw InvalidArgument("indel ratio must be >= 0");
}

MutationRates MutationRates::for_length(std::size_t length, const GAConfig& config) {
  const double m = config.mutation_rate.value_or(1.0 / static_cast<double>(std::max<std::size_t>(1, length)));
  return {m, m * config.indel_ratio};
}

std::size_t chromosome_length(std::span<const TokenSequence> hypotheses, double k) {
  if (hypotheses.empty()) throw InvalidArgument("chromosome_length needs at least one hypothesis");
  if (!(k >= 1.0)) throw InvalidArgument("length factor must be >= 1");
  std::size_t longest = 0;
  for (const auto& h : hypotheses) longest = std::max(longest, h.size());
  // The slack absorbs representation error such as 2 * 10 * 1.1 > 22.
  const double raw = 2.0 * static_cast<double>(longest) * k;
  auto length = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  if (length % 2 != 0) ++length;
  return std::max<std::size_t>(length, 2);
}

Chromosome encode(std::span<const Token> tokens, std::size_t length) {
  if (2 * tokens.size() > length) {
    throw InvalidArgument("hypothesis of " + std::to_string(tokens.size()) +
                          " tokens does not fit a chromosome of length " + std::to_string(length));
  }
  Chromosome c;
  c.genes.reserve(length);
  for (const auto& t : tokens) {
    c.genes.emplace_back(t);
    c.genes.emplace_back();
  }
  c.genes.resize(length);
  return c;
}

TokenSequence decode(const Chromosome& c) {
  TokenSequence out;
  for (const auto& g : c.genes) {
    if (!g.is_empty()) out.emplace_back(g.text());
  }
  return out;
}

std::string decode_text(const Chromosome& c) {
  std::string out;
  for (const auto& g : c.genes) {
    if (g.is_empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += g.text();
  }
  return out;
}

std::size_t tournament_winner(std::span<const double> totals, std::span<const std::size_t> members) {
  std::size_t best = members.front();
  for (auto m : members) {
    if (totals[m] > totals[best] || (totals[m] == totals[best] && m < best)) best = m;
  }
  return best;
}

std::size_t tournament_select(std::span<const double> totals, std::size_t focus,
                              std::size_t tournament_size, Rng& rng) {
  const std::size_t n = totals.size();
  std::vector<std::size_t> members{focus};
  if (n > 1) {
    std::uniform_int_distribution<std::size_t> other(0, n - 2);
    for (std::size_t k = 1; k < tournament_size; ++k) {
      const auto r = other(rng);
      members.push_back(r >= focus ? r + 1 : r);
    }
  }
  return tournament_winner(totals, members);
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& p1, const Chromosome& p2, std::size_t i) {
  const std::size_t length = p1.length();
  if (p2.length() != length) throw InvalidArgument("crossover parents differ in length");
  if (i < 1 || i + 1 > length) throw InvalidArgument("crossover index out of range");
  Chromosome c1;
  Chromosome c2;
  c1.genes.reserve(length);
  c2.genes.reserve(length);
  c1.genes.insert(c1.genes.end(), p1.genes.begin(), p1.genes.begin() + static_cast<std::ptrdiff_t>(i));
  c1.genes.insert(c1.genes.end(), p2.genes.begin() + static_cast<std::ptrdiff_t>(i), p2.genes.end());
  c2.genes.insert(c2.genes.end(), p2.genes.begin(), p2.genes.begin() + static_cast<std::ptrdiff_t>(i));
  c2.genes.insert(c2.genes.end(), p1.genes.begin() + static_cast<std::ptrdiff_t>(i), p1.genes.end());
  return {std::move(c1), std::move(c2)};
}

Chromosome mutate(Chromosome c, const mutation::TokenPool& pool, Rng& rng, const MutationRates& rates) {
  if (pool.empty()) throw InvalidArgument("mutation pool is empty");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const auto& tokens = pool.tokens();
  for (auto& g : c.genes) {
    const double u = unit(rng);
    if (!g.is_empty()) {
      if (u < rates.replace) {
        g = Gene(tokens[pick(rng)]);
      } else if (u < rates.replace + rates.indel) {
        g = Gene::empty();
      }
    } else if (u < rates.indel) {
      g = Gene(tokens[pick(rng)]);
    }
  }
  return c;
}

namespace {

class PopulationScorer {
 public:
  PopulationScorer(const fitness::FitnessSpec& spec, const std::string& src) : evaluator_(spec, src) {}

  // Fitness depends only on the decoded text, so values are memoised
  // across generations.
  void score(std::vector<Individual>& population) {
    std::vector<std::string> texts;
    texts.reserve(population.size());
    std::vector<std::string> pending;
    std::unordered_set<std::string> queued;
    for (const auto& ind : population) {
      texts.push_back(decode_text(ind.chromosome));
      if (!memo_.count(texts.back()) && queued.insert(texts.back()).second) pending.push_back(texts.back());
    }
    if (!pending.empty()) {
      auto values = evaluator_.evaluate(std::span<const std::string>(pending));
      for (std::size_t k = 0; k < pending.size(); ++k) memo_.emplace(pending[k], std::move(values[k]));
    }
    for (std::size_t i = 0; i < population.size(); ++i) population[i].fitness = memo_.at(texts[i]);
  }

 private:
  fitness::Evaluator evaluator_;
  std::unordered_map<std::string, fitness::FitnessValue> memo_;
};

struct BestTracker {
  std::optional<Individual> best;
  std::size_t generation = 0;

  void offer(std::span<const Individual> population, std::size_t g) {
    for (const auto& ind : population) {
      if (!best || ind.fitness->total > best->fitness->total) {
        best = ind;
        generation = g;
      }
    }
  }
};

}  // namespace

GAResult run(const SentenceCase& c, const fitness::FitnessSpec& spec, const mutation::TokenPool& pool,
             const GAConfig& config, const GenerationObserver& observer) {
  config.validate();
  if (c.hyps.empty()) throw InvalidArgument("case '" + c.id + "' has no initial hypotheses");
  if (config.generations > 0 && pool.empty()) throw InvalidArgument("mutation pool is empty");

  std::vector<TokenSequence> initial_tokens;
  std::unordered_set<std::string> initial_texts;
  for (const auto& h : c.hyps) {
    initial_tokens.push_back(tokenize(h.text));
    initial_texts.insert(detokenize(initial_tokens.back()));
  }
  const std::size_t length = chromosome_length(initial_tokens, config.length_factor);
  const auto rates = MutationRates::for_length(length, config);
  const std::size_t pop_size = config.population_size;

  std::vector<Chromosome> seeds;
  for (const auto& t : initial_tokens) seeds.push_back(encode(t, length));
  std::vector<Individual> population;
  population.reserve(pop_size);
  for (std::size_t j = 0; j < pop_size; ++j) {
    population.push_back({seeds[j % seeds.size()], std::nullopt, 0, true});
  }

  Rng rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> cut(1, length - 1);
  PopulationScorer scorer(spec, c.src);
  BestTracker tracker;

  scorer.score(population);
  tracker.offer(population, 0);
  if (observer) observer(0, population);

  GAResult result;
  result.trace.reserve(config.generations);
  std::vector<double> totals(pop_size);
  std::vector<std::size_t> parents(pop_size);

  for (std::size_t g = 1; g <= config.generations; ++g) {
    for (std::size_t i = 0; i < pop_size; ++i) totals[i] = population[i].fitness->total;
    for (std::size_t s = 0; s < pop_size; ++s) {
      parents[s] = tournament_select(totals, s, config.tournament_size, rng);
    }

    std::vector<Individual> next;
    next.reserve(pop_size);
    for (std::size_t s = 0; s < pop_size; s += 2) {
      const auto& p1 = population[parents[s]].chromosome;
      const auto& p2 = population[parents[s + 1]].chromosome;
      Chromosome c1;
      Chromosome c2;
      if (unit(rng) < config.crossover_rate) {
        std::tie(c1, c2) = crossover(p1, p2, cut(rng));
      } else {
        c1 = p1;
        c2 = p2;
      }
      next.push_back({std::move(c1), std::nullopt, g, false});
      next.push_back({std::move(c2), std::nullopt, g, false});
    }
    for (auto& ind : next) ind.chromosome = mutate(std::move(ind.chromosome), pool, rng, rates);

    population = std::move(next);
    scorer.score(population);
    tracker.offer(population, g);

    TracePoint point{population.front().fitness->total, 0.0};
    double sum = 0.0;
    for (const auto& ind : population) {
      point.best = std::max(point.best, ind.fitness->total);
      sum += ind.fitness->total;
    }
    point.mean = sum / static_cast<double>(pop_size);
    result.trace.push_back(point);
    if (observer) observer(g, population);
  }

  result.best_text = decode_text(tracker.best->chromosome);
  result.best_fitness = *tracker.best->fitness;
  result.best_generation = tracker.generation;
  result.is_novel = initial_texts.count(result.best_text) == 0;
  return result;
}

}  // namespace metricga::ga
