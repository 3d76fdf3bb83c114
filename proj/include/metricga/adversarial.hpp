#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "metricga/fitness.hpp"
#include "metricga/ga_engine.hpp"
#include "metricga/mutation_sources.hpp"
#include "metricga/sentence_case.hpp"

namespace metricga::adversarial {

struct Margins {
  double m_o = 1e-3;
  double m_h = 1e-3;
};

struct AdversarialRecord {
  std::string case_id;
  std::string src;
  // First reference of the case; scores use all of them.
  std::string ref;
  std::string best_init;
  std::string best_ga;
  double o_init = 0.0;
  double o_ga = 0.0;
  double h_init = 0.0;
  double h_ga = 0.0;
  bool is_adversarial = false;
};

// o_init + m_o < o_ga  and  h_init > h_ga + m_h
bool is_adversarial(double o_init, double o_ga, double h_init, double h_ga, const Margins& margins = {});

// Rank each case's hypotheses by the objective (oracle mode), run the GA
// towards the objective and score both texts with the held-out component.
// One record per case; per-case seeds are derived from config.seed and the
// case id.
std::vector<AdversarialRecord> mine(std::span<const SentenceCase> cases,
                                    const std::vector<fitness::FitnessComponent>& objective,
                                    const fitness::FitnessComponent& held_out,
                                    const mutation::PoolRecipe& pools, const ga::GAConfig& config,
                                    const Margins& margins = {});

AdversarialRecord mine_case(const SentenceCase& c, const std::vector<fitness::FitnessComponent>& objective,
                            const fitness::FitnessComponent& held_out, const mutation::TokenPool& pool,
                            const ga::GAConfig& config, const Margins& margins = {});

struct MiningCounts {
  std::size_t cases = 0;
  std::size_t improved = 0;     // o_init + m_o < o_ga
  std::size_t adversarial = 0;  // improved and held-out degraded
};

MiningCounts count(std::span<const AdversarialRecord> records, const Margins& margins = {});

nlohmann::json record_to_json(const AdversarialRecord& r);
AdversarialRecord record_from_json(const nlohmann::json& j);

}  // namespace metricga::adversarial
