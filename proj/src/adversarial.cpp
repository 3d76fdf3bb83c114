#include "metricga/adversarial.hpp"

#include <nlohmann/json.hpp>

#include "metricga/error.hpp"

namespace metricga::adversarial {

bool is_adversarial(double o_init, double o_ga, double h_init, double h_ga, const Margins& margins) {
  return (o_init + margins.m_o < o_ga) && (h_init > h_ga + margins.m_h);
}

AdversarialRecord mine_case(const SentenceCase& c, const std::vector<fitness::FitnessComponent>& objective,
                            const fitness::FitnessComponent& held_out, const mutation::TokenPool& pool,
                            const ga::GAConfig& config, const Margins& margins) {
  if (c.refs.empty()) throw InvalidArgument("case '" + c.id + "' has no reference");
  const auto objective_spec = fitness::FitnessSpec::oracle(objective, c.refs);
  const auto held_out_spec = fitness::FitnessSpec::oracle({held_out}, c.refs);

  fitness::Evaluator o_eval(objective_spec, c.src);
  fitness::Evaluator h_eval(held_out_spec, c.src);

  // Scored exactly as the GA sees its initial individuals.
  std::vector<std::string> texts;
  for (const auto& h : c.hyps) texts.push_back(detokenize(tokenize(h.text)));
  const auto ranked = fitness::rank(o_eval.evaluate(std::span<const std::string>(texts)));

  AdversarialRecord rec;
  rec.case_id = c.id;
  rec.src = c.src;
  rec.ref = c.refs.front();
  rec.best_init = texts[ranked.front().index];
  rec.o_init = ranked.front().fitness.total;
  rec.h_init = h_eval.evaluate(rec.best_init).total;

  auto case_config = config;
  case_config.seed = case_seed(config.seed, c.id);
  const auto result = ga::run(c, objective_spec, pool, case_config);
  rec.best_ga = result.best_text;
  rec.o_ga = result.best_fitness.total;
  rec.h_ga = h_eval.evaluate(rec.best_ga).total;
  rec.is_adversarial = is_adversarial(rec.o_init, rec.o_ga, rec.h_init, rec.h_ga, margins);
  return rec;
}

std::vector<AdversarialRecord> mine(std::span<const SentenceCase> cases,
                                    const std::vector<fitness::FitnessComponent>& objective,
                                    const fitness::FitnessComponent& held_out,
                                    const mutation::PoolRecipe& pools, const ga::GAConfig& config,
                                    const Margins& margins) {
  for (const auto& c : cases) {
    if (c.refs.empty()) throw InvalidArgument("case '" + c.id + "' has no reference");
  }
  std::vector<AdversarialRecord> out;
  out.reserve(cases.size());
  for (const auto& c : cases) {
    out.push_back(mine_case(c, objective, held_out, pools.build(c), config, margins));
  }
  return out;
}

MiningCounts count(std::span<const AdversarialRecord> records, const Margins& margins) {
  MiningCounts counts;
  for (const auto& r : records) {
    ++counts.cases;
    if (r.o_init + margins.m_o < r.o_ga) {
      ++counts.improved;
      if (r.h_init > r.h_ga + margins.m_h) ++counts.adversarial;
    }
  }
  return counts;
}

nlohmann::json record_to_json(const AdversarialRecord& r) {
  return {{"case_id", r.case_id}, {"src", r.src},       {"ref", r.ref},
          {"best_init", r.best_init}, {"best_ga", r.best_ga}, {"o_init", r.o_init},
          {"o_ga", r.o_ga},       {"h_init", r.h_init}, {"h_ga", r.h_ga},
          {"is_adversarial", r.is_adversarial}};
}

AdversarialRecord record_from_json(const nlohmann::json& j) {
  AdversarialRecord r;
  r.case_id = j.at("case_id").get<std::string>();
  r.src = j.at("src").get<std::string>();
  r.ref = j.at("ref").get<std::string>();
  r.best_init = j.at("best_init").get<std::string>();
  r.best_ga = j.at("best_ga").get<std::string>();
  r.o_init = j.at("o_init").get<double>();
  r.o_ga = j.at("o_ga").get<double>();
  r.h_init = j.at("h_init").get<double>();
  r.h_ga = j.at("h_ga").get<double>();
  r.is_adversarial = j.at("is_adversarial").get<bool>();
  return r;
}

}  // namespace metricga::adversarial
