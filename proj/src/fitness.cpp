#include "metricga/fitness.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "metricga/error.hpp"

namespace metricga::fitness {

FitnessComponent FitnessComponent::bleu() {
  return {MetricKind::bleu, "bleu", nullptr, true, false};
}

FitnessComponent FitnessComponent::chrf() {
  return {MetricKind::chrf, "chrf", nullptr, true, false};
}

FitnessComponent FitnessComponent::external(std::string name,
                                            std::shared_ptr<scoring::ScorerClient> scorer,
                                            bool needs_reference, bool needs_source) {
  return {MetricKind::external, std::move(name), std::move(scorer), needs_reference, needs_source};
}

const std::vector<std::string>& FitnessSpec::targets() const noexcept {
  if (const auto* o = std::get_if<OracleMode>(&mode)) return o->references;
  return std::get<MbrMode>(mode).pseudo_references;
}

bool FitnessSpec::needs_targets() const noexcept {
  return std::any_of(components.begin(), components.end(),
                     [](const FitnessComponent& c) { return c.needs_reference; });
}

void FitnessSpec::validate() const {
  if (components.empty()) throw InvalidArgument("fitness needs at least one component");
  for (const auto& c : components) {
    if (c.metric == MetricKind::external && !c.scorer) {
      throw InvalidArgument("external fitness component '" + c.name + "' has no scorer");
    }
    if (c.metric != MetricKind::external && !c.needs_reference) {
      throw InvalidArgument("native metric '" + c.name + "' always needs references");
    }
  }
  if (needs_targets() && targets().empty()) {
    throw InvalidArgument(is_mbr() ? "MBR fitness needs at least one pseudo-reference"
                                   : "oracle fitness needs at least one reference");
  }
}

FitnessSpec FitnessSpec::oracle(std::vector<FitnessComponent> components,
                                std::vector<std::string> references) {
  return {std::move(components), OracleMode{std::move(references)}};
}

FitnessSpec FitnessSpec::mbr(std::vector<FitnessComponent> components,
                             std::vector<std::string> pseudo_references) {
  return {std::move(components), MbrMode{std::move(pseudo_references)}};
}

std::vector<std::string> normalized_hypotheses(const SentenceCase& c) {
  std::vector<std::string> out;
  out.reserve(c.hyps.size());
  for (const auto& h : c.hyps) out.push_back(detokenize(tokenize(h.text)));
  return out;
}

std::vector<std::string> pseudo_references(const SentenceCase& c) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& t : normalized_hypotheses(c)) {
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

FitnessSpec spec_for_case(const std::vector<FitnessComponent>& components, ModeKind kind,
                          const SentenceCase& c) {
  if (kind == ModeKind::mbr) return FitnessSpec::mbr(components, pseudo_references(c));
  auto spec = FitnessSpec::oracle(components, c.refs);
  if (spec.needs_targets() && c.refs.empty()) {
    throw InvalidArgument("case '" + c.id + "' has no references for oracle fitness");
  }
  return spec;
}

Evaluator::Evaluator(FitnessSpec spec, std::string src) : spec_(std::move(spec)), src_(std::move(src)) {
  spec_.validate();
  const auto& targets = spec_.targets();
  for (const auto& c : spec_.components) {
    if (c.metric == MetricKind::bleu && bleu_refs_.empty()) {
      for (const auto& t : targets) bleu_refs_.emplace_back(tokenize(t));
    } else if (c.metric == MetricKind::chrf && chrf_refs_.empty()) {
      for (const auto& t : targets) chrf_refs_.emplace_back(t);
    }
  }
}

std::vector<std::vector<double>> Evaluator::score_components(std::span<const std::string> unique) {
  const auto& targets = spec_.targets();
  std::vector<std::vector<double>> scores(spec_.components.size(), std::vector<double>(unique.size()));

  for (std::size_t ci = 0; ci < spec_.components.size(); ++ci) {
    const auto& comp = spec_.components[ci];
    auto& out = scores[ci];
    switch (comp.metric) {
      case MetricKind::bleu:
        for (std::size_t k = 0; k < unique.size(); ++k) {
          const auto hyp = tokenize(unique[k]);
          out[k] = metrics::sentence_bleu(std::span<const Token>(hyp),
                                          std::span<const metrics::BleuReference>(bleu_refs_));
        }
        break;
      case MetricKind::chrf:
        for (std::size_t k = 0; k < unique.size(); ++k) {
          out[k] = metrics::sentence_chrf(unique[k], std::span<const metrics::ChrfReference>(chrf_refs_));
        }
        break;
      case MetricKind::external: {
        const std::string src = comp.needs_source ? src_ : std::string{};
        std::vector<scoring::ScoreItem> items;
        if (comp.needs_reference) {
          items.reserve(unique.size() * targets.size());
          for (std::size_t k = 0; k < unique.size(); ++k) {
            for (std::size_t t = 0; t < targets.size(); ++t) {
              items.push_back({"c" + std::to_string(k) + ".r" + std::to_string(t), src, unique[k],
                               std::vector<std::string>{targets[t]}});
            }
          }
        } else {
          items.reserve(unique.size());
          for (std::size_t k = 0; k < unique.size(); ++k) {
            items.push_back({"c" + std::to_string(k), src, unique[k], std::nullopt});
          }
        }
        const auto result = comp.scorer->score_batch(items);
        if (comp.needs_reference) {
          const auto per = targets.size();
          for (std::size_t k = 0; k < unique.size(); ++k) {
            double sum = 0.0;
            for (std::size_t t = 0; t < per; ++t) sum += result[k * per + t].score;
            out[k] = sum / static_cast<double>(per);
          }
        } else {
          for (std::size_t k = 0; k < unique.size(); ++k) out[k] = result[k].score;
        }
        break;
      }
    }
  }
  return scores;
}

std::vector<FitnessValue> Evaluator::evaluate(std::span<const std::string> candidates) {
  std::vector<std::string> unique;
  std::vector<std::size_t> slot(candidates.size());
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto [it, fresh] = seen.emplace(candidates[i], unique.size());
    if (fresh) unique.push_back(candidates[i]);
    slot[i] = it->second;
  }
  std::vector<FitnessValue> values(unique.size());
  if (!unique.empty()) {
    const auto scores = score_components(unique);
    for (std::size_t k = 0; k < unique.size(); ++k) {
      auto& v = values[k];
      v.per_component.reserve(scores.size());
      for (const auto& comp_scores : scores) {
        v.per_component.push_back(comp_scores[k]);
        v.total += comp_scores[k];
      }
    }
  }
  std::vector<FitnessValue> out;
  out.reserve(candidates.size());
  for (auto s : slot) out.push_back(values[s]);
  return out;
}

FitnessValue Evaluator::evaluate(std::string_view candidate) {
  const std::string one(candidate);
  return evaluate(std::span<const std::string>(&one, 1)).front();
}

FitnessValue evaluate(const FitnessSpec& spec, std::string_view src, std::string_view candidate) {
  return Evaluator(spec, std::string(src)).evaluate(candidate);
}

std::vector<FitnessValue> evaluate_population(const FitnessSpec& spec, std::string_view src,
                                              std::span<const std::string> candidates) {
  if (candidates.empty()) throw InvalidArgument("evaluate_population needs candidates");
  return Evaluator(spec, std::string(src)).evaluate(candidates);
}

std::vector<RankedCandidate> rank(std::span<const FitnessValue> values) {
  std::vector<RankedCandidate> ranked;
  ranked.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) ranked.push_back({i, values[i]});
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return a.fitness.total > b.fitness.total;
  });
  return ranked;
}

std::vector<RankedCandidate> mbr_rank(const FitnessSpec& spec, std::string_view src,
                                      std::span<const std::string> candidates) {
  if (!spec.is_mbr()) throw InvalidArgument("mbr_rank needs an MBR fitness spec");
  if (candidates.empty()) throw InvalidArgument("mbr_rank needs candidates");
  const auto values = Evaluator(spec, std::string(src)).evaluate(candidates);
  return rank(values);
}

}  // namespace metricga::fitness
