#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metricga/adversarial.hpp"
#include "metricga/error.hpp"
#include "metricga/eval_report.hpp"
#include "metricga/fitness.hpp"
#include "metricga/ga_engine.hpp"
#include "metricga/metrics.hpp"
#include "metricga/mutation_sources.hpp"
#include "metricga/scorer_bridge.hpp"
#include "metricga/sentence_case.hpp"
#include "metricga/textcore.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace metricga;

namespace {

std::shared_ptr<scoring::ScoreCache> cache() {
  static auto c = std::make_shared<scoring::ScoreCache>();
  return c;
}

// "bleu", "chrf" or "mock:<rule>".
fitness::FitnessComponent component(const std::string& name) {
  if (name == "bleu") return fitness::FitnessComponent::bleu();
  if (name == "chrf") return fitness::FitnessComponent::chrf();
  if (name.rfind("mock:", 0) == 0) {
    auto endpoint = scoring::make_mock_scorer(name.substr(5));
    const bool needs_ref = scoring::mock_needs_reference(endpoint.mock_spec->rule);
    auto client = std::make_shared<scoring::ScorerClient>(std::move(endpoint), cache());
    return fitness::FitnessComponent::external(name, std::move(client), needs_ref, !needs_ref);
  }
  throw InvalidArgument("unknown component '" + name + "' (expected bleu, chrf or mock:<rule>)");
}

std::vector<fitness::FitnessComponent> components(const std::vector<std::string>& names) {
  std::vector<fitness::FitnessComponent> out;
  for (const auto& n : names) out.push_back(component(n));
  return out;
}

py::dict fitness_dict(const fitness::FitnessValue& v) {
  py::dict d;
  d["total"] = v.total;
  d["per_component"] = v.per_component;
  return d;
}

mutation::PoolRecipe recipe(const std::vector<std::string>& sources, const std::vector<std::string>& wordlist) {
  mutation::PoolRecipe r;
  for (const auto& s : sources) {
    if (s == "init") {
      r.init = true;
    } else if (s == "wordlist") {
      r.wordlist = mutation::pool_from_wordlist(wordlist);
    } else {
      throw InvalidArgument("unknown mutation source '" + s + "' (expected init or wordlist)");
    }
  }
  if (!r.init && !r.wordlist) throw InvalidArgument("no mutation source selected");
  return r;
}

py::dict bootstrap_dict(const report::BootstrapReport& r) {
  py::dict d;
  d["mean"] = r.mean;
  d["ci_low"] = r.ci_low;
  d["ci_high"] = r.ci_high;
  d["resamples"] = r.resamples;
  d["p_better"] = r.p_better ? py::cast(*r.p_better) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of metric_ga";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<TransportError>(m, "TransportError", PyExc_RuntimeError);
  py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

  m.def("tokenize", [](const std::string& s) {
    std::vector<std::string> out;
    for (const auto& t : metricga::tokenize(s)) out.push_back(t.str());
    return out;
  });

  m.def("sentence_bleu",
        [](const std::string& hyp, const std::vector<std::string>& refs) { return metrics::sentence_bleu(hyp, refs); },
        py::arg("hyp"), py::arg("refs"));
  m.def("sentence_chrf",
        [](const std::string& hyp, const std::vector<std::string>& refs) { return metrics::sentence_chrf(hyp, refs); },
        py::arg("hyp"), py::arg("refs"));
  m.def(
      "corpus_bleu",
      [](const std::vector<std::string>& hyps, const std::vector<std::vector<std::string>>& refs) {
        if (hyps.size() != refs.size()) throw InvalidArgument("hyps and refs are not aligned");
        std::vector<metrics::BleuSegment> segs;
        for (std::size_t i = 0; i < hyps.size(); ++i) {
          metrics::BleuSegment s{metricga::tokenize(hyps[i]), {}};
          for (const auto& r : refs[i]) s.refs.push_back(metricga::tokenize(r));
          segs.push_back(std::move(s));
        }
        return metrics::corpus_bleu(segs);
      },
      py::arg("hyps"), py::arg("refs"));
  m.def(
      "corpus_chrf",
      [](const std::vector<std::string>& hyps, const std::vector<std::vector<std::string>>& refs) {
        if (hyps.size() != refs.size()) throw InvalidArgument("hyps and refs are not aligned");
        std::vector<metrics::ChrfSegment> segs;
        for (std::size_t i = 0; i < hyps.size(); ++i) segs.push_back({hyps[i], refs[i]});
        return metrics::corpus_chrf(segs);
      },
      py::arg("hyps"), py::arg("refs"));

  m.def(
      "mock_score",
      [](const std::string& rule, const std::string& mt, std::optional<std::vector<std::string>> refs,
         const std::string& src) {
        const auto endpoint = scoring::make_mock_scorer(rule);
        return scoring::mock_score(*endpoint.mock_spec, {"0", src, mt, std::move(refs)});
      },
      py::arg("rule"), py::arg("mt"), py::arg("refs") = py::none(), py::arg("src") = "");

  m.def(
      "rerank_json",
      [](const std::string& case_json, const std::string& mode, const std::vector<std::string>& metric) {
        const auto c = case_from_json(json::parse(case_json));
        report::RerankMode rm;
        if (mode == "logprob") {
          rm = report::RerankMode::logprob();
        } else if (mode == "oracle") {
          rm = report::RerankMode::oracle(components(metric));
        } else if (mode == "mbr") {
          rm = report::RerankMode::mbr(components(metric));
        } else {
          throw InvalidArgument("unknown rerank mode '" + mode + "'");
        }
        const auto choice = report::rerank_choice(c, rm);
        py::dict d;
        d["index"] = choice.index;
        d["text"] = fitness::normalized_hypotheses(c)[choice.index];
        d["fitness"] = fitness_dict(choice.value);
        return d;
      },
      py::arg("case_json"), py::arg("mode"), py::arg("metric"));

  m.def(
      "optimize_json",
      [](const std::string& case_json, const std::vector<std::string>& fitness_names, const std::string& mode,
         const std::vector<std::string>& mutation, const std::vector<std::string>& wordlist, std::size_t pop,
         std::size_t gens, double crossover, double length_factor, std::size_t tournament,
         std::optional<double> mutation_rate, std::uint64_t seed) {
        const auto c = case_from_json(json::parse(case_json));
        if (mode != "oracle" && mode != "mbr") throw InvalidArgument("unknown mode '" + mode + "'");
        const auto spec = fitness::spec_for_case(
            components(fitness_names), mode == "mbr" ? fitness::ModeKind::mbr : fitness::ModeKind::oracle, c);
        ga::GAConfig config;
        config.population_size = pop;
        config.generations = gens;
        config.crossover_rate = crossover;
        config.length_factor = length_factor;
        config.tournament_size = tournament;
        config.mutation_rate = mutation_rate;
        config.seed = case_seed(seed, c.id);
        ga::GAResult r;
        {
          py::gil_scoped_release release;
          r = ga::run(c, spec, recipe(mutation, wordlist).build(c), config);
        }
        py::list trace;
        for (const auto& p : r.trace) trace.append(py::make_tuple(p.best, p.mean));
        py::dict d;
        d["best_text"] = r.best_text;
        d["best_fitness"] = fitness_dict(r.best_fitness);
        d["is_novel"] = r.is_novel;
        d["best_generation"] = r.best_generation;
        d["trace"] = trace;
        return d;
      },
      py::arg("case_json"), py::arg("fitness"), py::arg("mode"), py::arg("mutation"), py::arg("wordlist"),
      py::arg("pop"), py::arg("gens"), py::arg("crossover"), py::arg("length_factor"), py::arg("tournament"),
      py::arg("mutation_rate"), py::arg("seed"));

  m.def(
      "chromosome_length",
      [](const std::vector<std::string>& hyps, double k) {
        std::vector<TokenSequence> seqs;
        for (const auto& h : hyps) seqs.push_back(metricga::tokenize(h));
        return ga::chromosome_length(seqs, k);
      },
      py::arg("hyps"), py::arg("k") = 1.1);
  m.def(
      "encode",
      [](const std::string& text, std::size_t length) {
        std::vector<std::string> genes;
        for (const auto& g : ga::encode(metricga::tokenize(text), length).genes) genes.push_back(g.text());
        return genes;
      },
      py::arg("text"), py::arg("length"));

  m.def(
      "paired_bootstrap",
      [](const std::vector<double>& a, const std::vector<double>& b, std::size_t resamples, std::uint64_t seed) {
        return bootstrap_dict(report::paired_bootstrap(a, b, resamples, seed));
      },
      py::arg("a"), py::arg("b"), py::arg("resamples") = 10000, py::arg("seed") = 0);
  m.def(
      "bootstrap_ci",
      [](const std::vector<double>& a, std::size_t resamples, std::uint64_t seed) {
        return bootstrap_dict(report::bootstrap_ci(a, resamples, seed));
      },
      py::arg("a"), py::arg("resamples") = 10000, py::arg("seed") = 0);

  m.def(
      "is_adversarial",
      [](double o_init, double o_ga, double h_init, double h_ga, double m_o, double m_h) {
        return adversarial::is_adversarial(o_init, o_ga, h_init, h_ga, {m_o, m_h});
      },
      py::arg("o_init"), py::arg("o_ga"), py::arg("h_init"), py::arg("h_ga"), py::arg("m_o") = 1e-3,
      py::arg("m_h") = 1e-3);

  m.def(
      "mine_json",
      [](const std::string& case_json, const std::vector<std::string>& objective, const std::string& held_out,
         const std::vector<std::string>& mutation, const std::vector<std::string>& wordlist, std::size_t pop,
         std::size_t gens, std::optional<double> mutation_rate, std::uint64_t seed) {
        const auto c = case_from_json(json::parse(case_json));
        ga::GAConfig config;
        config.population_size = pop;
        config.generations = gens;
        config.mutation_rate = mutation_rate;
        config.seed = seed;
        const auto recs = adversarial::mine(std::span<const SentenceCase>(&c, 1), components(objective),
                                            component(held_out), recipe(mutation, wordlist), config);
        return adversarial::record_to_json(recs.front()).dump();
      },
      py::arg("case_json"), py::arg("objective"), py::arg("held_out"), py::arg("mutation"), py::arg("wordlist"),
      py::arg("pop"), py::arg("gens"), py::arg("mutation_rate"), py::arg("seed"));
}
