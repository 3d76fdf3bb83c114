#include "metricga/eval_report.hpp"

#include <algorithm>
#include <random>

#include "metricga/error.hpp"
#include "metricga/metrics.hpp"

namespace metricga::report {

RerankChoice rerank_choice(const SentenceCase& c, const RerankMode& mode) {
  if (c.hyps.empty()) throw InvalidArgument("case '" + c.id + "' has no hypotheses");
  if (mode.kind == RerankKind::logprob) {
    RerankChoice best{0, {metrics::length_normalized_logprob(c.hyps[0]), {}}};
    for (std::size_t i = 1; i < c.hyps.size(); ++i) {
      const double v = metrics::length_normalized_logprob(c.hyps[i]);
      if (v > best.value.total) best = {i, {v, {}}};
    }
    best.value.per_component = {best.value.total};
    return best;
  }
  if (mode.metric.empty()) throw InvalidArgument("reranking needs a metric");
  const auto kind = mode.kind == RerankKind::mbr ? fitness::ModeKind::mbr : fitness::ModeKind::oracle;
  const auto spec = fitness::spec_for_case(mode.metric, kind, c);
  const auto texts = fitness::normalized_hypotheses(c);
  // Same evaluation path as generation 0 of the GA.
  const auto ranked = fitness::rank(fitness::Evaluator(spec, c.src).evaluate(std::span<const std::string>(texts)));
  return {ranked.front().index, ranked.front().fitness};
}

std::vector<std::vector<double>> segment_scores(std::span<const SentenceCase> cases,
                                                std::span<const std::string> chosen,
                                                std::span<const fitness::FitnessComponent> metrics) {
  if (cases.size() != chosen.size()) throw InvalidArgument("cases and chosen texts are not aligned");
  std::vector<std::vector<double>> out(metrics.size(), std::vector<double>(cases.size()));
  for (std::size_t i = 0; i < cases.size(); ++i) {
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      const auto spec = fitness::spec_for_case({metrics[m]}, fitness::ModeKind::oracle, cases[i]);
      out[m][i] = fitness::evaluate(spec, cases[i].src, chosen[i]).total;
    }
  }
  return out;
}

std::vector<MetricValue> corpus_report(std::span<const SentenceCase> cases,
                                       std::span<const std::string> chosen,
                                       std::span<const fitness::FitnessComponent> metrics) {
  if (cases.size() != chosen.size()) throw InvalidArgument("cases and chosen texts are not aligned");
  if (cases.empty()) throw InvalidArgument("corpus report needs at least one case");
  std::vector<MetricValue> out;
  for (const auto& m : metrics) {
    double value = 0.0;
    if (m.metric == fitness::MetricKind::bleu) {
      std::vector<metrics::BleuSegment> segs;
      for (std::size_t i = 0; i < cases.size(); ++i) {
        metrics::BleuSegment s{tokenize(chosen[i]), {}};
        for (const auto& r : cases[i].refs) s.refs.push_back(tokenize(r));
        segs.push_back(std::move(s));
      }
      value = metrics::corpus_bleu(segs);
    } else if (m.metric == fitness::MetricKind::chrf) {
      std::vector<metrics::ChrfSegment> segs;
      for (std::size_t i = 0; i < cases.size(); ++i) segs.push_back({chosen[i], cases[i].refs});
      value = metrics::corpus_chrf(segs);
    } else {
      const auto scores = segment_scores(cases, chosen, std::span<const fitness::FitnessComponent>(&m, 1));
      double sum = 0.0;
      for (double s : scores.front()) sum += s;
      value = sum / static_cast<double>(cases.size());
    }
    out.push_back({m.name, value});
  }
  return out;
}

RatioTable ratio_table(std::span<const double> ga, std::span<const double> baseline) {
  if (ga.size() != baseline.size()) throw InvalidArgument("ratio table inputs are not aligned");
  if (ga.empty()) throw InvalidArgument("ratio table needs at least one segment");
  std::size_t up = 0;
  std::size_t down = 0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (ga[i] > baseline[i]) {
      ++up;
    } else if (ga[i] < baseline[i]) {
      ++down;
    } else {
      ++same;
    }
  }
  const double n = static_cast<double>(ga.size());
  return {100.0 * static_cast<double>(up) / n, 100.0 * static_cast<double>(down) / n,
          100.0 * static_cast<double>(same) / n};
}

namespace {

BootstrapReport run_bootstrap(std::span<const double> a, std::span<const double> b, bool paired,
                              std::size_t resamples, std::uint64_t seed) {
  if (a.empty()) throw InvalidArgument("bootstrap needs at least one segment");
  if (paired && a.size() != b.size()) throw InvalidArgument("bootstrap inputs are not aligned");
  if (resamples < 1) throw InvalidArgument("bootstrap needs at least one resample");

  const std::size_t n = a.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> means(resamples);
  std::size_t not_better = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = pick(rng);
      sum_a += a[i];
      if (paired) sum_b += b[i];
    }
    means[r] = sum_a / static_cast<double>(n);
    if (paired && means[r] <= sum_b / static_cast<double>(n)) ++not_better;
  }

  BootstrapReport rep;
  rep.resamples = resamples;
  double total = 0.0;
  for (double m : means) total += m;
  std::sort(means.begin(), means.end());
  // Clamped to absorb summation rounding.
  rep.mean = std::clamp(total / static_cast<double>(resamples), means.front(), means.back());
  const auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(resamples));
    return means[std::min(idx, resamples - 1)];
  };
  rep.ci_low = at(0.025);
  rep.ci_high = at(0.975);
  if (paired) rep.p_better = static_cast<double>(not_better) / static_cast<double>(resamples);
  return rep;
}

}  // namespace

BootstrapReport paired_bootstrap(std::span<const double> a, std::span<const double> b,
                                 std::size_t resamples, std::uint64_t seed) {
  return run_bootstrap(a, b, true, resamples, seed);
}

BootstrapReport bootstrap_ci(std::span<const double> a, std::size_t resamples, std::uint64_t seed) {
  return run_bootstrap(a, {}, false, resamples, seed);
}

}  // namespace metricga::report
