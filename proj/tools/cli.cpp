#include "metricga/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "metricga/adversarial.hpp"
#include "metricga/error.hpp"
#include "metricga/eval_report.hpp"
#include "metricga/fitness.hpp"
#include "metricga/ga_engine.hpp"
#include "metricga/mutation_sources.hpp"
#include "metricga/scorer_bridge.hpp"
#include "metricga/sentence_case.hpp"

namespace metricga::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolName = "metric-ga";
constexpr const char* kToolVersion = "0.1.0";

class UsageError : public Error {
 public:
  using Error::Error;
};

struct CommonOptions {
  std::string input;
  std::string output = "-";
  std::string manifest;
  std::vector<std::string> scorers;
  std::vector<std::string> ref_free;
  std::vector<std::string> eval;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

struct GaOptions {
  std::vector<std::string> mutation;
  std::string lexicon;
  std::string wordlist;
  std::size_t pop = ga::GAConfig{}.population_size;
  std::size_t gens = ga::GAConfig{}.generations;
  double crossover = ga::GAConfig{}.crossover_rate;
  double length_factor = ga::GAConfig{}.length_factor;
  std::size_t tournament = ga::GAConfig{}.tournament_size;
  std::optional<double> mutation_rate;
  double indel_ratio = ga::GAConfig{}.indel_ratio;
};

struct RerankOptions {
  std::string mode = "logprob";
  std::vector<std::string> metric;
};

struct OptimizeOptions {
  std::string mode = "mbr";
  std::vector<std::string> fitness;
};

struct MineOptions {
  std::vector<std::string> objective;
  std::string held_out;
  std::vector<double> margins{adversarial::Margins{}.m_o, adversarial::Margins{}.m_h};
  bool only_adversarial = false;
};

struct ReportOptions {
  std::vector<std::string> files;
  std::vector<std::string> names;
  std::size_t bootstrap_n = 10000;
  std::string format = "tsv";
};

class ComponentRegistry {
 public:
  ComponentRegistry(const std::vector<std::string>& scorer_flags, const std::vector<std::string>& ref_free)
      : cache_(std::make_shared<scoring::ScoreCache>()), ref_free_(ref_free.begin(), ref_free.end()) {
    for (const auto& flag : scorer_flags) {
      const auto eq = flag.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UsageError("--scorer expects <name>=<kind>:<address>, got '" + flag + "'");
      }
      const auto name = flag.substr(0, eq);
      if (name == "bleu" || name == "chrf") throw UsageError("scorer name '" + name + "' is reserved");
      if (endpoints_.count(name)) throw UsageError("scorer '" + name + "' defined twice");
      try {
        endpoints_.emplace(name, scoring::parse_endpoint(flag.substr(eq + 1)));
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
    }
    for (const auto& name : ref_free_) {
      if (!endpoints_.count(name)) throw UsageError("--ref-free names unknown scorer '" + name + "'");
    }
  }

  // "bleu", "chrf", a --scorer name, or an inline "mock:<rule>".
  fitness::FitnessComponent resolve(const std::string& name) {
    if (name == "bleu") return fitness::FitnessComponent::bleu();
    if (name == "chrf") return fitness::FitnessComponent::chrf();
    auto it = endpoints_.find(name);
    if (it == endpoints_.end()) {
      if (name.rfind("mock:", 0) != 0) throw UsageError("unknown metric '" + name + "'");
      try {
        it = endpoints_.emplace(name, scoring::parse_endpoint(name)).first;
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
    }
    auto& client = clients_[name];
    if (!client) client = std::make_shared<scoring::ScorerClient>(it->second, cache_);
    const auto& ep = it->second;
    const bool needs_ref = ep.mock_spec ? scoring::mock_needs_reference(ep.mock_spec->rule)
                                        : !ref_free_.count(name);
    return fitness::FitnessComponent::external(name, client, needs_ref, true);
  }

  std::vector<fitness::FitnessComponent> resolve_all(const std::vector<std::string>& names) {
    std::vector<fitness::FitnessComponent> out;
    for (const auto& n : names) out.push_back(resolve(n));
    return out;
  }

  json describe(const std::vector<fitness::FitnessComponent>& comps) const {
    json out = json::array();
    for (const auto& c : comps) {
      json d = {{"name", c.name}, {"needs_reference", c.needs_reference}};
      if (c.scorer) {
        d["endpoint"] = c.scorer->endpoint().identity();
        d["needs_source"] = c.needs_source;
      }
      out.push_back(std::move(d));
    }
    return out;
  }

 private:
  std::shared_ptr<scoring::ScoreCache> cache_;
  std::set<std::string> ref_free_;
  std::map<std::string, scoring::ScorerEndpoint> endpoints_;
  std::map<std::string, std::shared_ptr<scoring::ScorerClient>> clients_;
};

template <class Fn>
auto parallel_map(std::size_t n, std::size_t jobs, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json file_digest(const std::string& path) {
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << stable_hash(read_file(path));
  return {{"path", path}, {"fnv1a64", hex.str()}};
}

// Writes via a temporary sibling and rename, so a failed run leaves nothing.
void write_atomically(const std::string& path, const std::string& content) {
  const auto tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + tmp + "'");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::remove(tmp.c_str());
      throw IoError("cannot write '" + tmp + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

struct RunContext {
  std::vector<std::string> argv;
  std::string command;
  std::string started;
  json config = json::object();
  json inputs = json::array();
};

void emit(const RunContext& ctx, const CommonOptions& common, const std::string& content, std::ostream& out) {
  if (common.output == "-") {
    out << content;
    out.flush();
  } else {
    write_atomically(common.output, content);
  }
  std::string manifest_path = common.manifest;
  if (manifest_path.empty() && common.output != "-") manifest_path = common.output + ".manifest.json";
  if (manifest_path.empty()) return;
  json m = {{"tool", kToolName},        {"version", kToolVersion}, {"command", ctx.command},
            {"argv", ctx.argv},         {"config", ctx.config},    {"inputs", ctx.inputs},
            {"output", common.output},  {"started", ctx.started},  {"finished", utc_now()}};
  write_atomically(manifest_path, m.dump(2) + "\n");
}

std::string to_jsonl(const std::vector<json>& lines) {
  std::string s;
  for (const auto& l : lines) {
    s += l.dump();
    s += '\n';
  }
  return s;
}

std::vector<std::string> default_eval(const std::vector<SentenceCase>& cases, const CommonOptions& common) {
  if (!common.eval.empty()) {
    if (common.eval.size() == 1 && common.eval.front() == "none") return {};
    return common.eval;
  }
  const bool all_refs = std::all_of(cases.begin(), cases.end(), [](const SentenceCase& c) { return !c.refs.empty(); });
  if (all_refs) return {"bleu", "chrf"};
  return {};
}

json segment_json(const SentenceCase& c, const std::string& text,
                  const std::vector<fitness::FitnessComponent>& eval) {
  json scores = json::object();
  if (eval.empty()) return scores;
  const auto per = report::segment_scores(std::span<const SentenceCase>(&c, 1),
                                          std::span<const std::string>(&text, 1), eval);
  for (std::size_t m = 0; m < eval.size(); ++m) scores[eval[m].name] = per[m].front();
  return scores;
}

std::optional<json> corpus_json(const std::vector<SentenceCase>& cases, const std::vector<std::string>& chosen,
                                const std::vector<fitness::FitnessComponent>& eval, std::ostream& err) {
  if (eval.empty() || cases.empty()) return std::nullopt;
  const auto refs = cases.front().refs.size();
  for (const auto& c : cases) {
    if (c.refs.size() != refs) {
      err << "note: corpus report skipped, cases carry different numbers of references\n";
      return std::nullopt;
    }
  }
  json out = json::object();
  for (const auto& mv : report::corpus_report(cases, chosen, eval)) out[mv.name] = mv.value;
  return out;
}

ga::GAConfig make_ga_config(const GaOptions& g, std::uint64_t seed) {
  ga::GAConfig cfg;
  cfg.population_size = g.pop;
  cfg.generations = g.gens;
  cfg.crossover_rate = g.crossover;
  cfg.length_factor = g.length_factor;
  cfg.tournament_size = g.tournament;
  cfg.mutation_rate = g.mutation_rate;
  cfg.indel_ratio = g.indel_ratio;
  cfg.seed = seed;
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

json ga_config_json(const ga::GAConfig& cfg) {
  json j = {{"population_size", cfg.population_size}, {"generations", cfg.generations},
            {"crossover_rate", cfg.crossover_rate},   {"length_factor", cfg.length_factor},
            {"tournament_size", cfg.tournament_size}, {"indel_ratio", cfg.indel_ratio},
            {"seed", cfg.seed}};
  j["mutation_rate"] = cfg.mutation_rate ? json(*cfg.mutation_rate) : json(nullptr);
  return j;
}

mutation::PoolRecipe make_pools(const GaOptions& g, RunContext& ctx) {
  mutation::PoolRecipe recipe;
  auto sources = g.mutation;
  if (sources.empty()) sources = {"init"};
  std::vector<std::string> canonical;
  for (auto s : sources) {
    if (s == "dict") s = "lexicon";
    if (s == "init") {
      recipe.init = true;
    } else if (s == "lexicon") {
      if (g.lexicon.empty()) throw UsageError("--mutation lexicon needs --lexicon <path>");
      if (!recipe.lexicon) {
        recipe.lexicon = mutation::load_lexicon(g.lexicon);
        ctx.inputs.push_back(file_digest(g.lexicon));
      }
    } else if (s == "wordlist") {
      if (g.wordlist.empty()) throw UsageError("--mutation wordlist needs --wordlist <path>");
      if (!recipe.wordlist) {
        recipe.wordlist = mutation::load_wordlist(g.wordlist);
        ctx.inputs.push_back(file_digest(g.wordlist));
      }
    } else {
      throw UsageError("unknown mutation source '" + s + "'");
    }
    if (std::find(canonical.begin(), canonical.end(), s) == canonical.end()) canonical.push_back(s);
  }
  ctx.config["mutation"] = canonical;
  return recipe;
}

std::vector<SentenceCase> load_input(const CommonOptions& common, RunContext& ctx) {
  auto cases = read_cases_file(common.input);
  ctx.inputs.push_back(file_digest(common.input));
  return cases;
}

int cmd_rerank(const CommonOptions& common, const RerankOptions& opt, RunContext& ctx, std::ostream& out,
               std::ostream& err) {
  ComponentRegistry registry(common.scorers, common.ref_free);
  report::RerankMode mode;
  if (opt.mode == "logprob") {
    mode = report::RerankMode::logprob();
  } else {
    if (opt.metric.empty()) throw UsageError("--mode " + opt.mode + " needs at least one --metric");
    auto comps = registry.resolve_all(opt.metric);
    mode = opt.mode == "oracle" ? report::RerankMode::oracle(std::move(comps))
                                : report::RerankMode::mbr(std::move(comps));
  }
  const auto cases = load_input(common, ctx);
  const auto eval = registry.resolve_all(default_eval(cases, common));
  ctx.config["mode"] = opt.mode;
  ctx.config["metric"] = registry.describe(mode.metric);
  ctx.config["eval"] = registry.describe(eval);

  struct Row {
    json line;
    std::string text;
  };
  const auto rows = parallel_map(cases.size(), common.jobs, [&](std::size_t i) {
    const auto& c = cases[i];
    const auto choice = report::rerank_choice(c, mode);
    const auto text = fitness::normalized_hypotheses(c)[choice.index];
    json line = {{"id", c.id}, {"chosen_index", choice.index}, {"text", text}};
    if (mode.kind != report::RerankKind::logprob) {
      line["fitness"] = choice.value.total;
      line["per_component"] = choice.value.per_component;
    }
    line["scores"] = segment_json(c, text, eval);
    return Row{std::move(line), text};
  });

  std::vector<json> lines;
  std::vector<std::string> chosen;
  for (const auto& r : rows) {
    lines.push_back(r.line);
    chosen.push_back(r.text);
  }
  if (auto corpus = corpus_json(cases, chosen, eval, err)) lines.push_back({{"corpus", *corpus}});
  emit(ctx, common, to_jsonl(lines), out);
  return kExitOk;
}

int cmd_optimize(const CommonOptions& common, const GaOptions& gopt, const OptimizeOptions& opt,
                 RunContext& ctx, std::ostream& out, std::ostream& err) {
  ComponentRegistry registry(common.scorers, common.ref_free);
  if (opt.fitness.empty()) throw UsageError("optimize needs at least one --fitness");
  const auto comps = registry.resolve_all(opt.fitness);
  const auto config = make_ga_config(gopt, common.seed);
  const auto pools = make_pools(gopt, ctx);
  const auto cases = load_input(common, ctx);
  const auto eval = registry.resolve_all(default_eval(cases, common));
  const auto kind = opt.mode == "oracle" ? fitness::ModeKind::oracle : fitness::ModeKind::mbr;
  ctx.config["mode"] = opt.mode;
  ctx.config["fitness"] = registry.describe(comps);
  ctx.config["eval"] = registry.describe(eval);
  ctx.config["ga"] = ga_config_json(config);

  for (const auto& c : cases) fitness::spec_for_case(comps, kind, c);

  struct Row {
    json line;
    std::string text;
    bool novel;
  };
  const auto rows = parallel_map(cases.size(), common.jobs, [&](std::size_t i) {
    const auto& c = cases[i];
    auto case_config = config;
    case_config.seed = case_seed(config.seed, c.id);
    const auto spec = fitness::spec_for_case(comps, kind, c);
    const auto pool = config.generations > 0 ? pools.build(c) : mutation::TokenPool{};
    const auto result = ga::run(c, spec, pool, case_config);
    json trace = json::array();
    for (const auto& p : result.trace) trace.push_back({p.best, p.mean});
    json line = {{"id", c.id},
                 {"best_text", result.best_text},
                 {"best_fitness", result.best_fitness.total},
                 {"per_component", result.best_fitness.per_component},
                 {"is_novel", result.is_novel},
                 {"best_generation", result.best_generation},
                 {"trace", std::move(trace)}};
    line["scores"] = segment_json(c, result.best_text, eval);
    return Row{std::move(line), result.best_text, result.is_novel};
  });

  std::vector<json> lines;
  std::vector<std::string> chosen;
  std::size_t novel = 0;
  for (const auto& r : rows) {
    lines.push_back(r.line);
    chosen.push_back(r.text);
    novel += r.novel ? 1 : 0;
  }
  const double ratio = cases.empty() ? 0.0 : 100.0 * static_cast<double>(novel) / static_cast<double>(cases.size());
  json summary = {{"new", novel}, {"cases", cases.size()}, {"new_percent", ratio}};
  if (auto corpus = corpus_json(cases, chosen, eval, err)) summary["corpus"] = *corpus;
  lines.push_back(std::move(summary));
  emit(ctx, common, to_jsonl(lines), out);
  err << "new: " << novel << "/" << cases.size() << " (" << std::fixed << std::setprecision(1) << ratio
      << "%)\n";
  return kExitOk;
}

int cmd_mine(const CommonOptions& common, const GaOptions& gopt, const MineOptions& opt, RunContext& ctx,
             std::ostream& out, std::ostream& err) {
  ComponentRegistry registry(common.scorers, common.ref_free);
  if (opt.objective.empty()) throw UsageError("mine needs at least one --objective");
  if (opt.held_out.empty()) throw UsageError("mine needs --held-out");
  if (opt.margins.size() != 2) throw UsageError("--margins takes two values: <m_o> <m_h>");
  const adversarial::Margins margins{opt.margins[0], opt.margins[1]};
  const auto objective = registry.resolve_all(opt.objective);
  const auto held_out = registry.resolve(opt.held_out);
  const auto config = make_ga_config(gopt, common.seed);
  const auto pools = make_pools(gopt, ctx);
  const auto cases = load_input(common, ctx);
  ctx.config["objective"] = registry.describe(objective);
  ctx.config["held_out"] = registry.describe({held_out}).front();
  ctx.config["margins"] = {margins.m_o, margins.m_h};
  ctx.config["only_adversarial"] = opt.only_adversarial;
  ctx.config["ga"] = ga_config_json(config);

  for (const auto& c : cases) {
    if (c.refs.empty()) throw InvalidArgument("case '" + c.id + "' has no reference");
  }
  const auto records = parallel_map(cases.size(), common.jobs, [&](std::size_t i) {
    const auto pool = config.generations > 0 ? pools.build(cases[i]) : mutation::TokenPool{};
    return adversarial::mine_case(cases[i], objective, held_out, pool, config, margins);
  });

  std::vector<json> lines;
  for (const auto& r : records) {
    if (opt.only_adversarial && !r.is_adversarial) continue;
    lines.push_back(adversarial::record_to_json(r));
  }
  emit(ctx, common, to_jsonl(lines), out);
  const auto counts = adversarial::count(records, margins);
  err << "cases: " << counts.cases << " improved: " << counts.improved << " adversarial: " << counts.adversarial
      << "\n";
  return kExitOk;
}

struct ScoreFile {
  std::vector<std::string> ids;
  std::map<std::string, std::vector<double>> metrics;
};

ScoreFile read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  ScoreFile f;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::map<std::string, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id")) continue;  // summary lines
    if (!j.contains("scores") || !j["scores"].is_object()) {
      throw ParseError(lineno, path + ": record has no \"scores\" object");
    }
    std::map<std::string, double> row;
    for (const auto& [k, v] : j["scores"].items()) {
      if (!v.is_number()) throw ParseError(lineno, path + ": score '" + k + "' is not a number");
      row[k] = v.get<double>();
    }
    f.ids.push_back(j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument(path + ": no scored records");
  for (const auto& [name, _] : rows.front()) {
    std::vector<double> column;
    for (const auto& r : rows) {
      const auto it = r.find(name);
      if (it == r.end()) break;
      column.push_back(it->second);
    }
    if (column.size() == rows.size()) f.metrics.emplace(name, std::move(column));
  }
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

int cmd_report(const CommonOptions& common, const ReportOptions& opt, RunContext& ctx, std::ostream& out) {
  if (opt.files.size() != 2) throw UsageError("report takes exactly two score files");
  if (opt.bootstrap_n < 1) throw UsageError("--bootstrap-n must be >= 1");
  if (opt.format != "tsv" && opt.format != "json") throw UsageError("--format must be tsv or json");
  std::vector<std::string> names = opt.names;
  if (names.empty()) {
    for (const auto& f : opt.files) names.push_back(fs::path(f).stem().string());
  }
  if (names.size() != 2) throw UsageError("--names takes two values");

  const auto a = read_score_file(opt.files[0]);
  const auto b = read_score_file(opt.files[1]);
  for (const auto& f : opt.files) ctx.inputs.push_back(file_digest(f));
  if (a.ids != b.ids) throw InvalidArgument("score files are not aligned: segment ids differ");
  std::vector<std::string> metrics;
  for (const auto& [name, _] : a.metrics) {
    if (b.metrics.count(name)) metrics.push_back(name);
  }
  if (metrics.empty()) throw InvalidArgument("score files share no metric");
  ctx.config["bootstrap_n"] = opt.bootstrap_n;
  ctx.config["seed"] = common.seed;
  ctx.config["names"] = names;

  json systems = {{names[0], json::object()}, {names[1], json::object()}};
  json p_better = json::object();
  json ratio = json::object();
  std::vector<std::string> row_a{names[0]}, row_b{names[1]}, row_p{"p_better"}, row_up{"improved%"},
      row_down{"degraded%"}, row_same{"unchanged%"};
  for (const auto& m : metrics) {
    const auto& va = a.metrics.at(m);
    const auto& vb = b.metrics.at(m);
    const auto ra = report::paired_bootstrap(va, vb, opt.bootstrap_n, common.seed);
    const auto rb = report::bootstrap_ci(vb, opt.bootstrap_n, common.seed);
    const auto rt = report::ratio_table(va, vb);
    const auto sys = [](const report::BootstrapReport& r) {
      return json{{"mean", r.mean}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"resamples", r.resamples}};
    };
    systems[names[0]][m] = sys(ra);
    systems[names[1]][m] = sys(rb);
    p_better[m] = *ra.p_better;
    ratio[m] = {{"improved", rt.improved}, {"degraded", rt.degraded}, {"unchanged", rt.unchanged}};
    const auto cell = [](const report::BootstrapReport& r) {
      return fmt(r.mean) + " [" + fmt(r.ci_low) + ", " + fmt(r.ci_high) + "]";
    };
    row_a.push_back(cell(ra));
    row_b.push_back(cell(rb));
    row_p.push_back(fmt(*ra.p_better));
    row_up.push_back(fmt(rt.improved));
    row_down.push_back(fmt(rt.degraded));
    row_same.push_back(fmt(rt.unchanged));
  }

  std::string content;
  if (opt.format == "json") {
    json j = {{"segments", a.ids.size()}, {"systems", systems}, {"p_better", p_better}, {"ratio", ratio}};
    content = j.dump(2) + "\n";
  } else {
    std::vector<std::vector<std::string>> table{{"system"}};
    for (const auto& m : metrics) table.front().push_back(m);
    for (auto* r : {&row_a, &row_b, &row_p, &row_up, &row_down, &row_same}) table.push_back(*r);
    for (const auto& row : table) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) content += '\t';
        content += row[i];
      }
      content += '\n';
    }
  }
  emit(ctx, common, content, out);
  return kExitOk;
}

void add_common(CLI::App* sub, CommonOptions& c, bool with_input) {
  if (with_input) sub->add_option("input", c.input, "Input JSONL, one case per line")->required();
  sub->add_option("-o,--output", c.output, "Output path, '-' for stdout")->capture_default_str();
  sub->add_option("--manifest", c.manifest, "Manifest path (default <output>.manifest.json)");
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
}

void add_scoring(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--scorer", c.scorers, "External scorer <name>=<kind>:<address>");
  sub->add_option("--ref-free", c.ref_free, "Scorer names that take no references");
  sub->add_option("--eval", c.eval, "Per-segment evaluation metrics ('none' to disable)");
  sub->add_option("-j,--jobs", c.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_ga(CLI::App* sub, GaOptions& g) {
  sub->add_option("--mutation", g.mutation, "Mutation sources: init, lexicon (dict), wordlist");
  sub->add_option("--lexicon", g.lexicon, "TSV source_lemma<TAB>target_form");
  sub->add_option("--wordlist", g.wordlist, "Whitespace-separated target tokens");
  sub->add_option("--pop", g.pop, "Population size")->capture_default_str();
  sub->add_option("--gens", g.gens, "Generations")->capture_default_str();
  sub->add_option("--crossover", g.crossover, "Crossover rate")->capture_default_str();
  sub->add_option("--length-factor", g.length_factor, "Chromosome length factor k")->capture_default_str();
  sub->add_option("--tournament", g.tournament, "Tournament size")->capture_default_str();
  sub->add_option("--mutation-rate", g.mutation_rate, "Per-gene replacement rate (default 1/L)");
  sub->add_option("--indel-ratio", g.indel_ratio, "Insert/delete rate relative to replacement")
      ->capture_default_str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int run_manifest(const std::string& path, const std::string& output, std::ostream& out, std::ostream& err,
                 int depth) {
  json m;
  try {
    m = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw InvalidArgument(path + ": manifest has no argv");
  std::vector<std::string> args;
  const auto recorded = m["argv"].get<std::vector<std::string>>();
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    const auto& a = recorded[i];
    if (a == "-o" || a == "--output" || a == "--manifest") {
      ++i;
    } else if (a.rfind("--output=", 0) != 0 && a.rfind("--manifest=", 0) != 0) {
      args.push_back(a);
    }
  }
  args.push_back("--output");
  args.push_back(output.empty() ? m.value("output", std::string("-")) : output);
  return dispatch(args, out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  if (depth > 1) throw UsageError("a manifest cannot replay another manifest");

  CLI::App app{"Genetic-algorithm search over MT n-best lists with composable metric fitness", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOptions common;
  GaOptions gopt;
  RerankOptions ropt;
  OptimizeOptions oopt;
  MineOptions mopt;
  ReportOptions popt;
  std::string replay_path;
  std::string replay_output;

  auto* rerank = app.add_subcommand("rerank", "Pick one hypothesis per case");
  add_common(rerank, common, true);
  add_scoring(rerank, common);
  rerank->add_option("--mode", ropt.mode, "logprob, oracle or mbr")
      ->capture_default_str()
      ->check(CLI::IsMember({"logprob", "oracle", "mbr"}));
  rerank->add_option("--metric", ropt.metric, "Summed reranking metric (repeatable)");

  auto* optimize = app.add_subcommand("optimize", "Run the GA on every case");
  add_common(optimize, common, true);
  add_scoring(optimize, common);
  add_ga(optimize, gopt);
  optimize->add_option("--mode", oopt.mode, "oracle or mbr")
      ->capture_default_str()
      ->check(CLI::IsMember({"oracle", "mbr"}));
  optimize->add_option("--fitness", oopt.fitness, "Summed fitness component (repeatable)");

  auto* mine = app.add_subcommand("mine", "Search for objective gains that hurt a held-out metric");
  add_common(mine, common, true);
  add_scoring(mine, common);
  add_ga(mine, gopt);
  mine->add_option("--objective", mopt.objective, "Objective component (repeatable)");
  mine->add_option("--held-out", mopt.held_out, "Held-out metric");
  mine->add_option("--margins", mopt.margins, "<m_o> <m_h>")->expected(2)->capture_default_str();
  mine->add_flag("--only-adversarial", mopt.only_adversarial, "Write adversarial records only");

  auto* rep = app.add_subcommand("report", "Compare two systems' score files");
  rep->add_option("files", popt.files, "Score files of system A and system B")->required()->expected(2);
  rep->add_option("-o,--output", common.output, "Output path, '-' for stdout")->capture_default_str();
  rep->add_option("--manifest", common.manifest, "Manifest path (default <output>.manifest.json)");
  rep->add_option("--seed", common.seed, "Bootstrap seed")->capture_default_str();
  rep->add_option("--bootstrap-n", popt.bootstrap_n, "Bootstrap resamples")->capture_default_str();
  rep->add_option("--names", popt.names, "System names")->expected(2);
  rep->add_option("--format", popt.format, "tsv or json")->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_path, "Manifest file")->required();
  replay->add_option("-o,--output", replay_output, "Override the recorded output path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (replay->parsed()) return run_manifest(replay_path, replay_output, out, err, depth);

  RunContext ctx;
  ctx.argv = args;
  ctx.started = utc_now();
  ctx.config["seed"] = common.seed;
  if (rerank->parsed()) {
    ctx.command = "rerank";
    return cmd_rerank(common, ropt, ctx, out, err);
  }
  if (optimize->parsed()) {
    ctx.command = "optimize";
    return cmd_optimize(common, gopt, oopt, ctx, out, err);
  }
  if (mine->parsed()) {
    ctx.command = "mine";
    return cmd_mine(common, gopt, mopt, ctx, out, err);
  }
  ctx.command = "report";
  return cmd_report(common, popt, ctx, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, 0);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const TransportError& e) {
    err << "scorer transport error: " << e.what() << "\n";
    return kExitScorer;
  } catch (const ProtocolError& e) {
    err << "scorer protocol error: " << e.what() << "\n";
    return kExitScorer;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace metricga::cli
