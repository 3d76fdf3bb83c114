#include "metricga/sentence_case.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "metricga/error.hpp"

namespace metricga {

using nlohmann::json;

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::beam: return "beam";
    case Origin::sample: return "sample";
    case Origin::user: return "user";
  }
  return "beam";
}

Origin parse_origin(std::string_view name) {
  if (name == "beam") return Origin::beam;
  if (name == "sample") return Origin::sample;
  if (name == "user") return Origin::user;
  throw InvalidArgument("unknown hypothesis origin '" + std::string(name) + "'");
}

std::vector<std::string> SentenceCase::hypothesis_texts() const {
  std::vector<std::string> out;
  out.reserve(hyps.size());
  for (const auto& h : hyps) out.push_back(h.text);
  return out;
}

std::vector<std::string> SentenceCase::unique_hypothesis_texts() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& h : hyps) {
    if (seen.insert(h.text).second) out.push_back(h.text);
  }
  return out;
}

SentenceCase case_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("case must be a JSON object");
  SentenceCase c;
  try {
    c.id = j.at("id").get<std::string>();
    c.src = j.value("src", std::string{});
    if (j.contains("refs")) c.refs = j.at("refs").get<std::vector<std::string>>();
    for (const auto& h : j.at("hyps")) {
      HypothesisRecord rec;
      rec.text = h.at("text").get<std::string>();
      if (h.contains("logprob") && !h.at("logprob").is_null()) {
        rec.logprob = h.at("logprob").get<double>();
      }
      rec.origin = parse_origin(h.value("origin", std::string{"beam"}));
      c.hyps.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(e.what());
  }
  if (c.hyps.empty()) throw InvalidArgument("case '" + c.id + "' has no hypotheses");
  return c;
}

json case_to_json(const SentenceCase& c) {
  json hyps = json::array();
  for (const auto& h : c.hyps) {
    json o{{"text", h.text}, {"origin", to_string(h.origin)}};
    if (h.logprob) o["logprob"] = *h.logprob;
    hyps.push_back(std::move(o));
  }
  return {{"id", c.id}, {"src", c.src}, {"refs", c.refs}, {"hyps", std::move(hyps)}};
}

std::vector<SentenceCase> read_cases(std::istream& in) {
  std::vector<SentenceCase> cases;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      cases.push_back(case_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return cases;
}

std::vector<SentenceCase> read_cases_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input '" + path + "'");
  return read_cases(in);
}

std::uint64_t stable_hash(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace metricga
