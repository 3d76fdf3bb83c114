#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace metricga {

enum class Origin { beam, sample, user };

std::string_view to_string(Origin origin);
// Throws InvalidArgument for anything outside {beam, sample, user}.
Origin parse_origin(std::string_view name);

struct HypothesisRecord {
  std::string text;
  // Natural-log model probability; absent for user-supplied hypotheses.
  std::optional<double> logprob;
  Origin origin = Origin::beam;
};

// One test-set item: a source, its references and the initial n-best list.
struct SentenceCase {
  std::string id;
  std::string src;
  std::vector<std::string> refs;
  std::vector<HypothesisRecord> hyps;

  std::vector<std::string> hypothesis_texts() const;
  // Hypothesis texts in first-seen order without repeats.
  std::vector<std::string> unique_hypothesis_texts() const;
};

SentenceCase case_from_json(const nlohmann::json& j);
nlohmann::json case_to_json(const SentenceCase& c);

// Reads one case per non-blank line. Throws ParseError naming the line.
std::vector<SentenceCase> read_cases(std::istream& in);
std::vector<SentenceCase> read_cases_file(const std::string& path);

// FNV-1a over the bytes of `s`; identical on every platform.
std::uint64_t stable_hash(std::string_view s) noexcept;

inline std::uint64_t case_seed(std::uint64_t seed, std::string_view case_id) noexcept {
  return seed ^ stable_hash(case_id);
}

}  // namespace metricga
