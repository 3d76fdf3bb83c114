#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Client side of the external scorer protocol. One request line per batch:
//   {"batch_id": "...", "items": [{"id", "src", "mt", "refs"?}, ...]}
// answered by one response line:
//   {"batch_id": "...", "scores": [{"id", "score"}, ...]}
// or {"batch_id": "...", "error": "..."}.
namespace metricga::scoring {

struct ScoreItem {
  std::string id;
  std::string src;
  std::string mt;
  // Absent for reference-free (QE-style) metrics.
  std::optional<std::vector<std::string>> refs;
};

struct IdScore {
  std::string id;
  double score = 0.0;

  friend bool operator==(const IdScore&, const IdScore&) = default;
};

enum class EndpointKind { subprocess, http, mock };

enum class MockRule {
  // -levenshtein(mt, ref) / max(1, |ref|) over code points, mean over refs.
  neg_edit_distance,
  // weight * token count of mt (reference-free).
  len_bias,
  // F1 of the clipped token overlap after dropping every token that
  // contains a decimal digit; mean over refs.
  token_overlap_ignoring_numbers,
};

struct MockSpec {
  MockRule rule = MockRule::neg_edit_distance;
  double weight = 0.01;  // len-bias only
};

struct ScorerEndpoint {
  EndpointKind kind = EndpointKind::mock;
  std::string address;  // command line or URL; empty for mock
  std::optional<MockSpec> mock_spec;

  // Stable string naming this endpoint; part of every cache key.
  std::string identity() const;
};

// `spec` is a rule name optionally followed by ":<parameter>", e.g.
// "len-bias:0.05". Throws InvalidArgument for unknown rules.
ScorerEndpoint make_mock_scorer(std::string_view spec);

// Parses "<kind>:<address>", e.g. "mock:neg-edit-distance",
// "subprocess:python adapter.py", "http:http://127.0.0.1:8000".
ScorerEndpoint parse_endpoint(std::string_view text);

bool mock_needs_reference(MockRule rule) noexcept;

// Throws InvalidArgument when a reference-based rule gets no refs.
double mock_score(const MockSpec& spec, const ScoreItem& item);

std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

nlohmann::json request_to_json(std::string_view batch_id, std::span<const ScoreItem> items);
// Parses and validates a response against the request ids; returns scores
// aligned with `items`. Throws ProtocolError.
std::vector<IdScore> parse_response(std::string_view line, std::string_view batch_id,
                                    std::span<const ScoreItem> items);

class ScoreCache {
 public:
  std::optional<double> lookup(const std::string& key) const;
  void insert(const std::string& key, double score);
  std::size_t size() const;

  static std::string key(const ScorerEndpoint& endpoint, const ScoreItem& item);

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, double> entries_;
};

struct ClientOptions {
  std::chrono::milliseconds timeout{60000};

  // Reads METRIC_GA_SCORER_TIMEOUT_MS when set.
  static ClientOptions from_environment();
};

class Transport;

// A connection to one endpoint. Batches are serialized per client; the
// cache may be shared between clients and threads.
class ScorerClient {
 public:
  ScorerClient(ScorerEndpoint endpoint, std::shared_ptr<ScoreCache> cache,
               ClientOptions options = ClientOptions::from_environment());
  ~ScorerClient();

  ScorerClient(const ScorerClient&) = delete;
  ScorerClient& operator=(const ScorerClient&) = delete;

  // One score per item, order-aligned with the input. Cache hits are served
  // locally; the remaining items go to the endpoint as a single batch.
  std::vector<IdScore> score_batch(std::span<const ScoreItem> items);

  const ScorerEndpoint& endpoint() const noexcept { return endpoint_; }
  // Requests actually sent to the endpoint.
  std::size_t request_count() const;

 private:
  ScorerEndpoint endpoint_;
  std::shared_ptr<ScoreCache> cache_;
  ClientOptions options_;
  mutable std::mutex mutex_;
  std::unique_ptr<Transport> transport_;
  std::size_t requests_ = 0;
  std::size_t next_batch_ = 0;
};

inline std::vector<IdScore> score_batch(ScorerClient& client, std::span<const ScoreItem> items) {
  return client.score_batch(items);
}

}  // namespace metricga::scoring
