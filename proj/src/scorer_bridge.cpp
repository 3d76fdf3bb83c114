#include "metricga/scorer_bridge.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "metricga/error.hpp"
#include "metricga/textcore.hpp"
#include "subprocess.hpp"

namespace metricga::scoring {

using nlohmann::json;

namespace {

std::string_view rule_name(MockRule rule) {
  switch (rule) {
    case MockRule::neg_edit_distance: return "neg-edit-distance";
    case MockRule::len_bias: return "len-bias";
    case MockRule::token_overlap_ignoring_numbers: return "token-overlap-ignoring-numbers";
  }
  return "";
}

std::string_view kind_name(EndpointKind kind) {
  switch (kind) {
    case EndpointKind::subprocess: return "subprocess";
    case EndpointKind::http: return "http";
    case EndpointKind::mock: return "mock";
  }
  return "";
}

const std::vector<std::string>& required_refs(const ScoreItem& item, MockRule rule) {
  if (!item.refs || item.refs->empty()) {
    throw InvalidArgument("mock scorer '" + std::string(rule_name(rule)) +
                          "' needs references (item '" + item.id + "')");
  }
  return *item.refs;
}

bool has_digit(const std::string& token) {
  return std::any_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string> non_numeric_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) {
    if (!has_digit(t.str())) out.push_back(t.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

double overlap_f1(std::string_view mt, std::string_view ref) {
  const auto hyp = non_numeric_tokens(mt);
  const auto gold = non_numeric_tokens(ref);
  if (hyp.empty() || gold.empty()) return 0.0;
  // Both sorted: the clipped multiset intersection is a merge.
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < hyp.size() && j < gold.size();) {
    if (hyp[i] == gold[j]) {
      ++common;
      ++i;
      ++j;
    } else if (hyp[i] < gold[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * p * r / (p + r);
}

}  // namespace

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string round_trip(const std::string& request_line) = 0;
};

namespace {

class SubprocessTransport final : public Transport {
 public:
  SubprocessTransport(const std::string& command, std::chrono::milliseconds timeout)
      : process_(command), timeout_(timeout) {}

  std::string round_trip(const std::string& request_line) override {
    process_.write_line(request_line);
    return process_.read_line(timeout_);
  }

 private:
  detail::LineProcess process_;
  std::chrono::milliseconds timeout_;
};

class HttpTransport final : public Transport {
 public:
  HttpTransport(const std::string& url, std::chrono::milliseconds timeout) {
    // Split "scheme://host:port/prefix" into the client base and a path.
    const auto scheme_end = url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    const std::string base = url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    path_ = prefix + "/score";
    client_ = std::make_unique<httplib::Client>(base);
    if (!client_->is_valid()) throw TransportError("invalid scorer URL '" + url + "'");
    const auto secs = timeout.count() / 1000;
    const auto usecs = (timeout.count() % 1000) * 1000;
    client_->set_connection_timeout(secs, usecs);
    client_->set_read_timeout(secs, usecs);
    client_->set_write_timeout(secs, usecs);
  }

  std::string round_trip(const std::string& request_line) override {
    auto res = client_->Post(path_, request_line, "application/json");
    if (!res) {
      throw TransportError("scorer HTTP request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw TransportError("scorer HTTP status " + std::to_string(res->status));
    }
    std::string body = res->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    return body;
  }

 private:
  std::unique_ptr<httplib::Client> client_;
  std::string path_;
};

}  // namespace

std::string ScorerEndpoint::identity() const {
  std::string id(kind_name(kind));
  id.push_back(':');
  if (kind == EndpointKind::mock && mock_spec) {
    id += rule_name(mock_spec->rule);
    if (mock_spec->rule == MockRule::len_bias) {
      char buf[32];
      const auto r = std::to_chars(buf, buf + sizeof buf, mock_spec->weight);
      id.push_back(':');
      id.append(buf, r.ptr);
    }
  } else {
    id += address;
  }
  return id;
}

ScorerEndpoint make_mock_scorer(std::string_view spec) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  const std::string param = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
  MockSpec mock;
  if (name == "neg-edit-distance") {
    mock.rule = MockRule::neg_edit_distance;
  } else if (name == "len-bias") {
    mock.rule = MockRule::len_bias;
    if (!param.empty()) {
      char* end = nullptr;
      mock.weight = std::strtod(param.c_str(), &end);
      if (end != param.c_str() + param.size()) {
        throw InvalidArgument("len-bias weight must be a number, got '" + param + "'");
      }
    }
  } else if (name == "token-overlap-ignoring-numbers") {
    mock.rule = MockRule::token_overlap_ignoring_numbers;
  } else {
    throw InvalidArgument("unknown mock scorer '" + std::string(name) + "'");
  }
  if (!param.empty() && mock.rule != MockRule::len_bias) {
    throw InvalidArgument("mock scorer '" + std::string(name) + "' takes no parameter");
  }
  return ScorerEndpoint{EndpointKind::mock, "", mock};
}

ScorerEndpoint parse_endpoint(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("scorer endpoint must look like <kind>:<address>, got '" +
                          std::string(text) + "'");
  }
  const auto kind = text.substr(0, colon);
  const std::string address(text.substr(colon + 1));
  if (kind == "mock") return make_mock_scorer(address);
  if (address.empty()) throw InvalidArgument("scorer endpoint needs an address");
  if (kind == "subprocess") return ScorerEndpoint{EndpointKind::subprocess, address, std::nullopt};
  if (kind == "http") return ScorerEndpoint{EndpointKind::http, address, std::nullopt};
  throw InvalidArgument("unknown scorer kind '" + std::string(kind) + "'");
}

bool mock_needs_reference(MockRule rule) noexcept { return rule != MockRule::len_bias; }

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double mock_score(const MockSpec& spec, const ScoreItem& item) {
  switch (spec.rule) {
    case MockRule::len_bias:
      return spec.weight * static_cast<double>(tokenize(item.mt).size());
    case MockRule::neg_edit_distance: {
      const auto& refs = required_refs(item, spec.rule);
      const auto mt = text::decode_utf8(item.mt);
      double sum = 0.0;
      for (const auto& r : refs) {
        const auto ref = text::decode_utf8(r);
        sum -= static_cast<double>(levenshtein(mt, ref)) /
               static_cast<double>(std::max<std::size_t>(1, ref.size()));
      }
      return sum / static_cast<double>(refs.size());
    }
    case MockRule::token_overlap_ignoring_numbers: {
      const auto& refs = required_refs(item, spec.rule);
      double sum = 0.0;
      for (const auto& r : refs) sum += overlap_f1(item.mt, r);
      return sum / static_cast<double>(refs.size());
    }
  }
  return 0.0;
}

json request_to_json(std::string_view batch_id, std::span<const ScoreItem> items) {
  json arr = json::array();
  for (const auto& it : items) {
    json o{{"id", it.id}, {"src", it.src}, {"mt", it.mt}};
    if (it.refs) o["refs"] = *it.refs;
    arr.push_back(std::move(o));
  }
  return {{"batch_id", batch_id}, {"items", std::move(arr)}};
}

std::vector<IdScore> parse_response(std::string_view line, std::string_view batch_id,
                                    std::span<const ScoreItem> items) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed scorer response: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("scorer response is not an object");
  if (!doc.contains("batch_id") || !doc["batch_id"].is_string() ||
      doc["batch_id"].get<std::string>() != batch_id) {
    throw ProtocolError("scorer response has the wrong batch_id");
  }
  if (doc.contains("error")) {
    throw ProtocolError("scorer reported an error: " + doc["error"].dump());
  }
  if (!doc.contains("scores") || !doc["scores"].is_array()) {
    throw ProtocolError("scorer response has no scores array");
  }
  std::unordered_map<std::string, double> by_id;
  for (const auto& s : doc["scores"]) {
    if (!s.is_object() || !s.contains("id") || !s["id"].is_string() || !s.contains("score") ||
        !s["score"].is_number()) {
      throw ProtocolError("malformed score entry: " + s.dump());
    }
    if (!by_id.emplace(s["id"].get<std::string>(), s["score"].get<double>()).second) {
      throw ProtocolError("duplicate id in scorer response: " + s["id"].get<std::string>());
    }
  }
  std::vector<IdScore> out;
  out.reserve(items.size());
  for (const auto& it : items) {
    const auto found = by_id.find(it.id);
    if (found == by_id.end()) throw ProtocolError("scorer response is missing id '" + it.id + "'");
    out.push_back({it.id, found->second});
  }
  if (by_id.size() != items.size()) throw ProtocolError("scorer response has unexpected ids");
  return out;
}

std::optional<double> ScoreCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::insert(const std::string& key, double score) {
  std::unique_lock lock(mutex_);
  entries_.emplace(key, score);
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::string ScoreCache::key(const ScorerEndpoint& endpoint, const ScoreItem& item) {
  // Field separator and a marker distinguishing "no refs" from "[]".
  constexpr char kSep = '\x1f';
  std::string k = endpoint.identity();
  k.push_back(kSep);
  k += item.src;
  k.push_back(kSep);
  k += item.mt;
  k.push_back(kSep);
  if (!item.refs) {
    k.push_back('-');
  } else {
    k.push_back('+');
    for (const auto& r : *item.refs) {
      k.push_back(kSep);
      k += r;
    }
  }
  return k;
}

ClientOptions ClientOptions::from_environment() {
  ClientOptions opts;
  if (const char* env = std::getenv("METRIC_GA_SCORER_TIMEOUT_MS")) {
    char* end = nullptr;
    const long ms = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && ms > 0) opts.timeout = std::chrono::milliseconds(ms);
  }
  return opts;
}

ScorerClient::ScorerClient(ScorerEndpoint endpoint, std::shared_ptr<ScoreCache> cache,
                           ClientOptions options)
    : endpoint_(std::move(endpoint)), cache_(std::move(cache)), options_(options) {
  if (endpoint_.kind == EndpointKind::mock && !endpoint_.mock_spec) {
    throw InvalidArgument("mock endpoint without a mock rule");
  }
}

ScorerClient::~ScorerClient() = default;

std::size_t ScorerClient::request_count() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::vector<IdScore> ScorerClient::score_batch(std::span<const ScoreItem> items) {
  if (items.empty()) throw InvalidArgument("score_batch needs at least one item");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& it : items) {
      if (!ids.insert(it.id).second) throw InvalidArgument("duplicate item id '" + it.id + "'");
    }
  }

  std::vector<IdScore> out(items.size());
  std::vector<std::size_t> misses;
  std::vector<std::string> keys(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    out[i].id = items[i].id;
    if (cache_) {
      keys[i] = ScoreCache::key(endpoint_, items[i]);
      if (auto hit = cache_->lookup(keys[i])) {
        out[i].score = *hit;
        continue;
      }
    }
    misses.push_back(i);
  }
  if (misses.empty()) return out;

  std::vector<ScoreItem> batch;
  batch.reserve(misses.size());
  for (auto i : misses) batch.push_back(items[i]);

  std::vector<IdScore> scores;
  {
    std::lock_guard lock(mutex_);
    ++requests_;
    if (endpoint_.kind == EndpointKind::mock) {
      scores.reserve(batch.size());
      for (const auto& it : batch) scores.push_back({it.id, mock_score(*endpoint_.mock_spec, it)});
    } else {
      if (!transport_) {
        if (endpoint_.kind == EndpointKind::subprocess) {
          transport_ = std::make_unique<SubprocessTransport>(endpoint_.address, options_.timeout);
        } else {
          transport_ = std::make_unique<HttpTransport>(endpoint_.address, options_.timeout);
        }
      }
      const std::string batch_id = std::to_string(next_batch_++);
      std::string response;
      try {
        response = transport_->round_trip(request_to_json(batch_id, batch).dump());
      } catch (const TransportError&) {
        // The next batch reconnects (or respawns the child).
        transport_.reset();
        throw;
      }
      scores = parse_response(response, batch_id, batch);
    }
  }

  for (std::size_t k = 0; k < misses.size(); ++k) {
    const auto i = misses[k];
    out[i].score = scores[k].score;
    if (cache_) cache_->insert(keys[i], scores[k].score);
  }
  return out;
}

}  // namespace metricga::scoring
