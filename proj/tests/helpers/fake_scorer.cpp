// Resident scorer speaking the JSON-lines protocol on stdin/stdout, backed
// by the in-process mock rules. Misbehaviour modes exercise client errors.
//
//   fake_scorer <rule> [ok|garbage|missing-id|wrong-batch|error|exit|silent|crash-after-1]

#include <iostream>
#include <string>

#include <nlohmann/json.hpp>

#include "metricga/scorer_bridge.hpp"

using nlohmann::json;
namespace scoring = metricga::scoring;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: fake_scorer <rule> [mode]\n";
    return 2;
  }
  const auto endpoint = scoring::make_mock_scorer(argv[1]);
  const std::string mode = argc > 2 ? argv[2] : "ok";
  std::size_t served = 0;

  for (std::string line; std::getline(std::cin, line);) {
    if (mode == "exit") return 1;
    if (mode == "silent") continue;
    if (mode == "crash-after-1" && served == 1) return 1;
    json req;
    try {
      req = json::parse(line);
    } catch (const json::exception& e) {
      std::cout << json{{"batch_id", nullptr}, {"error", e.what()}}.dump() << std::endl;
      continue;
    }
    const auto batch = req.value("batch_id", std::string());
    if (mode == "garbage") {
      std::cout << "{not json" << std::endl;
      continue;
    }
    if (mode == "error") {
      std::cout << json{{"batch_id", batch}, {"error", "model exploded"}}.dump() << std::endl;
      continue;
    }
    json scores = json::array();
    for (const auto& it : req.at("items")) {
      scoring::ScoreItem item;
      item.id = it.at("id").get<std::string>();
      item.src = it.value("src", std::string());
      item.mt = it.at("mt").get<std::string>();
      if (it.contains("refs")) item.refs = it.at("refs").get<std::vector<std::string>>();
      scores.push_back({{"id", item.id}, {"score", scoring::mock_score(*endpoint.mock_spec, item)}});
    }
    if (mode == "missing-id" && !scores.empty()) scores.erase(scores.begin());
    json resp = {{"batch_id", mode == "wrong-batch" ? batch + "x" : batch}, {"scores", scores}};
    std::cout << resp.dump() << std::endl;
    ++served;
  }
  return 0;
}
