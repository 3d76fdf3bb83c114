#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "metricga/sentence_case.hpp"
#include "metricga/textcore.hpp"

namespace fixtures {

using Strings = std::vector<std::string>;

inline const Strings& vocabulary() {
  static const Strings words{
      "the",     "a",      "cat",    "dog",     "house",   "river",   "green",   "small",   "old",    "new",
      "runs",    "sits",   "sees",   "takes",   "gives",   "near",    "under",   "over",    "with",   "without",
      "morning", "night",  "city",   "train",   "station", "friend",  "letter",  "window",  "garden", "street",
      "quickly", "slowly", "today",  "yesterday", "water", "bread",   "market",  "teacher", "school", "book",
      "red",     "blue",   "bright", "quiet",   "long",    "short",   "and",     "but",     "or",     "because"};
  return words;
}

// "zq0" ... "zq199": never collide with vocabulary words.
inline Strings distractors(std::size_t n) {
  Strings out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("zq" + std::to_string(i));
  return out;
}

inline std::string join(const Strings& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
  return s;
}

// A reference of `length` tokens and `hyps` hypotheses, each made by 3-6
// random substitutions, deletions or insertions.
inline metricga::SentenceCase edited_case(std::mt19937_64& rng, const std::string& id, std::size_t length,
                                          std::size_t hyps, const Strings& noise) {
  const auto& vocab = vocabulary();
  Strings ref;
  for (std::size_t i = 0; i < length; ++i) ref.push_back(vocab[rng() % vocab.size()]);
  metricga::SentenceCase c{id, "src " + id, {join(ref)}, {}};
  std::uniform_int_distribution<int> edits(3, 6);
  for (std::size_t h = 0; h < hyps; ++h) {
    Strings w = ref;
    for (int e = 0, n = edits(rng); e < n; ++e) {
      const auto kind = rng() % 3;
      const auto filler = (rng() % 2) ? noise[rng() % noise.size()] : vocab[rng() % vocab.size()];
      if (kind == 0 || w.size() < 2) {
        w[rng() % w.size()] = filler;
      } else if (kind == 1) {
        w.erase(w.begin() + static_cast<long>(rng() % w.size()));
      } else {
        w.insert(w.begin() + static_cast<long>(rng() % (w.size() + 1)), filler);
      }
    }
    c.hyps.push_back({join(w), -0.1 * static_cast<double>(h + 1) * static_cast<double>(w.size()),
                      metricga::Origin::beam});
  }
  return c;
}

struct DigitTemplate {
  Strings words;   // reference, digit tokens included
  std::size_t drop; // position dropped from the first hypothesis
};

// Each case has a reference with digit tokens, a first hypothesis missing
// one word and a second one with a wrong first word and digit clutter.
inline std::vector<metricga::SentenceCase> digit_cases() {
  const std::vector<Strings> refs{
      {"we", "paid", "42", "euros", "for", "3", "nights", "in", "Prague"},
      {"the", "train", "leaves", "at", "7", "from", "platform", "12", "today"},
      {"she", "bought", "5", "apples", "and", "2", "loaves", "of", "bread"},
      {"about", "300", "people", "came", "to", "the", "meeting", "on", "Monday"},
      {"the", "bridge", "is", "40", "metres", "long", "and", "6", "wide"},
      {"he", "ran", "10", "kilometres", "in", "55", "minutes", "last", "week"},
      {"our", "flight", "number", "8", "was", "delayed", "by", "90", "minutes"},
      {"they", "sold", "1200", "tickets", "in", "the", "first", "3", "hours"},
      {"room", "14", "has", "2", "beds", "and", "a", "small", "balcony"},
      {"the", "museum", "opened", "in", "1998", "with", "20", "rooms", "only"}};
  std::vector<metricga::SentenceCase> out;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const auto& r = refs[k];
    Strings a(r.begin(), r.end() - 1);
    Strings b = r;
    b[0] = r[0] == "they" ? "we" : "they";
    b.insert(b.begin() + static_cast<long>(r.size() - 2), "77777777");
    b.push_back("99999999");
    out.push_back({"d" + std::to_string(k),
                   "src " + std::to_string(k),
                   {join(r)},
                   {{join(a), -1.0, metricga::Origin::beam}, {join(b), -2.0, metricga::Origin::beam}}});
  }
  return out;
}

inline std::string to_jsonl(const std::vector<metricga::SentenceCase>& cases) {
  std::string s;
  for (const auto& c : cases) s += metricga::case_to_json(c).dump() + "\n";
  return s;
}

}  // namespace fixtures
