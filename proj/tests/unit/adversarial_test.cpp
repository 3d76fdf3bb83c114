#include <gtest/gtest.h>

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "metricga/adversarial.hpp"
#include "metricga/error.hpp"

using namespace metricga;
using namespace metricga::adversarial;

namespace {

fitness::FitnessComponent mock(const std::string& name, const std::string& rule) {
  return fitness::FitnessComponent::external(
      name,
      std::make_shared<scoring::ScorerClient>(scoring::make_mock_scorer(rule), std::make_shared<scoring::ScoreCache>()),
      true);
}

SentenceCase digit_case(std::string id) {
  return {std::move(id),
          "zaplatili jsme 42 eur",
          {"we paid 42 euros for 3 nights in Prague"},
          {{"we paid 42 euros for 3 nights in", -1.0, Origin::beam},
           {"they paid 42 euros for 3 nights in Prague", -2.0, Origin::beam}}};
}

ga::GAConfig config(std::size_t pop, std::size_t gens) {
  ga::GAConfig c;
  c.population_size = pop;
  c.generations = gens;
  c.seed = 17;
  c.mutation_rate = 0.15;
  return c;
}

}  // namespace

TEST(Predicate, ExampleRow) { EXPECT_TRUE(is_adversarial(0.6425, 0.7850, 0.6069, -0.8532)); }

TEST(Predicate, MarginsMustBeExceeded) {
  EXPECT_FALSE(is_adversarial(0.4, 0.4, 0.3, 0.3));
  EXPECT_FALSE(is_adversarial(-2.0, -2.0, 7.0, 7.0));
  EXPECT_FALSE(is_adversarial(0.5, 0.6, 0.5, 0.6));
  EXPECT_FALSE(is_adversarial(0.5, 0.5005, 0.5, 0.0));
  EXPECT_TRUE(is_adversarial(0.5, 0.5005, 0.5, 0.0, {0.0, 0.0}));
  EXPECT_FALSE(is_adversarial(0.5, 0.5, 0.5, 0.0, {0.0, 0.0}));
}

TEST(Mine, ObjectiveEqualToHeldOutNeverAdversarial) {
  const auto ned = mock("ned", "neg-edit-distance");
  mutation::PoolRecipe pools;
  pools.wordlist = mutation::pool_from_wordlist(std::vector<std::string>{"we paid 42 euros for 3 nights 77"});
  std::vector<SentenceCase> cases{digit_case("a"), digit_case("b")};
  const auto records = mine(cases, {ned}, ned, pools, config(40, 20));
  for (const auto& r : records) EXPECT_FALSE(r.is_adversarial);
}

TEST(Mine, DigitBlindSpotYieldsAdversarialRecord) {
  const auto objective = mock("tok", "token-overlap-ignoring-numbers");
  const auto held_out = mock("ned", "neg-edit-distance");
  mutation::PoolRecipe pools;
  pools.init = true;
  pools.wordlist = mutation::pool_from_wordlist(std::vector<std::string>{"77777777 99999999 1234567 5550000 31415926"});
  std::vector<SentenceCase> cases{digit_case("a"), digit_case("b"), digit_case("c")};
  const auto records = mine(cases, {objective}, held_out, pools, config(200, 60));
  ASSERT_EQ(records.size(), 3u);
  std::size_t adversarial = 0;
  for (const auto& r : records) {
    // Stored scores reproduce from the texts.
    scoring::ScoreItem ga{"x", r.src, r.best_ga, std::vector<std::string>{r.ref}};
    scoring::ScoreItem init{"x", r.src, r.best_init, std::vector<std::string>{r.ref}};
    const auto tok = *scoring::make_mock_scorer("token-overlap-ignoring-numbers").mock_spec;
    const auto ned = *scoring::make_mock_scorer("neg-edit-distance").mock_spec;
    EXPECT_EQ(r.o_ga, scoring::mock_score(tok, ga));
    EXPECT_EQ(r.o_init, scoring::mock_score(tok, init));
    EXPECT_EQ(r.h_ga, scoring::mock_score(ned, ga));
    EXPECT_EQ(r.h_init, scoring::mock_score(ned, init));
    EXPECT_EQ(r.is_adversarial, is_adversarial(r.o_init, r.o_ga, r.h_init, r.h_ga));
    adversarial += r.is_adversarial ? 1 : 0;
  }
  EXPECT_GE(adversarial, 1u);
  const auto counts = count(records);
  EXPECT_EQ(counts.cases, 3u);
  EXPECT_EQ(counts.adversarial, adversarial);
  std::size_t improved = 0;
  for (const auto& r : records) improved += (r.o_init + 1e-3 < r.o_ga) ? 1 : 0;
  EXPECT_EQ(counts.improved, improved);
}

TEST(Mine, RequiresReferences) {
  auto c = digit_case("a");
  c.refs.clear();
  std::vector<SentenceCase> cases{c};
  mutation::PoolRecipe pools;
  pools.init = true;
  EXPECT_THROW(mine(cases, {mock("tok", "token-overlap-ignoring-numbers")}, mock("ned", "neg-edit-distance"), pools,
                    config(4, 1)),
               InvalidArgument);
}

TEST(Record, JsonRoundTripUsesTableColumns) {
  const AdversarialRecord r{"7", "src", "ref", "init", "ga", 0.6425, 0.7850, 0.6069, -0.8532, true};
  const auto j = record_to_json(r);
  for (const auto* key : {"case_id", "src", "ref", "best_init", "best_ga", "o_init", "o_ga", "h_init", "h_ga",
                          "is_adversarial"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto back = record_from_json(j);
  EXPECT_EQ(back.case_id, r.case_id);
  EXPECT_EQ(back.h_ga, r.h_ga);
  EXPECT_EQ(back.is_adversarial, r.is_adversarial);
}
