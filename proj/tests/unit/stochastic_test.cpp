#include <gtest/gtest.h>

#include <random>

#include "chainlab/error.hpp"
#include "chainlab/stochastic.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace chainlab {
namespace {

RawChain two_state(std::vector<std::vector<double>> rows) {
  RawChain raw;
  raw.labels = {"s1", "s2"};
  raw.transitions = std::move(rows);
  return raw;
}

ErrorCode code_of(const RawChain& raw, const ValidationOptions& opts = {}) {
  try {
    validate_model(raw, opts);
  } catch (const ChainError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected validation failure";
  return ErrorCode::ParseError;
}

TEST(ValidateModel, AcceptsBrandSwitchingMatrix) {
  const auto model = validate_model(two_state({{0.7, 0.3}, {0.2, 0.8}}));
  EXPECT_EQ(model.size(), 2u);
  EXPECT_EQ(model.states().label(1), "s2");
  EXPECT_DOUBLE_EQ(model.matrix()(1, 0), 0.2);
  EXPECT_FALSE(model.initial().has_value());
}

TEST(ValidateModel, AcceptsDegenerateSingleState) {
  RawChain raw{{"only"}, {{1.0}}, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_EQ(validate_model(raw).size(), 1u);
}

TEST(ValidateModel, RowSumViolationReportsRowAndSum) {
  try {
    validate_model(two_state({{0.7, 0.2}, {0.2, 0.8}}));
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::RowSumViolation);
    ASSERT_TRUE(e.row.has_value());
    EXPECT_EQ(*e.row, 0u);
    EXPECT_NEAR(*e.value, 0.9, 1e-15);
    EXPECT_EQ(e.field_path(), "transitions[0]");
  }
}

TEST(ValidateModel, ErrorKinds) {
  EXPECT_EQ(code_of(two_state({{0.5, 0.5}, {0.2, 0.3, 0.5}})), ErrorCode::NonSquareMatrix);
  EXPECT_EQ(code_of(two_state({{1.1, -0.1}, {0.5, 0.5}})), ErrorCode::NegativeEntry);
  EXPECT_EQ(code_of(two_state({{0.5, 0.5}})), ErrorCode::NonSquareMatrix);

  RawChain dup = two_state({{0.5, 0.5}, {0.5, 0.5}});
  dup.labels = {"a", "a"};
  EXPECT_EQ(code_of(dup), ErrorCode::DuplicateStateLabel);

  RawChain empty_label = two_state({{0.5, 0.5}, {0.5, 0.5}});
  empty_label.labels = {"a", ""};
  EXPECT_EQ(code_of(empty_label), ErrorCode::InvalidStateLabel);

  RawChain three = two_state({{0.5, 0.5}, {0.5, 0.5}});
  three.labels = {"a", "b", "c"};
  EXPECT_EQ(code_of(three), ErrorCode::DimensionMismatch);

  RawChain init = two_state({{0.5, 0.5}, {0.5, 0.5}});
  init.initial = std::vector<double>{1.0};
  EXPECT_EQ(code_of(init), ErrorCode::DimensionMismatch);
  init.initial = std::vector<double>{0.5, 0.6};
  EXPECT_EQ(code_of(init), ErrorCode::InvalidProbabilityVector);

  RawChain weights = two_state({{0.5, 0.5}, {0.5, 0.5}});
  weights.weights = std::map<std::string, double>{{"nope", 1.0}};
  EXPECT_EQ(code_of(weights), ErrorCode::UnknownStateReference);
  weights.weights = std::map<std::string, double>{{"s1", -1.0}};
  EXPECT_EQ(code_of(weights), ErrorCode::NegativeWeight);
  weights.weights.reset();
  weights.terminal_weights = std::map<std::string, double>{{"ghost", 1.0}};
  EXPECT_EQ(code_of(weights), ErrorCode::UnknownStateReference);

  EXPECT_EQ(code_of(two_state({{0.5, std::nan("")}, {0.5, 0.5}})), ErrorCode::NonFiniteEntry);
}

TEST(ValidateModel, FieldPathsNameTheOffendingEntry) {
  try {
    validate_model(two_state({{0.5, 0.5}, {0.7, -0.3}}));
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.field_path(), "transitions[1][1]");
  }
  RawChain w = two_state({{0.5, 0.5}, {0.5, 0.5}});
  w.weights = std::map<std::string, double>{{"s1", 1.0}, {"zzz", 2.0}};
  try {
    validate_model(w);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.field_path(), "weights.zzz");
  }
}

TEST(ValidateModel, AcceptsWithinRowSumTolerance) {
  EXPECT_NO_THROW(validate_model(two_state({{0.7 + 5e-10, 0.3}, {0.2, 0.8}})));
  EXPECT_EQ(code_of(two_state({{0.7 + 5e-9, 0.3}, {0.2, 0.8}})), ErrorCode::RowSumViolation);
}

TEST(ValidateModel, RenormalizesOnlyWhenAsked) {
  const auto raw = two_state({{0.7 + 5e-7, 0.3}, {0.2, 0.8}});
  EXPECT_EQ(code_of(raw), ErrorCode::RowSumViolation);

  ValidationOptions opts;
  opts.renormalize = true;
  const auto model = validate_model(raw, opts);
  EXPECT_NEAR(model.matrix()(0, 0) + model.matrix()(0, 1), 1.0, 1e-15);
  ASSERT_EQ(model.renormalized_rows().size(), 1u);
  EXPECT_EQ(model.renormalized_rows()[0], 0u);

  // Outside the renormalization window the row is still rejected.
  EXPECT_EQ(code_of(two_state({{0.7 + 5e-6, 0.3}, {0.2, 0.8}}), opts), ErrorCode::RowSumViolation);
}

TEST(Step, HandComputedProduct) {
  const auto model = validate_model(two_state({{0.7, 0.3}, {0.2, 0.8}}));
  const auto p = step(ProbabilityVector({0.0, 1.0}), model.matrix());
  EXPECT_DOUBLE_EQ(p[0], 0.2);
  EXPECT_DOUBLE_EQ(p[1], 0.8);
}

TEST(Step, IdentityAndSwap) {
  const StochasticMatrix identity(Matrix::identity(3));
  const ProbabilityVector p({0.2, 0.5, 0.3});
  EXPECT_EQ(step(p, identity), p);

  const StochasticMatrix swap(Matrix{{0.0, 1.0}, {1.0, 0.0}});
  const auto q = step(ProbabilityVector({0.5, 0.5}), swap);
  EXPECT_DOUBLE_EQ(q[0], 0.5);
  EXPECT_DOUBLE_EQ(q[1], 0.5);
}

TEST(Step, DimensionMismatch) {
  const StochasticMatrix identity(Matrix::identity(3));
  try {
    step(ProbabilityVector({0.5, 0.5}), identity);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Evolve, BrandSwitchingTwoWeeks) {
  auto raw = two_state({{0.7, 0.3}, {0.2, 0.8}});
  raw.initial = std::vector<double>{0.0, 1.0};
  const auto model = validate_model(raw);
  const auto p2 = evolve(model, 2);
  EXPECT_NEAR(p2[0], 0.3, 1e-12);
  EXPECT_NEAR(p2[1], 0.7, 1e-12);
  EXPECT_EQ(evolve(model, 0), *model.initial());
}

TEST(Evolve, TenStepsMatchesTwoStateClosedForm) {
  // Two-state chain: P_k(s1) = pi1 + (P_0(s1) - pi1)·(1 - a - b)^k with a = 0.3, b = 0.2.
  auto raw = two_state({{0.7, 0.3}, {0.2, 0.8}});
  raw.initial = std::vector<double>{0.0, 1.0};
  const auto p10 = evolve(validate_model(raw), 10);
  EXPECT_NEAR(p10[0], 0.399609375, 1e-14);
  EXPECT_NEAR(p10[1], 0.600390625, 1e-14);
}

TEST(Evolve, MissingInitialVector) {
  const auto model = validate_model(two_state({{0.7, 0.3}, {0.2, 0.8}}));
  try {
    evolve(model, 3);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingInitialVector);
  }
}

TEST(Evolve, EvolveAtMatchesIndividualCalls) {
  auto raw = two_state({{0.7, 0.3}, {0.2, 0.8}});
  raw.initial = std::vector<double>{0.0, 1.0};
  const auto model = validate_model(raw);
  const auto pairs = evolve_at(model, {10, 2, 2, 0});
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].first, 0u);
  EXPECT_EQ(pairs[2].first, 10u);
  EXPECT_EQ(pairs[1].second, evolve(model, 2));
  EXPECT_EQ(pairs[2].second, evolve(model, 10));
}

// Property: one step equals the total-probability enumeration, and the result
// is a probability vector.
TEST(StepProperty, MatchesTotalProbabilityEnumeration) {
  testing::Rng rng(20240101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const auto rows = testing::random_stochastic(rng, n);
    const auto model = testing::make_model(rows);
    auto p0 = testing::random_row(rng, n, 0.7);
    const auto p = step(ProbabilityVector(p0), model.matrix());
    const auto expected = testing::total_probability_step(p0, rows);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(p[i], expected[i]);
      EXPECT_GE(p[i], 0.0);
      sum += p[i];
    }
    EXPECT_NEAR(sum, 1.0, 8 * kRowSumTol);
  }
}

TEST(EvolveProperty, MatchesPathEnumeration) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
    const auto rows = testing::random_stochastic(rng, n);
    const auto p0 = testing::random_row(rng, n, 0.8);
    const auto got = evolve(ProbabilityVector(p0), testing::make_model(rows).matrix(), k);
    const auto want = testing::path_enumeration(p0, rows, k);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], 1e-13);
  }
}

TEST(EvolveProperty, SemigroupSplit) {
  testing::Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, 3000)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 3000)(rng);
    const auto model = testing::make_model(testing::random_stochastic(rng, n));
    const ProbabilityVector p0(testing::random_row(rng, n, 0.5));
    const auto direct = evolve(p0, model.matrix(), j + k);
    const auto split = evolve(evolve(p0, model.matrix(), j), model.matrix(), k);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(direct[i], split[i], 1e-12);
  }
}

TEST(ChainModel, PermutedRelabelsEverything) {
  RawChain raw{{"a", "b", "c"},
               {{0.1, 0.9, 0.0}, {0.0, 0.5, 0.5}, {1.0, 0.0, 0.0}},
               std::vector<double>{0.2, 0.3, 0.5},
               std::map<std::string, double>{{"a", 1.0}, {"c", 3.0}},
               std::nullopt};
  const auto model = validate_model(raw);
  const std::vector<std::size_t> order{2, 0, 1};
  const auto p = model.permuted(order);
  EXPECT_EQ(p.states().labels(), (std::vector<std::string>{"c", "a", "b"}));
  EXPECT_DOUBLE_EQ(p.matrix()(0, 1), 1.0);  // c -> a
  EXPECT_DOUBLE_EQ(p.matrix()(1, 2), 0.9);  // a -> b
  EXPECT_DOUBLE_EQ((*p.initial())[0], 0.5);
  EXPECT_DOUBLE_EQ(p.weights()->at(0), 3.0);
  EXPECT_DOUBLE_EQ(p.weights()->at(1), 1.0);
}

}  // namespace
}  // namespace chainlab
