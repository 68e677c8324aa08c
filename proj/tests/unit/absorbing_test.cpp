#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chainlab/absorbing.hpp"
#include "chainlab/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace chainlab {
namespace {

using testing::load_fixture;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const ChainError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ChainError";
  return ErrorCode::ParseError;
}

TEST(CanonicalForm, HarvestPipeline) {
  const auto f = canonical_form(load_fixture("problem_4_1.json"));
  EXPECT_EQ(f.k, 1u);
  EXPECT_EQ(f.canonical_order, (std::vector<std::size_t>{3, 0, 1, 2}));
  EXPECT_EQ(f.Q, (Matrix{{0, 1, 0}, {0.2, 0, 0.8}, {0, 0, 0}}));
  EXPECT_EQ(f.R, (Matrix{{0}, {0}, {1}}));
  EXPECT_EQ(f.transient_position(2), std::optional<std::size_t>(2));
  EXPECT_EQ(f.transient_position(3), std::nullopt);
  EXPECT_EQ(f.absorbing_position(3), std::optional<std::size_t>(0));
}

TEST(CanonicalForm, RandomWalk) {
  const auto f = canonical_form(load_fixture("problem_4_2.json"));
  EXPECT_EQ(f.canonical_order, (std::vector<std::size_t>{0, 4, 1, 2, 3}));
  EXPECT_EQ(f.Q, (Matrix{{0, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0}}));
  EXPECT_EQ(f.R, (Matrix{{0.5, 0}, {0, 0}, {0, 0.5}}));
}

TEST(CanonicalForm, AllAbsorbingHasEmptyBlocks) {
  const auto d = analyze_absorbing(testing::make_model({{1, 0}, {0, 1}}));
  EXPECT_EQ(d.form.k, 2u);
  EXPECT_EQ(d.form.Q.rows(), 0u);
  EXPECT_EQ(d.form.R.rows(), 0u);
  EXPECT_EQ(d.form.R.cols(), 2u);
  EXPECT_TRUE(d.t.empty());
}

TEST(CanonicalForm, RejectsNonAbsorbing) {
  EXPECT_EQ(code_of([] { canonical_form(load_fixture("problem_2_3.json")); }),
            ErrorCode::NotAbsorbing);
  EXPECT_EQ(code_of([] { canonical_form(testing::make_model({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}})); }),
            ErrorCode::NotAbsorbing);
}

TEST(Fundamental, HarvestPipeline) {
  const auto d = analyze_absorbing(load_fixture("problem_4_1.json"));
  // (I - Q) inverted by hand: 1 - 0.2 = 0.8 on the collection/sorting loop.
  const Matrix want{{1.25, 1.25, 1.0}, {0.25, 1.25, 1.0}, {0, 0, 1.0}};
  EXPECT_LE(max_abs_diff(d.N, want), 1e-12);
  EXPECT_LE(max_abs_diff(d.t, std::vector<double>{3.5, 2.5, 1.0}), 1e-12);
}

TEST(Fundamental, RandomWalk) {
  const auto d = analyze_absorbing(load_fixture("problem_4_2.json"));
  const Matrix n_want{{1.5, 1.0, 0.5}, {1.0, 2.0, 1.0}, {0.5, 1.0, 1.5}};
  EXPECT_LE(max_abs_diff(d.N, n_want), 1e-12);
  const Matrix b_want{{0.75, 0.25}, {0.5, 0.5}, {0.25, 0.75}};
  EXPECT_LE(max_abs_diff(d.B, b_want), 1e-12);
  EXPECT_LE(max_abs_diff(d.t, std::vector<double>{3, 4, 3}), 1e-12);
}

TEST(Fundamental, CollegeProgression) {
  const auto d = analyze_absorbing(load_fixture("problem_4_3.json"));
  // Upper bidiagonal Q: N_{i,i+m} = 0.5^m / 0.7^(m+1).
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double want = j < i ? 0.0 : std::pow(0.5, double(j - i)) / std::pow(0.7, double(j - i + 1));
      EXPECT_NEAR(d.N(i, j), want, 1e-12) << i << "," << j;
    }
  EXPECT_NEAR(d.N(0, 0), 1.0 / 0.7, 1e-12);
  // Graduation needs four passes at 0.5 each; the rest is withdrawal.
  const double grad = std::pow(0.5 / 0.7, 4.0);
  EXPECT_NEAR(d.B(0, 1), grad, 1e-12);
  EXPECT_NEAR(d.B(0, 0), 1.0 - grad, 1e-12);
  double t0 = 0.0;
  for (int m = 0; m < 4; ++m) t0 += std::pow(0.5, m) / std::pow(0.7, m + 1);
  EXPECT_NEAR(d.t[0], t0, 1e-12);
}

TEST(Fundamental, SingularWhenClosedLoop) {
  EXPECT_EQ(code_of([] { fundamental_matrix(Matrix{{0, 1}, {1, 0}}); }), ErrorCode::SingularMatrix);
}

TEST(Adjugate, SmallCases) {
  EXPECT_NEAR(fundamental_matrix_adjugate(Matrix{{0.3}})(0, 0), 1.0 / 0.7, 1e-15);
  EXPECT_EQ(fundamental_matrix_adjugate(Matrix(3, 3)), Matrix::identity(3));
  EXPECT_NEAR(cofactor_determinant(Matrix{{0, 2, 1}, {1, 1, 0}, {3, 0, 1}}), -5.0, 1e-15);
  EXPECT_EQ(code_of([] { fundamental_matrix_adjugate(Matrix(7, 7)); }), ErrorCode::DimensionTooLarge);
}

TEST(WeightedTime, HarvestPipeline) {
  const auto model = load_fixture("problem_4_1.json");
  const auto d = analyze_absorbing(model);
  // 1.25·10 + 1.25·4 + 1·3 + 45
  EXPECT_NEAR(weighted_absorption_time(d, *model.weights(), *model.terminal_weights(), 0), 65.5, 1e-9);
}

TEST(WeightedTime, UnitWeightsEqualExpectedSteps) {
  const auto model = load_fixture("problem_4_2.json");
  const auto d = analyze_absorbing(model);
  EXPECT_NEAR(weighted_absorption_time(d, *model.weights(), {}, 2, 0.0), 4.0, 1e-12);
  for (std::size_t s : {1u, 2u, 3u}) {
    EXPECT_NEAR(weighted_absorption_time(d, *model.weights(), {}, s, 0.0),
                d.t[*d.form.transient_position(s)], 1e-12);
  }
}

TEST(WeightedTime, Errors) {
  const auto model = load_fixture("problem_4_1.json");
  const auto d = analyze_absorbing(model);
  EXPECT_EQ(code_of([&] { weighted_absorption_time(d, *model.weights(), *model.terminal_weights(), 3); }),
            ErrorCode::StartNotTransient);
  StateWeights partial{{0, 10.0}};
  EXPECT_EQ(code_of([&] { weighted_absorption_time(d, partial, *model.terminal_weights(), 0); }),
            ErrorCode::MissingWeight);
  EXPECT_EQ(code_of([&] { weighted_absorption_time(d, *model.weights(), {}, 0); }),
            ErrorCode::MissingWeight);
}

std::vector<std::vector<double>> random_absorbing_any(testing::Rng& rng, double leak) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
  return testing::random_absorbing(rng, n, k, leak);
}

TEST(AbsorbingProperty, Invariants) {
  testing::Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = analyze_absorbing(testing::make_model(random_absorbing_any(rng, 0.0)));
    const std::size_t m = d.form.Q.rows();
    EXPECT_LE(max_abs_diff(d.N * (Matrix::identity(m) - d.form.Q), Matrix::identity(m)), kFundTol);
    for (double s : d.B.row_sums()) EXPECT_NEAR(s, 1.0, kFundTol);
    for (std::size_t i = 0; i < m; ++i) {
      for (double v : d.N.row(i)) EXPECT_GE(v, -kFundTol);
      for (double v : d.B.row(i)) EXPECT_GE(v, -kFundTol);
      EXPECT_GE(d.N(i, i), 1.0 - kFundTol);
      EXPECT_GE(d.t[i], 1.0 - kFundTol);
    }
    if (m <= kAdjugateMaxDim) {
      EXPECT_LE(max_abs_diff(d.N, fundamental_matrix_adjugate(d.form.Q)), 1e-10);
    }
  }
}

TEST(AbsorbingProperty, NeumannSeries) {
  testing::Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    // Row sums of Q are at most 0.9, so 400 terms leave < 0.9^400 / 0.1.
    const auto d = analyze_absorbing(testing::make_model(random_absorbing_any(rng, 0.1)));
    EXPECT_LE(max_abs_diff(d.N, testing::neumann_series(d.form.Q, 400)), 1e-10);
  }
}

TEST(AbsorbingProperty, PermutationEquivariance) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = testing::make_model(random_absorbing_any(rng, 0.0));
    const auto order = testing::random_permutation(rng, model.size());
    const auto base = analyze_absorbing(model);
    const auto perm = analyze_absorbing(model.permuted(order));
    for (auto s : perm.form.transient()) {
      const auto pi = *perm.form.transient_position(s);
      const auto bi = *base.form.transient_position(order[s]);
      EXPECT_NEAR(perm.t[pi], base.t[bi], 1e-9);
      for (auto a : perm.form.absorbing()) {
        EXPECT_NEAR(perm.B(pi, *perm.form.absorbing_position(a)),
                    base.B(bi, *base.form.absorbing_position(order[a])), 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace chainlab
