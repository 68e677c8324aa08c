#include <gtest/gtest.h>

#include <random>

#include "chainlab/error.hpp"
#include "chainlab/linalg.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace chainlab {
namespace {

TEST(Matrix, FromRowsRejectsRagged) {
  try {
    Matrix::from_rows({{1.0, 2.0}, {3.0}});
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonSquareMatrix);
  }
}

TEST(Matrix, MultiplyMatchesNaive) {
  testing::Rng rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a(4, 3), b(3, 5);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = u(rng);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j) b(i, j) = u(rng);
    EXPECT_LE(max_abs_diff(a * b, testing::naive_multiply(a, b)), 1e-15);
  }
}

TEST(Matrix, EmptyBlocksMultiply) {
  const Matrix a(0, 3), b(3, 2);
  const Matrix c = a * b;
  EXPECT_EQ(c.rows(), 0u);
  EXPECT_EQ(c.cols(), 2u);
}

TEST(Lu, SolveAndDeterminant) {
  const Matrix a{{0, 2, 1}, {1, 1, 0}, {3, 0, 1}};
  LuDecomposition lu(a);
  // det by cofactors along the first row: 0 - 2(1 - 0) + 1(0 - 3) = -5
  EXPECT_NEAR(lu.determinant(), -5.0, 1e-12);
  const auto x = lu.solve(std::vector<double>{3, 2, 4});
  const std::vector<double> back = left_multiply(x, a.transposed());
  EXPECT_NEAR(back[0], 3, 1e-12);
  EXPECT_NEAR(back[1], 2, 1e-12);
  EXPECT_NEAR(back[2], 4, 1e-12);
}

TEST(Lu, InverseOfRandomWellConditioned) {
  testing::Rng rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 7;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng);
      a(i, i) += static_cast<double>(n);
    }
    const Matrix inv = LuDecomposition(a).inverse();
    EXPECT_LE(max_abs_diff(inv * a, Matrix::identity(n)), 1e-12);
  }
}

TEST(Lu, SingularThrows) {
  const Matrix a{{1, 2}, {2, 4}};
  try {
    LuDecomposition lu(a);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
}

TEST(Lu, EmptyMatrix) {
  LuDecomposition lu{Matrix()};
  EXPECT_EQ(lu.inverse().rows(), 0u);
  EXPECT_EQ(lu.determinant(), 1.0);
}

}  // namespace
}  // namespace chainlab
