#include "nilsoliton/linear_program.hpp"

#include <gtest/gtest.h>

using namespace nilsoliton;

TEST(Simplex, SmallProblem) {
  // min -x0 - 2 x1  s.t. x0 + x1 + s = 4, x1 + t = 3
  Matrix a(2, 4);
  a << 1, 1, 1, 0, 0, 1, 0, 1;
  Vector b(2), c(4);
  b << 4, 3;
  c << -1, -2, 0, 0;
  const auto r = simplex_solve(a, b, c);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, -7.0, 1e-12);
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
  EXPECT_NEAR(r.x(1), 3.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  Matrix a(1, 2);
  a << 1, 1;
  Vector b(1), c(2);
  b << -1;
  c << 1, 1;
  EXPECT_EQ(simplex_solve(a, b, c).status, LpStatus::Infeasible);
  a << 1, -1;
  b << 0;
  c << -1, 0;
  EXPECT_EQ(simplex_solve(a, b, c).status, LpStatus::Unbounded);
}

TEST(Stiemke, Alternative) {
  // x0 - x1 = 0 has the positive solution (1, 1)
  Matrix n(1, 2);
  n << 1, -1;
  EXPECT_FALSE(stiemke_multipliers(n));
  EXPECT_TRUE(positive_kernel_vector(n));
  // x0 + x1 = 0 has none; y = 1 certifies it
  n << 1, 1;
  const auto y = stiemke_multipliers(n);
  ASSERT_TRUE(y);
  const Vector z = n.transpose() * *y;
  EXPECT_GE(z.minCoeff(), -1e-12);
  EXPECT_NEAR(z.sum(), 1.0, 1e-12);
  EXPECT_FALSE(positive_kernel_vector(n));
}
