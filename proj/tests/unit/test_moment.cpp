#include "helpers.hpp"
#include "nilsoliton/errors.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/moment.hpp"

#include <gtest/gtest.h>

using namespace nilsoliton;
using testutil::J;

TEST(Moment, HeisenbergFive) {
  const auto m = moment(standard_blocks(BlockName::HeisenbergJ, 2));
  EXPECT_EQ(m.m1, 2.0 * Matrix::Identity(4, 4));
  EXPECT_EQ(m.m2, Matrix::Constant(1, 1, 4.0));
}

TEST(Moment, BPair) {
  const auto m = moment(b_tuple(2));
  EXPECT_EQ(m.m1, 4.0 * Matrix::Identity(4, 4));
  EXPECT_EQ(m.m2, 4.0 * Matrix::Identity(2, 2));
}

TEST(Moment, Soliton23) {
  const auto m = moment(standard_blocks(BlockName::Soliton23));
  EXPECT_EQ(m.m1, Vector((Vector(3) << 2, 4, 2).finished()).asDiagonal().toDenseMatrix());
  EXPECT_EQ(m.m2, 2.0 * Matrix::Identity(2, 2));
}

TEST(MomentOracle, SmallBlocks) {
  auto m = moment_oracle(new_tensor(1, 2, {J()}));
  EXPECT_LT((m.m1 - 2.0 * Matrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_NEAR(m.m2(0, 0), 2.0, 1e-14);
  Matrix jp = Matrix::Zero(3, 3);
  jp.topLeftCorner(2, 2) = J();
  m = moment_oracle(new_tensor(1, 3, {jp}));
  EXPECT_LT((m.m1 - Vector((Vector(3) << 2, 2, 0).finished()).asDiagonal().toDenseMatrix()).norm(), 1e-14);
}

class MomentProperty : public ::testing::TestWithParam<int> {};

TEST_P(MomentProperty, OracleAgrees) {
  const int seed = GetParam();
  const int p = 1 + seed % 4, q = 3 + seed % 4;
  const auto c = random_tensor(p, q, static_cast<std::uint64_t>(seed));
  const auto a = moment(c), b = moment_oracle(c);
  EXPECT_LT((a.m1 - b.m1).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, a.m1.cwiseAbs().maxCoeff()));
  EXPECT_LT((a.m2 - b.m2).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, a.m2.cwiseAbs().maxCoeff()));
}

TEST_P(MomentProperty, SymmetricAndPositive) {
  const auto c = random_tensor(2, 5, static_cast<std::uint64_t>(GetParam()));
  const auto m = moment(c);
  EXPECT_LT((m.m1 - m.m1.transpose()).norm(), 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(m.m1).eigenvalues().minCoeff(), -1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(m.m2).eigenvalues().minCoeff(), -1e-12);
  // tr m1 = 2 tr m2 = 2 |C|^2
  EXPECT_NEAR(m.m1.trace(), 2.0 * inner(c, c), 1e-10);
  EXPECT_NEAR(m.m2.trace(), inner(c, c), 1e-10);
}

TEST_P(MomentProperty, EquivariantUnderOrthogonalGroup) {
  const auto c = random_tensor(2, 4, static_cast<std::uint64_t>(GetParam()));
  const Matrix o = Eigen::HouseholderQR<Matrix>(random_tensor(1, 4, 100 + GetParam())[0] + Matrix::Identity(4, 4)).householderQ();
  const auto m = moment(c), mo = moment(group_act(GroupElement{o, Matrix::Identity(2, 2)}, c));
  EXPECT_LT((mo.m1 - o * m.m1 * o.transpose()).norm(), 1e-10);
  EXPECT_LT((mo.m2 - m.m2).norm(), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MomentProperty, ::testing::Range(1, 21));

TEST(DistinguishedReport, Heisenberg) {
  for (int k = 1; k <= 4; ++k) {
    const auto r = distinguished_report(standard_blocks(BlockName::HeisenbergJ, k));
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_DOUBLE_EQ(r.r, 2 * k + 4);
  }
}

TEST(DistinguishedReport, Soliton23) {
  const auto r = distinguished_report(standard_blocks(BlockName::Soliton23));
  EXPECT_EQ(r.residual, 0.0);
  EXPECT_DOUBLE_EQ(r.r, 8.0);
}

TEST(DistinguishedReport, FamilyPointIsNot) {
  EXPECT_GT(distinguished_report(build_family(FamilySpec::non_einstein(2, 2, 1))).residual, 0.01);
}

TEST(DistinguishedReport, ScaleInvariantResidual) {
  const auto c = random_tensor(2, 5, 3);
  EXPECT_NEAR(distinguished_report(c).residual, distinguished_report(c.scaled(7.0)).residual, 1e-12);
  EXPECT_THROW(distinguished_report(StructureTensor::zero(1, 3)), ContractError);
}

TEST(MinimalityDefect, Examples) {
  EXPECT_LT(minimality_defect(b_tuple(2), Subgroup::SLp), 1e-15);
  EXPECT_LT(minimality_defect(b_tuple(2), Subgroup::SLq), 1e-15);
  const auto s = standard_blocks(BlockName::Soliton23);
  EXPECT_LT(minimality_defect(s, Subgroup::SLp), 1e-15);
  EXPECT_GT(minimality_defect(s, Subgroup::SLq), 0.1);
  EXPECT_LT(minimality_defect(standard_blocks(BlockName::HeisenbergJ, 3), Subgroup::SLq), 1e-15);
  EXPECT_GT(minimality_defect(s, Subgroup::Full), 0.0);
}
