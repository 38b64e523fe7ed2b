#include "helpers.hpp"
#include "nilsoliton/constructions.hpp"
#include "nilsoliton/errors.hpp"
#include "nilsoliton/family_json.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/moment.hpp"

#include <gtest/gtest.h>

using namespace nilsoliton;
using testutil::J;

TEST(Concat, JJ) {
  const auto j = standard_blocks(BlockName::J);
  const auto c = concat(j, j);
  EXPECT_EQ(c.p(), 1);
  EXPECT_EQ(c.q(), 4);
  EXPECT_EQ(max_abs_difference(c, standard_blocks(BlockName::HeisenbergJ, 2)), 0.0);
}

TEST(Concat, SolitonPair) {
  const auto s = standard_blocks(BlockName::Soliton23);
  const auto c = concat(s, s);
  EXPECT_EQ(c.p(), 2);
  EXPECT_EQ(c.q(), 6);
  EXPECT_EQ(c[1].bottomRightCorner(3, 3), s[1]);
  EXPECT_EQ(c[1].topRightCorner(3, 3), Matrix::Zero(3, 3));
}

TEST(Concat, Errors) {
  EXPECT_THROW(concat(standard_blocks(BlockName::J), b_tuple(2)), ContractError);
  EXPECT_THROW(pad_concat(b_tuple(2), standard_blocks(BlockName::J)), ContractError);
}

TEST(PadConcat, FamilyMember) {
  const auto c = pad_concat(standard_blocks(BlockName::HeisenbergJ, 2), b_tuple(2));
  EXPECT_EQ(max_abs_difference(c, build_family(FamilySpec::non_einstein(2, 2, 1))), 0.0);
  EXPECT_EQ(max_abs_difference(pad_concat(b_tuple(2), b_tuple(2)), concat(b_tuple(2), b_tuple(2))), 0.0);
}

TEST(Adjoin, SolitonSoliton) {
  const auto s = standard_blocks(BlockName::Soliton23);
  const std::vector<StructureTensor> list = {s};
  const auto c = adjoin(s, list);
  EXPECT_EQ(c.p(), 3);
  EXPECT_EQ(c.q(), 6);
  Matrix want = Matrix::Zero(6, 6);
  want.topLeftCorner(3, 3) = s[1];
  want.bottomRightCorner(3, 3) = s[0];
  EXPECT_EQ(c[1], want);
  EXPECT_EQ(c[2].bottomRightCorner(3, 3), s[1]);
  EXPECT_THROW(adjoin(s, std::vector<StructureTensor>{}), ContractError);
}

TEST(Adjoin, FamilyWithMinimalD) {
  const std::vector<StructureTensor> list = {build_minimal_D(4, 6)};
  const auto c = adjoin(build_family(FamilySpec::non_einstein(3, 4, 1)), list);
  EXPECT_EQ(c.p(), 8);
  EXPECT_EQ(c.q(), 16);
}

TEST(RescaleMatch, Examples) {
  const auto s = standard_blocks(BlockName::Soliton23);
  EXPECT_DOUBLE_EQ(rescale_match(s, s).s, 1.0);
  const auto a = standard_blocks(BlockName::HeisenbergJ, 1);
  const auto b = standard_blocks(BlockName::HeisenbergJ, 2).scaled(2.0);
  const auto r = rescale_match(a, b);
  EXPECT_NE(r.s, 1.0);
  EXPECT_NEAR(slq_eigen(r.scaled).lambda, slq_eigen(a).lambda, 1e-12);
  EXPECT_NEAR(r.lambda_a, 4.0, 1e-12);
  EXPECT_THROW(rescale_match(random_tensor(2, 4, 1), b_tuple(2)), ContractError);
}

TEST(StandardBlocks, BMatricesOrthogonalComplexStructures) {
  const BlockName names[] = {BlockName::B1, BlockName::B2, BlockName::B3, BlockName::B4, BlockName::B5, BlockName::B6};
  for (int i = 0; i < 6; ++i) {
    const Matrix bi = standard_matrix(names[i]);
    EXPECT_EQ(bi * bi, -Matrix::Identity(4, 4));
    EXPECT_EQ(bi.transpose(), -bi);
    for (int j = i + 1; j < 6; ++j) EXPECT_EQ((bi * standard_matrix(names[j]).transpose()).trace(), 0.0);
  }
  EXPECT_THROW(standard_blocks(BlockName::K), ContractError);
  EXPECT_EQ(distinguished_report(standard_blocks(BlockName::Soliton23)).residual, 0.0);
}

TEST(StandardBlocks, NamesRoundTrip) {
  for (auto n : {BlockName::J, BlockName::B3, BlockName::JKPair, BlockName::Soliton23, BlockName::HeisenbergJ})
    EXPECT_EQ(parse_block_name(to_string(n)), n);
  EXPECT_THROW(parse_block_name("B7"), ContractError);
}

TEST(BuildFamily, Types) {
  auto c = build_family(FamilySpec::non_einstein(2, 2, 1));
  EXPECT_EQ(c.p(), 2);
  EXPECT_EQ(c.q(), 8);
  c = build_family(FamilySpec::non_einstein(3, 4, 2, {1.5}));
  EXPECT_EQ(c.p(), 3);
  EXPECT_EQ(c.q(), 16);
  c = build_family(FamilySpec::j9(3));
  EXPECT_EQ(c.p(), 3);
  EXPECT_EQ(c.q(), 9);
  EXPECT_TRUE(is_type_pq(c));
}

TEST(BuildFamily, DeclaredTypeAcrossRanges) {
  for (int j = 2; j <= 6; ++j)
    for (int n = 1; n <= 3; ++n)
      for (int d : {0, 3})
        for (int k = 1; k <= 8; ++k) {
          const auto spec = FamilySpec::non_einstein(j, k, n, std::vector<double>(n - 1, 0.5), d);
          const auto c = build_family(spec);
          EXPECT_EQ(c.p(), spec.type_p());
          EXPECT_EQ(c.q(), 2 * k + 4 * n + d);
          EXPECT_TRUE(is_type_pq(c));
        }
}

TEST(BuildFamily, InvariantViolations) {
  EXPECT_THROW(FamilySpec::non_einstein(7, 2, 1).validate(), ContractError);
  EXPECT_THROW(FamilySpec::non_einstein(2, 2, 2, {1.0, 2.0}).validate(), ContractError);
  EXPECT_THROW(FamilySpec::non_einstein(2, 2, 1, {}, 1).validate(), ContractError);
  EXPECT_THROW(build_family(FamilySpec::non_einstein(2, 0, 1)), ContractError);
  EXPECT_THROW(FamilySpec::adjoined(FamilySpec::soliton23(), {}), ContractError);
}

TEST(BuildFamily, TnIsPinned) {
  // t holds n-1 numbers; the last middle tuple always has coefficient 1
  const auto a = build_family(FamilySpec::non_einstein(2, 4, 2, {3.0}));
  EXPECT_EQ(a[0](8, 9), 3.0 * standard_matrix(BlockName::B1)(0, 1));
  EXPECT_EQ(a[0](12, 13), standard_matrix(BlockName::B1)(0, 1));
}

TEST(FamilyJson, RoundTrip) {
  const std::vector<FamilySpec> specs = {
      FamilySpec::heisenberg(3), FamilySpec::soliton23(), FamilySpec::b_blocks(4),
      FamilySpec::non_einstein(3, 6, 3, {0.25, -2.0}, 3), FamilySpec::j9(5), FamilySpec::minimal_d(4, 5, 2.0, 0.5),
      FamilySpec::adjoined(FamilySpec::non_einstein(3, 4, 1), {FamilySpec::minimal_d(4, 6), FamilySpec::minimal_d(4, 5)})};
  for (const auto& s : specs) EXPECT_EQ(family_from_json(family_to_json(s)), s) << family_to_json(s).dump();
  EXPECT_THROW(family_from_json(nlohmann::json{{"kind", "nope"}}), ContractError);
  EXPECT_THROW(family_from_json(nlohmann::json{{"j", 2}}), ContractError);
}

TEST(MinimalD, Q4) {
  for (int p : {5, 6}) {
    const auto d = build_minimal_D(4, p);
    EXPECT_EQ(d.p(), p);
    EXPECT_EQ(d[0] * d[0], -Matrix::Identity(4, 4));
    EXPECT_LT(minimality_defect(d, Subgroup::SLp), 1e-9);
    EXPECT_LT(minimality_defect(d, Subgroup::SLq), 1e-9);
    for (int i = 0; i < p; ++i) EXPECT_DOUBLE_EQ(d[i].squaredNorm(), 4.0);
  }
  EXPECT_THROW(build_minimal_D(3, 3), ContractError);
  EXPECT_THROW(build_minimal_D(4, 3), ContractError);
}

TEST(MinimalD, LargerEvenQ) {
  for (int q : {6, 8}) {
    const auto d = build_minimal_D(q, so_dimension(q));
    EXPECT_LT(minimality_defect(d, Subgroup::SLboth), 1e-9) << q;
    EXPECT_LT((d[0] * d[0] + Matrix::Identity(q, q)).norm(), 1e-12);
  }
}

TEST(DTilde, Examples) {
  const auto d = build_minimal_D(4, 6);
  EXPECT_EQ(max_abs_difference(d_tilde(d, 1.0, 1.0), d), 0.0);
  const auto m2 = moment(d_tilde(d, 2.0, 1.0)).m2;
  EXPECT_DOUBLE_EQ(m2(0, 0), 16.0);
  for (int i = 1; i < 6; ++i) EXPECT_DOUBLE_EQ(m2(i, i), 4.0);
  EXPECT_FALSE(is_type_pq(d_tilde(d, 0.0, 1.0)));
}

TEST(Composition, RebuildsFamily) {
  for (const auto& s : {FamilySpec::non_einstein(4, 4, 2, {0.3}, 3), FamilySpec::j9(4),
                        FamilySpec::adjoined(FamilySpec::non_einstein(3, 4, 1), {FamilySpec::minimal_d(4, 6)})})
    EXPECT_EQ(max_abs_difference(family_composition(s).build(), build_family(s)), 0.0);
}
