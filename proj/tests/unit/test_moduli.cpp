#include "nilsoliton/errors.hpp"
#include "nilsoliton/moduli.hpp"
#include "nilsoliton/tensor.hpp"

#include <gtest/gtest.h>

using namespace nilsoliton;

TEST(GenericModuli, TableAndFormula) {
  EXPECT_EQ(generic_moduli_dim(1, 5), 0);
  EXPECT_EQ(generic_moduli_dim(2, 4), 0);
  EXPECT_EQ(generic_moduli_dim(2, 8), 1);
  EXPECT_EQ(generic_moduli_dim(2, 9), 0);
  EXPECT_EQ(generic_moduli_dim(3, 6), 2);
  EXPECT_EQ(generic_moduli_dim(4, 6), 9);
  for (int q = 4; q <= 8; ++q) EXPECT_EQ(generic_moduli_dim(so_dimension(q), q), 0);
  EXPECT_EQ(generic_moduli_entry(4, 6).source, ModuliSource::Formula);
  EXPECT_EQ(generic_moduli_entry(13, 6).source, ModuliSource::Dual);
  EXPECT_EQ(generic_moduli_entry(3, 6).source, ModuliSource::TableRow);
  EXPECT_THROW(generic_moduli_dim(0, 6), ContractError);
  EXPECT_THROW(generic_moduli_dim(16, 6), ContractError);
}

TEST(GenericModuli, DualSymmetry) {
  for (int q = 4; q <= 9; ++q)
    for (int p = 1; p < so_dimension(q); ++p)
      EXPECT_EQ(generic_moduli_dim(p, q), generic_moduli_dim(so_dimension(q) - p, q)) << p << "," << q;
}

TEST(GenericModuli, NeverNegative) {
  for (int q = 2; q <= 12; ++q)
    for (int p = 1; p <= so_dimension(q); ++p) {
      const auto e = generic_moduli_entry(p, q);
      EXPECT_GE(e.dim, 0);
      EXPECT_EQ(e.clamped, e.raw < 0);
    }
}

TEST(ConcatBound, Examples) {
  EXPECT_EQ(concat_moduli_bound(2, 8, 10), 2);
  EXPECT_EQ(concat_moduli_bound(1, 6, 7), 0);
  EXPECT_THROW(concat_moduli_bound(2, 3, 8), ContractError);
  EXPECT_EQ(odd_type_moduli_bound(9, 2), 3);
  for (int k = 5; k <= 12; ++k)
    for (int i = 1; i <= k - 4; ++i) EXPECT_EQ(odd_type_moduli_bound(k, i), k - i - 4);
  EXPECT_THROW(odd_type_moduli_bound(5, 2), ContractError);
}

TEST(Region, Examples) {
  auto r = non_einstein_region(2, 40);
  EXPECT_TRUE(r.in_region);
  EXPECT_DOUBLE_EQ(r.bound, 3.125);
  EXPECT_TRUE(non_einstein_region(2, 8).in_region);
  EXPECT_FALSE(non_einstein_region(5, 8).in_region);
  EXPECT_FALSE(non_einstein_region(2, 7).in_region);
  r = non_einstein_region(2, 8);
  EXPECT_LT(r.bound, 0.0);
  EXPECT_EQ(r.bound_floored, 0.0);
}

TEST(RegionTable, Labels) {
  const auto t = region_table(20);
  auto label = [&](int p, int q) {
    for (const auto& r : t)
      if (r.p == p && r.q == q) return r.label;
    ADD_FAILURE() << "missing row " << p << "," << q;
    return RegionLabel::Unknown;
  };
  for (int q = 3; q <= 20; ++q) EXPECT_EQ(label(so_dimension(q), q), RegionLabel::AllEinstein);
  EXPECT_EQ(label(3, 6), RegionLabel::ExistsNonEinstein);
  EXPECT_EQ(label(2, 8), RegionLabel::ExistsNonEinstein);
  EXPECT_EQ(label(1, 9), RegionLabel::AllEinstein);
  for (int j = 3; j <= 6; ++j) EXPECT_EQ(label(j, 9), RegionLabel::ExistsNonEinstein);
  std::size_t rows = 0;
  for (int q = 3; q <= 20; ++q) rows += static_cast<std::size_t>(so_dimension(q));
  EXPECT_EQ(t.size(), rows);
  EXPECT_EQ(region_table_csv(region_table(3)).substr(0, 17), "p,q,label,source\n");
}
