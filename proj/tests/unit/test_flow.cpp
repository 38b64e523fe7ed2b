#include "nilsoliton/constructions.hpp"
#include "nilsoliton/errors.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/moment.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace nilsoliton;

TEST(Flow, AlreadyDistinguished) {
  const auto r = flow_to_distinguished(standard_blocks(BlockName::HeisenbergJ, 2));
  EXPECT_EQ(r.status, FlowStatus::DistinguishedFound);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Flow, GenericTwoFive) {
  const auto r = flow_to_distinguished(random_tensor(2, 5, 17));
  EXPECT_EQ(r.status, FlowStatus::DistinguishedFound);
  EXPECT_LT(r.residual, 1e-8);
  EXPECT_LT(distinguished_report(r.final).residual, 1e-8);
}

TEST(Flow, FamilyDoesNotConverge) {
  const auto r = flow_to_distinguished(build_family(FamilySpec::non_einstein(2, 2, 1)));
  EXPECT_NE(r.status, FlowStatus::DistinguishedFound);
}

TEST(Flow, ObjectiveMonotone) {
  FlowOptions o;
  o.record_trace = true;
  o.max_iter = 500;
  const auto r = flow_to_distinguished(random_tensor(3, 5, 3), o);
  ASSERT_GE(r.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] * (1.0 + 1e-15));
}

TEST(Flow, StaysOnSphereAndInType) {
  const auto r = flow_to_distinguished(random_tensor(3, 6, 8));
  EXPECT_NEAR(norm(r.final), 1.0, 1e-12);
  EXPECT_EQ(r.final.p(), 3);
  EXPECT_EQ(r.final.q(), 6);
}

TEST(Flow, Errors) {
  EXPECT_THROW(flow_to_distinguished(StructureTensor::zero(2, 4)), ContractError);
  FlowOptions o;
  o.tol = 0.0;
  EXPECT_THROW(flow_to_distinguished(random_tensor(2, 4, 1), o), ContractError);
}

TEST(Scan, TypeOneAlwaysEinstein) {
  const auto s = scan_generic(1, 4, 20, 99);
  EXPECT_EQ(s.fraction_distinguished, 1.0);
}

TEST(Scan, GenericTwoFive) {
  const auto s = scan_generic(2, 5, 50, 20240601);
  EXPECT_GE(s.fraction_distinguished, 0.9);
  int total = 0;
  for (int h : s.histogram) total += h;
  EXPECT_EQ(total, 50);
}

TEST(Scan, Errors) {
  EXPECT_THROW(scan_generic(100, 4, 5, 1), ContractError);
  EXPECT_THROW(scan_generic(2, 4, 0, 1), ContractError);
}

TEST(Scan, DeterministicAcrossThreadCounts) {
  const auto a = scan_generic(2, 4, 8, 5, {}, 1);
  const auto b = scan_generic(2, 4, 8, 5, {}, 3);
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].seed, b.results[i].seed);
    EXPECT_EQ(a.results[i].residual, b.results[i].residual);
    EXPECT_EQ(a.results[i].iterations, b.results[i].iterations);
  }
  EXPECT_EQ(a.histogram_csv(), b.histogram_csv());
}

TEST(Scan, ThreadCap) {
  ::setenv("NILSOLITON_THREADS", "2", 1);
  EXPECT_EQ(worker_count(8), 2);
  EXPECT_EQ(worker_count(1), 1);
  ::unsetenv("NILSOLITON_THREADS");
  EXPECT_EQ(worker_count(5), 5);
}

TEST(RandomTensor, Seeded) {
  EXPECT_EQ(max_abs_difference(random_tensor(2, 5, 7), random_tensor(2, 5, 7)), 0.0);
  EXPECT_GT(max_abs_difference(random_tensor(2, 5, 7), random_tensor(2, 5, 8)), 0.0);
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
}
