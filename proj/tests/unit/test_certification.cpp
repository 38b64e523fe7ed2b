#include "helpers.hpp"
#include "nilsoliton/certification.hpp"
#include "nilsoliton/errors.hpp"
#include "nilsoliton/moment.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nilsoliton;

namespace {

std::vector<FamilySpec> shapes() {
  return {FamilySpec::non_einstein(2, 2, 1), FamilySpec::non_einstein(3, 2, 2, {0.7}),
          FamilySpec::non_einstein(6, 4, 2, {1.3}), FamilySpec::non_einstein(4, 5, 1, {}, 3), FamilySpec::j9(4),
          FamilySpec::adjoined(FamilySpec::non_einstein(3, 4, 1), {FamilySpec::minimal_d(4, 6)}),
          FamilySpec::adjoined(FamilySpec::non_einstein(4, 4, 1), {FamilySpec::minimal_d(4, 5, 1.5, 0.5)})};
}

}  // namespace

TEST(WPoint, OnesIsFamilyMember) {
  for (const auto& s : shapes()) {
    if (s.kind == FamilyKind::AdjoinedNonEinstein) continue;
    auto spec = s;
    if (spec.kind == FamilyKind::NonEinstein) spec.t.assign(spec.t.size(), 1.0);
    EXPECT_EQ(max_abs_difference(w_point_tensor(WPoint::ones(spec)), build_family(spec)), 0.0);
  }
  for (const auto& s : shapes())
    EXPECT_EQ(max_abs_difference(w_point_tensor(WPoint::of_family(s)), build_family(s)), 0.0);
}

TEST(WPoint, ScalingA1) {
  const auto spec = FamilySpec::non_einstein(2, 2, 1);
  auto w = WPoint::ones(spec);
  w.x(w.space->var_index("a1")) = 2.0;
  const auto c = w_point_tensor(w), c0 = build_family(spec);
  EXPECT_EQ(c[0].topLeftCorner(4, 4), 2.0 * c0[0].topLeftCorner(4, 4));
  EXPECT_EQ(c[0].bottomRightCorner(4, 4), c0[0].bottomRightCorner(4, 4));
}

TEST(WPoint, OpenStratum) {
  auto w = WPoint::ones(FamilySpec::non_einstein(3, 2, 2, {1.0}));
  EXPECT_TRUE(w.open_stratum());
  w.x(w.space->var_index("b1")) = 0.0;
  EXPECT_FALSE(w.open_stratum());
  EXPECT_EQ(w_point_tensor(w).p(), 3);
  EXPECT_EQ(w.b(2), w.d(1));
  EXPECT_EQ(w.c(2), w.d(2));
}

TEST(WSpace, CoordinatesRoundTrip) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (const auto& s : shapes()) {
    const auto space = WSpace::for_family(s);
    Vector x(space.dim());
    for (auto& v : x) v = g(rng);
    const auto [back, outside] = space.coordinates_of(space.tensor(x));
    EXPECT_LT((back - x).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(outside, 1e-12);
  }
}

TEST(HDetection, RandomPointsExact) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (const auto& s : shapes()) {
    auto w = WPoint::ones(s);
    for (int i = 0; i < 100; ++i) {
      for (auto& v : w.x) v = g(rng);
      const auto r = h_detection_check(w);
      ASSERT_TRUE(r.passed) << to_string(s.kind) << ": " << r.first_violation;
      // power-of-two D is exact, the q=4, p=5 tuple included
      EXPECT_TRUE(r.exact);
      EXPECT_EQ(r.max_offblock, 0.0);
      EXPECT_LT(r.max_display_error, 1e-12);
    }
  }
}

TEST(HDetection, AllOnesMatchesMoment) {
  const auto w = WPoint::ones(FamilySpec::non_einstein(2, 2, 1));
  const auto r = h_detection_check(w);
  // m2 = diag(8, 4): slot 0 holds A and B1 (|A|^2 + |B1|^2 = 4 + 4), slot 1 holds B2.
  EXPECT_EQ(r.m2(0, 0), 8.0);
  EXPECT_EQ(r.m2(1, 1), 4.0);
  EXPECT_EQ(r.m2(0, 1), 0.0);
  EXPECT_EQ(displayed_m2_diagonal(w), Vector((Vector(2) << 8, 4).finished()));
  EXPECT_EQ(r.m2, moment(w_point_tensor(w)).m2);
}

TEST(HDetection, AdjoinedTail) {
  const auto spec = FamilySpec::adjoined(FamilySpec::non_einstein(3, 4, 1), {FamilySpec::minimal_d(4, 6)});
  const auto r = h_detection_check(WPoint::ones(spec));
  ASSERT_TRUE(r.passed);
  for (int i = 3; i < 8; ++i) EXPECT_EQ(r.m2(i, i), 4.0);  // mu^2 |D_1|^2
}

TEST(CoefficientValues, FamilyPoint) {
  const auto v = coefficient_values(WPoint::ones(FamilySpec::non_einstein(2, 2, 1)));
  ASSERT_EQ(v.recomputed.size(), 3);
  EXPECT_EQ(v.recomputed, Vector((Vector(3) << 12, 16, 12).finished()));
  EXPECT_EQ(v.displayed, v.recomputed);
  EXPECT_GT(spread(v.recomputed), 0.1);
}

TEST(CoefficientValues, DisplayedMatchesRecomputed) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (const auto& s : shapes()) {
    auto w = WPoint::ones(s);
    for (int i = 0; i < 20; ++i) {
      for (auto& v : w.x) v = g(rng);
      EXPECT_LT(coefficient_values(w).max_discrepancy, 1e-12) << to_string(s.kind);
    }
  }
}

TEST(CoefficientValues, HomogeneousOfDegreeTwo) {
  auto w = WPoint::ones(FamilySpec::non_einstein(3, 4, 2, {0.4}));
  const Vector a = coefficient_values(w).recomputed;
  w.x *= 3.0;
  EXPECT_LT((coefficient_values(w).recomputed - 9.0 * a).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CoefficientValues, EqualExactlyWhenDistinguished) {
  // the forms are linear in x^2: E = M x^2, and distinguished means all E equal
  for (const auto& s : shapes()) {
    const auto space = std::make_shared<const WSpace>(WSpace::for_family(s));
    const Matrix m = coefficient_forms(*space);
    WPoint w{space, Vector::Ones(space->dim())};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (auto& v : w.x) v = u(rng);
    EXPECT_LT((m * w.x.cwiseAbs2() - coefficient_values(w).recomputed).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Certificate, FamilyVerdicts) {
  CertifyOptions o;
  o.run_spread = false;
  auto c = non_einstein_certificate(FamilySpec::non_einstein(2, 2, 1), o);
  EXPECT_EQ(c.verdict, Verdict::NonDistinguished);
  ASSERT_NE(c.find("elimination chain"), nullptr);
  EXPECT_TRUE(c.find("elimination chain")->satisfied);

  c = non_einstein_certificate(FamilySpec::non_einstein(4, 1, 1), o);
  EXPECT_EQ(c.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(c.find("2k >= 4n+d")->satisfied);

  const auto adj = FamilySpec::adjoined(FamilySpec::non_einstein(3, 4, 1), {FamilySpec::minimal_d(4, 6)});
  c = non_einstein_certificate(adj, o);
  EXPECT_EQ(c.verdict, Verdict::NonDistinguished);
  EXPECT_EQ(adj.type_p(), 8);
  EXPECT_EQ(adj.type_q(), 16);

  EXPECT_THROW(non_einstein_certificate(FamilySpec::soliton23(), o), ContractError);
}

TEST(Certificate, J9) {
  CertifyOptions o;
  o.run_spread = false;
  for (int j = 3; j <= 6; ++j) EXPECT_EQ(non_einstein_certificate(FamilySpec::j9(j), o).verdict, Verdict::NonDistinguished);
}

TEST(Certificate, ChainIsAnIdentity) {
  // sum y_e (E_e - E_ref) as a form in x^2 must equal the reported z
  for (int n = 1; n <= 3; ++n)
    for (int d : {0, 3}) {
      const auto spec = FamilySpec::non_einstein(3, (4 * n + d + 1) / 2, n, {}, d);
      const auto space = WSpace::for_family(spec);
      const auto chain = elimination_chain(space);
      ASSERT_TRUE(chain.valid) << n << " " << d;
      EXPECT_GE(chain.form.minCoeff(), 0.0);
      EXPECT_GT(chain.form.sum(), 0.0);
    }
}

TEST(Certificate, SpreadFloorRegression) {
  const auto c = non_einstein_certificate(FamilySpec::non_einstein(2, 2, 1));
  const auto* s = c.find("spread minimum");
  ASSERT_NE(s, nullptr);
  EXPECT_NEAR(s->value, 0.0049668874172186578, 1e-9);
}

TEST(OrbitSeparation, Examples) {
  const auto a = orbit_separation_invariant(FamilySpec::non_einstein(3, 4, 2, {1.5}));
  const auto b = orbit_separation_invariant(FamilySpec::non_einstein(3, 4, 2, {1.5}));
  EXPECT_TRUE(same_h_orbit(a, b));
  EXPECT_FALSE(same_h_orbit(orbit_separation_invariant(FamilySpec::non_einstein(3, 4, 2, {1.0})),
                            orbit_separation_invariant(FamilySpec::non_einstein(3, 4, 2, {2.0}))));
  const auto neg = orbit_separation_invariant(FamilySpec::non_einstein(3, 4, 2, {-1.5}));
  EXPECT_FALSE(same_h_orbit(a, neg));
  EXPECT_EQ(a.g_canonical, neg.g_canonical);
  EXPECT_NEAR(a.h_invariant[0], 1.5, 1e-15);
  EXPECT_THROW(orbit_separation_invariant(FamilySpec::non_einstein(3, 4, 1)), ContractError);
}

TEST(OrbitSeparation, IdentificationsAreVerified) {
  const auto o = orbit_separation_invariant(FamilySpec::non_einstein(3, 6, 3, {0.5, -2.0}));
  ASSERT_FALSE(o.identifications.empty());
  for (const auto& id : o.identifications) EXPECT_LT(id.error, 1e-12) << id.description;
}
