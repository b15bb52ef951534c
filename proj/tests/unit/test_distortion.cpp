#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/random_curves.hpp"
#include "knotdist/distortion.hpp"
#include "knotdist/errors.hpp"
#include "knotdist/knots.hpp"

using namespace knotdist;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen from the independent numpy dense-sampling oracle
// (tests/oracles/dense_sampling.py).
constexpr double kTorus256Dense = 7.980594459228348;
constexpr double kCircle2048Dense = 1.5707975588747602;

PolyCurve unit_square() { return PolyCurve({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, true); }

void expect_enclosure(const DistortionResult& r, double tol) {
  EXPECT_LE(r.lower, r.upper);
  EXPECT_LE(r.width(), tol);
  EXPECT_FALSE(r.budget_exhausted);
}

}  // namespace

TEST(PairDistortion, SquareOppositeMidpoints) {
  const PolyCurve sq = unit_square();
  EXPECT_DOUBLE_EQ(pair_distortion(sq, sq.point_at(0.5), sq.point_at(2.5)), 2.0);
  EXPECT_THROW(pair_distortion(sq, sq.point_at(1.0), sq.point_at(1.0)), GeometryError);
}

TEST(Certified, Square) {
  const DistortionResult r = distortion_certified(unit_square(), 1e-6);
  expect_enclosure(r, 1e-6);
  EXPECT_NEAR(r.lower, 2.0, 1e-12);
  EXPECT_NEAR(r.upper, 2.0, 1e-6);
}

TEST(Certified, RegularHexagon) {
  const DistortionResult r = distortion_certified(circle(6), 1e-8);
  expect_enclosure(r, 1e-8);
  EXPECT_LE(r.lower, std::sqrt(3.0) + 1e-12);
  EXPECT_GE(r.upper, std::sqrt(3.0) - 1e-12);
}

TEST(Certified, StraightSegmentIsOne) {
  const DistortionResult r = distortion_certified(PolyCurve({{0, 0, 0}, {2, 0, 0}}, false));
  EXPECT_EQ(r.lower, 1.0);
  EXPECT_NEAR(r.upper, 1.0, 1e-12);
}

TEST(Certified, Circle2048ContainsDenseEstimate) {
  const DistortionResult r = distortion_certified(circle(2048), 1e-3);
  expect_enclosure(r, 1e-3);
  EXPECT_GE(r.lower, kPi / 2.0);
  EXPECT_LE(r.upper, kPi / 2.0 + 2e-3);
  EXPECT_GE(r.upper, kCircle2048Dense);
}

TEST(Certified, TorusKnotContainsDenseEstimate) {
  const DistortionResult r = distortion_certified(torus_knot(2, 3, 2, 1, 256), 1e-4);
  expect_enclosure(r, 1e-4);
  EXPECT_LE(r.lower, kTorus256Dense + 1e-12);
  EXPECT_GE(r.upper, kTorus256Dense);
}

TEST(Certified, WitnessReproducesLowerBound) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PolyCurve c = test_support::random_closed_curve(seed, 40);
    const DistortionResult r = distortion_certified(c, 1e-5);
    EXPECT_NEAR(pair_distortion(c, r.witness_p, r.witness_q), r.lower, 1e-12 * r.lower);
  }
}

TEST(Certified, ScaleInvariant) {
  const PolyCurve c = test_support::random_closed_curve(9, 50);
  const DistortionResult a = distortion_certified(c, 1e-6);
  const DistortionResult b = distortion_certified(c.scaled(37.0), 1e-6);
  EXPECT_NEAR(a.lower, b.lower, 2e-6);
  EXPECT_NEAR(a.upper, b.upper, 2e-6);
}

TEST(Certified, AtLeastHalfPiOnClosedCurves) {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const DistortionResult r = distortion_certified(test_support::random_closed_curve(seed, 32), 1e-4);
    EXPECT_GE(r.upper, kPi / 2.0);
  }
}

TEST(Certified, Errors) {
  EXPECT_THROW(distortion_certified(unit_square(), 0.0), DomainError);
  const PolyCurve bowtie({{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}}, true);
  EXPECT_THROW(distortion_certified(bowtie), GeometryError);
}

TEST(Certified, BudgetExhaustionIsFlagged) {
  CertifyOptions opts;
  opts.tol = 1e-12;
  opts.max_boxes = 50;
  const DistortionResult r = distortion_certified(torus_knot(2, 3, 2, 1, 96), opts);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_LE(r.lower, r.upper);
}

TEST(BoxUpperBound, DominatesPairsInsideTheBoxes) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const PolyCurve c = seed % 2 ? test_support::random_closed_curve(seed, 24)
                                 : test_support::random_open_curve(seed, 24);
    const double L = c.total_length();
    std::uniform_real_distribution<double> u(0.0, L);
    for (int k = 0; k < 300; ++k) {
      double a0 = u(rng), b0 = u(rng);
      const double wa = 0.05 * L * std::uniform_real_distribution<double>(0, 1)(rng);
      const double wb = 0.05 * L * std::uniform_real_distribution<double>(0, 1)(rng);
      a0 = std::min(a0, L - wa);
      b0 = std::min(b0, L - wb);
      const ArcInterval A{a0, a0 + wa}, B{b0, b0 + wb};
      const double bound = box_upper_bound(c, A, B);
      for (int t = 0; t < 10; ++t) {
        const double s = a0 + wa * std::uniform_real_distribution<double>(0, 1)(rng);
        const double q = b0 + wb * std::uniform_real_distribution<double>(0, 1)(rng);
        if (std::abs(s - q) < 1e-9 * L) continue;
        EXPECT_LE(pair_distortion(c, c.point_at(s), c.point_at(q)), bound * (1 + 1e-12));
      }
    }
  }
}

TEST(MaxArcDistance, ClosedWraparound) {
  const PolyCurve sq = unit_square();
  // Arc distances from [0, 0.5] to [2.0, 2.5] range up to L/2 = 2.
  EXPECT_DOUBLE_EQ(max_arc_distance(sq, {0.0, 0.5}, {2.0, 2.5}), 2.0);
  EXPECT_DOUBLE_EQ(max_arc_distance(sq, {0.0, 0.25}, {0.5, 0.75}), 0.75);
}

TEST(Sampled, BelowCertifiedUpper) {
  for (std::uint64_t seed = 30; seed < 34; ++seed) {
    const PolyCurve c = test_support::random_closed_curve(seed, 64);
    const DistortionResult r = distortion_certified(c, 1e-4);
    EXPECT_LE(distortion_sampled(c, 2000).value, r.upper + 1e-12);
    EXPECT_LE(vertex_midpoint_distortion(c).value, r.upper + 1e-12);
  }
}

TEST(Sampled, TreeSearchMatchesBruteForce) {
  const PolyCurve c = test_support::random_closed_curve(77, 30);
  const std::vector<double> s = vertex_midpoint_arclens(c);
  double brute = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      brute = std::max(brute, pair_distortion(c, c.point_at(s[i]), c.point_at(s[j])));
  EXPECT_NEAR(max_sample_distortion(c, s).value, brute, 1e-12 * brute);
}

TEST(Sampled, CornerLimitOfSquare) {
  EXPECT_NEAR(max_corner_limit(unit_square()).value, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(vertex_midpoint_distortion(unit_square()).value, 2.0, 1e-12);
}

TEST(Antipodal, BoundedByFullDistortion) {
  const PolyCurve c = torus_knot(2, 3, 2, 1, 128);
  const DistortionResult full = distortion_certified(c, 1e-4);
  const DistortionResult anti = antipodal_distortion(c, 1e-4);
  EXPECT_LE(anti.lower, full.upper + 1e-12);
  EXPECT_THROW(antipodal_distortion(PolyCurve({{0, 0, 0}, {1, 0, 0}}, false)), GeometryError);
}

TEST(Profile, MatchesPairDistortion) {
  const PolyCurve c = circle(32);
  const auto prof = distortion_profile(c, 0.0, 64);
  ASSERT_FALSE(prof.empty());
  for (const auto& s : prof)
    EXPECT_NEAR(s.distortion, pair_distortion(c, c.point_at(0.0), c.point_at(s.arclen)), 1e-12);
}
