#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "knotdist/bounds.hpp"
#include "knotdist/errors.hpp"

using namespace knotdist;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Arcsec, ValuesAndDomain) {
  EXPECT_EQ(arcsec(1.0), 0.0);
  EXPECT_NEAR(arcsec(2.0), kPi / 3.0, 1e-15);
  EXPECT_EQ(arcsec(1.0 - 1e-13), 0.0);
  EXPECT_THROW(arcsec(0.5), DomainError);
  EXPECT_THROW(arcsec(std::nan("")), DomainError);
}

TEST(BallAvoidingLength, ChordBranchBelowThreshold) {
  const BoundEval e = ball_avoiding_length(2.0, 2.0, 0.5);
  EXPECT_EQ(e.branch, BoundBranch::chord);
  EXPECT_NEAR(e.value, 4.0 * std::sin(0.25), 1e-14);
}

TEST(BallAvoidingLength, WrapBranchAntipodal) {
  const BoundEval e = ball_avoiding_length(2.0, 2.0, kPi);
  EXPECT_EQ(e.branch, BoundBranch::wrap);
  EXPECT_NEAR(e.value, 2.0 * std::sqrt(3.0) + kPi / 3.0, 1e-14);
  EXPECT_NEAR(ball_avoiding_length(1.0, 1.0, kPi).value, kPi, 1e-15);
}

TEST(BallAvoidingLength, ContinuousAtThreshold) {
  for (double r : {1.0, 1.5, 3.0}) {
    for (double s : {1.0, 2.0, 4.0}) {
      const double t0 = wrap_threshold_angle(r, s);
      if (t0 < 1e-9 || t0 + 1e-9 > kPi) continue;
      const double below = ball_avoiding_length(r, s, t0 - 1e-9).value;
      const double above = ball_avoiding_length(r, s, t0 + 1e-9).value;
      EXPECT_NEAR(below, above, 1e-8) << "r=" << r << " s=" << s;
    }
  }
}

TEST(BallAvoidingLength, DomainErrors) {
  EXPECT_THROW(ball_avoiding_length(0.5, 1.0, 1.0), DomainError);
  EXPECT_THROW(ball_avoiding_length(1.0, 1.0, -0.1), DomainError);
  EXPECT_THROW(ball_avoiding_length(1.0, 1.0, 4.0), DomainError);
}

TEST(AnyStart, FrozenConstant) {
  const BoundEval e = ball_avoiding_length_any_start(2.0, kPi);
  EXPECT_EQ(e.branch, BoundBranch::large_angle);
  EXPECT_NEAR(e.value, std::sqrt(3.0) + 2.0 * kPi / 3.0, 1e-14);
  EXPECT_NEAR(e.value, 3.826, 5e-4);
  EXPECT_LT(e.value, 4.0);
}

TEST(AnyStart, IsMinimumOverStartRadius) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rad(1.0, 5.0), ang(0.0, kPi);
  for (int k = 0; k < 200; ++k) {
    const double s = rad(rng), theta = ang(rng);
    const double m1 = ball_avoiding_length_any_start(s, theta).value;
    // Coarse scan of the start radius, then a fine scan around the best cell.
    double best = 1e300, best_r = 1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double r = 1.0 + i * 0.002;
      const double v = ball_avoiding_length(r, s, theta).value;
      if (v < best) best = v, best_r = r;
    }
    for (int i = -2000; i <= 2000; ++i) {
      const double r = std::max(1.0, best_r + i * 1e-6);
      best = std::min(best, ball_avoiding_length(r, s, theta).value);
    }
    EXPECT_LE(m1, best + 1e-12);
    EXPECT_GE(m1, best - 1e-9);
  }
}

TEST(AnyStart, MonotoneAndConcave) {
  for (double s = 1.0; s <= 6.0; s += 0.25) {
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
      const double theta = kPi * i / 400.0;
      const double v = ball_avoiding_length_any_start(s, theta).value;
      EXPECT_GE(v, prev - 1e-15);
      EXPECT_GE(v, theta - 1e-15);  // the arc is at least the angle it subtends
      prev = v;
      if (i > 0 && i < 400) {
        const double h = kPi / 400.0;
        const double left = ball_avoiding_length_any_start(s, theta - h).value;
        const double right = ball_avoiding_length_any_start(s, theta + h).value;
        EXPECT_LE(left + right - 2.0 * v, 1e-12);
      }
    }
  }
  for (double theta = 0.0; theta <= kPi; theta += 0.1) {
    double prev = -1.0;
    for (double s = 1.0; s <= 10.0; s += 0.05) {
      const double v = ball_avoiding_length_any_start(s, theta).value;
      EXPECT_GE(v, prev - 1e-15);
      prev = v;
    }
  }
}

TEST(QuarterCircle, StrictlyBelowAnyStartAtPi) {
  for (double s = 1.0; s <= 100.0; s += 0.5) {
    EXPECT_LT(quarter_circle_detour_length(s), ball_avoiding_length_any_start(s, kPi).value);
  }
}

TEST(SecantBound, ValuesAndMonotonicity) {
  EXPECT_NEAR(essential_arc_length_bound(1.0), 5.0 * kPi / 3.0, 1e-12);
  EXPECT_NEAR(essential_arc_length_bound(2.0), kPi, 1e-15);
  double prev = 1e300;
  for (int i = 1; i <= 1000; ++i) {
    const double v = essential_arc_length_bound(2.0 * i / 1000.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(essential_arc_length_bound(0.0), DomainError);
  EXPECT_THROW(essential_arc_length_bound(2.5), DomainError);
}

TEST(CurvatureBound, SecantOfHalfAngle) {
  EXPECT_EQ(curvature_distortion_bound(0.0), 1.0);
  EXPECT_NEAR(curvature_distortion_bound(kPi / 2.0), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(curvature_distortion_bound(kPi), DomainError);
}

TEST(RopelengthBound, HalfRopelength) {
  EXPECT_EQ(ropelength_distortion_bound(32.0), 16.0);
  EXPECT_THROW(ropelength_distortion_bound(-1.0), DomainError);
}

TEST(KnotConstant, FiveThirdsPi) {
  EXPECT_NEAR(knot_distortion_lower_constant(), 5.23599, 1e-5);
  EXPECT_NEAR(knot_distortion_lower_constant(), essential_arc_length_bound(1.0), 1e-15);
}

TEST(BranchName, Tags) {
  EXPECT_EQ(branch_name(BoundBranch::large_angle), "large-angle");
  EXPECT_EQ(branch_name(BoundBranch::none), "none");
}
