#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "knotdist/errors.hpp"
#include "knotdist/geometry.hpp"
#include "knotdist/knots.hpp"

using namespace knotdist;

namespace {

PolyCurve unit_square() { return PolyCurve({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, true); }

Vec3 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(PolyCurve, LengthAndCounts) {
  const PolyCurve sq = unit_square();
  EXPECT_EQ(sq.vertex_count(), 4u);
  EXPECT_EQ(sq.segment_count(), 4u);
  EXPECT_DOUBLE_EQ(sq.total_length(), 4.0);
  const PolyCurve open({{0, 0, 0}, {1, 0, 0}, {1, 2, 0}}, false);
  EXPECT_EQ(open.segment_count(), 2u);
  EXPECT_DOUBLE_EQ(open.total_length(), 3.0);
}

TEST(PolyCurve, RejectsDegenerateInput) {
  EXPECT_THROW(PolyCurve({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}}, false), GeometryError);
  EXPECT_THROW(PolyCurve({{0, 0, 0}}, false), GeometryError);
  EXPECT_THROW(PolyCurve({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}, true), GeometryError);
}

TEST(PolyCurve, TurningAngles) {
  const PolyCurve sq = unit_square();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(sq.turning_angle(i), std::numbers::pi / 2, 1e-15);
  const PolyCurve open({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, false);
  EXPECT_EQ(open.turning_angle(0), 0.0);
  EXPECT_EQ(open.turning_angle(2), 0.0);
  EXPECT_NEAR(open.total_turning({0.0, 2.0}), std::numbers::pi / 2, 1e-15);
}

TEST(ArcDistance, ClosedCurveTakesShorterArc) {
  const PolyCurve sq = unit_square();
  EXPECT_DOUBLE_EQ(arc_distance(sq, 0.5, 3.5), 1.0);
  EXPECT_DOUBLE_EQ(arc_distance(sq, 0.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(arc_distance(sq, 0.25, 1.0), 0.75);
  const PolyCurve open({{0, 0, 0}, {4, 0, 0}}, false);
  EXPECT_DOUBLE_EQ(arc_distance(open, 0.5, 3.5), 3.0);
}

TEST(ArcDistance, CoincidentPointsThrow) {
  const PolyCurve sq = unit_square();
  EXPECT_THROW(arc_distance(sq, sq.point_at(1.0), sq.point_at(1.0)), GeometryError);
}

TEST(PointAt, WrapsOnClosedAndChecksOpen) {
  const PolyCurve sq = unit_square();
  const Vec3 p = sq.position_at(5.5);
  EXPECT_NEAR(distance(p, Vec3{1, 0.5, 0}), 0.0, 1e-15);
  const PolyCurve open({{0, 0, 0}, {1, 0, 0}}, false);
  EXPECT_THROW(point_at(open, 1.5), DomainError);
}

TEST(Chord, IsEuclideanDistance) {
  const PolyCurve sq = unit_square();
  EXPECT_DOUBLE_EQ(chord(sq, sq.point_at(0.0), sq.point_at(2.0)), std::sqrt(2.0));
}

TEST(Distances, PointSegmentKnownCases) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0, 1, 0}, {-1, 0, 0}, {1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 0, 0}, {-1, 0, 0}, {1, 0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({0, 0, 0}, {0, 0, 0}, {0, 0, 0}), 0.0);
}

TEST(Distances, SegmentSegmentKnownCases) {
  EXPECT_NEAR(segment_segment_distance({-1, 0, 0}, {1, 0, 0}, {0, -1, 1}, {0, 1, 1}), 1.0, 1e-15);
  // Parallel, offset segments.
  EXPECT_NEAR(segment_segment_distance({0, 0, 0}, {1, 0, 0}, {2, 1, 0}, {3, 1, 0}), std::sqrt(2.0),
              1e-15);
  // Crossing segments.
  EXPECT_NEAR(segment_segment_distance({-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}), 0.0, 1e-15);
}

TEST(Distances, SegmentSegmentMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a0 = random_point(rng), a1 = random_point(rng);
    const Vec3 b0 = random_point(rng), b1 = random_point(rng);
    const double d = segment_segment_distance(a0, a1, b0, b1);
    double brute = 1e300;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j)
        brute = std::min(brute, distance(a0 + (a1 - a0) * (i / 200.0), b0 + (b1 - b0) * (j / 200.0)));
    EXPECT_LE(d, brute + 1e-12);
    EXPECT_GE(d, brute - 0.02);
  }
}

TEST(Distances, SegmentTriangle) {
  EXPECT_DOUBLE_EQ(segment_triangle_distance({0.2, 0.2, -1}, {0.2, 0.2, 1}, {0, 0, 0}, {1, 0, 0},
                                             {0, 1, 0}),
                   0.0);
  EXPECT_NEAR(segment_triangle_distance({0.2, 0.2, 1}, {0.2, 0.2, 2}, {0, 0, 0}, {1, 0, 0},
                                        {0, 1, 0}),
              1.0, 1e-15);
  EXPECT_NEAR(point_triangle_distance({2, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}), 1.0, 1e-15);
}

TEST(IsSimple, DetectsSelfIntersection) {
  EXPECT_TRUE(is_simple(unit_square()));
  const PolyCurve bowtie({{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}}, true);
  EXPECT_FALSE(is_simple(bowtie));
  const PolyCurve foldback({{0, 0, 0}, {2, 0, 0}, {1, 0, 0}}, false);
  EXPECT_FALSE(is_simple(foldback));
  EXPECT_TRUE(is_simple(torus_knot(2, 3, 2, 1, 256)));
}

TEST(Resample, EqualSpacingAndEndpoints) {
  const PolyCurve sq = unit_square();
  const PolyCurve r = resample(sq, 16);
  ASSERT_EQ(r.vertex_count(), 16u);
  for (std::size_t s = 0; s < r.segment_count(); ++s) EXPECT_NEAR(r.segment_length(s), 0.25, 1e-12);
  const PolyCurve open({{0, 0, 0}, {1, 0, 0}, {1, 3, 0}}, false);
  const PolyCurve ro = resample(open, 9);
  EXPECT_EQ(ro.vertex(0), open.vertex(0));
  EXPECT_NEAR(distance(ro.vertex(8), open.vertex(2)), 0.0, 1e-12);
}

TEST(Scaled, ScalesLength) {
  const PolyCurve sq = unit_square().scaled(3.0);
  EXPECT_DOUBLE_EQ(sq.total_length(), 12.0);
}
