#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/knot_invariants.hpp"
#include "knotdist/errors.hpp"
#include "knotdist/knots.hpp"

using namespace knotdist;

TEST(Circle, RegularPolygon) {
  const PolyCurve c = circle(12);
  EXPECT_TRUE(c.closed());
  EXPECT_EQ(c.vertex(0), (Vec3{1, 0, 0}));
  for (const Vec3& v : c.vertices()) EXPECT_NEAR(norm(v), 1.0, 1e-15);
  EXPECT_THROW(circle(2), DomainError);
  EXPECT_EQ(test_support::knot_determinant(c), 1);
}

TEST(TorusKnot, TrefoilIsSimpleAndKnotted) {
  const PolyCurve t = torus_knot(2, 3, 2, 1, 256);
  EXPECT_TRUE(t.closed());
  EXPECT_EQ(t.vertex_count(), 256u);
  EXPECT_TRUE(is_simple(t));
  EXPECT_EQ(test_support::knot_determinant(t, 1), 3);
  EXPECT_EQ(test_support::knot_determinant(t, 2), 3);
  EXPECT_EQ(test_support::knot_determinant(torus_knot(2, 5, 2, 1, 256)), 5);
}

TEST(TorusKnot, ParameterErrors) {
  EXPECT_THROW(torus_knot(2, 4, 2, 1, 256), DomainError);
  EXPECT_THROW(torus_knot(1, 3, 2, 1, 256), DomainError);
  EXPECT_THROW(torus_knot(2, 3, 1, 2, 256), DomainError);
  EXPECT_THROW(torus_knot(2, 3, 2, 1, 10), DomainError);
}

TEST(OpenTrefoil, StraightCollinearEnds) {
  const PolyCurve t = open_trefoil(128);
  EXPECT_FALSE(t.closed());
  EXPECT_EQ(t.vertex_count(), 128u);
  EXPECT_TRUE(is_simple(t));
  const Vec3 axis = normalized(t.vertex(127) - t.vertex(0));
  for (std::size_t i : {1u, 126u}) {
    const Vec3 d = t.vertex(i) - t.vertex(0);
    EXPECT_NEAR(norm(d - axis * dot(d, axis)), 0.0, 1e-12);
  }
  EXPECT_EQ(test_support::knot_determinant(test_support::close_far(t)), 3);
  EXPECT_THROW(open_trefoil(16), DomainError);
}

TEST(ConnectSum, CopiesAreScaledTiles) {
  const PolyCurve tile = open_trefoil(64);
  for (std::size_t copies : {1u, 2u, 3u}) {
    ConnectSumSpec spec{tile};
    spec.copies = copies;
    const ConnectSumLayout layout = connect_sum_layout(spec);
    EXPECT_TRUE(layout.curve.closed());
    EXPECT_TRUE(is_simple(layout.curve));
    ASSERT_EQ(layout.tile_starts.size(), copies);
    for (std::size_t k = 0; k < copies; ++k) {
      EXPECT_NEAR(layout.tile_scales[k], layout.tile_scales[0] * std::pow(0.1, double(k)), 1e-12);
      // Vertex-wise similarity: pairwise distances scale by the copy factor.
      const std::size_t s = layout.tile_starts[k];
      for (std::size_t i = 0; i + 7 < tile.vertex_count(); i += 7) {
        const double d_tile = distance(tile.vertex(i), tile.vertex(i + 7));
        const double d_copy = distance(layout.curve.vertex(s + i), layout.curve.vertex(s + i + 7));
        EXPECT_NEAR(d_copy, layout.tile_scales[k] * d_tile, 1e-9 * layout.tile_scales[0]);
      }
    }
    long long expected = 1;
    for (std::size_t k = 0; k < copies; ++k) expected *= 3;
    EXPECT_EQ(test_support::knot_determinant(layout.curve), expected);
  }
}

TEST(ConnectSum, Errors) {
  EXPECT_THROW(connect_sum(ConnectSumSpec{circle(8)}), DomainError);
  ConnectSumSpec bad{open_trefoil(64)};
  bad.scale_ratio = 1.5;
  EXPECT_THROW(connect_sum(bad), DomainError);
  ConnectSumSpec tight{open_trefoil(64)};
  tight.loop_radius = 1e-3;
  EXPECT_THROW(connect_sum(tight), GeometryError);
}

TEST(IsotopySafeMove, SmallMoveOfCircleIsSafe) {
  const PolyCurve c = circle(32);
  EXPECT_TRUE(isotopy_safe_move(c, 3, c.vertex(3) * 1.01));
}

TEST(IsotopySafeMove, SweepThroughAStrandIsRejected) {
  // Dragging a vertex of a planar polygon across the far side sweeps its
  // incident edges through other segments.
  const PolyCurve c = circle(32);
  EXPECT_FALSE(isotopy_safe_move(c, 0, {-1.5, 0, 0}));
}

TEST(IsotopySafeMove, ConservativeProperty) {
  std::mt19937_64 rng(21);
  const PolyCurve t = torus_knot(2, 3, 2, 1, 96);
  std::normal_distribution<double> g(0.0, 0.3);
  std::uniform_int_distribution<std::size_t> pick(0, t.vertex_count() - 1);
  std::size_t accepted = 0;
  for (int k = 0; k < 2000; ++k) {
    const std::size_t i = pick(rng);
    const Vec3 pos = t.vertex(i) + Vec3{g(rng), g(rng), g(rng)};
    if (!isotopy_safe_move(t, i, pos)) continue;
    ++accepted;
    std::vector<Vec3> v = t.vertices();
    v[i] = pos;
    const PolyCurve moved(std::move(v), true);
    EXPECT_TRUE(is_simple(moved));
    EXPECT_EQ(test_support::knot_determinant(moved), 3);
  }
  EXPECT_GT(accepted, 0u);
}

TEST(IsotopySafeMove, IndexOutOfRange) {
  EXPECT_THROW(isotopy_safe_move(circle(8), 8, {0, 0, 0}), DomainError);
}
