#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knotdist/geometry.hpp"

namespace knotdist {

/// Length of the shortest path from `a` to `b` avoiding the open unit ball,
/// by Dijkstra search over a graph made of the two endpoints, their radial
/// projections, and an icosahedral geodesic grid on the unit sphere with
/// `resolution` subdivisions per icosahedron edge. Sphere nodes are joined by
/// great-circle arcs along short lattice directions inside each face;
/// endpoints are joined by straight segments to every node they see and to
/// their radial projections. Every edge is a real path outside the ball, so
/// the result is never below the true minimum, and doubling the resolution
/// never increases it. Throws DomainError if an endpoint lies inside the
/// open ball or the resolution is zero.
double shortest_path_outside_ball(const Vec3& a, const Vec3& b, std::size_t resolution);

struct VerifyReport {
  std::string suite;
  std::string grid_spec;
  /// Smallest inequality slack found (negative means violated).
  double worst_margin = 0.0;
  /// Named parameters of the worst point.
  std::vector<std::pair<std::string, double>> worst_point;
  bool passed = false;
};

/// Margin below which a suite fails.
inline constexpr double kVerifyFailMargin = -1e-9;
/// Gap demanded of strict inequalities.
inline constexpr double kStrictGap = 2e-9;

/// Identifiers of all suites, in report order.
const std::vector<std::string>& verify_suite_names();

/// Runs one suite over its grid (`grid_density` 0 selects the default),
/// refining once around the worst point. Throws DomainError for an unknown
/// suite.
VerifyReport verify_suite(std::string_view suite, std::size_t grid_density = 0);

/// Runs every suite at its default density, concurrently.
std::vector<VerifyReport> verify_all();

/// Seeded random open polygonal arc with `steps` segments whose vertices and
/// segments all stay at distance >= 1 from the origin. Requires steps >= 2.
PolyCurve random_arc_outside_ball(std::uint64_t seed, std::size_t steps);

}  // namespace knotdist
