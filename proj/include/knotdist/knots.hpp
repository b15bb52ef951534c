#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "knotdist/geometry.hpp"

namespace knotdist {

/// Regular n-gon inscribed in the unit circle of the xy-plane, vertex 0 at (1,0,0).
PolyCurve circle(std::size_t n);

/// (p,q) torus knot sampled at n equally spaced parameter values on the torus
/// with core radius R and tube radius r:
///   ((R + r cos q phi) cos p phi, (R + r cos q phi) sin p phi, r sin q phi).
/// Requires gcd(p,q) = 1, p,q >= 2, R > r > 0 and n >= 3pq.
PolyCurve torus_knot(int p, int q, double R, double r, std::size_t n);

/// Long trefoil with straight, collinear end segments: vertices 0-1 and
/// (n-2)-(n-1) lie on one line and the knotted part sits between them. The
/// knotted part is the image of a (2,3) torus knot under inversion in a
/// sphere centred on one of its points. Requires n >= 32.
PolyCurve open_trefoil(std::size_t n);

struct ConnectSumSpec {
  /// Open tile with straight, collinear end segments.
  PolyCurve tile;
  std::size_t copies = 1;
  /// Size of each copy relative to the previous one, in (0, 1).
  double scale_ratio = 0.1;
  /// Radius of the carrying loop; <= 0 picks default_loop_radius().
  double loop_radius = 0.0;
  /// Vertices on the full carrying circle (those inside tile gaps are dropped).
  std::size_t loop_vertices = 128;
};

struct ConnectSumLayout {
  PolyCurve curve;
  /// Index of vertex 0 of each tile copy in `curve`.
  std::vector<std::size_t> tile_starts;
  /// Scale factor applied to each copy.
  std::vector<double> tile_scales;
};

/// Radius leaving gaps of at least ten tile diameters between copies while
/// using at most half of the loop.
double default_loop_radius(const PolyCurve& tile, std::size_t copies, double scale_ratio);

/// Closed curve made of a round loop interrupted by scaled copies of the
/// tile, each `scale_ratio` times the size of the previous one, separated by
/// gaps of at least ten diameters of the larger neighbour. Throws
/// GeometryError if the copies do not fit or the result is not simple.
ConnectSumLayout connect_sum_layout(const ConnectSumSpec& spec);
PolyCurve connect_sum(const ConnectSumSpec& spec);

/// Sufficient test that moving vertex `index` to `new_position` is an
/// ambient isotopy: the triangles swept by its incident edges meet no other
/// segment (segments sharing the far vertex may touch only at it) and the
/// moved curve stays simple at `clearance`.
bool isotopy_safe_move(const PolyCurve& curve, std::size_t index, const Vec3& new_position,
                       std::optional<double> clearance = std::nullopt);

}  // namespace knotdist
