#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "knotdist/geometry.hpp"

namespace knotdist {

/// Certified enclosure [lower, upper] of the distortion of a curve.
///
/// `lower` is always realized by the witness pair: re-evaluating
/// pair_distortion(witness_p, witness_q) reproduces it.
struct DistortionResult {
  double lower = 1.0;
  double upper = std::numeric_limits<double>::infinity();
  CurvePoint witness_p;
  CurvePoint witness_q;
  std::size_t iterations = 0;
  std::size_t boxes_explored = 0;
  /// Set when the box budget ran out before the enclosure reached `tol`.
  bool budget_exhausted = false;

  double width() const { return upper - lower; }
};

/// A pair of arclength intervals with a certified upper bound on the
/// distortion of every point pair drawn from them.
struct PairBox {
  ArcInterval first;
  ArcInterval second;
  double upper_bound = std::numeric_limits<double>::infinity();
};

/// Arc distance over chord for two distinct points. Throws GeometryError if
/// the points coincide along the curve or in space.
double pair_distortion(const PolyCurve& curve, const CurvePoint& p, const CurvePoint& q);

/// Largest arc distance between a point of `a` and a point of `b`.
double max_arc_distance(const PolyCurve& curve, const ArcInterval& a, const ArcInterval& b);

/// Certified upper bound of the distortion over `a` x `b` (intervals inside
/// [0, L]). The bound is the smallest of:
///   * max arc distance over the exact minimum distance between the two
///     sub-polylines (+inf if they touch);
///   * sec(alpha/2) for a connecting arc of total turning alpha < pi;
///   * the exact supremum when both intervals sit in one segment (1) or in
///     two segments sharing a vertex.
double box_upper_bound(const PolyCurve& curve, const ArcInterval& a, const ArcInterval& b);

struct CertifyOptions {
  /// Absolute enclosure width at which the search stops.
  double tol = 1e-4;
  /// Queue size at which the search gives up and returns a flagged result.
  std::size_t max_boxes = 10'000'000;
  /// Skip the is_simple precondition check (caller already verified it).
  bool assume_simple = false;
};

/// Branch-and-bound over pairs of arclength intervals. Throws GeometryError
/// on non-simple curves and DomainError for tol <= 0.
DistortionResult distortion_certified(const PolyCurve& curve, const CertifyOptions& options);
DistortionResult distortion_certified(const PolyCurve& curve, double tol = 1e-4);

/// Certified supremum of the distortion restricted to opposite points (pairs
/// half the total length apart) of a closed curve.
DistortionResult antipodal_distortion(const PolyCurve& curve, double tol = 1e-4);

struct SampledDistortion {
  double value = 1.0;
  CurvePoint p;
  CurvePoint q;
  /// Sample indices of the witness when it came from a sample set; a corner
  /// witness reports the vertex index in both.
  std::size_t i = 0;
  std::size_t j = 0;
  bool from_corner = false;
  /// True when the search stopped because `abort_above` was exceeded; the
  /// value is then only a lower bound on the sampled maximum.
  bool aborted = false;
};

/// Brute-force maximum over all pairs of `n_points` equally spaced samples,
/// together with the corner limits sec(kappa/2) at every vertex.
SampledDistortion distortion_sampled(const PolyCurve& curve, std::size_t n_points);

/// Arclength coordinates of every vertex and every segment midpoint, sorted.
std::vector<double> vertex_midpoint_arclens(const PolyCurve& curve);

/// Maximum pair distortion over the sample points at `arclens` (sorted
/// ascending). Pairs of tree nodes are pruned by certified bounds, so the
/// result equals the brute-force maximum. Stops early once a value above
/// `abort_above` is found. `hint` is a sample index pair evaluated first.
SampledDistortion max_sample_distortion(
    const PolyCurve& curve, std::span<const double> arclens,
    double abort_above = std::numeric_limits<double>::infinity(),
    std::optional<std::pair<std::size_t, std::size_t>> hint = std::nullopt);

/// Largest corner limit sec(kappa/2) over the vertices, reported through a
/// pair of points equidistant from the vertex (such pairs attain it).
SampledDistortion max_corner_limit(const PolyCurve& curve);

/// Distortion of the vertex and midpoint samples together with the corner
/// limits: the cheap surrogate minimized by the optimizer. `hint` is passed
/// on to max_sample_distortion.
SampledDistortion vertex_midpoint_distortion(
    const PolyCurve& curve, double abort_above = std::numeric_limits<double>::infinity(),
    std::optional<std::pair<std::size_t, std::size_t>> hint = std::nullopt);

struct ProfileSample {
  double arclen;
  double distortion;
};

/// delta(p0, q) for `n` equally spaced q (the sample coinciding with p0 is
/// skipped).
std::vector<ProfileSample> distortion_profile(const PolyCurve& curve, double p0_arclen,
                                              std::size_t n);

}  // namespace knotdist
