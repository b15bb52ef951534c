#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "knotdist/vec3.hpp"

namespace knotdist {

/// A location on a polygonal curve. `seg` and `t` are the storage form;
/// `arclen` is the cached arclength coordinate measured from vertex 0.
struct CurvePoint {
  std::size_t seg = 0;
  double t = 0.0;
  double arclen = 0.0;
};

/// A closed range of arclength coordinates. On closed curves `hi` may exceed
/// the total length, in which case the interval wraps through vertex 0.
struct ArcInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Immutable polygonal space curve, open or closed.
///
/// Consecutive vertices must be distinct (and the last must differ from the
/// first on closed curves). Violations throw GeometryError at construction.
class PolyCurve {
 public:
  PolyCurve(std::vector<Vec3> vertices, bool closed);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  bool closed() const { return closed_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t segment_count() const { return closed_ ? vertices_.size() : vertices_.size() - 1; }
  double total_length() const { return cumulative_.back(); }

  const Vec3& vertex(std::size_t i) const { return vertices_[i]; }
  const Vec3& segment_begin(std::size_t seg) const { return vertices_[seg]; }
  const Vec3& segment_end(std::size_t seg) const { return vertices_[next_vertex(seg)]; }
  double segment_length(std::size_t seg) const { return cumulative_[seg + 1] - cumulative_[seg]; }
  /// Arclength coordinate of vertex `i` (0 for vertex 0).
  double vertex_arclen(std::size_t i) const { return cumulative_[i]; }

  std::size_t next_vertex(std::size_t i) const { return i + 1 == vertices_.size() ? 0 : i + 1; }
  std::size_t prev_vertex(std::size_t i) const { return i == 0 ? vertices_.size() - 1 : i - 1; }

  /// Exterior (turning) angle at vertex `i`; zero at the endpoints of an open curve.
  double turning_angle(std::size_t i) const { return turning_[i]; }

  /// Sum of turning angles at vertices strictly inside the arc [lo, hi]
  /// (interval may wrap on closed curves).
  double total_turning(const ArcInterval& arc) const;

  CurvePoint point(std::size_t seg, double t) const;
  CurvePoint point_at(double s) const;
  Vec3 position(const CurvePoint& p) const;
  Vec3 position_at(double s) const { return position(point_at(s)); }

  /// Sub-polyline covering the (non-wrapping or wrapping) arc interval,
  /// including the interpolated endpoints.
  std::vector<Vec3> subpolyline(const ArcInterval& arc) const;

  PolyCurve scaled(double factor) const;

 private:
  double turning_prefix(double s) const;

  std::vector<Vec3> vertices_;
  bool closed_;
  std::vector<double> cumulative_;      // size segment_count()+1
  std::vector<double> turning_;         // per vertex
  std::vector<double> turning_prefix_;  // size vertex_count()+1
};

double total_length(const PolyCurve& curve);

/// Shorter arclength distance between coordinates `s` and `t` (closed curves),
/// or |s - t| on open curves.
double arc_distance(const PolyCurve& curve, double s, double t);

/// Arclength distance between two distinct curve points; throws GeometryError
/// if the points coincide.
double arc_distance(const PolyCurve& curve, const CurvePoint& p, const CurvePoint& q);

double chord(const PolyCurve& curve, const CurvePoint& p, const CurvePoint& q);

/// Locates arclength `s`; taken modulo the length on closed curves, and must
/// lie in [0, L] on open curves (DomainError otherwise).
CurvePoint point_at(const PolyCurve& curve, double s);

/// `n` vertices at equal arclength spacing along `curve`, starting at vertex 0
/// (open curves keep both endpoints). Throws GeometryError if the result is
/// not simple.
PolyCurve resample(const PolyCurve& curve, std::size_t n);

/// Default simplicity clearance, 1e-9 of the total length.
double default_clearance(const PolyCurve& curve);

/// True iff every pair of non-adjacent segments is at least `clearance`
/// apart and adjacent segments do not fold back onto each other.
bool is_simple(const PolyCurve& curve, std::optional<double> clearance = std::nullopt);

// Primitive distance queries. All are exact up to rounding.

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

struct SegmentPairClosest {
  double distance;
  double s;  // parameter on the first segment
  double t;  // parameter on the second segment
};

/// Minimum distance between segments [a0,a1] and [b0,b1]. The interior
/// stationary point is used only when it lies inside both parameter ranges;
/// otherwise, and for parallel pairs, the minimum over the four
/// endpoint-to-segment distances is taken.
SegmentPairClosest segment_segment_closest(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                           const Vec3& b1);

inline double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                       const Vec3& b1) {
  return segment_segment_closest(a0, a1, b0, b1).distance;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Minimum distance between segment [p0,p1] and the closed triangle (a,b,c);
/// zero if the segment pierces the triangle.
double segment_triangle_distance(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b,
                                 const Vec3& c);

/// Minimum distance between two polylines given as vertex chains.
double polyline_distance(std::span<const Vec3> a, std::span<const Vec3> b);

}  // namespace knotdist
