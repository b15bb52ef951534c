#include "knotdist/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "knotdist/errors.hpp"

namespace knotdist {

PolyCurve::PolyCurve(std::vector<Vec3> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed) {
  const std::size_t n = vertices_.size();
  if (closed_ && n < 3) throw GeometryError("closed curve needs at least 3 vertices");
  if (!closed_ && n < 2) throw GeometryError("open curve needs at least 2 vertices");
  for (const Vec3& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw GeometryError("non-finite vertex coordinate");
    }
  }

  const std::size_t segs = segment_count();
  cumulative_.assign(segs + 1, 0.0);
  for (std::size_t i = 0; i < segs; ++i) {
    const double len = distance(vertices_[i], vertices_[next_vertex(i)]);
    if (!(len > 0.0)) {
      throw GeometryError("coincident consecutive vertices at index " + std::to_string(i));
    }
    cumulative_[i + 1] = cumulative_[i] + len;
  }

  turning_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!closed_ && (i == 0 || i + 1 == n)) continue;
    const Vec3 in = vertices_[i] - vertices_[prev_vertex(i)];
    const Vec3 out = vertices_[next_vertex(i)] - vertices_[i];
    turning_[i] = angle_between(in, out);
  }
  turning_prefix_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) turning_prefix_[i + 1] = turning_prefix_[i] + turning_[i];
}

namespace {

// Sum of turning angles at vertices k (0 <= k < n) with a < arclen(k) < b,
// for 0 <= a <= b <= L.
double strict_turning_sum(const std::vector<double>& cumulative, std::size_t n_vertices,
                          const std::vector<double>& prefix, double a, double b) {
  if (!(b > a)) return 0.0;
  const auto begin = cumulative.begin();
  const auto end = cumulative.begin() + static_cast<std::ptrdiff_t>(n_vertices);
  const auto first = static_cast<std::size_t>(std::upper_bound(begin, end, a) - begin);
  const auto last = static_cast<std::size_t>(std::lower_bound(begin, end, b) - begin);
  if (last <= first) return 0.0;
  return prefix[last] - prefix[first];
}

}  // namespace

double PolyCurve::total_turning(const ArcInterval& arc) const {
  const double L = total_length();
  double lo = arc.lo;
  double hi = arc.hi;
  if (closed_) {
    const double shift = std::floor(lo / L) * L;
    lo -= shift;
    hi -= shift;
    if (hi > L) {
      double sum = strict_turning_sum(cumulative_, vertices_.size(), turning_prefix_, lo, L);
      sum += turning_[0];
      sum += strict_turning_sum(cumulative_, vertices_.size(), turning_prefix_, 0.0,
                                std::min(hi - L, L));
      return sum;
    }
  }
  return strict_turning_sum(cumulative_, vertices_.size(), turning_prefix_, lo, hi);
}

CurvePoint PolyCurve::point(std::size_t seg, double t) const {
  if (seg >= segment_count()) throw DomainError("segment index out of range");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("segment parameter outside [0,1]");
  return {seg, t, cumulative_[seg] + t * segment_length(seg)};
}

CurvePoint PolyCurve::point_at(double s) const {
  const double L = total_length();
  if (!std::isfinite(s)) throw DomainError("non-finite arclength");
  if (closed_) {
    s = std::fmod(s, L);
    if (s < 0.0) s += L;
    if (s >= L) s = 0.0;
  } else if (s < 0.0 || s > L) {
    throw DomainError("arclength outside [0, L] on open curve");
  }
  const std::size_t segs = segment_count();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.begin() + static_cast<std::ptrdiff_t>(segs), s);
  std::size_t seg = static_cast<std::size_t>(it - cumulative_.begin());
  seg = seg == 0 ? 0 : seg - 1;
  double t = (s - cumulative_[seg]) / segment_length(seg);
  t = std::clamp(t, 0.0, 1.0);
  return {seg, t, s};
}

Vec3 PolyCurve::position(const CurvePoint& p) const {
  return lerp(vertices_[p.seg], vertices_[next_vertex(p.seg)], p.t);
}

std::vector<Vec3> PolyCurve::subpolyline(const ArcInterval& arc) const {
  const double L = total_length();
  std::vector<Vec3> out;
  out.push_back(position_at(arc.lo));
  const std::size_t n = vertices_.size();
  if (closed_) {
    const double shift = std::floor(arc.lo / L) * L;
    const double lo = arc.lo - shift;
    const double hi = arc.hi - shift;
    for (int lap = 0; lap < 2; ++lap) {
      for (std::size_t k = 0; k < n; ++k) {
        const double s = cumulative_[k] + lap * L;
        if (s > lo && s < hi) out.push_back(vertices_[k]);
      }
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      if (cumulative_[k] > arc.lo && cumulative_[k] < arc.hi) out.push_back(vertices_[k]);
    }
  }
  out.push_back(closed_ ? position_at(arc.hi) : position_at(std::min(arc.hi, L)));
  return out;
}

PolyCurve PolyCurve::scaled(double factor) const {
  std::vector<Vec3> v = vertices_;
  for (Vec3& p : v) p *= factor;
  return PolyCurve(std::move(v), closed_);
}

double total_length(const PolyCurve& curve) { return curve.total_length(); }

double arc_distance(const PolyCurve& curve, double s, double t) {
  const double gap = std::abs(s - t);
  if (!curve.closed()) return gap;
  const double L = curve.total_length();
  const double g = std::fmod(gap, L);
  return std::min(g, L - g);
}

double arc_distance(const PolyCurve& curve, const CurvePoint& p, const CurvePoint& q) {
  const double d = arc_distance(curve, p.arclen, q.arclen);
  if (!(d > 0.0)) throw GeometryError("arc_distance of coincident points");
  return d;
}

double chord(const PolyCurve& curve, const CurvePoint& p, const CurvePoint& q) {
  return distance(curve.position(p), curve.position(q));
}

CurvePoint point_at(const PolyCurve& curve, double s) { return curve.point_at(s); }

PolyCurve resample(const PolyCurve& curve, std::size_t n) {
  const std::size_t min_n = curve.closed() ? 3 : 2;
  if (n < min_n) throw GeometryError("resample: too few vertices");
  const double L = curve.total_length();
  std::vector<Vec3> out;
  out.reserve(n);
  if (curve.closed()) {
    for (std::size_t k = 0; k < n; ++k) out.push_back(curve.position_at(L * static_cast<double>(k) / static_cast<double>(n)));
  } else {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      out.push_back(curve.position_at(L * static_cast<double>(k) / static_cast<double>(n - 1)));
    }
    out.push_back(curve.vertices().back());
  }
  PolyCurve result(std::move(out), curve.closed());
  if (!is_simple(result)) {
    throw GeometryError("resample: " + std::to_string(n) + " vertices is too coarse to stay simple");
  }
  return result;
}

double default_clearance(const PolyCurve& curve) { return 1e-9 * curve.total_length(); }

namespace {

struct Box3 {
  Vec3 lo;
  Vec3 hi;
};

Box3 segment_box(const Vec3& a, const Vec3& b) {
  return {{std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)},
          {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}};
}

double box_gap(const Box3& a, const Box3& b) {
  const double dx = std::max({0.0, a.lo.x - b.hi.x, b.lo.x - a.hi.x});
  const double dy = std::max({0.0, a.lo.y - b.hi.y, b.lo.y - a.hi.y});
  const double dz = std::max({0.0, a.lo.z - b.hi.z, b.lo.z - a.hi.z});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

bool is_simple(const PolyCurve& curve, std::optional<double> clearance) {
  const double clear = clearance.value_or(default_clearance(curve));
  const std::size_t n = curve.vertex_count();
  const std::size_t segs = curve.segment_count();

  // Adjacent segments must not fold back onto each other.
  for (std::size_t i = 0; i < n; ++i) {
    if (!curve.closed() && (i == 0 || i + 1 == n)) continue;
    const Vec3& a = curve.vertex(curve.prev_vertex(i));
    const Vec3& v = curve.vertex(i);
    const Vec3& b = curve.vertex(curve.next_vertex(i));
    if (point_segment_distance(a, v, b) < clear || point_segment_distance(b, v, a) < clear) {
      return false;
    }
  }

  std::vector<Box3> boxes(segs);
  for (std::size_t i = 0; i < segs; ++i) boxes[i] = segment_box(curve.segment_begin(i), curve.segment_end(i));

  for (std::size_t i = 0; i < segs; ++i) {
    for (std::size_t j = i + 2; j < segs; ++j) {
      if (curve.closed() && i == 0 && j + 1 == segs) continue;  // adjacent through vertex 0
      if (box_gap(boxes[i], boxes[j]) >= clear) continue;
      const double d = segment_segment_distance(curve.segment_begin(i), curve.segment_end(i),
                                                curve.segment_begin(j), curve.segment_end(j));
      if (d < clear) return false;
    }
  }
  return true;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

namespace {

double point_segment_param(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
}

}  // namespace

SegmentPairClosest segment_segment_closest(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                           const Vec3& b1) {
  SegmentPairClosest best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  auto consider = [&](double s, double t) {
    const double d = distance(lerp(a0, a1, s), lerp(b0, b1, t));
    if (d < best.distance) best = {d, s, t};
  };

  // Endpoint-to-segment candidates, in a fixed order.
  consider(0.0, point_segment_param(a0, b0, b1));
  consider(1.0, point_segment_param(a1, b0, b1));
  consider(point_segment_param(b0, a0, a1), 0.0);
  consider(point_segment_param(b1, a0, a1), 1.0);

  // Interior stationary point of the unconstrained problem.
  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double b = dot(d1, d2);
  const double c = dot(d1, r);
  const double f = dot(d2, r);
  const double denom = a * e - b * b;
  if (denom > 1e-14 * a * e) {
    const double s = (b * f - c * e) / denom;
    const double t = (a * f - b * c) / denom;
    if (s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0) consider(s, t);
  }
  return best;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk over vertices, edges and face.
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return distance(p, a);

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return distance(p, b);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return point_segment_distance(p, a, b);

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return distance(p, c);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return point_segment_distance(p, a, c);

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return point_segment_distance(p, b, c);

  const double sum = va + vb + vc;
  if (!(sum > 0.0)) {
    // Degenerate triangle: fall back to its edges.
    return std::min({point_segment_distance(p, a, b), point_segment_distance(p, b, c),
                     point_segment_distance(p, a, c)});
  }
  const double v = vb / sum;
  const double w = vc / sum;
  return distance(p, a + ab * v + ac * w);
}

namespace {

bool segment_pierces_triangle(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b,
                              const Vec3& c) {
  const Vec3 n = cross(b - a, c - a);
  const double n2 = norm2(n);
  if (!(n2 > 0.0)) return false;
  const double s0 = dot(n, p0 - a);
  const double s1 = dot(n, p1 - a);
  if ((s0 > 0.0 && s1 > 0.0) || (s0 < 0.0 && s1 < 0.0)) return false;
  if (s0 == s1) return false;  // coplanar; covered by edge and endpoint distances
  const Vec3 x = p0 + (p1 - p0) * (s0 / (s0 - s1));
  const double e0 = dot(cross(b - a, x - a), n);
  const double e1 = dot(cross(c - b, x - b), n);
  const double e2 = dot(cross(a - c, x - c), n);
  return e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0;
}

}  // namespace

double segment_triangle_distance(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b,
                                 const Vec3& c) {
  if (segment_pierces_triangle(p0, p1, a, b, c)) return 0.0;
  return std::min({point_triangle_distance(p0, a, b, c), point_triangle_distance(p1, a, b, c),
                   segment_segment_distance(p0, p1, a, b), segment_segment_distance(p0, p1, b, c),
                   segment_segment_distance(p0, p1, c, a)});
}

double polyline_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
  double best = std::numeric_limits<double>::infinity();
  if (a.size() == 1 && b.size() == 1) return distance(a[0], b[0]);
  if (a.size() == 1) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) best = std::min(best, point_segment_distance(a[0], b[j], b[j + 1]));
    return best;
  }
  if (b.size() == 1) return polyline_distance(b, a);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      best = std::min(best, segment_segment_distance(a[i], a[i + 1], b[j], b[j + 1]));
    }
  }
  return best;
}

}  // namespace knotdist
