#include "knotdist/knots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "knotdist/errors.hpp"

namespace knotdist {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 torus_point(int p, int q, double R, double r, double phi) {
  const double rho = R + r * std::cos(q * phi);
  return {rho * std::cos(p * phi), rho * std::sin(p * phi), r * std::sin(q * phi)};
}

/// Resamples a dense open polyline to `n` points at equal arclength spacing,
/// keeping both endpoints.
std::vector<Vec3> equal_arclength(const std::vector<Vec3>& dense, std::size_t n) {
  std::vector<double> cum(dense.size(), 0.0);
  for (std::size_t k = 1; k < dense.size(); ++k) cum[k] = cum[k - 1] + distance(dense[k - 1], dense[k]);
  const double total = cum.back();
  std::vector<Vec3> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 == n) {
      out.push_back(dense.back());
      break;
    }
    const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 2 < dense.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
    out.push_back(lerp(dense[seg], dense[seg + 1], t));
  }
  return out;
}

struct Frame {
  Vec3 e1, e2, e3;
};

Vec3 any_perpendicular(const Vec3& u) {
  const Vec3 trial = std::abs(u.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return normalized(cross(u, trial));
}

/// Orthonormal frame of an open tile: e1 along the end-to-end axis, e2
/// towards the centroid of the interior vertices.
Frame tile_frame(const PolyCurve& tile) {
  const Vec3& a = tile.vertex(0);
  const Vec3& b = tile.vertex(tile.vertex_count() - 1);
  const Vec3 e1 = normalized(b - a);
  Vec3 centroid{0, 0, 0};
  for (const Vec3& v : tile.vertices()) centroid = centroid + v;
  centroid = centroid / static_cast<double>(tile.vertex_count());
  Vec3 off = centroid - a;
  off = off - e1 * dot(off, e1);
  const Vec3 e2 = norm(off) > 1e-12 * distance(a, b) ? normalized(off) : any_perpendicular(e1);
  return {e1, e2, cross(e1, e2)};
}

double tile_span(const PolyCurve& tile) {
  return distance(tile.vertex(0), tile.vertex(tile.vertex_count() - 1));
}

/// Diameter of the ball centred at the end-to-end midpoint enclosing the tile.
double tile_diameter(const PolyCurve& tile) {
  const Vec3 c = lerp(tile.vertex(0), tile.vertex(tile.vertex_count() - 1), 0.5);
  double r = 0.0;
  for (const Vec3& v : tile.vertices()) r = std::max(r, distance(v, c));
  return 2.0 * r;
}

void check_tile(const PolyCurve& tile) {
  if (tile.closed()) throw DomainError("connect sum tile must be an open curve");
  if (tile.vertex_count() < 4) throw DomainError("connect sum tile needs at least 4 vertices");
  const std::size_t n = tile.vertex_count();
  const Vec3 axis = tile.vertex(n - 1) - tile.vertex(0);
  if (norm(axis) <= 0.0) throw GeometryError("connect sum tile ends coincide");
  const Vec3 u = normalized(axis);
  const double tol = 1e-9 * norm(axis);
  for (std::size_t k : {std::size_t{1}, n - 2}) {
    const Vec3 d = tile.vertex(k) - tile.vertex(0);
    if (norm(d - u * dot(d, u)) > tol)
      throw GeometryError("connect sum tile end segments are not collinear");
  }
}

/// Angle in the wedge test below: the ray from `apex` along `dir` enters the
/// triangle (apex, p, q) beyond the apex.
bool ray_enters_wedge(const Vec3& apex, const Vec3& dir, const Vec3& p, const Vec3& q) {
  constexpr double kAngleTol = 1e-9;
  const Vec3 u = p - apex;
  const Vec3 v = q - apex;
  const Vec3 n = cross(u, v);
  const double nn = norm(n);
  const double scale = norm(u) * norm(v);
  if (nn <= kAngleTol * scale) {
    // Degenerate triangle: a segment (or two collinear ones) from the apex.
    return angle_between(dir, u) <= kAngleTol || angle_between(dir, v) <= kAngleTol;
  }
  const double out_of_plane = std::abs(dot(dir, n)) / (nn * norm(dir));
  if (out_of_plane > kAngleTol) return false;
  return angle_between(dir, u) + angle_between(dir, v) <= angle_between(u, v) + kAngleTol;
}

struct Aabb {
  Vec3 lo, hi;
  bool overlaps(const Vec3& a, const Vec3& b) const {
    return std::min(a.x, b.x) <= hi.x && std::max(a.x, b.x) >= lo.x && std::min(a.y, b.y) <= hi.y &&
           std::max(a.y, b.y) >= lo.y && std::min(a.z, b.z) <= hi.z && std::max(a.z, b.z) >= lo.z;
  }
};

Aabb triangle_box(const Vec3& a, const Vec3& b, const Vec3& c, double pad) {
  return {{std::min({a.x, b.x, c.x}) - pad, std::min({a.y, b.y, c.y}) - pad,
           std::min({a.z, b.z, c.z}) - pad},
          {std::max({a.x, b.x, c.x}) + pad, std::max({a.y, b.y, c.y}) + pad,
           std::max({a.z, b.z, c.z}) + pad}};
}

}  // namespace

PolyCurve circle(std::size_t n) {
  if (n < 3) throw DomainError("circle needs at least 3 vertices");
  std::vector<Vec3> v;
  v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    v.push_back({std::cos(phi), std::sin(phi), 0.0});
  }
  return PolyCurve(std::move(v), true);
}

PolyCurve torus_knot(int p, int q, double R, double r, std::size_t n) {
  if (p < 2 || q < 2) throw DomainError("torus knot needs p, q >= 2");
  if (std::gcd(p, q) != 1) throw DomainError("torus knot needs gcd(p, q) = 1");
  if (!(r > 0.0) || !(R > r) || !std::isfinite(R))
    throw DomainError("torus knot needs R > r > 0");
  if (n < static_cast<std::size_t>(3 * p * q))
    throw DomainError("torus knot needs n >= 3pq = " + std::to_string(3 * p * q));
  std::vector<Vec3> v;
  v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    v.push_back(torus_point(p, q, R, r, phi));
  }
  PolyCurve curve(std::move(v), true);
  if (!is_simple(curve)) throw GeometryError("torus knot sampling is not simple; increase n");
  return curve;
}

PolyCurve open_trefoil(std::size_t n) {
  if (n < 32) throw DomainError("open trefoil needs at least 32 vertices");
  // Invert a (2,3) torus knot in the unit sphere about its point at phi = 0;
  // the curve through the centre goes to infinity, so cutting a small arc
  // around it leaves a long knot whose far ends are nearly straight.
  constexpr double kR = 1.6;
  constexpr double kCut = 0.45;  // parameter half-width of the removed arc
  const Vec3 centre = torus_point(2, 3, kR, 1.0, 0.0);
  const std::size_t dense_n = 64 * n;
  std::vector<Vec3> dense;
  dense.reserve(dense_n + 1);
  for (std::size_t k = 0; k <= dense_n; ++k) {
    const double phi = kCut + (2.0 * kPi - 2.0 * kCut) * static_cast<double>(k) /
                                  static_cast<double>(dense_n);
    const Vec3 d = torus_point(2, 3, kR, 1.0, phi) - centre;
    dense.push_back(d / norm2(d));
  }
  std::vector<Vec3> core = equal_arclength(dense, n - 2);

  // Straight ends continue the line through the two cut points.
  const Vec3 a = core.front();
  const Vec3 b = core.back();
  const Vec3 u = normalized(b - a);
  const Vec3 mid = lerp(a, b, 0.5);
  double reach = 0.0;
  for (const Vec3& v : core) reach = std::max(reach, distance(v, mid));
  const double end_length = 2.0 * reach;

  std::vector<Vec3> v;
  v.reserve(n);
  v.push_back(a - u * end_length);
  v.insert(v.end(), core.begin(), core.end());
  v.push_back(b + u * end_length);

  // Normalize: end-to-end axis along +x, starting at the origin, unit span.
  const double span = distance(v.front(), v.back());
  const PolyCurve raw(v, false);
  const Frame f = tile_frame(raw);
  const Vec3 origin = v.front();
  for (Vec3& x : v) {
    const Vec3 d = x - origin;
    x = Vec3{dot(d, f.e1), dot(d, f.e2), dot(d, f.e3)} / span;
  }
  // Pin the end segments exactly onto the axis.
  v[1].y = v[1].z = 0.0;
  v[n - 2].y = v[n - 2].z = 0.0;
  v[n - 1] = {1.0, 0.0, 0.0};
  PolyCurve curve(std::move(v), false);
  if (!is_simple(curve)) throw GeometryError("open trefoil sampling is not simple; increase n");
  return curve;
}

double default_loop_radius(const PolyCurve& tile, std::size_t copies, double scale_ratio) {
  check_tile(tile);
  const double span = tile_span(tile);
  const double diam = tile_diameter(tile);
  double needed = 0.0;
  double c = 1.0;
  for (std::size_t j = 0; j < copies; ++j, c *= scale_ratio) {
    // Chord of the copy plus the gap after it, sized by the larger neighbour.
    needed += c * span + 10.0 * c * diam * 1.05;
  }
  // Arc length used stays below half the circumference; the leading copy
  // additionally needs room for its chord.
  return std::max(needed / kPi, 4.0 * diam);
}

ConnectSumLayout connect_sum_layout(const ConnectSumSpec& spec) {
  check_tile(spec.tile);
  if (spec.copies < 1) throw DomainError("connect sum needs at least one copy");
  if (!(spec.scale_ratio > 0.0 && spec.scale_ratio < 1.0))
    throw DomainError("connect sum scale ratio must lie in (0, 1)");
  if (spec.loop_vertices < 8) throw DomainError("connect sum needs at least 8 loop vertices");
  const double radius = spec.loop_radius > 0.0
                            ? spec.loop_radius
                            : default_loop_radius(spec.tile, spec.copies, spec.scale_ratio);
  if (!std::isfinite(radius)) throw DomainError("connect sum loop radius must be finite");

  const double span = tile_span(spec.tile);
  const double diam = tile_diameter(spec.tile);

  // Angular layout: copy j occupies [start_j, start_j + width_j].
  std::vector<double> scale(spec.copies), start(spec.copies), width(spec.copies);
  double angle = 0.0;
  for (std::size_t j = 0; j < spec.copies; ++j) {
    scale[j] = j == 0 ? 1.0 : scale[j - 1] * spec.scale_ratio;
    const double chord_len = scale[j] * span;
    if (chord_len >= 2.0 * radius) throw GeometryError("connect sum tiles collide: loop too small");
    width[j] = 2.0 * std::asin(chord_len / (2.0 * radius));
    start[j] = angle;
    // The gap after copy j is bounded by the larger neighbour, i.e. copy j
    // itself (copies shrink); the wrap gap back to copy 0 uses copy 0.
    const double gap_diam = (j + 1 == spec.copies ? 1.0 : scale[j]) * diam;
    angle += width[j] + 10.0 * gap_diam / radius;
  }
  if (angle > 2.0 * kPi) throw GeometryError("connect sum tiles collide: gaps do not fit on loop");

  const Frame tf = tile_frame(spec.tile);
  const Vec3 t0 = spec.tile.vertex(0);
  const std::size_t tn = spec.tile.vertex_count();
  const double step = 2.0 * kPi / static_cast<double>(spec.loop_vertices);

  ConnectSumLayout layout{PolyCurve({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, true), {}, {}};
  std::vector<Vec3> v;
  for (std::size_t j = 0; j < spec.copies; ++j) {
    const double a0 = start[j];
    const double a1 = start[j] + width[j];
    const Vec3 q0{radius * std::cos(a0), radius * std::sin(a0), 0.0};
    const Vec3 q1{radius * std::cos(a1), radius * std::sin(a1), 0.0};
    const Vec3 f1 = normalized(q1 - q0);
    const Vec3 f2{0.0, 0.0, 1.0};
    const Vec3 f3 = cross(f1, f2);
    layout.tile_starts.push_back(v.size());
    layout.tile_scales.push_back(scale[j]);
    for (std::size_t k = 0; k < tn; ++k) {
      const Vec3 d = spec.tile.vertex(k) - t0;
      v.push_back(q0 + (f1 * dot(d, tf.e1) + f2 * dot(d, tf.e2) + f3 * dot(d, tf.e3)) * scale[j]);
    }
    v[layout.tile_starts.back()] = q0;
    v.back() = q1;
    // Loop vertices strictly inside the gap, away from both junctions.
    const double gap_end = j + 1 == spec.copies ? 2.0 * kPi : start[j + 1];
    const double margin = 0.5 * step;
    const double first = std::ceil((a1 + margin) / step) * step;
    for (double phi = first; phi < gap_end - margin; phi += step)
      v.push_back({radius * std::cos(phi), radius * std::sin(phi), 0.0});
  }
  layout.curve = PolyCurve(std::move(v), true);
  if (!is_simple(layout.curve)) throw GeometryError("connect sum result is not simple");
  return layout;
}

PolyCurve connect_sum(const ConnectSumSpec& spec) { return connect_sum_layout(spec).curve; }

bool isotopy_safe_move(const PolyCurve& curve, std::size_t index, const Vec3& new_position,
                       std::optional<double> clearance) {
  const std::size_t n = curve.vertex_count();
  if (index >= n) throw DomainError("vertex index out of range");
  if (!std::isfinite(new_position.x) || !std::isfinite(new_position.y) ||
      !std::isfinite(new_position.z))
    return false;
  const double clear = clearance.value_or(default_clearance(curve));
  const Vec3& p = curve.vertex(index);
  if (new_position == p) return true;

  // Fixed neighbours and the incident edges (identified by segment index).
  struct Wing {
    std::size_t nbr;
    std::size_t edge;
  };
  std::vector<Wing> wings;
  const bool has_prev = curve.closed() || index > 0;
  const bool has_next = curve.closed() || index + 1 < n;
  if (has_prev) wings.push_back({curve.prev_vertex(index), curve.prev_vertex(index)});
  if (has_next) wings.push_back({curve.next_vertex(index), index});
  for (const Wing& w : wings)
    if (distance(curve.vertex(w.nbr), new_position) <= clear) return false;

  const std::size_t segs = curve.segment_count();
  auto is_moving = [&](std::size_t seg) {
    for (const Wing& w : wings)
      if (w.edge == seg) return true;
    return false;
  };

  for (const Wing& w : wings) {
    const Vec3& a = curve.vertex(w.nbr);
    const Aabb box = triangle_box(a, p, new_position, clear);
    for (std::size_t seg = 0; seg < segs; ++seg) {
      if (is_moving(seg)) continue;
      const std::size_t s0 = seg;
      const std::size_t s1 = curve.next_vertex(seg);
      const Vec3& x0 = curve.vertex(s0);
      const Vec3& x1 = curve.vertex(s1);
      if (s0 == w.nbr || s1 == w.nbr) {
        // Shares the triangle's fixed corner: may touch only there.
        const Vec3& far = s0 == w.nbr ? x1 : x0;
        if (ray_enters_wedge(a, far - a, p, new_position)) return false;
        if (point_triangle_distance(far, a, p, new_position) < clear) return false;
        continue;
      }
      if (!box.overlaps(x0, x1)) continue;
      if (segment_triangle_distance(x0, x1, a, p, new_position) < clear) return false;
    }
  }
  // The two swept triangles must not pass through each other's far corner
  // (the moving vertex crossing the line through its neighbours).
  if (wings.size() == 2) {
    const Vec3& a = curve.vertex(wings[0].nbr);
    const Vec3& b = curve.vertex(wings[1].nbr);
    if (point_triangle_distance(b, a, p, new_position) < clear) return false;
    if (point_triangle_distance(a, b, p, new_position) < clear) return false;
  }

  // Folds of the new edges at the moved vertex and at its neighbours.
  std::vector<Vec3> verts = curve.vertices();
  verts[index] = new_position;
  auto fold_at = [&](std::size_t i) {
    if (!curve.closed() && (i == 0 || i + 1 == n)) return false;
    const Vec3& pv = verts[curve.prev_vertex(i)];
    const Vec3& cv = verts[i];
    const Vec3& nv = verts[curve.next_vertex(i)];
    return point_segment_distance(pv, cv, nv) < clear || point_segment_distance(nv, pv, cv) < clear;
  };
  if (fold_at(index)) return false;
  for (const Wing& w : wings)
    if (fold_at(w.nbr)) return false;
  return true;
}

}  // namespace knotdist
