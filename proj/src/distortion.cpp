#include "knotdist/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <queue>

#include "knotdist/bounds.hpp"
#include "knotdist/errors.hpp"
#include "knotdist/parallel.hpp"

namespace knotdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box3 {
  Vec3 lo{kInf, kInf, kInf};
  Vec3 hi{-kInf, -kInf, -kInf};

  void add(const Vec3& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  void add(const Box3& b) {
    add(b.lo);
    add(b.hi);
  }
};

double box_gap(const Box3& a, const Box3& b) {
  const double dx = std::max({0.0, a.lo.x - b.hi.x, b.lo.x - a.hi.x});
  const double dy = std::max({0.0, a.lo.y - b.hi.y, b.lo.y - a.hi.y});
  const double dz = std::max({0.0, a.lo.z - b.hi.z, b.lo.z - a.hi.z});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double ratio_or_inf(double arc, double chord) { return chord > 0.0 ? arc / chord : kInf; }

// sec(alpha/2) when alpha < pi, +inf otherwise.
double turning_bound(double alpha) {
  return alpha < std::numbers::pi ? curvature_distortion_bound(alpha) : kInf;
}

// Curvature bound for pairs drawn from a and b: every such pair is joined by
// a subarc of one of the hull arcs below, and that subarc's turning bounds
// the ratio.
double hull_turning_bound(const PolyCurve& curve, const ArcInterval& a, const ArcInterval& b) {
  const ArcInterval hull{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
  double best = turning_bound(curve.total_turning(hull));
  if (curve.closed()) {
    const bool disjoint = a.hi <= b.lo || b.hi <= a.lo;
    if (disjoint) {
      const ArcInterval& first = a.lo <= b.lo ? a : b;
      const ArcInterval& second = a.lo <= b.lo ? b : a;
      const ArcInterval wrap{second.lo, first.hi + curve.total_length()};
      best = std::min(best, turning_bound(curve.total_turning(wrap)));
    }
  }
  return best;
}

// Ratio (a+b)/chord for points at distances a and b on either side of a
// vertex with turning angle kappa, as a function of x = a/b.
double straddle_ratio(double x, double cos_kappa) {
  const double den = 1.0 + x * x + 2.0 * x * cos_kappa;
  return den > 0.0 ? (1.0 + x) / std::sqrt(den) : kInf;
}

// Per-curve acceleration data for box bounds.
class CurveIndex {
 public:
  explicit CurveIndex(const PolyCurve& curve) : curve_(curve) {
    const std::size_t n = curve.vertex_count();
    std::size_t levels = 1;
    while ((std::size_t{1} << levels) <= n) ++levels;
    table_.assign(levels, std::vector<Box3>(n));
    for (std::size_t i = 0; i < n; ++i) table_[0][i].add(curve.vertex(i));
    for (std::size_t k = 1; k < levels; ++k) {
      const std::size_t step = std::size_t{1} << (k - 1);
      for (std::size_t i = 0; i + (std::size_t{1} << k) <= n; ++i) {
        table_[k][i] = table_[k - 1][i];
        table_[k][i].add(table_[k - 1][i + step]);
      }
    }
  }

  // Bounding box of vertices first..last inclusive.
  Box3 vertex_box(std::size_t first, std::size_t last) const {
    const std::size_t len = last - first + 1;
    std::size_t k = 0;
    while ((std::size_t{2} << k) <= len) ++k;
    Box3 b = table_[k][first];
    b.add(table_[k][last + 1 - (std::size_t{1} << k)]);
    return b;
  }

  const PolyCurve& curve() const { return curve_; }

 private:
  const PolyCurve& curve_;
  std::vector<std::vector<Box3>> table_;
};

// An arclength interval inside [0, L] together with the range of segments it
// touches. Intervals are only ever split at vertices or inside one segment,
// so the segment range stays exact.
struct Span {
  double lo;
  double hi;
  std::uint32_t seg_lo;
  std::uint32_t seg_hi;

  bool single() const { return seg_lo == seg_hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  ArcInterval arc() const { return {lo, hi}; }
};

Vec3 position_on(const PolyCurve& curve, std::size_t seg, double s) {
  const double t = std::clamp((s - curve.vertex_arclen(seg)) / curve.segment_length(seg), 0.0, 1.0);
  return lerp(curve.segment_begin(seg), curve.segment_end(seg), t);
}

Span whole_span(const PolyCurve& curve) {
  return {0.0, curve.total_length(), 0, static_cast<std::uint32_t>(curve.segment_count() - 1)};
}

std::pair<Span, Span> split_span(const PolyCurve& curve, const Span& s) {
  if (!s.single()) {
    // Split at the interior vertex nearest the middle.
    std::size_t lo = s.seg_lo + 1;
    std::size_t hi = s.seg_hi;
    const double target = s.mid();
    while (lo < hi) {
      const std::size_t m = (lo + hi) / 2;
      if (curve.vertex_arclen(m) < target) lo = m + 1; else hi = m;
    }
    std::size_t k = lo;
    if (k > s.seg_lo + 1 &&
        std::abs(curve.vertex_arclen(k - 1) - target) < std::abs(curve.vertex_arclen(k) - target)) {
      --k;
    }
    const double cut = curve.vertex_arclen(k);
    const auto kk = static_cast<std::uint32_t>(k);
    return {Span{s.lo, cut, s.seg_lo, kk - 1}, Span{cut, s.hi, kk, s.seg_hi}};
  }
  const double cut = s.mid();
  return {Span{s.lo, cut, s.seg_lo, s.seg_lo}, Span{cut, s.hi, s.seg_lo, s.seg_lo}};
}

std::vector<Vec3> span_polyline(const PolyCurve& curve, const Span& s) {
  std::vector<Vec3> pts;
  pts.reserve(s.seg_hi - s.seg_lo + 2);
  pts.push_back(position_on(curve, s.seg_lo, s.lo));
  for (std::size_t v = s.seg_lo + 1; v <= s.seg_hi; ++v) pts.push_back(curve.vertex(v));
  pts.push_back(position_on(curve, s.seg_hi, s.hi));
  return pts;
}

// Lower bound on the distance between the sub-polylines; exact for spans
// covering few segments, a bounding-box gap otherwise.
double span_distance_lower_bound(const CurveIndex& index, const Span& a, const Span& b) {
  const PolyCurve& curve = index.curve();
  const std::size_t na = a.seg_hi - a.seg_lo + 1;
  const std::size_t nb = b.seg_hi - b.seg_lo + 1;
  if (na * nb <= 16) {
    const auto pa = span_polyline(curve, a);
    const auto pb = span_polyline(curve, b);
    return polyline_distance(pa, pb);
  }
  auto span_box = [&](const Span& s) {
    Box3 box;
    box.add(position_on(curve, s.seg_lo, s.lo));
    box.add(position_on(curve, s.seg_hi, s.hi));
    if (s.seg_hi > s.seg_lo) box.add(index.vertex_box(s.seg_lo + 1, s.seg_hi));
    return box;
  };
  return box_gap(span_box(a), span_box(b));
}

struct StraddleInfo {
  double sup;    // exact supremum of (a+b)/chord over the box
  double a;      // distance before the vertex attaining it
  double b;      // distance after the vertex attaining it
  double vertex_arclen;
};

// For spans on two segments sharing a vertex: first = segment ending at the
// vertex, second = segment starting there.
std::optional<StraddleInfo> straddle(const PolyCurve& curve, const Span& first, const Span& second) {
  const std::size_t i = first.seg_lo;
  const std::size_t j = second.seg_lo;
  if (curve.next_vertex(i) != j || (!curve.closed() && j != i + 1)) return std::nullopt;
  const std::size_t v = j;  // shared vertex index
  const double v_end = curve.vertex_arclen(i + 1);
  const double v_start = curve.vertex_arclen(j);
  const double a_min = v_end - first.hi;
  const double a_max = v_end - first.lo;
  const double b_min = second.lo - v_start;
  const double b_max = second.hi - v_start;
  const double kappa = curve.turning_angle(v);
  const double cos_kappa = std::cos(kappa);
  if (!(a_max > 0.0) || !(b_max > 0.0)) return StraddleInfo{1.0, a_max, b_max, v_start};
  const double x_lo = a_min / b_max;
  const double x_hi = b_min > 0.0 ? a_max / b_min : kInf;
  if (x_lo <= 1.0 && 1.0 <= x_hi) {
    const double c = std::max(std::min(a_max, b_max), std::max(a_min, b_min));
    return StraddleInfo{straddle_ratio(1.0, cos_kappa), c, c, v_start};
  }
  if (x_hi < 1.0) return StraddleInfo{straddle_ratio(x_hi, cos_kappa), a_max, b_min, v_start};
  return StraddleInfo{straddle_ratio(x_lo, cos_kappa), a_min, b_max, v_start};
}

std::optional<StraddleInfo> straddle_any_order(const PolyCurve& curve, const Span& a, const Span& b) {
  if (!a.single() || !b.single()) return std::nullopt;
  if (auto s = straddle(curve, a, b)) return s;
  return straddle(curve, b, a);
}

double span_upper_bound(const CurveIndex& index, const Span& a, const Span& b, bool diagonal) {
  const PolyCurve& curve = index.curve();
  if (a.single() && b.single() && a.seg_lo == b.seg_lo) return 1.0;
  double ub = hull_turning_bound(curve, a.arc(), b.arc());
  if (ub <= 1.0) return ub;
  if (auto s = straddle_any_order(curve, a, b)) ub = std::min(ub, s->sup);
  if (!diagonal) {
    const double gap = span_distance_lower_bound(index, a, b);
    if (gap > 0.0) ub = std::min(ub, max_arc_distance(curve, a.arc(), b.arc()) / gap);
  }
  return ub;
}

struct QueueBox {
  Span a;
  Span b;
  double ub;
  bool diagonal;

  bool operator<(const QueueBox& o) const { return ub < o.ub; }
};

struct LowerTracker {
  double value = 1.0;
  double sp = 0.0;
  double sq = 0.0;

  void offer(const PolyCurve& curve, double s, double t) {
    const double arc = arc_distance(curve, s, t);
    if (!(arc > 0.0)) return;
    const double r = ratio_or_inf(arc, distance(curve.position_at(s), curve.position_at(t)));
    if (r > value) {
      value = r;
      sp = s;
      sq = t;
    }
  }
};

void offer_box_center(const PolyCurve& curve, LowerTracker& lower, const Span& a, const Span& b,
                      bool diagonal) {
  if (auto s = straddle_any_order(curve, a, b)) {
    const double L = curve.total_length();
    double p = s->vertex_arclen - s->a;
    double q = s->vertex_arclen + s->b;
    if (curve.closed()) {
      if (p < 0.0) p += L;
      if (q >= L) q -= L;
    }
    lower.offer(curve, p, q);
    return;
  }
  if (diagonal) {
    lower.offer(curve, a.lo, a.hi);
  } else {
    lower.offer(curve, a.mid(), b.mid());
  }
}

DistortionResult finish(const PolyCurve& curve, const LowerTracker& lower, double upper) {
  DistortionResult r;
  r.lower = lower.value;
  r.upper = std::max(upper, lower.value);
  r.witness_p = curve.point_at(lower.sp);
  r.witness_q = curve.point_at(lower.sq);
  return r;
}

}  // namespace

double pair_distortion(const PolyCurve& curve, const CurvePoint& p, const CurvePoint& q) {
  const double arc = arc_distance(curve, p, q);
  const double c = chord(curve, p, q);
  if (!(c > 0.0)) throw GeometryError("distinct curve points coincide in space");
  return arc / c;
}

double max_arc_distance(const PolyCurve& curve, const ArcInterval& a, const ArcInterval& b) {
  const double lo = b.lo - a.hi;
  const double hi = b.hi - a.lo;
  if (!curve.closed()) return std::max(std::abs(lo), std::abs(hi));
  const double L = curve.total_length();
  if (hi - lo >= L) return L / 2.0;
  // Arc distance as a function of the coordinate difference is a tent with
  // peaks at L/2 + kL; check whether one lies in [lo, hi].
  const double k = std::ceil((lo - L / 2.0) / L);
  if (L / 2.0 + k * L <= hi) return L / 2.0;
  auto tent = [L](double x) {
    const double g = std::fmod(std::abs(x), L);
    return std::min(g, L - g);
  };
  return std::max(tent(lo), tent(hi));
}

double box_upper_bound(const PolyCurve& curve, const ArcInterval& a, const ArcInterval& b) {
  const double L = curve.total_length();
  if (a.lo < 0.0 || b.lo < 0.0 || a.hi > L || b.hi > L || a.hi < a.lo || b.hi < b.lo) {
    throw DomainError("box intervals must lie inside [0, L]");
  }
  auto to_span = [&](const ArcInterval& iv) {
    const CurvePoint lo = curve.point_at(std::min(iv.lo, L));
    std::size_t seg_lo = lo.seg;
    if (!curve.closed() && iv.lo >= L) seg_lo = curve.segment_count() - 1;
    // Segment holding the right end: the last segment whose start is < hi.
    std::size_t seg_hi = seg_lo;
    while (seg_hi + 1 < curve.segment_count() && curve.vertex_arclen(seg_hi + 1) < iv.hi) ++seg_hi;
    if (iv.hi == iv.lo) seg_hi = seg_lo;
    return Span{iv.lo, iv.hi, static_cast<std::uint32_t>(seg_lo), static_cast<std::uint32_t>(seg_hi)};
  };
  const Span sa = to_span(a);
  const Span sb = to_span(b);
  if (sa.single() && sb.single() && sa.seg_lo == sb.seg_lo) return 1.0;
  double ub = hull_turning_bound(curve, a, b);
  if (auto s = straddle_any_order(curve, sa, sb)) ub = std::min(ub, s->sup);
  const double gap = polyline_distance(span_polyline(curve, sa), span_polyline(curve, sb));
  if (gap > 0.0) ub = std::min(ub, max_arc_distance(curve, a, b) / gap);
  return ub;
}

DistortionResult distortion_certified(const PolyCurve& curve, double tol) {
  CertifyOptions options;
  options.tol = tol;
  return distortion_certified(curve, options);
}

DistortionResult distortion_certified(const PolyCurve& curve, const CertifyOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!options.assume_simple && !is_simple(curve)) {
    throw GeometryError("distortion is only defined for simple curves");
  }
  const CurveIndex index(curve);
  const double L = curve.total_length();
  const double min_width = 1e-13 * L;

  LowerTracker lower;
  {
    const SampledDistortion seed = vertex_midpoint_distortion(curve);
    lower.value = seed.value;
    lower.sp = seed.p.arclen;
    lower.sq = seed.q.arclen;
  }

  std::priority_queue<QueueBox> queue;
  double settled = 1.0;  // largest bound among boxes dropped within tol of the lower bound
  std::size_t explored = 0;
  std::size_t iterations = 0;
  bool exhausted = false;

  const Span root = whole_span(curve);
  queue.push({root, root, kInf, true});

  auto consider = [&](const Span& a, const Span& b, bool diagonal, double parent_ub) {
    ++explored;
    const double ub = std::min(parent_ub, span_upper_bound(index, a, b, diagonal));
    offer_box_center(curve, lower, a, b, diagonal);
    if (ub <= lower.value) return;
    if (ub <= lower.value + options.tol || (a.width() < min_width && b.width() < min_width)) {
      settled = std::max(settled, ub);
      return;
    }
    queue.push({a, b, ub, diagonal});
  };

  while (!queue.empty()) {
    const QueueBox top = queue.top();
    if (top.ub - lower.value <= options.tol) break;
    queue.pop();
    ++iterations;
    if (top.diagonal) {
      const auto [left, right] = split_span(curve, top.a);
      consider(left, left, true, top.ub);
      consider(left, right, false, top.ub);
      consider(right, right, true, top.ub);
    } else if (top.a.width() >= top.b.width()) {
      const auto [left, right] = split_span(curve, top.a);
      consider(left, top.b, false, top.ub);
      consider(right, top.b, false, top.ub);
    } else {
      const auto [left, right] = split_span(curve, top.b);
      consider(top.a, left, false, top.ub);
      consider(top.a, right, false, top.ub);
    }
    if (queue.size() > options.max_boxes) {
      exhausted = true;
      break;
    }
  }

  double upper = std::max(settled, lower.value);
  if (!queue.empty()) upper = std::max(upper, queue.top().ub);
  DistortionResult result = finish(curve, lower, upper);
  result.iterations = iterations;
  result.boxes_explored = explored;
  result.budget_exhausted = exhausted;
  return result;
}

DistortionResult antipodal_distortion(const PolyCurve& curve, double tol) {
  if (!curve.closed()) throw GeometryError("antipodal distortion needs a closed curve");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!is_simple(curve)) throw GeometryError("distortion is only defined for simple curves");
  const double L = curve.total_length();
  const double half = L / 2.0;

  // Breakpoints: vertices and the antipodes of vertices in [0, L/2].
  std::vector<double> cuts{0.0, half};
  for (std::size_t k = 0; k < curve.vertex_count(); ++k) {
    const double s = curve.vertex_arclen(k);
    if (s > 0.0 && s < half) cuts.push_back(s);
    if (s > half) cuts.push_back(s - half);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  struct Interval {
    double lo;
    double hi;
    std::size_t seg_p;
    std::size_t seg_q;
    double ub;
    bool operator<(const Interval& o) const { return ub < o.ub; }
  };

  auto bound = [&](double lo, double hi, std::size_t sp, std::size_t sq) {
    const double d = segment_segment_distance(position_on(curve, sp, lo), position_on(curve, sp, hi),
                                              position_on(curve, sq, lo + half),
                                              position_on(curve, sq, hi + half));
    return ratio_or_inf(half, d);
  };

  LowerTracker lower;
  lower.value = 0.0;
  lower.offer(curve, 0.0, half);
  std::priority_queue<Interval> queue;
  double settled = 1.0;
  std::size_t explored = 0;
  std::size_t iterations = 0;

  auto consider = [&](double lo, double hi, std::size_t sp, std::size_t sq, double parent) {
    ++explored;
    const double ub = std::min(parent, bound(lo, hi, sp, sq));
    lower.offer(curve, 0.5 * (lo + hi), 0.5 * (lo + hi) + half);
    if (ub <= lower.value) return;
    if (ub <= lower.value + tol || hi - lo < 1e-13 * L) {
      settled = std::max(settled, ub);
      return;
    }
    queue.push({lo, hi, sp, sq, ub});
  };

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    const double m = 0.5 * (lo + hi);
    consider(lo, hi, curve.point_at(m).seg, curve.point_at(m + half).seg, kInf);
  }
  while (!queue.empty()) {
    const Interval top = queue.top();
    if (top.ub - lower.value <= tol) break;
    queue.pop();
    ++iterations;
    const double m = 0.5 * (top.lo + top.hi);
    consider(top.lo, m, top.seg_p, top.seg_q, top.ub);
    consider(m, top.hi, top.seg_p, top.seg_q, top.ub);
  }
  double upper = std::max(settled, lower.value);
  if (!queue.empty()) upper = std::max(upper, queue.top().ub);
  DistortionResult result = finish(curve, lower, upper);
  result.iterations = iterations;
  result.boxes_explored = explored;
  return result;
}

SampledDistortion max_corner_limit(const PolyCurve& curve) {
  SampledDistortion best;
  best.p = curve.point_at(0.0);
  best.q = best.p;
  const double L = curve.total_length();
  const std::size_t n = curve.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    if (!curve.closed() && (v == 0 || v + 1 == n)) continue;
    if (!(curve.turning_angle(v) > 0.0)) continue;
    const double before = curve.segment_length(curve.prev_vertex(v));
    const double after = curve.segment_length(v);
    const double a = std::min(before, after);
    const double sv = curve.vertex_arclen(v);
    double s = sv - a;
    double t = sv + a;
    if (curve.closed()) {
      if (s < 0.0) s += L;
      if (t >= L) t -= L;
    }
    const double arc = arc_distance(curve, s, t);
    const double r = ratio_or_inf(arc, distance(curve.position_at(s), curve.position_at(t)));
    if (r > best.value) {
      best.value = r;
      best.p = curve.point_at(s);
      best.q = curve.point_at(t);
      best.i = v;
      best.j = v;
      best.from_corner = true;
    }
  }
  return best;
}

SampledDistortion distortion_sampled(const PolyCurve& curve, std::size_t n_points) {
  if (n_points < 1) throw DomainError("need at least one sample");
  const double L = curve.total_length();
  std::vector<double> s(n_points);
  std::vector<Vec3> x(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double denom = curve.closed() ? static_cast<double>(n_points)
                                        : static_cast<double>(std::max<std::size_t>(n_points - 1, 1));
    s[k] = std::min(L, L * static_cast<double>(k) / denom);
    x[k] = curve.position_at(s[k]);
  }
  SampledDistortion best = max_corner_limit(curve);
  bool have_witness = best.from_corner;
  std::mutex mu;
  parallel_chunks(n_points, [&](std::size_t begin, std::size_t end) {
    double local = -1.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n_points; ++j) {
        const double r = ratio_or_inf(arc_distance(curve, s[i], s[j]), distance(x[i], x[j]));
        if (r > local) {
          local = r;
          bi = i;
          bj = j;
        }
      }
    }
    const std::lock_guard<std::mutex> lock(mu);
    if (local >= 0.0 && (local > best.value || !have_witness)) {
      have_witness = true;
      best.value = local;
      best.i = bi;
      best.j = bj;
      best.p = curve.point_at(s[bi]);
      best.q = curve.point_at(s[bj]);
      best.from_corner = false;
    }
  });
  return best;
}

std::vector<double> vertex_midpoint_arclens(const PolyCurve& curve) {
  std::vector<double> out;
  out.reserve(2 * curve.segment_count() + 1);
  for (std::size_t seg = 0; seg < curve.segment_count(); ++seg) {
    out.push_back(curve.vertex_arclen(seg));
    out.push_back(curve.vertex_arclen(seg) + 0.5 * curve.segment_length(seg));
  }
  if (!curve.closed()) out.push_back(curve.total_length());
  return out;
}

namespace {

struct SampleNode {
  std::size_t lo;
  std::size_t hi;  // exclusive
  int left = -1;
  int right = -1;
  Box3 box;
};

constexpr std::size_t kLeafSize = 8;

int build_nodes(std::vector<SampleNode>& nodes, const std::vector<Vec3>& x, std::size_t lo,
                std::size_t hi) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back(SampleNode{lo, hi, -1, -1, Box3{}});
  if (hi - lo <= kLeafSize) {
    Box3 box;
    for (std::size_t k = lo; k < hi; ++k) box.add(x[k]);
    nodes[id].box = box;
    return id;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const int l = build_nodes(nodes, x, lo, mid);
  const int r = build_nodes(nodes, x, mid, hi);
  nodes[id].left = l;
  nodes[id].right = r;
  Box3 box = nodes[l].box;
  box.add(nodes[r].box);
  nodes[id].box = box;
  return id;
}

}  // namespace

SampledDistortion max_sample_distortion(const PolyCurve& curve, std::span<const double> arclens,
                                        double abort_above,
                                        std::optional<std::pair<std::size_t, std::size_t>> hint) {
  const std::size_t m = arclens.size();
  SampledDistortion best;
  best.p = curve.point_at(m > 0 ? arclens[0] : 0.0);
  best.q = best.p;
  if (m < 2) return best;

  std::vector<Vec3> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = curve.position_at(arclens[k]);

  const double L = curve.total_length();
  const bool closed = curve.closed();
  auto pair_ratio = [&](std::size_t i, std::size_t j) {
    const double g = std::abs(arclens[i] - arclens[j]);
    const double arc = closed ? std::min(g, L - g) : g;
    return ratio_or_inf(arc, distance(x[i], x[j]));
  };

  double best_value = pair_ratio(0, 1);
  std::size_t bi = 0;
  std::size_t bj = 1;
  auto offer = [&](std::size_t i, std::size_t j) {
    const double r = pair_ratio(i, j);
    if (r > best_value) {
      best_value = r;
      bi = i;
      bj = j;
    }
  };
  if (hint && hint->first < m && hint->second < m && hint->first != hint->second) {
    offer(hint->first, hint->second);
  }

  std::vector<SampleNode> nodes;
  nodes.reserve(4 * m / kLeafSize + 4);
  build_nodes(nodes, x, 0, m);

  auto node_arc = [&](const SampleNode& nd) { return ArcInterval{arclens[nd.lo], arclens[nd.hi - 1]}; };

  struct Task {
    int a;
    int b;
  };
  std::vector<Task> stack;
  stack.push_back({0, 0});
  bool aborted = best_value > abort_above;
  while (!stack.empty() && !aborted) {
    const Task task = stack.back();
    stack.pop_back();
    const SampleNode& na = nodes[task.a];
    const SampleNode& nb = nodes[task.b];
    const bool diagonal = task.a == task.b;
    const ArcInterval ia = node_arc(na);
    const ArcInterval ib = node_arc(nb);

    double ub = kInf;
    if (!diagonal) {
      const double gap = box_gap(na.box, nb.box);
      if (gap > 0.0) ub = max_arc_distance(curve, ia, ib) / gap;
    }
    if (ub > best_value) ub = std::min(ub, hull_turning_bound(curve, ia, ib));
    if (ub <= best_value) continue;

    const bool leaf_a = na.left < 0;
    const bool leaf_b = nb.left < 0;
    if (diagonal) {
      if (leaf_a) {
        for (std::size_t i = na.lo; i < na.hi; ++i)
          for (std::size_t j = i + 1; j < na.hi; ++j) offer(i, j);
      } else {
        stack.push_back({na.left, na.right});
        stack.push_back({na.right, na.right});
        stack.push_back({na.left, na.left});
      }
    } else if (leaf_a && leaf_b) {
      for (std::size_t i = na.lo; i < na.hi; ++i)
        for (std::size_t j = nb.lo; j < nb.hi; ++j) offer(i, j);
    } else if (leaf_b || (!leaf_a && na.hi - na.lo >= nb.hi - nb.lo)) {
      stack.push_back({na.left, task.b});
      stack.push_back({na.right, task.b});
    } else {
      stack.push_back({task.a, nb.left});
      stack.push_back({task.a, nb.right});
    }
    aborted = best_value > abort_above;
  }

  best.value = best_value;
  best.i = bi;
  best.j = bj;
  best.p = curve.point_at(arclens[bi]);
  best.q = curve.point_at(arclens[bj]);
  best.aborted = aborted;
  return best;
}

SampledDistortion vertex_midpoint_distortion(
    const PolyCurve& curve, double abort_above,
    std::optional<std::pair<std::size_t, std::size_t>> hint) {
  SampledDistortion corner = max_corner_limit(curve);
  if (corner.value > abort_above) {
    corner.aborted = true;
    return corner;
  }
  const auto arclens = vertex_midpoint_arclens(curve);
  SampledDistortion samples = max_sample_distortion(curve, arclens, abort_above, hint);
  return corner.value > samples.value ? corner : samples;
}

std::vector<ProfileSample> distortion_profile(const PolyCurve& curve, double p0_arclen,
                                              std::size_t n) {
  if (n < 1) throw DomainError("profile needs at least one sample");
  const double L = curve.total_length();
  const CurvePoint p0 = curve.point_at(p0_arclen);
  const Vec3 x0 = curve.position(p0);
  std::vector<ProfileSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double denom = curve.closed() ? static_cast<double>(n)
                                        : static_cast<double>(std::max<std::size_t>(n - 1, 1));
    const double s = std::min(L, L * static_cast<double>(k) / denom);
    const double arc = arc_distance(curve, p0.arclen, s);
    if (!(arc > 0.0)) continue;
    out.push_back({s, ratio_or_inf(arc, distance(x0, curve.position_at(s)))});
  }
  return out;
}

}  // namespace knotdist
