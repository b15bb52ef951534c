#include "knotdist/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>

#include "knotdist/bounds.hpp"
#include "knotdist/errors.hpp"
#include "knotdist/parallel.hpp"

namespace knotdist {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Icosahedral geodesic grid.

struct SphereGrid {
  std::vector<Vec3> nodes;
  std::vector<std::uint32_t> offsets;  // CSR, size nodes+1
  std::vector<std::uint32_t> targets;
};

std::array<Vec3, 12> icosahedron_vertices() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::array<Vec3, 12> v{{{0, 1, phi},
                          {0, -1, phi},
                          {0, 1, -phi},
                          {0, -1, -phi},
                          {1, phi, 0},
                          {-1, phi, 0},
                          {1, -phi, 0},
                          {-1, -phi, 0},
                          {phi, 0, 1},
                          {-phi, 0, 1},
                          {phi, 0, -1},
                          {-phi, 0, -1}}};
  for (Vec3& x : v) x = normalized(x);
  return v;
}

std::vector<std::array<int, 3>> icosahedron_faces(const std::array<Vec3, 12>& v) {
  // Faces are the vertex triples that are pairwise at edge distance.
  const double edge = distance(v[0], v[1]);
  auto adjacent = [&](int i, int j) { return std::abs(distance(v[i], v[j]) - edge) < 1e-9; };
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      for (int k = j + 1; k < 12; ++k)
        if (adjacent(i, j) && adjacent(j, k) && adjacent(i, k)) faces.push_back({i, j, k});
  return faces;
}

/// Primitive lattice steps of squared hexagonal norm at most 16, one of each
/// +/- pair.
std::vector<std::pair<int, int>> lattice_directions() {
  std::vector<std::pair<int, int>> dirs;
  for (int di = -4; di <= 4; ++di) {
    for (int dj = -4; dj <= 4; ++dj) {
      if (di == 0 && dj == 0) continue;
      if (di * di + di * dj + dj * dj > 16) continue;
      if (std::gcd(std::abs(di), std::abs(dj)) != 1) continue;
      if (di < 0 || (di == 0 && dj < 0)) continue;  // keep one sign
      dirs.emplace_back(di, dj);
    }
  }
  return dirs;
}

std::shared_ptr<const SphereGrid> build_grid(std::size_t k) {
  const auto verts = icosahedron_vertices();
  const auto faces = icosahedron_faces(verts);
  const auto dirs = lattice_directions();
  const int K = static_cast<int>(k);

  // Canonical node key: nonzero (vertex, weight) pairs sorted by vertex.
  using Key = std::array<int, 6>;
  std::map<Key, std::uint32_t> index;
  auto grid = std::make_shared<SphereGrid>();
  std::vector<std::vector<std::uint32_t>> face_ids(faces.size());
  auto local = [K](int i, int j) { return static_cast<std::size_t>(i * (K + 1) - i * (i - 1) / 2 + j); };

  for (std::size_t f = 0; f < faces.size(); ++f) {
    face_ids[f].resize(static_cast<std::size_t>((K + 1) * (K + 2) / 2));
    for (int i = 0; i <= K; ++i) {
      for (int j = 0; i + j <= K; ++j) {
        std::array<std::pair<int, int>, 3> w{{{faces[f][0], K - i - j}, {faces[f][1], i}, {faces[f][2], j}}};
        std::sort(w.begin(), w.end());
        Key key{-1, 0, -1, 0, -1, 0};
        int slot = 0;
        Vec3 p{0, 0, 0};
        for (const auto& [vid, wt] : w) {
          if (wt == 0) continue;
          key[2 * slot] = vid;
          key[2 * slot + 1] = wt;
          ++slot;
          p = p + verts[vid] * static_cast<double>(wt);
        }
        auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(grid->nodes.size()));
        if (inserted) grid->nodes.push_back(normalized(p));
        face_ids[f][local(i, j)] = it->second;
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> adj(grid->nodes.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int i = 0; i <= K; ++i) {
      for (int j = 0; i + j <= K; ++j) {
        for (const auto& [di, dj] : dirs) {
          const int i2 = i + di;
          const int j2 = j + dj;
          if (i2 < 0 || j2 < 0 || i2 + j2 > K) continue;
          const std::uint32_t u = face_ids[f][local(i, j)];
          const std::uint32_t v = face_ids[f][local(i2, j2)];
          adj[u].push_back(v);
          adj[v].push_back(u);
        }
      }
    }
  }
  grid->offsets.assign(grid->nodes.size() + 1, 0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    auto& list = adj[u];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    grid->offsets[u + 1] = grid->offsets[u] + static_cast<std::uint32_t>(list.size());
  }
  grid->targets.reserve(grid->offsets.back());
  for (const auto& list : adj) grid->targets.insert(grid->targets.end(), list.begin(), list.end());
  return grid;
}

std::shared_ptr<const SphereGrid> grid_for(std::size_t k) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const SphereGrid>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  auto grid = build_grid(k);
  cache.emplace(k, grid);
  return grid;
}

/// Great-circle distance between unit vectors, accurate for small angles.
double arc_between(const Vec3& p, const Vec3& q) {
  return 2.0 * std::asin(std::min(1.0, 0.5 * distance(p, q)));
}

// ---------------------------------------------------------------------------
// Verification framework.

struct Axis {
  std::string name;
  double lo;
  double hi;
};

using MarginFn = std::function<double(const std::vector<double>&)>;

struct Worst {
  double margin = kInf;
  std::vector<double> point;
};

void scan_grid(const std::vector<Axis>& axes, std::size_t per_axis, const MarginFn& fn, Worst& worst) {
  const std::size_t dims = axes.size();
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> x(dims);
  while (true) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double frac = per_axis > 1 ? static_cast<double>(idx[d]) / (per_axis - 1) : 0.0;
      x[d] = idx[d] + 1 == per_axis ? axes[d].hi : axes[d].lo + (axes[d].hi - axes[d].lo) * frac;
    }
    const double m = fn(x);
    if (m < worst.margin) {
      worst.margin = m;
      worst.point = x;
    }
    std::size_t d = 0;
    while (d < dims && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == dims) break;
  }
}

/// Tensor grid with `per_axis` points per axis, then the same grid once more
/// on the cell neighbourhood of the worst point.
Worst refine_search(const std::vector<Axis>& axes, std::size_t per_axis, const MarginFn& fn) {
  Worst worst;
  scan_grid(axes, per_axis, fn, worst);
  if (worst.point.empty()) return worst;
  std::vector<Axis> local = axes;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const double h = (axes[d].hi - axes[d].lo) / static_cast<double>(std::max<std::size_t>(per_axis - 1, 1));
    local[d].lo = std::max(axes[d].lo, worst.point[d] - h);
    local[d].hi = std::min(axes[d].hi, worst.point[d] + h);
  }
  scan_grid(local, per_axis, fn, worst);
  return worst;
}

std::size_t per_axis_for(std::size_t density, std::size_t dims) {
  const double root = std::pow(static_cast<double>(density), 1.0 / static_cast<double>(dims));
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(root)));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string describe(const std::vector<Axis>& axes, std::size_t per_axis) {
  std::string out;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    if (d) out += " x ";
    out += axes[d].name + " in [" + fmt(axes[d].lo) + ", " + fmt(axes[d].hi) + "]";
  }
  out += ", " + std::to_string(per_axis) + " points per axis + 1 refinement";
  return out;
}

/// Accumulates sub-checks of one suite into a report.
class SuiteBuilder {
 public:
  explicit SuiteBuilder(std::string name) { report_.suite = std::move(name); }

  void grid(const std::string& label, const std::vector<Axis>& axes, std::size_t density,
            const MarginFn& fn) {
    const std::size_t per = per_axis_for(density, axes.size());
    const Worst w = refine_search(axes, per, fn);
    std::vector<std::pair<std::string, double>> point;
    for (std::size_t d = 0; d < axes.size(); ++d) point.emplace_back(axes[d].name, w.point[d]);
    add(label + ": " + describe(axes, per), w.margin, std::move(point));
  }

  void add(const std::string& spec, double margin, std::vector<std::pair<std::string, double>> point) {
    if (!report_.grid_spec.empty()) report_.grid_spec += "; ";
    report_.grid_spec += spec;
    if (first_ || margin < report_.worst_margin) {
      report_.worst_margin = margin;
      report_.worst_point = std::move(point);
      first_ = false;
    }
  }

  VerifyReport finish() {
    report_.passed = report_.worst_margin >= kVerifyFailMargin;
    return report_;
  }

 private:
  VerifyReport report_;
  bool first_ = true;
};

double m1(double s, double theta) { return ball_avoiding_length_any_start(s, theta).value; }

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    const Vec3 v{g(rng), g(rng), g(rng)};
    const double n = norm(v);
    if (n > 1e-6) return v / n;
  }
}

VerifyReport suite_m_oracle(std::size_t density) {
  const std::size_t resolution = density ? density : 128;
  constexpr std::size_t kSamples = 50;
  SuiteBuilder sb("m-oracle");
  std::mt19937_64 rng(20240517);
  std::uniform_real_distribution<double> radius(1.0, 4.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  double worst = kInf;
  std::vector<std::pair<std::string, double>> point;
  for (std::size_t k = 0; k < kSamples; ++k) {
    const double r = radius(rng);
    const double s = radius(rng);
    const double theta = angle(rng);
    const Vec3 u = random_unit(rng);
    Vec3 w = random_unit(rng);
    w = normalized(w - u * dot(w, u));
    const Vec3 a = u * r;
    const Vec3 b = (u * std::cos(theta) + w * std::sin(theta)) * s;
    const double exact = ball_avoiding_length(r, s, theta).value;
    const double graph = shortest_path_outside_ball(a, b, resolution);
    // graph >= m (the graph path is a real path) and graph <= 1.01 m.
    const double margin = std::min(graph - exact, 0.01 * exact - (graph - exact));
    if (margin < worst) {
      worst = margin;
      point = {{"r", r}, {"s", s}, {"theta", theta}, {"relative_gap", (graph - exact) / exact}};
    }
  }
  sb.add(std::to_string(kSamples) + " random (r, s, theta) in [1,4]x[1,4]x[0,pi], resolution " +
             std::to_string(resolution),
         worst, std::move(point));
  return sb.finish();
}

VerifyReport suite_lemma_min_arcs(std::size_t density) {
  const std::size_t arcs = density ? density : 200;
  SuiteBuilder sb("lemma-min-arcs");
  double worst = kInf;
  std::vector<std::pair<std::string, double>> point;
  for (std::size_t k = 0; k < arcs; ++k) {
    const PolyCurve arc = random_arc_outside_ball(1000 + k, 2 + k % 8);
    const Vec3& a = arc.vertex(0);
    const Vec3& b = arc.vertex(arc.vertex_count() - 1);
    const double theta = angle_between(a, b);
    const double bound = m1(norm(b), theta);
    const double margin = arc.total_length() - bound;
    if (margin < worst) {
      worst = margin;
      point = {{"|b|", norm(b)}, {"theta", theta}, {"length", arc.total_length()}};
    }
  }
  sb.add(std::to_string(arcs) + " random arcs outside the unit ball", worst, std::move(point));
  return sb.finish();
}

VerifyReport suite_prop3_large_beta(std::size_t density) {
  SuiteBuilder sb("prop3-large-beta");
  sb.grid("2 sin 2b + 4 sin b >= 4", {{"beta", kPi / 3.0, kPi / 2.0}}, density ? density : 10000,
          [](const std::vector<double>& x) {
            return 2.0 * std::sin(2.0 * x[0]) + 4.0 * std::sin(x[0]) - 4.0;
          });
  return sb.finish();
}

VerifyReport suite_prop3_small_beta(std::size_t density) {
  SuiteBuilder sb("prop3-small-beta");
  const double base = std::sqrt(3.0) + 2.0 * kPi / 3.0;
  sb.grid("sqrt3 + 2pi/3 - 2b + 4 sin b >= sqrt3 + 2pi/3", {{"beta", 0.0, kPi / 3.0}},
          density ? density : 10000, [base](const std::vector<double>& x) {
            return (base - 2.0 * x[0] + 4.0 * std::sin(x[0])) - base;
          });
  return sb.finish();
}

VerifyReport suite_prop3_constant(std::size_t) {
  SuiteBuilder sb("prop3-constant");
  const double v = m1(2.0, kPi);
  sb.add("4 > m1(2, pi)", 4.0 - v - kStrictGap, {{"m1(2,pi)", v}});
  sb.add("|m1(2, pi) - 3.826| < 5e-4", 5e-4 - std::abs(v - 3.826) - kStrictGap, {{"m1(2,pi)", v}});
  return sb.finish();
}

VerifyReport suite_thm5_angle_max(std::size_t density) {
  SuiteBuilder sb("thm5-angle-max");
  sb.grid("angle(a0b) <= 2 arcsin(t/2) for |a-b| = t",
          {{"t", 1e-6, 2.0}, {"|a|", 1.0, 4.0}, {"|b|", 1.0, 4.0}}, density ? density : 1000000,
          [](const std::vector<double>& x) {
            const double t = x[0];
            const double r = x[1];
            const double s = x[2];
            if (std::abs(r - s) > t || t > r + s) return kInf;  // not realizable
            // Law of cosines in half-angle form, accurate for small t.
            const double h = (t * t - (r - s) * (r - s)) / (4.0 * r * s);
            const double angle = 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
            return 2.0 * std::asin(t / 2.0) - angle;
          });
  return sb.finish();
}

VerifyReport suite_thm5_theta_large(std::size_t density) {
  SuiteBuilder sb("thm5-theta-large");
  const std::size_t n = density ? density : 10000;
  sb.grid("theta + 2 sin theta >= pi", {{"theta", kPi / 2.0, kPi}}, n,
          [](const std::vector<double>& x) { return x[0] + 2.0 * std::sin(x[0]) - kPi; });
  sb.grid("2pi/3 + sqrt3 - t > pi - 2 arcsin(t/2)", {{"t", 1e-9, 2.0}}, n,
          [](const std::vector<double>& x) {
            return 2.0 * kPi / 3.0 + std::sqrt(3.0) - x[0] - (kPi - 2.0 * std::asin(x[0] / 2.0)) -
                   kStrictGap;
          });
  return sb.finish();
}

VerifyReport suite_thm5_theta_small(std::size_t density) {
  SuiteBuilder sb("thm5-theta-small");
  const std::size_t n3 = density ? density : 1000000;
  // x = |x| e1, c = |c| (cos theta, sin theta, 0), a = -c/|c|.
  auto parts = [](const std::vector<double>& p) {
    const double c = p[0];
    const double x = p[1];
    const double th = p[2];
    const Vec3 xv{x, 0, 0};
    const Vec3 cv{c * std::cos(th), c * std::sin(th), 0};
    const Vec3 av{-std::cos(th), -std::sin(th), 0};
    return std::array<double, 3>{distance(xv, cv), distance(xv, av), std::sin(th)};
  };
  const std::vector<Axis> axes{{"|c|", 1.0, 3.0}, {"|x|", 2.0, 5.0}, {"theta", 0.0, kPi / 2.0}};
  sb.grid("d/dtheta (|x-c| + |x-a|) >= 0", axes, n3, [parts](const std::vector<double>& p) {
    const auto [xc, xa, sn] = parts(p);
    const double c = p[0];
    const double x = p[1];
    return x * c * sn / xc - x * sn / xa;
  });
  sb.grid("|x-c| + |x-a| >= (|x|-|c|) + (|x|+1)", axes, n3, [parts](const std::vector<double>& p) {
    const auto [xc, xa, sn] = parts(p);
    (void)sn;
    return xc + xa - ((p[1] - p[0]) + (p[1] + 1.0));
  });
  sb.grid("pi/2 + 5 - t > 2pi - 2 arcsin(t/2)", {{"t", 1e-9, 2.0}}, density ? density : 10000,
          [](const std::vector<double>& x) {
            return kPi / 2.0 + 5.0 - x[0] - (2.0 * kPi - 2.0 * std::asin(x[0] / 2.0)) - kStrictGap;
          });
  return sb.finish();
}

VerifyReport suite_remark_quarter(std::size_t density) {
  SuiteBuilder sb("remark-quarter");
  const std::size_t n = density ? density : 10000;
  sb.grid("m1(s, pi) > sqrt(s^2+1) + pi/2", {{"s", 1.0, 100.0}}, n,
          [](const std::vector<double>& x) {
            return m1(x[0], kPi) - quarter_circle_detour_length(x[0]) - kStrictGap;
          });
  sb.grid("m1(s, pi) > s + pi/2", {{"s", 1.0, 100.0}}, n, [](const std::vector<double>& x) {
    return m1(x[0], kPi) - (x[0] + kPi / 2.0) - kStrictGap;
  });
  return sb.finish();
}

using SuiteFn = VerifyReport (*)(std::size_t);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table{
      {"m-oracle", suite_m_oracle},
      {"lemma-min-arcs", suite_lemma_min_arcs},
      {"prop3-large-beta", suite_prop3_large_beta},
      {"prop3-small-beta", suite_prop3_small_beta},
      {"prop3-constant", suite_prop3_constant},
      {"thm5-angle-max", suite_thm5_angle_max},
      {"thm5-theta-large", suite_thm5_theta_large},
      {"thm5-theta-small", suite_thm5_theta_small},
      {"remark-quarter", suite_remark_quarter},
  };
  return table;
}

}  // namespace

double shortest_path_outside_ball(const Vec3& a, const Vec3& b, std::size_t resolution) {
  if (resolution == 0) throw DomainError("resolution must be positive");
  if (!(norm(a) >= 1.0) || !(norm(b) >= 1.0))
    throw DomainError("endpoints must lie outside the open unit ball");
  if (point_segment_distance({0, 0, 0}, a, b) >= 1.0) return distance(a, b);

  const auto grid = grid_for(resolution);
  const std::size_t n = grid->nodes.size();
  const Vec3 ah = normalized(a);
  const Vec3 bh = normalized(b);
  // Node ids: grid nodes, then the projections, then the endpoints.
  const std::size_t id_ah = n;
  const std::size_t id_bh = n + 1;
  const std::size_t id_a = n + 2;
  const std::size_t id_b = n + 3;
  constexpr double kCapAngle = kPi / 2.0;  // projections link to nodes this close

  std::vector<double> dist(n + 4, kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  auto relax = [&](std::size_t v, double d) {
    if (d < dist[v]) {
      dist[v] = d;
      queue.push({d, v});
    }
  };
  dist[id_a] = 0.0;
  queue.push({0.0, id_a});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (u == id_b) return d;
    if (u == id_a) {
      relax(id_ah, d + norm(a) - 1.0);
      if (dot(a, bh) >= 1.0) relax(id_bh, d + distance(a, bh));
      for (std::size_t p = 0; p < n; ++p)
        if (dot(a, grid->nodes[p]) >= 1.0) relax(p, d + distance(a, grid->nodes[p]));
    } else if (u == id_ah) {
      relax(id_bh, d + arc_between(ah, bh));
      if (dot(ah, b) >= 1.0) relax(id_b, d + distance(ah, b));
      for (std::size_t p = 0; p < n; ++p) {
        const double t = arc_between(ah, grid->nodes[p]);
        if (t <= kCapAngle) relax(p, d + t);
      }
    } else if (u == id_bh) {
      relax(id_b, d + norm(b) - 1.0);
    } else {
      const Vec3& p = grid->nodes[u];
      for (std::uint32_t e = grid->offsets[u]; e < grid->offsets[u + 1]; ++e) {
        const std::uint32_t v = grid->targets[e];
        relax(v, d + arc_between(p, grid->nodes[v]));
      }
      if (dot(b, p) >= 1.0) relax(id_b, d + distance(p, b));
      const double t = arc_between(p, bh);
      if (t <= kCapAngle) relax(id_bh, d + t);
    }
  }
  return dist[id_b];
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suite_table()) out.push_back(name);
    return out;
  }();
  return names;
}

VerifyReport verify_suite(std::string_view suite, std::size_t grid_density) {
  for (const auto& [name, fn] : suite_table())
    if (name == suite) return fn(grid_density);
  throw DomainError("unknown verify suite: " + std::string(suite));
}

std::vector<VerifyReport> verify_all() {
  const auto& table = suite_table();
  std::vector<VerifyReport> reports(table.size());
  parallel_chunks(table.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) reports[k] = table[k].second(0);
  });
  return reports;
}

PolyCurve random_arc_outside_ball(std::uint64_t seed, std::size_t steps) {
  if (steps < 2) throw DomainError("random arc needs at least 2 steps");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(1.0, 3.0);
  std::normal_distribution<double> g(0.0, 0.8);
  const Vec3 origin{0, 0, 0};
  std::vector<Vec3> v;
  v.push_back(random_unit(rng) * radius(rng));
  for (std::size_t k = 0; k < steps; ++k) {
    const Vec3 prev = v.back();
    Vec3 next = prev * 1.5;  // radial fallback, always admissible
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const Vec3 cand = prev + Vec3{g(rng), g(rng), g(rng)};
      if (cand == prev || norm(cand) < 1.0) continue;
      if (point_segment_distance(origin, prev, cand) < 1.0) continue;
      next = cand;
      break;
    }
    v.push_back(next);
  }
  return PolyCurve(std::move(v), false);
}

}  // namespace knotdist
