#include "knotdist/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "knotdist/errors.hpp"
#include "knotdist/knots.hpp"

namespace knotdist {

namespace {

struct Ball {
  Vec3 centre;
  double radius = 0.0;
};

/// Ball around the knotted part of an open curve: contains vertices
/// 1..n-2, excludes the outer endpoints 0 and n-1.
Ball anchor_ball(const PolyCurve& curve) {
  const std::size_t n = curve.vertex_count();
  const Vec3 c = lerp(curve.vertex(0), curve.vertex(n - 1), 0.5);
  double inner = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) inner = std::max(inner, distance(curve.vertex(k), c));
  const double outer = std::min(distance(curve.vertex(0), c), distance(curve.vertex(n - 1), c));
  if (!(inner < outer))
    throw DomainError(
        "open curve must have both end vertices outside the ball enclosing its other vertices");
  return {c, 0.5 * (inner + outer)};
}

struct RefinedVertex {
  Vec3 position;
  bool keep;
};

}  // namespace

namespace {
constexpr std::size_t kBlock = 8;
}  // namespace

IncrementalObjective::IncrementalObjective(const PolyCurve& curve)
    : curve_(curve), closed_(curve.closed()) {
  if (!is_simple(curve)) throw GeometryError("objective needs a simple curve");
  samples_ = 2 * curve.segment_count() + (closed_ ? 0 : 1);
  blocks_ = (samples_ + kBlock - 1) / kBlock;
  rebuild();
}

std::size_t IncrementalObjective::pair_slot(std::size_t a, std::size_t b) const {
  return a <= b ? a * blocks_ + b : b * blocks_ + a;
}

void IncrementalObjective::lay_out(const std::vector<Vec3>& verts, std::vector<Vec3>& x,
                                   std::vector<double>& s, double& length) const {
  const std::size_t n = verts.size();
  const std::size_t segs = closed_ ? n : n - 1;
  x.resize(samples_);
  s.resize(samples_);
  double cum = 0.0;
  for (std::size_t i = 0; i < segs; ++i) {
    const Vec3& a = verts[i];
    const Vec3& b = verts[i + 1 == n ? 0 : i + 1];
    const double len = distance(a, b);
    x[2 * i] = a;
    s[2 * i] = cum;
    x[2 * i + 1] = lerp(a, b, 0.5);
    s[2 * i + 1] = cum + 0.5 * len;
    cum += len;
  }
  if (!closed_) {
    x[samples_ - 1] = verts[n - 1];
    s[samples_ - 1] = cum;
  }
  length = cum;
}

IncrementalObjective::Block IncrementalObjective::evaluate_block_pair(
    std::size_t a, std::size_t b, const std::vector<Vec3>& x, const std::vector<double>& s,
    double length) const {
  const std::size_t a_end = std::min(samples_, (a + 1) * kBlock);
  const std::size_t b_end = std::min(samples_, (b + 1) * kBlock);
  Block out{1.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = a * kBlock; i < a_end; ++i) {
    for (std::size_t j = a == b ? i + 1 : b * kBlock; j < b_end; ++j) {
      const double g = std::abs(s[i] - s[j]);
      const double arc = closed_ ? std::min(g, length - g) : g;
      const double chord = distance(x[i], x[j]);
      out.min_chord = std::min(out.min_chord, chord);
      const double r = chord > 0.0 ? arc / chord : std::numeric_limits<double>::infinity();
      out.ratio_bound = std::max(out.ratio_bound, r);
    }
  }
  return out;
}

double IncrementalObjective::corner_limit_at(const std::vector<Vec3>& verts, std::size_t i,
                                             double length) const {
  const std::size_t n = verts.size();
  if (!closed_ && (i == 0 || i + 1 == n)) return 1.0;
  const Vec3& v = verts[i];
  const Vec3& prev = verts[i == 0 ? n - 1 : i - 1];
  const Vec3& next = verts[i + 1 == n ? 0 : i + 1];
  const double before = distance(prev, v);
  const double after = distance(v, next);
  const double a = std::min(before, after);
  const Vec3 p = lerp(v, prev, a / before);
  const Vec3 q = lerp(v, next, a / after);
  const double chord = distance(p, q);
  const double arc = closed_ ? std::min(2.0 * a, length - 2.0 * a) : 2.0 * a;
  return chord > 0.0 ? std::max(1.0, arc / chord) : std::numeric_limits<double>::infinity();
}

bool IncrementalObjective::corners_depend_on_length(const std::vector<Vec3>& verts,
                                                    double length) const {
  if (!closed_) return false;
  const std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::min(distance(verts[i == 0 ? n - 1 : i - 1], verts[i]),
                              distance(verts[i], verts[i + 1 == n ? 0 : i + 1]));
    if (4.0 * a > 0.5 * length) return true;
  }
  return false;
}

void IncrementalObjective::rebuild() {
  const auto& verts = curve_.vertices();
  lay_out(verts, x_, s_, length_);
  pairs_.assign(blocks_ * blocks_, Block{1.0, std::numeric_limits<double>::infinity()});
  value_ = 1.0;
  for (std::size_t a = 0; a < blocks_; ++a) {
    for (std::size_t b = a; b < blocks_; ++b) {
      pairs_[pair_slot(a, b)] = evaluate_block_pair(a, b, x_, s_, length_);
      value_ = std::max(value_, pairs_[pair_slot(a, b)].ratio_bound);
    }
  }
  corners_.assign(verts.size(), 1.0);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    corners_[i] = corner_limit_at(verts, i, length_);
    value_ = std::max(value_, corners_[i]);
  }
  // A corner's arc wraps around the curve only when its segments are long
  // compared with the whole curve; then every corner follows the length.
  all_corners_ = corners_depend_on_length(verts, length_);
  pending_complete_ = false;
}

std::optional<double> IncrementalObjective::evaluate_move(std::size_t index, const Vec3& position,
                                                          double abort_above) {
  pending_complete_ = false;
  const std::size_t n = curve_.vertex_count();
  if (index >= n) throw DomainError("vertex index out of range");
  pending_index_ = index;
  pending_verts_ = curve_.vertices();
  pending_verts_[index] = position;
  lay_out(pending_verts_, pending_x_, pending_s_, pending_length_);

  // Changed samples: the vertex and the midpoints of its incident segments.
  const bool has_prev = closed_ || index > 0;
  const bool has_next = closed_ || index + 1 < n;
  std::size_t changed[3];
  std::size_t n_changed = 0;
  changed[n_changed++] = 2 * index;
  double shift = 0.0;
  if (has_prev) {
    const std::size_t seg = curve_.prev_vertex(index);
    changed[n_changed++] = 2 * seg + 1;
    shift += std::abs(distance(pending_verts_[seg], position) - curve_.segment_length(seg));
  }
  if (has_next) {
    changed[n_changed++] = 2 * index + 1;
    shift += std::abs(distance(position, pending_verts_[curve_.next_vertex(index)]) -
                      curve_.segment_length(index));
  }
  // Arc distances between untouched samples move by at most `shift`; the
  // slack covers the rounding of the recomputed cumulative sums.
  shift = shift * (1.0 + 1e-12) + 1e-14 * pending_length_;
  pending_shift_ = shift;

  std::vector<char> touched(blocks_, 0);
  for (std::size_t k = 0; k < n_changed; ++k) touched[changed[k] / kBlock] = 1;

  pending_exact_.clear();
  double best = 1.0;
  for (std::size_t a = 0; a < blocks_; ++a) {
    if (!touched[a]) continue;
    for (std::size_t b = 0; b < blocks_; ++b) {
      if (touched[b] && b < a) continue;
      const Block blk = evaluate_block_pair(a, b, pending_x_, pending_s_, pending_length_);
      pending_exact_.push_back({pair_slot(a, b), blk});
      best = std::max(best, blk.ratio_bound);
    }
    if (best > abort_above) return std::nullopt;
  }

  pending_corners_ = corners_;
  pending_all_corners_ = all_corners_ || corners_depend_on_length(pending_verts_, pending_length_);
  if (pending_all_corners_) {
    for (std::size_t i = 0; i < n; ++i)
      pending_corners_[i] = corner_limit_at(pending_verts_, i, pending_length_);
  } else {
    for (std::size_t i : {curve_.prev_vertex(index), index, curve_.next_vertex(index)})
      pending_corners_[i] = corner_limit_at(pending_verts_, i, pending_length_);
  }
  best = std::max(best, *std::max_element(pending_corners_.begin(), pending_corners_.end()));
  if (best > abort_above) return std::nullopt;

  for (std::size_t a = 0; a < blocks_; ++a) {
    if (touched[a]) continue;
    for (std::size_t b = a; b < blocks_; ++b) {
      if (touched[b]) continue;
      const std::size_t slot = a * blocks_ + b;
      const Block& old = pairs_[slot];
      if (old.ratio_bound + shift / old.min_chord <= best) continue;
      const Block blk = evaluate_block_pair(a, b, pending_x_, pending_s_, pending_length_);
      pending_exact_.push_back({slot, blk});
      best = std::max(best, blk.ratio_bound);
      if (best > abort_above) return std::nullopt;
    }
  }
  pending_value_ = best;
  pending_complete_ = true;
  return best;
}

void IncrementalObjective::commit() {
  if (!pending_complete_) throw DomainError("no completed evaluation to commit");
  for (Block& blk : pairs_) blk.ratio_bound += pending_shift_ / blk.min_chord;
  for (const auto& [slot, blk] : pending_exact_) pairs_[slot] = blk;
  curve_ = PolyCurve(pending_verts_, closed_);
  x_.swap(pending_x_);
  s_.swap(pending_s_);
  length_ = pending_length_;
  corners_.swap(pending_corners_);
  all_corners_ = corners_depend_on_length(curve_.vertices(), length_);
  value_ = pending_value_;
  pending_complete_ = false;
}

void validate(const AnnealConfig& config) {
  if (!(config.initial_temp >= 0.0) || !std::isfinite(config.initial_temp))
    throw DomainError("initial_temp must be a finite non-negative ratio");
  if (!(config.cooling > 0.0 && config.cooling < 1.0))
    throw DomainError("cooling must lie in (0, 1)");
  if (!(config.step_scale > 0.0 && config.step_scale <= 0.5))
    throw DomainError("step_scale must lie in (0, 0.5]");
  if (config.epochs < 1) throw DomainError("epochs must be at least 1");
  if (config.resample_every < 1) throw DomainError("resample_every must be at least 1");
  if (config.certify_every < 1) throw DomainError("certify_every must be at least 1");
  if (!(config.certify_tol > 0.0) || !std::isfinite(config.certify_tol))
    throw DomainError("certify_tol must be positive");
}

double objective(const PolyCurve& curve) { return vertex_midpoint_distortion(curve).value; }

MoveProposal propose_move(const PolyCurve& curve, std::mt19937_64& rng, const AnnealConfig& config,
                          double temperature_fraction, const std::vector<std::size_t>& movable) {
  const std::size_t n = curve.vertex_count();
  std::size_t v = 0;
  if (movable.empty()) {
    v = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  } else {
    v = movable[std::uniform_int_distribution<std::size_t>(0, movable.size() - 1)(rng)];
  }
  double edge_sum = 0.0;
  int edges = 0;
  if (curve.closed() || v > 0) {
    edge_sum += curve.segment_length(curve.prev_vertex(v));
    ++edges;
  }
  if (curve.closed() || v + 1 < n) {
    edge_sum += curve.segment_length(v);
    ++edges;
  }
  const double sigma = config.step_scale * (edge_sum / edges) * temperature_fraction;
  std::normal_distribution<double> gauss(0.0, sigma);
  const double dx = gauss(rng);
  const double dy = gauss(rng);
  const double dz = gauss(rng);
  return {v, curve.vertex(v) + Vec3{dx, dy, dz}};
}

std::optional<PolyCurve> resample_step(const PolyCurve& curve, std::size_t n) {
  const bool closed = curve.closed();
  const std::size_t m = curve.vertex_count();
  if (closed && n < 3) throw DomainError("resampling a closed curve needs n >= 3");
  if (!closed && (n < 4 || m < 4)) throw DomainError("resampling an open curve needs n >= 4");

  // Target arclengths.
  const double L = curve.total_length();
  std::vector<double> targets;
  double lo = 0.0;
  double hi = L;
  if (closed) {
    for (std::size_t k = 0; k < n; ++k) targets.push_back(L * static_cast<double>(k) / n);
  } else {
    lo = curve.vertex_arclen(1);
    hi = curve.vertex_arclen(m - 2);
    const std::size_t inner = n - 2;
    for (std::size_t k = 0; k < inner; ++k)
      targets.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(inner - 1));
  }

  // Merge old vertices and targets into one refinement of the same curve.
  const double snap = 1e-12 * L;
  std::vector<RefinedVertex> refined;
  std::size_t ti = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double s = curve.vertex_arclen(k);
    const double seg_end = k + 1 < m ? curve.vertex_arclen(k + 1) : (closed ? L : s);
    bool keep = !closed && (k == 0 || k + 1 == m);
    if (ti < targets.size() && std::abs(targets[ti] - s) <= snap) {
      keep = true;
      ++ti;
    }
    refined.push_back({curve.vertex(k), keep});
    while (ti < targets.size() && targets[ti] < seg_end - snap) {
      if (targets[ti] > s) refined.push_back({curve.position_at(targets[ti]), true});
      ++ti;
    }
  }
  if (ti != targets.size()) return std::nullopt;

  std::vector<Vec3> verts;
  verts.reserve(refined.size());
  for (const auto& r : refined) verts.push_back(r.position);
  try {
    PolyCurve current(verts, closed);
    const double clear = default_clearance(curve);
    // Straighten out the old vertices one at a time.
    std::size_t k = 0;
    while (k < refined.size()) {
      if (refined[k].keep) {
        ++k;
        continue;
      }
      const Vec3 mid = lerp(verts[current.prev_vertex(k)], verts[current.next_vertex(k)], 0.5);
      if (!isotopy_safe_move(current, k, mid, clear)) return std::nullopt;
      verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(k));
      refined.erase(refined.begin() + static_cast<std::ptrdiff_t>(k));
      current = PolyCurve(verts, closed);
    }
    if (current.vertex_count() != n || !is_simple(current)) return std::nullopt;
    return current;
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

OptimizeTrace minimize_distortion(const PolyCurve& curve, const AnnealConfig& config,
                                  const CertifyCallback& on_certify) {
  validate(config);
  if (!is_simple(curve)) throw GeometryError("cannot optimize a non-simple curve");
  const std::size_t n = curve.vertex_count();
  const bool closed = curve.closed();

  std::vector<std::size_t> movable;
  std::optional<Ball> ball;
  if (!closed) {
    if (n < 6) throw DomainError("optimizing an open curve needs at least 6 vertices");
    ball = anchor_ball(curve);
    for (std::size_t k = 2; k + 2 < n; ++k) movable.push_back(k);
  }

  CertifyOptions certify;
  certify.tol = config.certify_tol;
  certify.assume_simple = true;

  OptimizeTrace trace{{}, curve, {}, {}, 0, 0, 0, 0, 0};
  trace.initial = distortion_certified(curve, certify);
  trace.best = trace.initial;

  const double t0 = config.initial_temp * trace.initial.upper;
  const std::size_t steps = config.steps_per_epoch > 0 ? config.steps_per_epoch : 50 * n;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  IncrementalObjective state(curve);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double fraction = std::pow(config.cooling, static_cast<double>(epoch));
    const double temp = t0 * fraction;
    std::size_t accepted = 0;
    for (std::size_t step = 0; step < steps; ++step) {
      ++trace.proposed;
      const MoveProposal move = propose_move(state.curve(), rng, config, fraction, movable);
      if (ball && distance(move.position, ball->centre) > ball->radius) {
        ++trace.rejected_isotopy;
        continue;
      }
      if (!isotopy_safe_move(state.curve(), move.vertex, move.position)) {
        ++trace.rejected_isotopy;
        continue;
      }
      // Metropolis test against a pre-drawn threshold so that evaluation can
      // stop as soon as the candidate is known to be rejected.
      const double u = 1.0 - unit(rng);
      const double value = state.value();
      const double threshold = temp > 0.0 ? value - temp * std::log(u) : value;
      const std::optional<double> cand = state.evaluate_move(move.vertex, move.position, threshold);
      if (!cand) continue;
      const bool accept = temp > 0.0 ? *cand <= threshold : *cand < value;
      if (!accept) continue;
      state.commit();
      ++accepted;
      ++trace.accepted;
    }

    if (config.resample_every > 0 && (epoch + 1) % config.resample_every == 0) {
      std::optional<PolyCurve> resampled = resample_step(state.curve(), n);
      std::optional<IncrementalObjective> next;
      if (resampled) next.emplace(*resampled);
      // The greedy limit never accepts a worse surrogate, resampling included.
      if (next && (t0 > 0.0 || next->value() <= state.value())) {
        state = std::move(*next);
        ++trace.resamples_applied;
      } else {
        ++trace.resamples_rejected;
      }
    } else {
      // Refresh the cached block bounds, which only grow between rebuilds.
      state = IncrementalObjective(state.curve());
    }
    const PolyCurve& current = state.curve();
    const double value = state.value();

    EpochRecord record;
    record.epoch = epoch;
    record.temperature = temp;
    record.sampled = value;
    record.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(steps);
    if ((epoch + 1) % config.certify_every == 0 || epoch + 1 == config.epochs) {
      const DistortionResult result = distortion_certified(current, certify);
      record.certified = result.upper;
      if (result.upper < trace.best.upper) {
        trace.best = result;
        trace.best_curve = current;
      }
      if (on_certify) on_certify(epoch, current, result);
    }
    record.best_certified = trace.best.upper;
    trace.epochs.push_back(record);
  }
  return trace;
}

}  // namespace knotdist
