#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "knotdist/distortion.hpp"
#include "knotdist/geometry.hpp"

namespace knotdist {

struct AnnealConfig {
  /// Starting temperature as a fraction of the initial certified distortion;
  /// 0 gives a greedy search accepting only strict improvements.
  double initial_temp = 2.5e-4;
  /// Per-epoch temperature factor, in (0, 1).
  double cooling = 0.95;
  /// Moves per epoch; 0 selects 50 times the vertex count.
  std::size_t steps_per_epoch = 0;
  std::size_t epochs = 200;
  /// Move size relative to the mean incident edge length (times the
  /// temperature fraction).
  double step_scale = 0.1;
  /// Epoch period of the arclength re-parametrization.
  std::size_t resample_every = 20;
  /// Epoch period of certified evaluation (the final epoch is always certified).
  std::size_t certify_every = 10;
  std::uint64_t seed = 1;
  /// Enclosure width of the certified evaluations.
  double certify_tol = 1e-4;
};

/// Throws DomainError on out-of-range fields.
void validate(const AnnealConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;
  double temperature = 0.0;
  /// Surrogate objective of the current curve at the end of the epoch.
  double sampled = 0.0;
  double acceptance_rate = 0.0;
  /// Certified upper bound of the current curve if certified this epoch.
  std::optional<double> certified;
  /// Best certified upper bound so far (non-increasing).
  double best_certified = 0.0;
};

struct OptimizeTrace {
  std::vector<EpochRecord> epochs;
  /// Best certified curve seen, starting with the input.
  PolyCurve best_curve;
  DistortionResult initial;
  DistortionResult best;
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  std::size_t rejected_isotopy = 0;
  std::size_t resamples_applied = 0;
  std::size_t resamples_rejected = 0;
};

/// Called after each certified evaluation with the epoch, the current curve
/// and its certified enclosure.
using CertifyCallback =
    std::function<void(std::size_t epoch, const PolyCurve& curve, const DistortionResult& result)>;

/// The surrogate minimized by the annealer: distortion over vertex and
/// segment-midpoint samples together with the corner limits.
double objective(const PolyCurve& curve);

/// The surrogate objective maintained under single-vertex moves.
///
/// Samples (vertices and segment midpoints) are grouped into blocks of
/// consecutive samples. For every block pair the state keeps an upper bound
/// on its largest ratio and its smallest chord. A move changes three sample
/// positions and shifts every other arc distance by at most the change in
/// length, so untouched block pairs are re-evaluated only when their shifted
/// bound could exceed the running maximum. Values equal objective() of the
/// moved curve up to rounding.
class IncrementalObjective {
 public:
  explicit IncrementalObjective(const PolyCurve& curve);

  double value() const { return value_; }
  const PolyCurve& curve() const { return curve_; }

  /// Objective of the curve with vertex `index` moved to `position`, or
  /// std::nullopt as soon as it is known to exceed `abort_above`. The
  /// evaluated state is kept until the next call and adopted by commit().
  std::optional<double> evaluate_move(std::size_t index, const Vec3& position,
                                      double abort_above);
  void commit();

 private:
  struct Block {
    double ratio_bound;
    double min_chord;
  };
  void rebuild();
  void lay_out(const std::vector<Vec3>& verts, std::vector<Vec3>& x, std::vector<double>& s,
               double& length) const;
  Block evaluate_block_pair(std::size_t a, std::size_t b, const std::vector<Vec3>& x,
                            const std::vector<double>& s, double length) const;
  double corner_limit_at(const std::vector<Vec3>& verts, std::size_t i, double length) const;
  bool corners_depend_on_length(const std::vector<Vec3>& verts, double length) const;
  std::size_t pair_slot(std::size_t a, std::size_t b) const;

  PolyCurve curve_;
  bool closed_;
  std::size_t samples_ = 0;
  std::size_t blocks_ = 0;
  std::vector<Vec3> x_;
  std::vector<double> s_;
  double length_ = 0.0;
  std::vector<Block> pairs_;
  std::vector<double> corners_;
  bool all_corners_ = false;
  double value_ = 1.0;

  // Pending evaluation.
  std::size_t pending_index_ = 0;
  std::vector<Vec3> pending_verts_;
  std::vector<Vec3> pending_x_;
  std::vector<double> pending_s_;
  double pending_length_ = 0.0;
  double pending_shift_ = 0.0;
  std::vector<std::pair<std::size_t, Block>> pending_exact_;
  std::vector<double> pending_corners_;
  bool pending_all_corners_ = false;
  double pending_value_ = 1.0;
  bool pending_complete_ = false;
};

struct MoveProposal {
  std::size_t vertex = 0;
  Vec3 position;
};

/// Picks a vertex uniformly among `movable` (all vertices when empty) and
/// displaces it by an isotropic Gaussian with standard deviation
/// step_scale * mean incident edge length * temperature_fraction.
MoveProposal propose_move(const PolyCurve& curve, std::mt19937_64& rng, const AnnealConfig& config,
                          double temperature_fraction,
                          const std::vector<std::size_t>& movable = {});

/// Re-spaces the vertices to equal arclength along the curve through a chain
/// of isotopy-checked elementary moves: the target points are inserted on
/// the curve and the old vertices are then straightened out one at a time.
/// Open curves keep their first and last segments (vertices 0, 1, n-2, n-1).
/// Returns std::nullopt if some step is not provably safe.
std::optional<PolyCurve> resample_step(const PolyCurve& curve, std::size_t n);

/// Simulated annealing of the distortion within the isotopy class. Closed
/// curves move every vertex; open curves keep their end segments fixed and
/// confine the other vertices to a ball containing the knotted part but not
/// the outer endpoints, which preserves the long-knot type.
OptimizeTrace minimize_distortion(const PolyCurve& curve, const AnnealConfig& config,
                                  const CertifyCallback& on_certify = {});

}  // namespace knotdist
