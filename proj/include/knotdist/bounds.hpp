#pragma once

#include <string_view>

namespace knotdist {

/// Which piece of a piecewise bound produced the value.
enum class BoundBranch {
  none,
  chord,        // straight segment clears the unit ball
  wrap,         // tangent, great-circle arc, tangent
  small_angle,  // minimum over the start radius is a perpendicular foot
  large_angle,  // minimum over the start radius wraps the ball
};

std::string_view branch_name(BoundBranch branch);

struct BoundEval {
  double value = 0.0;
  BoundBranch branch = BoundBranch::none;
};

/// arcsec(x) = arccos(1/x) for x >= 1. Inputs within 1e-12 below 1 are
/// treated as 1; anything smaller throws DomainError.
double arcsec(double x);

/// Central angle beyond which the shortest ball-avoiding path between points
/// at radii r and s must wrap around the unit ball.
double wrap_threshold_angle(double r, double s);

/// Length of the shortest path outside the open unit ball joining points at
/// radii r, s >= 1 separated by central angle theta in [0, pi].
BoundEval ball_avoiding_length(double r, double s, double theta);

/// Minimum of ball_avoiding_length over all start radii r >= 1.
BoundEval ball_avoiding_length_any_start(double s, double theta);

/// Length of the path that follows a quarter circle of the unit sphere and
/// then cuts straight to a point at radius s. Always strictly shorter than
/// ball_avoiding_length_any_start(s, pi).
double quarter_circle_detour_length(double s);

/// Lower bound on the arc distance between the ends of an essential secant
/// of length c (in units of the shortest essential secant), 0 < c <= 2.
double essential_arc_length_bound(double c);

/// Upper bound sec(alpha/2) on the distortion of an arc of total curvature
/// alpha < pi.
double curvature_distortion_bound(double alpha);

/// Upper bound R/2 on the distortion of a closed curve of ropelength R.
double ropelength_distortion_bound(double ropelength);

/// 5*pi/3: every nontrivial tame knot has at least this distortion.
double knot_distortion_lower_constant();

}  // namespace knotdist
