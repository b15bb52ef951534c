#include "knotdist/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "knotdist/errors.hpp"

namespace knotdist {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kPi = std::numbers::pi;

double checked_radius(double r, const char* what) {
  if (!(r >= 1.0 - kDomainSlack) || !std::isfinite(r)) {
    throw DomainError(std::string(what) + " must be >= 1");
  }
  return r < 1.0 ? 1.0 : r;
}

double checked_angle(double theta) {
  if (!(theta >= -kDomainSlack && theta <= kPi + kDomainSlack)) {
    throw DomainError("angle must lie in [0, pi]");
  }
  return std::clamp(theta, 0.0, kPi);
}

}  // namespace

std::string_view branch_name(BoundBranch branch) {
  switch (branch) {
    case BoundBranch::chord:
      return "chord-case";
    case BoundBranch::wrap:
      return "wrap-case";
    case BoundBranch::small_angle:
      return "small-angle";
    case BoundBranch::large_angle:
      return "large-angle";
    case BoundBranch::none:
      break;
  }
  return "none";
}

double arcsec(double x) { return std::acos(1.0 / checked_radius(x, "arcsec argument")); }

double wrap_threshold_angle(double r, double s) {
  return arcsec(checked_radius(r, "r")) + arcsec(checked_radius(s, "s"));
}

BoundEval ball_avoiding_length(double r, double s, double theta) {
  r = checked_radius(r, "r");
  s = checked_radius(s, "s");
  theta = checked_angle(theta);
  const double threshold = wrap_threshold_angle(r, s);
  if (theta <= threshold) {
    const double sq = r * r + s * s - 2.0 * r * s * std::cos(theta);
    return {std::sqrt(std::max(0.0, sq)), BoundBranch::chord};
  }
  return {std::sqrt(r * r - 1.0) + std::sqrt(s * s - 1.0) + theta - threshold, BoundBranch::wrap};
}

BoundEval ball_avoiding_length_any_start(double s, double theta) {
  s = checked_radius(s, "s");
  theta = checked_angle(theta);
  const double switch_angle = arcsec(s);
  if (theta <= switch_angle) return {s * std::sin(theta), BoundBranch::small_angle};
  return {std::sqrt(s * s - 1.0) + theta - switch_angle, BoundBranch::large_angle};
}

double quarter_circle_detour_length(double s) {
  s = checked_radius(s, "s");
  return std::sqrt(s * s + 1.0) + kPi / 2.0;
}

double essential_arc_length_bound(double c) {
  if (!(c > 0.0 && c <= 2.0)) throw DomainError("secant length must lie in (0, 2]");
  return 2.0 * kPi - 2.0 * std::asin(c / 2.0);
}

double curvature_distortion_bound(double alpha) {
  if (!(alpha >= 0.0 && alpha < kPi)) throw DomainError("total curvature must lie in [0, pi)");
  return 1.0 / std::cos(alpha / 2.0);
}

double ropelength_distortion_bound(double ropelength) {
  if (!(ropelength > 0.0) || !std::isfinite(ropelength)) throw DomainError("ropelength must be positive");
  return ropelength / 2.0;
}

double knot_distortion_lower_constant() { return 5.0 * kPi / 3.0; }

}  // namespace knotdist
