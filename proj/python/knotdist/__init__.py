"""Distortion of polygonal space curves: certified computation, analytic
bounds, numeric verification, curve generators and distortion minimization."""

from ._core import (
    AnnealConfig,
    DistortionResult,
    DomainError,
    GeometryError,
    ParseError,
    PolyCurve,
    __version__,
    antipodal_distortion,
    ball_avoiding_length,
    ball_avoiding_length_any_start,
    circle,
    connect_sum,
    curvature_distortion_bound,
    curve_from_string,
    curve_to_string,
    distortion_certified,
    distortion_sampled,
    essential_arc_length_bound,
    is_simple,
    knot_distortion_lower_constant,
    minimize_distortion,
    open_trefoil,
    quarter_circle_detour_length,
    ropelength_distortion_bound,
    shortest_path_outside_ball,
    torus_knot,
    verify_all,
    verify_suite,
    verify_suite_names,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
