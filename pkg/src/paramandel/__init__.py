"""Parabolic Mandelbrot machinery.

A library and CLI for the constructive side of the parabolic quadratic family
g_B(z) = z + B + 1/z: the Blaschke external model and its Fatou coordinates,
itinerary-indexed parabolic rays, the escape-locus parametrization, towers of
laminations, Yoccoz-style puzzles in both dynamical planes, and a finite-depth
combinatorial approximation of the correspondence onto the Mandelbrot set.
"""

__version__ = "0.1.0"

from .angles import Itinerary, double, itinerary_of_angle, rotation_cycle
from .circle import h_circle, h_inverse_circle
from .errors import ParamandelError
from .fatou import (fatou_Bl_exterior, fatou_Bl_interior, fatou_gB,
                    fatou_inverse_Bl, membership)
from .maps import (eval_Bl, eval_gB, eval_nu, eval_Qc, eval_tau,
                   gB_multiplier_at_alpha, orbit, sigma0)
from .parameter import (in_M, in_M1, limb_of, multiplier_match, psi1_approx,
                        trace_parameter_ray, upsilon)
from .rays import (co_land, landing_point, rotation_number_at, trace_ray_Bl,
                   trace_ray_gB, trace_ray_Qc, tree_point)
from .sphere import INF, CPoint
from .towers import (Tower, base_tower, children, enumerate_towers,
                     is_renormalizable, level_set, tower_from_dynamics, validate)

__all__ = [
    "Itinerary", "double", "itinerary_of_angle", "rotation_cycle",
    "h_circle", "h_inverse_circle", "ParamandelError",
    "fatou_Bl_exterior", "fatou_Bl_interior", "fatou_gB", "fatou_inverse_Bl",
    "membership", "eval_Bl", "eval_gB", "eval_nu", "eval_Qc", "eval_tau",
    "gB_multiplier_at_alpha", "orbit", "sigma0",
    "in_M", "in_M1", "limb_of", "multiplier_match", "psi1_approx",
    "trace_parameter_ray", "upsilon",
    "co_land", "landing_point", "rotation_number_at", "trace_ray_Bl",
    "trace_ray_gB", "trace_ray_Qc", "tree_point",
    "INF", "CPoint", "Tower", "base_tower", "children", "enumerate_towers",
    "is_renormalizable", "level_set", "tower_from_dynamics", "validate",
]
