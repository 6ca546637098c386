"""Julia sets of non-autonomous polynomial sequences.

Sequences are plain dicts in the same layout as the CLI's JSON files.
"""

import json

from . import _core
from ._core import (
    ConstructionError,
    Error,
    GridTooSmall,
    InputError,
    ResolutionError,
    RootFindError,
    cycle_time,
    escape_radius,
    hausdorff_dist,
    spherical_dist,
)

__all__ = [
    "ConstructionError",
    "Error",
    "GridTooSmall",
    "InputError",
    "ResolutionError",
    "RootFindError",
    "annulus_modulus",
    "caratheodory_bound_disc",
    "cycle_time",
    "escape_radius",
    "escape_time",
    "filled_julia",
    "hausdorff_dist",
    "hyperbolic_dist_bounds",
    "invariance",
    "pl_build",
    "quasicircle_constant",
    "spherical_dist",
    "thm72_rows",
    "z2plus2_separation",
]


def _seq(seq):
    return seq if isinstance(seq, str) else json.dumps(seq)


def escape_time(seq, time, z, max_depth):
    """Returns (escaped, steps) for the orbit of z under P_{time+1}, P_{time+2}, ..."""
    return _core.escape_time(_seq(seq), time, complex(z), max_depth)


def filled_julia(seq, time, resolution=512, depth=40, half_width=0.0, method="escape"):
    """Raster filled Julia set: dict with mask, steps, j_points, half_width, components."""
    out = _core.filled_julia(_seq(seq), time, resolution, depth, half_width, method)
    out["components"] = json.loads(out["components"])
    return out


def invariance(seq, m, n, resolution=512, depth=40, samples=200, seed=42):
    return json.loads(_core.invariance(_seq(seq), m, n, resolution, depth, samples, seed))


def hyperbolic_dist_bounds(mask, half_width, z, w):
    return _core.hyperbolic_dist_bounds(mask, half_width, complex(z), complex(w))


def annulus_modulus(mask, half_width):
    return _core.annulus_modulus(mask, half_width)


def caratheodory_bound_disc(mask, half_width, basepoint):
    return _core.caratheodory_bound_disc(mask, half_width, complex(basepoint))


def pl_build(seq, rho, horizon, resolution=512):
    return json.loads(_core.pl_build(_seq(seq), rho, horizon, resolution))


def thm72_rows(n=None, j=3, resolution=1024, depth=40):
    """Rows for j = 1..j of the counterexample sequence; n=None is the limit sequence."""
    return json.loads(_core.thm72_rows(n, j, resolution, depth))


def quasicircle_constant(seq, resolution=512, depth=40):
    return json.loads(_core.quasicircle_constant(_seq(seq), resolution, depth))


def z2plus2_separation(resolution=512, depth=40):
    return json.loads(_core.z2plus2_separation(resolution, depth))
