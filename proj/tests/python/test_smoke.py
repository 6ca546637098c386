import math

import numpy as np
import pytest

import itjulia

Z2 = {"kind": "explicit-prefix-with-periodic-tail", "bounds": {"d": 2, "K": 1.0, "M": 0.0}, "tail": [[0, 0, 1]]}
C03 = {"kind": "explicit-prefix-with-periodic-tail", "bounds": {"d": 2, "K": 1.0, "M": 0.3}, "tail": [[0.3, 0, 1]]}


def disc(n, half_width, radius):
    h = 2 * half_width / n
    c = -half_width + h * (np.arange(n) + 0.5)
    x, y = np.meshgrid(c, -c)
    return x**2 + y**2 < radius**2


def test_escape_radius_and_metric():
    assert itjulia.escape_radius(2, 1.0, 0.0) == 2.0
    assert itjulia.spherical_dist(0, 1) == pytest.approx(math.pi / 4)
    assert itjulia.cycle_time(1) == 2


def test_escape_time():
    assert not itjulia.escape_time(Z2, 0, 0.5, 50)[0]
    escaped, steps = itjulia.escape_time(Z2, 0, 3.0, 50)
    assert escaped and steps <= 1


def test_filled_julia_of_z_squared():
    out = itjulia.filled_julia(Z2, 0, resolution=256, depth=30)
    mask = out["mask"]
    assert mask.shape == (256, 256) and mask.dtype == bool
    h = 2 * out["half_width"] / 256
    assert mask.sum() * h * h == pytest.approx(math.pi, rel=0.03)
    assert len(out["components"]) == 1
    assert all(abs(abs(z) - 1) <= 2 * h for z in out["j_points"])


def test_invariance():
    r = itjulia.invariance(Z2, 0, 3, resolution=256, depth=30)
    assert r["samples"] == 200 and r["max_cell_deviation"] <= 1


def test_geometry_on_masks():
    n, hw = 256, 1.05
    d = disc(n, hw, 1.0)
    lo, hi = itjulia.hyperbolic_dist_bounds(d, hw, 0, 0.5)
    assert hi == 4 * lo and lo <= math.log(3) <= hi
    ring = disc(n, 4.2 / 1.05 * hw, 4.0) & ~disc(n, 4.2 / 1.05 * hw, 1.0)
    assert itjulia.annulus_modulus(ring, 4.2) == pytest.approx(math.log(4) / (2 * math.pi), rel=0.03)
    assert itjulia.caratheodory_bound_disc(d, hw, 0) == pytest.approx(abs(math.log(math.pi**2 / 8)), rel=0.05)


def test_pl_and_apps():
    rep = itjulia.pl_build(Z2, 4.0, 6, resolution=256)
    assert all(rep["pl_report"][k]["pass"] for k in ("PL1", "PL2", "PL3"))
    rows = itjulia.thm72_rows(None, 2, resolution=512)
    assert [r["component_count"] for r in rows] == [4, 8]
    assert itjulia.quasicircle_constant(Z2)["constant"] == pytest.approx(1.0, rel=0.03)
    sep = itjulia.z2plus2_separation()
    assert sep["components"] == 2 and sep["gap_ok"]


def test_errors():
    with pytest.raises(itjulia.InputError, match="hypothesis"):
        itjulia.quasicircle_constant(C03)
    with pytest.raises(itjulia.InputError):
        itjulia.filled_julia({"kind": "spiral"}, 0)
    with pytest.raises(itjulia.ConstructionError):
        itjulia.pl_build(Z2, 1.0, 4, resolution=256)
    with pytest.raises(itjulia.GridTooSmall):
        itjulia.filled_julia(Z2, 0, resolution=128, half_width=1.5)
    assert issubclass(itjulia.InputError, itjulia.Error)
