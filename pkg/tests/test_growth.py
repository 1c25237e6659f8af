import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssgrowth.growth import (admissible_centers, ball_volume_table, check_growth_sandwich,
                             doubling_ratio, estimate_dimensions, global_growth, growth_function, ladder,
                             safe_radii, safe_radius, sandwich_bounds, sandwich_radius)
from ssgrowth.model import BUILTIN_NAMES, builtin
from ssgrowth.substitution import generate

from oracles import naive_ball_volume, to_networkx


def test_line_midpoint_growth():
    hg = generate(builtin("line"), 3)
    x = int(np.argmax(safe_radii(hg)))
    curve = growth_function(hg, x)
    assert curve.volumes[:4].tolist() == [2, 6, 10, 14]
    assert curve.volumes.tolist() == [4 * r + 2 for r in range(curve.safe_radius + 1)]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_growth_function_matches_naive(name):
    m = builtin(name)
    n = max(k for k in range(1, 9) if generate(m, k).graph.vertex_count <= 2000)
    hg = generate(m, n)
    g = to_networkx(hg)
    safe = safe_radii(hg)
    for x in np.flatnonzero(safe >= 1)[::7].tolist():
        curve = growth_function(hg, x)
        top = min(curve.safe_radius, 10)
        assert curve.volumes[:top + 1].tolist() == [naive_ball_volume(g, x, r) for r in range(top + 1)]


def test_growth_function_rejects_boundary_center():
    hg = generate(builtin("sierpinski"), 3)
    with pytest.raises(ValueError, match="safe radius"):
        growth_function(hg, hg.boundary[0])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["sierpinski", "tree4", "lopsided3", "diamond_open"]), st.integers(0, 10 ** 6))
def test_ball_table_matches_growth_function(name, seed):
    hg = generate(builtin(name), 4)
    safe = safe_radii(hg)
    cand = np.flatnonzero(safe >= 1)
    x = int(cand[seed % cand.size])
    radii = np.arange(safe[x] + 1)
    row = ball_volume_table(hg, np.array([x]), radii)[0]
    assert row.tolist() == growth_function(hg, x).volumes.tolist()


@pytest.mark.parametrize("name", ["sierpinski", "tree4", "diamond_open", "lopsided3"])
def test_safe_radius_balls_are_exact(name):
    """Within its safe radius a ball in G_n equals the ball around the image vertex in G_{n+2}."""
    m = builtin(name)
    g3, g4, g5 = generate(m, 3), generate(m, 4), generate(m, 5)
    image = g5.embedding[g4.embedding]
    safe3 = safe_radii(g3)
    centers = np.flatnonzero(safe3 >= 1)
    radii = np.arange(int(safe3.max()) + 1)
    small = ball_volume_table(g3, centers, radii)
    large = ball_volume_table(g5, image[centers], radii, limits=safe3[centers])
    assert np.array_equal(small, large)


def test_safe_radius_value():
    hg = generate(builtin("line"), 3)      # path of length 8; the midpoint is 4 steps from both ends
    assert int(safe_radii(hg).max()) == 3
    assert safe_radius(hg, hg.boundary[0]) == 0
    assert sorted(safe_radii(hg).tolist()) == [0, 0, 0, 0, 1, 1, 2, 2, 3]


def test_admissible_centers_deterministic_subsample():
    hg = generate(builtin("sierpinski"), 5)
    a = admissible_centers(hg, 4, max_centers=50)
    assert a.size == 50
    assert np.array_equal(a, admissible_centers(hg, 4, max_centers=50))
    assert np.all(safe_radii(hg)[a] >= 4)


def test_global_growth_brackets():
    hg = generate(builtin("sierpinski"), 6)
    full = global_growth(hg, 4)
    sub = global_growth(hg, 4, max_centers=30)
    assert full.lower <= sub.lower <= sub.upper <= full.upper
    with pytest.raises(ValueError):
        global_growth(hg, 10 ** 6)


def test_ladder():
    assert ladder(2, 40).tolist() == [2, 4, 8, 16, 32]
    assert ladder(3, 2).tolist() == []


def test_doubling_ratio_bounded():
    res = doubling_ratio(generate(builtin("sierpinski"), 6))
    assert 1 < res.ratio <= 3 * 6
    assert res.pairs > 0


def test_sandwich_bounds_exact_for_rho_zero():
    lo, hi = sandwich_bounds(builtin("sierpinski"), c=2, M=4, n=3)
    assert (lo, hi) == (Fraction(162), Fraction(27 * 24 + 18))
    assert sandwich_radius(2, 0, 3) == 8
    assert sandwich_radius(2, 1, 2) == 8        # tree4: nu^n + rho (nu^(n-1)(nu+1) - 2)/(nu - 1)


def test_growth_sandwich_sierpinski():
    rep = check_growth_sandwich(builtin("sierpinski"), n_values=range(1, 5), depth=7)
    assert rep.passed
    assert {m.n for m in rep.measurements} == {1, 2, 3, 4}


def test_growth_sandwich_tree4():
    rep = check_growth_sandwich(builtin("tree4"), n_values=range(1, 4), depth=7)
    assert rep.passed


def test_growth_sandwich_inapplicable():
    for name in ("diamond_open", "lopsided3"):
        assert check_growth_sandwich(builtin(name), depth=4).status == "inapplicable"


def test_dimension_line():
    est = estimate_dimensions(generate(builtin("line"), 8))
    assert est.slope_lower == pytest.approx(1, abs=0.1)
    assert est.slope_upper == pytest.approx(1, abs=0.1)
    assert est.radii == [2, 4, 8, 16, 32, 64]     # 128 exceeds the midpoint's safe radius 127


def test_dimension_sierpinski():
    est = estimate_dimensions(generate(builtin("sierpinski"), 7))
    target = math.log(3) / math.log(2)
    assert est.dim_predicted == pytest.approx(target)
    assert est.deviation <= 0.15
    assert est.residual < 0.1


def test_dimension_fit_range():
    hg = generate(builtin("tree4"), 7)
    full = estimate_dimensions(hg)
    part = estimate_dimensions(hg, r_min=16, r_max=64)
    assert part.radii == [16, 32, 64]
    assert (full.r_min, full.r_max) == (2, 128)
    with pytest.raises(ValueError, match="ladder radii"):
        estimate_dimensions(hg, r_min=64)


def test_tree4_local_slopes_approach_two():
    """Fitted slopes on the full ladder sit well below 2, but the local slopes climb towards it.

    ``V_lower(r)`` on r <= 128 is the same at depths 7 and 9 (the balls are exact),
    so the gap is pre-asymptotic, not a finite-depth artefact.
    """
    deep = estimate_dimensions(generate(builtin("tree4"), 9))
    shallow = estimate_dimensions(generate(builtin("tree4"), 7))
    assert deep.lower[:7] == shallow.lower[:7]
    slopes = deep.window_slopes_lower
    assert all(a < b for a, b in zip(slopes, slopes[1:]))
    assert abs(slopes[-1] - 2) < 0.05



def test_global_growth_homogeneous_path():
    hg = generate(builtin("line"), 6)
    g = global_growth(hg, 5)
    assert (g.lower, g.upper) == (22, 22)
    zero = global_growth(hg, 0)
    assert (zero.lower, zero.upper) == (2, 2)


def test_global_growth_radius_zero_is_degree_range():
    hg = generate(builtin("sierpinski"), 4)
    g = global_growth(hg, 0)
    inner = hg.graph.degrees[~hg.top_boundary_mask]
    assert (g.lower, g.upper) == (int(inner.min()), int(inner.max()))


@pytest.mark.parametrize("name", ["sierpinski", "tree4", "lopsided3", "diamond_open"])
def test_growth_strictly_increasing(name):
    hg = generate(builtin(name), 5)
    x = int(np.argmax(safe_radii(hg)))
    v = growth_function(hg, x).volumes
    assert np.all(np.diff(v) > 0)


def test_doubling_ratio_line():
    res = doubling_ratio(generate(builtin("line"), 7))
    # (8r + 2) / (4r + 2) increases towards 2
    assert 10 / 6 < res.ratio < 2
    assert res.ratio == pytest.approx((8 * res.radius + 2) / (4 * res.radius + 2))


def _center_slopes(name, n):
    hg = generate(builtin(name), n)
    safe = safe_radii(hg)
    centers = np.argsort(-safe, kind="stable")[:2]
    radii = ladder(2, int(safe[centers].min()))
    table = ball_volume_table(hg, centers, radii)
    return [float(np.polyfit(np.log(radii), np.log(row), 1)[0]) for row in table]


@pytest.mark.parametrize("name,n", [
    ("line", 8), ("sierpinski", 7),
    pytest.param("tree4", 7, marks=pytest.mark.xfail(
        strict=True, reason="the two deepest centers of tree4 give slopes 1.715 and 1.638 on r = 2..128")),
])
def test_slopes_from_two_deep_centers_agree(name, n):
    a, b = _center_slopes(name, n)
    assert abs(a - b) < 0.05
