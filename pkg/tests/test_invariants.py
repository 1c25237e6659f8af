import numpy as np
import pytest

from ssgrowth.graph import diameter
from ssgrowth.invariants import (cells_count, check_bounded_geometry, check_cell_volume, check_cells_lemma,
                                 check_diameters, check_edge_boundary, classify_geometry, deep_parameters,
                                 diameter_bounds, geometry_conditions, inner_degrees, top_edge_boundary)
from ssgrowth.model import BUILTIN_NAMES, builtin, model_parameters
from ssgrowth.substitution import generate

from oracles import naive_diameter, to_networkx


@pytest.mark.parametrize("name,expected", [
    ("line", [2] * 6), ("sierpinski", [6] * 6), ("tree4", [2] * 6),
    ("diamond_open", [2 ** (n + 1) for n in range(1, 7)]),
    ("diamond_fixed", [2 ** (n + 1) for n in range(1, 7)]),
])
def test_top_edge_boundary(name, expected):
    m = builtin(name)
    assert [top_edge_boundary(generate(m, n)) for n in range(1, 7)] == expected


@pytest.mark.parametrize("name", ["line", "sierpinski", "tree4", "diamond_open"])
def test_edge_boundary_law(name):
    rep = check_edge_boundary(builtin(name), n_max=6)
    assert rep.passed, [m for m in rep.measurements if not m.ok]


def test_edge_boundary_inapplicable_without_constant_inner_degree():
    rep = check_edge_boundary(builtin("lopsided3"))
    assert rep.status == "inapplicable"
    assert "inner degree" in rep.notes[0]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_cell_volume(name):
    rep = check_cell_volume(builtin(name), n_max=5)
    assert rep.passed


def test_cell_volume_literal_form_differs_on_diamond():
    rep = check_cell_volume(builtin("diamond_open"), n_max=3)
    assert rep.facts["literal_minus_delta_form_holds"] == {"1": True, "2": False, "3": False}
    # n = 3: closed 250, interior 250 - 16
    interior = [m for m in rep.measurements if m.n == 3 and m.quantity == "interior volume"][0]
    assert interior.measured == 5 ** 3 * 2 - 16


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_boundary_distance_is_nu_power(name):
    rep = check_diameters(builtin(name), n_max=5)
    p = model_parameters(builtin(name))
    for meas in rep.measurements:
        if meas.quantity == "(i) boundary distances":
            assert meas.ok and meas.measured == [p.nu ** meas.n]


def test_tree4_diameter_bounds_sharp():
    rep = check_diameters(builtin("tree4"), n_max=4)
    assert rep.passed
    assert all(v == {"ii": True, "iii": True} for v in rep.facts["sharp"].values())
    p = model_parameters(builtin("tree4"))
    assert diameter_bounds(p, 2)[:2] == (7, 8)


def test_diameter_matches_networkx():
    hg = generate(builtin("tree4"), 3)
    assert diameter(hg.graph) == naive_diameter(to_networkx(hg)) == 18


@pytest.mark.parametrize("name,n,bound,measured", [
    ("diamond_open", 3, 8, 10), ("lopsided3", 2, 4, 5),
])
def test_diameter_upper_bound_exceeded(name, n, bound, measured):
    """Models where the stated upper bounds on the cell diameter do not hold."""
    rep = check_diameters(builtin(name), n_max=n)
    assert rep.status == "fail"
    hit = [w for w in rep.witnesses if w["n"] == n][0]
    if name == "diamond_open":
        assert (hit["bounds"][1], hit["diameter"]) == (bound, measured)
    else:
        assert (hit["bounds"][0], hit["max_boundary_distance"]) == (bound, measured)


def test_geometry_conditions():
    for name in ("line", "sierpinski", "tree4"):
        assert set(geometry_conditions(builtin(name)).values.values()) == {True}
    assert set(geometry_conditions(builtin("diamond_open")).values.values()) == {False}


def test_bounded_geometry_lopsided_flags_hypothesis():
    rep = check_bounded_geometry(builtin("lopsided3"))
    assert rep.status == "inapplicable"
    assert "equivalence hypothesis" in rep.notes[0]
    assert rep.facts["delta"] == 3 > rep.facts["theta(theta-1)"] == 2
    assert rep.facts["max_degree_stabilized"] is True


@pytest.mark.parametrize("name,kind", [
    ("line", "bounded"), ("sierpinski", "bounded"), ("tree4", "bounded"),
    ("diamond_open", "locally-finite-unbounded"), ("diamond_fixed", "non-locally-finite"),
    ("lopsided3", "inapplicable"),
])
def test_classification(name, kind):
    cls = classify_geometry(builtin(name), depth=5)
    assert cls.kind == kind
    assert cls.report.status == ("inapplicable" if kind == "inapplicable" else "pass")


def test_diamond_marching_and_origin_degrees():
    facts = classify_geometry(builtin("diamond_open"), depth=6).report.facts
    for n, row in facts["marching_degrees"].items():
        assert set(row.values()) == {3 * 2 ** int(n)}
    fixed = classify_geometry(builtin("diamond_fixed"), depth=6).report.facts
    assert fixed["origin_degrees"] == [4, 8, 16, 32, 64]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_cells_lemma(name):
    rep = check_cells_lemma(builtin(name), n=4)
    assert rep.passed


def test_cells_count_tree4_branch_vertex():
    hg = generate(builtin("tree4"), 3)
    m_vertex = 1     # the branch vertex of the top copy
    assert cells_count(hg)[m_vertex] == 3


@pytest.mark.parametrize("name,b,c,M", [
    ("line", 1, 2, 2), ("sierpinski", 2, 2, 4), ("tree4", 1, 3, 3), ("lopsided3", None, 5, 5),
])
def test_deep_parameters(name, b, c, M):
    p = deep_parameters(builtin(name), 4)
    assert (p.b, p.c, p.M) == (b, c, M)
    assert p.c_stabilized and p.M_stabilized
    assert p.metric_stable


def test_diamond_not_stabilized():
    p = deep_parameters(builtin("diamond_open"), 4)
    assert not (p.c_stabilized and p.M_stabilized)


def test_inner_degrees_constant_for_bounded_models():
    for name, b in (("sierpinski", 2), ("tree4", 1)):
        deg = inner_degrees(generate(builtin(name), 3))
        assert np.all(deg == b)
