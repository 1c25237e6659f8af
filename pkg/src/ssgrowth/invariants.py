"""Deep parameters and checkers for the edge-boundary, geometry, volume, diameter and cells laws.

Degree censuses skip the top boundary of ``G_n``: those are the only vertices
whose degree in the infinite graph is not already visible in ``G_n``. Every
other measurement below is therefore an exact value for the infinite graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.sparse import csgraph

from .graph import DEFAULT_DIAMETER_CAP, bfs_distances, reduce, volume
from .model import CellModel, Parameters, model_parameters
from .reports import TheoremReport
from .substitution import HierarchicalGraph, detect_origin, generate

# all-pairs distances for the metric-stability probe are only taken up to this size
_METRIC_PROBE_CAP = 5000


def top_edge_boundary(hg: HierarchicalGraph) -> int:
    """|delta C_n| of the top cell: every edge at the outer boundary leaves the cell."""
    return int(hg.graph.degrees[list(hg.boundary)].sum())


def inner_vertex_mask(hg: HierarchicalGraph) -> np.ndarray:
    """F-vertices (level >= 1) that are not on the top boundary."""
    return (hg.level >= 1) & ~hg.top_boundary_mask


def cells_count(hg: HierarchicalGraph) -> np.ndarray:
    """Number of 1-cells having each vertex in their boundary."""
    _, bounds = hg.cell_partition(1)
    return np.bincount(bounds.ravel(), minlength=hg.graph.vertex_count)


def inner_degrees(hg: HierarchicalGraph) -> np.ndarray:
    """Degree of each 1-cell boundary vertex inside its closed cell, shape (cells, theta)."""
    owner, bounds = hg.cell_partition(1)
    e = hg.graph.edges()
    # cell boundaries are independent sets, so every edge of a closed 1-cell touches its interior
    a, b = e[:, 0], e[:, 1]
    cell = np.where(owner[a] >= 0, owner[a], owner[b])
    outer = np.where(owner[a] >= 0, b, a)
    keep = owner[outer] < 0
    n = hg.graph.vertex_count
    keys, counts = np.unique(cell[keep] * n + outer[keep], return_counts=True)
    wanted = np.arange(len(bounds))[:, None] * n + bounds
    pos = np.clip(np.searchsorted(keys, wanted), 0, max(len(keys) - 1, 0))
    return np.where(keys[pos] == wanted, counts[pos], 0).astype(np.int64)


@dataclass
class _Census:
    b_values: list[int]
    c: int
    M: int
    nu_values: list[int]
    lam_values: list[int]


def _census(hg: HierarchicalGraph) -> _Census:
    inner = inner_vertex_mask(hg)
    cells = cells_count(hg)
    free = ~hg.top_boundary_mask
    c = int(cells[inner].max()) if inner.any() else 0
    M = int(hg.graph.degrees[free].max())
    b_values = sorted(set(inner_degrees(hg).ravel().tolist()))
    nu_values: list[int] = []
    lam_values: list[int] = []
    if hg.graph.vertex_count <= _METRIC_PROBE_CAP:
        owner, bounds = hg.cell_partition(1)
        dist = csgraph.shortest_path(hg.graph.csr, method="D", directed=False, unweighted=True)
        iu, ju = np.triu_indices(hg.model.theta, k=1)
        nu_values = sorted(set(dist[bounds[:, iu], bounds[:, ju]].astype(np.int64).ravel().tolist()))
        lam = set()
        for i, row in enumerate(bounds):
            closure = np.concatenate([np.flatnonzero(owner == i), row])
            lam.add(int(dist[np.ix_(closure, closure)].max()))
        lam_values = sorted(lam)
    return _Census(b_values, c, M, nu_values, lam_values)


def deep_parameters(m: CellModel, depth: int = 4) -> Parameters:
    """Model parameters refined by censuses of ``G_{depth-1}`` and ``G_depth``.

    ``c`` and ``M`` are flagged stabilized when both depths agree. ``nu_deep`` and
    ``lam_deep`` are the boundary distance and closed-cell diameter of the
    1-cells measured with the metric of ``G_depth`` (``None`` when they are not
    constant or the graph is too large to probe).
    """
    if depth < 3:
        raise ValueError("deep parameters need depth >= 3")
    base = model_parameters(m)
    prev, last = _census(generate(m, depth - 1)), _census(generate(m, depth))
    return replace(
        base,
        b=last.b_values[0] if len(last.b_values) == 1 else None,
        c=last.c, c_stabilized=prev.c == last.c,
        M=last.M, M_stabilized=prev.M == last.M,
        depth=depth,
        nu_deep=last.nu_values[0] if len(last.nu_values) == 1 else None,
        lam_deep=last.lam_values[0] if len(last.lam_values) == 1 else None,
    )


def edge_boundary_prediction(p: Parameters, n: int) -> Fraction:
    return Fraction(p.b, p.theta - 1) ** (n - 1) * p.delta


def check_edge_boundary(m: CellModel, n_max: int = 6) -> TheoremReport:
    p = model_parameters(m)
    report = TheoremReport("boundary", m.name, list(range(1, n_max + 1)))
    if p.b is None:
        return report.inapplicable("hypothesis unmet: no constant inner degree")
    for n in range(1, n_max + 1):
        predicted = edge_boundary_prediction(p, n)
        measured = top_edge_boundary(generate(m, n))
        ok = report.measure(n, "|delta C_n|", int(predicted) if predicted.denominator == 1 else str(predicted),
                            measured, predicted == measured)
        if not ok:
            report.witnesses.append({"n": n, "top_boundary": list(m.boundary)})
    report.facts["ratio"] = str(Fraction(p.b, p.theta - 1))
    return report.finish()


def _one_interior_cell(hg: HierarchicalGraph) -> tuple[bool, dict | None]:
    """Condition (v): each boundary vertex of each k-cell (k >= 2) lies in exactly one of its 1-cells."""
    mu = hg.model.mu
    _, b1 = hg.cell_partition(1)
    for k in range(2, hg.n + 1):
        _, bk = hg.cell_partition(k)
        parent = np.arange(len(b1)) // mu ** (k - 1)
        # per_cell[i, q]: does 1-cell i touch boundary vertex q of its k-cell
        per_cell = (b1[:, :, None] == bk[parent][:, None, :]).sum(axis=1)
        hits = np.zeros(bk.shape, dtype=np.int64)
        np.add.at(hits, parent, per_cell)
        bad = np.argwhere(hits != 1)
        if bad.size:
            cell, pos = (int(x) for x in bad[0])
            return False, {"level": k, "cell": cell, "vertex": int(bk[cell, pos]), "cells": int(hits[cell, pos])}
    return True, None


@dataclass
class Conditions:
    values: dict[str, bool | None] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)


def geometry_conditions(m: CellModel, n_max: int = 5) -> Conditions:
    """Evaluate the six bounded-geometry conditions independently on ``G_1..G_n_max``."""
    if n_max < 3:
        raise ValueError("need n_max >= 3")
    p = model_parameters(m)
    deep = deep_parameters(m, n_max)
    out = Conditions()
    out.values["i"] = deep.M_stabilized
    out.witnesses["i"] = {"M": deep.M, "depths": [n_max - 1, n_max]}
    out.values["ii"] = None if p.b is None else p.b == p.theta - 1
    hg = generate(m, n_max)
    red = reduce(hg.graph, np.flatnonzero(hg.level >= 1))
    ids = red.original_ids
    inner = inner_vertex_mask(hg)[ids]
    deg_x = hg.graph.degrees[ids][inner]
    deg_xf = red.graph.degrees[inner]
    differ = np.flatnonzero(deg_x != deg_xf)
    out.values["iii"] = differ.size == 0
    if differ.size:
        v = int(ids[inner][differ[0]])
        out.witnesses["iii"] = {"vertex": v, "deg": int(deg_x[differ[0]]), "deg_reduced": int(deg_xf[differ[0]])}
    sizes = [top_edge_boundary(generate(m, n)) for n in range(1, n_max + 1)]
    out.values["iv"] = all(s == p.delta for s in sizes)
    out.witnesses["iv"] = {"edge_boundary": sizes}
    ok, wit = _one_interior_cell(hg)
    out.values["v"] = ok
    if wit:
        out.witnesses["v"] = wit
    out.values["vi"] = p.delta == p.theta * (p.theta - 1)
    out.witnesses["vi"] = {"delta": p.delta, "theta(theta-1)": p.theta * (p.theta - 1)}
    return out


def check_bounded_geometry(m: CellModel, n_max: int = 5) -> TheoremReport:
    p = model_parameters(m)
    deep = deep_parameters(m, n_max)
    cond = geometry_conditions(m, n_max)
    report = TheoremReport("geometry", m.name, list(range(1, n_max + 1)))
    report.facts.update({
        "conditions": cond.values,
        "delta": p.delta,
        "theta(theta-1)": p.theta * (p.theta - 1),
        "max_degree": deep.M,
        "max_degree_stabilized": deep.M_stabilized,
    })
    report.witnesses.append(cond.witnesses)
    if p.b is None:
        return report.inapplicable("equivalence hypothesis (constant inner degree b) unmet; "
                                   "conditions evaluated empirically only")
    values = set(cond.values.values())
    report.measure(n_max, "all six conditions agree", True, len(values) == 1)
    report.facts["common_value"] = values.pop() if len(values) == 1 else None
    return report.finish()


@dataclass
class GeometryClass:
    kind: str    # bounded | locally-finite-unbounded | non-locally-finite | inapplicable
    report: TheoremReport


def classify_geometry(m: CellModel, depth: int = 6) -> GeometryClass:
    """Degree trichotomy under a constant inner degree, with finite-depth witnesses."""
    p = model_parameters(m)
    report = TheoremReport("trichotomy", m.name, list(range(2, depth + 1)))
    if p.b is None:
        report.inapplicable("hypothesis unmet: no constant inner degree")
        return GeometryClass("inapplicable", report)
    origin = detect_origin(m)
    report.facts["origin"] = origin.to_dict()
    graphs = {n: generate(m, n) for n in range(1, depth + 1)}

    # degree of top non-boundary model vertices in G_{n+1}: they lie on the boundary of n-cells only
    slot_count = np.bincount(np.asarray(m.slots).ravel(), minlength=m.vertex_count)
    marching: dict[int, dict[int, int]] = {}
    for n in range(1, depth):
        g = graphs[n + 1]
        per_corner = Fraction(p.delta, p.theta) * Fraction(p.b, p.theta - 1) ** (n - 1)
        marching[n] = {}
        for v in m.interior.tolist():
            predicted = slot_count[v] * per_corner
            measured = int(g.graph.degrees[v])
            marching[n][v] = measured
            report.measure(n, f"deg v_{n} (model vertex {v})", int(predicted), measured, predicted == measured)
    report.facts["marching_degrees"] = {str(n): {str(v): d for v, d in row.items()} for n, row in marching.items()}

    if p.b == p.theta - 1:
        kind = "bounded"
    elif origin.kind != "origin_vertex":
        kind = "locally-finite-unbounded"
        report.measure(depth, "no origin vertex", True, origin.resolved and origin.kind == "origin_cell")
    else:
        kind = "non-locally-finite"
        vid = origin.vertex
        degrees = []
        for n in range(2, depth + 1):
            degrees.append(int(graphs[n].graph.degrees[vid]))
            if n < depth:
                vid = int(graphs[n + 1].embedding[vid])
        increasing = all(x < y for x, y in zip(degrees, degrees[1:]))
        report.facts["origin_degrees"] = degrees
        report.measure(depth, "origin degree strictly increasing", True, increasing)
    report.facts["classification"] = kind
    return GeometryClass(kind, report.finish())


def check_cell_volume(m: CellModel, n_max: int = 6) -> TheoremReport:
    p = model_parameters(m)
    report = TheoremReport("volume", m.name, list(range(1, n_max + 1)))
    literal = {}
    for n in range(1, n_max + 1):
        hg = generate(m, n)
        closed_pred = m.mu ** n * m.theta * (m.theta - 1)
        closed = volume(hg.graph, range(hg.graph.vertex_count))
        report.measure(n, "closed volume", closed_pred, closed)
        report.measure(n, "2|E|", closed_pred, 2 * hg.graph.edge_count)
        edge_bnd = top_edge_boundary(hg)
        interior = volume(hg.graph, np.flatnonzero(~hg.top_boundary_mask))
        report.measure(n, "interior volume", closed_pred - edge_bnd, interior)
        literal[str(n)] = interior == closed_pred - p.delta
    report.facts["literal_minus_delta_form_holds"] = literal
    if not all(literal.values()):
        report.notes.append("interior volume differs from 'closed volume - delta' on this model; "
                            "it equals 'closed volume - |delta C_n|' instead")
    return report.finish()


def diameter_bounds(p: Parameters, n: int) -> tuple[int, int, float]:
    """(boundary-distance bound, diameter bound, nu^(n + kappa_tilde))."""
    nu, rho = p.nu, p.rho
    ecc = nu ** n + rho * (nu ** n - 1) // (nu - 1)
    diam = nu ** n + rho * (nu ** (n - 1) * (nu + 1) - 2) // (nu - 1)
    return ecc, diam, nu ** (n + p.kappa_tilde)


def check_diameters(m: CellModel, n_max: int = 6, diameter_cap: int = DEFAULT_DIAMETER_CAP) -> TheoremReport:
    from .graph import diameter

    p = model_parameters(m)
    report = TheoremReport("diameter", m.name, [])
    sharp: dict[str, dict[str, bool]] = {}
    for n in range(1, n_max + 1):
        hg = generate(m, n)
        if hg.graph.vertex_count > diameter_cap:
            report.notes.append(f"stopped at n = {n - 1}: G_{n} exceeds the diameter cap {diameter_cap}")
            break
        report.depths.append(n)
        target = p.nu ** n
        bnd = list(hg.boundary)
        far = 0
        pair = set()
        for i, v in enumerate(bnd):
            d = bfs_distances(hg.graph, [v])
            far = max(far, int(d.dist.max()))
            pair.update(d[w] for w in bnd[i + 1:])
        report.measure(n, "(i) boundary distances", [target], sorted(pair))
        ecc_bound, diam_bound, power = diameter_bounds(p, n)
        report.measure(n, "(ii) max boundary distance", [target, ecc_bound], far, target <= far <= ecc_bound)
        diam = diameter(hg.graph, cap=diameter_cap)
        report.measure(n, "(iii) diameter", [target, diam_bound], diam, target <= diam <= diam_bound)
        # strict when rho > 0; with rho = 0 both sides equal nu^n
        strict = diam_bound < power if p.rho > 0 else diam_bound <= power + 1e-9
        report.measure(n, "(iii) bound below nu^(n+kappa_tilde)", True, strict)
        sharp[str(n)] = {"ii": far == ecc_bound, "iii": diam == diam_bound}
        if not target <= far <= ecc_bound or not target <= diam <= diam_bound:
            report.witnesses.append({"n": n, "max_boundary_distance": far, "diameter": diam,
                                     "bounds": [ecc_bound, diam_bound]})
    report.facts["sharp"] = sharp
    return report.finish()


def check_cells_lemma(m: CellModel, n: int = 4) -> TheoremReport:
    if n < 3:
        raise ValueError("need n >= 3")
    report = TheoremReport("cells", m.name, [n])
    hg = generate(m, n)
    red = reduce(hg.graph, np.flatnonzero(hg.level >= 1))
    inner = inner_vertex_mask(hg)[red.original_ids]
    ids = red.original_ids[inner]
    predicted = cells_count(hg)[ids] * (m.theta - 1)
    measured = red.graph.degrees[inner]
    bad = np.flatnonzero(predicted != measured)
    report.measure(n, "vertices with cells*(theta-1) = reduced degree", int(ids.size), int(ids.size - bad.size))
    if bad.size:
        report.witnesses.append({"vertex": int(ids[bad[0]]), "cells_times": int(predicted[bad[0]]),
                                 "reduced_degree": int(measured[bad[0]])})
    deep = deep_parameters(m, n)
    report.facts.update({"c": deep.c, "M": deep.M, "c_stabilized": deep.c_stabilized,
                         "M_stabilized": deep.M_stabilized})
    if deep.c_stabilized and deep.M_stabilized:
        report.measure(n, "c*(theta-1) = M", deep.M, deep.c * (m.theta - 1))
    else:
        report.notes.append("c and M not stabilized (unbounded geometry); corollary not evaluated")
    return report.finish()
