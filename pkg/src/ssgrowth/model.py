"""Cell models: the substitution rule, its axiom checks and level-1 parameters.

A cell model is the closed cell graph written as an edge-disjoint union of
``mu`` cliques on ``theta`` vertices ("slots"). Slot tuple order is the gluing
map: position ``j`` of a slot receives ``boundary[j]`` of the copy inserted
there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from .graph import FiniteGraph, bfs_distances, boundary as vertex_boundary, component_labels, diameter, is_connected


@dataclass(frozen=True)
class CellModel:
    name: str
    vertex_count: int
    boundary: tuple[int, ...]
    slots: tuple[tuple[int, ...], ...]
    anchor_slot: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", tuple(int(v) for v in self.boundary))
        object.__setattr__(self, "slots", tuple(tuple(int(v) for v in s) for s in self.slots))
        n = self.vertex_count
        if n <= 0:
            raise ValueError("vertex_count must be positive")
        for where, ids in [("boundary", self.boundary)] + [(f"slots[{i}]", s) for i, s in enumerate(self.slots)]:
            if any(v < 0 or v >= n for v in ids):
                raise ValueError(f"{where}: vertex id out of range 0..{n - 1}")
            if len(set(ids)) != len(ids):
                raise ValueError(f"{where}: duplicate vertex id")
        for i, s in enumerate(self.slots):
            if len(s) != len(self.boundary):
                raise ValueError(f"slots[{i}]: expected {len(self.boundary)} ids, got {len(s)}")
        if not self.slots:
            raise ValueError("a model needs at least one slot")
        if not 0 <= self.anchor_slot < len(self.slots):
            raise ValueError("anchor_slot out of range")

    @property
    def theta(self) -> int:
        return len(self.boundary)

    @property
    def mu(self) -> int:
        return len(self.slots)

    @cached_property
    def slot_pairs(self) -> list[tuple[int, int, int]]:
        """``(slot, u, v)`` for every within-slot pair, ``u < v``."""
        return [(i, min(a, b), max(a, b)) for i, s in enumerate(self.slots) for a, b in itertools.combinations(s, 2)]

    @cached_property
    def graph(self) -> FiniteGraph:
        pairs = sorted({(u, v) for _, u, v in self.slot_pairs})
        return FiniteGraph.from_edges(self.vertex_count, pairs)

    @cached_property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.vertex_count, dtype=bool)
        mask[list(self.boundary)] = False
        return np.flatnonzero(mask)

    @cached_property
    def boundary_position(self) -> dict[int, int]:
        return {v: j for j, v in enumerate(self.boundary)}

    def same_rule(self, other: "CellModel") -> bool:
        return (self.vertex_count, self.boundary, self.slots) == (other.vertex_count, other.boundary, other.slots)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "vertices": self.vertex_count,
            "boundary": list(self.boundary),
            "slots": [list(s) for s in self.slots],
            "anchor_slot": self.anchor_slot,
        }


@dataclass
class CheckResult:
    passed: bool
    witness: Any = None
    detail: str = ""


@dataclass
class ValidationReport:
    model: str
    checks: dict[str, CheckResult] = field(default_factory=dict)
    nu: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> dict[str, CheckResult]:
        return {k: c for k, c in self.checks.items() if not c.passed}

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "pass": self.passed,
            "nu": self.nu,
            "checks": {k: {"pass": c.passed, "witness": c.witness, "detail": c.detail} for k, c in self.checks.items()},
        }


@dataclass
class Parameters:
    theta: int
    mu: int
    nu: int
    lam: int
    rho: int
    delta: int
    b: int | None
    kappa_tilde: float
    kappa: int
    dim_predicted: float
    c: int | None = None
    c_stabilized: bool = False
    M: int | None = None
    M_stabilized: bool = False
    depth: int | None = None
    nu_deep: int | None = None
    lam_deep: int | None = None

    @property
    def metric_stable(self) -> bool | None:
        """Whether the model-graph nu and lambda agree with distances measured at depth."""
        if self.nu_deep is None or self.lam_deep is None:
            return None
        return self.nu_deep == self.nu and self.lam_deep == self.lam

    def to_dict(self) -> dict[str, Any]:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["metric_stable"] = self.metric_stable
        return out


def kappa_values(nu: int, rho: int) -> tuple[float, int]:
    """``(kappa_tilde, kappa)``; kappa is found exactly as the least k with nu**(k+1) >= nu + 3 rho."""
    kt = math.log(nu + 3 * rho) / math.log(nu) - 1
    k = 0
    while nu ** (k + 1) < nu + 3 * rho:
        k += 1
    return kt, k


def _boundary_distances(m: CellModel) -> dict[tuple[int, int], int | None]:
    out = {}
    for i, u in enumerate(m.boundary):
        dm = bfs_distances(m.graph, [u])
        for v in m.boundary[i + 1:]:
            out[(u, v)] = dm[v]
    return out


def validate(m: CellModel) -> ValidationReport:
    rep = ValidationReport(m.name)
    bpos = m.boundary_position

    ok = m.theta >= 2 and m.mu >= 2
    rep.checks["arity"] = CheckResult(ok, None if ok else {"theta": m.theta, "mu": m.mu},
                                      "theta >= 2 and mu >= 2")

    witness = None
    for i, s in enumerate(m.slots):
        hit = [v for v in s if v in bpos]
        if len(hit) > 1:
            witness = {"slot": i, "vertices": hit[:2]}
            break
    rep.checks["F1"] = CheckResult(witness is None, witness, "no slot holds two boundary vertices")

    witness = None
    for i, j in itertools.combinations(range(m.mu), 2):
        shared = sorted(set(m.slots[i]) & set(m.slots[j]))
        if len(shared) > 1:
            witness = {"slots": [i, j], "shared": shared}
            break
    rep.checks["F2"] = CheckResult(witness is None, witness, "two slots share at most one vertex")

    witness = None
    seen: dict[tuple[int, int], int] = {}
    for i, u, v in m.slot_pairs:
        if (u, v) in seen:
            witness = {"pair": [u, v], "slots": [seen[(u, v)], i]}
            break
        seen[(u, v)] = i
    rep.checks["edge_partition"] = CheckResult(witness is None, witness, "every vertex pair lies in at most one slot")

    covered = set(itertools.chain.from_iterable(m.slots))
    missing = [v for v in range(m.vertex_count) if v not in covered]
    rep.checks["coverage"] = CheckResult(not missing, {"vertex": missing[0]} if missing else None,
                                         "every vertex lies in some slot")

    labels = component_labels(m.graph, m.boundary)
    n_inner = int(labels.max()) + 1 if labels.size else 0
    connected = is_connected(m.graph)
    ok = connected and n_inner == 1
    witness = None
    if not connected:
        witness = {"graph_components": int(len(set(component_labels(m.graph).tolist())))}
    elif n_inner != 1:
        witness = {"interior_components": [np.flatnonzero(labels == c).tolist() for c in range(n_inner)]}
    rep.checks["connectivity"] = CheckResult(ok, witness, "model graph and its interior are connected")

    dists = _boundary_distances(m)
    values = set(dists.values())
    ok = len(values) == 1 and None not in values
    witness = None
    if not ok:
        witness = {"distances": [[u, v, d] for (u, v), d in sorted(dists.items())]}
    rep.checks["H2"] = CheckResult(ok, witness, "all boundary pairs are at the same distance")
    if ok:
        rep.nu = values.pop()
    return rep


class ModelError(ValueError):
    pass


def model_parameters(m: CellModel) -> Parameters:
    rep = validate(m)
    if not rep.passed:
        raise ModelError(f"model {m.name!r} fails validation: {sorted(rep.failures())}")
    nu = rep.nu
    lam = diameter(m.graph)
    rho = lam - nu
    delta = len(vertex_boundary(m.graph, m.interior).delta)
    bdeg = {int(m.graph.degrees[v]) for v in m.boundary}
    kt, k = kappa_values(nu, rho)
    return Parameters(
        theta=m.theta, mu=m.mu, nu=nu, lam=lam, rho=rho, delta=delta,
        b=bdeg.pop() if len(bdeg) == 1 else None,
        kappa_tilde=kt, kappa=k,
        dim_predicted=math.log(m.mu) / math.log(nu),
    )


# Built-in models. Vertex names in the comments: boundary first.
_BUILTINS: dict[str, dict[str, Any]] = {
    # path u-a-w
    "line": dict(vertex_count=3, boundary=(0, 2), slots=((0, 1), (1, 2)), anchor_slot=0),
    # corners A,B,C = 0,1,2; midpoints x=3 (AB), y=4 (BC), z=5 (CA)
    "sierpinski": dict(vertex_count=6, boundary=(0, 1, 2), slots=((0, 3, 5), (1, 3, 4), (2, 4, 5)), anchor_slot=0),
    # u=0, m=1, w=2, p=3, q=4: path u-m-w with pendant path m-p-q
    "tree4": dict(vertex_count=5, boundary=(0, 2), slots=((0, 1), (1, 2), (1, 3), (3, 4)), anchor_slot=0),
    # v=0, a=1, v~=2, b=3: 4-cycle v-a-v~-b plus the chord a-b; the chord copy is the origin cell
    "diamond_open": dict(vertex_count=4, boundary=(0, 2),
                         slots=((0, 1), (1, 2), (2, 3), (3, 0), (1, 3)), anchor_slot=4),
    # same rule, anchored on a slot that keeps v in place
    "diamond_fixed": dict(vertex_count=4, boundary=(0, 2),
                          slots=((0, 1), (1, 2), (2, 3), (3, 0), (1, 3)), anchor_slot=0),
    # u=0, w=1, a=2, b=3: u-a plus triangle a-b-w; u-ends on u, a, w, w
    "lopsided3": dict(vertex_count=4, boundary=(0, 1), slots=((0, 2), (2, 3), (1, 3), (1, 2)), anchor_slot=0),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> CellModel:
    try:
        spec = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown built-in model {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    return CellModel(name=name, **spec)
