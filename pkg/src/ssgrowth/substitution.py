"""Iterated substitution: building the n-cell graph of a cell model.

``G_1`` is the model graph and ``G_{n+1}`` is the model with every slot clique
replaced by a copy of ``G_n`` (top-down recursion). A vertex of ``G_n`` is
addressed by the path of slot indices leading to the copy that created it and
the model vertex it is in that copy::

    (depth, code, v)    code = path digits read in base mu

A boundary vertex of the copy at ``path + (s,)`` is the same vertex as
``(path, slots[s][j])`` when it is ``boundary[j]`` of the copy, so every vertex
has exactly one *creation address*: either a top-level model vertex or a
non-boundary vertex of some copy. Canonical ids enumerate creation addresses
in ``(depth, code, v)`` order, which makes the ids of the top model vertices
equal to the model ids and keeps every id stable across runs.

A hierarchy may use a different rule at each depth (``rules[d]`` drives the
copies at depth ``d``). Uniform hierarchies come from :func:`generate`; mixed
ones exist only to build negative controls for the self-similarity check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .graph import FiniteGraph, isomorphism, label_mismatch, reduce
from .model import CellModel
from .reports import TheoremReport

DEFAULT_EDGE_CAP = 2 ** 22
DEFAULT_K_MAX = 6


class CapExceeded(ValueError):
    """A requested graph would exceed the configured edge cap."""


def predicted_edge_count(m: CellModel, n: int) -> int:
    return m.mu ** n * m.theta * (m.theta - 1) // 2


def check_cap(m: CellModel, n: int, edge_cap: int = DEFAULT_EDGE_CAP) -> None:
    if n < 1:
        raise ValueError("depth must be at least 1")
    edges = predicted_edge_count(m, n)
    if edges > edge_cap:
        raise CapExceeded(f"G_{n} of {m.name!r} would have mu^n = {m.mu ** n} cells and {edges} edges, "
                          f"over the edge cap {edge_cap}")


class _Addressing:
    """Address arithmetic for a hierarchy ``rules[0..n-1]``."""

    def __init__(self, rules: Sequence[CellModel]):
        self.rules = tuple(rules)
        self.n = len(self.rules)
        top = self.rules[0]
        self.theta, self.mu = top.theta, top.mu
        for r in self.rules:
            if r.theta != self.theta or r.mu != self.mu:
                raise ValueError("all rules of a hierarchy need the same theta and mu")
        width = max(r.vertex_count for r in self.rules)
        self.bpos = np.full((self.n, width), -1, dtype=np.int64)
        self.irank = np.full((self.n, width), -1, dtype=np.int64)
        self.slots = np.zeros((self.n, self.mu, self.theta), dtype=np.int64)
        self.bnd = np.zeros((self.n, self.theta), dtype=np.int64)
        self.inner = np.zeros(self.n, dtype=np.int64)
        for d, r in enumerate(self.rules):
            self.bpos[d, list(r.boundary)] = np.arange(self.theta)
            self.irank[d, r.interior] = np.arange(r.interior.size)
            self.slots[d] = np.asarray(r.slots)
            self.bnd[d] = r.boundary
            self.inner[d] = r.interior.size
        # first id of the vertices created at each depth
        self.base = np.zeros(self.n + 1, dtype=np.int64)
        self.base[1] = top.vertex_count
        for d in range(1, self.n):
            self.base[d + 1] = self.base[d] + self.mu ** d * self.inner[d]

    @property
    def vertex_count(self) -> int:
        return int(self.base[self.n])

    def canonical(self, d: np.ndarray, c: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        d, c, v = (np.array(x, dtype=np.int64, copy=True) for x in (d, c, v))
        for dd in range(int(d.max(initial=0)), 0, -1):
            sel = np.flatnonzero(d == dd)
            if dd < self.n:
                sel = sel[self.bpos[dd, v[sel]] >= 0]
                j = self.bpos[dd, v[sel]]
            else:  # a clique at depth n: v carries a boundary position
                j = v[sel]
            s = c[sel] % self.mu
            c[sel] //= self.mu
            v[sel] = self.slots[dd - 1, s, j]
            d[sel] = dd - 1
        return d, c, v

    def ids(self, d, c, v) -> np.ndarray:
        d, c, v = self.canonical(d, c, v)
        out = v.copy()
        deep = d > 0
        dd = d[deep]
        out[deep] = self.base[dd] + c[deep] * self.inner[dd] + self.irank[dd, v[deep]]
        return out

    def copy_boundary(self, depth: int, codes: np.ndarray) -> np.ndarray:
        """Ids of the ordered boundary of the copies ``codes`` at ``depth`` (``depth <= n``)."""
        codes = np.asarray(codes, dtype=np.int64)
        if depth == self.n:
            vs = np.broadcast_to(np.arange(self.theta), (codes.size, self.theta))
        else:
            vs = np.broadcast_to(self.bnd[depth], (codes.size, self.theta))
        cs = np.repeat(codes, self.theta)
        ds = np.full(cs.size, depth, dtype=np.int64)
        return self.ids(ds, cs, vs.reshape(-1)).reshape(codes.size, self.theta)

    def addresses(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Creation address of every vertex, in canonical id order."""
        top = self.rules[0]
        ds, cs, vs = [np.zeros(top.vertex_count, np.int64)], [np.zeros(top.vertex_count, np.int64)], \
            [np.arange(top.vertex_count, dtype=np.int64)]
        for d in range(1, self.n):
            interior = self.rules[d].interior
            count = self.mu ** d
            ds.append(np.full(count * interior.size, d, dtype=np.int64))
            cs.append(np.repeat(np.arange(count, dtype=np.int64), interior.size))
            vs.append(np.tile(interior.astype(np.int64), count))
        return np.concatenate(ds), np.concatenate(cs), np.concatenate(vs)


@dataclass(frozen=True)
class Cell:
    level: int
    index: int
    interior: np.ndarray = field(repr=False)
    boundary: tuple[int, ...]
    parent: int | None
    slot_path: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class HierarchicalGraph:
    """The n-cell graph ``G_n`` with F-levels and creation addresses.

    ``level[v]`` is the largest k with v in F^k; the outer boundary has level n.
    """

    rules: tuple[CellModel, ...]
    graph: FiniteGraph
    level: np.ndarray
    depth: np.ndarray
    code: np.ndarray
    model_vertex: np.ndarray

    @property
    def model(self) -> CellModel:
        return self.rules[0]

    @property
    def n(self) -> int:
        return len(self.rules)

    @property
    def boundary(self) -> tuple[int, ...]:
        return self.model.boundary

    @property
    def uniform(self) -> bool:
        return all(r.same_rule(self.model) for r in self.rules)

    @cached_property
    def _addressing(self) -> _Addressing:
        return _Addressing(self.rules)

    def ids_of(self, depth, code, vertex) -> np.ndarray:
        """Canonical ids of arbitrary (possibly non-creation) addresses."""
        return self._addressing.ids(np.atleast_1d(depth), np.atleast_1d(code), np.atleast_1d(vertex))

    @cached_property
    def embedding(self) -> np.ndarray:
        """Ids in this graph of the vertices of ``G_{n-1}`` placed in the anchor slot."""
        if self.n < 2:
            raise ValueError("G_1 has no predecessor to embed")
        d, c, v = _Addressing(self.rules[1:]).addresses()
        return self._addressing.ids(d + 1, self.model.anchor_slot * self.model.mu ** d + c, v)

    @cached_property
    def top_boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.graph.vertex_count, dtype=bool)
        mask[list(self.boundary)] = True
        return mask

    def cell_partition(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """``(cell index per vertex or -1, ordered boundaries)`` of the k-cells."""
        if not 1 <= k <= self.n:
            raise ValueError(f"cell level {k} out of range 1..{self.n}")
        e = self.n - k
        owner = np.full(self.graph.vertex_count, -1, dtype=np.int64)
        inside = (self.level < k) & (self.depth >= e)
        shift = np.asarray(self.model.mu, dtype=np.int64) ** (self.depth[inside] - e)
        owner[inside] = self.code[inside] // shift
        bounds = self._addressing.copy_boundary(e, np.arange(self.model.mu ** e, dtype=np.int64))
        return owner, bounds

    def cells(self, k: int) -> list[Cell]:
        owner, bounds = self.cell_partition(k)
        e, mu = self.n - k, self.model.mu
        members = np.flatnonzero(owner >= 0)
        order = members[np.argsort(owner[members], kind="stable")]
        cuts = np.searchsorted(owner[order], np.arange(1, mu ** e))
        out = []
        for idx, interior in enumerate(np.split(order, cuts)):
            path = tuple(int(x) for x in np.base_repr(idx, mu).zfill(e)[-e:]) if e else ()
            out.append(Cell(level=k, index=idx, interior=interior, boundary=tuple(int(b) for b in bounds[idx]),
                            parent=(idx // mu) if k < self.n else None, slot_path=path))
        return out

    @cached_property
    def cell_tree(self) -> dict[int, list[Cell]]:
        return {k: self.cells(k) for k in range(1, self.n + 1)}

    def labels(self, shift: int = 0) -> np.ndarray:
        """Integer labels encoding F-level (minus ``shift``) and ordered top-boundary position."""
        theta = self.model.theta
        lab = (self.level - shift) * (theta + 1)
        lab[list(self.boundary)] += np.arange(1, theta + 1)
        return lab


def _build(rules: Sequence[CellModel]) -> HierarchicalGraph:
    addr = _Addressing(rules)
    n = addr.n
    d, c, v = addr.addresses()
    level = np.where(d == 0, n - 1, n - 1 - d)
    level[list(rules[0].boundary)] = n
    leaf = rules[-1]
    pairs = np.array([(a, b) for _, a, b in leaf.slot_pairs], dtype=np.int64).reshape(-1, 2)
    if n == 1:
        edges = pairs
    else:
        count = addr.mu ** (n - 1)
        codes = np.repeat(np.arange(count, dtype=np.int64), len(pairs))
        depth = np.full(codes.size, n - 1, dtype=np.int64)
        ends = [addr.ids(depth, codes, np.tile(pairs[:, i], count)) for i in (0, 1)]
        edges = np.column_stack(ends)
    graph = FiniteGraph.from_edges(addr.vertex_count, edges)
    return HierarchicalGraph(tuple(rules), graph, level, d, c, v)


def generate(m: CellModel, n: int, edge_cap: int = DEFAULT_EDGE_CAP) -> HierarchicalGraph:
    """``G_n`` of the model, refusing (before any allocation) if it would exceed ``edge_cap`` edges."""
    check_cap(m, n, edge_cap)
    return _build([m] * n)


def generate_mixed(rules: Sequence[CellModel], edge_cap: int = DEFAULT_EDGE_CAP) -> HierarchicalGraph:
    """Hierarchy with ``rules[d]`` at depth ``d``; used for negative controls."""
    if not rules:
        raise ValueError("need at least one rule")
    check_cap(rules[0], len(rules), edge_cap)
    return _build(rules)


def substitute(m: CellModel, inner: HierarchicalGraph, strict: bool = True) -> HierarchicalGraph:
    """Replace every slot clique of ``m`` by a copy of ``inner`` (explicit gluing).

    Position ``j`` of a slot receives ``inner.boundary[j]``. With ``strict`` the
    inner graph must come from the same rule; ``strict=False`` only requires
    matching theta and mu and is meant for building negative controls.
    """
    if strict and not all(r.same_rule(m) for r in inner.rules):
        raise ValueError(f"inner graph was not generated from model {m.name!r}")
    if inner.model.theta != m.theta or inner.model.mu != m.mu:
        raise ValueError("inner graph has a different theta or mu")
    mu, V = m.mu, m.vertex_count
    N = inner.graph.vertex_count
    inner_bnd = np.asarray(inner.boundary, dtype=np.int64)
    free = np.ones(N, dtype=bool)
    free[inner_bnd] = False
    free_ids = np.flatnonzero(free)
    k = free_ids.size

    total = V + mu * k
    depth = np.zeros(total, dtype=np.int64)
    code = np.zeros(total, dtype=np.int64)
    mvert = np.zeros(total, dtype=np.int64)
    level = np.full(total, inner.n, dtype=np.int64)
    mvert[:V] = np.arange(V)
    level[list(m.boundary)] = inner.n + 1

    edge_blocks = []
    inner_edges = inner.graph.edges()
    for s, slot in enumerate(m.slots):
        where = np.empty(N, dtype=np.int64)
        where[inner_bnd] = slot
        where[free_ids] = V + s * k + np.arange(k)
        new = where[free_ids]
        d = inner.depth[free_ids]
        depth[new] = d + 1
        code[new] = s * mu ** d + inner.code[free_ids]
        mvert[new] = inner.model_vertex[free_ids]
        level[new] = inner.level[free_ids]
        edge_blocks.append(where[inner_edges])

    order = np.lexsort((mvert, code, depth))
    rank = np.empty(total, dtype=np.int64)
    rank[order] = np.arange(total)
    edges = rank[np.concatenate(edge_blocks)]
    graph = FiniteGraph.from_edges(total, edges)
    return HierarchicalGraph((m,) + inner.rules, graph, level[order], depth[order], code[order], mvert[order])


def generate_sequence(m: CellModel, n: int, edge_cap: int = DEFAULT_EDGE_CAP) -> Iterator[HierarchicalGraph]:
    """``G_1, ..., G_n`` by repeated substitution."""
    check_cap(m, n, edge_cap)
    g = _build([m])
    yield g
    for _ in range(n - 1):
        g = substitute(m, g)
        yield g


def cells_at_level(hg: HierarchicalGraph, k: int) -> list[Cell]:
    return hg.cells(k)


# --- self-similarity ------------------------------------------------------------


def check_self_similarity(hg: HierarchicalGraph, reference: CellModel | None = None) -> TheoremReport:
    """For each ``1 <= k < n``: reduce onto level >= k, shift levels by k, compare with ``G_{n-k}``.

    The reference graphs are generated from ``reference`` (default: the top rule).
    The k = 1 bijection is kept in ``artifacts["psi"]`` as ``{vertex of G_n: vertex of G_{n-1}}``.
    """
    ref = reference or hg.model
    report = TheoremReport("selfsim", hg.model.name, list(range(1, hg.n)))
    for k in range(1, hg.n):
        red = reduce(hg.graph, np.flatnonzero(hg.level >= k))
        red_labels = hg.labels(shift=k)[red.original_ids]
        target = generate(ref, hg.n - k, edge_cap=2 ** 62)
        mapping = isomorphism(red.graph, red_labels, target.graph, target.labels())
        found = mapping is not None
        report.measure(k, "reduction isomorphic to G_(n-k)", True, found)
        if found and k == 1:
            report.artifacts["psi"] = {int(red.original_ids[i]): int(j) for i, j in mapping.items()}
        if not found:
            report.witnesses.append({
                "k": k,
                "mismatch": label_mismatch(red.graph, red_labels, target.graph, target.labels()),
            })
    if hg.n < 2:
        report.notes.append("nothing to check below depth 2")
    report.notes.append(f"verified to depth {hg.n}")
    return report.finish()


def verify_reduction_isomorphism(m: CellModel, n: int, edge_cap: int = DEFAULT_EDGE_CAP) -> TheoremReport:
    if n < 2:
        raise ValueError("need n >= 2")
    report = check_self_similarity(generate(m, n, edge_cap))
    report.depths = [n]
    return report


# --- origin detection -----------------------------------------------------------


@dataclass
class OriginInfo:
    stabilizing_power: int | None
    kind: str | None                      # "origin_vertex" | "origin_cell" | None when unresolved
    vertex: int | None = None
    cell: dict | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def resolved(self) -> bool:
        return self.kind is not None

    def to_dict(self) -> dict:
        return {"stabilizing_power": self.stabilizing_power, "kind": self.kind, "vertex": self.vertex,
                "cell": self.cell, "evidence": self.evidence}


def _power_code(a: int, mu: int, k: int) -> int:
    """Code of the path ``(a,) * k``."""
    return sum(a * mu ** i for i in range(k))


def _fixed_vertices(addr: _Addressing, anchor: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertices x of level >= k with phi^k x = x, and the phi^k image of every such candidate."""
    N, mu = addr.n, addr.mu
    d, c, v = addr.addresses()
    ids = np.arange(d.size)
    level = np.where(d == 0, N - 1, N - 1 - d)
    level[list(addr.rules[0].boundary)] = N
    cand = level >= k
    # phi^k prefixes the path with a^k: (path, v) -> (a^k path, v)
    dd, cc, vv = d[cand], c[cand], v[cand]
    top_bnd = (dd == 0) & (addr.bpos[0, vv] >= 0)
    images_d = dd + k
    images_c = _power_code(anchor, mu, k) * mu ** dd + cc
    images_v = np.where((images_d == N) & top_bnd, addr.bpos[0, vv], vv)
    images = addr.ids(images_d, images_c, images_v)
    return ids[cand][images == ids[cand]], images


def _origin_cells(addr: _Addressing, anchor: int, k: int) -> list[int]:
    """Indices of the k-cells C with phi^k(theta C) inside the closure of C."""
    N, mu = addr.n, addr.mu
    e = N - k
    codes = np.arange(mu ** e, dtype=np.int64)
    bounds = addr.copy_boundary(e, codes)
    images = addr.copy_boundary(N, _power_code(anchor, mu, k) * mu ** e + codes)
    d, c, _ = addr.addresses()
    level = np.where(d == 0, N - 1, N - 1 - d)
    level[list(addr.rules[0].boundary)] = N
    owner = np.full(d.size, -1, dtype=np.int64)
    inside = (level < k) & (d >= e)
    owner[inside] = c[inside] // mu ** (d[inside] - e)
    in_interior = owner[images] == codes[:, None]
    in_boundary = (images[:, :, None] == bounds[:, None, :]).any(axis=2)
    return np.flatnonzero((in_interior | in_boundary).all(axis=1)).tolist()


def detect_origin(m: CellModel, depth: int = 3, K_max: int = DEFAULT_K_MAX) -> OriginInfo:
    """Search ``k = 1..K_max`` for the dichotomy of the fixed-point theorem under psi^k.

    Works on the address arithmetic of ``G_N`` and ``G_{N+1}`` with
    ``N = max(depth, k + 1)``; a result is accepted only when it is found at both
    depths and the anchor embedding carries the depth-N witness to the
    depth-(N+1) one.
    """
    a, mu = m.anchor_slot, m.mu
    tried = []
    for k in range(1, K_max + 1):
        N = max(depth, k + 1)
        lo, hi = _Addressing([m] * N), _Addressing([m] * (N + 1))
        embed = lambda dd, cc, vv: hi.ids(dd + 1, a * mu ** dd + cc, vv)  # noqa: E731
        fixed_lo, _ = _fixed_vertices(lo, a, k)
        fixed_hi, _ = _fixed_vertices(hi, a, k)
        d, c, v = lo.addresses()
        carried = np.sort(embed(d[fixed_lo], c[fixed_lo], v[fixed_lo])) if fixed_lo.size else fixed_lo
        entry = {"k": k, "depths": [N, N + 1], "fixed_vertices": [fixed_lo.tolist(), fixed_hi.tolist()]}
        if fixed_lo.size == 1 and fixed_hi.size == 1 and np.array_equal(carried, fixed_hi):
            entry["embedding_carries_witness"] = True
            tried.append(entry)
            return OriginInfo(k, "origin_vertex", vertex=int(fixed_lo[0]), evidence={"search": tried})
        cells_lo, cells_hi = _origin_cells(lo, a, k), _origin_cells(hi, a, k)
        entry["origin_cells"] = [cells_lo, cells_hi]
        if fixed_lo.size == 0 and fixed_hi.size == 0 and len(cells_lo) == 1 and len(cells_hi) == 1:
            e = N - k
            carried_cell = a * mu ** e + cells_lo[0]
            entry["embedding_carries_witness"] = carried_cell == cells_hi[0]
            tried.append(entry)
            if carried_cell == cells_hi[0]:
                idx = cells_lo[0]
                path = [int(x) for x in np.base_repr(idx, mu).zfill(e)[-e:]] if e else []
                bounds = lo.copy_boundary(e, np.array([idx]))[0].tolist()
                image = lo.copy_boundary(N, np.array([_power_code(a, mu, k) * mu ** e + idx]))[0].tolist()
                cell = {"level": k, "depth": N, "index": idx, "slot_path": path,
                        "boundary": bounds, "phi_boundary": image}
                return OriginInfo(k, "origin_cell", cell=cell, evidence={"search": tried})
            continue
        tried.append(entry)
    return OriginInfo(None, None, evidence={"search": tried, "K_max": K_max})
