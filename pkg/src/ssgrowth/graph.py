"""Finite undirected graphs and the combinatorial primitives used everywhere else.

Graphs are stored in CSR form (``indptr``/``indices``) with every neighbor list
sorted ascending. All functions are pure; nothing here mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

DEFAULT_DIAMETER_CAP = 200_000


def _as_ids(vertices: Iterable[int] | np.ndarray, n: int) -> np.ndarray:
    ids = np.unique(np.asarray(list(vertices) if not isinstance(vertices, np.ndarray) else vertices,
                               dtype=np.int64))
    if ids.size and (ids[0] < 0 or ids[-1] >= n):
        raise ValueError(f"vertex id out of range for a graph with {n} vertices")
    return ids


@dataclass(frozen=True, eq=False)
class FiniteGraph:
    """Simple undirected graph on vertices ``0..vertex_count-1``."""

    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]] | np.ndarray) -> "FiniteGraph":
        e = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
        e = e.reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= vertex_count):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        packed = lo * vertex_count + hi
        if np.unique(packed).size != packed.size:
            raise ValueError("duplicate edges are not allowed")
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        mat = sparse.csr_matrix(
            (np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(vertex_count, vertex_count)
        )
        mat.sort_indices()
        return cls(mat.indptr.astype(np.int64), mat.indices.astype(np.int64))

    @property
    def vertex_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.vertex_count)]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        n = self.vertex_count
        return sparse.csr_matrix((np.ones(len(self.indices), dtype=np.int8), self.indices, self.indptr),
                                 shape=(n, n))

    def edges(self) -> np.ndarray:
        """All edges as an ``(E, 2)`` array with ``u < v``, sorted lexicographically."""
        src = np.repeat(np.arange(self.vertex_count, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def subgraph(self, vertices: Iterable[int] | np.ndarray) -> tuple["FiniteGraph", np.ndarray]:
        """Induced subgraph, re-indexed by sorted original id; returns the id map too."""
        ids = _as_ids(vertices, self.vertex_count)
        sub = self.csr[ids][:, ids]
        sub.sort_indices()
        return FiniteGraph(sub.indptr.astype(np.int64), sub.indices.astype(np.int64)), ids


@dataclass(frozen=True, eq=False)
class DistanceMap:
    """Edge-count distances to a source set; unreachable vertices are masked."""

    sources: frozenset[int]
    dist: np.ma.MaskedArray

    def __getitem__(self, v: int) -> int | None:
        if self.dist.mask is not np.ma.nomask and self.dist.mask[v]:
            return None
        return int(self.dist.data[v])

    def reachable(self) -> np.ndarray:
        return ~np.ma.getmaskarray(self.dist)


@dataclass(frozen=True, eq=False)
class BoundaryInfo:
    theta: np.ndarray       # vertex boundary
    delta: np.ndarray       # (k, 2) edges, first endpoint inside the set
    closure: np.ndarray


@dataclass(frozen=True, eq=False)
class Reduction:
    """Reduced graph on ``F``; ``original_ids[i]`` is the vertex of the input graph named ``i``."""

    graph: FiniteGraph
    original_ids: np.ndarray
    trivial: bool = field(default=False)


def bfs_distances(g: FiniteGraph, sources: Iterable[int]) -> DistanceMap:
    src = _as_ids(sources, g.vertex_count)
    if src.size == 0:
        raise ValueError("empty source set")
    raw = csgraph.dijkstra(g.csr, directed=False, indices=src, unweighted=True, min_only=True)
    unreachable = ~np.isfinite(raw)
    data = np.where(unreachable, 0, raw).astype(np.int64)
    return DistanceMap(frozenset(int(s) for s in src), np.ma.masked_array(data, mask=unreachable))


def component_labels(g: FiniteGraph, removed: Iterable[int] | np.ndarray = ()) -> np.ndarray:
    """Label per vertex (-1 for removed vertices); labels ordered by smallest member."""
    n = g.vertex_count
    gone = np.zeros(n, dtype=bool)
    gone[_as_ids(removed, n)] = True
    keep = np.flatnonzero(~gone)
    labels = np.full(n, -1, dtype=np.int64)
    if keep.size == 0:
        return labels
    sub, ids = g.subgraph(keep)
    _, raw = csgraph.connected_components(sub.csr, directed=False)
    # relabel so that label order follows the smallest vertex id of each component
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    labels[ids] = rank[raw]
    return labels


def components(g: FiniteGraph, removed: Iterable[int] | np.ndarray = ()) -> list[np.ndarray]:
    labels = component_labels(g, removed)
    members = np.flatnonzero(labels >= 0)
    if members.size == 0:
        return []
    order = np.argsort(labels[members], kind="stable")
    sorted_members = members[order]
    cuts = np.flatnonzero(np.diff(labels[sorted_members])) + 1
    return np.split(sorted_members, cuts)


def boundary(g: FiniteGraph, C: Iterable[int] | np.ndarray) -> BoundaryInfo:
    ids = _as_ids(C, g.vertex_count)
    inside = np.zeros(g.vertex_count, dtype=bool)
    inside[ids] = True
    src = np.repeat(ids, g.degrees[ids])
    dst = g.csr[ids].indices.astype(np.int64)
    out = ~inside[dst]
    delta = np.column_stack([src[out], dst[out]]).astype(np.int64).reshape(-1, 2)
    theta = np.unique(dst[out])
    return BoundaryInfo(theta=theta, delta=delta, closure=np.union1d(ids, theta))


def volume(g: FiniteGraph, A: Iterable[int] | np.ndarray) -> int:
    return int(g.degrees[_as_ids(A, g.vertex_count)].sum())


def reduce(g: FiniteGraph, F: Iterable[int] | np.ndarray) -> Reduction:
    """Reduced graph on F: x~y iff some component of V minus F has both in its boundary."""
    n = g.vertex_count
    fids = _as_ids(F, n)
    if fids.size == 0:
        raise ValueError("cannot reduce onto an empty vertex set")
    labels = component_labels(g, fids)
    in_f = labels < 0
    # (component, F-vertex) incidences
    edges = g.edges()
    a, b = edges[:, 0], edges[:, 1]
    mixed = in_f[a] ^ in_f[b]
    comp = np.where(in_f[a[mixed]], labels[b[mixed]], labels[a[mixed]])
    fv = np.where(in_f[a[mixed]], a[mixed], b[mixed])
    inc = np.unique(np.column_stack([comp, fv]), axis=0) if comp.size else np.empty((0, 2), np.int64)
    pairs: list[np.ndarray] = []
    if len(inc):
        cuts = np.flatnonzero(np.diff(inc[:, 0])) + 1
        for group in np.split(inc[:, 1], cuts):
            if group.size > 1:
                iu, ju = np.triu_indices(group.size, k=1)
                pairs.append(np.column_stack([group[iu], group[ju]]))
    rename = np.full(n, -1, dtype=np.int64)
    rename[fids] = np.arange(fids.size)
    if pairs:
        red = rename[np.unique(np.concatenate(pairs), axis=0)]
    else:
        red = np.empty((0, 2), dtype=np.int64)
    return Reduction(FiniteGraph.from_edges(fids.size, red), fids, trivial=(fids.size == n))


def is_connected(g: FiniteGraph) -> bool:
    if g.vertex_count == 0:
        return True
    ncomp, _ = csgraph.connected_components(g.csr, directed=False)
    return ncomp == 1


def eccentricities(g: FiniteGraph, sources: Sequence[int] | np.ndarray | None = None,
                   chunk: int = 256) -> np.ndarray:
    """Exact eccentricity of each source (all vertices by default), by chunked BFS."""
    src = np.arange(g.vertex_count) if sources is None else np.asarray(sources, dtype=np.int64)
    out = np.empty(src.size, dtype=np.int64)
    for start in range(0, src.size, chunk):
        block = src[start:start + chunk]
        d = csgraph.shortest_path(g.csr, method="D", directed=False, unweighted=True, indices=block)
        if not np.all(np.isfinite(d)):
            raise ValueError("graph is disconnected")
        out[start:start + block.size] = d.max(axis=1).astype(np.int64)
    return out


def diameter(g: FiniteGraph, cap: int = DEFAULT_DIAMETER_CAP, allow_large: bool = False) -> int:
    if g.vertex_count > cap and not allow_large:
        raise ValueError(f"diameter of {g.vertex_count} vertices exceeds cap {cap}; pass allow_large=True")
    if not is_connected(g):
        raise ValueError("graph is disconnected")
    if g.vertex_count <= 1:
        return 0
    return int(eccentricities(g).max())


# --- labeled isomorphism -------------------------------------------------------


def _refine(adj: list[np.ndarray], colors: list[int]) -> list[int]:
    """Colour refinement to a stable partition; new colours are canonical in the signatures."""
    ncolors = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(len(adj))]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == ncolors:
            return new
        colors, ncolors = new, len(table)


def _search(adj: list[np.ndarray], colors: list[int], n1: int) -> dict[int, int] | None:
    classes: dict[int, tuple[list[int], list[int]]] = {}
    for v, c in enumerate(colors):
        left, right = classes.setdefault(c, ([], []))
        (left if v < n1 else right).append(v)
    target = None
    for c in sorted(classes):
        left, right = classes[c]
        if len(left) != len(right):
            return None
        if len(left) > 1 and (target is None or len(left) < len(classes[target][0])):
            target = c
    if target is None:
        return {classes[c][0][0]: classes[c][1][0] - n1 for c in classes}
    left, right = classes[target]
    u = left[0]
    fresh = max(colors) + 1
    for v in right:
        trial = list(colors)
        trial[u] = trial[v] = fresh
        found = _search(adj, _refine(adj, trial), n1)
        if found is not None:
            return found
    return None


def isomorphism(g1: FiniteGraph, l1: Mapping[int, int] | Sequence[int] | np.ndarray,
                g2: FiniteGraph, l2: Mapping[int, int] | Sequence[int] | np.ndarray) -> dict[int, int] | None:
    """Label-preserving isomorphism ``g1 -> g2`` or ``None``.

    Backtracking over (label, degree) colour classes with colour refinement
    after each individualisation. Candidates are tried in ascending vertex id,
    so the result is deterministic. The bijection is checked edge by edge
    before it is returned.
    """
    n1, n2 = g1.vertex_count, g2.vertex_count
    if n1 != n2 or g1.edge_count != g2.edge_count:
        return None
    lab1 = [int(l1[v]) for v in range(n1)]
    lab2 = [int(l2[v]) for v in range(n2)]
    if sorted(zip(lab1, g1.degrees.tolist())) != sorted(zip(lab2, g2.degrees.tolist())):
        return None
    adj = [g1.neighbors(v) for v in range(n1)] + [g2.neighbors(v) + n1 for v in range(n2)]
    init = list(zip(lab1 + lab2, g1.degrees.tolist() + g2.degrees.tolist()))
    table = {s: i for i, s in enumerate(sorted(set(init)))}
    colors = _refine(adj, [table[s] for s in init])
    mapping = _search(adj, colors, n1)
    if mapping is None:
        return None
    perm = np.array([mapping[v] for v in range(n1)], dtype=np.int64)
    e1 = perm[g1.edges()]
    e1.sort(axis=1)
    e1 = e1[np.lexsort((e1[:, 1], e1[:, 0]))]
    if not np.array_equal(e1, g2.edges()) or any(lab1[v] != lab2[perm[v]] for v in range(n1)):
        raise RuntimeError("isomorphism search produced an invalid bijection")
    return mapping


def label_mismatch(g1: FiniteGraph, l1: Sequence[int] | np.ndarray,
                   g2: FiniteGraph, l2: Sequence[int] | np.ndarray) -> dict | None:
    """First (label, degree) class whose sizes differ, as a human-readable witness."""
    from collections import Counter

    c1 = Counter(zip((int(x) for x in l1), g1.degrees.tolist()))
    c2 = Counter(zip((int(x) for x in l2), g2.degrees.tolist()))
    for key in sorted(set(c1) | set(c2)):
        if c1[key] != c2[key]:
            return {"label": key[0], "degree": key[1], "count_left": c1[key], "count_right": c2[key]}
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return {"vertices": [g1.vertex_count, g2.vertex_count], "edges": [g1.edge_count, g2.edge_count]}
    return None
