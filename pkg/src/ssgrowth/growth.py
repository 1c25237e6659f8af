"""Ball growth in the degree-exact region of ``G_n`` and growth-dimension estimates.

A ball ``B(x, r)`` computed in ``G_n`` is exactly the ball of the infinite graph
as long as ``r`` is below the distance from ``x`` to the outer boundary: any
geodesic leaving the closed top cell has to cross that boundary, and every
vertex strictly inside already has its full degree. ``safe_radius`` is that
distance minus one; nothing beyond it is ever measured or extrapolated.

Global lower/upper growth is taken over admissible centers only (optionally a
deterministic subsample of them). That gives one-sided brackets of the
infinite-graph quantities: the reported lower value is >= the true infimum and
the reported upper value is <= the true supremum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._kernels import ball_volumes
from .graph import bfs_distances
from .invariants import deep_parameters
from .model import CellModel, model_parameters
from .reports import TheoremReport
from .substitution import HierarchicalGraph, generate

DEFAULT_MAX_CENTERS = 400


@dataclass
class GrowthCurve:
    center: int
    safe_radius: int
    volumes: np.ndarray   # V_x(0..safe_radius)


@dataclass
class GlobalGrowth:
    radius: int
    lower: int
    upper: int
    centers: int
    bracketing: str = "reported lower >= true inf, reported upper <= true sup"


@dataclass
class DoublingResult:
    ratio: float
    center: int
    radius: int
    pairs: int


@dataclass
class DimensionEstimate:
    slope_lower: float
    slope_upper: float
    r_min: int
    r_max: int
    residual_lower: float
    residual_upper: float
    dim_predicted: float
    radii: list[int] = field(default_factory=list)
    lower: list[int] = field(default_factory=list)
    upper: list[int] = field(default_factory=list)
    centers: list[int] = field(default_factory=list)
    window_slopes_lower: list[float] = field(default_factory=list)
    window_slopes_upper: list[float] = field(default_factory=list)

    @property
    def deviation(self) -> float:
        return max(abs(self.slope_lower - self.dim_predicted), abs(self.slope_upper - self.dim_predicted))

    @property
    def residual(self) -> float:
        return max(self.residual_lower, self.residual_upper)

    @property
    def liminf_proxy(self) -> float:
        return min(self.window_slopes_lower, default=self.slope_lower)

    @property
    def limsup_proxy(self) -> float:
        return max(self.window_slopes_upper, default=self.slope_upper)

    def to_dict(self) -> dict:
        return {
            "slope_lower": self.slope_lower, "slope_upper": self.slope_upper,
            "fit_range": [self.r_min, self.r_max],
            "residual_lower": self.residual_lower, "residual_upper": self.residual_upper,
            "dim_predicted": self.dim_predicted, "deviation": self.deviation,
            "liminf_proxy": self.liminf_proxy, "limsup_proxy": self.limsup_proxy,
            "radii": self.radii, "lower": self.lower, "upper": self.upper,
            "window_slopes_lower": self.window_slopes_lower, "window_slopes_upper": self.window_slopes_upper,
            "center_count": len(self.centers),
        }


def safe_radii(hg: HierarchicalGraph) -> np.ndarray:
    d = bfs_distances(hg.graph, hg.boundary).dist.filled(0)
    return np.maximum(d - 1, 0)


def safe_radius(hg: HierarchicalGraph, x: int) -> int:
    """``d(x, top boundary) - 1`` clamped at 0; top-boundary vertices get 0."""
    return int(safe_radii(hg)[x])


def growth_function(hg: HierarchicalGraph, x: int) -> GrowthCurve:
    safe = safe_radius(hg, x)
    if safe < 1:
        raise ValueError(f"vertex {x} has safe radius {safe}; its balls are not exact at any r >= 1")
    d = bfs_distances(hg.graph, [x]).dist
    near = np.flatnonzero(~np.ma.getmaskarray(d) & (d.filled(safe + 1) <= safe))
    per_radius = np.bincount(d.data[near], weights=hg.graph.degrees[near], minlength=safe + 1)
    return GrowthCurve(x, safe, np.cumsum(per_radius).astype(np.int64))


def ball_volume_table(hg: HierarchicalGraph, centers: np.ndarray, radii: np.ndarray,
                      limits: np.ndarray | None = None) -> np.ndarray:
    """``table[i, j] = V_{centers[i]}(radii[j])`` (or -1 beyond the center's limit, default its safe radius)."""
    centers = np.asarray(centers, dtype=np.int64)
    radii = np.asarray(radii, dtype=np.int64)
    if limits is None:
        limits = safe_radii(hg)[centers]
    limits = np.minimum(np.asarray(limits, dtype=np.int64), radii.max(initial=0))
    out = np.empty((centers.size, radii.size), dtype=np.int64)
    g = hg.graph
    ball_volumes(g.indptr, g.indices, g.degrees.astype(np.int64), centers, limits, radii, out)
    return out


def admissible_centers(hg: HierarchicalGraph, r: int, max_centers: int | None = None) -> np.ndarray:
    """Non-boundary vertices with safe radius >= r, optionally an evenly strided deterministic subsample.

    Top-boundary vertices are excluded even at r = 0: their degree in G_n is not their degree in the limit.
    """
    ids = np.flatnonzero((safe_radii(hg) >= r) & ~hg.top_boundary_mask)
    if max_centers is not None and ids.size > max_centers:
        ids = ids[np.linspace(0, ids.size - 1, max_centers).round().astype(np.int64)]
    return ids


def global_growth(hg: HierarchicalGraph, r: int, max_centers: int | None = None) -> GlobalGrowth:
    centers = admissible_centers(hg, r, max_centers)
    if centers.size == 0:
        raise ValueError(f"no vertex of G_{hg.n} has safe radius >= {r}")
    vols = ball_volume_table(hg, centers, np.array([r]))[:, 0]
    return GlobalGrowth(r, int(vols.min()), int(vols.max()), int(centers.size))


def doubling_ratio(hg: HierarchicalGraph, max_centers: int | None = DEFAULT_MAX_CENTERS) -> DoublingResult:
    """Largest ``V_x(2r) / V_x(r)`` over admissible ``(x, r)``, ``r >= 1``, ``2r <= safe_radius(x)``."""
    centers = admissible_centers(hg, 2, max_centers)
    if centers.size == 0:
        raise ValueError("no vertex has safe radius >= 2")
    safe = safe_radii(hg)[centers]
    radii = np.arange(int(safe.max()) + 1)
    table = ball_volume_table(hg, centers, radii, safe)
    best = (0.0, -1, -1)
    pairs = 0
    for i, x in enumerate(centers.tolist()):
        top = int(safe[i]) // 2
        rs = np.arange(1, top + 1)
        ratios = table[i, 2 * rs] / table[i, rs]
        pairs += rs.size
        j = int(np.argmax(ratios))
        if ratios[j] > best[0]:
            best = (float(ratios[j]), x, int(rs[j]))
    return DoublingResult(best[0], best[1], best[2], pairs)


def _fit(r: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of log v against log r, and the RMS residual."""
    x, y = np.log(r), np.log(v)
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


def _window_slopes(r: np.ndarray, v: np.ndarray, window: int = 3) -> list[float]:
    return [_fit(r[i:i + window], v[i:i + window])[0] for i in range(len(r) - window + 1)]


def ladder(nu: int, top: int) -> np.ndarray:
    """``nu, nu^2, ...`` up to ``top``."""
    out = []
    r = nu
    while r <= top:
        out.append(r)
        r *= nu
    return np.array(out, dtype=np.int64)


def estimate_dimensions(hg: HierarchicalGraph, max_centers: int | None = DEFAULT_MAX_CENTERS,
                        window: int = 3, r_min: int | None = None, r_max: int | None = None) -> DimensionEstimate:
    """Fit growth exponents of the lower and upper global growth on the nu-ladder.

    By default every admissible ladder radius ``nu, nu^2, ...`` is used;
    ``r_min``/``r_max`` restrict the fit range.  Each ladder radius uses up to
    ``max_centers`` admissible centers; every center's volumes at all ladder
    radii come from a single truncated BFS.
    """
    p = model_parameters(hg.model)
    safe = safe_radii(hg)
    radii = ladder(p.nu, int(safe.max()))
    if r_min is not None:
        radii = radii[radii >= r_min]
    if r_max is not None:
        radii = radii[radii <= r_max]
    if radii.size < 3:
        raise ValueError(f"only {radii.size} ladder radii are admissible in G_{hg.n}; need 3")
    chosen = np.unique(np.concatenate([admissible_centers(hg, int(r), max_centers) for r in radii]))
    limits = safe[chosen]
    table = ball_volume_table(hg, chosen, radii, limits)
    lower, upper = [], []
    for j, r in enumerate(radii):
        col = table[:, j]
        col = col[col >= 0]
        lower.append(int(col.min()))
        upper.append(int(col.max()))
    lo, hi = np.array(lower, dtype=float), np.array(upper, dtype=float)
    rr = radii.astype(float)
    s_lo, res_lo = _fit(rr, lo)
    s_hi, res_hi = _fit(rr, hi)
    return DimensionEstimate(
        slope_lower=s_lo, slope_upper=s_hi, r_min=int(radii[0]), r_max=int(radii[-1]),
        residual_lower=res_lo, residual_upper=res_hi, dim_predicted=p.dim_predicted,
        radii=radii.tolist(), lower=lower, upper=upper, centers=chosen.tolist(),
        window_slopes_lower=_window_slopes(rr, lo, window), window_slopes_upper=_window_slopes(rr, hi, window),
    )


def sandwich_radius(nu: int, rho: int, n: int) -> int:
    return nu ** n + rho * (nu ** (n - 1) * (nu + 1) - 2) // (nu - 1)


def sandwich_bounds(m: CellModel, c: int, M: int, n: int) -> tuple[Fraction | float, Fraction | float]:
    """Lower and upper growth-sandwich bounds at ``r_n`` (exact rationals when rho = 0)."""
    p = model_parameters(m)
    t = m.theta * (m.theta - 1)
    tail = t * (c - 1) * (M - 1)
    spread = (c - 1) * m.theta + 1
    if p.rho == 0:
        power = Fraction(m.mu) ** n   # r_n^(log mu / log nu) with r_n = nu^n
        return power * t / Fraction(m.mu) ** p.kappa, power * m.mu ** p.kappa * t * spread + tail
    power = sandwich_radius(p.nu, p.rho, n) ** p.dim_predicted
    return power * t * m.mu ** (-p.kappa), power * m.mu ** p.kappa * t * spread + tail


def check_growth_sandwich(m: CellModel, n_values=range(1, 6), depth: int = 8,
                          max_centers: int | None = None) -> TheoremReport:
    """Check the two-sided growth bound at ``r_n`` on ``G_depth`` for each ``n`` with admissible centers."""
    n_values = list(n_values)
    report = TheoremReport("sandwich", m.name, n_values)
    deep = deep_parameters(m, 4)
    if deep.b is None or deep.b != m.theta - 1 or not (deep.c_stabilized and deep.M_stabilized):
        return report.inapplicable("hypothesis unmet: bounded geometry with stabilized c and M is required")
    hg = generate(m, depth)
    p = model_parameters(m)
    report.facts.update({"depth": depth, "c": deep.c, "M": deep.M, "kappa": p.kappa, "rho": p.rho,
                         "bracketing": "measured min >= true inf; measured max <= true sup"})
    for n in n_values:
        r = sandwich_radius(p.nu, p.rho, n)
        centers = admissible_centers(hg, r, max_centers)
        if centers.size == 0:
            report.notes.append(f"n = {n}: no admissible center at r_n = {r} in G_{depth}; skipped")
            continue
        vols = ball_volume_table(hg, centers, np.array([r]))[:, 0]
        lo_bound, hi_bound = sandwich_bounds(m, deep.c, deep.M, n)
        vmin, vmax = int(vols.min()), int(vols.max())
        as_num = (lambda q: str(q) if isinstance(q, Fraction) and q.denominator != 1 else
                  (int(q) if isinstance(q, Fraction) else q))
        report.measure(n, "lower bound <= min V(r_n)", as_num(lo_bound), vmin, lo_bound <= vmin)
        report.measure(n, "max V(r_n) <= upper bound", as_num(hi_bound), vmax, vmax <= hi_bound)
        cell_volume = m.mu ** n * m.theta * (m.theta - 1)
        report.measure(n, "V_x(r_n) >= closed cell volume for all centers", cell_volume, vmin, vmin >= cell_volume)
        report.facts[f"centers_n{n}"] = int(centers.size)
    return report.finish()
