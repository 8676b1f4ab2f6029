"""Domain catalog, curvature charts, and quadrature meshes.

Supported component shapes: disks/balls, axis-aligned ellipses, and
paraboloid-like boundary caps.  A cap is the region between a convex graph
``x_n = gamma(|x'|)`` and the flat lid ``x_n = b``:

    cap = { x : gamma(x') < x_n < b },     gamma(t) = K t^2 + c3 t^3,

with chart radius ``rho = sqrt(M)/K`` and lid height ``b = 1/K``.  The chart
is admissible when, on a 201-point sample grid,

    K_minus t^2 <= gamma(t) <= K_plus t^2,    1/M <= K_pm / K <= M,
    K_plus - K_minus <= L * K^(1 - varsigma),

and the remainder ``gamma - K t^2`` stays within the declared cubic
magnitude.  Everything here is deterministic: identical inputs produce
bit-identical meshes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional
import warnings

import numpy as np
from scipy.optimize import brentq
from scipy.special import ellipe

from .elastic import content_id
from .errors import (
    ChartInvalid,
    CoincidentPoints,
    DisjointnessViolated,
    KTooSmall,
    MeshTooCoarse,
    SingleComponent,
    UnsupportedDimension,
)

CHART_SAMPLES = 201
_BOUNDARY_SCAN = 2048


@dataclass(frozen=True)
class DomainComponent:
    """One connected piece of a scattering domain."""

    kind: str                     # "disk" | "ball" | "ellipse" | "cap"
    params: dict
    center: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


@dataclass(frozen=True)
class KCurvatureChart:
    """Admissible curvature data at a boundary point (taken as the origin)."""

    K: float
    K_minus: float
    K_plus: float
    L: float
    M: float
    varsigma: float
    rho: float
    b: float
    cubic: float
    gamma: Callable[[np.ndarray], np.ndarray] = field(repr=False)


@dataclass(frozen=True)
class DomainGeometry:
    """Union of disjoint components, optionally carrying a curvature chart."""

    components: tuple
    dim: int
    chart: Optional[KCurvatureChart] = None


@dataclass(frozen=True)
class QuadratureMesh:
    """Positive-weight volume quadrature.

    ``style`` is ``"cell"`` for near-uniform square-cell meshes (the only
    style accepted by the singular potential solvers) or ``"smooth"`` for
    high-order meshes meant for smooth integrands.
    """

    nodes: np.ndarray
    weights: np.ndarray
    h: float
    style: str
    mesh_id: str
    measure: Optional[float] = None


@dataclass(frozen=True)
class BoundaryMesh:
    nodes: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    h: float
    tags: tuple
    mesh_id: str


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def disk(radius: float, center=(0.0, 0.0), dim: int = 2) -> DomainGeometry:
    if radius <= 0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=float)
    if center.shape != (dim,):
        raise ValueError(f"center must have length {dim}")
    kind = "disk" if dim == 2 else "ball"
    comp = DomainComponent(kind=kind, params={"radius": float(radius)}, center=center)
    return DomainGeometry(components=(comp,), dim=dim)


def ellipse(a: float, b: float, center=(0.0, 0.0)) -> DomainGeometry:
    if a <= 0 or b <= 0:
        raise ValueError("semi-axes must be positive")
    comp = DomainComponent(kind="ellipse",
                           params={"a": float(a), "b": float(b)},
                           center=np.asarray(center, dtype=float))
    return DomainGeometry(components=(comp,), dim=2)


def union(*domains: DomainGeometry) -> DomainGeometry:
    dims = {d.dim for d in domains}
    if len(dims) != 1:
        raise UnsupportedDimension("all components must share one ambient dimension")
    comps = tuple(c for d in domains for c in d.components)
    geo = DomainGeometry(components=comps, dim=dims.pop())
    if len(comps) > 1:
        sep = component_separation(geo, warn=False)
        if sep <= 0.0:
            warnings.warn("component closures touch or overlap", DisjointnessViolated)
    return geo


def make_cap_domain(K: float, L: float, M: float, varsigma: float,
                    cubic: float = 0.0, dim: int = 2) -> DomainGeometry:
    """Build a cap domain and validate its curvature chart.

    ``cubic`` is the declared magnitude of the graph's cubic perturbation:
    ``gamma(t) = K t^2 + cubic * t^3``.  Raises ``ChartInvalid`` when any
    chart inequality fails on the sample grid and ``KTooSmall`` for K < e.
    """
    if dim not in (2, 3):
        raise UnsupportedDimension(f"dim must be 2 or 3, got {dim}")
    if K < math.e:
        raise KTooSmall(f"need K >= e, got K={K}")
    if M < 1.0:
        raise ChartInvalid(f"need M >= 1, got M={M}")
    if L <= 0.0:
        raise ChartInvalid(f"need L > 0, got L={L}")
    if not (0.0 < varsigma <= 1.0):
        raise ChartInvalid(f"need varsigma in (0, 1], got {varsigma}")
    rho = math.sqrt(M) / K
    b = 1.0 / K
    c3 = float(cubic)

    def gamma(t):
        t = np.asarray(t, dtype=float)
        return K * t ** 2 + c3 * t ** 3

    # Chart validation on the sample grid.
    t = np.linspace(0.0, rho, CHART_SAMPLES)
    g = gamma(t)
    if g[0] != 0.0:
        raise ChartInvalid("gamma(0) must vanish")
    if np.any(g[1:] <= 0.0):
        raise ChartInvalid("gamma must be positive away from the contact point")
    ratio = g[1:] / t[1:] ** 2
    k_minus = float(np.min(ratio))
    k_plus = float(np.max(ratio))
    # round-off slack so the tight case M = 1 with an exact paraboloid passes
    if not (1.0 / M <= k_minus / K * (1.0 + 1e-12)
            and k_plus / K <= M * (1.0 + 1e-12)):
        raise ChartInvalid(
            f"curvature ratio out of [1/M, M]: K-/K={k_minus / K:.6g}, "
            f"K+/K={k_plus / K:.6g}, M={M}")
    if k_plus - k_minus > L * K ** (1.0 - varsigma) * (1.0 + 1e-12):
        raise ChartInvalid(
            f"K_plus - K_minus = {k_plus - k_minus:.6g} exceeds "
            f"L*K^(1-varsigma) = {L * K ** (1.0 - varsigma):.6g}")
    remainder = np.abs(g[1:] - K * t[1:] ** 2)
    if np.any(remainder > abs(c3) * t[1:] ** 3 + 1e-14 * K * t[1:] ** 2):
        raise ChartInvalid("graph remainder exceeds the declared cubic magnitude")

    chart = KCurvatureChart(K=K, K_minus=k_minus, K_plus=k_plus, L=L, M=M,
                            varsigma=varsigma, rho=rho, b=b, cubic=c3, gamma=gamma)
    comp = DomainComponent(kind="cap",
                           params={"K": K, "b": b, "rho": rho, "cubic": c3,
                                   "x1max": _cap_halfwidth(chart)},
                           center=np.zeros(dim))
    return DomainGeometry(components=(comp,), dim=dim, chart=chart)


def _cap_halfwidth(chart: KCurvatureChart) -> float:
    """Radial extent of the cap: smallest t > 0 with gamma(t) = b."""
    f = lambda t: chart.gamma(t) - chart.b
    ts = np.linspace(0.0, chart.rho, 4096)
    vals = f(ts)
    idx = np.nonzero(vals[1:] >= 0.0)[0]
    if idx.size == 0:
        # gamma(rho) >= b is guaranteed by M >= 1 up to roundoff
        return chart.rho
    i = idx[0] + 1
    if vals[i] == 0.0:
        return float(ts[i])
    return float(brentq(f, ts[i - 1], ts[i], xtol=1e-15))


# ---------------------------------------------------------------------------
# inside tests and boundary parameterizations
# ---------------------------------------------------------------------------

def _component_inside(comp: DomainComponent, pts: np.ndarray) -> np.ndarray:
    x = pts - comp.center
    if comp.kind in ("disk", "ball"):
        return np.linalg.norm(x, axis=1) < comp.params["radius"]
    if comp.kind == "ellipse":
        return (x[:, 0] / comp.params["a"]) ** 2 + (x[:, 1] / comp.params["b"]) ** 2 < 1.0
    if comp.kind == "cap":
        K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
        t = np.abs(x[:, 0]) if x.shape[1] == 2 else np.linalg.norm(x[:, :-1], axis=1)
        g = K * t ** 2 + c3 * t ** 3
        return (x[:, -1] > g) & (x[:, -1] < b)
    raise UnsupportedDimension(f"unknown component kind {comp.kind!r}")


def inside(domain: DomainGeometry, pts) -> np.ndarray:
    """Boolean mask: which points lie strictly inside any component."""
    x = np.atleast_2d(np.asarray(pts, dtype=float))
    mask = np.zeros(x.shape[0], dtype=bool)
    for comp in domain.components:
        mask |= _component_inside(comp, x)
    return mask


def _boundary_points(comp: DomainComponent, n: int) -> np.ndarray:
    """Dense boundary sample for distance/diameter work (2-D catalog)."""
    if comp.kind == "disk":
        th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        r = comp.params["radius"]
        return comp.center + r * np.stack([np.cos(th), np.sin(th)], axis=1)
    if comp.kind == "ellipse":
        th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return comp.center + np.stack([comp.params["a"] * np.cos(th),
                                       comp.params["b"] * np.sin(th)], axis=1)
    if comp.kind == "cap":
        K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
        w = comp.params["x1max"]
        m = n // 2
        t = np.linspace(-w, w, m)
        graph = np.stack([t, K * t ** 2 + c3 * np.abs(t) ** 3], axis=1)
        lid = np.stack([np.linspace(-w, w, n - m), np.full(n - m, b)], axis=1)
        return comp.center + np.concatenate([graph, lid], axis=0)
    raise UnsupportedDimension(f"no boundary parameterization for {comp.kind!r}")


# ---------------------------------------------------------------------------
# metric quantities
# ---------------------------------------------------------------------------

def diameter(domain: DomainGeometry) -> float:
    """Diameter of the union: largest pairwise point distance of the closure."""
    comps = domain.components
    best = 0.0
    for c in comps:
        best = max(best, _component_diameter(c))
    if len(comps) > 1:
        if domain.dim == 3:
            # 3-D catalog is balls only
            for i in range(len(comps)):
                for j in range(i + 1, len(comps)):
                    a, bc = comps[i], comps[j]
                    d = np.linalg.norm(a.center - bc.center) \
                        + a.params["radius"] + bc.params["radius"]
                    best = max(best, d)
            return best
        clouds = [_boundary_points(c, _BOUNDARY_SCAN) for c in comps]
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if comps[i].kind == "disk" and comps[j].kind == "disk":
                    d = np.linalg.norm(comps[i].center - comps[j].center) \
                        + comps[i].params["radius"] + comps[j].params["radius"]
                else:
                    d = _max_cloud_distance(clouds[i], clouds[j])
                best = max(best, d)
    return best


def _component_diameter(comp: DomainComponent) -> float:
    if comp.kind in ("disk", "ball"):
        return 2.0 * comp.params["radius"]
    if comp.kind == "ellipse":
        return 2.0 * max(comp.params["a"], comp.params["b"])
    if comp.kind == "cap":
        pts = _boundary_points(comp, _BOUNDARY_SCAN)
        return _max_cloud_distance(pts, pts)
    raise UnsupportedDimension(f"unknown component kind {comp.kind!r}")


def _max_cloud_distance(a: np.ndarray, b: np.ndarray) -> float:
    # chunked O(n^2); clouds are a few thousand points
    best = 0.0
    for i in range(0, a.shape[0], 512):
        blk = a[i:i + 512]
        d2 = np.sum((blk[:, None, :] - b[None, :, :]) ** 2, axis=2)
        best = max(best, float(np.sqrt(np.max(d2))))
    return best


def _min_cloud_distance(a: np.ndarray, b: np.ndarray) -> float:
    best = np.inf
    for i in range(0, a.shape[0], 512):
        blk = a[i:i + 512]
        d2 = np.sum((blk[:, None, :] - b[None, :, :]) ** 2, axis=2)
        best = min(best, float(np.sqrt(np.min(d2))))
    return best


def component_separation(domain: DomainGeometry, warn: bool = True) -> float:
    """Minimum distance between closures of distinct components (0 if touching)."""
    comps = domain.components
    if len(comps) < 2:
        raise SingleComponent("separation needs at least two components")
    best = np.inf
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            best = min(best, _pair_separation(comps[i], comps[j]))
    best = max(best, 0.0)
    if warn and best <= 0.0:
        warnings.warn("component closures touch or overlap", DisjointnessViolated)
    return best


def _pair_separation(a: DomainComponent, b: DomainComponent) -> float:
    if a.kind in ("disk", "ball") and b.kind in ("disk", "ball"):
        return float(np.linalg.norm(a.center - b.center)
                     - a.params["radius"] - b.params["radius"])
    pa = _boundary_points(a, _BOUNDARY_SCAN)
    pb = _boundary_points(b, _BOUNDARY_SCAN)
    d = _min_cloud_distance(pa, pb)
    # sampled boundaries of overlapping components can miss penetration;
    # detect overlap via inside-tests of the sampled points
    if np.any(_component_inside(a, pb)) or np.any(_component_inside(b, pa)):
        return 0.0
    return float(d)


def signed_distance(domain: DomainGeometry, x: np.ndarray) -> float:
    """Signed distance to the union boundary, negative inside."""
    x = np.asarray(x, dtype=float)
    if x.shape != (domain.dim,):
        raise UnsupportedDimension(f"point must have length {domain.dim}")
    vals = [_component_signed_distance(c, x) for c in domain.components]
    return float(min(vals))


def _component_signed_distance(comp: DomainComponent, x: np.ndarray) -> float:
    y = x - comp.center
    if comp.kind in ("disk", "ball"):
        return float(np.linalg.norm(y) - comp.params["radius"])
    if comp.kind == "ellipse":
        d = _curve_distance(_boundary_points(comp, _BOUNDARY_SCAN), x)
        d = _refine_ellipse_distance(comp, x, d)
        inside = _component_inside(comp, x[None, :])[0]
        return -d if inside else d
    if comp.kind == "cap":
        d = _cap_boundary_distance(comp, x)
        inside = _component_inside(comp, x[None, :])[0]
        return -d if inside else d
    raise UnsupportedDimension(f"unknown component kind {comp.kind!r}")


def _curve_distance(pts: np.ndarray, x: np.ndarray) -> float:
    return float(np.min(np.linalg.norm(pts - x, axis=1)))


def _refine_ellipse_distance(comp: DomainComponent, x: np.ndarray, d0: float) -> float:
    """Newton refinement of the closest boundary point in the angle parameter."""
    a, b = comp.params["a"], comp.params["b"]
    y = x - comp.center
    th = math.atan2(y[1] / b if b else 0.0, y[0] / a if a else 0.0)
    for _ in range(60):
        c, s = math.cos(th), math.sin(th)
        p = np.array([a * c, b * s])
        dp = np.array([-a * s, b * c])
        d2p = np.array([-a * c, -b * s])
        r = p - y
        f = float(np.dot(r, dp))
        fp = float(np.dot(dp, dp) + np.dot(r, d2p))
        if fp == 0.0:
            break
        step = f / fp
        th -= step
        if abs(step) < 1e-15:
            break
    c, s = math.cos(th), math.sin(th)
    d = float(np.linalg.norm(np.array([a * c, b * s]) - y))
    return min(d, d0)


def _cap_boundary_distance(comp: DomainComponent, x: np.ndarray) -> float:
    K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
    w = comp.params["x1max"]
    y = x - comp.center

    # lid segment
    dx = max(abs(y[0]) - w, 0.0)
    d_lid = math.hypot(dx, y[1] - b)

    # graph curve: coarse scan then Newton on t -> |(t, g(t)) - y|^2 / 2
    def g(t):
        return K * t ** 2 + c3 * abs(t) ** 3

    def gp(t):
        return 2.0 * K * t + 3.0 * c3 * abs(t) * t

    ts = np.linspace(-w, w, _BOUNDARY_SCAN)
    gs = K * ts ** 2 + c3 * np.abs(ts) ** 3
    d2 = (ts - y[0]) ** 2 + (gs - y[1]) ** 2
    t0 = float(ts[np.argmin(d2)])
    t = t0
    for _ in range(60):
        r1 = t - y[0]
        r2 = g(t) - y[1]
        f = r1 + r2 * gp(t)
        fp = 1.0 + gp(t) ** 2 + r2 * (2.0 * K + 6.0 * c3 * abs(t))
        if fp <= 0.0:
            break
        step = f / fp
        t -= step
        t = min(max(t, -w), w)
        if abs(step) < 1e-15:
            break
    d_graph = math.hypot(t - y[0], g(t) - y[1])
    d_graph = min(d_graph, math.sqrt(float(np.min(d2))))
    return min(d_graph, d_lid)


# ---------------------------------------------------------------------------
# meshes
# ---------------------------------------------------------------------------

def _analytic_measure(domain: DomainGeometry):
    total = 0.0
    for comp in domain.components:
        if comp.kind == "disk":
            total += math.pi * comp.params["radius"] ** 2
        elif comp.kind == "ellipse":
            total += math.pi * comp.params["a"] * comp.params["b"]
        elif comp.kind == "cap":
            K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
            w = comp.params["x1max"]
            ts = np.linspace(-w, w, 20001)
            col = b - (K * ts ** 2 + c3 * np.abs(ts) ** 3)
            total += float(np.trapezoid(np.maximum(col, 0.0), ts))
        else:
            return None
    return total


def volume_mesh(domain: DomainGeometry, h: float) -> QuadratureMesh:
    """Near-uniform cell mesh with square-ish cells of side ``h``.

    Disks and ellipses use Cartesian cell centers (weight ``h^2``); caps use
    per-column midpoints.  The singular self-cell correction of the potential
    solvers assumes this style.
    """
    if domain.dim != 2:
        raise UnsupportedDimension("volume meshes are 2-D only")
    if h <= 0:
        raise MeshTooCoarse("h must be positive")
    nodes_l, weights_l = [], []
    for comp in domain.components:
        n, w = _component_cells(comp, h)
        nodes_l.append(n)
        weights_l.append(w)
    nodes = np.concatenate(nodes_l, axis=0)
    weights = np.concatenate(weights_l)
    if nodes.shape[0] == 0:
        raise MeshTooCoarse(f"h={h} produced an empty mesh")
    measure = _analytic_measure(domain)
    mesh = QuadratureMesh(nodes=nodes, weights=weights, h=float(h), style="cell",
                          mesh_id=content_id(nodes, weights), measure=measure)
    _check_measure(mesh)
    return mesh


def _component_cells(comp: DomainComponent, h: float):
    if comp.kind in ("disk", "ellipse"):
        if comp.kind == "disk":
            rx = ry = comp.params["radius"]
        else:
            rx, ry = comp.params["a"], comp.params["b"]
        if h > min(rx, ry):
            raise MeshTooCoarse(f"h={h} exceeds smallest feature {min(rx, ry)}")
        nx = int(math.ceil(2.0 * rx / h))
        ny = int(math.ceil(2.0 * ry / h))
        xs = comp.center[0] + (np.arange(nx) - 0.5 * (nx - 1)) * h
        ys = comp.center[1] + (np.arange(ny) - 0.5 * (ny - 1)) * h
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
        keep = _component_inside(comp, pts)
        pts = pts[keep]
        return pts, np.full(pts.shape[0], h * h)
    if comp.kind == "cap":
        K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
        w = comp.params["x1max"]
        if h > b:
            raise MeshTooCoarse(f"h={h} exceeds cap height {b}")
        n1 = max(int(math.ceil(2.0 * w / h)), 2)
        d1 = 2.0 * w / n1
        xs = -w + (np.arange(n1) + 0.5) * d1
        nodes, weights = [], []
        for x1 in xs:
            g = K * x1 ** 2 + c3 * abs(x1) ** 3
            depth = b - g
            if depth <= 0:
                continue
            n2 = max(int(math.ceil(depth / h)), 1)
            d2 = depth / n2
            ys = g + (np.arange(n2) + 0.5) * d2
            nodes.append(np.stack([np.full(n2, x1), ys], axis=1))
            weights.append(np.full(n2, d1 * d2))
        pts = np.concatenate(nodes, axis=0) + comp.center
        return pts, np.concatenate(weights)
    raise UnsupportedDimension(f"no volume mesh for {comp.kind!r}")


def gauss_mesh(domain: DomainGeometry, n_radial: int = 48,
               n_angular: int = 96) -> QuadratureMesh:
    """High-order quadrature for smooth integrands (far fields, norms).

    Disks/ellipses: Gauss-Legendre in radius times uniform (trapezoidal)
    angles; caps: tensor Gauss-Legendre columns.  Total weight matches the
    measure to machine precision.
    """
    if domain.dim != 2:
        raise UnsupportedDimension("gauss meshes are 2-D only")
    nodes_l, weights_l = [], []
    for comp in domain.components:
        if comp.kind in ("disk", "ellipse"):
            if comp.kind == "disk":
                a = bb = comp.params["radius"]
            else:
                a, bb = comp.params["a"], comp.params["b"]
            r, wr = np.polynomial.legendre.leggauss(n_radial)
            r = 0.5 * (r + 1.0)          # (0,1)
            wr = 0.5 * wr
            th = 2.0 * np.pi * np.arange(n_angular) / n_angular
            wt = 2.0 * np.pi / n_angular
            R, TH = np.meshgrid(r, th, indexing="ij")
            X = comp.center[0] + a * R * np.cos(TH)
            Y = comp.center[1] + bb * R * np.sin(TH)
            W = (wr[:, None] * R) * wt * a * bb
            nodes_l.append(np.stack([X.ravel(), Y.ravel()], axis=1))
            weights_l.append(np.broadcast_to(W, R.shape).ravel().copy())
        elif comp.kind == "cap":
            K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
            w = comp.params["x1max"]
            x1, w1 = np.polynomial.legendre.leggauss(max(n_angular, 16))
            x1 = w * x1
            w1 = w * w1
            x2r, w2r = np.polynomial.legendre.leggauss(max(n_radial, 8))
            nodes, weights = [], []
            for xi, wi in zip(x1, w1):
                g = K * xi ** 2 + c3 * abs(xi) ** 3
                depth = b - g
                if depth <= 0:
                    continue
                ys = g + 0.5 * depth * (x2r + 1.0)
                ws = 0.5 * depth * w2r * wi
                nodes.append(np.stack([np.full(ys.size, xi), ys], axis=1))
                weights.append(ws)
            nodes_l.append(np.concatenate(nodes, axis=0) + comp.center)
            weights_l.append(np.concatenate(weights))
        else:
            raise UnsupportedDimension(f"no gauss mesh for {comp.kind!r}")
    nodes = np.concatenate(nodes_l, axis=0)
    weights = np.concatenate(weights_l)
    h_eff = float(np.sqrt(np.median(weights)))
    measure = _analytic_measure(domain)
    return QuadratureMesh(nodes=nodes, weights=weights, h=h_eff, style="smooth",
                          mesh_id=content_id(nodes, weights), measure=measure)


def boundary_mesh(domain: DomainGeometry, h: float) -> BoundaryMesh:
    """Boundary quadrature with outward unit normals and per-part tags."""
    if domain.dim != 2:
        raise UnsupportedDimension("boundary meshes are 2-D only")
    if h <= 0:
        raise MeshTooCoarse("h must be positive")
    nodes_l, normals_l, weights_l, tags_l = [], [], [], []
    for ci, comp in enumerate(domain.components):
        label = f"c{ci}" if len(domain.components) > 1 else ""
        if comp.kind == "disk":
            r = comp.params["radius"]
            n = max(int(math.ceil(2.0 * np.pi * r / h)), 8)
            th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
            nrm = np.stack([np.cos(th), np.sin(th)], axis=1)
            nodes_l.append(comp.center + r * nrm)
            normals_l.append(nrm)
            weights_l.append(np.full(n, 2.0 * np.pi * r / n))
            tags_l.extend([label + "boundary"] * n)
        elif comp.kind == "ellipse":
            a, bb = comp.params["a"], comp.params["b"]
            n = max(int(math.ceil(2.0 * np.pi * max(a, bb) / h)), 8)
            th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
            pts = np.stack([a * np.cos(th), bb * np.sin(th)], axis=1)
            tang = np.stack([-a * np.sin(th), bb * np.cos(th)], axis=1)
            speed = np.linalg.norm(tang, axis=1)
            nrm = np.stack([tang[:, 1], -tang[:, 0]], axis=1) / speed[:, None]
            # outward check: flip if pointing inward
            flip = np.sum(nrm * pts, axis=1) < 0
            nrm[flip] *= -1.0
            nodes_l.append(comp.center + pts)
            normals_l.append(nrm)
            weights_l.append(speed * 2.0 * np.pi / n)
            tags_l.extend([label + "boundary"] * n)
        elif comp.kind == "cap":
            K, c3, b = comp.params["K"], comp.params["cubic"], comp.params["b"]
            w = comp.params["x1max"]
            n = max(int(math.ceil(2.0 * w / h)), 8)
            d1 = 2.0 * w / n
            t = -w + (np.arange(n) + 0.5) * d1
            g = K * t ** 2 + c3 * np.abs(t) ** 3
            gp = 2.0 * K * t + 3.0 * c3 * np.abs(t) * t
            speed = np.sqrt(1.0 + gp ** 2)
            nrm = np.stack([gp, -np.ones_like(t)], axis=1) / speed[:, None]
            nodes_l.append(comp.center + np.stack([t, g], axis=1))
            normals_l.append(nrm)
            weights_l.append(speed * d1)
            tags_l.extend([label + "graph"] * n)
            nodes_l.append(comp.center + np.stack([t, np.full(n, b)], axis=1))
            normals_l.append(np.tile([0.0, 1.0], (n, 1)))
            weights_l.append(np.full(n, d1))
            tags_l.extend([label + "lid"] * n)
        else:
            raise UnsupportedDimension(f"no boundary mesh for {comp.kind!r}")
    nodes = np.concatenate(nodes_l, axis=0)
    normals = np.concatenate(normals_l, axis=0)
    weights = np.concatenate(weights_l)
    return BoundaryMesh(nodes=nodes, normals=normals, weights=weights, h=float(h),
                        tags=tuple(tags_l), mesh_id=content_id(nodes, weights))


def _check_measure(mesh: QuadratureMesh) -> None:
    if mesh.measure is None:
        return
    total = float(np.sum(mesh.weights))
    if abs(total - mesh.measure) > 0.01 * mesh.measure:
        raise MeshTooCoarse(
            f"quadrature weight {total:.6g} deviates from measure "
            f"{mesh.measure:.6g} by more than 1%")


def boundary_measure(domain: DomainGeometry) -> float:
    """Analytic (or densely integrated) boundary length of the union."""
    total = 0.0
    for comp in domain.components:
        if comp.kind == "disk":
            total += 2.0 * math.pi * comp.params["radius"]
        elif comp.kind == "ellipse":
            a, b = comp.params["a"], comp.params["b"]
            big, small = max(a, b), min(a, b)
            ecc2 = 1.0 - (small / big) ** 2
            total += 4.0 * big * float(ellipe(ecc2))
        elif comp.kind == "cap":
            K, c3 = comp.params["K"], comp.params["cubic"]
            w = comp.params["x1max"]
            ts = np.linspace(-w, w, 20001)
            gp = 2.0 * K * ts + 3.0 * c3 * np.abs(ts) * ts
            total += float(np.trapezoid(np.sqrt(1.0 + gp ** 2), ts)) + 2.0 * w
        else:
            raise UnsupportedDimension(f"no boundary measure for {comp.kind!r}")
    return total
