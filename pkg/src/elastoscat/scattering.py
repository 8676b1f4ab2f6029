"""Medium scattering via the volume integral (Lippmann-Schwinger) equation.

A density contrast ``V`` supported in the domain scatters an incident entire
solution ``u_i`` according to ``u_t + omega^2 P(V u_t) = u_i`` where ``P``
maps a source to its outgoing solution (``P f = -G * f`` with the kernel
normalized against ``-delta``); the scattered field is ``u = u_t - u_i`` and
its far field is the pattern of the equivalent source ``-omega^2 V u_t``.
The dense collocation solve works for any contrast; the Neumann-series mode
exists to exercise the contraction regime and its a-priori bounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .elastic import LameMedium, SampledVectorField, lame_operator_fd
from .errors import (
    DimensionMismatch,
    InvalidDirection,
    InvalidParameter,
    MeshMismatch,
    OutOfRegime,
    QuadratureBudgetExceeded,
    SeriesDiverges,
    SingularSystem,
    UnsupportedDimension,
)
from .geometry import (
    DomainGeometry,
    QuadratureMesh,
    diameter,
    inside,
    signed_distance,
)
from .greens import kupradze_batch, kupradze_tensor, singular_cell_integral
from .source import (
    FarFieldPattern,
    SourceProblem,
    directions_circle,
    farfield_of_source,
)

_SERIES_MAX_TERMS = 200


@dataclass
class MediumScatterer:
    """Density perturbation ``(1 + V)`` supported in the domain.

    ``contrast`` maps batched points to complex values (scalar field); it is
    taken to vanish outside the domain, which the potential assembly enforces
    by meshing the domain only.
    """

    domain: DomainGeometry
    medium: LameMedium
    contrast: Callable
    _v_sup_cache: Optional[float] = None

    def contrast_on(self, pts: np.ndarray) -> np.ndarray:
        vals = np.asarray(self.contrast(pts), dtype=complex)
        if vals.shape != pts.shape[:-1]:
            raise DimensionMismatch(
                f"contrast returned shape {vals.shape}, expected {pts.shape[:-1]}")
        return vals

    def v_sup(self, samples: int = 4096, seed: int = 7) -> float:
        """Sampled sup of |V| over the domain (dense random + mesh-free)."""
        if self._v_sup_cache is None:
            rng = np.random.default_rng(seed)
            lo, hi = _bounding_box(self.domain)
            pts = rng.uniform(lo, hi, size=(samples, self.domain.dim))
            mask = inside(self.domain, pts)
            if not np.any(mask):
                self._v_sup_cache = 0.0
            else:
                self._v_sup_cache = float(np.max(np.abs(self.contrast_on(pts[mask]))))
        return self._v_sup_cache


@dataclass(frozen=True)
class IncidentWave:
    """Entire solution of the homogeneous system used as illumination."""

    kind: str                       # "pressure-plane" | "shear-plane" | "point-source"
    direction: Optional[np.ndarray]
    origin: Optional[np.ndarray]
    medium: LameMedium

    def __call__(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        med = self.medium
        if self.kind == "pressure-plane":
            d = self.direction
            phase = np.exp(1j * med.kappa_p * (pts @ d))
            return phase[:, None] * d
        if self.kind == "shear-plane":
            d = self.direction
            dperp = np.array([-d[1], d[0]])
            phase = np.exp(1j * med.kappa_s * (pts @ d))
            return phase[:, None] * dperp
        # point-source: Green-tensor column against a fixed unit force
        out = np.empty((pts.shape[0], med.dim), dtype=complex)
        force = np.zeros(med.dim)
        force[0] = 1.0
        for i, x in enumerate(pts):
            out[i] = kupradze_tensor(x, self.origin, med) @ force
        return out


@dataclass
class MediumSolve:
    """Total/scattered fields on the mesh plus the far field and diagnostics."""

    u_total: SampledVectorField
    u_scattered: SampledVectorField
    farfield: FarFieldPattern
    series_terms_used: int
    contraction_estimate: float


@dataclass(frozen=True)
class ContractionReport:
    """A-priori smallness diagnostics for the fixed-point argument.

    ``upsilon = eps * v_sup / (s - eps * v_sup)`` bounds the scattered-to-
    incident ratio and ``bound_ut = s / (s - eps * v_sup)`` the total-to-
    incident ratio; both blow up as the product approaches ``s`` and the
    regime flag trips (values still reported) once it is reached.
    """

    epsilon: float
    v_sup: float
    upsilon: float
    bound_u: float
    bound_ut: float
    s_used: float
    out_of_regime: bool


def incident_field(kind: str, params: dict, medium: LameMedium,
                   eval_points) -> SampledVectorField:
    """Sample a plane wave or exterior point source at the given points."""
    wave = make_incident(kind, params, medium)
    pts = np.atleast_2d(np.asarray(eval_points, dtype=float))
    return SampledVectorField(nodes=pts, values=wave(pts), mesh_ref=None)


def make_incident(kind: str, params: dict, medium: LameMedium) -> IncidentWave:
    if medium.dim != 2:
        raise UnsupportedDimension("incident fields are 2-D only")
    if kind in ("pressure-plane", "shear-plane"):
        d = np.asarray(params.get("direction"), dtype=float)
        if d.shape != (2,) or abs(d @ d - 1.0) > 1e-10:
            raise InvalidDirection("direction must be a 2-D unit vector")
        return IncidentWave(kind=kind, direction=d, origin=None, medium=medium)
    if kind == "point-source":
        origin = np.asarray(params.get("origin"), dtype=float)
        if origin.shape != (2,):
            raise InvalidDirection("point-source origin must be a 2-D point")
        return IncidentWave(kind=kind, direction=None, origin=origin, medium=medium)
    raise InvalidDirection(f"unknown incident kind {kind!r}")


def _bounding_box(domain: DomainGeometry):
    los, his = [], []
    for comp in domain.components:
        c = comp.center
        if comp.kind in ("disk", "ball"):
            r = comp.params["radius"]
            los.append(c - r); his.append(c + r)
        elif comp.kind == "ellipse":
            ab = np.array([comp.params["a"], comp.params["b"]])
            los.append(c - ab); his.append(c + ab)
        elif comp.kind == "cap":
            w, b = comp.params["x1max"], comp.params["b"]
            los.append(c + np.array([-w, 0.0])); his.append(c + np.array([w, b]))
        else:
            raise UnsupportedDimension(f"unknown component kind {comp.kind!r}")
    return np.min(los, axis=0), np.max(his, axis=0)


def _potential_matrix(mesh: QuadratureMesh, medium: LameMedium) -> np.ndarray:
    """Dense discretization of the volume potential on the mesh nodes.

    Block ``(i, k)`` is ``w_k G(y_i, y_k)`` with the diagonal block replaced
    by the analytic singular-cell integral; requires a cell-style mesh.
    """
    if mesh.style != "cell":
        raise MeshMismatch("potential collocation needs a cell-style mesh")
    n = mesh.nodes.shape[0]
    nbytes = (2 * n) ** 2 * 16
    if nbytes > 1_073_741_824:
        raise QuadratureBudgetExceeded(
            f"dense potential matrix would take {nbytes / 2**30:.1f} GiB "
            f"({n} nodes); coarsen the mesh")
    mat = np.empty((2 * n, 2 * n), dtype=complex)
    self_block = singular_cell_integral(medium, mesh.h)
    for i in range(n):
        diffs = mesh.nodes[i][None, :] - mesh.nodes
        live = np.ones(n, dtype=bool)
        live[i] = False
        g = np.empty((n, 2, 2), dtype=complex)
        g[live] = kupradze_batch(diffs[live], medium) * mesh.weights[live, None, None]
        g[i] = self_block
        mat[2 * i:2 * i + 2] = np.transpose(g, (1, 0, 2)).reshape(2, 2 * n)
    return mat


def solve_medium(scatterer: MediumScatterer, incident: IncidentWave,
                 mesh: QuadratureMesh, mode: str = "direct-dense",
                 directions=None, series_tol: float = 1e-12) -> MediumSolve:
    """Solve the volume integral equation on the mesh.

    ``direct-dense`` assembles and factors the 2N x 2N collocation system
    ``(I + omega^2 P V) u_t = u_i``; ``neumann-series`` iterates the fixed
    point ``u_t <- u_i - omega^2 P(V u_t)`` and reports the observed
    contraction ratio, refusing to continue when successive corrections grow.
    The far field is radiated by the equivalent source ``-omega^2 V u_t``.
    """
    if scatterer.medium.dim != 2:
        raise UnsupportedDimension("medium solves are 2-D only")
    if mode not in ("direct-dense", "neumann-series"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    if incident.kind == "point-source" and bool(
            inside(scatterer.domain, incident.origin[None, :])[0]):
        raise InvalidDirection("point-source origin must lie outside the scatterer")
    med = scatterer.medium
    nodes = mesh.nodes
    n = nodes.shape[0]
    vvals = scatterer.contrast_on(nodes)
    ui = incident(nodes)
    pot = _potential_matrix(mesh, med)
    vdiag = np.repeat(vvals, 2)
    # P = -(kernel quadrature), so omega^2 P V collocates to -omega^2 pot V
    op = -med.omega ** 2 * pot * vdiag[None, :]

    terms = 1
    contraction = 0.0
    if mode == "direct-dense":
        sys = np.eye(2 * n, dtype=complex) + op
        b = ui.ravel()
        try:
            ut_flat = np.linalg.solve(sys, b)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(str(exc)) from None
        resid = float(np.linalg.norm(sys @ ut_flat - b) / max(np.linalg.norm(b), 1e-300))
        if not np.isfinite(resid) or resid > 1e-8:
            raise SingularSystem(f"collocation residual {resid:.2e}")
        ut = ut_flat.reshape(n, 2)
        contraction = _spectral_norm_estimate(op)
    else:
        b = ui.ravel()
        ut_flat = b.copy()
        term = b.copy()
        base = float(np.linalg.norm(b))
        prev = base
        ratios = []
        while True:
            term = -(op @ term)
            cur = float(np.linalg.norm(term))
            if cur <= series_tol * base:
                break                       # next term negligible: not counted
            if prev > 0.0:
                ratios.append(cur / prev)
            if len(ratios) >= 2 and ratios[-1] >= 1.0 and ratios[-2] >= 1.0:
                raise SeriesDiverges(
                    f"correction ratio {ratios[-1]:.3f} >= 1 at term {terms + 1}")
            ut_flat = ut_flat + term
            prev = cur
            terms += 1
            if terms > _SERIES_MAX_TERMS:
                raise SeriesDiverges(f"no convergence within {_SERIES_MAX_TERMS} terms")
        ut = ut_flat.reshape(n, 2)
        contraction = float(max(ratios)) if ratios else 0.0

    u_sc = ut - ui
    if directions is None:
        directions = _default_directions(med, scatterer.domain)
    equivalent = -med.omega ** 2 * vdiag.reshape(n, 2) * ut
    problem = SourceProblem(domain=scatterer.domain, medium=med,
                            phi=SampledVectorField(nodes=nodes, values=equivalent,
                                                   mesh_ref=mesh.mesh_id))
    ff = farfield_of_source(problem, mesh, directions)
    return MediumSolve(
        u_total=SampledVectorField(nodes=nodes, values=ut, mesh_ref=mesh.mesh_id),
        u_scattered=SampledVectorField(nodes=nodes, values=u_sc, mesh_ref=mesh.mesh_id),
        farfield=ff, series_terms_used=terms, contraction_estimate=contraction)


def _spectral_norm_estimate(op: np.ndarray, iters: int = 12, seed: int = 3) -> float:
    """Power-iteration estimate of the operator 2-norm (diagnostic only)."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.shape[1]) + 1j * rng.standard_normal(op.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        w = op.conj().T @ (op @ v)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        sigma = np.sqrt(nw)
        v = w / nw
    return float(sigma)


def _default_directions(medium: LameMedium, domain: DomainGeometry) -> np.ndarray:
    count = max(64, int(np.ceil(4.0 * medium.kappa_s * diameter(domain))) + 16)
    return directions_circle(count)


def contraction_report(scatterer: MediumScatterer, s: float = 1.0) -> ContractionReport:
    """Evaluate the smallness product and the a-priori field-size bounds.

    ``epsilon = diameter * omega`` and the bounds use the supplied constant
    ``s`` (calibrate it with the bounds module; the analysis only guarantees
    one exists).  Out-of-regime inputs are flagged, not rejected, and the
    ratio fields are set to infinity there.
    """
    if s <= 0.0:
        raise InvalidParameter(f"s must be positive, got {s}")
    eps = diameter(scatterer.domain) * scatterer.medium.omega
    v = scatterer.v_sup()
    prod = eps * v
    if prod >= s:
        return ContractionReport(epsilon=eps, v_sup=v, upsilon=np.inf,
                                 bound_u=np.inf, bound_ut=np.inf, s_used=s,
                                 out_of_regime=True)
    ups = prod / (s - prod)
    return ContractionReport(epsilon=eps, v_sup=v, upsilon=ups, bound_u=ups,
                             bound_ut=s / (s - prod), s_used=s,
                             out_of_regime=False)


def upsilon(eps: float, v_sup: float, s: float = 1.0) -> float:
    """Smallness ratio ``eps*v/(s - eps*v)``, non-decreasing in both arguments."""
    if s <= 0.0:
        raise InvalidParameter(f"s must be positive, got {s}")
    if eps < 0.0 or v_sup < 0.0:
        raise InvalidParameter("eps and v_sup must be nonnegative")
    prod = eps * v_sup
    if prod >= s:
        raise OutOfRegime(f"eps*v = {prod} >= s = {s}")
    return prod / (s - prod)


def pde_residual_check(wave: IncidentWave, point, step: float = 1e-3) -> float:
    """Relative residual of the homogeneous system at one point (oracle hook)."""
    med = wave.medium

    def u_fn(x):
        return wave(x[None, :])[0]

    res = lame_operator_fd(u_fn, np.asarray(point, dtype=float), med,
                           step=step, order=4)
    ref = med.omega ** 2 * np.linalg.norm(u_fn(np.asarray(point, dtype=float)))
    return float(np.linalg.norm(res) / ref)


def lattice_pde_residual(scatterer: MediumScatterer, mesh: QuadratureMesh,
                         u_total_values: np.ndarray,
                         margin_cells: int = 6):
    """Discrete PDE residual of a solved total field on its own mesh lattice.

    Second differences taken directly between lattice neighbors at the mesh
    spacing measure how well the sampled field satisfies the perturbed system
    (elastic operator plus ``omega^2 (1+V)``); nodes within ``margin_cells``
    cells of the boundary are excluded, since the quadrature error
    concentrates there.  Returns ``(max_rel, median_rel, n_interior)`` with
    the residual normalized by ``omega^2 |u|`` per node.
    """
    if mesh.style != "cell":
        raise MeshMismatch("lattice residual needs a cell-style mesh")
    nodes = mesh.nodes
    ut = np.asarray(u_total_values)
    if ut.shape != nodes.shape:
        raise DimensionMismatch(
            f"field shape {ut.shape} does not match mesh {nodes.shape}")
    h = mesh.h
    med = scatterer.medium
    lam, mu, omega = med.lam, med.mu, med.omega
    origin = nodes.min(axis=0)
    keys = np.round((nodes - origin) / h).astype(int)
    index = {(int(k[0]), int(k[1])): i for i, k in enumerate(keys)}

    offsets = [(1, 0), (-1, 0), (0, 1), (0, -1),
               (1, 1), (1, -1), (-1, 1), (-1, -1)]
    rels = []
    margin = margin_cells * h
    vvals = scatterer.contrast_on(nodes)
    for i, k in enumerate(keys):
        if signed_distance(scatterer.domain, nodes[i]) > -margin:
            continue
        nb = [index.get((int(k[0]) + dx, int(k[1]) + dy)) for dx, dy in offsets]
        if any(j is None for j in nb):
            continue
        ip, im, jp, jm, pp, pm, mp_, mm = nb
        u0 = ut[i]
        d11 = (ut[ip] - 2.0 * u0 + ut[im]) / h ** 2
        d22 = (ut[jp] - 2.0 * u0 + ut[jm]) / h ** 2
        d12 = (ut[pp] - ut[pm] - ut[mp_] + ut[mm]) / (4.0 * h ** 2)
        lap = d11 + d22
        grad_div = np.array([d11[0] + d12[1], d12[0] + d22[1]])
        res = mu * lap + (lam + mu) * grad_div + omega ** 2 * (1.0 + vvals[i]) * u0
        rels.append(np.linalg.norm(res) / (omega ** 2 * np.linalg.norm(u0)))
    if not rels:
        raise MeshMismatch(
            f"no interior lattice nodes beyond {margin_cells} cells; refine the mesh")
    rels = np.asarray(rels)
    return float(rels.max()), float(np.median(rels)), int(rels.size)
