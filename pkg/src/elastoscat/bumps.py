"""Manufactured displacement profiles with closed-form derivatives.

A bump is ``u(x) = q(x)^2 A(x)`` where ``q`` is a level function vanishing
on (part of) the boundary and ``A`` is an affine vector amplitude.  Since
``u = q^2 A`` and ``grad u = 2 q grad(q) A + q^2 grad(A)``, both vanish
wherever ``q = 0``, so applying the operator and restricting to the domain
manufactures a source with vanishing Cauchy data there.  All derivatives are
analytic, which keeps the source evaluation exact for polynomial data.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .elastic import FieldJet, LameMedium
from .errors import UnsupportedDimension
from .geometry import DomainGeometry


class LevelFunction:
    """Scalar q with analytic gradient and Hessian (2-D)."""

    def value(self, x):          # pragma: no cover - interface
        raise NotImplementedError

    def gradient(self, x):       # pragma: no cover - interface
        raise NotImplementedError

    def hessian(self, x):        # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class DiskLevel(LevelFunction):
    radius: float
    center: np.ndarray

    def value(self, x):
        y = np.asarray(x, float) - self.center
        return self.radius ** 2 - np.sum(y * y, axis=-1)

    def gradient(self, x):
        y = np.asarray(x, float) - self.center
        return -2.0 * y

    def hessian(self, x):
        n = self.center.shape[0]
        return -2.0 * np.eye(n)


@dataclass(frozen=True)
class EllipseLevel(LevelFunction):
    a: float
    b: float
    center: np.ndarray

    def value(self, x):
        y = np.asarray(x, float) - self.center
        return 1.0 - (y[..., 0] / self.a) ** 2 - (y[..., 1] / self.b) ** 2

    def gradient(self, x):
        y = np.asarray(x, float) - self.center
        g = np.empty_like(y)
        g[..., 0] = -2.0 * y[..., 0] / self.a ** 2
        g[..., 1] = -2.0 * y[..., 1] / self.b ** 2
        return g

    def hessian(self, x):
        return np.diag([-2.0 / self.a ** 2, -2.0 / self.b ** 2])


@dataclass(frozen=True)
class CapGraphLevel(LevelFunction):
    """q = x2 - gamma(x1): vanishes on the graph part of a cap boundary only."""

    K: float
    cubic: float

    def _g(self, t):
        return self.K * t ** 2 + self.cubic * np.abs(t) ** 3

    def _gp(self, t):
        return 2.0 * self.K * t + 3.0 * self.cubic * np.abs(t) * t

    def _gpp(self, t):
        return 2.0 * self.K + 6.0 * self.cubic * np.abs(t)

    def value(self, x):
        x = np.asarray(x, float)
        return x[..., 1] - self._g(x[..., 0])

    def gradient(self, x):
        x = np.asarray(x, float)
        g = np.empty_like(x)
        g[..., 0] = -self._gp(x[..., 0])
        g[..., 1] = 1.0
        return g

    def hessian(self, x):
        x = np.asarray(x, float)
        h = np.zeros(x.shape[:-1] + (2, 2))
        h[..., 0, 0] = -self._gpp(x[..., 0])
        return h


@dataclass(frozen=True)
class CapFullLevel(LevelFunction):
    """q = (x2 - gamma(x1)) (b - x2): vanishes on graph and lid."""

    K: float
    cubic: float
    b: float

    def _graph(self):
        return CapGraphLevel(self.K, self.cubic)

    def value(self, x):
        x = np.asarray(x, float)
        return self._graph().value(x) * (self.b - x[..., 1])

    def gradient(self, x):
        x = np.asarray(x, float)
        p = self._graph()
        pv = p.value(x)
        pg = p.gradient(x)
        rv = self.b - x[..., 1]
        g = pg * rv[..., None]
        g[..., 1] -= pv
        return g

    def hessian(self, x):
        x = np.asarray(x, float)
        p = self._graph()
        pg = p.gradient(x)
        ph = p.hessian(x)
        rv = self.b - x[..., 1]
        rg = np.array([0.0, -1.0])
        h = ph * rv[..., None, None]
        h = h + pg[..., :, None] * rg[None, :] + rg[:, None] * pg[..., None, :]
        return h


@dataclass(frozen=True)
class Bump:
    """u(x) = q(x)^2 (a0 + alin @ x), with full analytic derivatives."""

    level: LevelFunction
    a0: np.ndarray
    alin: np.ndarray            # (n, n): d_j A_i = alin[i, j]

    def amplitude(self, x):
        x = np.asarray(x, float)
        return self.a0 + x @ self.alin.T

    def value(self, x):
        q = self.level.value(x)
        return (np.asarray(q) ** 2)[..., None] * self.amplitude(x)

    def gradient(self, x):
        """Jacobian ``J[i, j] = d_j u_i`` (batched over leading axes)."""
        x = np.asarray(x, float)
        q = np.asarray(self.level.value(x))
        qg = self.level.gradient(x)
        A = self.amplitude(x)
        term1 = 2.0 * q[..., None, None] * A[..., :, None] * qg[..., None, :]
        term2 = (q ** 2)[..., None, None] * self.alin
        return term1 + term2

    def jet(self, x) -> FieldJet:
        return FieldJet(point=np.asarray(x, float), value=self.value(x),
                        gradient=self.gradient(x))

    def source_density(self, x, medium: LameMedium):
        """``L u + omega^2 u`` in closed form.

        With u_i = q^2 A_i and affine A:
          d_k d_j u_i = 2 (q_k q_j + q q_kj) A_i
                        + 2 q (q_j d_k A_i + q_k d_j A_i).
        """
        x = np.asarray(x, float)
        n = self.a0.shape[0]
        q = np.asarray(self.level.value(x))
        qg = self.level.gradient(x)                      # (..., n)
        qh = np.asarray(self.level.hessian(x))           # (n, n) or (..., n, n)
        if qh.ndim == 2 and x.ndim > 1:
            qh = np.broadcast_to(qh, x.shape[:-1] + (n, n))
        A = self.amplitude(x)                            # (..., n)
        gng = np.sum(qg * qg, axis=-1)                   # |grad q|^2
        lapq = np.trace(qh, axis1=-2, axis2=-1)
        # Laplacian of u_i
        lap_u = (2.0 * (gng + q * lapq))[..., None] * A \
            + 4.0 * q[..., None] * (qg @ self.alin.T)
        # grad(div u)_k = sum_j d_k d_j u_j
        t1 = 2.0 * qg * np.sum(qg * A, axis=-1)[..., None]
        t2 = 2.0 * q[..., None] * np.einsum("...kj,...j->...k", qh, A)
        diag_alin = self.alin  # d_k A_j entries
        t3 = 2.0 * q[..., None] * np.einsum("...j,jk->...k", qg, diag_alin)
        t4 = 2.0 * q[..., None] * qg * np.trace(self.alin)
        grad_div = t1 + t2 + t3 + t4
        u = (q ** 2)[..., None] * A
        return medium.mu * lap_u + (medium.lam + medium.mu) * grad_div \
            + medium.omega ** 2 * u


def polynomial_bump(domain: DomainGeometry, amplitude=(1.0, 0.0),
                    linear: Optional[np.ndarray] = None,
                    whole_boundary: bool = True) -> Bump:
    """Canonical bump for a single-component 2-D domain.

    ``whole_boundary=False`` on a cap vanishes on the graph part only (the
    lid stays live), which is what boundary-term experiments need.
    """
    if len(domain.components) != 1:
        raise UnsupportedDimension("bump factory expects a single component")
    comp = domain.components[0]
    n = domain.dim
    if n != 2:
        raise UnsupportedDimension("bumps are 2-D")
    a0 = np.asarray(amplitude, dtype=float)
    alin = np.zeros((n, n)) if linear is None else np.asarray(linear, dtype=float)
    if comp.kind == "disk":
        level = DiskLevel(comp.params["radius"], comp.center)
    elif comp.kind == "ellipse":
        level = EllipseLevel(comp.params["a"], comp.params["b"], comp.center)
    elif comp.kind == "cap":
        if whole_boundary:
            level = CapFullLevel(comp.params["K"], comp.params["cubic"], comp.params["b"])
        else:
            level = CapGraphLevel(comp.params["K"], comp.params["cubic"])
    else:
        raise UnsupportedDimension(f"no bump for component kind {comp.kind!r}")
    return Bump(level=level, a0=a0, alin=alin)
