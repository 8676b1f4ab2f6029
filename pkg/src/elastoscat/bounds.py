"""Evaluators for the quantitative radiating / non-radiating criteria.

Each theorem-shaped inequality is split into a measured left-hand side and a
structural right-hand side (the epsilon- or K-expression with its unnamed
constant set to one).  Verdicts are three-valued: a configuration is only
asserted radiating when its ratio clears the calibrated constant by a safety
band, and only called consistent with non-radiation when it falls below the
band; everything in between is reported indeterminate rather than overclaimed.
Constants are always fitted from sweeps of configurations whose ground truth
is known independently — never hard-coded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .elastic import _check_holder_exponent
from .errors import (
    DegenerateContrast,
    EmptySweep,
    ExponentOutOfRange,
    IncompleteInputs,
    InvalidParameter,
    KTooSmall,
    NoRoot,
    NonpositiveArgument,
    OutOfRegime,
    UnsupportedDimension,
)
from .scattering import upsilon

REGIME_RADIATING = "radiating-asserted"
REGIME_NONRADIATING = "non-radiating-consistent"
REGIME_INDETERMINATE = "indeterminate"
REGIME_BAND = 0.10


@dataclass
class CriterionReport:
    """One evaluated inequality: measured side, structural side, verdict."""

    name: str
    lhs: float
    rhs_structural: float
    ratio: float
    regime: str
    inputs_echo: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name, "lhs": self.lhs,
            "rhs_structural": self.rhs_structural, "ratio": self.ratio,
            "regime": self.regime, "inputs_echo": dict(self.inputs_echo),
        }


@dataclass
class CalibrationResult:
    """Empirically fitted constant plus the evidence that produced it."""

    constant_fit: float
    violations: int
    sweep_size: int
    fit_method: str

    def to_json_dict(self) -> dict:
        return {
            "constant_fit": self.constant_fit, "violations": self.violations,
            "sweep_size": self.sweep_size, "fit_method": self.fit_method,
        }


@dataclass
class ClassCheckResult:
    """Outcome of an admissibility test, item by item."""

    admissible: bool
    items: dict
    reasons: list


def _finish(name: str, lhs: float, rhs: float, c_fit: float,
            echo: dict) -> CriterionReport:
    if not rhs > 0.0:
        raise InvalidParameter(f"structural rhs is {rhs}, must be positive")
    ratio = lhs / rhs
    threshold = c_fit * rhs
    if lhs > (1.0 + REGIME_BAND) * threshold:
        regime = REGIME_RADIATING
    elif lhs < (1.0 - REGIME_BAND) * threshold:
        regime = REGIME_NONRADIATING
    else:
        regime = REGIME_INDETERMINATE
    return CriterionReport(name=name, lhs=float(lhs), rhs_structural=float(rhs),
                           ratio=float(ratio), regime=regime, inputs_echo=echo)


def small_support_rhs(epsilon: float, delta: float, dim: int) -> float:
    """``eps^delta (1 + (1+eps) eps^{n/2})``, strictly increasing in eps."""
    if epsilon <= 0.0:
        raise NonpositiveArgument(f"epsilon must be positive, got {epsilon}")
    _check_holder_exponent(delta, dim)
    return epsilon ** delta * (1.0 + (1.0 + epsilon) * epsilon ** (dim / 2.0))


def kdecay_rhs(K: float, alpha: float, varsigma: float, dim: int) -> float:
    """``(ln K)^{(n+1)/2} K^{-min(alpha,varsigma)/2}`` (n=2; +1/6 shift for n=3).

    Strictly decreasing once ``ln K > (n+1)/min(alpha,varsigma)`` in 2-D.
    """
    if K < math.e:
        raise KTooSmall(f"need K >= e, got {K}")
    m = min(alpha, varsigma)
    if dim == 2:
        if not (0.0 < alpha <= 1.0 and 0.0 < varsigma):
            raise ExponentOutOfRange(
                f"need alpha in (0, 1] and varsigma > 0, got {alpha}, {varsigma}")
        expo = -0.5 * m
    elif dim == 3:
        if not (1.0 / 3.0 < m < 1.0):
            raise ExponentOutOfRange(
                f"need min(alpha, varsigma) in (1/3, 1), got {m}")
        expo = -0.5 * m + 1.0 / 6.0
    else:
        raise UnsupportedDimension(f"dim must be 2 or 3, got {dim}")
    return math.log(K) ** ((dim + 1) / 2.0) * K ** expo


def small_support_criterion(sup_boundary_phi: float, holder_seminorm_phi: float,
                            linf_phi: float, delta: float, epsilon: float,
                            dim: int, omega: float = 1.0,
                            c_fit: float = 1.0) -> CriterionReport:
    """Boundary-intensity-to-regularity ratio against the small-support shape.

    ``lhs = sup_boundary |phi| / (omega^{-delta} [phi]_delta + ||phi||_inf)``;
    a ratio above the calibrated constant asserts the source radiates, a ratio
    below is consistent with non-radiation (the necessary-condition direction).
    """
    if sup_boundary_phi < 0.0 or holder_seminorm_phi < 0.0 or linf_phi < 0.0:
        raise NonpositiveArgument("norm inputs must be nonnegative")
    if omega <= 0.0:
        raise NonpositiveArgument(f"omega must be positive, got {omega}")
    denom = omega ** (-delta) * holder_seminorm_phi + linf_phi
    if denom <= 0.0:
        raise InvalidParameter("regularity denominator vanishes")
    rhs = small_support_rhs(epsilon, delta, dim)
    lhs = sup_boundary_phi / denom
    echo = {"sup_boundary_phi": sup_boundary_phi,
            "holder_seminorm_phi": holder_seminorm_phi, "linf_phi": linf_phi,
            "delta": delta, "epsilon": epsilon, "dim": dim, "omega": omega,
            "c_fit": c_fit}
    return _finish("small-support", lhs, rhs, c_fit, echo)


def diameter_lower_bound(lhs_ratio: float, delta: float, omega: float,
                         c_fit: float) -> float:
    """``min(1, (c_fit * lhs)^{1/delta}) / omega`` — support-size floor."""
    if lhs_ratio < 0.0:
        raise NonpositiveArgument(f"lhs_ratio must be nonnegative, got {lhs_ratio}")
    if delta <= 0.0 or omega <= 0.0 or c_fit <= 0.0:
        raise NonpositiveArgument("delta, omega, c_fit must be positive")
    return min(1.0, (c_fit * lhs_ratio) ** (1.0 / delta)) / omega


def kpoint_criterion(phi_at_q: float, norm_max: float, K: float, alpha: float,
                     varsigma: float, dim: int,
                     c_fit: float = 1.0) -> CriterionReport:
    """Point intensity at a high-curvature boundary point vs the K-decay shape.

    ``lhs = |phi(q)| / max(1, norm_max)`` where ``norm_max`` caps the Holder
    and H^1 norms of the intensity.
    """
    if phi_at_q < 0.0 or norm_max < 0.0:
        raise NonpositiveArgument("magnitude inputs must be nonnegative")
    rhs = kdecay_rhs(K, alpha, varsigma, dim)
    lhs = phi_at_q / max(1.0, norm_max)
    echo = {"phi_at_q": phi_at_q, "norm_max": norm_max, "K": K, "alpha": alpha,
            "varsigma": varsigma, "dim": dim, "c_fit": c_fit}
    return _finish("kpoint", lhs, rhs, c_fit, echo)


def medium_small_criterion(V_ui_sup: float, V_norm: float, ui_norm: float,
                           delta: float, epsilon: float, eps_max: float,
                           V_max: float, dim: int = 2, s: float = 1.0,
                           c_fit: float = 1.0) -> CriterionReport:
    """Boundary contrast-times-incident magnitude vs the medium smallness shape.

    ``lhs = sup_boundary |V u_i| / (||V|| ||u_i||)``; the structural side
    carries the a-priori amplification factor ``1 + Upsilon(eps_max, V_max)``
    evaluated at the sweep's extreme parameters.
    """
    if V_ui_sup < 0.0 or V_norm <= 0.0 or ui_norm <= 0.0:
        raise NonpositiveArgument("need V_ui_sup >= 0 and positive norms")
    if epsilon > eps_max:
        raise InvalidParameter(f"epsilon = {epsilon} exceeds eps_max = {eps_max}")
    if eps_max * V_max >= s:
        raise OutOfRegime(
            f"eps_max * V_max = {eps_max * V_max} >= s = {s}; bounds void")
    ups = upsilon(eps_max, V_max, s)
    if epsilon <= 0.0:
        raise NonpositiveArgument(f"epsilon must be positive, got {epsilon}")
    _check_holder_exponent(delta, dim)
    rhs = epsilon ** delta * (
        1.0 + (1.0 + ups) * (1.0 + epsilon) * epsilon ** (dim / 2.0))
    lhs = V_ui_sup / (V_norm * ui_norm)
    echo = {"V_ui_sup": V_ui_sup, "V_norm": V_norm, "ui_norm": ui_norm,
            "delta": delta, "epsilon": epsilon, "eps_max": eps_max,
            "V_max": V_max, "dim": dim, "s": s, "upsilon": ups, "c_fit": c_fit}
    return _finish("medium-small", lhs, rhs, c_fit, echo)


def medium_kpoint_criterion(Vui_at_q: float, K: float, alpha: float,
                            varsigma: float, dim: int,
                            c_fit: float = 1.0) -> CriterionReport:
    """``lhs = |V(q) u_i(q)|`` against the same K-decay structural side."""
    if Vui_at_q < 0.0:
        raise NonpositiveArgument("magnitude input must be nonnegative")
    rhs = kdecay_rhs(K, alpha, varsigma, dim)
    echo = {"Vui_at_q": Vui_at_q, "K": K, "alpha": alpha,
            "varsigma": varsigma, "dim": dim, "c_fit": c_fit}
    return _finish("medium-kpoint", Vui_at_q, rhs, c_fit, echo)


def transmission_bounds(kind: str, V_stats: dict, epsilon: Optional[float] = None,
                        K: Optional[float] = None, delta: Optional[float] = None,
                        alpha: Optional[float] = None,
                        varsigma: Optional[float] = None, dim: int = 2,
                        c_fit: float = 1.0) -> CriterionReport:
    """Upper bounds for interior eigenfunction boundary data.

    ``kind="small"``: ``(||V|| / inf_boundary |V|) * eps^delta (1+(1+eps)eps^{n/2})``
    bounds ``sup_boundary |w|`` for a normalized eigenfunction.
    ``kind="kpoint"``: the K-decay shape bounds ``|w(q)|`` where the contrast
    does not vanish.  Externally measured boundary data may be passed in
    ``V_stats`` (``w_sup_boundary`` / ``w_at_q``) to fill the measured side;
    it defaults to zero, which reports the bound value alone.
    """
    if kind == "small":
        needed = {"v_norm", "v_inf_boundary"}
        if not needed <= set(V_stats):
            raise IncompleteInputs(f"missing {sorted(needed - set(V_stats))}")
        if epsilon is None or delta is None:
            raise IncompleteInputs("small kind needs epsilon and delta")
        v_norm = float(V_stats["v_norm"])
        v_inf = float(V_stats["v_inf_boundary"])
        if v_inf <= 0.0:
            raise DegenerateContrast(
                f"inf_boundary |V| = {v_inf}; bound degenerates")
        if v_norm < v_inf:
            raise InvalidParameter("||V|| cannot be below inf |V|")
        rhs = (v_norm / v_inf) * small_support_rhs(epsilon, delta, dim)
        lhs = float(V_stats.get("w_sup_boundary", 0.0))
        echo = {"kind": kind, "epsilon": epsilon, "delta": delta, "dim": dim,
                "v_norm": v_norm, "v_inf_boundary": v_inf, "c_fit": c_fit}
        return _finish("transmission-small", lhs, rhs, c_fit, echo)
    if kind == "kpoint":
        if "v_at_q" not in V_stats:
            raise IncompleteInputs("missing ['v_at_q']")
        if K is None or alpha is None or varsigma is None:
            raise IncompleteInputs("kpoint kind needs K, alpha, varsigma")
        v_at_q = float(V_stats["v_at_q"])
        if v_at_q <= 0.0:
            raise DegenerateContrast(f"|V(q)| = {v_at_q}; bound degenerates")
        rhs = kdecay_rhs(K, alpha, varsigma, dim)
        lhs = float(V_stats.get("w_at_q", 0.0))
        echo = {"kind": kind, "K": K, "alpha": alpha, "varsigma": varsigma,
                "dim": dim, "v_at_q": v_at_q, "c_fit": c_fit}
        return _finish("transmission-kpoint", lhs, rhs, c_fit, echo)
    raise InvalidParameter(f"unknown kind {kind!r}")


def epsilon_min_solve(target_lhs: float, delta: float, dim: int,
                      C_fit: float, eps_hi: float = 1.0e6,
                      tol: float = 1.0e-14) -> float:
    """Invert ``C_fit * eps^delta (1+(1+eps) eps^{n/2}) = target`` by bisection.

    The map is strictly increasing so the root is unique; the search bracket
    grows geometrically up to ``eps_hi``.
    """
    if target_lhs <= 0.0:
        raise NonpositiveArgument(f"target must be positive, got {target_lhs}")
    if C_fit <= 0.0:
        raise NonpositiveArgument(f"C_fit must be positive, got {C_fit}")
    _check_holder_exponent(delta, dim)

    def f(eps):
        return C_fit * small_support_rhs(eps, delta, dim) - target_lhs

    hi = 1.0
    while f(hi) < 0.0:
        hi *= 2.0
        if hi > eps_hi:
            raise NoRoot(f"target {target_lhs} out of range up to eps = {eps_hi}")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    while lo > 0.0 and f(lo) > 0.0:
        lo /= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def calibrate_constant(sweep: Sequence) -> CalibrationResult:
    """Tightest constant making ``lhs <= C * rhs`` hold across the sweep.

    Every entry must come from a configuration whose regime is independently
    known (manufactured non-radiating families, verified eigenpairs); the fit
    is the max ratio, so violations at the fitted value are zero by
    construction and recounted here as a self-check.
    """
    entries = list(sweep)
    if not entries:
        raise EmptySweep("cannot calibrate from an empty sweep")
    ratios = []
    for lhs, rhs in entries:
        if rhs <= 0.0:
            raise InvalidParameter(f"structural rhs must be positive, got {rhs}")
        ratios.append(lhs / rhs)
    fit = float(max(ratios))
    violations = sum(1 for lhs, rhs in entries
                     if lhs > fit * rhs * (1.0 + 1e-12))
    return CalibrationResult(constant_fit=fit, violations=int(violations),
                             sweep_size=len(entries), fit_method="max-ratio")


def calibrate_contraction_scale(sweep: Sequence) -> CalibrationResult:
    """Largest ``s`` for which the measured field-size ratios obey the bounds.

    Entries are ``(epsilon, v_sup, ratio_u, ratio_ut)`` with the ratios
    measured as ``||u|| / ||u_i||`` and ``||u_t|| / ||u_i||``.  For a single
    entry the scattered-field bound pins ``s <= eps*v*(1 + 1/ratio_u)`` and
    the total-field bound ``s <= eps*v*ratio_ut/(ratio_ut - 1)``; the fit is
    the minimum over the sweep, and must exceed every ``eps*v`` for the
    contraction regime to be nonempty.
    """
    entries = list(sweep)
    if not entries:
        raise EmptySweep("cannot calibrate from an empty sweep")
    s_cap = np.inf
    prod_max = 0.0
    for eps, v, ratio_u, ratio_ut in entries:
        if eps < 0.0 or v < 0.0:
            raise InvalidParameter("epsilon and v_sup must be nonnegative")
        prod = eps * v
        prod_max = max(prod_max, prod)
        if prod == 0.0:
            continue
        if ratio_u > 0.0:
            s_cap = min(s_cap, prod * (1.0 + 1.0 / ratio_u))
        if ratio_ut > 1.0:
            s_cap = min(s_cap, prod * ratio_ut / (ratio_ut - 1.0))
    if not np.isfinite(s_cap):
        raise InvalidParameter(
            "sweep contains no informative entries (all ratios vanish)")
    if s_cap <= prod_max:
        raise OutOfRegime(
            f"fitted s = {s_cap} does not exceed max eps*v = {prod_max}")
    violations = 0
    for eps, v, ratio_u, ratio_ut in entries:
        prod = eps * v
        if prod == 0.0:
            continue
        ups = prod / (s_cap - prod)
        if ratio_u > ups * (1.0 + 1e-12) or ratio_ut > (s_cap / (s_cap - prod)) * (1.0 + 1e-12):
            violations += 1
    return CalibrationResult(constant_fit=float(s_cap), violations=int(violations),
                             sweep_size=len(entries), fit_method="min-feasible-s")


# ---------------------------------------------------------------------------
# admissible classes
# ---------------------------------------------------------------------------

def _need(inputs: dict, keys, klass: str) -> None:
    missing = [k for k in keys if k not in inputs]
    if missing:
        raise IncompleteInputs(f"class {klass} needs {missing}")


def _exponent_in(value: float, dim: int, closed_half: bool) -> bool:
    """Range test: (0,1] / (0,1/2] when closed_half, else (0,1) / (1/3,1)."""
    if closed_half:
        return 0.0 < value <= (1.0 if dim == 2 else 0.5)
    if dim == 2:
        return 0.0 < value < 1.0
    return 1.0 / 3.0 < value < 1.0


def _separation_items(inputs: dict, klass: str, items: dict, reasons: list) -> None:
    count = int(inputs.get("component_count", 1))
    if count <= 1:
        return
    _need(inputs, ["separation", "epsilon_min", "omega", "max_component_diameter"],
          klass)
    floor = 2.0 * inputs["epsilon_min"] / inputs["omega"]
    ok_sep = inputs["separation"] > floor
    items["separation"] = ok_sep
    if not ok_sep:
        reasons.append(
            f"separation {inputs['separation']} not above 2*eps_min/omega = {floor}")
    ok_diam = inputs["max_component_diameter"] <= inputs["epsilon_min"] / inputs["omega"]
    items["component-size"] = ok_diam
    if not ok_diam:
        reasons.append("a component exceeds eps_min/omega in diameter")


def admissible_class_check(klass: str, inputs: dict) -> ClassCheckResult:
    """Conjunction test for the uniqueness-theorem hypotheses.

    ``inputs`` carries exponents, norm caps, criterion reports (item (b) is a
    report whose regime must be radiating-asserted), and for collections the
    separation data.  Items are reported individually so a failure names its
    reason; the test is monotone under strengthening any passing input.
    """
    items: dict = {}
    reasons: list = []
    if klass == "A":
        _need(inputs, ["alpha", "dim", "component_reports"], "A")
        ok = _exponent_in(inputs["alpha"], inputs["dim"], closed_half=True)
        items["exponent-range"] = ok
        if not ok:
            reasons.append(f"exponent range: alpha = {inputs['alpha']}")
        reports = inputs["component_reports"]
        if not reports:
            raise IncompleteInputs("class A needs at least one component report")
        ok_b = all(r.regime == REGIME_RADIATING for r in reports)
        items["criterion"] = ok_b
        if not ok_b:
            reasons.append("a component's smallness criterion is not asserted")
        inputs = dict(inputs, component_count=inputs.get(
            "component_count", len(reports)))
        _separation_items(inputs, "A", items, reasons)
    elif klass == "B":
        _need(inputs, ["alpha", "varsigma", "dim", "norm_max", "norm_cap",
                       "report"], "B")
        ok = _exponent_in(min(inputs["alpha"], inputs["varsigma"]),
                          inputs["dim"], closed_half=False)
        items["exponent-range"] = ok
        if not ok:
            reasons.append(
                f"exponent range: min(alpha, varsigma) = "
                f"{min(inputs['alpha'], inputs['varsigma'])}")
        ok_n = inputs["norm_max"] < inputs["norm_cap"]
        items["norm-bound"] = ok_n
        if not ok_n:
            reasons.append("intensity norms reach the a-priori cap")
        ok_b = inputs["report"].regime == REGIME_RADIATING
        items["criterion"] = ok_b
        if not ok_b:
            reasons.append("point-intensity lower bound is not asserted")
    elif klass == "A-prime":
        _need(inputs, ["delta", "dim", "v_inf_boundary", "v_min_floor",
                       "v_norm", "v_norm_cap", "report"], "A-prime")
        ok = _exponent_in(inputs["delta"], inputs["dim"], closed_half=True)
        items["exponent-range"] = ok
        if not ok:
            reasons.append(f"exponent range: delta = {inputs['delta']}")
        ok_c = (inputs["v_inf_boundary"] >= inputs["v_min_floor"]
                and inputs["v_norm"] <= inputs["v_norm_cap"])
        items["contrast-bounds"] = ok_c
        if not ok_c:
            reasons.append("contrast floor/cap violated")
        ok_b = inputs["report"].regime == REGIME_RADIATING
        items["criterion"] = ok_b
        if not ok_b:
            reasons.append("boundary total-field lower bound is not asserted")
        _separation_items(inputs, "A-prime", items, reasons)
    elif klass == "B-prime":
        _need(inputs, ["alpha", "varsigma", "dim", "v_norm", "norm_cap",
                       "report"], "B-prime")
        ok = _exponent_in(min(inputs["alpha"], inputs["varsigma"]),
                          inputs["dim"], closed_half=False)
        items["exponent-range"] = ok
        if not ok:
            reasons.append(
                f"exponent range: min(alpha, varsigma) = "
                f"{min(inputs['alpha'], inputs['varsigma'])}")
        ok_n = inputs["v_norm"] <= inputs["norm_cap"]
        items["norm-bound"] = ok_n
        if not ok_n:
            reasons.append("contrast norms exceed the a-priori cap")
        ok_b = inputs["report"].regime == REGIME_RADIATING
        items["criterion"] = ok_b
        if not ok_b:
            reasons.append("point total-field lower bound is not asserted")
    else:
        raise InvalidParameter(f"unknown admissible class {klass!r}")
    return ClassCheckResult(admissible=all(items.values()), items=items,
                            reasons=reasons)
