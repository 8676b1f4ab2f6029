"""Density-contrast scattering: volume integral equation, series, diagnostics."""

import numpy as np
import pytest

from elastoscat import (
    MediumScatterer,
    contraction_report,
    disk,
    farfield_norm,
    field_norms,
    gauss_mesh,
    lattice_pde_residual,
    make_incident,
    make_medium,
    pde_residual_check,
    solve_medium,
    upsilon,
    volume_mesh,
)
from elastoscat.geometry import QuadratureMesh
from elastoscat.errors import (
    InvalidDirection,
    InvalidParameter,
    MeshMismatch,
    OutOfRegime,
    QuadratureBudgetExceeded,
    SeriesDiverges,
)

MED = make_medium(2.0, 1.0, 2.0, 2)


def smooth_disk_contrast(center, radius, v0):
    c = np.asarray(center, float)

    def contrast(pts):
        r2 = np.sum((np.asarray(pts, float) - c) ** 2, axis=-1)
        return v0 * np.maximum(1.0 - r2 / radius ** 2, 0.0) ** 2

    return contrast


def scatterer(v0=0.4, radius=0.45, center=(0.0, 0.0)):
    return MediumScatterer(domain=disk(radius, center=center), medium=MED,
                           contrast=smooth_disk_contrast(center, radius, v0))


# ---------------------------------------------------------------------------
# incident waves
# ---------------------------------------------------------------------------

def test_incident_pressure_wave_solves_system():
    inc = make_incident("pressure-plane", {"direction": (0.6, 0.8)}, MED)
    for pt in ([0.3, -0.2], [1.1, 0.7]):
        assert pde_residual_check(inc, pt) < 1e-8


def test_incident_shear_wave_solves_system():
    inc = make_incident("shear-plane", {"direction": (1.0, 0.0)}, MED)
    assert pde_residual_check(inc, [0.2, 0.5]) < 1e-8


def test_incident_point_source_solves_system():
    inc = make_incident("point-source", {"origin": (5.0, 5.0)}, MED)
    assert pde_residual_check(inc, [0.1, -0.3]) < 1e-8


def test_incident_pressure_wave_is_curl_free():
    inc = make_incident("pressure-plane", {"direction": (0.6, 0.8)}, MED)
    h = 1e-5
    x = np.array([0.17, 0.31])

    def u(p):
        return inc(p[None, :])[0]

    curl = ((u(x + [h, 0])[1] - u(x - [h, 0])[1])
            - (u(x + [0, h])[0] - u(x - [0, h])[0])) / (2 * h)
    assert abs(curl) < 1e-8 * np.linalg.norm(u(x))


def test_incident_shear_wave_is_divergence_free():
    inc = make_incident("shear-plane", {"direction": (0.6, 0.8)}, MED)
    h = 1e-5
    x = np.array([-0.4, 0.22])

    def u(p):
        return inc(p[None, :])[0]

    div = ((u(x + [h, 0])[0] - u(x - [h, 0])[0])
           + (u(x + [0, h])[1] - u(x - [0, h])[1])) / (2 * h)
    assert abs(div) < 1e-8 * np.linalg.norm(u(x))


def test_incident_rejects_unknown_kind():
    with pytest.raises(InvalidDirection):
        make_incident("torsion-wave", {"direction": (1.0, 0.0)}, MED)


# ---------------------------------------------------------------------------
# solve_medium
# ---------------------------------------------------------------------------

def test_zero_contrast_does_not_scatter():
    sc = scatterer(v0=0.0)
    mesh = volume_mesh(sc.domain, h=0.05)
    inc = make_incident("pressure-plane", {"direction": (1.0, 0.0)}, MED)
    sol = solve_medium(sc, inc, mesh)
    assert np.max(np.abs(sol.u_scattered.values)) < 1e-12
    assert farfield_norm(sol.farfield) < 1e-12
    sol_n = solve_medium(sc, inc, mesh, mode="neumann-series")
    assert sol_n.series_terms_used == 1
    assert np.max(np.abs(sol_n.u_scattered.values)) < 1e-12


def test_neumann_matches_direct_for_small_contrast():
    sc = scatterer(v0=0.3, radius=0.35)
    mesh = volume_mesh(sc.domain, h=0.035)
    inc = make_incident("pressure-plane", {"direction": (0.6, 0.8)}, MED)
    direct = solve_medium(sc, inc, mesh, mode="direct-dense")
    series = solve_medium(sc, inc, mesh, mode="neumann-series")
    num = np.linalg.norm(direct.u_total.values - series.u_total.values)
    den = np.linalg.norm(direct.u_total.values)
    assert num / den < 1e-8
    assert series.series_terms_used > 1
    assert series.contraction_estimate < 1.0


def test_total_field_satisfies_perturbed_system():
    sc = scatterer(v0=0.4, radius=0.45)
    mesh = volume_mesh(sc.domain, h=0.03)
    inc = make_incident("pressure-plane", {"direction": (1.0, 0.0)}, MED)
    sol = solve_medium(sc, inc, mesh)
    worst, median, count = lattice_pde_residual(sc, mesh, sol.u_total.values)
    assert count > 100
    assert worst < 1e-2
    assert median < 2e-3


def test_lattice_residual_flags_wrong_field():
    sc = scatterer(v0=0.4, radius=0.45)
    mesh = volume_mesh(sc.domain, h=0.03)
    inc = make_incident("pressure-plane", {"direction": (1.0, 0.0)}, MED)
    # the incident field alone does not solve the perturbed system
    ui = inc(mesh.nodes)
    worst, _, _ = lattice_pde_residual(sc, mesh, ui)
    assert worst > 0.05


def test_lattice_residual_needs_cell_mesh():
    sc = scatterer()
    smooth = gauss_mesh(sc.domain, n_radial=16, n_angular=32)
    vals = np.zeros((smooth.nodes.shape[0], 2), dtype=complex)
    with pytest.raises(MeshMismatch):
        lattice_pde_residual(sc, smooth, vals)


def test_series_diverges_for_strong_contrast():
    sc = scatterer(v0=40.0, radius=0.45)
    mesh = volume_mesh(sc.domain, h=0.05)
    inc = make_incident("pressure-plane", {"direction": (1.0, 0.0)}, MED)
    with pytest.raises(SeriesDiverges):
        solve_medium(sc, inc, mesh, mode="neumann-series")


def test_point_source_must_sit_outside():
    sc = scatterer()
    mesh = volume_mesh(sc.domain, h=0.05)
    inc = make_incident("point-source", {"origin": (0.1, 0.0)}, MED)
    with pytest.raises(InvalidDirection):
        solve_medium(sc, inc, mesh)


def test_dense_matrix_budget_guard():
    sc = scatterer()
    n = 5000
    nodes = np.random.default_rng(0).uniform(-0.3, 0.3, size=(n, 2))
    fake = QuadratureMesh(nodes=nodes, weights=np.full(n, 1e-5), h=0.01,
                          style="cell", mesh_id="too-big")
    inc = make_incident("pressure-plane", {"direction": (1.0, 0.0)}, MED)
    with pytest.raises(QuadratureBudgetExceeded):
        solve_medium(sc, inc, fake)


def test_farfield_reciprocity_pressure_channel():
    # swap incident and observation directions: same p-to-p amplitude
    center = (0.15, -0.1)
    sc = scatterer(v0=0.5, radius=0.4, center=center)
    mesh = volume_mesh(sc.domain, h=0.02)
    d1 = np.array([1.0, 0.0])
    d2 = np.array([np.cos(2.2), np.sin(2.2)])

    def p_to_p(din, dobs):
        inc = make_incident("pressure-plane", {"direction": din}, MED)
        sol = solve_medium(sc, inc, mesh, directions=dobs[None, :])
        return sol.farfield.up_inf[0]

    a = p_to_p(d1, -d2)
    b = p_to_p(d2, -d1)
    assert abs(a - b) / abs(a) < 1e-3


# ---------------------------------------------------------------------------
# contraction diagnostics
# ---------------------------------------------------------------------------

def test_upsilon_frozen_values():
    assert upsilon(0.5, 1.0, s=1.0) == pytest.approx(1.0, abs=1e-15)
    assert upsilon(0.0, 1.0, s=1.0) == 0.0


def test_bound_on_total_field_at_half_product():
    # diameter*omega = 0.5 and constant |V| = 1: ratio bounds are 1 and 2
    sc = MediumScatterer(domain=disk(0.125), medium=MED,
                         contrast=lambda pts: np.ones(np.asarray(pts).shape[:-1]))
    rep = contraction_report(sc, s=1.0)
    assert rep.epsilon == pytest.approx(0.5, rel=1e-12)
    assert rep.v_sup == pytest.approx(1.0, rel=1e-12)
    assert rep.upsilon == pytest.approx(1.0, rel=1e-12)
    assert rep.bound_ut == pytest.approx(2.0, rel=1e-12)


def test_upsilon_monotone():
    assert upsilon(0.2, 1.0) < upsilon(0.4, 1.0) < upsilon(0.4, 2.0)


def test_upsilon_rejects_out_of_regime():
    with pytest.raises(OutOfRegime):
        upsilon(1.0, 1.0, s=1.0)
    with pytest.raises(InvalidParameter):
        upsilon(0.5, 1.0, s=0.0)


def test_contraction_report_fields():
    sc = scatterer(v0=0.25, radius=0.25)
    rep = contraction_report(sc, s=1.0)
    assert rep.epsilon == pytest.approx(0.25 * 2 * MED.omega, rel=1e-12)
    assert not rep.out_of_regime
    assert rep.upsilon == pytest.approx(
        rep.epsilon * rep.v_sup / (1.0 - rep.epsilon * rep.v_sup), rel=1e-12)
    assert rep.bound_ut == pytest.approx(
        1.0 / (1.0 - rep.epsilon * rep.v_sup), rel=1e-12)


def test_contraction_report_out_of_regime_flag():
    sc = scatterer(v0=5.0, radius=0.5)
    rep = contraction_report(sc, s=1.0)
    assert rep.out_of_regime
    assert np.isinf(rep.upsilon) and np.isinf(rep.bound_ut)


def test_scattered_field_within_predicted_ratio():
    """Measured scattered-to-incident ratio sits under the a-priori bound."""
    s_fit = 1.0
    for v0, radius in ((0.2, 0.2), (0.3, 0.15), (0.1, 0.3)):
        sc = scatterer(v0=v0, radius=radius)
        rep = contraction_report(sc, s=s_fit)
        if rep.out_of_regime or rep.epsilon * rep.v_sup > 0.5 * s_fit:
            continue
        mesh = volume_mesh(sc.domain, h=radius / 10.0)
        inc = make_incident("pressure-plane", {"direction": (1.0, 0.0)}, MED)
        sol = solve_medium(sc, inc, mesh)
        ui = inc(mesh.nodes)
        num = np.linalg.norm(sol.u_scattered.values)
        den = np.linalg.norm(ui)
        assert num / den <= rep.upsilon


def test_neumann_corrections_decay_geometrically():
    sc = scatterer(v0=0.3, radius=0.35)
    mesh = volume_mesh(sc.domain, h=0.035)
    inc = make_incident("pressure-plane", {"direction": (0.0, 1.0)}, MED)
    sol = solve_medium(sc, inc, mesh, mode="neumann-series")
    # the reported estimate is the worst observed ratio; it must certify
    # convergence with margin
    assert 0.0 < sol.contraction_estimate < 0.95
    assert sol.series_terms_used >= 3


def test_total_is_incident_plus_scattered():
    sc = scatterer(v0=0.3)
    mesh = volume_mesh(sc.domain, h=0.045)
    inc = make_incident("shear-plane", {"direction": (0.6, 0.8)}, MED)
    sol = solve_medium(sc, inc, mesh)
    ui = inc(mesh.nodes)
    gap = np.max(np.abs(sol.u_total.values - ui - sol.u_scattered.values))
    assert gap < 1e-12
