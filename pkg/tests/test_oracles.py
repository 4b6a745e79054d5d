import numpy as np
import pytest

from swimfpt.oracles import BvpSolution, McConfig, McEstimate, mfpt_bvp, mfpt_mc
from swimfpt.params import ModelParams


# ----------------------------------------------------------------------
# backward-equation solver
# ----------------------------------------------------------------------

def test_bvp_passive_closed_form():
    """pe = 0 collapses to pure diffusion; the discretization is exact
    for the resulting quadratic profile."""
    p = ModelParams(pe=0.0, beta=1.0, eta=0.5, x0=0.0)
    sol = mfpt_bvp(p, nx=257)
    expected = (1.0 - sol.x_nodes**2) / 2.0
    assert np.allclose(sol.t_plus, expected, atol=1e-11)
    assert np.allclose(sol.t_minus, expected, atol=1e-11)


def test_bvp_solution_shape_and_walls():
    p = ModelParams(pe=0.5, beta=1.0, eta=1.0, x0=0.5)
    sol = mfpt_bvp(p, nx=129)
    assert isinstance(sol, BvpSolution)
    assert len(sol.x_nodes) == 129
    assert sol.t_plus[0] == sol.t_plus[-1] == 0.0
    assert sol.t_minus[0] == sol.t_minus[-1] == 0.0
    assert np.all(sol.t_plus >= 0.0) and np.all(sol.t_minus >= 0.0)


def test_bvp_orientation_reflection_symmetry():
    """Swimming right from x is swimming left from -x: t_plus(x) = t_minus(-x)."""
    p = ModelParams(pe=1.3, beta=0.7, eta=1.0, x0=0.0)
    sol = mfpt_bvp(p, nx=513)
    assert np.allclose(sol.t_plus, sol.t_minus[::-1], rtol=0, atol=1e-12)


def test_bvp_oriented_start_escapes_sooner():
    # swimming toward a wall beats swimming away from it, from the center
    sol = mfpt_bvp(ModelParams(pe=1.0, beta=1.0, eta=1.0, x0=0.0), nx=513)
    mid = len(sol.x_nodes) // 2
    assert sol.t_plus[mid] == pytest.approx(sol.t_minus[mid], rel=1e-12)  # center is side-blind
    right_of_mid = mid + 64
    assert sol.t_plus[right_of_mid] < sol.t_minus[right_of_mid]


def test_bvp_second_order_convergence():
    p = ModelParams(pe=0.5, beta=1.0, eta=1.0, x0=0.5)
    ref = mfpt_bvp(p, nx=8193).mfpt
    coarse = mfpt_bvp(p, nx=257).mfpt
    fine = mfpt_bvp(p, nx=513).mfpt
    ratio = abs(coarse - ref) / abs(fine - ref)
    assert 3.3 < ratio < 4.8


def test_bvp_mfpt_property_uses_release_point():
    p = ModelParams(pe=0.5, beta=1.0, eta=0.7, x0=0.25)
    sol = mfpt_bvp(p, nx=1025)
    assert sol.mfpt == pytest.approx(sol.evaluate(0.25, 0.7))
    # mixture weighting is affine in eta
    blend = 0.7 * sol.evaluate(0.25, 1.0) + 0.3 * sol.evaluate(0.25, 0.0)
    assert sol.mfpt == pytest.approx(blend, rel=1e-14)


def test_bvp_rejects_tiny_grid():
    with pytest.raises(ValueError, match="nx"):
        mfpt_bvp(ModelParams(pe=0.0, beta=1.0, eta=0.5, x0=0.0), nx=8)


# ----------------------------------------------------------------------
# Monte Carlo simulator
# ----------------------------------------------------------------------

@pytest.mark.parametrize(
    "kwargs, field",
    [
        (dict(n_particles=0), "n_particles"),
        (dict(dt_mc=0.0), "dt_mc"),
        (dict(n_workers=0), "n_workers"),
    ],
)
def test_mc_config_validation(kwargs, field):
    with pytest.raises(ValueError, match=field):
        McConfig(**kwargs)


def test_mc_reproducible_for_fixed_seed():
    p = ModelParams(pe=0.5, beta=1.0, eta=1.0, x0=0.2)
    mc = McConfig(n_particles=2000, dt_mc=5e-4, seed=42)
    a = mfpt_mc(p, mc)
    b = mfpt_mc(p, mc)
    assert a.mean_fpt == b.mean_fpt
    assert a.std_err == b.std_err
    assert (a.n_escaped_left, a.n_escaped_right) == (b.n_escaped_left, b.n_escaped_right)


def test_mc_all_particles_accounted_for():
    p = ModelParams(pe=0.3, beta=2.0, eta=0.5, x0=-0.4)
    mc = McConfig(n_particles=3000, dt_mc=5e-4, seed=7)
    est = mfpt_mc(p, mc)
    assert isinstance(est, McEstimate)
    assert est.n_particles == 3000
    assert est.mean_fpt > 0.0 and est.std_err > 0.0


def test_mc_passive_center_split_and_mean():
    p = ModelParams(pe=0.0, beta=1.0, eta=0.5, x0=0.0)
    est = mfpt_mc(p, McConfig(n_particles=20_000, dt_mc=2e-4, seed=11))
    # sides are exchangeable: binomial split
    assert abs(est.n_escaped_left - est.n_escaped_right) < 3.5 * np.sqrt(20_000)
    assert est.mean_fpt == pytest.approx(0.5, abs=3.5 * est.std_err)


def test_mc_oriented_start_breaks_side_symmetry():
    p = ModelParams(pe=0.5, beta=1.0, eta=1.0, x0=0.0)
    est = mfpt_mc(p, McConfig(n_particles=4000, dt_mc=5e-4, seed=3))
    excess = est.n_escaped_right - est.n_escaped_left
    assert excess > 5 * np.sqrt(4000)


def test_mc_agrees_with_bvp():
    p = ModelParams(pe=1.0, beta=1.0, eta=1.0, x0=0.5)
    ref = mfpt_bvp(p, nx=4097).mfpt
    est = mfpt_mc(p, McConfig(n_particles=20_000, dt_mc=2e-4, seed=5))
    assert abs(est.mean_fpt - ref) < 3.0 * est.std_err


def test_mc_no_bridge_biases_upward():
    """End-of-step-only absorption misses within-step crossings, inflating
    the estimate; the shared seed makes the comparison nearly noise-free."""
    p = ModelParams(pe=0.0, beta=1.0, eta=0.5, x0=0.0)
    with_bridge = mfpt_mc(p, McConfig(n_particles=20_000, dt_mc=1e-3, seed=19))
    without = mfpt_mc(p, McConfig(n_particles=20_000, dt_mc=1e-3, seed=19, bridge=False))
    assert without.mean_fpt > with_bridge.mean_fpt + 2 * with_bridge.std_err


def test_mc_worker_split_is_deterministic():
    p = ModelParams(pe=0.5, beta=1.0, eta=1.0, x0=0.0)
    mc = McConfig(n_particles=2000, dt_mc=5e-4, seed=23, n_workers=2)
    a = mfpt_mc(p, mc)
    b = mfpt_mc(p, mc)
    assert a.mean_fpt == b.mean_fpt
    assert a.n_particles == 2000
