"""Weak-swimming spectral expansion for survival and first passage.

The dimensionless density ``n`` and polarization ``f`` of a run-and-tumble
particle on ``[-1, 1]`` with absorbing ends obey

    dn/dt = d2n/dx2 - pe * df/dx
    df/dt = d2f/dx2 - pe * dn/dx - 2*beta*f,      n = f = 0 at x = +-1,

released as ``n(x, 0) = delta(x - x0)``, ``f(x, 0) = (2*eta - 1) * delta(x - x0)``.
Expanding in the absorbing-interval eigenfunctions — the half-integer cosine
family ``cos(lam1_n x)``, ``lam1_n = (2n+1) pi/2``, and the integer sine family
``sin(lam2_n x)``, ``lam2_n = n pi`` — and treating ``pe`` as a small parameter
yields closed-form series for every order in ``pe``:

* order 0: pure diffusion (the passive limit),
* order 1: advection of the relaxing polarization, coupling the two
  eigenfamilies through the overlap matrices ``A`` and ``B``,
* order 2: advection of the order-1 polarization back into the density.

Integrating the density over the interval gives the survival probability
``S = S0 + pe*S1 + pe^2*S2 + O(pe^3)``; integrating the survival over time
gives the mean first passage time ``mu = mu0 + pe*mu1 + pe^2*mu2 + O(pe^3)``.
All sums are truncated uniformly at ``n_terms`` per index.

Time dependence enters through one scalar kernel: the relaxation of a mode
with rate ``c`` driven by a source decaying at rate ``a``,

    phi(a, c, t) = integral_0^t exp(-a s) exp(-c (t - s)) ds
                 = (exp(-a t) - exp(-c t)) / (c - a),

whose removable singularity at ``a = c`` is guarded by the analytic limit
``t exp(-c t)`` whenever ``|c - a|`` falls below ``resonance_eps``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import ModelParams

__all__ = [
    "SeriesConfig",
    "SeriesMFPT",
    "lam1",
    "lam2",
    "chi1_sq",
    "chi2_sq",
    "coeff_a",
    "coeff_b",
    "coupling_tables",
    "t_min_reliable",
    "mu0",
    "mu1",
    "mu2",
    "mfpt_series",
    "survival_s0",
    "survival_s1",
    "survival_s2",
    "field_n0",
    "field_f0",
    "field_n1",
    "field_f1",
    "field_n2",
]


# ----------------------------------------------------------------------
# eigenvalue families and coupling coefficients
# ----------------------------------------------------------------------

def lam1(n):
    """Half-integer (cosine-family) eigenvalues ``(2n+1) pi / 2``."""
    return (2 * np.asarray(n) + 1) * (np.pi / 2)


def lam2(n):
    """Integer (sine-family) eigenvalues ``n pi``."""
    return np.asarray(n) * np.pi


def chi1_sq(n, beta):
    """Decay rates ``lam1_n^2 + 2*beta`` of the cosine-family polarization."""
    return lam1(n) ** 2 + 2.0 * beta


def chi2_sq(n, beta):
    """Decay rates ``lam2_n^2 + 2*beta`` of the sine-family polarization."""
    return lam2(n) ** 2 + 2.0 * beta


def coeff_a(m, n):
    """Overlap of the sine-family derivative with the cosine family.

    ``coeff_a(m, n) = (pi/2) * integral_{-1}^{1} cos(lam2_m x) cos(lam1_n x) dx``
    in closed form.  First index runs over the integer family, second over
    the half-integer family.
    """
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    return (-1.0) ** (m + n) / (1 + 2 * (m + n)) + (-1.0) ** (m - n) / (1 - 2 * (m - n))


def coeff_b(m, n):
    """Overlap of the cosine-family derivative with the sine family.

    ``coeff_b(m, n) = (pi/2) * integral_{-1}^{1} sin(lam1_m x) sin(lam2_n x) dx``
    in closed form.  First index runs over the half-integer family, second
    over the integer family; ``coeff_b(m, 0) = 0`` identically.
    """
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    return -((-1.0) ** (m + n)) / (1 + 2 * (m + n)) + (-1.0) ** (m - n) / (1 + 2 * (m - n))


@lru_cache(maxsize=8)
def coupling_tables(n_terms: int):
    """Precomputed ``(A, B)`` overlap matrices of shape ``(n_terms, n_terms)``.

    ``A[m, n] = coeff_a(m, n)`` and ``B[m, n] = coeff_b(m, n)``.  The arrays
    are cached and marked read-only.
    """
    idx = np.arange(n_terms)
    mm, nn = np.meshgrid(idx, idx, indexing="ij")
    a = coeff_a(mm, nn)
    b = coeff_b(mm, nn)
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------

_SUMMATION_MODES = ("plain", "compensated")


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation and summation policy for every series in this module.

    n_terms
        Terms kept per index (each sum runs ``0 .. n_terms-1``).
    resonance_eps
        Threshold below which a rate gap counts as resonant and the
        guarded analytic limit replaces the direct quotient.
    summation_mode
        ``"compensated"`` (default) accumulates with ``math.fsum`` — exact
        rounding, immune to the cancellation the alternating sums suffer
        near ``t = 0``; ``"plain"`` uses ordinary numpy summation.
    """

    n_terms: int = 100
    resonance_eps: float = 1e-9
    summation_mode: str = "compensated"

    def __post_init__(self) -> None:
        if self.n_terms < 1:
            raise ValueError(f"n_terms must be at least 1, got {self.n_terms}")
        if not self.resonance_eps > 0:
            raise ValueError(f"resonance_eps must be positive, got {self.resonance_eps}")
        if self.summation_mode not in _SUMMATION_MODES:
            raise ValueError(
                f"summation_mode must be one of {_SUMMATION_MODES}, got {self.summation_mode!r}"
            )


_DEFAULT = SeriesConfig()


def t_min_reliable(config: SeriesConfig = _DEFAULT) -> float:
    """Earliest time at which the truncated survival series is trustworthy.

    Below this the neglected modes have not decayed (truncation tail above
    ~1e-12) and the series exhibits Gibbs oscillations.  Evaluation earlier
    than this warns but is permitted — partial sums at ``t = 0`` still
    converge, just slowly (like ``1/n_terms``).
    """
    return 27.6 / float(lam1(config.n_terms - 1) ** 2)


def _reduce(values: np.ndarray, mode: str) -> float:
    if mode == "compensated":
        return math.fsum(values.ravel().tolist())
    return float(values.sum())


def _check_t(t, config: SeriesConfig) -> None:
    tmin = t_min_reliable(config)
    if np.min(t) < tmin:
        warnings.warn(
            f"survival series truncated at n_terms={config.n_terms} has significant "
            f"truncation error for t < {tmin:.3e}; treat early-time values with care",
            stacklevel=3,
        )


# ----------------------------------------------------------------------
# guarded relaxation kernels
# ----------------------------------------------------------------------

def _phi(a, c, t, eps):
    """Driven-mode kernel ``(exp(-a t) - exp(-c t)) / (c - a)``.

    Equals ``integral_0^t exp(-a s) exp(-c (t-s)) ds``; the resonant limit
    ``a -> c`` is ``t exp(-c t)``.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    gap = c - a
    small = np.abs(gap) < eps
    safe = np.where(small, 1.0, gap)
    val = (np.exp(-a * t) - np.exp(-c * t)) / safe
    return np.where(small, t * np.exp(-c * t), val)


def _phi_slope(a, c, t, eps):
    """Limit of ``(phi(a, c, t) - phi(b, c, t)) / (b - a)`` as ``b -> a``.

    Equals ``-d(phi)/da = integral_0^t s exp(-a s) exp(-c (t-s)) ds``; its
    own resonant limit ``c -> a`` is ``t^2 exp(-a t) / 2``.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    gap = c - a
    small = np.abs(gap) < eps
    safe = np.where(small, 1.0, gap)
    val = (t * np.exp(-a * t) * safe - (np.exp(-a * t) - np.exp(-c * t))) / safe**2
    return np.where(small, 0.5 * t * t * np.exp(-a * t), val)


# ----------------------------------------------------------------------
# MFPT expansion coefficients
# ----------------------------------------------------------------------

def mu0(x0: float, config: SeriesConfig = _DEFAULT) -> float:
    """Passive-limit MFPT, ``2 sum (-1)^n cos(lam1_n x0) / lam1_n^3``.

    Converges to the Brownian closed form ``(1 - x0**2) / 2``.
    """
    n = np.arange(config.n_terms)
    l1 = lam1(n)
    terms = 2.0 * (-1.0) ** n * np.cos(l1 * x0) / l1**3
    return _reduce(terms, config.summation_mode)


def mu1(params: ModelParams, config: SeriesConfig = _DEFAULT) -> float:
    """First swim correction to the MFPT (coefficient of ``pe``).

    Vanishes identically for an unpolarized start (``eta = 1/2``) and is
    odd in ``x0``; negative for a rightward start bias at ``x0 > 0``
    (swimming toward the nearer wall shortens the passage).  Independent
    of ``params.pe``.
    """
    n_terms = config.n_terms
    a_tab, _ = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    src = 2.0 * idx * (1.0 - 2.0 * params.eta) * np.sin(l2 * params.x0) / (
        2.0 * params.beta + l2**2
    )  # index m; the m = 0 summand is identically zero but kept as written
    outer = 2.0 * (-1.0) ** idx / l1**3  # index n
    if config.summation_mode == "compensated":
        inner = np.array([math.fsum((src * a_tab[:, n]).tolist()) for n in idx])
        return math.fsum((outer * inner).tolist())
    return float(outer @ (src @ a_tab))


def mu2(x0: float, beta: float, config: SeriesConfig = _DEFAULT) -> float:
    """Second swim correction to the MFPT (coefficient of ``pe**2``).

    Even in ``x0`` and independent of ``eta``: the initial polarization
    relaxes before contributing at this order.  The triple sum is evaluated
    by exact factorization (innermost index first, ascending), which is
    identical to the rectangular truncation at O(n_terms^2) cost.
    """
    n_terms = config.n_terms
    a_tab, b_tab = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    c2 = chi2_sq(idx, beta)
    ck = np.cos(l1 * x0) / l1                     # index k
    mid_w = l2 / c2                                # index m
    outer = (-1.0) ** (idx + 1) / l1**3            # index n
    if config.summation_mode == "compensated":
        inner = np.array([math.fsum((ck * b_tab[:, m]).tolist()) for m in idx])
        mid = np.array([math.fsum((mid_w * inner * a_tab[:, n]).tolist()) for n in idx])
        total = math.fsum((outer * mid).tolist())
    else:
        inner = ck @ b_tab
        mid = (mid_w * inner) @ a_tab
        total = float(outer @ mid)
    return 8.0 / np.pi**2 * total


@dataclass(frozen=True)
class SeriesMFPT:
    """MFPT expansion coefficients with their partial sums."""

    mu0: float
    mu1: float
    mu2: float
    params: ModelParams
    config: SeriesConfig

    @property
    def two_term(self) -> float:
        """``mu0 + pe * mu1``."""
        return self.mu0 + self.params.pe * self.mu1

    @property
    def three_term(self) -> float:
        """``mu0 + pe * mu1 + pe^2 * mu2``."""
        return self.mu0 + self.params.pe * self.mu1 + self.params.pe**2 * self.mu2


def mfpt_series(params: ModelParams, config: SeriesConfig = _DEFAULT) -> SeriesMFPT:
    """Evaluate all three MFPT expansion coefficients at ``params``."""
    return SeriesMFPT(
        mu0=mu0(params.x0, config),
        mu1=mu1(params, config),
        mu2=mu2(params.x0, params.beta, config),
        params=params,
        config=config,
    )


# ----------------------------------------------------------------------
# survival probability series
# ----------------------------------------------------------------------

def _over_times(t, config, scalar_eval):
    t_arr = np.asarray(t, dtype=float)
    _check_t(t_arr, config)
    if t_arr.ndim == 0:
        return scalar_eval(float(t_arr))
    return np.array([scalar_eval(float(tv)) for tv in t_arr])


def survival_s0(t, x0: float, config: SeriesConfig = _DEFAULT):
    """Passive-limit survival probability ``S0(t; x0)``.

    ``2 sum (-1)^n cos(lam1_n x0) exp(-lam1_n^2 t) / lam1_n``; accepts a
    scalar or 1-D array of times.  ``S0(0) -> 1`` as ``n_terms`` grows.
    """
    n = np.arange(config.n_terms)
    l1 = lam1(n)
    coef = 2.0 * (-1.0) ** n * np.cos(l1 * x0) / l1

    def at(tv: float) -> float:
        return _reduce(coef * np.exp(-(l1**2) * tv), config.summation_mode)

    return _over_times(t, config, at)


def survival_s1(t, params: ModelParams, config: SeriesConfig = _DEFAULT):
    """First swim correction ``S1(t)`` to the survival probability.

    Time-integrates to :func:`mu1`; identically zero for ``eta = 1/2``.
    Independent of ``params.pe``.
    """
    n_terms = config.n_terms
    a_tab, _ = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    rate_src = 2.0 * params.beta + l2**2           # index m: polarization decay
    rate_mode = l1**2                              # index n: density mode decay
    amp = (2.0 * idx * (1.0 - 2.0 * params.eta) * np.sin(l2 * params.x0))[:, None] * a_tab
    psi = (2.0 * (-1.0) ** idx / l1)[None, :]
    a_grid = rate_src[:, None]
    c_grid = rate_mode[None, :]
    eps = config.resonance_eps

    def at(tv: float) -> float:
        return _reduce(psi * amp * _phi(a_grid, c_grid, tv, eps), config.summation_mode)

    return _over_times(t, config, at)


@lru_cache(maxsize=16)
def _s2_workspace(x0: float, beta: float, n_terms: int, eps: float):
    """t-independent tables for survival_s2 at one (x0, beta, truncation).

    Collapses the middle index of the triple sum once, so each time
    evaluation costs O(n_terms^2).  Resonant (k, m) pairs — where the
    driven-polarization rate chi2_m^2 collides with a density rate
    lam1_k^2 — are excluded from the fast tables and returned separately
    for guarded evaluation.
    """
    a_tab, b_tab = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    c2 = chi2_sq(idx, beta)
    num = (l1 * np.cos(l1 * x0))[:, None] * b_tab          # [k, m]
    den = c2[None, :] - (l1**2)[:, None]                   # [k, m]
    resonant = np.abs(den) < eps
    d = np.where(resonant, 0.0, num / np.where(resonant, 1.0, den))
    m1 = np.einsum("m,mn,km->kn", l2, a_tab, d)            # collapse m for the k-bracket
    dm = d.sum(axis=0)                                     # collapse k for the m-bracket
    w_n = (-1.0) ** idx / l1
    res_pairs = [(int(k), int(m)) for k, m in zip(*np.nonzero(resonant))]
    return l1, l2, c2, a_tab, num, m1, dm, w_n, res_pairs


def survival_s2(t, x0: float, beta: float, config: SeriesConfig = _DEFAULT):
    """Second swim correction ``S2(t)`` to the survival probability.

    Time-integrates to :func:`mu2`; independent of ``eta``.  Resonant
    rate collisions (possible only at special ``beta`` values) are
    evaluated by their analytic limits.
    """
    n_terms, eps = config.n_terms, config.resonance_eps
    l1, l2, c2, a_tab, num, m1, dm, w_n, res_pairs = _s2_workspace(
        float(x0), float(beta), n_terms, eps
    )
    rate_k = (l1**2)[:, None]
    rate_n = (l1**2)[None, :]
    rate_m = c2[:, None]

    def at(tv: float) -> float:
        term_k = w_n[None, :] * m1 * _phi(rate_k, rate_n, tv, eps)
        term_m = w_n[None, :] * (l2[:, None] * a_tab * dm[:, None]) * _phi(rate_m, rate_n, tv, eps)
        total = _reduce(term_k, config.summation_mode) - _reduce(term_m, config.summation_mode)
        for k, m in res_pairs:
            # d blows up at a resonant pair, but the bracket difference vanishes
            # with it; the product has the finite limit num * phi_slope.
            inner = num[k, m] * _phi_slope(l1[k] ** 2, l1**2, tv, eps)
            total += _reduce(w_n * l2[m] * a_tab[m, :] * inner, config.summation_mode)
        return -(8.0 / np.pi**2) * total

    return _over_times(t, config, at)


# ----------------------------------------------------------------------
# space-time field evaluators (for cross-validation; not tuned for
# dense space-time grids)
# ----------------------------------------------------------------------

def field_n0(x, t: float, x0: float, config: SeriesConfig = _DEFAULT):
    """Passive-limit density ``n0(x, t)`` for a point release at ``x0``."""
    x = np.asarray(x, dtype=float)
    n = np.arange(config.n_terms)
    l1, l2 = lam1(n), lam2(n)
    cos_part = np.cos(np.outer(x, l1)) @ (np.cos(l1 * x0) * np.exp(-(l1**2) * t))
    sin_part = np.sin(np.outer(x, l2)) @ (np.sin(l2 * x0) * np.exp(-(l2**2) * t))
    return cos_part + sin_part


def field_f0(x, t: float, params: ModelParams, config: SeriesConfig = _DEFAULT):
    """Leading-order polarization ``f0(x, t)``: the initial orientation
    imbalance relaxing at the tumble-augmented rates ``chi^2``."""
    x = np.asarray(x, dtype=float)
    n = np.arange(config.n_terms)
    l1, l2 = lam1(n), lam2(n)
    x0, beta = params.x0, params.beta
    cos_part = np.cos(np.outer(x, l1)) @ (np.cos(l1 * x0) * np.exp(-chi1_sq(n, beta) * t))
    sin_part = np.sin(np.outer(x, l2)) @ (np.sin(l2 * x0) * np.exp(-chi2_sq(n, beta) * t))
    return (2.0 * params.eta - 1.0) * (cos_part + sin_part)


def field_n1(x, t: float, params: ModelParams, config: SeriesConfig = _DEFAULT):
    """First-order density correction ``n1(x, t)``.

    Mode amplitudes are the responses of each density mode to the
    advected order-zero polarization.
    """
    x = np.asarray(x, dtype=float)
    n_terms, eps = config.n_terms, config.resonance_eps
    a_tab, b_tab = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    x0, eta, beta = params.x0, params.eta, params.beta
    pol = 2.0 * eta - 1.0

    rate_f_sin = 2.0 * beta + l2**2                # chi2^2, source for cosine modes
    rate_f_cos = 2.0 * beta + l1**2                # chi1^2, source for sine modes
    src_p = 2.0 * idx * pol * np.sin(l2 * x0)      # index m
    src_q = (2.0 * idx + 1.0) * pol * np.cos(l1 * x0)

    p_n = -(src_p[:, None] * a_tab * _phi(rate_f_sin[:, None], (l1**2)[None, :], t, eps)).sum(axis=0)
    q_n = (src_q[:, None] * b_tab * _phi(rate_f_cos[:, None], (l2**2)[None, :], t, eps)).sum(axis=0)
    return np.cos(np.outer(x, l1)) @ p_n + np.sin(np.outer(x, l2)) @ q_n


def field_f1(x, t: float, params: ModelParams, config: SeriesConfig = _DEFAULT):
    """First-order polarization correction ``f1(x, t)``.

    Sourced by the gradient of the order-zero density, so it is
    independent of ``eta``.
    """
    x = np.asarray(x, dtype=float)
    n_terms, eps = config.n_terms, config.resonance_eps
    a_tab, b_tab = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    x0, beta = params.x0, params.beta

    u_n = -(2.0 / np.pi) * (
        (l2 * np.sin(l2 * x0))[:, None] * a_tab
        * _phi((l2**2)[:, None], chi1_sq(idx, beta)[None, :], t, eps)
    ).sum(axis=0)
    w_n = (2.0 / np.pi) * (
        (l1 * np.cos(l1 * x0))[:, None] * b_tab
        * _phi((l1**2)[:, None], chi2_sq(idx, beta)[None, :], t, eps)
    ).sum(axis=0)
    return np.cos(np.outer(x, l1)) @ u_n + np.sin(np.outer(x, l2)) @ w_n


def field_n2(x, t: float, params: ModelParams, config: SeriesConfig = _DEFAULT):
    """Second-order density correction ``n2(x, t)`` (independent of ``eta``).

    Each mode responds to the advected first-order polarization; the double
    driving makes the amplitudes double sums with two relaxation brackets.
    Resonant rate collisions take their analytic limits, including the
    ``m = n = 0`` sine mode where both rates vanish.
    """
    x = np.asarray(x, dtype=float)
    n_terms, eps = config.n_terms, config.resonance_eps
    a_tab, b_tab = coupling_tables(n_terms)
    idx = np.arange(n_terms)
    l1, l2 = lam1(idx), lam2(idx)
    x0, beta = params.x0, params.beta
    c1, c2 = chi1_sq(idx, beta), chi2_sq(idx, beta)

    def mode_amps(rate_out, rate_mid, rate_in, w_in, overlap_in, overlap_out):
        # amp_n = sum_m overlap_out[m, n] * sum_k w_in[k] * overlap_in[k, m]
        #         / (rate_mid_m - rate_in_k) * (bracket_k - bracket_m)
        den = rate_mid[None, :] - rate_in[:, None]                     # [k, m]
        resonant = np.abs(den) < eps
        safe = np.where(resonant, 1.0, den)
        amps = np.empty(n_terms)
        for n in range(n_terms):
            brk_in = _phi(rate_in[:, None], rate_out[n], t, eps)       # [k, 1]
            brk_mid = _phi(rate_mid[None, :], rate_out[n], t, eps)     # [1, m]
            kernel = np.where(
                resonant,
                _phi_slope(rate_in[:, None], rate_out[n], t, eps) * np.ones_like(den),
                (brk_in - brk_mid) / safe,
            )
            amps[n] = ((w_in * overlap_in.T).T * kernel * overlap_out[:, n][None, :]).sum()
        return amps

    g_n = -(4.0 / np.pi**2) * mode_amps(
        rate_out=l1**2, rate_mid=c2, rate_in=l1**2,
        w_in=l1 * np.cos(l1 * x0), overlap_in=b_tab, overlap_out=(l2[:, None] * a_tab),
    )
    h_n = -(4.0 / np.pi**2) * mode_amps(
        rate_out=l2**2, rate_mid=c1, rate_in=l2**2,
        w_in=l2 * np.sin(l2 * x0), overlap_in=a_tab, overlap_out=(l1[:, None] * b_tab),
    )
    return np.cos(np.outer(x, l1)) @ g_n + np.sin(np.outer(x, l2)) @ h_n
