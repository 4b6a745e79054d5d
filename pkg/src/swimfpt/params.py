"""Model parameters for a run-and-tumble swimmer on an interval.

A particle with swim speed ``v_s``, translational diffusivity ``D_T`` and
mean tumble (orientation-reversal) time ``tau`` moves on ``[-R, R]`` with
absorbing ends.  Scaling lengths by ``R`` and times by ``R**2 / D_T``
reduces the model to three dimensionless numbers:

* ``pe = v_s * R / D_T`` — swim (Peclet) number,
* ``beta = R**2 / (tau * D_T)`` — tumble rate relative to diffusion,
* ``eta`` — fraction of initial probability with rightward orientation,

plus the scaled release point ``x0 = x0_dim / R`` in ``[-1, 1]``.
Dimensionless mean first passage times convert back through
:func:`redimensionalize_mfpt`.
"""

from dataclasses import dataclass

__all__ = [
    "DimensionalParams",
    "ModelParams",
    "nondimensionalize",
    "redimensionalize_mfpt",
]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


@dataclass(frozen=True)
class DimensionalParams:
    """Physical inputs in laboratory units.

    All quantities are positive except ``v_s`` (zero gives a passive
    Brownian particle) and ``x0_dim`` (any point inside the domain).
    """

    v_s: float
    D_T: float
    R: float
    tau: float
    eta: float
    x0_dim: float

    def __post_init__(self) -> None:
        _require(self.v_s >= 0, f"v_s must be nonnegative, got {self.v_s}")
        _require(self.D_T > 0, f"D_T must be positive, got {self.D_T}")
        _require(self.R > 0, f"R must be positive, got {self.R}")
        _require(self.tau > 0, f"tau must be positive, got {self.tau}")
        _require(0.0 <= self.eta <= 1.0, f"eta must lie in [0, 1], got {self.eta}")
        _require(
            abs(self.x0_dim) <= self.R,
            f"x0_dim must lie in [-R, R] = [{-self.R}, {self.R}], got {self.x0_dim}",
        )


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters.

    ``beta`` must be strictly positive: the no-tumble limit is a different
    model (frozen orientations) and is not supported.  The passive limit is
    ``pe = 0``.
    """

    pe: float
    beta: float
    eta: float
    x0: float

    def __post_init__(self) -> None:
        _require(self.pe >= 0, f"pe must be nonnegative, got {self.pe}")
        _require(self.beta > 0, f"beta must be positive, got {self.beta}")
        _require(0.0 <= self.eta <= 1.0, f"eta must lie in [0, 1], got {self.eta}")
        _require(-1.0 <= self.x0 <= 1.0, f"x0 must lie in [-1, 1], got {self.x0}")


def nondimensionalize(dim: DimensionalParams) -> ModelParams:
    """Reduce dimensional inputs to the three dimensionless groups."""
    return ModelParams(
        pe=dim.v_s * dim.R / dim.D_T,
        beta=dim.R**2 / (dim.tau * dim.D_T),
        eta=dim.eta,
        x0=dim.x0_dim / dim.R,
    )


def redimensionalize_mfpt(mu: float, dim: DimensionalParams) -> float:
    """Convert a dimensionless MFPT back to laboratory time units.

    ``mu`` is a mean first passage time in units of the diffusive time
    ``R**2 / D_T``; the result is in the units of ``tau``/``D_T`` inputs.
    """
    mu = float(mu)
    _require(
        mu >= 0 and mu == mu and mu != float("inf"),
        f"mu must be a finite nonnegative time, got {mu}",
    )
    return mu * dim.R**2 / dim.D_T
