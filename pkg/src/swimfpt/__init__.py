"""First-passage statistics of active swimmers on an interval.

Survival probability and mean first passage time of a run-and-tumble
particle in [-1, 1] with absorbing ends: a weak-swimming spectral
expansion, a full forward solver, and two independent reference
estimators (backward-equation BVP, Monte Carlo).
"""

__version__ = "0.1.0"

from .params import (
    DimensionalParams,
    ModelParams,
    nondimensionalize,
    redimensionalize_mfpt,
)
from .series import (
    SeriesConfig,
    SeriesMFPT,
    coeff_a,
    coeff_b,
    coupling_tables,
    chi1_sq,
    chi2_sq,
    field_f0,
    field_f1,
    field_n0,
    field_n1,
    field_n2,
    lam1,
    lam2,
    mfpt_series,
    mu0,
    mu1,
    mu2,
    survival_s0,
    survival_s1,
    survival_s2,
    t_min_reliable,
)
from .pde import (
    FieldState,
    FptResult,
    GridConfig,
    HorizonError,
    SurvivalCurve,
    init_delta,
    mfpt_pde,
    step,
    survival,
)
from .oracles import (
    BvpSolution,
    McConfig,
    McEstimate,
    mfpt_bvp,
    mfpt_mc,
)

__all__ = [
    "__version__",
    "DimensionalParams",
    "ModelParams",
    "nondimensionalize",
    "redimensionalize_mfpt",
    "SeriesConfig",
    "SeriesMFPT",
    "coeff_a",
    "coeff_b",
    "coupling_tables",
    "chi1_sq",
    "chi2_sq",
    "lam1",
    "lam2",
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
    "t_min_reliable",
    "GridConfig",
    "FieldState",
    "SurvivalCurve",
    "FptResult",
    "HorizonError",
    "init_delta",
    "step",
    "survival",
    "mfpt_pde",
    "BvpSolution",
    "McConfig",
    "McEstimate",
    "mfpt_bvp",
    "mfpt_mc",
]
