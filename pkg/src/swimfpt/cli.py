"""Command-line front end: single runs, sweeps, and contour grids.

Three subcommands emit figure-ready tabular data:

* ``mfpt``     — MFPT expansion coefficients and totals, optionally with
  the full-solver, backward-equation, and Monte Carlo values per row.
* ``contour``  — long-format (x0, pe, mu) grids; the four standard panel
  configurations are available as presets.
* ``survival`` — S(t) from the truncated series and the forward solver,
  with the first-passage density.

Any of ``--x0/--pe/--beta/--eta`` accepts a single value or an inclusive
sweep ``min:max:count``; at most two sweep axes (exactly two for
``contour``).  CSV is the default format (JSON mirrors the records); every
output starts with a ``#`` header block recording full provenance, and
identical invocations produce byte-identical files.  Exit codes: 0 success,
2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .oracles import McConfig, mfpt_bvp, mfpt_mc
from .params import ModelParams
from .pde import GridConfig, HorizonError, mfpt_pde, survival as pde_survival
from .series import SeriesConfig, mfpt_series, survival_s0, survival_s1, survival_s2

__all__ = ["SweepAxis", "RunSpec", "cmd_mfpt", "cmd_contour", "cmd_survival", "main"]

_SWEEPABLE = ("x0", "pe", "beta", "eta")
_PRESETS = {
    "fig4a": {"beta": 1.0, "eta": 0.5},
    "fig4b": {"beta": 1.0, "eta": 1.0},
    "fig4c": {"beta": 10.0, "eta": 0.5},
    "fig4d": {"beta": 10.0, "eta": 1.0},
}
_PRESET_X0 = "-0.95:0.95:39"
_PRESET_PE = "0:2:21"

_DEFAULT_NX_PDE = 401
_DEFAULT_NX_BVP = 2049
_DEFAULT_DT_PDE = 2.5e-5
_DEFAULT_DT_MC = 1e-4


@dataclass(frozen=True)
class SweepAxis:
    """One inclusive sweep axis, ``variable`` in {x0, pe, beta, eta}."""

    variable: str
    minimum: float
    maximum: float
    count: int

    def __post_init__(self) -> None:
        if self.variable not in _SWEEPABLE:
            raise ValueError(f"cannot sweep {self.variable!r}")
        if self.count < 2:
            raise ValueError(f"sweep count must be at least 2, got {self.count}")
        if not self.minimum < self.maximum:
            raise ValueError(
                f"sweep needs min < max, got {self.minimum}:{self.maximum}"
            )

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.minimum, self.maximum, self.count)

    def __str__(self) -> str:
        return f"{self.minimum:g}:{self.maximum:g}:{self.count}"


@dataclass(frozen=True)
class RunSpec:
    """Everything one subcommand invocation needs, fully resolved."""

    command: str
    method: str
    params: ModelParams           # sweep axes override their fields per cell
    axes: tuple[SweepAxis, ...]
    output: Path | None           # None -> stdout
    fmt: str
    n_terms: int
    nx: int | None                # None -> per-method default
    dt: float | None
    t_max: float
    particles: int
    seed: int
    jobs: int
    preset: str | None


# ----------------------------------------------------------------------
# spec construction
# ----------------------------------------------------------------------

def _parse_scalar_or_range(text: str, name: str):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"--{name}: expected min:max:count, got {text!r}")
        return SweepAxis(name, float(parts[0]), float(parts[1]), int(parts[2]))
    return float(text)


def build_spec(args: argparse.Namespace) -> RunSpec:
    """Resolve parsed arguments into a validated RunSpec."""
    base = {"x0": 0.5, "pe": 0.5, "beta": 1.0, "eta": 1.0}
    if args.preset is not None:
        base.update(_PRESETS[args.preset])
        if args.x0 is None:
            args.x0 = _PRESET_X0
        if args.pe is None:
            args.pe = _PRESET_PE

    axes = []
    for name in _SWEEPABLE:
        raw = getattr(args, name)
        if raw is None:
            continue
        parsed = _parse_scalar_or_range(str(raw), name)
        if isinstance(parsed, SweepAxis):
            axes.append(parsed)
            base[name] = parsed.minimum  # placeholder; replaced per cell
        else:
            base[name] = parsed

    if len(axes) > 2:
        raise ValueError(f"at most 2 sweep axes are supported, got {len(axes)}")
    if args.command == "contour":
        if sorted(a.variable for a in axes) != ["pe", "x0"]:
            raise ValueError(
                "contour requires exactly two sweep axes, --x0 and --pe "
                "(or a --preset supplying them)"
            )
        axes.sort(key=lambda a: a.variable, reverse=True)  # x0 outer, pe inner
    if args.command == "survival" and axes:
        raise ValueError("survival takes a single parameter point, not sweep axes")

    output = None
    if args.output is not None:
        output = Path(args.output)
        out_dir = os.environ.get("SWIMFPT_OUTPUT_DIR")
        if out_dir and not output.is_absolute():
            output = Path(out_dir) / output

    return RunSpec(
        command=args.command,
        method=args.method,
        params=ModelParams(pe=base["pe"], beta=base["beta"], eta=base["eta"], x0=base["x0"]),
        axes=tuple(axes),
        output=output,
        fmt=args.format,
        n_terms=args.n_terms,
        nx=args.nx,
        dt=args.dt,
        t_max=args.t_max,
        particles=args.particles,
        seed=args.seed,
        jobs=args.jobs,
        preset=args.preset,
    )


def _cells(spec: RunSpec) -> list[ModelParams]:
    """Parameter points in deterministic row order (first axis outermost)."""
    if not spec.axes:
        return [spec.params]
    grids = [axis.values for axis in spec.axes]
    cells = []
    for combo in np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, len(grids)):
        updates = {axis.variable: float(v) for axis, v in zip(spec.axes, combo)}
        cells.append(dataclasses.replace(spec.params, **updates))
    return cells


def _grid_config(spec: RunSpec) -> GridConfig:
    return GridConfig(
        nx=spec.nx if spec.nx is not None else _DEFAULT_NX_PDE,
        dt=spec.dt if spec.dt is not None else _DEFAULT_DT_PDE,
        t_max=spec.t_max,
    )


def _mc_config(spec: RunSpec, seed: int) -> McConfig:
    return McConfig(
        n_particles=spec.particles,
        dt_mc=spec.dt if spec.dt is not None else _DEFAULT_DT_MC,
        seed=seed,
    )


def _cell_seeds(spec: RunSpec, n_cells: int) -> list[int]:
    if n_cells == 1:
        return [spec.seed]
    return [int(s) for s in np.random.SeedSequence(spec.seed).generate_state(n_cells)]


# ----------------------------------------------------------------------
# row computation
# ----------------------------------------------------------------------

def _mfpt_row(task) -> dict:
    spec, params, seed = task
    cfg = SeriesConfig(n_terms=spec.n_terms)
    s = mfpt_series(params, cfg)
    row = {
        "x0": params.x0,
        "pe": params.pe,
        "beta": params.beta,
        "eta": params.eta,
        "mu0": s.mu0,
        "mu1": s.mu1,
        "mu2": s.mu2,
        "mu_two_term": s.two_term,
        "mu_three_term": s.three_term,
    }
    if spec.method in ("pde", "all"):
        row["mu_pde"] = mfpt_pde(params, _grid_config(spec)).mfpt
    if spec.method in ("bvp", "all"):
        row["mu_bvp"] = mfpt_bvp(params, spec.nx if spec.nx is not None else _DEFAULT_NX_BVP).mfpt
    if spec.method in ("mc", "all"):
        est = mfpt_mc(params, _mc_config(spec, seed))
        row["mu_mc"] = est.mean_fpt
        row["mc_std_err"] = est.std_err
    return row


def _contour_row(task) -> dict:
    spec, params, seed = task
    if spec.method == "series":
        mu = mfpt_series(params, SeriesConfig(n_terms=spec.n_terms)).three_term
    elif spec.method == "pde":
        mu = mfpt_pde(params, _grid_config(spec)).mfpt
    elif spec.method == "mc":
        mu = mfpt_mc(params, _mc_config(spec, seed)).mean_fpt
    else:
        mu = mfpt_bvp(params, spec.nx if spec.nx is not None else _DEFAULT_NX_BVP).mfpt
    return {"x0": params.x0, "pe": params.pe, "mu": mu}


def _map_cells(func, tasks, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks))


# ----------------------------------------------------------------------
# output
# ----------------------------------------------------------------------

def _provenance(spec: RunSpec) -> dict:
    prov = {
        "version": __version__,
        "command": spec.command,
        "method": spec.method,
        "format": spec.fmt,
        "n_terms": spec.n_terms,
        "nx": spec.nx,
        "dt": spec.dt,
        "t_max": spec.t_max,
        "particles": spec.particles,
        "seed": spec.seed,
        "jobs": spec.jobs,
        "preset": spec.preset,
    }
    swept = {a.variable: str(a) for a in spec.axes}
    for name in _SWEEPABLE:
        prov[name] = swept.get(name, getattr(spec.params, name))
    return prov


def _format_value(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def _render(rows: list[dict], spec: RunSpec) -> str:
    prov = _provenance(spec)
    if spec.fmt == "json":
        return json.dumps(
            {"provenance": dict(sorted(prov.items())), "rows": rows},
            indent=2, sort_keys=False,
        ) + "\n"
    buf = io.StringIO()
    for key in sorted(prov):
        buf.write(f"# {key} = {prov[key]}\n")
    columns = list(rows[0])
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_format_value(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def _emit(text: str, spec: RunSpec) -> None:
    if spec.output is None:
        sys.stdout.write(text)
    else:
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        spec.output.write_text(text, newline="\n")


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_mfpt(spec: RunSpec) -> int:
    cells = _cells(spec)
    seeds = _cell_seeds(spec, len(cells))
    rows = _map_cells(_mfpt_row, [(spec, p, s) for p, s in zip(cells, seeds)], spec.jobs)
    _emit(_render(rows, spec), spec)
    return 0


def cmd_contour(spec: RunSpec) -> int:
    cells = _cells(spec)
    seeds = _cell_seeds(spec, len(cells))
    rows = _map_cells(_contour_row, [(spec, p, s) for p, s in zip(cells, seeds)], spec.jobs)
    _emit(_render(rows, spec), spec)
    return 0


def cmd_survival(spec: RunSpec) -> int:
    params = spec.params
    curve = pde_survival(params, _grid_config(spec))
    density = -np.gradient(curve.values, curve.times)
    idx = np.unique(np.round(np.linspace(0, curve.times.size - 1, 201)).astype(int))
    cfg = SeriesConfig(n_terms=spec.n_terms)
    rows = []
    for i in idx:
        t = float(curve.times[i])
        s_series = float(survival_s0(t, params.x0, cfg))
        if params.pe > 0:
            s_series += params.pe * float(survival_s1(t, params, cfg))
            s_series += params.pe**2 * float(survival_s2(t, params.x0, params.beta, cfg))
        rows.append(
            {
                "t": t,
                "s_series": s_series,
                "s_pde": float(curve.values[i]),
                "f_pde": float(density[i]),
            }
        )
    _emit(_render(rows, spec), spec)
    return 0


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swimfpt",
        description="First-passage statistics of run-and-tumble particles "
        "on [-1, 1] with absorbing ends.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, default_method: str, methods: tuple):
        p.add_argument("--method", choices=methods, default=default_method)
        for name in _SWEEPABLE:
            p.add_argument(f"--{name}", default=None,
                           help=f"{name} value, or sweep min:max:count")
        p.add_argument("--n-terms", type=int, default=100, dest="n_terms",
                       help="series truncation (terms per index)")
        p.add_argument("--nx", type=int, default=None,
                       help="nodes: interior count for the forward solver, "
                       "total count for the backward solver")
        p.add_argument("--dt", type=float, default=None,
                       help="time step for the forward solver / Monte Carlo")
        p.add_argument("--t-max", type=float, default=20.0, dest="t_max")
        p.add_argument("--particles", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=12345)
        p.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes for sweep cells")
        p.add_argument("--output", default=None,
                       help="output path (default: stdout); relative paths "
                       "resolve under $SWIMFPT_OUTPUT_DIR when set")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--preset", choices=sorted(_PRESETS), default=None,
                       help="named contour panel configuration")

    add_common(sub.add_parser("mfpt", help="MFPT expansion and reference values"),
               "series", ("series", "pde", "bvp", "mc", "all"))
    add_common(sub.add_parser("contour", help="(x0, pe) MFPT grid in long format"),
               "bvp", ("series", "pde", "bvp", "mc"))
    add_common(sub.add_parser("survival", help="survival probability versus time"),
               "all", ("all",))
    return parser


_DISPATCH = {"mfpt": cmd_mfpt, "contour": cmd_contour, "survival": cmd_survival}


def _normalize_argv(argv: list[str]) -> list[str]:
    """Join flags with negative-number values so argparse accepts them.

    ``--x0 -0.5:0.5:3`` becomes ``--x0=-0.5:0.5:3``; required because
    argparse otherwise reads the leading dash as a new option.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and re.match(r"^-(\.\d|\d)", argv[i + 1])
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_normalize_argv(list(sys.argv[1:] if argv is None else argv)))
    try:
        spec = build_spec(args)
    except ValueError as exc:
        parser.error(str(exc))  # exits 2
    try:
        return _DISPATCH[spec.command](spec)
    except (HorizonError, RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
