"""
Where the truncated expansion stops being trustworthy
=====================================================

Compares the two- and three-term series against the backward-equation
solver (exact up to discretization) and the forward solver as the swim
speed grows, for a rightward-biased release at x0 = 0.5, beta = 1.

The two-term series tracks the exact curve only for small pe and then
overshoots; adding the pe^2 term buys roughly another factor of three in
range before it undershoots.  Both corrections lower the MFPT: swimming,
at this tumble rate, always helps.
"""

import numpy as np

from swimfpt import GridConfig, ModelParams, mfpt_bvp, mfpt_pde, mfpt_series

pe_grid = np.linspace(0.0, 1.2, 13)
pde_probe = {0.3, 0.6, 0.9, 1.2}  # forward runs are slower; spot-check only
grid = GridConfig(nx=201, dt=1e-4)

print(f"{'pe':>5} {'two-term':>10} {'three-term':>11} {'bvp':>10} "
      f"{'pde':>10}  {'rel2':>8} {'rel3':>8}")
for pe in pe_grid:
    p = ModelParams(pe=float(pe), beta=1.0, eta=1.0, x0=0.5)
    s = mfpt_series(p)
    exact = mfpt_bvp(p).mfpt
    run_pde = round(float(pe), 10) in pde_probe  # linspace values carry fp dust
    pde = mfpt_pde(p, grid).mfpt if run_pde else float("nan")
    rel2 = (s.two_term - exact) / exact
    rel3 = (s.three_term - exact) / exact
    pde_txt = f"{pde:>10.6f}" if pde == pde else f"{'-':>10}"
    print(f"{pe:>5.2f} {s.two_term:>10.6f} {s.three_term:>11.6f} "
          f"{exact:>10.6f} {pde_txt}  {rel2:>+8.1e} {rel3:>+8.1e}")

print("\npositive rel2 / negative rel3 at large pe: the truncations bracket "
      "the true MFPT")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
else:
    exact = [mfpt_bvp(ModelParams(pe=float(v), beta=1.0, eta=1.0, x0=0.5)).mfpt
             for v in pe_grid]
    series = [mfpt_series(ModelParams(pe=float(v), beta=1.0, eta=1.0, x0=0.5))
              for v in pe_grid]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(pe_grid, exact, "k-", label="backward solver")
    ax.plot(pe_grid, [s.two_term for s in series], "--", label="two-term")
    ax.plot(pe_grid, [s.three_term for s in series], ":", label="three-term")
    ax.set_xlabel("pe")
    ax.set_ylabel("MFPT")
    ax.legend()
    fig.tight_layout()
    fig.savefig("mfpt_vs_pe.png", dpi=120)
    print("wrote mfpt_vs_pe.png")
