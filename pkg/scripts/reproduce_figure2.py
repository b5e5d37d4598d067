"""Payoff envelopes and maximal MABK violations against alpha for every state family.

Writes one CSV per family (same columns as ``mbell sweep``) and, if
matplotlib is installed, a two-panel plot of 32 x payoff envelope and the
maximal violation for the four-player family.

    python scripts/reproduce_figure2.py --steps 41 --outdir results
"""

import argparse
from pathlib import Path

from mbell.cli import FAMILIES, RunConfig, cmd_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=41)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--no-plot", action="store_true")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tables = {}
    for name in FAMILIES:
        path = outdir / f"sweep_{name}.csv"
        cfg = RunConfig(command="sweep", family=name, alpha_steps=args.steps, output_path=str(path))
        tables[name] = cmd_sweep(cfg)

    if args.no_plot:
        return
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping plot")
        return

    rows = tables["psi4"]
    alpha = [float(r["alpha"]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(alpha, [32 * float(r["payoff_low_strategy"]) for r in rows], "--", label="32 x payoff, M_<")
    ax1.plot(alpha, [32 * float(r["payoff_high_strategy"]) for r in rows], "--", label="32 x payoff, M_>")
    ax1.plot(alpha, [float(r["chi_mabk_max"]) for r in rows], "k", label="max |chi_MABK|")
    ax1.set_xlabel("alpha")
    ax1.legend()
    for name, table in tables.items():
        ax2.plot([float(r["alpha"]) for r in table], [float(r["delta_chi"]) for r in table], label=name)
    ax2.axhline(1.0, color="grey", lw=0.5)
    ax2.set_xlabel("alpha")
    ax2.set_ylabel("max |chi| / LHV bound")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(outdir / "figure2.png", dpi=150)
    print(f"plot written to {outdir / 'figure2.png'}")


if __name__ == "__main__":
    main()
