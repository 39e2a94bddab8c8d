#!/usr/bin/env python3
"""Render PNG figures next to ionramp CSV tables.

Usage: plot_csv.py TABLE.csv [TABLE.csv ...]
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def load(path):
    return pd.read_csv(path, comment="#")


def group_label(keys, values):
    if not isinstance(values, tuple):
        values = (values,)
    return ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in zip(keys, values))


def trace(df, ax):
    keys = [k for k in ("tau_U1", "N", "J_over_U0", "sites") if df[k].nunique() > 1] or ["tau_U1"]
    # Off-diagonal correlation for multi-site ramps, ramped-site population otherwise.
    pairs = [c for c in df.columns if c.startswith("C_") and len(set(c.split("_")[1:])) == 2]
    column = pairs[0] if pairs else "site_fraction"
    for values, g in df.groupby(keys):
        ax.plot(g["t_U1"], g[column], label=group_label(keys, values))
    ax.set_xlabel("t |U1| / hbar")
    ax.set_ylabel(column)
    return True


def summary(df, ax):
    x = "J_over_U0" if df["J_over_U0"].nunique() > 1 else "tau_U1"
    y = "site_fraction_at_tau" if df["sites"].astype(str).str.count(";").eq(0).all() else "C_max"
    keys = [k for k in ("tau_U1", "N", "J_over_U0") if k != x and df[k].nunique() > 1]
    groups = df.groupby(keys) if keys else [((), df)]
    for values, g in groups:
        ax.plot(g[x], g[y], "o-", label=group_label(keys, values) if keys else None)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    return True


def thresholds(df, ax):
    reached = df[df["reached"] == 1]
    for n, g in reached.groupby("N"):
        ax.plot(g["J_over_U0"], g["tau_threshold_ms"], "o-", label=f"N={n}")
    ax.set_xlabel("J / U0")
    ax.set_ylabel("threshold ramp time (ms)")
    return True


def snapshot(df, ax):
    for t, g in df.groupby("t_U1"):
        matrix = g[[c for c in g.columns if c.startswith("C_k_")]].to_numpy()
        image = ax.imshow(matrix, cmap="RdBu_r", vmin=-0.5, vmax=0.5)
        ax.figure.colorbar(image, ax=ax)
        ax.set_title(f"C_kl at t |U1| = {t:g}")
        ax.set_xlabel("l")
        ax.set_ylabel("k")
        return True
    return False


def plot(path):
    df = load(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    if "tau_threshold_ms" in df.columns:
        drawn = thresholds(df, ax)
    elif "C_k_0" in df.columns:
        drawn = snapshot(df, ax)
    elif "t_U1" in df.columns:
        drawn = trace(df, ax)
    elif "C_max" in df.columns:
        drawn = summary(df, ax)
    else:
        drawn = False
    if drawn:
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize="small")
        fig.tight_layout()
        out = path.with_suffix(".png")
        fig.savefig(out, dpi=120)
        print(f"wrote {out}")
    plt.close(fig)


def main(argv):
    if len(argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    for name in argv[1:]:
        plot(Path(name))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
