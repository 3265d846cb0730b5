"""File output: CSV tables, run manifests, plot scripts and rendered figures."""

from __future__ import annotations

import csv
import os
import platform
import sys
from pathlib import Path

import numpy as np
import yaml

SNAPSHOT_HEADER = ("x", "a_n", "v_bar", "u_m", "e_in", "rho_bar", "p", "T")


def _fmt(value):
    """Locale-independent, round-trippable number formatting."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_snapshot(path, state, gas, grid) -> Path:
    rho = state.rho_bar(gas)
    cols = [grid.x, state.a_n, state.v_bar, state.u_m, state.e_in, rho,
            state.pressure(gas), state.temperature(gas)]
    return write_csv(path, SNAPSHOT_HEADER, zip(*cols))


def versions() -> dict:
    from .. import __version__
    import matplotlib
    import sympy
    return {
        "bivelocity": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "sympy": sympy.__version__,
        "matplotlib": matplotlib.__version__,
        "platform": platform.platform(),
    }


def write_manifest(path, config_dict: dict, extra: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config": config_dict, "versions": versions()}
    if extra:
        doc.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False, default_flow_style=None)
    return path


# -- plotting -------------------------------------------------------------------

_SCRIPT = '''"""Regenerate the figures of this run from its CSV files (needs matplotlib)."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
PLOTS = {plots!r}


def load(name):
    with open(os.path.join(HERE, name), newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {{h: [] for h in header}}
    for row in body:
        for h, v in zip(header, row):
            try:
                cols[h].append(float(v))
            except ValueError:
                cols[h].append(v)
    return cols


def main():
    os.makedirs(os.path.join(HERE, "figures"), exist_ok=True)
    for p in PLOTS:
        data = load(p["csv"])
        fig, ax = plt.subplots(figsize=(6, 4))
        for y in p["y"]:
            xs, ys = data[p["x"]], data[y]
            if p.get("logy"):
                ys = [abs(v) for v in ys]
            ax.plot(xs, ys, marker="o" if len(xs) < 20 else None, label=y)
        if p.get("logx"):
            ax.set_xscale("log")
        if p.get("logy"):
            ax.set_yscale("log")
        ax.set_xlabel(p["x"])
        ax.set_title(p["title"])
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(os.path.join(HERE, "figures", p["name"] + ".png"), dpi=120)
        plt.close(fig)


if __name__ == "__main__":
    main()
'''


def write_plot_script(directory, plots) -> Path:
    """``plots``: list of dicts with name, csv, x, y (list), title and optional logx/logy."""
    path = Path(directory) / "plot.py"
    path.write_text(_SCRIPT.format(plots=list(plots)), encoding="utf-8")
    return path


def render_figures(directory, plots) -> list[Path]:
    """Render the same figures in-process with matplotlib."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    out_dir = directory / "figures"
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for p in plots:
        header, body = read_csv(directory / p["csv"])
        cols = {h: [r[i] for r in body] for i, h in enumerate(header)}
        fig, ax = plt.subplots(figsize=(6, 4))
        xs = np.array(cols[p["x"]], dtype=float)
        for y in p["y"]:
            ys = np.array(cols[y], dtype=float)
            if p.get("logy"):
                ys = np.abs(ys)
            ax.plot(xs, ys, marker="o" if xs.size < 20 else None, label=y)
        if p.get("logx"):
            ax.set_xscale("log")
        if p.get("logy"):
            ax.set_yscale("log")
        ax.set_xlabel(p["x"])
        ax.set_title(p["title"])
        ax.legend(fontsize=7)
        fig.tight_layout()
        target = out_dir / f"{p['name']}.png"
        fig.savefig(target, dpi=120)
        plt.close(fig)
        written.append(target)
    return written


def ensure_dir(path) -> Path:
    path = Path(path)
    os.makedirs(path, exist_ok=True)
    return path
