"""File input and output for command-line runs.

CSV files open with two comment lines, ``# dgue <version> <command>``
and ``# config <json>``, where the JSON records every setting that can
influence the numbers in the file (and nothing that cannot, so the same
physics run always embeds the same header).  Floats are written with
``repr``, the shortest digit string that round-trips, which both keeps
files compact and makes byte-identity a meaningful reproducibility test.
"""

from __future__ import annotations

import json
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import yaml


def fmt(value) -> str:
    """Render one CSV cell; floats via shortest round-trip repr."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    return str(float(value)) if hasattr(value, "dtype") else str(value)


def config_header(version: str, command: str, config: dict) -> list[str]:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return [f"# dgue {version} {command}", f"# config {blob}"]


def write_csv(path, comments: list[str], columns: list[str], rows) -> None:
    with open(path, "w") as fh:
        for line in comments:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(cell) for cell in row) + "\n")


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config_file(path) -> dict:
    """Read a run configuration mapping from YAML (or JSON, a subset).

    A summary file written by a previous run is accepted too: its
    embedded ``config`` object is extracted, so any results file can be
    replayed directly.
    """
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping of option names")
    return data


def ensure_outdir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def plot_scan(path, scans, references=None, title: str | None = None) -> None:
    """Log-log plot of total moments vs size with fits and references.

    ``references`` maps a moment order to ``(exponent, label)``; each
    reference is drawn as a dashed guide through the data's geometric
    midpoint, so only its slope carries meaning.
    """
    import numpy as np

    plt.rcParams["svg.hashsalt"] = "dgue"  # reproducible element ids
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, scan in enumerate(scans):
        color = colors[i % len(colors)]
        ns = np.array([e.size for e in scan.estimates], dtype=float)
        vals = np.array([e.total_iq for e in scan.estimates])
        errs = np.array([e.std_error for e in scan.estimates])
        ax.errorbar(ns, vals, yerr=errs, fmt="o", color=color,
                    label=f"q = {scan.q:g} (slope {scan.slope:.3f})")
        grid = np.geomspace(ns.min(), ns.max(), 64)
        ax.plot(grid, np.exp(scan.intercept) * grid**scan.slope,
                color=color, lw=1.0)
        ref = (references or {}).get(scan.q)
        if ref is not None:
            exponent, label = ref
            anchor_x = float(np.exp(np.mean(np.log(ns))))
            anchor_y = float(np.exp(np.mean(np.log(vals))))
            ax.plot(grid, anchor_y * (grid / anchor_x)**exponent,
                    color=color, lw=1.0, ls="--",
                    label=f"q = {scan.q:g} {label}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("matrix size N")
    ax.set_ylabel("total moment")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
