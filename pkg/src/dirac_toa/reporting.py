"""Deterministic CSV/key-value artifacts and figure rendering.

All delimited output is written atomically (temp file + rename) with a
one-line header naming columns and units (natural units throughout) and
floats formatted with repr-faithful %.17g, so identical configurations
produce bit-identical files.  Figures are rendered headlessly alongside
the delimited output.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return str(value)


def atomic_write_text(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def write_csv(path: str, header: str, columns: dict):
    """Write named columns as CSV; header is a single comment-free line."""
    names = list(columns.keys())
    arrays = [np.atleast_1d(np.asarray(columns[k])) for k in names]
    n = arrays[0].shape[0]
    if any(a.shape[0] != n for a in arrays):
        raise ValueError("all columns must have equal length")
    lines = [header, ",".join(names)]
    for i in range(n):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_keyvalues(path: str, header: str, pairs: dict):
    lines = [f"# {header}"]
    for key, value in pairs.items():
        lines.append(f"{key} = {_fmt(value)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    note: str = ""


def check(name: str, value: float, threshold: float, note: str = "") -> CheckResult:
    return CheckResult(
        name=name, value=float(value), threshold=float(threshold),
        passed=bool(value < threshold), note=note,
    )


def check_in_range(name: str, value: float, lo: float, hi: float, note: str = "") -> CheckResult:
    return CheckResult(
        name=name, value=float(value), threshold=float(hi),
        passed=bool(lo <= value <= hi), note=note or f"range [{lo}, {hi}]",
    )


def write_checks_csv(path: str, results: list[CheckResult], header_note: str):
    write_csv(
        path,
        f"# {header_note}; dimensionless defects in natural units (hbar=c=1)",
        {
            "check": [r.name for r in results],
            "measured": [r.value for r in results],
            "threshold": [r.threshold for r in results],
            "passed": [r.passed for r in results],
            "note": [r.note.replace(",", ";") for r in results],
        },
    )


def print_checks(results: list[CheckResult]) -> bool:
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  ({r.note})" if r.note else ""
        print(f"{status}  {r.name}: measured={r.value:.6g} threshold={r.threshold:.6g}{extra}")
        ok = ok and r.passed
    return ok


# --------------------------------------------------------------------------
# Figures
# --------------------------------------------------------------------------

_FIG_KW = dict(figsize=(7.0, 4.5), dpi=140)


def fig_defect_bars(path: str, results: list[CheckResult], title: str):
    fig, ax = plt.subplots(**_FIG_KW)
    names = [r.name for r in results]
    values = [max(r.value, 1e-18) for r in results]
    thresholds = [r.threshold for r in results]
    pos = np.arange(len(names))
    colors = ["tab:blue" if r.passed else "tab:red" for r in results]
    ax.bar(pos, values, color=colors)
    ax.plot(pos, thresholds, "k_", markersize=18, label="threshold")
    ax.set_yscale("log")
    ax.set_xticks(pos)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("measured defect")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def fig_limit_sweep(path: str, masses, deviations, slope: float, title: str):
    fig, ax = plt.subplots(**_FIG_KW)
    ax.loglog(masses, deviations, "o-", label="measured deviation")
    ref = deviations[0] * (np.asarray(masses, float) / masses[0]) ** (-1.0)
    ax.loglog(masses, ref, "k--", alpha=0.6, label="slope -1 reference")
    ax.set_xlabel("mass m (natural units)")
    ax.set_ylabel("deviation from limit")
    ax.set_title(f"{title} (fitted slope {slope:.3f})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def fig_distribution(path: str, dist, title: str):
    fig, ax = plt.subplots(**_FIG_KW)
    ax.plot(dist.x_samples, dist.density, label="density (window-normalised)")
    ax.plot(dist.x_samples, dist.interference, label="interference term")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("arrival interval x (natural units)")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def operator_to_csv(path: str, op, note: str = ""):
    """Dense operator dump: one row per nonzero-structure entry (row, col, re, im)."""
    mat = op.matrix
    n = mat.shape[0]
    rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    write_csv(
        path,
        f"# dense operator ({op.rep} representation), flat index = 4*node+component; {note}",
        {
            "row": rows.ravel(),
            "col": cols.ravel(),
            "re": mat.real.ravel(),
            "im": mat.imag.ravel(),
        },
    )


def eigenfunction_to_csv(path: str, eig, grid, params):
    from .eigensystem import weight_momentum

    p = grid.nodes
    vals = eig.values.values
    if eig.eigenvalue_field is not None:
        eigval = eig.eigenvalue_field
    else:
        eigval = np.full(p.size, eig.eigenvalue)
    write_csv(
        path,
        "# arrival-time eigenfunction samples; momentum p, 4 spinor components, "
        "spectral weight, eigenvalue (natural units)",
        {
            "p": p,
            "re0": vals[:, 0].real, "im0": vals[:, 0].imag,
            "re1": vals[:, 1].real, "im1": vals[:, 1].imag,
            "re2": vals[:, 2].real, "im2": vals[:, 2].imag,
            "re3": vals[:, 3].real, "im3": vals[:, 3].imag,
            "weight": weight_momentum(p, params.m),
            "eigenvalue": eigval,
        },
    )
