"""Deterministic file I/O: canonical JSON, CSV formats, atomic writes.

All numeric output is serialized with 17 significant digits so identical runs
produce byte-identical files. JSON keys keep insertion order. Complex
matrices are stored as 2m real rows (real block, then imaginary block) next
to a JSON sidecar declaring the encoding.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def dumps_canonical(obj) -> str:
    """JSON text with fixed key order and 17-significant-digit floats."""
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {dumps_canonical(v)}"
                          for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps_canonical(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    return json.dumps(obj)


def atomic_write_text(path: str, text: str):
    """Write via temp file + rename; no partial files on interruption."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_signal_csv(path: str, x):
    atomic_write_text(path, "\n".join(format_float(v) for v in np.asarray(x)) + "\n")


def load_signal_csv(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return np.array([float(line) for line in fh if line.strip()])


def save_matrix_csv(path: str, mat: np.ndarray):
    """Row-major CSV; complex input becomes 2m real rows plus a sidecar."""
    mat = np.asarray(mat)
    if np.iscomplexobj(mat):
        stacked = np.vstack([mat.real, mat.imag])
        _write_real_rows(path, stacked)
        sidecar = {"encoding": "stacked-complex", "m": int(mat.shape[0]),
                   "n": int(mat.shape[1])}
        atomic_write_text(path + ".meta.json", dumps_canonical(sidecar) + "\n")
    else:
        _write_real_rows(path, mat.astype(float))


def _write_real_rows(path: str, mat: np.ndarray):
    lines = [",".join(format_float(v) for v in row) for row in mat]
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_matrix_csv(path: str, as_complex: bool = False) -> np.ndarray:
    """Load a matrix CSV. If a stacked-complex sidecar is present, the
    complex matrix is rebuilt when as_complex=True; otherwise the stacked
    real rows are returned as-is (the form the solver stack consumes)."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append([float(v) for v in line.split(",")])
    mat = np.array(rows)
    meta_path = path + ".meta.json"
    if as_complex and os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta.get("encoding") == "stacked-complex":
            m = int(meta["m"])
            return mat[:m] + 1j * mat[m:]
    return mat


def save_grid_csv(path: str, cells: dict):
    """Phase grid CSV: n,m,trials,mean_error,success_rate (sorted by n, m)."""
    lines = ["n,m,trials,mean_error,success_rate"]
    for (n, m) in sorted(cells):
        c = cells[(n, m)]
        lines.append(f"{n},{m},{c.trials},{format_float(c.mean_error)},"
                     f"{format_float(c.success_rate)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_grid_csv(path: str) -> dict:
    from .experiments import PhaseCell
    cells = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("n,m,"):
            raise ValueError(f"not a phase grid CSV: {path}")
        for line in fh:
            if not line.strip():
                continue
            n, m, trials, err, rate = line.split(",")
            cells[(int(n), int(m))] = PhaseCell(float(err), float(rate), int(trials))
    return cells
