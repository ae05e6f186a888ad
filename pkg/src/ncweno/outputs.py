"""Plot-ready output writers: CSV for 1D, legacy-VTK plus CSV for 2D, and a
JSON run summary carrying the full config echo, conservation ledger and
timing."""

from __future__ import annotations

import json
import os

import numpy as np


def write_csv_1d(path: str, x: np.ndarray, conserved: np.ndarray,
                 primitive: np.ndarray, var_names, prim_names):
    cols = [x] + [conserved[k] for k in range(conserved.shape[0])] \
        + [primitive[k] for k in range(primitive.shape[0])]
    header = ",".join(["x"] + list(var_names) + [f"prim_{n}" for n in prim_names])
    data = np.column_stack(cols)
    np.savetxt(path, data, delimiter=",", header=header, comments="",
               fmt="%.17g")


def write_csv_2d(path: str, x, y, conserved, var_names):
    """Flattened (x, y, vars) table, x fastest."""
    ny, nx = conserved.shape[1], conserved.shape[2]
    xx = np.broadcast_to(x[None, :], (ny, nx)).ravel()
    yy = np.broadcast_to(y[:, None], (ny, nx)).ravel()
    cols = [xx, yy] + [conserved[k].ravel() for k in range(conserved.shape[0])]
    header = ",".join(["x", "y"] + list(var_names))
    np.savetxt(path, np.column_stack(cols), delimiter=",", header=header,
               comments="", fmt="%.17g")


def write_vtk_2d(path: str, x, y, fields: dict):
    """Legacy-VTK structured-points ASCII with one scalar field per entry."""
    ny, nx = next(iter(fields.values())).shape
    dx = x[1] - x[0] if len(x) > 1 else 1.0
    dy = y[1] - y[0] if len(y) > 1 else 1.0
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\nncweno snapshot\nASCII\n")
        fh.write("DATASET STRUCTURED_POINTS\n")
        fh.write(f"DIMENSIONS {nx} {ny} 1\n")
        fh.write(f"ORIGIN {x[0]:.17g} {y[0]:.17g} 0\n")
        fh.write(f"SPACING {dx:.17g} {dy:.17g} 1\n")
        fh.write(f"POINT_DATA {nx * ny}\n")
        for name, arr in fields.items():
            fh.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
            np.savetxt(fh, arr.ravel()[:, None], fmt="%.17g")


def write_summary(path: str, summary: dict):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=_coerce)
        fh.write("\n")


def _coerce(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj)}")


def snapshot_paths(out_dir: str, base: str, index: int, ndim: int):
    os.makedirs(out_dir, exist_ok=True)
    csv = os.path.join(out_dir, f"{base}_{index:04d}.csv")
    vtk = os.path.join(out_dir, f"{base}_{index:04d}.vtk") if ndim == 2 else None
    return csv, vtk
