"""Output writers: legacy VTK (ASCII v3.0), load-displacement CSV, manifests.

The VTK writer emits full-precision floats so files round-trip
bit-exactly; a minimal reader supports the round-trip tests and the
post-processing CLI.
"""

import csv
import json

import numpy as np

_CELL_TYPE = {"line2": 3, "tri3": 5, "hex8": 12}
CSV_HEADER = ["step", "u_mm", "F_N", "max_z", "iters", "seconds"]


def _fmt(x):
    return repr(float(x))


def write_vtk(path, mesh, z=None, displacement=None):
    """Legacy VTK unstructured-grid file with point data z / displacement."""
    n = mesh.n_nodes
    coords3 = np.zeros((n, 3))
    coords3[:, : mesh.dim] = mesh.coords
    lines = [
        "# vtk DataFile Version 3.0",
        "pffrac fields",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {n} double",
    ]
    for p in coords3:
        lines.append(f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
    ne, npe = mesh.elems.shape
    lines.append(f"CELLS {ne} {ne * (npe + 1)}")
    for el in mesh.elems:
        lines.append(" ".join([str(npe)] + [str(int(i)) for i in el]))
    lines.append(f"CELL_TYPES {ne}")
    ct = _CELL_TYPE[mesh.kind]
    lines.extend([str(ct)] * ne)
    if z is not None or displacement is not None:
        lines.append(f"POINT_DATA {n}")
    if z is not None:
        lines.append("SCALARS z double")
        lines.append("LOOKUP_TABLE default")
        for v in z:
            lines.append(_fmt(v))
    if displacement is not None:
        disp3 = np.zeros((n, 3))
        disp3[:, : displacement.shape[1]] = displacement
        lines.append("VECTORS displacement double")
        for d in disp3:
            lines.append(f"{_fmt(d[0])} {_fmt(d[1])} {_fmt(d[2])}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_vtk(path):
    """Parse the writer's output back (points, cells, z, displacement)."""
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split("\n")
    out = {"points": None, "cells": None, "z": None, "displacement": None}
    i = 0
    while i < len(tokens):
        line = tokens[i].strip()
        if line.startswith("POINTS"):
            n = int(line.split()[1])
            pts = [list(map(float, tokens[i + 1 + j].split())) for j in range(n)]
            out["points"] = np.array(pts)
            i += n
        elif line.startswith("CELLS"):
            ne = int(line.split()[1])
            cells = [list(map(int, tokens[i + 1 + j].split()))[1:] for j in range(ne)]
            out["cells"] = np.array(cells, dtype=np.int64)
            i += ne
        elif line.startswith("SCALARS z"):
            n = out["points"].shape[0]
            vals = [float(tokens[i + 2 + j]) for j in range(n)]
            out["z"] = np.array(vals)
            i += n + 1
        elif line.startswith("VECTORS displacement"):
            n = out["points"].shape[0]
            vals = [list(map(float, tokens[i + 1 + j].split())) for j in range(n)]
            out["displacement"] = np.array(vals)
            i += n
        i += 1
    return out


def write_curve_csv(path, records):
    """RFC-4180 style CSV of the load-displacement record."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow(
                [r.step, _fmt(r.ubar), _fmt(r.force), _fmt(r.max_z),
                 r.iterations, f"{r.seconds:.6f}"]
            )


def read_curve_csv(path):
    with open(path, "r", encoding="ascii", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER, f"unexpected CSV header: {rows[0]}"
    recs = []
    for row in rows[1:]:
        recs.append(
            {
                "step": int(row[0]),
                "u_mm": float(row[1]),
                "F_N": float(row[2]),
                "max_z": float(row[3]),
                "iters": int(row[4]),
                "seconds": float(row[5]),
            }
        )
    return recs


def write_manifest(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
