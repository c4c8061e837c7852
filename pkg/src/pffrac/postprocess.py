"""Post-processing: peak load, kink angle, damage locus, sweep summaries."""

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import validate_config
from .errors import NoCrackFound


def f_max_from_records(records):
    """Peak force and the displacement where it occurs."""
    best = None
    for r in records:
        F = r["F_N"] if isinstance(r, dict) else r.force
        u = r["u_mm"] if isinstance(r, dict) else r.ubar
        if math.isfinite(F) and (best is None or F > best[0]):
            best = (F, u)
    if best is None:
        raise ValueError("record holds no finite forces")
    return best


def measure_kink_angle(mesh, z, tip, r_min, r_max, z_threshold=0.9):
    """Kink angle of the crack path beyond the notch tip.

    Fits the principal direction of the centroids of elements whose mean
    phase field exceeds the threshold, within the radial window
    (r_min, r_max) ahead of the tip.  Angle convention: 180 deg is
    straight continuation; deviation is positive when the crack kinks
    below the notch line.  Returns (alpha_deg, deviation_deg).
    """
    zc = z[mesh.elems].mean(axis=1)
    cent = mesh.coords[mesh.elems].mean(axis=1)
    rel = cent - np.asarray(tip)[None, :]
    r = np.sqrt((rel ** 2).sum(axis=1))
    sel = (zc > z_threshold) & (r >= r_min) & (r <= r_max) & (rel[:, 0] > 0.0)
    if not np.any(sel):
        raise NoCrackFound(
            f"no elements with z > {z_threshold} in the window ({r_min}, {r_max})"
        )
    pts = rel[sel]
    # principal direction through the tip (moments about the tip keep the
    # fit anchored to the kink origin)
    M = pts.T @ pts
    w, V = np.linalg.eigh(M)
    d = V[:, np.argmax(w)]
    if d[0] < 0:
        d = -d
    deviation = math.degrees(math.atan2(-d[1], d[0]))
    return 180.0 - deviation, deviation


def first_damage_classification(mesh, first_damage, scenario, cfg):
    """Locate the first z > 0.9 node relative to the scenario geometry."""
    if first_damage is None:
        raise NoCrackFound("run produced no damage above 0.9")
    xy = np.asarray(first_damage["coords"])
    if scenario == "brazilian":
        R = cfg.mesh["diameter_mm"] / 2.0
        r = float(np.linalg.norm(xy))
        return {"radius_fraction": r / R}
    if scenario == "conchoidal":
        a = cfg.mesh["a_mm"]
        x, y, zc = xy
        interior = (
            0.0 + 1e-9 < zc < 2.0 * a - 1e-9
            and 1e-9 < x < 4.0 * a - 1e-9
            and 1e-9 < y < 4.0 * a - 1e-9
        )
        return {"interior": bool(interior), "depth_fraction": zc / (2.0 * a)}
    return {"coords": [float(v) for v in xy]}


# -- sweeps -------------------------------------------------------------------


def _set_dotted(cfg_dict, dotted, value):
    parts = dotted.split(".")
    d = cfg_dict
    for p in parts[:-1]:
        d = d.setdefault(p, {})
    d[parts[-1]] = value


def _run_member(args):
    raw, out_dir = args
    from .scenarios import run_scenario

    cfg = validate_config(raw)
    cfg.output["dir"] = out_dir
    res = run_scenario(cfg)
    return {
        "status": res.status,
        "f_max": res.f_max,
        "first_damage": res.first_damage,
    }


def sweep_and_summarize(template, axis, values, out_dir, jobs=1):
    """Run the template across the sweep axis and tabulate F_max ratios.

    Each member runs in its own subdirectory; the summary CSV lists the
    axis value, the peak load and the ratio to the first member.
    """
    os.makedirs(out_dir, exist_ok=True)
    tasks = []
    for v in values:
        raw = json.loads(json.dumps(template))  # deep copy
        _set_dotted(raw, axis, v)
        member_dir = os.path.join(out_dir, f"{axis.replace('.', '_')}_{v:g}")
        tasks.append((raw, member_dir))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_member, tasks))
    else:
        results = [_run_member(t) for t in tasks]
    base = results[0]["f_max"] or float("nan")
    rows = []
    for v, res in zip(values, results):
        rows.append(
            {
                "value": v,
                "f_max": res["f_max"],
                "ratio": res["f_max"] / base if base else float("nan"),
                "status": res["status"],
            }
        )
    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["value", "f_max", "ratio_to_first", "status"])
        for r in rows:
            w.writerow([repr(float(r["value"])), repr(float(r["f_max"])),
                        repr(float(r["ratio"])), r["status"]])
    return rows
