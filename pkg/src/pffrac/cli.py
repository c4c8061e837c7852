"""Command-line interface.

    pffrac run <config.json> [--out DIR]
    pffrac sweep <template.json> --axis evolution.l_c_mm --values 1,2,3 [--out DIR] [--jobs N]
    pffrac validate <config.json>
    pffrac postprocess {kink,fmax} <run-dir> [--tip X Y] [--window RMIN RMAX] [--lc LC]

Exit codes: 0 success, 2 validation failure, 3 solver failure (partial
outputs are kept).
"""

import argparse
import json
import logging
import os
import sys

from . import postprocess, vtk_io
from .config import parse_config
from .errors import ConfigError, NoCrackFound
from .meshing import Mesh


def _build_parser():
    ap = argparse.ArgumentParser(prog="pffrac",
                                 description="phase-field fracture simulator")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="override output.dir")

    p_sweep = sub.add_parser("sweep", help="run a template across an axis")
    p_sweep.add_argument("template")
    p_sweep.add_argument("--axis", required=True,
                         help="dotted config key, e.g. evolution.l_c_mm")
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated numeric values")
    p_sweep.add_argument("--out", default="sweep_out")
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")

    p_post = sub.add_parser("postprocess", help="evaluate a finished run")
    p_post.add_argument("what", choices=("kink", "fmax"))
    p_post.add_argument("rundir")
    p_post.add_argument("--tip", nargs=2, type=float,
                        help="notch tip coordinates (kink)")
    p_post.add_argument("--window", nargs=2, type=float,
                        help="radial fit window (kink)")
    p_post.add_argument("--lc", type=float, default=None,
                        help="regularization length for default windows")
    return ap


def _cmd_run(args):
    cfg = parse_config(args.config)
    if args.out:
        cfg.output["dir"] = args.out
    from .scenarios import run_scenario

    res = run_scenario(cfg)
    print(f"status: {res.status}")
    print(f"steps:  {len(res.records)}")
    print(f"f_max:  {res.f_max:.6g}")
    if res.status != "completed":
        print(f"reason: {res.failure_reason}", file=sys.stderr)
        return 3
    return 0


def _cmd_sweep(args):
    with open(args.template, "r", encoding="utf-8") as fh:
        template = json.load(fh)
    values = [float(v) for v in args.values.split(",")]
    rows = postprocess.sweep_and_summarize(
        template, args.axis, values, args.out, jobs=args.jobs
    )
    for r in rows:
        print(f"{args.axis}={r['value']:g}: f_max={r['f_max']:.6g} "
              f"ratio={r['ratio']:.4f} ({r['status']})")
    if any(r["status"] != "completed" for r in rows):
        return 3
    return 0


def _cmd_validate(args):
    parse_config(args.config)
    print("ok")
    return 0


def _load_run(rundir):
    records = vtk_io.read_curve_csv(os.path.join(rundir, "curve.csv"))
    manifest = vtk_io.read_manifest(os.path.join(rundir, "manifest.json"))
    return records, manifest


def _cmd_postprocess(args):
    records, manifest = _load_run(args.rundir)
    if args.what == "fmax":
        F, u = postprocess.f_max_from_records(records)
        print(f"f_max: {F:.6g} at u = {u:.6g} mm")
        return 0
    field = vtk_io.read_vtk(os.path.join(args.rundir, "fields_final.vtk"))
    mesh = Mesh("tri3", field["points"][:, :2], field["cells"])
    l_c = args.lc or manifest["evolution"].get("l_c_mm", 1.0)
    if args.tip:
        tip = tuple(args.tip)
    else:
        size = manifest["mesh"]["size_mm"]
        tip = (manifest["mesh"]["slit_half_length_mm"], size / 2.0)
    window = tuple(args.window) if args.window else (2.0 * l_c, 12.0 * l_c)
    alpha, dev = postprocess.measure_kink_angle(
        mesh, field["z"], tip, window[0], window[1]
    )
    print(f"kink angle: {alpha:.1f} deg (deviation {dev:+.1f} deg)")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "postprocess":
            return _cmd_postprocess(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoCrackFound as exc:
        print(f"postprocess error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
