"""Command-line interface.

Subcommands: encode, extract-points, simulate-session, robustness, render.
Exit codes: 0 success, 1 usage error, 2 data or format error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .clicksim import Rng, extract_extreme_points, perturb_points, select_three_points
from .encoder import ClickSet, SFGParams, encode
from .errors import SoftFocusError
from .fileio import (
    load_clicks,
    load_field,
    load_mask,
    save_clicks,
    save_field,
    write_robustness_csv,
    write_session_report,
)
from .render import render_overlay
from .robustness import FOCAL_TOL_PX, default_configurations, run_robustness
from .session import OracleSegmenter, SessionProtocol, ThresholdSegmenter, run_session

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _parse_size(text: str) -> tuple[int, int]:
    try:
        h, w = text.lower().split("x")
        return int(h), int(w)
    except ValueError as exc:
        raise SoftFocusError(f"--size must look like HxW, got {text!r}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(prog="softfocus", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="encode a click file into a soft-focus field")
    enc.add_argument("--points", required=True, help="click file (JSON)")
    enc.add_argument("--size", default=None, help="grid HxW; defaults to the click file grid")
    enc.add_argument("--beta", type=float, default=5.0)
    enc.add_argument("--sigma", type=float, default=10.0)
    enc.add_argument("--margin", type=int, default=0)
    enc.add_argument("--out", required=True, help="output SFF1 field file")
    enc.add_argument("--png", default=None, help="optional rendered PNG")

    ext = sub.add_parser("extract-points", help="extract (and optionally noise) extreme points")
    ext.add_argument("--mask", required=True, help="PNG mask file")
    ext.add_argument("--label", type=int, default=None, help="palette index treated as foreground")
    ext.add_argument("--num", type=int, choices=(3, 4), default=4)
    ext.add_argument("--noise", type=float, default=0.0, help="uniform noise half-range in px")
    ext.add_argument("--seed", type=int, default=0)
    ext.add_argument("--out", required=True, help="output click file (JSON)")

    ses = sub.add_parser("simulate-session", help="run an interactive annotation session")
    ses.add_argument("--mask", required=True, help="ground-truth PNG mask")
    ses.add_argument("--label", type=int, default=None)
    ses.add_argument("--segmenter", choices=("threshold", "oracle"), required=True)
    ses.add_argument("--level", type=float, default=0.5, help="threshold segmenter level")
    ses.add_argument("--flip-blobs", type=int, default=3, help="oracle segmenter degradations")
    ses.add_argument("--flip-size", type=int, default=49, help="oracle blob area in px")
    ses.add_argument("--num", type=int, choices=(3, 4), default=4)
    ses.add_argument("--noise", type=float, default=0.0)
    ses.add_argument("--max-clicks", type=int, default=20)
    ses.add_argument("--target-iou", type=float, default=0.85)
    ses.add_argument("--beta", type=float, default=5.0)
    ses.add_argument("--sigma", type=float, default=10.0)
    ses.add_argument("--seed", type=int, default=0)
    ses.add_argument("--report", required=True, help="output session report (JSON)")

    rob = sub.add_parser("robustness", help="extreme-point noise Monte-Carlo")
    rob.add_argument("--configs", default=None, help="JSON config file; defaults to built-ins")
    rob.add_argument("--draws", type=int, default=10000)
    rob.add_argument("--magnitude", type=float, default=10.0)
    rob.add_argument("--seed", type=int, default=0)
    rob.add_argument("--tol", type=float, default=FOCAL_TOL_PX)
    rob.add_argument("--out", required=True, help="output CSV")

    ren = sub.add_parser("render", help="render an SFF1 field to PNG")
    ren.add_argument("--field", required=True)
    ren.add_argument("--image", default=None, help="optional background image")
    ren.add_argument("--out", required=True)
    return parser


def _cmd_encode(args) -> int:
    doc = load_clicks(args.points)
    if args.size is not None:
        dims = _parse_size(args.size)
    elif doc.grid is not None:
        dims = doc.grid
    else:
        raise SoftFocusError("no grid size: pass --size or include grid in the click file")
    params = SFGParams(beta=args.beta, sigma=args.sigma, bbox_margin=args.margin)
    clicks = ClickSet(fpc=doc.fpc, fnc=doc.fnc)
    fld = encode(doc.extreme_points, clicks, params, dims)
    save_field(args.out, fld)
    if args.png:
        render_overlay(fld, args.png)
    print(f"encoded {doc.extreme_points.shape[0]} extreme points, "
          f"{doc.fpc.shape[0]} fpc, {doc.fnc.shape[0]} fnc -> {args.out}")
    return 0


def _cmd_extract_points(args) -> int:
    mask = load_mask(args.mask, label=args.label)
    rng = Rng(args.seed)
    points = extract_extreme_points(mask)
    if args.num == 3:
        points = select_three_points(points, rng.child(0))
    points = perturb_points(points, args.noise, rng.child(1), dims=mask.shape)
    save_clicks(args.out, points, grid=mask.shape, seed=args.seed)
    print(f"seed: {args.seed}")
    print(f"extracted {args.num} points -> {args.out}")
    return 0


def _cmd_simulate_session(args) -> int:
    mask = load_mask(args.mask, label=args.label)
    rng = Rng(args.seed)
    if args.segmenter == "threshold":
        segmenter = ThresholdSegmenter(level=args.level)
    else:
        segmenter = OracleSegmenter(mask, args.flip_blobs, args.flip_size, rng.child(9))
    protocol = SessionProtocol(
        start_k=args.num,
        max_clicks=args.max_clicks,
        target_iou=args.target_iou,
        noise_px=args.noise,
        params=SFGParams(beta=args.beta, sigma=args.sigma),
    )
    record = run_session(mask, segmenter, protocol, rng, object_id=str(args.mask))
    write_session_report(args.report, record, extra={"segmenter": args.segmenter})
    print(f"seed: {args.seed}")
    print(f"terminal: {record.terminal}, final iou: {record.final_iou:.4f}, "
          f"clicks: {record.steps[-1].click_count if record.steps else 0} -> {args.report}")
    return 0


def _load_configs(path) -> list[tuple[str, np.ndarray]]:
    import json

    from .errors import FormatError

    try:
        raw = json.loads(open(path).read())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(raw, list):
        raise FormatError(f"{path}: config file must be a JSON list")
    configs = []
    for i, entry in enumerate(raw):
        try:
            configs.append((str(entry["id"]), np.asarray(entry["points"], dtype=np.float64)))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}: config entry {i} needs 'id' and 'points'") from exc
    return configs


def _cmd_robustness(args) -> int:
    configs = _load_configs(args.configs) if args.configs else default_configurations()
    rng = Rng(args.seed)
    reports = []
    print(f"seed: {args.seed}")
    for index, (config_id, points) in enumerate(configs):
        report = run_robustness(
            points,
            args.draws,
            args.magnitude,
            rng.child(index),
            config_id=config_id,
            tol=args.tol,
        )
        reports.append(report)
        print(
            f"{config_id}: mean annotation error {report.mean_annotation_error:.3f} px, "
            f"mean focal perturbation {report.mean_focal_perturbation:.3f} px, "
            f"attenuation {report.attenuation_ratio:.4f}"
        )
    write_robustness_csv(args.out, reports)
    print(f"wrote {sum(len(r.draws) for r in reports)} draws -> {args.out}")
    return 0


def _cmd_render(args) -> int:
    fld = load_field(args.field)
    render_overlay(fld, args.out, image_path=args.image)
    print(f"rendered {args.field} -> {args.out}")
    return 0


_COMMANDS = {
    "encode": _cmd_encode,
    "extract-points": _cmd_extract_points,
    "simulate-session": _cmd_simulate_session,
    "robustness": _cmd_robustness,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SoftFocusError, ValueError, OSError) as exc:
        print(f"softfocus: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
