"""Command-line interface.

Subcommands:
    defog     run the full pipeline on an image and write the result
    airlight  estimate atmospheric light (optionally both methods, annotated)
    metrics   score an original/restored pair
    synth     generate a synthetic fog scene with ground truth

Machine-readable output is JSON on stdout; timings are reported in
seconds with 3 decimals. Exit codes: 0 success, 2 argument or degenerate
input, 3 I/O or decode failure, 4 solver non-convergence. Any config
flag can be defaulted through the environment with the DEFOG_ prefix
(e.g. DEFOG_WINDOW_RADIUS=4).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import airlight as al
from .image import DecodeError, dark_channel, decode_image, encode_image
from .metrics import DegenerateInputError, compute_metrics
from .pipeline import PipelineConfig, estimate_airlight, run_defog
from .restoration import SceneSpec, synth_scene
from .transmission import SolverError

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_IO = 3
EXIT_SOLVER = 4

ENV_PREFIX = "DEFOG_"


def _env(name: str, fallback, cast):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return fallback
    if cast is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _add_config_flags(parser: argparse.ArgumentParser):
    defaults = PipelineConfig()
    flags = [
        ("window-radius", int, defaults.window_radius, "dark channel window radius"),
        ("omega", float, defaults.omega, "fog retention factor in (0, 1]"),
        ("fraction", float, defaults.fraction, "candidate fraction of pixels"),
        ("k", int, defaults.k, "number of clusters"),
        ("seed", int, defaults.seed, "clustering RNG seed"),
        ("t0", float, defaults.t0, "transmission lower bound at restore"),
        ("lambda", float, defaults.lam, "matting data-term weight"),
        ("epsilon", float, defaults.epsilon, "matting covariance regularizer"),
        ("matting-window-radius", int, defaults.matting_window_radius, "matting window radius"),
        ("max-solve-dim", int, defaults.max_solve_dim, "longer-side cap for the downscaled solve"),
        ("solver-tol", float, defaults.solver_tol, "CG relative residual tolerance"),
        ("solver-max-iter", int, defaults.solver_max_iter, "CG iteration cap"),
        ("eme-blocks-r", int, defaults.eme_blocks_r, "EME tile rows"),
        ("eme-blocks-c", int, defaults.eme_blocks_c, "EME tile columns"),
        ("edge-threshold", float, defaults.edge_threshold, "visible-edge contrast threshold"),
    ]
    for name, cast, dflt, help_text in flags:
        parser.add_argument(f"--{name}", type=cast, default=_env(name, dflt, cast),
                            dest=name.replace("-", "_"), help=help_text)
    parser.add_argument("--refine-mode", choices=("matting", "downscale_matting", "none"),
                        default=_env("refine-mode", defaults.refine_mode, str))
    parser.add_argument("--airlight-method", choices=("clustered", "baseline"),
                        default=_env("airlight-method", defaults.airlight_method, str))
    parser.add_argument("--sigma-black-only", action="store_true",
                        default=_env("sigma-black-only", False, bool))


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        window_radius=args.window_radius,
        omega=args.omega,
        fraction=args.fraction,
        k=args.k,
        seed=args.seed,
        t0=args.t0,
        lam=getattr(args, "lambda"),
        epsilon=args.epsilon,
        matting_window_radius=args.matting_window_radius,
        refine_mode=args.refine_mode,
        max_solve_dim=args.max_solve_dim,
        solver_tol=args.solver_tol,
        solver_max_iter=args.solver_max_iter,
        airlight_method=args.airlight_method,
        eme_blocks_r=args.eme_blocks_r,
        eme_blocks_c=args.eme_blocks_c,
        edge_threshold=args.edge_threshold,
        sigma_black_only=args.sigma_black_only,
    )


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise IOError(f"cannot read {path}: {exc}") from exc


def _write_bytes(path: str, data: bytes):
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_bytes(data)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _round_timings(stages: dict) -> dict:
    return {name: round(seconds, 3) for name, seconds in stages.items()}


def cmd_defog(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)

    raw = _read_bytes(args.input)
    tic = time.perf_counter()
    img = decode_image(raw)
    decode_s = time.perf_counter() - tic

    result = run_defog(img, cfg)

    tic = time.perf_counter()
    metrics_error = None
    try:
        metrics = compute_metrics(
            img, result.restored,
            cfg.eme_blocks_r, cfg.eme_blocks_c, cfg.edge_threshold, cfg.sigma_black_only)
    except DegenerateInputError as exc:
        # featureless inputs have no defined edge metrics; the restored
        # image is already valid, so report the gap instead of failing
        metrics = None
        metrics_error = str(exc)
    metrics_s = time.perf_counter() - tic

    tic = time.perf_counter()
    encoded = encode_image(result.restored)
    encode_s = time.perf_counter() - tic
    _write_bytes(args.output, encoded)

    if args.dump_transmission:
        _write_bytes(args.dump_transmission, encode_image(result.transmission))

    timings = dict(result.stage_seconds)
    timings["decode"] = decode_s
    timings["encode"] = encode_s
    timings["metrics"] = metrics_s
    report = {
        "input": args.input,
        "output": args.output,
        "airlight": result.estimate.to_dict(),
        "timings": _round_timings(timings),
        "metrics": metrics.to_dict() if metrics is not None else None,
        "config": cfg.to_dict(),
    }
    if metrics_error is not None:
        report["metrics_error"] = metrics_error
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _draw_diamond(img: np.ndarray, row: float, col: float, color, radius: int):
    h, w = img.shape[:2]
    r0, c0 = int(round(row)), int(round(col))
    for dr in range(-radius, radius + 1):
        span = radius - abs(dr)
        rr = r0 + dr
        if 0 <= rr < h:
            lo = max(0, c0 - span)
            hi = min(w - 1, c0 + span)
            if lo <= hi:
                img[rr, lo:hi + 1] = color


def cmd_airlight(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    img = decode_image(_read_bytes(args.input))
    dark = dark_channel(img, cfg.window_radius)

    clustered = al.estimate_airlight_clustered(img, dark, cfg.fraction, cfg.k, cfg.seed)
    baseline = al.estimate_airlight_baseline(img, dark, cfg.fraction)

    if args.compare:
        dist = float(np.hypot(clustered.location_row - baseline.location_row,
                              clustered.location_col - baseline.location_col))
        report = {
            "clustered": clustered.to_dict(),
            "baseline": baseline.to_dict(),
            "distance_pixels": dist,
        }
    else:
        chosen = clustered if cfg.airlight_method == "clustered" else baseline
        report = chosen.to_dict()

    if args.annotate:
        marked = img.copy()
        radius = max(3, min(img.shape[:2]) // 40)
        _draw_diamond(marked, baseline.location_row, baseline.location_col,
                      (1.0, 0.0, 0.0), radius)
        _draw_diamond(marked, clustered.location_row, clustered.location_col,
                      (0.0, 0.0, 1.0), radius)
        _write_bytes(args.annotate, encode_image(marked))

    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    original = decode_image(_read_bytes(args.original))
    restored = decode_image(_read_bytes(args.restored))
    if original.shape != restored.shape:
        raise ValueError(
            f"image dimensions differ: {original.shape[:2]} vs {restored.shape[:2]}")
    report = compute_metrics(
        original, restored,
        cfg.eme_blocks_r, cfg.eme_blocks_c, cfg.edge_threshold, cfg.sigma_black_only)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    if args.spec:
        spec = SceneSpec.from_dict(json.loads(_read_bytes(args.spec)))
    else:
        spec = SceneSpec(
            height=args.size[0],
            width=args.size[1],
            sky_rows=args.sky_rows,
            sky_color=tuple(args.sky_color),
            airlight=tuple(args.airlight),
            beta=args.beta,
            distractor_rect=tuple(args.distractor_rect) if args.distractor_rect else None,
            distractor_color=tuple(args.distractor_color),
            depth_near=args.depth_near,
            depth_far=args.depth_far,
            sky_depth=args.sky_depth,
            seed=args.seed,
        )
    hazy, truth, t_true = synth_scene(spec)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "hazy.png").write_bytes(encode_image(hazy))
    (out / "truth.png").write_bytes(encode_image(truth))
    (out / "t.png").write_bytes(encode_image(t_true))
    (out / "meta.json").write_text(json.dumps(spec.to_dict(), indent=2))
    print(json.dumps({"out_dir": str(out), "files": ["hazy.png", "truth.png", "t.png", "meta.json"]}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defog",
                                     description="Single-image defogging toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("defog", help="remove fog from an image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--dump-transmission", metavar="PATH",
                   help="also write the refined transmission as grayscale PNG")
    _add_config_flags(p)
    p.set_defaults(func=cmd_defog)

    p = sub.add_parser("airlight", help="estimate atmospheric light")
    p.add_argument("input")
    p.add_argument("--compare", action="store_true",
                   help="report both estimators and their pixel distance")
    p.add_argument("--annotate", metavar="PATH",
                   help="write a copy of the input with diamond markers "
                        "(red: baseline, blue: clustered)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_airlight)

    p = sub.add_parser("metrics", help="score an original/restored pair")
    p.add_argument("original")
    p.add_argument("restored")
    _add_config_flags(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("synth", help="generate a synthetic fog scene")
    p.add_argument("out_dir")
    p.add_argument("--spec", help="JSON scene spec file (overrides flags)")
    p.add_argument("--size", type=int, nargs=2, default=[120, 160], metavar=("H", "W"))
    p.add_argument("--sky-rows", type=int, default=40)
    p.add_argument("--sky-color", type=float, nargs=3, default=[0.6, 0.65, 0.7])
    p.add_argument("--airlight", type=float, nargs=3, default=[0.85, 0.88, 0.92])
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--distractor-rect", type=int, nargs=4, default=None,
                   metavar=("ROW", "COL", "H", "W"))
    p.add_argument("--distractor-color", type=float, nargs=3, default=[1.0, 1.0, 1.0])
    p.add_argument("--depth-near", type=float, default=1.0)
    p.add_argument("--depth-far", type=float, default=6.0)
    p.add_argument("--sky-depth", type=float, default=float("inf"))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DecodeError, IOError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DegenerateInputError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT


if __name__ == "__main__":
    sys.exit(main())
