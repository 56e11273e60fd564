"""Command line interface.

Subcommands: ``morph`` (write intermediate shapes as WKT), ``hausdorff``
(print distance and witnesses), ``render`` (SVG frames), ``batch`` (run the
measurement protocol over a manifest of pairs) and ``gen`` (synthetic pair
generators).  Exit codes: 0 success, 1 argument/parse/validation error,
2 geometric failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import experiments, report
from .errors import GeometryError, HausmorphError
from .hausdorff import directed_hausdorff, hausdorff
from .morphs import METHODS, compute_morph, normalize_pair
from .shapes import Point, Shape, centroid, measure, rectangle, transform
from .svgout import DEFAULT_FILLS, RenderOptions, render_svg, shared_viewbox
from .voronoi import DEFAULT_ARC_TOLERANCE
from .wkt import emit_wkt, parse_wkt


class _UserError(HausmorphError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract reserves
    # 2 for geometric failures, so remap argument errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _alpha_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from None
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise argparse.ArgumentTypeError("--alpha values must lie in [0, 1]")
    return values


def _canvas(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad canvas {text!r}, expected WxH") from None


def _method_list(text: str) -> list[str]:
    methods = [tok.strip() for tok in text.split(",") if tok.strip()]
    for m in methods:
        if m not in METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {m!r}")
    return methods


def _load_shape(path: str) -> Shape:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UserError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_wkt(text)
    except HausmorphError as exc:
        raise _UserError(f"{path}: {exc}") from exc


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _fmt_alpha(alpha: float) -> str:
    return format(alpha, "g")


def _morph_flags(sub: argparse.ArgumentParser, with_method=True):
    if with_method:
        sub.add_argument("--method", choices=METHODS, required=True)
        sub.add_argument("--alpha", type=_alpha_list, required=True,
                         help="comma-separated list of time values in [0,1]")
    sub.add_argument("--phi", type=float, default=0.0,
                     help="closing radius for the mixed morph")
    sub.add_argument("--align", choices=("centroid", "none"), default="none")
    sub.add_argument("--scale", choices=("equal-area", "none"), default="none")
    sub.add_argument("--segments", type=int, default=64,
                     help="disk approximation segment count")
    sub.add_argument("--arc-tol", type=float, default=DEFAULT_ARC_TOLERANCE,
                     help="sagitta bound for curved Voronoi cell boundaries")
    sub.add_argument("shape_a", metavar="A.wkt")
    sub.add_argument("shape_b", metavar="B.wkt")


def _prepare_pair(args):
    """Parse both inputs and normalize per the flags.

    Returns the pair plus a per-alpha placement function mapping the morph
    output back to the input frame (the identity unless centroids are
    aligned, in which case the shape is translated by the interpolated
    centroid so the endpoints reproduce the inputs)."""
    a = _load_shape(args.shape_a)
    b = _load_shape(args.shape_b)
    scale = "equal_area" if args.scale == "equal-area" else "none"
    pair = normalize_pair(a, b, align=args.align, scale=scale,
                          arc_tolerance=args.arc_tol)
    if args.align == "centroid":
        sa, sb = pair.applied_translation
        ca = Point(-sa[0], -sa[1])
        cb = Point(-sb[0], -sb[1])

        def place(shape, alpha):
            return transform(shape, translation=(
                ca.x + alpha * (cb.x - ca.x), ca.y + alpha * (cb.y - ca.y)))
    else:
        def place(shape, alpha):
            return shape
    return pair, place


def cmd_morph(args) -> int:
    pair, place = _prepare_pair(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"h={pair.h:.12g}")
    ref_a = place(pair.a, 0.0)
    ref_b = place(pair.b, 1.0)
    for alpha in args.alpha:
        result = compute_morph(pair, args.method, alpha, args.phi,
                               disk_segments=args.segments, arc_tolerance=args.arc_tol)
        placed = place(result.shape, alpha)
        path = out_dir / f"{args.method}-{_fmt_alpha(alpha)}.wkt"
        _write_atomic(path, emit_wkt(placed) + "\n")
        m = measure(placed)
        if placed.is_empty:
            print(f"alpha={_fmt_alpha(alpha)} area=0 perimeter=0 components=0 holes=0 "
                  f"dh_a=nan dh_b=nan")
            continue
        dh_a = hausdorff(placed, ref_a, args.arc_tol).distance
        dh_b = hausdorff(placed, ref_b, args.arc_tol).distance
        print(f"alpha={_fmt_alpha(alpha)} area={m.area:.6f} perimeter={m.perimeter:.6f} "
              f"components={m.components} holes={m.holes} "
              f"dh_a={dh_a:.6f} dh_b={dh_b:.6f}")
    return 0


def cmd_hausdorff(args) -> int:
    a = _load_shape(args.shape_a)
    b = _load_shape(args.shape_b)
    ab = directed_hausdorff(a, b)
    ba = directed_hausdorff(b, a)
    und = ab if ab.distance >= ba.distance else ba
    w, t = und.witness_source, und.witness_target
    print(f"{und.distance:.12g} {ab.distance:.12g} {ba.distance:.12g} "
          f"{w.x:.12g} {w.y:.12g} {t.x:.12g} {t.y:.12g}")
    return 0


def cmd_render(args) -> int:
    pair, place = _prepare_pair(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    options = RenderOptions(canvas=args.canvas, margin=args.margin,
                            frame_alphas=tuple(args.frames))
    frames = {}
    for method in args.methods:
        for alpha in args.frames:
            result = compute_morph(pair, method, alpha, args.phi,
                                   disk_segments=args.segments, arc_tolerance=args.arc_tol)
            frames[(method, alpha)] = place(result.shape, alpha)
    viewbox = shared_viewbox(frames.values(), options.margin)
    for (method, alpha), shape in frames.items():
        svg = render_svg(shape, viewbox, options, options.fill_colors[method])
        _write_atomic(out_dir / f"{method}-{_fmt_alpha(alpha)}.svg", svg)
    print(f"wrote {len(frames)} frames to {out_dir}")
    return 0


def _batch_pair(payload):
    entry, step, phi, min_area, segments, arc_tol = payload
    a = _load_shape(str(entry.path_a))
    b = _load_shape(str(entry.path_b))
    pair = experiments.unit_area_pair(a, b, arc_tolerance=arc_tol)
    return experiments.run_grid(pair, METHODS, step, phi, min_area, entry.pair_id,
                                disk_segments=segments, arc_tolerance=arc_tol)


def _batch_workers() -> int:
    env = os.environ.get("HAUSMORPH_THREADS", "0")
    try:
        cap = int(env)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return cap


def cmd_batch(args) -> int:
    entries = experiments.read_manifest(args.manifest)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = min(_batch_workers(), max(len(entries), 1))
    print(f"batch: step={args.step:g} phi={args.phi:g} filter={args.filter:g} "
          f"pairs={len(entries)} workers={workers}")
    payloads = [(e, args.step, args.phi, args.filter, args.segments, args.arc_tol)
                for e in entries]
    results = {}
    failures = []

    def record_failure(entry, exc):
        failures.append((entry.pair_id, exc))
        print(f"skip {entry.pair_id}: {exc}", file=sys.stderr)

    if workers > 1 and len(entries) > 1:
        import multiprocessing

        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            futures = {pool.submit(_batch_pair, p): p[0] for p in payloads}
            for future, entry in futures.items():
                try:
                    results[entry.pair_id] = future.result()
                except Exception as exc:  # per-pair isolation
                    record_failure(entry, exc)
    else:
        for payload in payloads:
            try:
                results[payload[0].pair_id] = _batch_pair(payload)
            except Exception as exc:
                record_failure(payload[0], exc)

    if not results:
        print("all pairs failed", file=sys.stderr)
        return 2 if any(isinstance(exc, GeometryError) for _, exc in failures) else 1

    records = [rec for pair_id in sorted(results) for rec in results[pair_id]]
    grouping = {e.pair_id: e.category for e in entries}
    rows = experiments.aggregate(records, grouping)
    _write_atomic(out_dir / "records.csv", experiments.emit_csv(records))
    _write_atomic(out_dir / "summary.csv", experiments.emit_csv(rows))
    if args.plots:
        report.write_report_figures(records, out_dir)
    print(f"wrote {out_dir / 'records.csv'} and {out_dir / 'summary.csv'}")
    return 0


def _write_pair(out_dir: Path, a: Shape, b: Shape, pair_id: str, category: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_atomic(out_dir / "a.wkt", emit_wkt(a) + "\n")
    _write_atomic(out_dir / "b.wkt", emit_wkt(b) + "\n")
    _write_atomic(out_dir / "manifest.txt", f"{pair_id},a.wkt,b.wkt,{category}\n")
    print(f"wrote {out_dir / 'a.wkt'}, {out_dir / 'b.wkt'}, {out_dir / 'manifest.txt'}")


def cmd_gen(args) -> int:
    out_dir = Path(args.out)
    if args.generator == "comb":
        a, b = experiments.generate_comb_pair(args.prongs)
        _write_pair(out_dir, a, b, f"comb-{args.prongs}", "comb")
    elif args.generator == "random":
        a, b = experiments.generate_random_pair(args.seed, args.vertices)
        _write_pair(out_dir, a, b, f"random-{args.seed}", "random")
    else:
        gap = args.gap
        if gap <= 0:
            raise _UserError("--gap must be positive")
        a = rectangle(0.0, 0.0, 1.0, 1.0)
        b = rectangle(1.0 + gap, 0.0, 2.0 + gap, 1.0)
        _write_pair(out_dir, a, b, f"squares-{gap:g}", "squares")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hausmorph",
                     description="Hausdorff-distance morphs between planar shapes")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p_morph = sub.add_parser("morph", formatter_class=fmt,
                             help="write intermediate shapes as WKT files")
    _morph_flags(p_morph)
    p_morph.add_argument("--out", default=".", help="output directory")
    p_morph.set_defaults(func=cmd_morph)

    p_h = sub.add_parser("hausdorff", formatter_class=fmt,
                         help="print distance and witness points")
    p_h.add_argument("shape_a", metavar="A.wkt")
    p_h.add_argument("shape_b", metavar="B.wkt")
    p_h.set_defaults(func=cmd_hausdorff)

    p_render = sub.add_parser("render", formatter_class=fmt, help="render SVG frames")
    p_render.add_argument("--frames", type=_alpha_list, default=[0.0, 0.25, 0.5, 0.75, 1.0],
                          help="comma-separated alpha values")
    p_render.add_argument("--methods", type=_method_list, default=list(METHODS))
    p_render.add_argument("--canvas", type=_canvas, default=(800, 600))
    p_render.add_argument("--margin", type=float, default=0.05)
    _morph_flags(p_render, with_method=False)
    p_render.add_argument("--out", default=".", help="output directory")
    p_render.set_defaults(func=cmd_render)

    p_batch = sub.add_parser("batch", formatter_class=fmt,
                             help="run the measurement protocol over a manifest")
    p_batch.add_argument("--manifest", required=True)
    p_batch.add_argument("--step", type=float, default=0.125, help="alpha grid step")
    p_batch.add_argument("--phi", type=float, default=0.02,
                         help="mixed morph closing radius (unit-area units)")
    p_batch.add_argument("--filter", type=float, default=1e-6,
                         help="spurious feature area threshold")
    p_batch.add_argument("--segments", type=int, default=64)
    p_batch.add_argument("--arc-tol", type=float, default=DEFAULT_ARC_TOLERANCE)
    p_batch.add_argument("--plots", action=argparse.BooleanOptionalAction, default=True,
                         help="write summary figures next to the CSVs")
    p_batch.add_argument("--out", default=".", help="output directory")
    p_batch.set_defaults(func=cmd_batch)

    p_gen = sub.add_parser("gen", formatter_class=fmt, help="generate synthetic pairs")
    gen_sub = p_gen.add_subparsers(dest="generator", required=True)
    g_comb = gen_sub.add_parser("comb", formatter_class=fmt)
    g_comb.add_argument("--prongs", type=int, default=4)
    g_comb.add_argument("--out", default=".")
    g_random = gen_sub.add_parser("random", formatter_class=fmt)
    g_random.add_argument("--seed", type=int, default=0)
    g_random.add_argument("--vertices", type=int, default=16)
    g_random.add_argument("--out", default=".")
    g_squares = gen_sub.add_parser("squares", formatter_class=fmt)
    g_squares.add_argument("--gap", type=float, default=1.0)
    g_squares.add_argument("--out", default=".")
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_UserError,) as exc:
        print(f"hausmorph: {exc}", file=sys.stderr)
        return 1
    except GeometryError as exc:
        print(f"hausmorph: geometric failure: {exc}", file=sys.stderr)
        return 2
    except HausmorphError as exc:
        print(f"hausmorph: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
