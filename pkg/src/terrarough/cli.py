"""Command-line interface.

Exit status: 0 on success, 1 for data/runtime errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import logging
import sys
from pathlib import Path

from . import analysis, asciigrid, descriptors, pointcloud, render, synthterrain
from .rasterize import rasterize as rasterize_cloud

METHODS = {"natural": "natural_neighbour", "nearest": "nearest_neighbour", "tin": "tin_linear"}
DESCRIPTORS = {"rmsh": "rmsh", "ldre": "ldre", "rt": "rt", "slope": "slope_sd", "curv": "curvature_sd"}
TERRAINS = ("hilly-rough", "flat-rough", "flat-smooth")


def _window(text: str) -> int:
    try:
        w = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window {text!r}") from None
    try:
        return descriptors.check_window(w)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _windows(text: str) -> list[int]:
    return sorted({_window(t.strip()) for t in text.split(",") if t.strip()})


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="terrarough", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic terrain point cloud")
    s.add_argument("--terrain", required=True, choices=TERRAINS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--extent", type=_positive, default=350.0, help="side length in m")
    s.add_argument("--spacing", type=_positive, default=0.64, help="mean point spacing in m")
    s.add_argument("--hill-height", type=float, default=None)
    s.add_argument("--noise-sigma", type=float, default=None)
    s.add_argument("--out", required=True)

    s = sub.add_parser("rasterize", help="interpolate an XYZ cloud onto a grid")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--method", choices=sorted(METHODS), default="natural")
    s.add_argument("--cell", type=_positive, default=1.0)
    s.add_argument("--detrend", action="store_true", help="remove the best-fit plane and shift min to 0")
    s.add_argument("--out", required=True)

    s = sub.add_parser("roughness", help="roughness map of a DEM")
    s.add_argument("--dem", required=True)
    s.add_argument("--descriptor", required=True, choices=list(DESCRIPTORS))
    s.add_argument("--window", type=_window, default=5)
    s.add_argument("--normalize", action="store_true")
    s.add_argument("--out", required=True)

    s = sub.add_parser("compare", help="Pearson r between every pair of maps")
    s.add_argument("--maps", nargs="+", required=True)
    s.add_argument("--out", default=None, help="CSV path (default: stdout)")

    s = sub.add_parser("sweep", help="descriptor correlations over several window sizes")
    s.add_argument("--dem", required=True)
    s.add_argument("--windows", type=_windows, default=list(descriptors.DEFAULT_WINDOWS))
    s.add_argument("--out", default=None, help="CSV path (default: stdout)")

    s = sub.add_parser("render", help="PNG heatmap of a raster")
    s.add_argument("--map", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--palette", default="viridis")
    s.add_argument("--scale", type=int, default=4)
    return p


def cmd_synth(args) -> int:
    spec = synthterrain.TerrainSpec(args.terrain, extent=args.extent, spacing=args.spacing, seed=args.seed,
                                    hill_height=args.hill_height, noise_sigma=args.noise_sigma)
    cloud = synthterrain.generate(spec)
    pointcloud.save_xyz(cloud, args.out)
    print(f"wrote {len(cloud)} points to {args.out}", file=sys.stderr)
    return 0


def cmd_rasterize(args) -> int:
    cloud = pointcloud.load_xyz(args.inp)
    print(f"read {len(cloud)} points", file=sys.stderr)
    if args.detrend:
        cloud = pointcloud.detrend(cloud, pointcloud.fit_plane(cloud))
    dem = rasterize_cloud(cloud, METHODS[args.method], args.cell)
    asciigrid.write_asc(args.out, dem)
    print(f"wrote {dem.nrows}x{dem.ncols} DEM to {args.out}", file=sys.stderr)
    return 0


def cmd_roughness(args) -> int:
    dem = asciigrid.read_asc(args.dem)
    rmap = descriptors.roughness_map(dem, DESCRIPTORS[args.descriptor], args.window)
    if args.normalize:
        rmap = analysis.normalize01(rmap)
    asciigrid.write_asc(args.out, rmap.grid)
    meta = Path(args.out).with_suffix(".meta")
    asciigrid.write_meta(meta, rmap.meta())
    print(f"wrote {rmap.shape[0]}x{rmap.shape[1]} map to {args.out}", file=sys.stderr)
    return 0


def _emit_csv(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_compare(args) -> int:
    grids = [asciigrid.read_asc(p) for p in args.maps]
    labels = []
    for i, p in enumerate(args.maps):
        stem = Path(p).stem
        labels.append(stem if stem not in labels else f"{stem}#{i}")
    entries = []
    for i, j in itertools.combinations(range(len(grids)), 2):
        r, n = analysis.pearson_n(grids[i], grids[j])
        entries.append(analysis.CorrelationEntry(labels[i], labels[j], r, n))
    report = analysis.CorrelationReport(entries, {"compare": len(grids)})
    _emit_csv(analysis.format_csv([report]), args.out)
    return 0


def cmd_sweep(args) -> int:
    dem = asciigrid.read_asc(args.dem)
    sweep = analysis.scale_sweep(dem, args.windows)
    _emit_csv(analysis.format_csv(sweep.reports[w] for w in sweep.windows), args.out)
    return 0


def cmd_render(args) -> int:
    if args.scale < 1:
        raise _UsageError("--scale must be a positive integer")
    grid = asciigrid.read_asc(args.map)
    w, h = render.render_png(grid.values, args.out, args.palette, args.scale)
    print(f"wrote {w}x{h} image to {args.out}", file=sys.stderr)
    return 0


class _UsageError(Exception):
    pass


COMMANDS = {
    "synth": cmd_synth,
    "rasterize": cmd_rasterize,
    "roughness": cmd_roughness,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.error(str(exc))
    except (ValueError, OSError) as exc:
        print(f"terrarough {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
