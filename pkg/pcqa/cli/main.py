"""Command-line entry point for the point-cloud quality toolkit.

Usage:
    pcqa preprocess IN.ply OUT.ply [--normalize]
    pcqa point-metrics REF.ply DIST.ply [-o OUT.csv]
    pcqa projection-metrics REF.ply DIST.ply [--metric ssim] [--gamma 0.19] [--pooling weighted]
    pcqa project IN.ply --dump-dir DIR
    pcqa dmos RATINGS.csv [--alpha 0.025] [--range-thresh 7] [--std-thresh 1.2]
    pcqa anova DMOS.csv | pcqa anova --ratings RATINGS.csv
    pcqa content IN.ply [IN.ply ...]
    pcqa benchmark OBJECTIVE.csv DMOS.csv [--session all|human|object]
    pcqa batch MANIFEST.csv
    pcqa normals IN.ply OUT.ply [--k 16]
    pcqa gains MEAN_REPORT.csv WEIGHTED_REPORT.csv
    pcqa sweep PROJECTION.csv DMOS.csv [--gammas 0.1,0.19,0.3]
    pcqa agreement HUMAN_DMOS.csv OBJECT_DMOS.csv

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

from pcqa import __version__
from pcqa.cli import commands
from pcqa.config.loader import load_config
from pcqa.config.settings import Settings, configure
from pcqa.exceptions import PcqaError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# argparse dest -> dotted config key; flags override file and environment values
OVERRIDE_FLAGS: dict[str, str] = {
    "workers": "runtime.workers",
    "output_dir": "runtime.output_dir",
    "log_level": "runtime.log_level",
    "bit_depth": "preprocess.bit_depth",
    "normalize": "preprocess.normalize",
    "target_box": "preprocess.target_box",
    "metric_bit_depth": "point_metrics.bit_depth",
    "peak": "point_metrics.psnr_peak",
    "normal_k": "point_metrics.normal_k",
    "direction": "point_metrics.direction",
    "splat_radius": "projection.splat_radius",
    "background": "projection.background",
    "resolution": "projection.resolution",
    "gamma": "pooling.gamma",
    "pooling": "pooling.pooling",
    "masked": "iqa.masked",
    "alpha": "subjective.alpha",
    "range_thresh": "subjective.range_thresh",
    "std_thresh": "subjective.std_thresh",
    "decimals": "benchmark.decimals",
    "max_iterations": "benchmark.max_iterations",
}


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common_parser() -> argparse.ArgumentParser:
    """Flags every subcommand accepts."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", "-c", type=Path, help="TOML or key=value config file")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level for messages on stderr (default: from config, INFO)",
    )
    common.add_argument("--verbose", "-v", action="store_true", help="Shorthand for --log-level DEBUG")
    common.add_argument("--workers", "-j", type=int, help="Worker processes for batch work")
    common.add_argument("--output-dir", type=Path, help="Directory for report files")
    common.add_argument("--version", action="version", version=f"pcqa {__version__}")
    return common


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("ref", type=Path, help="Reference cloud (PLY)")
    parser.add_argument("dist", type=Path, help="Distorted cloud (PLY)")
    parser.add_argument("--sample-id", help="Sample id for the output rows (default: distorted file stem)")
    parser.add_argument("--sequence", help="Sequence name for the output rows")
    parser.add_argument("--gqp", type=int, help="Geometry QP of the distorted cloud")
    parser.add_argument("--tqp", type=int, help="Texture QP of the distorted cloud")
    parser.add_argument("--output", "-o", type=Path, help="Output file (.csv/.json/.yaml/.xlsx); default stdout CSV")


def _add_projection_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--metric", "-m", action="append", help="Image metric; repeatable (default: from config)")
    parser.add_argument("--gamma", "-g", type=float, help="Weight of top and bottom views, in [0, 1]")
    parser.add_argument("--splat-radius", type=int, help="Half-width in pixels of each projected point")
    parser.add_argument("--resolution", type=int, help="Pixels per voxel")
    parser.add_argument("--masked", action="store_true", default=None, help="Score only occupied pixels")


def _add_point_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bit-depth", dest="metric_bit_depth", type=int, help="Geometry bit depth for the PSNR peak")
    parser.add_argument("--peak", type=float, help="PSNR peak override")
    parser.add_argument("--normal-k", type=int, help="Neighbours for normal estimation")
    parser.add_argument("--direction", choices=["forward", "backward", "symmetric"], help="Error direction")


def build_parser() -> argparse.ArgumentParser:
    """Create the ``pcqa`` argument parser."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="pcqa",
        description="Point-cloud quality assessment: objective metrics, DMOS processing and benchmarking",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
        parents=[common],
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    def add(name: str, func: Callable[..., int], help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text, description=help_text, parents=[common])
        sub.set_defaults(func=func)
        return sub

    # Pre-processing
    sub = add("preprocess", commands.cmd_preprocess, "Quantize, deduplicate and normalize a cloud")
    sub.add_argument("input", type=Path, help="Input cloud (PLY)")
    sub.add_argument("output", type=Path, help="Output cloud (PLY)")
    sub.add_argument("--bit-depth", type=int, help="Declared geometry bit depth")
    sub.add_argument("--normalize", action="store_true", default=None, help="Fit into the target box")
    sub.add_argument("--target-box", type=float, nargs=3, metavar=("X", "Y", "Z"), help="Target box size")
    sub.add_argument("--ascii", action="store_true", help="Write ASCII PLY instead of binary")

    # Point metrics
    sub = add("point-metrics", commands.cmd_point_metrics, "D1/D2/Hausdorff/PSNR/YUV metrics for one pair")
    _add_pair_arguments(sub)
    _add_point_arguments(sub)

    # Projection metrics
    sub = add("projection-metrics", commands.cmd_projection_metrics, "Six-view image metrics for one pair")
    _add_pair_arguments(sub)
    _add_projection_arguments(sub)
    sub.add_argument("--pooling", choices=["mean", "weighted"], help="View pooling")

    # Projection dump
    sub = add("project", commands.cmd_project, "Render six views to PPM/PGM files")
    sub.add_argument("input", type=Path, help="Cloud (PLY)")
    sub.add_argument("--dump-dir", type=Path, required=True, help="Directory for the view files")
    sub.add_argument("--stem", help="File name prefix (default: input file stem)")
    sub.add_argument("--splat-radius", type=int, help="Half-width in pixels of each projected point")
    sub.add_argument("--resolution", type=int, help="Pixels per voxel")

    # DMOS
    sub = add("dmos", commands.cmd_dmos, "Process a ratings CSV into DMOS")
    sub.add_argument("ratings", type=Path, help="Ratings CSV: subject_id,sample_id,sequence,gqp,tqp,score")
    sub.add_argument("--alpha", type=float, help="Grubbs significance level")
    sub.add_argument("--range-thresh", type=float, help="Subject screening range threshold")
    sub.add_argument("--std-thresh", type=float, help="Subject screening standard deviation threshold")
    sub.add_argument("--output", "-o", type=Path, help="Output file (default: OUTPUT_DIR/dmos.csv)")
    sub.add_argument("--summary", action="store_true", help="Also write mean DMOS per gQP and tQP level")

    # ANOVA
    sub = add("anova", commands.cmd_anova, "Two-way ANOVA over gQP and tQP")
    sub.add_argument("input", type=Path, help="DMOS CSV, or ratings CSV with --ratings")
    sub.add_argument("--ratings", action="store_true", help="Input is a ratings CSV; use differential scores")
    sub.add_argument("--output", "-o", type=Path, help="Output file; default stdout CSV")
    sub.add_argument("--decimals", type=int, help="Decimals in the output table")

    # Content descriptors
    sub = add("content", commands.cmd_content, "Spatial information and colorfulness of source clouds")
    sub.add_argument("inputs", type=Path, nargs="+", help="Source clouds (PLY)")
    sub.add_argument("--splat-radius", type=int, help="Half-width in pixels of each projected point")
    sub.add_argument("--output", "-o", type=Path, help="Output file; default stdout CSV")

    # Benchmark
    sub = add("benchmark", commands.cmd_benchmark, "Correlate objective scores with DMOS")
    sub.add_argument("objective", type=Path, help="Objective scores CSV (sample_id,metric,value or s_final)")
    sub.add_argument("dmos", type=Path, help="DMOS CSV")
    sub.add_argument("--session", action="append", choices=["all", "human", "object"], help="Session; repeatable")
    sub.add_argument("--stem", default="report", help="Report file name stem")
    sub.add_argument("--format", action="append", choices=["csv", "json", "yaml", "xlsx"], help="Report format")
    sub.add_argument("--decimals", type=int, help="Decimals in the report")
    sub.add_argument("--max-iterations", type=int, help="Logistic fit iteration cap")

    # Batch
    sub = add("batch", commands.cmd_batch, "Metrics for every pair of a manifest CSV")
    sub.add_argument("manifest", type=Path, help="Manifest CSV: ref,dist[,sample_id,sequence,gqp,tqp]")
    _add_point_arguments(sub)
    _add_projection_arguments(sub)
    sub.add_argument("--no-point", action="store_true", help="Skip point-based metrics")
    sub.add_argument("--no-projection", action="store_true", help="Skip projection metrics")

    # Normals
    sub = add("normals", commands.cmd_normals, "Estimate PCA normals")
    sub.add_argument("input", type=Path, help="Input cloud (PLY)")
    sub.add_argument("output", type=Path, help="Output cloud with normals (PLY)")
    sub.add_argument("--k", dest="normal_k", type=int, help="Neighbours per normal")
    sub.add_argument("--ascii", action="store_true", help="Write ASCII PLY instead of binary")

    # Pooling gains
    sub = add("gains", commands.cmd_gains, "Weighted-minus-mean gains from two reports")
    sub.add_argument("mean_report", type=Path, help="Report CSV of mean pooling")
    sub.add_argument("weighted_report", type=Path, help="Report CSV of weighted pooling")
    sub.add_argument("--stem", default="gains", help="Output file name stem")
    sub.add_argument("--format", action="append", choices=["csv", "json", "yaml", "xlsx"], help="Output format")

    # Gamma sweep
    sub = add("sweep", commands.cmd_sweep, "Agreement with DMOS over a gamma grid")
    sub.add_argument("projection", type=Path, help="Projection metrics CSV with per-view scores")
    sub.add_argument("dmos", type=Path, help="DMOS CSV")
    sub.add_argument("--metric", "-m", help="Metric to sweep when the CSV holds several")
    sub.add_argument("--gammas", type=_float_list, help="Comma-separated gamma grid (default 0, 0.05, ..., 1)")
    sub.add_argument("--stem", default="sweep", help="Output file name stem")
    sub.add_argument("--format", action="append", choices=["csv", "json", "yaml", "xlsx"], help="Output format")

    # Session agreement
    sub = add("agreement", commands.cmd_agreement, "R^2 between per-setup DMOS of two sessions")
    sub.add_argument("human", type=Path, help="DMOS CSV of the human-figure session")
    sub.add_argument("objects", type=Path, help="DMOS CSV of the inanimate-object session")
    sub.add_argument("--output", "-o", type=Path, help="Output file; default stdout CSV")

    return parser


def collect_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Dotted config overrides for every flag the user actually set."""
    values = vars(args)
    overrides = {key: values.get(dest) for dest, key in OVERRIDE_FLAGS.items()}
    if values.get("verbose"):
        overrides["runtime.log_level"] = "DEBUG"
    return {key: value for key, value in overrides.items() if value is not None}


def setup_logging(level: str) -> None:
    """Send log records to stderr so CSV written to stdout stays clean."""
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 2

    try:
        settings: Settings = configure(load_config(getattr(args, "config", None), collect_overrides(args)))
        setup_logging(settings.log_level)
        return args.func(args, settings)
    except PcqaError as exc:
        logger.debug("Command failed", exc_info=True)
        print(f"pcqa {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
