"""Command-line entry point for transition-element studies

    xnyfem run <config.json> [--jobs N] [--out DIR] [--exhaustive]
               [--dump-matrix] [--dump-shapes GRID] [-v]

Exit codes: 0 success, 2 configuration / mesh / file error, 3 numerical failure.
"""

import argparse
import logging
import multiprocessing
import sys
import time
from dataclasses import replace
from typing import List, Optional

import numpy as np

from storage.storage_manager import APP_VERSION, StorageManager
from utils.errors import ConfigError, MeshError, XnyfemError
from utils.logger import setup_logging
from utils.validators import validate_study_config
from verify.studies import run_study

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='xnyfem',
        description="Patch tests, convergence studies and singular benchmarks "
                    "for transition finite elements"
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {APP_VERSION}")
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help="run the study described by a JSON config")
    run.add_argument('config', help="path of the study configuration (JSON, schema 1)")
    run.add_argument('--jobs', type=int, default=None, metavar='N',
                     help="worker processes for parameter grids")
    run.add_argument('--out', default=None, metavar='DIR', help="output directory")
    run.add_argument('--exhaustive', action='store_true',
                     help="run the full patch-test grid instead of the configured one")
    run.add_argument('--dump-matrix', action='store_true',
                     help="write global stiffness matrices in Matrix Market format")
    run.add_argument('--dump-shapes', type=int, default=None, metavar='GRID',
                     help="sample shape functions / displacements on GRID x GRID points")
    run.add_argument('-v', '--verbose', action='count', default=0,
                     help="-v for progress, -vv for debug output")
    return parser


def _apply_flags(data: dict, args: argparse.Namespace) -> dict:
    """Command-line flags override the config file"""
    output = dict(data.get('output') or {})
    if args.jobs is not None:
        data['jobs'] = args.jobs
    if args.exhaustive:
        data['exhaustive'] = True
    if args.out is not None:
        output['dir'] = args.out
    if args.dump_matrix:
        output['dump_matrix'] = True
    if args.dump_shapes is not None:
        output['dump_shapes'] = args.dump_shapes
    data['output'] = output
    return data


def run_command(args: argparse.Namespace) -> int:
    storage = StorageManager()
    data = _apply_flags(storage.load_study_config(args.config), args)
    is_valid, cfg, message = validate_study_config(data)
    if not is_valid:
        raise ConfigError(message)
    if cfg.mesh_file:
        cfg = replace(cfg, mesh=storage.load_mesh_file(cfg.mesh_file))

    started = time.perf_counter()
    outcome = run_study(cfg)
    elapsed = time.perf_counter() - started
    written = storage.write_outcome(cfg.out_dir, cfg, outcome, {'study_seconds': round(elapsed, 3)})
    logger.info("%s finished in %.2f s, %d files written", cfg.kind.value, elapsed, len(written))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Application entry point

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return run_command(args)
    except (ConfigError, MeshError) as e:
        print(f"xnyfem: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"xnyfem: file error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (XnyfemError, np.linalg.LinAlgError) as e:
        print(f"xnyfem: numerical failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    multiprocessing.freeze_support()
    sys.exit(main())
