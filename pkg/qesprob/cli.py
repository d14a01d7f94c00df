import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from .exceptions import QesprobError
from .models.base import EnsembleName, FieldTag, OutputFormat, Party, WeightSchemeName
from .models.ensembles import EnsembleKind
from .models.estimator import DEFAULT_BATCH_SIZE
from .models.run_config import RunConfig
from .models.weights import WeightScheme
from .services.runner import output_paths, run_estimate, summary_payload
from .services.selftest import run_selftest

# Load environment variables
load_dotenv()

logger = logging.getLogger("qesprob")

ENSEMBLES = {"hs": EnsembleName.HILBERT_SCHMIDT, "bures": EnsembleName.BURES}
WEIGHTS = {name.value.replace("_", "-"): name for name in WeightSchemeName}

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qesprob",
        description="Monte Carlo separability probabilities from HS and Bures two-qubit ensembles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run a weighted separability estimate")
    est.add_argument("--ensemble", choices=sorted(ENSEMBLES), default="hs")
    est.add_argument("--field", choices=[f.value for f in FieldTag], default=FieldTag.COMPLEX.value)
    est.add_argument("--weight", choices=list(WEIGHTS), default="none")
    est.add_argument("--party", choices=[p.value for p in Party], default=Party.ALICE.value,
                     help="whose steering ellipsoid volume the QES weights use")
    est.add_argument("--samples", type=int, required=True)
    est.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--threads", type=int, default=None,
                     help="worker threads (falls back to QESPROB_THREADS, then the CPU count)")
    est.add_argument("--weight-cap", type=float, default=None)
    est.add_argument("--out", default="qesprob_run", help="output path prefix")
    est.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.BOTH.value)

    sub.add_parser("selftest", help="run the closed-form and invariant checks")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    threads = args.threads if args.threads is not None else os.getenv("QESPROB_THREADS") or os.cpu_count() or 1
    return RunConfig(
        ensemble=EnsembleKind(kind=ENSEMBLES[args.ensemble], field=FieldTag(args.field)),
        weight=WeightScheme(scheme=WEIGHTS[args.weight]),
        party=Party(args.party),
        samples=args.samples,
        batch_size=args.batch_size,
        master_seed=args.seed,
        threads=threads,
        weight_cap=args.weight_cap,
        output_format=OutputFormat(args.format),
        output_path=args.out,
        block_size=os.getenv("QESPROB_BLOCK_SIZE", 25_000),
        validate_states=os.getenv("QESPROB_VALIDATE", "sampled"),
    )


def _validation_message(e: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
    )


def cmd_estimate(args: argparse.Namespace) -> int:
    try:
        cfg = config_from_args(args)
    except ValidationError as e:
        print(f"qesprob: invalid configuration: {_validation_message(e)}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    try:
        summary = run_estimate(cfg)
    except OSError as e:
        print(f"qesprob: cannot write output: {e}", file=sys.stderr)
        return EXIT_IO
    except QesprobError as e:
        logger.error(f"❌ Estimation failed: {e}")
        return EXIT_FAILED

    print(json.dumps(summary_payload(cfg, summary), indent=2))
    json_path, csv_path = output_paths(cfg)
    for path in (json_path, csv_path):
        if path:
            logger.info(f"Wrote {path}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    tester = run_selftest()
    if not tester.failed:
        print("All checks passed")
        return EXIT_OK
    print(f"Failed checks: {', '.join(tester.failed)}", file=sys.stderr)
    return EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    level = os.getenv("QESPROB_LOG_LEVEL", "INFO").upper()
    if not isinstance(logging.getLevelName(level), int):
        print(f"qesprob: invalid configuration: QESPROB_LOG_LEVEL={level!r} is not a log level", file=sys.stderr)
        return EXIT_BAD_CONFIG
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    if args.command == "estimate":
        return cmd_estimate(args)
    return cmd_selftest(args)
