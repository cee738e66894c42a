#!/usr/bin/env python3
"""
Run the built-in validation suite and exit non-zero on any failure.

    python scripts/run_acceptance.py --quick
"""

import argparse
import sys
from datetime import datetime

from loguru import logger

from src.cli.validation import run_validation_suite


def main() -> int:
    parser = argparse.ArgumentParser(description="Run the storage simulator acceptance checks")
    parser.add_argument("--quick", action="store_true", help="Skip the full-ensemble cross-model run")
    parser.add_argument("--workers", type=int, default=None, help="Threads for the full simulation")
    args = parser.parse_args()

    logger.info("=" * 60)
    logger.info("Acceptance Checks")
    logger.info(f"Time: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info("=" * 60)

    results = run_validation_suite(include_simulation=not args.quick, workers=args.workers)

    logger.info("\n" + "=" * 60)
    logger.info("Summary")
    logger.info("=" * 60)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        logger.info(f"{status}  {result.name:50s} value={result.value}")

    failed = [r for r in results if not r.passed]
    if failed:
        logger.error(f"{len(failed)} of {len(results)} checks failed")
        return 1
    logger.success(f"All {len(results)} checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
