"""
cohomforge command-line front end

This module wires parsed jobs to the computations: cohomology tables, the
comparison maps, E1 pages and the selfcheck suite (also run as
papercheck). Reports go to stdout (or --out); diagnostics and logs go to stderr.

Exit codes: 0 success, 1 selfcheck failure, 2 parse or usage error,
3 size guard.
"""

import asyncio
import dataclasses
import logging
import os
import sys
from typing import List, Optional, Tuple

from cochain_complexes import build_complex
from cohomology_tables import ComparisonBuilder, cohomology
from job_schema import JobSpec, SpecParseError, parse_group_spec, parse_job, parse_module_spec
from report_renderer import render
from selfcheck import run_selfcheck
from settings import Settings, SizeGuardError, configure_logging, get_settings
from spectral_sequence import E1PageBuilder

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SELFCHECK_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_SIZE_GUARD = 3


def _job_settings(job: JobSpec, settings: Settings) -> Settings:
    overrides = {}
    if job.max_basis is not None:
        overrides["max_basis"] = job.max_basis
    if job.threads is not None:
        overrides["threads"] = job.threads
    return dataclasses.replace(settings, **overrides) if overrides else settings


def _table_report(job: JobSpec, settings: Settings) -> str:
    group = parse_group_spec(job.group)
    module = parse_module_spec(job.module, group)
    try:
        complex_ = build_complex(job.theory, group, module, job.max_degree, route=job.route, settings=settings)
    except SizeGuardError:
        raise
    except ValueError as e:
        raise SpecParseError(str(e))
    return render("table", cohomology(complex_, theory=job.theory), job.output_format)


def _comparison_report(job: JobSpec, settings: Settings) -> str:
    group = parse_group_spec(job.group)
    module = parse_module_spec(job.module, group)
    result = ComparisonBuilder(group, module, job.max_degree, settings).compare()
    return render("comparison", result, job.output_format)


async def run_job(job: JobSpec, settings: Settings) -> Tuple[str, int]:
    """
    Execute one job

    Returns:
        (rendered report, exit code)

    Raises:
        SpecParseError: If the group or module spec is invalid
        SizeGuardError: If a construction exceeds the configured limits
    """
    if job.command == "cohomology":
        return await asyncio.to_thread(_table_report, job, settings), EXIT_OK
    if job.command == "compare":
        return await asyncio.to_thread(_comparison_report, job, settings), EXIT_OK
    if job.command == "e1":
        group = parse_group_spec(job.group)
        module = parse_module_spec(job.module, group)
        page = await E1PageBuilder(group, module, settings).build_async(job.pmax, job.qmax, settings.threads)
        return render("e1", page, job.output_format), EXIT_OK

    # selfcheck and papercheck run the same claims
    ledger = await run_selfcheck(settings.threads, settings)
    print(ledger.get_summary_line(), file=sys.stderr)
    code = EXIT_OK if ledger.all_passed else EXIT_SELFCHECK_FAILED
    return render("manifest", ledger.get_total_summary(), job.output_format), code


def _write(report: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(report)
        sys.stdout.flush()
        return
    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        f.write(report)
    print(f"✅ Report written to {out}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the job and return the exit code."""
    try:
        job = parse_job(argv)
        settings = _job_settings(job, get_settings())
    except (SpecParseError, ValueError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    configure_logging(settings)
    logger.info(f"Running {' '.join(job.to_argv())}")

    try:
        report, code = asyncio.run(run_job(job, settings))
    except SpecParseError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except SizeGuardError as e:
        print(f"❌ Size guard: {e}", file=sys.stderr)
        return EXIT_SIZE_GUARD

    _write(report, job.out)
    return code


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logging.info("Stopped by user")
        sys.exit(130)
