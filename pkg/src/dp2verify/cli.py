"""Command line entry point: ``dp2verify verify|verify-all|cache|profile``.

Exit status: 0 when everything requested is verified, 1 when something is
refuted, inconclusive or errored, 2 for usage/configuration problems.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from . import groups as grp
from .local_search import PARITY_CLASSES, residue_profile
from .models import dp64_form
from .report import CLAIMS, DEFAULT_PRIMES, ConfigError, Report, RunConfig, dumps, run_all

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _primes(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--precision", type=int, default=64, help="2-adic working precision in bits (>= 8)")
    p.add_argument("--primes", type=_primes, default=DEFAULT_PRIMES, help="comma-separated primes for the smoothness scan")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the residue search")
    p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    p.add_argument("--cache-dir", type=Path, default=None, help=f"group cache directory (env {grp.CACHE_ENV})")
    p.add_argument("--no-timing", action="store_true", help="omit timing fields from the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dp2verify", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify one claim")
    v.add_argument("claim", help="one of: " + ", ".join(CLAIMS))
    _common(v)

    va = sub.add_parser("verify-all", help="verify every claim in dependency order")
    _common(va)

    c = sub.add_parser("cache", help="manage the Sp6(2) enumeration cache")
    c.add_argument("action", choices=("build", "clear"))
    c.add_argument("--cache-dir", type=Path, default=None)

    pr = sub.add_parser("profile", help="diagnostics")
    pr.add_argument("what", choices=("mod-residues",))
    pr.add_argument("--modulus", type=int, default=8)
    pr.add_argument("--out", type=Path, default=None)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n")


def _config(args, claims) -> RunConfig:
    return RunConfig(
        claims=claims,
        precision=args.precision,
        primes=args.primes,
        cache_dir=args.cache_dir,
        jobs=args.jobs,
        out=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    try:
        if args.command in ("verify", "verify-all"):
            if args.command == "verify" and args.claim not in CLAIMS:
                sys.stderr.write(f"unknown claim {args.claim!r}; known: {', '.join(CLAIMS)}\n")
                return EXIT_USAGE
            claims = (args.claim,) if args.command == "verify" else CLAIMS
            report: Report = run_all(_config(args, claims))
            _emit(report.to_json(timing=not args.no_timing), args.out)
            for cert in report.certificates:
                sys.stderr.write(f"{cert.claim_id:26s} {cert.verdict}\n")
            return report.exit_code

        if args.command == "cache":
            if args.action == "clear":
                removed = grp.clear_cache(args.cache_dir)
                sys.stderr.write(("removed " if removed else "no cache at ") + str(grp.cache_path(args.cache_dir)) + "\n")
                return EXIT_OK
            group, hit = grp.sp6_group(args.cache_dir)
            sys.stderr.write(f"Sp6(2): {group.order} elements ({'cached' if hit else 'built'}) at {grp.cache_path(args.cache_dir)}\n")
            return EXIT_OK if group.order == grp.SP6_ORDER else EXIT_FAILED

        if args.command == "profile":
            prof = residue_profile(dp64_form(), args.modulus, PARITY_CLASSES)
            doc = {
                "form": dp64_form().to_text(),
                "modulus": args.modulus,
                "classes": {k: {str(r): n for r, n in sorted(v.items())} for k, v in prof.items()},
            }
            _emit(dumps(doc), args.out)
            return EXIT_OK
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
