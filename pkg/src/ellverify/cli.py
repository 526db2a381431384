"""Command-line entry point: ``ellverify verify [options]``.

Exit codes: 0 every case passed, 1 some case failed, 2 usage error,
3 the report could not be written.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field, replace
from typing import Optional

from .identity_suite import DEFAULT_TAUS, SuiteConfig, VerificationReport, run_suite
from .params import DEFAULT_POLICY

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_FLOAT = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(
    rf"^\s*(?:(?P<re>[+-]?{_FLOAT})(?:(?P<sign>[+-])(?P<im>{_FLOAT})?i)?"
    rf"|(?P<only>[+-]?(?:{_FLOAT})?)i)\s*$")


def parse_complex(token: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (an omitted b means 1)."""
    m = _COMPLEX.match(token)
    if not m:
        raise ValueError(f"malformed complex literal {token!r}")
    if m.group("only") is not None:
        b = m.group("only")
        return complex(0.0, float(b + "1") if b in ("", "+", "-") else float(b))
    real = float(m.group("re"))
    if m.group("sign") is None:
        return complex(real, 0.0)
    imag = float(m.group("im") or "1")
    return complex(real, imag if m.group("sign") == "+" else -imag)


def _tau_arg(token: str) -> complex:
    try:
        tau = parse_complex(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not tau.imag > 0:
        raise argparse.ArgumentTypeError(f"tau {token!r} must have positive imaginary part")
    return tau


def _positive_float(token: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {token!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {token!r}")
    return v


def _positive_int(token: str) -> int:
    try:
        v = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"radius must be >= 1, got {token!r}")
    return v


@dataclass
class CliConfig:
    suites: list = field(default_factory=list)
    taus: list = field(default_factory=lambda: list(DEFAULT_TAUS))
    tolerance: Optional[float] = None
    radius: Optional[int] = None
    format: str = "text"
    out: Optional[str] = None

    def suite_config(self) -> SuiteConfig:
        policy = DEFAULT_POLICY if self.radius is None else replace(DEFAULT_POLICY, lattice_radius=self.radius)
        return SuiteConfig(taus=tuple(self.taus), tolerance=self.tolerance, policy=policy)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellverify", description="Numerically verify the identity catalog.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run identity cases and report relative errors")
    v.add_argument("--suite", action="append", default=[], metavar="PREFIX",
                   help="run cases whose id starts with PREFIX (repeatable; default all)")
    v.add_argument("--tau", action="append", type=_tau_arg, metavar="C",
                   help="modular parameter such as 1.2i or 0.3+1.1i (repeatable)")
    v.add_argument("--tol", type=_positive_float, metavar="R", help="override every case tolerance")
    v.add_argument("--radius", type=_positive_int, metavar="N", help="lattice truncation radius")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    return p


def parse_args(argv) -> CliConfig:
    """Parse argv (without the program name); exits with code 2 on bad input."""
    ns = _parser().parse_args(list(argv))
    return CliConfig(suites=list(ns.suite), taus=list(ns.tau) if ns.tau else list(DEFAULT_TAUS),
                     tolerance=ns.tol, radius=ns.radius, format=ns.format, out=ns.out)


# ----------------------------------------------------------------------------
# serialization


def _finite_or_none(obj):
    """Replace non-finite floats by None so the document is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_or_none(v) for v in obj]
    return obj


def report_document(report: VerificationReport) -> dict:
    cases = [{
        "id": r.case_id,
        "citation": r.citation,
        "max_rel_err": float(r.max_rel_err),
        "worst_point": {"re": float(r.worst_point.real), "im": float(r.worst_point.imag)},
        "pass": bool(r.passed),
    } for r in report.results]
    return {"suite": report.suite, "config": report.config, "cases": cases, "summary": report.summary}


def render_json(report: VerificationReport) -> str:
    doc = _finite_or_none(report_document(report))
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def render_text(report: VerificationReport) -> str:
    lines = [f"suite: {report.suite}"]
    width = max([len(r.case_id) for r in report.results] + [4])
    lines.append(f"{'id':<{width}}  {'max rel err':>11}  {'tol':>7}  result  citation")
    for r in report.results:
        flag = "pass" if r.passed else "FAIL"
        err = f"{r.max_rel_err:11.3e}" if math.isfinite(r.max_rel_err) else f"{'inf':>11}"
        cite = r.citation if len(r.citation) <= 70 else r.citation[:67] + "..."
        lines.append(f"{r.case_id:<{width}}  {err}  {r.tolerance:7.0e}  {flag:<6}  {cite}")
        if r.error:
            lines.append(f"{'':<{width}}    error: {r.error}")
    s = report.summary
    lines.append(f"{s['passed']}/{s['total']} passed")
    return "\n".join(lines) + "\n"


def emit_report(report: VerificationReport, config: CliConfig) -> int:
    text = render_json(report) if config.format == "json" else render_text(report)
    try:
        if config.out:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"ellverify: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if report.summary["failed"] == 0 else EXIT_FAIL


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except SystemExit as exc:  # argparse: --help exits 0, errors exit 2
        return int(exc.code or 0)
    report = run_suite(config.suites, config.suite_config())
    return emit_report(report, config)


if __name__ == "__main__":
    sys.exit(main())
