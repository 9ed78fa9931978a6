"""Deterministic report emission: CSV tables plus a structured summary.

Outputs are byte-identical across runs of the same configuration and
seed: fixed column orders, LF line endings, sorted summary keys, and no
wall-clock content (timing goes to the console only).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

TOOL_VERSION = "1.0.0"

PASS = "pass"
FAIL = "fail"
UPPER_BOUND_ONLY = "upper-bound-only"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_DEGRADED = 4

CONVENTIONS = (
    "minors are plain determinants (no sign normalization); "
    "compatible roots zeta_{p^n}^p = zeta_{p^(n-1)}; "
    "a reported zero means valuation >= tau at working precision"
)


def fmt(value) -> str:
    """Stable cell formatting: fractions as a/b, booleans as yes/no."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return "%d/%d" % (value.numerator, value.denominator)
    return str(value)


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str = ""

    def console_line(self) -> str:
        return "check %-38s %s%s" % (
            self.name + ":",
            self.status.upper(),
            "  (%s)" % self.detail if self.detail else "",
        )


@dataclass(frozen=True)
class Table:
    name: str
    claim: str
    columns: tuple
    rows: tuple


@dataclass
class RunReport:
    command: str
    config_echo: dict
    checks: list = field(default_factory=list)
    tables: list = field(default_factory=list)
    results: dict = field(default_factory=dict)

    def add_check(self, name, status, detail=""):
        self.checks.append(CheckResult(name, status, detail))

    def add_table(self, name, claim, columns, rows):
        self.tables.append(
            Table(name, claim, tuple(columns), tuple(tuple(r) for r in rows))
        )

    def status(self) -> str:
        if any(c.status == FAIL for c in self.checks):
            return FAIL
        if any(c.status == UPPER_BOUND_ONLY for c in self.checks):
            return UPPER_BOUND_ONLY
        return PASS

    def exit_code(self) -> int:
        return {PASS: EXIT_OK, FAIL: EXIT_CHECK_FAILED, UPPER_BOUND_ONLY: EXIT_DEGRADED}[
            self.status()
        ]


def _preamble(report: RunReport, table: Table) -> list:
    cfg = report.config_echo
    return [
        "# iwalog %s" % TOOL_VERSION,
        "# command: %s" % report.command,
        "# claim: %s" % table.claim,
        "# prime: %s  g: %s  precision: %s  tau: %s  seed: %s"
        % (
            cfg.get("prime"),
            cfg.get("g"),
            cfg.get("precision"),
            cfg.get("tau"),
            cfg.get("seed"),
        ),
        "# conventions: %s" % CONVENTIONS,
    ]


def write_report(report: RunReport, out_dir: str) -> list:
    """Write one CSV per table plus summary.json; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for table in report.tables:
        path = os.path.join(out_dir, table.name + ".csv")
        lines = _preamble(report, table)
        lines.append(",".join(table.columns))
        for row in table.rows:
            lines.append(",".join(fmt(v) for v in row))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        written.append(path)
    summary = {
        "version": TOOL_VERSION,
        "command": report.command,
        "status": report.status(),
        "config": report.config_echo,
        "checks": [
            {"name": c.name, "status": c.status, "detail": c.detail}
            for c in report.checks
        ],
        "results": report.results,
        "tables": [t.name for t in report.tables],
    }
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=fmt)
        fh.write("\n")
    written.append(path)
    return written
