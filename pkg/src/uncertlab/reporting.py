"""Bound checks, report containers, and deterministic writers.

Every inequality the package verifies carries a stable tag from the
registry below; reports, CSV files, and the command-line tool refer to
bounds only through these tags, and the README documents what each one
asserts.  Floats are serialized with repr (shortest round-trip form), so
a fixed scenario and seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field

from .errors import ParameterError
from .fileio import atomic_write_text

#: registry of bound tags: every check carries one of these
TAGS: dict[str, str] = {
    "prep.stddev-product": "spread product Delta(Q)*Delta(P) >= hbar/2",
    "prep.width-product": "overall-width product >= 2*pi*hbar*(1-eps1-eps2)**2",
    "prep.width-product-sharp": "overall-width product >= sharpened localization floor",
    "lp.probsum": "prob(Q in X) + prob(P in Y) <= 1 + sqrt(a0)",
    "lp.area-floor": "admissible area >= 2*pi*hbar*(1-eps1-eps2)**2",
    "periodic.commute": "commutator norm vanishes when 2*pi*hbar/(a*b) is a positive integer",
    "cov.noise-product": "intrinsic noise product Var(mu)*Var(nu) >= hbar**2/4",
    "cov.spread-product": "smeared spread product >= hbar",
    "cov.resolution-product": "resolution width product >= 2*pi*hbar*(1-eps1-eps2)**2",
    "cov.stderr-product": "standard error product >= hbar/2",
    "cov.distance-product": "distance product >= 0.3047*hbar",
    "cov.errorbar-floor-product": "error-bar floor product >= 2*pi*hbar*(1-eps1-eps2)**2",
    "cov.errorbar-product": "calibrated error-bar product >= 2*pi*hbar*(1-eps1-eps2)**2",
    "joint.noise-product": "sequential noise product Var(mu)*Var(nu) >= hbar**2/4",
    "joint.resolution-product": "sequential resolution width product >= localization floor",
    "joint.stderr-product": "sequential standard error product >= hbar/2",
    "joint.distance-product": "sequential distance product >= 0.3047*hbar",
    "joint.errorbar-product": "sequential calibrated error-bar product >= localization floor",
    "ak.noise-quality": "two-probe intrinsic quality term >= hbar**2/8",
    "ak.disturbance": "two-probe disturbance term >= hbar**2/8",
    "ak.disturbance-x": "disturbance >= (hbar**2/16)*(x + 1/x) at coupling ratio x",
    "ak.spread-product": "two-probe readout spread product >= hbar/2",
    "ak.gamma-neg1-product": "retrodictive readout product >= hbar**2/4 at gamma = -1",
    "werner.bracket": "distance-constant estimate inside [0.29, 1/pi]",
}


@dataclass(frozen=True)
class BoundCheck:
    """One verified inequality: lhs >= rhs (or <= for ceiling tags)."""

    tag: str
    lhs: float
    rhs: float
    passed: bool
    margin: float

    def __post_init__(self) -> None:
        if self.tag not in TAGS:
            raise ParameterError(f"unknown bound tag {self.tag!r}")
        # plain builtins so reports serialize to JSON unchanged
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "margin", float(self.margin))


def floor_check(tag: str, lhs: float, rhs: float, rel_tol: float = 1e-9) -> BoundCheck:
    """Check lhs >= rhs with a relative slack for round-off."""
    margin = lhs - rhs
    return BoundCheck(
        tag=tag, lhs=lhs, rhs=rhs, passed=margin >= -rel_tol * max(abs(rhs), 1.0),
        margin=margin,
    )


def ceiling_check(tag: str, lhs: float, rhs: float, rel_tol: float = 1e-9) -> BoundCheck:
    """Check lhs <= rhs with a relative slack for round-off."""
    margin = rhs - lhs
    return BoundCheck(
        tag=tag, lhs=lhs, rhs=rhs, passed=margin >= -rel_tol * max(abs(rhs), 1.0),
        margin=margin,
    )


@dataclass(frozen=True)
class Report:
    """Flat result bundle a scenario run produces."""

    name: str
    params: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)
    checks: tuple[BoundCheck, ...] = ()
    notes: dict = field(default_factory=dict)

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def report_to_dict(report: Report) -> dict:
    return {
        "name": report.name,
        "params": report.params,
        "quantities": report.quantities,
        "checks": [
            {
                "tag": c.tag,
                "lhs": c.lhs,
                "rhs": c.rhs,
                "passed": c.passed,
                "margin": c.margin,
            }
            for c in report.checks
        ],
        "notes": report.notes,
        "all_passed": report.all_passed(),
    }


def write_report_json(path: str | os.PathLike, report: Report) -> None:
    text = json.dumps(report_to_dict(report), indent=2, sort_keys=True)
    atomic_write_text(path, text + "\n")


def write_checks_csv(path: str | os.PathLike, checks: list[BoundCheck]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["tag", "lhs", "rhs", "passed", "margin"])
    for c in checks:
        writer.writerow([c.tag, repr(c.lhs), repr(c.rhs), int(c.passed), repr(c.margin)])
    atomic_write_text(path, buf.getvalue())


def write_series_csv(
    path: str | os.PathLike, headers: list[str], rows: list[tuple]
) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(headers)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    atomic_write_text(path, buf.getvalue())


def write_plotdata(
    path: str | os.PathLike,
    headers: list[str],
    blocks: list[list[tuple]],
    comments: list[str] | None = None,
) -> None:
    """Whitespace-separated columns with comment headers; blocks separated
    by blank lines so 2-D grids plot directly."""
    lines = []
    for c in comments or []:
        lines.append(f"# {c}")
    lines.append("# " + " ".join(headers))
    for bi, block in enumerate(blocks):
        if bi:
            lines.append("")
        for row in block:
            lines.append(" ".join(repr(float(v)) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")
