"""
Cross-scheme comparison engine: runs the renormalization schemes on one
configuration or a parameter sweep, checks that they agree and renders
the results as JSON, CSV or a plain table.
"""
import csv
import io
import json
import logging
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .acont import phase_shift_ac
from .config import AppConfig
from .dimreg import PhaseShiftResult, ScatteringConfig, Scheme, phase_shift_dimreg
from .errors import (
    InvalidScatteringConfig,
    PotentialSpecError,
    RenormalizationError,
    SweepConfigError,
)
from .minsub import phase_shift_minsub
from .potential import PowerLawPotential, lj12, lj_general, make_power_law

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["k", "l", "n", "scheme", "delta", "error_estimate", "status"]
OUTPUT_FORMATS = ("json", "csv", "table")

_TERM_PATTERN = re.compile(r"^\s*([^/]+?)\s*/\s*r\s*\^\s*([+-]?\d+)\s*$")


def parse_potential_spec(text: str) -> PowerLawPotential:
    """
    Parse `lj12:eta,alpha,beta`, `ljgen:eta,alpha,beta,m` or
    `terms:c1/r^m1,c2/r^m2,...`.
    """
    if not isinstance(text, str) or ":" not in text:
        raise PotentialSpecError(f"Potential spec must look like 'kind:args', got {text!r}")
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    parts = [p.strip() for p in body.split(",")] if body.strip() else []

    def numbers(count: int) -> List[float]:
        if len(parts) != count:
            raise PotentialSpecError(f"'{kind}' expects {count} values, got {len(parts)} in {text!r}")
        try:
            return [float(p) for p in parts]
        except ValueError as e:
            raise PotentialSpecError(f"Non-numeric value in {text!r}: {e}")

    if kind == "lj12":
        eta, alpha, beta = numbers(3)
        return lj12(eta, alpha, beta)
    if kind == "ljgen":
        eta, alpha, beta, m = numbers(4)
        return lj_general(eta, alpha, beta, m)
    if kind == "terms":
        terms = []
        for part in parts:
            match = _TERM_PATTERN.match(part)
            if not match:
                raise PotentialSpecError(f"Term {part!r} is not of the form c/r^m")
            try:
                coefficient = float(match.group(1))
            except ValueError:
                raise PotentialSpecError(f"Coefficient {match.group(1)!r} is not a number")
            terms.append((coefficient, int(match.group(2))))
        return make_power_law(terms)
    raise PotentialSpecError(f"Unknown potential kind '{kind}' (expected lj12, ljgen or terms)")


@dataclass
class ComparisonReport:
    """Per-scheme results for one configuration and the agreement verdict."""
    config: ScatteringConfig
    potential: PowerLawPotential
    results: Dict[Scheme, PhaseShiftResult] = field(default_factory=dict)
    failures: Dict[Scheme, Tuple[str, str]] = field(default_factory=dict)
    schemes: List[Scheme] = field(default_factory=list)
    max_pairwise_discrepancy: float = 0.0
    agreement: bool = True
    tolerance_used: float = 1e-4

    def recompute_agreement(self) -> bool:
        return max_discrepancy(self.results.values()) <= self.tolerance_used

    @property
    def has_failures(self) -> bool:
        return bool(self.failures)

    def status(self, scheme: Scheme) -> str:
        if scheme in self.failures:
            return self.failures[scheme][0]
        return "ok"


def scaled_discrepancy(a: float, b: float) -> float:
    """|a - b| relative to max(1, |a|, |b|)."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


def max_discrepancy(results: Iterable[PhaseShiftResult]) -> float:
    values = [r.value for r in results]
    return max((scaled_discrepancy(a, b) for a, b in combinations(values, 2)), default=0.0)


def _run_scheme(
    scheme: Scheme,
    V: PowerLawPotential,
    cfg: ScatteringConfig,
    settings: AppConfig,
    eps: Optional[float],
    eps_grid: Optional[Sequence[float]],
) -> PhaseShiftResult:
    if scheme is Scheme.DIMREG:
        return phase_shift_dimreg(V, cfg, settings=settings)
    if scheme is Scheme.ACONT:
        return phase_shift_ac(V, cfg, eps=eps, settings=settings)
    return phase_shift_minsub(V, cfg, eps_grid=eps_grid, settings=settings)


def compare_schemes(
    V: PowerLawPotential,
    cfg: ScatteringConfig,
    schemes: Iterable[Scheme],
    tol: Optional[float] = None,
    settings: Optional[AppConfig] = None,
    eps: Optional[float] = None,
    eps_grid: Optional[Sequence[float]] = None,
) -> ComparisonReport:
    """
    Run every requested scheme and compare the values pairwise.

    Scheme errors (including arithmetic overflow and invalid arguments) are
    recorded in the report, never raised; disagreement only clears the
    agreement flag.
    """
    settings = settings or AppConfig()
    tol = settings.harness.tol if tol is None else float(tol)
    requested = [s for s in Scheme if s in set(schemes)]
    if not requested:
        raise InvalidScatteringConfig("At least one scheme must be requested")

    report = ComparisonReport(config=cfg, potential=V, schemes=requested, tolerance_used=tol)
    for scheme in requested:
        try:
            report.results[scheme] = _run_scheme(scheme, V, cfg, settings, eps, eps_grid)
        except (RenormalizationError, ArithmeticError, ValueError) as e:
            logger.warning(f"{scheme.value} failed at k={cfg.k:g} l={cfg.l} n={cfg.n:g}: {e}")
            report.failures[scheme] = (type(e).__name__, str(e))

    report.max_pairwise_discrepancy = max_discrepancy(report.results.values())
    report.agreement = report.max_pairwise_discrepancy <= tol
    logger.info(
        f"compare: k={cfg.k:g} l={cfg.l} schemes={[s.value for s in requested]} "
        f"discrepancy={report.max_pairwise_discrepancy:.3e} agreement={report.agreement}"
    )
    return report


@dataclass
class SweepSpec:
    """Grid of potentials x wave numbers evaluated with the same schemes."""
    potentials: List[str] = field(default_factory=list)
    k_values: List[float] = field(default_factory=list)
    l: int = 0
    n: float = 3.0
    schemes: List[Scheme] = field(default_factory=lambda: list(Scheme))
    tol: Optional[float] = None
    eps: Optional[float] = None
    eps_grid: Optional[List[float]] = None
    output: Optional[Path] = None
    format: str = "csv"

    def grid(self) -> List[Tuple[str, float]]:
        """Grid points in lexicographic (potential, k) order."""
        return [(p, k) for p in self.potentials for k in self.k_values]


def _parse_float_list(value: Any, key: str) -> List[float]:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [v for v in str(value).split(",") if v.strip()]
    try:
        return [float(v) for v in items]
    except ValueError as e:
        raise SweepConfigError(f"'{key}' must be a list of numbers: {e}")


def parse_k_grid(value: Any) -> List[float]:
    """`start:stop:count` (inclusive linear grid) or a comma-separated list."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        values = [float(value)]
    elif isinstance(value, str) and ":" in value:
        pieces = value.split(":")
        if len(pieces) != 3:
            raise SweepConfigError(f"k range must be start:stop:count, got {value!r}")
        try:
            start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        except ValueError as e:
            raise SweepConfigError(f"Bad k range {value!r}: {e}")
        if count < 0:
            raise SweepConfigError(f"k range count must be >= 0, got {count}")
        values = [float(v) for v in np.linspace(start, stop, count)]
    else:
        values = _parse_float_list(value, "k")
    if any(not (math.isfinite(v) and v > 0.0) for v in values):
        raise SweepConfigError(f"Wave numbers must be positive: {values}")
    return values


def _parse_schemes(value: Any) -> List[Scheme]:
    items = value if isinstance(value, (list, tuple)) else str(value).split(",")
    names = [str(v).strip().lower() for v in items if str(v).strip()]
    if not names or names == ["all"]:
        return list(Scheme)
    try:
        return [Scheme.parse(name) for name in names]
    except InvalidScatteringConfig as e:
        raise SweepConfigError(str(e))


def sweep_spec_from_dict(data: Dict[str, Any]) -> SweepSpec:
    """Build a SweepSpec from parsed key/value pairs."""
    known = {"potential", "k", "l", "n", "schemes", "tol", "eps", "eps_grid", "output", "format"}
    unknown = set(data) - known
    if unknown:
        raise SweepConfigError(f"Unknown sweep keys: {sorted(unknown)}")
    if "potential" not in data or "k" not in data:
        raise SweepConfigError("Sweep config needs 'potential' and 'k'")

    raw = data["potential"]
    potentials = list(raw) if isinstance(raw, (list, tuple)) else [
        p.strip() for p in str(raw).split(";") if p.strip()
    ]
    for spec in potentials:
        try:
            parse_potential_spec(spec)
        except ValueError as e:
            raise SweepConfigError(f"Bad potential {spec!r}: {e}")

    fmt = str(data.get("format", "csv")).strip().lower()
    if fmt not in OUTPUT_FORMATS:
        raise SweepConfigError(f"Unknown output format '{fmt}'")

    try:
        l = int(data.get("l", 0))
        n = float(data.get("n", 3.0))
        tol = float(data["tol"]) if "tol" in data else None
        eps = float(data["eps"]) if "eps" in data else None
    except (TypeError, ValueError) as e:
        raise SweepConfigError(f"Bad numeric sweep value: {e}")
    if l < 0:
        raise SweepConfigError(f"'l' must be non-negative, got {l}")

    return SweepSpec(
        potentials=potentials,
        k_values=parse_k_grid(data["k"]),
        l=l,
        n=n,
        schemes=_parse_schemes(data.get("schemes", "all")),
        tol=tol,
        eps=eps,
        eps_grid=_parse_float_list(data["eps_grid"], "eps_grid") if "eps_grid" in data else None,
        output=Path(str(data["output"])) if data.get("output") else None,
        format=fmt,
    )


def parse_sweep_config(path: Path) -> SweepSpec:
    """
    Read a sweep file: plain `key = value` lines (`#` starts a comment), or
    a YAML mapping when the file ends in .yaml/.yml.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SweepConfigError(f"Cannot read sweep config {path}: {e}")

    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise SweepConfigError(f"Cannot parse {path}: {e}")
        if not isinstance(data, dict):
            raise SweepConfigError(f"{path} must contain a mapping")
        return sweep_spec_from_dict(data)

    data: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SweepConfigError(f"{path}:{number}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        data[key.strip().lower()] = value.strip()
    return sweep_spec_from_dict(data)


def run_sweep(spec: SweepSpec, settings: Optional[AppConfig] = None) -> List[ComparisonReport]:
    """One ComparisonReport per grid point, in grid order."""
    settings = settings or AppConfig()
    points = spec.grid()
    if not points:
        return []

    potentials = {text: parse_potential_spec(text) for text in spec.potentials}
    reports: List[Optional[ComparisonReport]] = [None] * len(points)

    def evaluate(index: int) -> ComparisonReport:
        text, k = points[index]
        cfg = ScatteringConfig(k=k, l=spec.l, n=spec.n)
        return compare_schemes(
            potentials[text], cfg, spec.schemes,
            tol=spec.tol, settings=settings, eps=spec.eps, eps_grid=spec.eps_grid,
        )

    with ThreadPoolExecutor(max_workers=settings.harness.clamped_workers) as executor:
        futures = {executor.submit(evaluate, i): i for i in range(len(points))}
        for future in as_completed(futures):
            index = futures[future]
            reports[index] = future.result()
            logger.info(f"Sweep point {index + 1}/{len(points)} done")
    return reports


def report_records(reports: Iterable[ComparisonReport]) -> List[Dict[str, Any]]:
    """Flatten reports into one record per (grid point, scheme)."""
    records = []
    for report in reports:
        cfg = report.config
        for scheme in report.schemes:
            result = report.results.get(scheme)
            if result is not None:
                delta = result.value
                error_estimate = result.error_estimate
                diagnostics = result.diagnostics
            else:
                delta = None
                error_estimate = None
                diagnostics = {"message": report.failures[scheme][1]}
            records.append({
                "scheme": scheme.value,
                "k": cfg.k,
                "l": cfg.l,
                "n": cfg.n,
                "delta": delta,
                "error_estimate": error_estimate,
                "diagnostics": diagnostics,
                "status": report.status(scheme),
            })
    return records


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_records(records: List[Dict[str, Any]], fmt: str) -> str:
    """Render records as json, csv or an aligned table."""
    fmt = fmt.lower()
    if fmt == "json":
        return json.dumps(records, indent=2)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow([_cell(record[c]) for c in CSV_COLUMNS])
        return buffer.getvalue()
    if fmt == "table":
        rows = [CSV_COLUMNS] + [
            [f"{r[c]:.12g}" if isinstance(r[c], float) else _cell(r[c]) for c in CSV_COLUMNS]
            for r in records
        ]
        widths = [max(len(row[i]) for row in rows) for i in range(len(CSV_COLUMNS))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"Unknown output format '{fmt}'")


def write_reports(
    reports: List[ComparisonReport],
    fmt: str,
    output: Optional[Path] = None,
) -> None:
    """Write formatted records to output, or stdout when no path is given."""
    text = format_records(report_records(reports), fmt)
    if output is None:
        sys.stdout.write(text)
        if fmt == "json":
            sys.stdout.write("\n")
        return
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text if fmt != "json" else text + "\n")
    logger.info(f"Wrote {len(reports)} report(s) to {output}")
