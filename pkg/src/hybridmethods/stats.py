"""Pearson chi-squared testing and the survey's independence-test drivers.

The p-value machinery (regularized incomplete gamma) is implemented here
rather than pulled from a numerics library so the whole test path stays
dependency-free and auditable against tabulated quantiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .dataset import RawResponseTable
from .errors import DegenerateTableError, UnknownVariableError

_GAMMA_TOL = 1e-12
_GAMMA_MAX_ITER = 600


def _gamma_p_series(a: float, x: float) -> float:
    # Lower regularized P(a, x) by series expansion; converges fast for x < a+1.
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_GAMMA_MAX_ITER):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _GAMMA_TOL:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    # Upper regularized Q(a, x) by continued fraction (modified Lentz);
    # converges fast for x >= a+1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_TOL:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a)."""
    if a <= 0:
        raise ValueError("shape parameter must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, x)))
    return min(1.0, max(0.0, _gamma_q_contfrac(a, x)))


def chi2_sf(chi2: float, df: int) -> float:
    """Upper-tail probability of the chi-squared distribution."""
    if df < 1:
        raise ValueError("df must be >= 1")
    return regularized_gamma_q(df / 2.0, chi2 / 2.0)


class Continuity(str, Enum):
    AUTO = "auto"
    ON = "on"
    OFF = "off"


@dataclass(frozen=True)
class ContingencyTable:
    """r x c grid of non-negative counts with optional axis labels."""

    counts: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.counts) < 2 or any(len(r) != len(self.counts[0]) for r in self.counts):
            raise ValueError("counts must be a rectangular grid with >= 2 rows")
        if len(self.counts[0]) < 2:
            raise ValueError("counts must have >= 2 columns")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("counts must be non-negative")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], **kwargs) -> "ContingencyTable":
        return cls(counts=tuple(tuple(int(c) for c in row) for row in rows), **kwargs)

    @property
    def n_rows(self) -> int:
        return len(self.counts)

    @property
    def n_cols(self) -> int:
        return len(self.counts[0])

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def row_totals(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.counts)

    @property
    def col_totals(self) -> tuple[int, ...]:
        return tuple(sum(row[j] for row in self.counts) for j in range(self.n_cols))


@dataclass(frozen=True)
class TestResult:
    chi2: float
    df: int
    p: float
    corrected_alpha: float

    @property
    def significant(self) -> bool:
        return self.p <= self.corrected_alpha

    def as_dict(self) -> dict:
        return {"chi2": self.chi2, "df": self.df, "p": self.p,
                "corrected_alpha": self.corrected_alpha,
                "significant": self.significant}


def chi_squared(table: ContingencyTable,
                continuity: Continuity = Continuity.AUTO,
                alpha: float = 0.05) -> TestResult:
    """Pearson chi-squared test of independence.

    Continuity AUTO applies the Yates correction exactly for 2x2 tables.
    The corrected |O-E| - 0.5 term is clamped at zero so near-independent
    tables cannot pick up a spurious statistic from over-correction.
    """
    n = table.total
    if n == 0:
        raise DegenerateTableError("contingency table is empty (N = 0)")
    row_totals = table.row_totals
    col_totals = table.col_totals
    if any(t == 0 for t in row_totals) or any(t == 0 for t in col_totals):
        raise DegenerateTableError("all-zero row or column: expected counts undefined")

    is_2x2 = table.n_rows == 2 and table.n_cols == 2
    use_yates = continuity is Continuity.ON or (
        continuity is Continuity.AUTO and is_2x2)

    stat = 0.0
    for i, row in enumerate(table.counts):
        for j, observed in enumerate(row):
            expected = row_totals[i] * col_totals[j] / n
            diff = abs(observed - expected)
            if use_yates:
                diff = max(0.0, diff - 0.5)
            stat += diff * diff / expected
    df = (table.n_rows - 1) * (table.n_cols - 1)
    return TestResult(chi2=stat, df=df, p=chi2_sf(stat, df), corrected_alpha=alpha)


def bonferroni(alpha: float, m: int) -> float:
    """Correct a significance level for m simultaneous tests."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    if m < 1:
        raise ValueError("number of tests must be >= 1")
    return alpha / m


# --- hypothesis drivers --------------------------------------------------------

COMBINED_USE_VAR = "PU04"
COMPANY_SIZE_VAR = "D001"
SECTOR_PREFIX = "D005"


@dataclass(frozen=True)
class SectorTest:
    sector: str
    label: str
    table: ContingencyTable | None
    result: TestResult | None
    warning: str | None = None

    def as_dict(self) -> dict:
        out = {"sector": self.sector, "label": self.label}
        if self.table is not None:
            out["counts"] = [list(r) for r in self.table.counts]
        if self.result is not None:
            out.update(self.result.as_dict())
        if self.warning:
            out["warning"] = self.warning
        return out


def company_size_table(table: RawResponseTable,
                       combined_var: str = COMBINED_USE_VAR,
                       size_var: str = COMPANY_SIZE_VAR) -> ContingencyTable:
    """Cross-tabulate combined-use (rows: no/yes) against company size."""
    if not table.has_variable(combined_var):
        raise UnknownVariableError(f"variable {combined_var!r} not present")
    if not table.has_variable(size_var):
        raise UnknownVariableError(f"variable {size_var!r} not present")
    counts: dict[str, list[int]] = {}
    for row in table.rows:
        combined = table.value(row, combined_var)
        size = table.value(row, size_var)
        if not isinstance(combined, bool) or not isinstance(size, str):
            continue
        counts.setdefault(size, [0, 0])[1 if combined else 0] += 1
    categories = sorted(counts)
    if len(categories) < 2:
        raise DegenerateTableError("need at least two company-size categories")
    grid = tuple((counts[c][0], counts[c][1]) for c in categories)
    return ContingencyTable(counts=grid, row_labels=tuple(categories),
                            col_labels=("not_combined", "combined"))


def company_size_independence(table: RawResponseTable,
                              alpha: float = 0.05) -> tuple[ContingencyTable, TestResult]:
    """Independence of combined process use and company size."""
    tab = company_size_table(table)
    return tab, chi_squared(tab, Continuity.AUTO, alpha=alpha)


def sector_independence(table: RawResponseTable,
                        sectors: Sequence[tuple[str, str]] | None = None,
                        alpha: float = 0.05) -> list[SectorTest]:
    """Per-sector independence of combined process use and sector membership.

    A respondent selecting several sectors contributes to each selected
    sector's "this sector" row and to the "other sectors" row of every
    sector not selected. The significance level is Bonferroni-corrected by
    the number of sector options tested.
    """
    if sectors is None:
        sectors = [(v, table.labels.get(v, v))
                   for v in table.variables_with_prefix(SECTOR_PREFIX)]
    if not sectors:
        raise UnknownVariableError("no sector variables found")
    if not table.has_variable(COMBINED_USE_VAR):
        raise UnknownVariableError(f"variable {COMBINED_USE_VAR!r} not present")

    sector_vars = [v for v, _ in sectors]
    # Population: answered the combined-use flag and selected >= 1 sector.
    population: list[tuple[bool, set[str]]] = []
    for row in table.rows:
        combined = table.value(row, COMBINED_USE_VAR)
        if not isinstance(combined, bool):
            continue
        selected = {v for v in sector_vars if table.value(row, v) is True}
        if selected:
            population.append((combined, selected))

    corrected = bonferroni(alpha, len(sectors))
    results: list[SectorTest] = []
    for var, label in sectors:
        a = sum(1 for combined, sel in population if var in sel and not combined)
        b = sum(1 for combined, sel in population if var in sel and combined)
        c = sum(1 for combined, sel in population if var not in sel and not combined)
        d = sum(1 for combined, sel in population if var not in sel and combined)
        if a + b == 0:
            results.append(SectorTest(var, label, None, None,
                                      warning="no selections for this sector"))
            continue
        tab = ContingencyTable(
            counts=((a, b), (c, d)),
            row_labels=("this_sector", "other_sectors"),
            col_labels=("not_combined", "combined"))
        try:
            res = chi_squared(tab, Continuity.AUTO, alpha=corrected)
        except DegenerateTableError as exc:
            results.append(SectorTest(var, label, tab, None, warning=str(exc)))
            continue
        results.append(SectorTest(var, label, tab, res))
    return results
