"""Shared fixtures: tiny catalogs, table builders and raw usage matrices."""

from __future__ import annotations

import random

import pytest

from hybridmethods.catalog import Item, ItemCatalog, ItemKind
from hybridmethods.dataset import (
    CleaningPolicy,
    Equals,
    Filter,
    RawResponseTable,
    Row,
    UsageMatrix,
)
from hybridmethods.synthetic import reference_construction_table


def make_catalog(n_methods: int = 4, n_practices: int = 6) -> ItemCatalog:
    items = [Item(f"PU09_{i:02d}", ItemKind.METHOD, f"Method {i}")
             for i in range(1, n_methods + 1)]
    items += [Item(f"PU10_{i:02d}", ItemKind.PRACTICE, f"Practice {i}")
              for i in range(1, n_practices + 1)]
    return ItemCatalog(items)


def table_from_rows(variables, rows) -> RawResponseTable:
    return RawResponseTable(
        variables=tuple(variables),
        rows=tuple(Row(f"r{i + 1}", tuple(values)) for i, values in enumerate(rows)),
    )


def matrix_from_columns(columns: dict[str, str]) -> UsageMatrix:
    """Build a UsageMatrix from per-item strings of '1' / '0' / '.' (missing)."""
    lengths = {len(p) for p in columns.values()}
    assert len(lengths) == 1, "all columns must have equal length"
    n = lengths.pop()
    used, missing = {}, {}
    for item, pattern in columns.items():
        u = m = 0
        for i, ch in enumerate(pattern):
            if ch == "1":
                u |= 1 << i
            elif ch == ".":
                m |= 1 << i
        used[item] = u
        missing[item] = m
    return UsageMatrix(row_ids=tuple(f"r{i + 1}" for i in range(n)),
                       items=tuple(columns), used=used, missing=missing)


def random_matrix(rng: random.Random, max_items: int = 12, max_rows: int = 64,
                  missing_rate: float = 0.05):
    """Random matrix plus an independent row-set view for brute-force oracles."""
    n_items = rng.randint(2, max_items)
    n_rows = rng.randint(1, max_rows)
    items = tuple(f"PU10_{i:02d}" for i in range(1, n_items + 1))
    row_sets: list[set[str]] = []
    columns = {item: [] for item in items}
    for _ in range(n_rows):
        row = set()
        for item in items:
            r = rng.random()
            if r < missing_rate:
                columns[item].append(".")
            elif r < missing_rate + rng.random() * (1 - missing_rate):
                columns[item].append("1")
                row.add(item)
            else:
                columns[item].append("0")
        row_sets.append(row)
    matrix = matrix_from_columns({i: "".join(c) for i, c in columns.items()})
    return matrix, row_sets


def brute_force_frequent(row_sets: list[set[str]], items: tuple[str, ...],
                         threshold: float, min_size: int, max_size: int):
    """Power-set enumeration oracle; returns {frozenset: count}."""
    from itertools import combinations
    n = len(row_sets)
    out = {}
    for size in range(min_size, min(max_size, len(items)) + 1):
        for combo in combinations(items, size):
            wanted = set(combo)
            count = sum(1 for row in row_sets if wanted <= row)
            if n > 0 and count / n >= threshold:
                out[frozenset(combo)] = count
    return out


@pytest.fixture(scope="session")
def reference_bundle():
    """Reference construction dataset plus its analysis configuration."""
    from hybridmethods.catalog import default_catalog
    return {
        "table": reference_construction_table(),
        "catalog": default_catalog(),
        "policy": CleaningPolicy(),
        "filter": Filter((Equals("PU04", True),)),
    }
