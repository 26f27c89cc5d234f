"""Deterministic synthetic survey fixtures.

The reference construction table reproduces the agreement arithmetic of the
published construction walk-through exactly: a 206-respondent adopter subset
of the (Iterative Development, Lean, Scrum) frame whose practice counts are
engineered so the top quadruple sits at 196/206, its triplets at 199, 198,
197 and 197, and the minimal quadruple after adding Backlog Management at
192/206. The whole construction contract is therefore testable without the
optional real survey export.
"""

from __future__ import annotations

import random

from .dataset import RawResponseTable, Row

REFERENCE_FRAME = ("PU09_08", "PU09_11", "PU09_19")  # Iterative Dev, Lean, Scrum
REFERENCE_QUADRUPLE = ("PU10_07", "PU10_08", "PU10_28", "PU10_29")
REFERENCE_EXTENSION = "PU10_05"  # Backlog Management
REFERENCE_SUBSET_N = 206

_CR, _CS, _REF, _RP = REFERENCE_QUADRUPLE
_BM = REFERENCE_EXTENSION
_PROTO = "PU10_26"
_AUT = "PU10_04"

_VARIABLES = (
    "PU04", "D001",
    "D005_s01", "D005_s02", "D005_s03",
    "PU09_01", "PU09_08", "PU09_11", "PU09_19",
    _AUT, _BM, _CR, _CS, _PROTO, _REF, _RP,
)

_SIZES = ("MicroAndSmall", "Medium", "Large", "VeryLarge")

# Practice-usage patterns of the 206 frame adopters: (pattern, multiplicity).
# Engineered counts: CR 205, CS 204, Ref 201, RP 201, BM 199;
# {CR,CS,Ref,RP} 196; triplets 199/198/197/197; min quadruple with BM 192.
_ADOPTER_PATTERNS = (
    ({_CR, _CS, _REF, _RP, _BM}, 192),
    ({_CR, _CS, _REF, _RP}, 4),
    ({_CR, _CS, _REF, _BM}, 3),
    ({_CR, _CS, _RP, _BM}, 2),
    ({_CS, _REF, _RP, _BM}, 1),
    ({_CR, _REF, _RP}, 1),
    ({_CR, _CS}, 2),
    ({_CR, _RP, _BM}, 1),
)


def reference_construction_table() -> RawResponseTable:
    """262-row synthetic survey embedding the reference construction subset.

    206 rows adopt the full frame with PU04 = yes; 40 rows use Scrum only;
    14 rows use Iterative Development only with PU04 = no; 2 rows carry no
    practice answers at all (excluded from practice projections).
    """
    rows: list[Row] = []

    def likert(used: bool) -> int:
        return 3 if used else 0

    def add_row(pu04, methods: set, practices: dict):
        rid = f"R{len(rows) + 1:04d}"
        values = []
        for var in _VARIABLES:
            if var == "PU04":
                values.append(pu04)
            elif var == "D001":
                values.append(_SIZES[len(rows) % len(_SIZES)])
            elif var.startswith("D005"):
                values.append(int(var[-1]) == (len(rows) % 3) + 1)
            elif var.startswith("PU09"):
                values.append(var in methods)
            else:
                values.append(practices.get(var, 0))
        rows.append(Row(rid, tuple(values)))

    frame = set(REFERENCE_FRAME)
    adopter_index = 0
    for pattern, multiplicity in _ADOPTER_PATTERNS:
        for _ in range(multiplicity):
            practices = {p: likert(p in pattern)
                         for p in (_AUT, _BM, _CR, _CS, _PROTO, _REF, _RP)}
            # sub-threshold noise practices with fixed prevalence
            practices[_PROTO] = likert(adopter_index < 120)
            practices[_AUT] = likert(adopter_index < 100)
            add_row(True, frame, practices)
            adopter_index += 1

    for i in range(40):
        practices = {_CR: likert(True), _CS: likert(True), _BM: likert(i < 10),
                     _REF: 0, _RP: 0, _PROTO: 0, _AUT: 0}
        add_row(True, {"PU09_19"}, practices)
    for i in range(14):
        practices = {_CR: likert(True), _CS: 0, _BM: 0,
                     _REF: 0, _RP: None, _PROTO: 0, _AUT: 0}
        add_row(False, {"PU09_08"}, practices)
    for _ in range(2):
        practices = {p: None for p in (_AUT, _BM, _CR, _CS, _PROTO, _REF, _RP)}
        add_row(True, {"PU09_01"}, practices)

    return RawResponseTable(variables=_VARIABLES, rows=tuple(rows),
                            labels={"D005_s01": "Sector One",
                                    "D005_s02": "Sector Two",
                                    "D005_s03": "Sector Three"})


def random_survey(seed: int = 0, n_rows: int = 300,
                  method_ids: tuple[str, ...] = tuple(f"PU09_{i:02d}" for i in range(1, 9)),
                  practice_ids: tuple[str, ...] = tuple(f"PU10_{i:02d}" for i in range(1, 13)),
                  practice_popularity: dict[str, float] | None = None,
                  na_rate: float = 0.03,
                  combined_rate: float = 0.7) -> RawResponseTable:
    """Random survey table with a shared per-row affinity latent.

    The latent couples the practice columns, producing the deep, heavily
    overlapping co-usage structure the mining layers have to prune through.
    """
    rng = random.Random(seed)
    if practice_popularity is None:
        practice_popularity = {p: rng.uniform(0.1, 0.95) for p in practice_ids}
    method_popularity = {m: rng.uniform(0.2, 0.8) for m in method_ids}

    variables = ("PU04", "D001", *method_ids, *practice_ids)
    rows = []
    for i in range(n_rows):
        values: list = [rng.random() < combined_rate,
                        _SIZES[rng.randrange(len(_SIZES))]]
        for m in method_ids:
            values.append(None if rng.random() < na_rate
                          else rng.random() < method_popularity[m])
        affinity = rng.random()
        for p in practice_ids:
            if rng.random() < na_rate:
                values.append(None)
                continue
            used = affinity <= practice_popularity[p]
            if rng.random() < 0.03:
                used = not used
            values.append(rng.choice([1, 2, 3, 4]) if used else 0)
        rows.append(Row(f"R{i + 1:04d}", tuple(values)))
    return RawResponseTable(variables=variables, rows=tuple(rows))
