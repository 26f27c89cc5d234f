"""Survey table ingestion, cleaning rules and boolean usage projections.

The pipeline is: raw CSV export + JSON mapping descriptor -> RawResponseTable
(decoded cells) -> clean() -> canonical table -> project() -> UsageMatrix,
the tri-state substrate every counting operation runs on.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .catalog import ItemCatalog, ItemKind, kind_for_id
from .errors import (
    ConfigurationError,
    IngestionError,
    ParseError,
    UnknownItemError,
    UnknownVariableError,
)


class _SkippedType:
    """Sentinel for a skipped mandatory answer (the export's -9 marker)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SKIPPED"


SKIPPED = _SkippedType()

# A decoded cell: True/False answer, Likert level, category code, NA (None)
# or the skipped marker.
Cell = bool | int | str | None | _SkippedType

_NA_TOKENS = {"", "na", "n/a", "none", "null"}
_SKIP_TOKENS = {"-9"}
_TRUE_TOKENS = {"1", "y", "yes", "true", "checked"}
_FALSE_TOKENS = {"0", "n", "no", "false", "unchecked"}


@dataclass(frozen=True)
class VariableSpec:
    """How one CSV column decodes into one survey variable."""

    id: str
    column: str
    type: str  # "yesno" | "likert" | "category"
    label: str = ""
    categories: Mapping[str, str] = field(default_factory=dict)
    tokens: Mapping[str, Cell] = field(default_factory=dict)

    def decode(self, token: str) -> tuple[Cell, str | None]:
        """Decode one raw token; returns (cell, warning-or-None)."""
        raw = token.strip()
        if raw in self.tokens:
            return self.tokens[raw], None
        low = raw.lower()
        if low in _NA_TOKENS:
            return None, None
        if raw in _SKIP_TOKENS:
            return SKIPPED, None
        if self.type == "yesno":
            if low in _TRUE_TOKENS:
                return True, None
            if low in _FALSE_TOKENS:
                return False, None
        elif self.type == "likert":
            try:
                return int(raw), None
            except ValueError:
                pass
        elif self.type == "category":
            return self.categories.get(raw, raw), None
        return None, f"unknown token {raw!r} for variable {self.id} -> NA"


@dataclass(frozen=True)
class MappingDescriptor:
    """Declarative description of a raw survey export's columns."""

    variables: tuple[VariableSpec, ...]
    respondent_id_column: str | None = None

    @classmethod
    def from_json(cls, source: str | Path | dict) -> "MappingDescriptor":
        if isinstance(source, (str, Path)):
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        else:
            data = source
        specs = []
        for entry in data["variables"]:
            specs.append(VariableSpec(
                id=entry["id"],
                column=entry.get("column", entry["id"]),
                type=entry.get("type", "yesno"),
                label=entry.get("label", ""),
                categories=entry.get("categories", {}),
                tokens={k: _decode_literal(v) for k, v in entry.get("tokens", {}).items()},
            ))
        return cls(variables=tuple(specs),
                   respondent_id_column=data.get("respondent_id"))


def _decode_literal(value) -> Cell:
    if value == "-9":
        return SKIPPED
    return value


@dataclass(frozen=True)
class Row:
    respondent_id: str
    values: tuple[Cell, ...]


@dataclass(frozen=True)
class RawResponseTable:
    """Immutable decoded survey table; every row covers every variable."""

    variables: tuple[str, ...]
    rows: tuple[Row, ...]
    labels: Mapping[str, str] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_var_index",
                           {v: i for i, v in enumerate(self.variables)})

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def has_variable(self, var: str) -> bool:
        return var in self._var_index

    def var_index(self, var: str) -> int:
        try:
            return self._var_index[var]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {var!r}") from None

    def value(self, row: Row, var: str) -> Cell:
        return row.values[self.var_index(var)]

    def column(self, var: str) -> Iterator[Cell]:
        idx = self.var_index(var)
        return (row.values[idx] for row in self.rows)

    def variables_with_prefix(self, prefix: str) -> tuple[str, ...]:
        return tuple(v for v in self.variables if v.startswith(prefix))


def ingest_raw(source: bytes | str | Path,
               mapping: MappingDescriptor) -> RawResponseTable:
    """Decode a raw CSV export into a RawResponseTable.

    Unmapped columns are ignored; unknown tokens decode to NA and leave a
    warning record on the table. Raises ParseError on malformed CSV and
    IngestionError on duplicate respondent ids.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8-sig")
    else:
        text = Path(source).read_text(encoding="utf-8-sig")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file: missing header row", line=1) from None
    col_pos = {name: i for i, name in enumerate(header)}

    for spec in mapping.variables:
        if spec.column not in col_pos:
            raise ConfigurationError(
                f"mapping references column {spec.column!r} absent from the CSV header")
    id_pos = None
    if mapping.respondent_id_column is not None:
        if mapping.respondent_id_column not in col_pos:
            raise ConfigurationError(
                f"respondent id column {mapping.respondent_id_column!r} absent from header")
        id_pos = col_pos[mapping.respondent_id_column]

    rows: list[Row] = []
    warnings: list[str] = []
    seen_ids: set[str] = set()
    width = len(header)
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue  # blank trailing line
        if len(record) != width:
            raise ParseError(
                f"expected {width} fields, found {len(record)}", line=lineno)
        rid = record[id_pos].strip() if id_pos is not None else str(len(rows) + 1)
        if rid in seen_ids:
            raise IngestionError(f"duplicate respondent id {rid!r} (line {lineno})")
        seen_ids.add(rid)
        values = []
        for spec in mapping.variables:
            cell, warning = spec.decode(record[col_pos[spec.column]])
            if warning:
                warnings.append(f"row {rid}: {warning}")
            values.append(cell)
        rows.append(Row(respondent_id=rid, values=tuple(values)))

    labels = {spec.id: spec.label for spec in mapping.variables if spec.label}
    return RawResponseTable(
        variables=tuple(spec.id for spec in mapping.variables),
        rows=tuple(rows),
        labels=labels,
        warnings=tuple(warnings),
    )


class SkippedRule(str, Enum):
    TO_NA = "to_na"
    DROP_ROW = "drop_row"


_DEFAULT_RECODES: Mapping[str, Mapping[str, str]] = {
    "D001": {"Micro": "MicroAndSmall", "Small": "MicroAndSmall"},
}


@dataclass(frozen=True)
class CleaningPolicy:
    """Cleaning and categorization rules applied ahead of any analysis.

    skipped_rules maps a variable id or a block prefix (the part before the
    underscore, e.g. "PU09") to the treatment of skipped answers. use_levels
    lists the Likert levels counted as usage; None means every level above
    the lowest ("never/don't use") counts.
    """

    skipped_rules: Mapping[str, SkippedRule] = field(default_factory=dict)
    default_skipped_rule: SkippedRule | None = SkippedRule.TO_NA
    use_levels: frozenset[int] | None = None
    recodes: Mapping[str, Mapping[str, str]] = field(
        default_factory=lambda: _DEFAULT_RECODES)

    def rule_for(self, var: str) -> SkippedRule:
        if var in self.skipped_rules:
            return self.skipped_rules[var]
        prefix = var.split("_", 1)[0]
        if prefix in self.skipped_rules:
            return self.skipped_rules[prefix]
        if self.default_skipped_rule is not None:
            return self.default_skipped_rule
        raise ConfigurationError(
            f"variable {var!r} has skipped cells but no cleaning rule")

    def counts_as_use(self, level: int) -> bool:
        if self.use_levels is not None:
            return level in self.use_levels
        return level >= 1

    @classmethod
    def from_json(cls, source: str | Path | dict) -> "CleaningPolicy":
        if isinstance(source, (str, Path)):
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        else:
            data = source
        rules = {k: SkippedRule(v) for k, v in data.get("skipped_rules", {}).items()}
        default = data.get("default_skipped_rule", "to_na")
        use_levels = data.get("use_levels")
        return cls(
            skipped_rules=rules,
            default_skipped_rule=SkippedRule(default) if default else None,
            use_levels=frozenset(use_levels) if use_levels is not None else None,
            recodes=data.get("recodes", _DEFAULT_RECODES),
        )


def clean(table: RawResponseTable, policy: CleaningPolicy) -> RawResponseTable:
    """Resolve skipped answers per policy and apply category recodes.

    Idempotent: a cleaned table passes through unchanged.
    """
    recoded_vars = {v: policy.recodes[v] for v in policy.recodes
                    if table.has_variable(v)}
    out_rows: list[Row] = []
    for row in table.rows:
        values = list(row.values)
        drop = False
        for i, var in enumerate(table.variables):
            cell = values[i]
            if cell is SKIPPED:
                rule = policy.rule_for(var)
                if rule is SkippedRule.DROP_ROW:
                    drop = True
                    break
                values[i] = None
            elif isinstance(cell, str) and var in recoded_vars:
                values[i] = recoded_vars[var].get(cell, cell)
        if not drop:
            out_rows.append(Row(row.respondent_id, tuple(values)))
    return RawResponseTable(
        variables=table.variables,
        rows=tuple(out_rows),
        labels=table.labels,
        warnings=table.warnings,
    )


# --- filters -----------------------------------------------------------------


@dataclass(frozen=True)
class Equals:
    var: str
    value: Cell


@dataclass(frozen=True)
class UsesAll:
    items: tuple[str, ...]


@dataclass(frozen=True)
class Filter:
    """Conjunction of predicate terms over a response table's rows."""

    terms: tuple = ()

    def __bool__(self) -> bool:
        return bool(self.terms)

    def with_term(self, term) -> "Filter":
        return Filter(self.terms + (term,))

    def row_passes(self, table: RawResponseTable, row: Row,
                   policy: CleaningPolicy) -> bool:
        for term in self.terms:
            if isinstance(term, Equals):
                if not _cell_equals(table.value(row, term.var), term.value):
                    return False
            elif isinstance(term, UsesAll):
                for item_id in term.items:
                    cell = table.value(row, item_id)
                    if not cell_is_used(cell, kind_for_id(item_id), policy):
                        return False
            else:
                raise ConfigurationError(f"unsupported filter term {term!r}")
        return True

    @classmethod
    def parse(cls, text: str | None) -> "Filter":
        """Parse 'VAR=value' terms separated by ';' (e.g. "PU04=yes")."""
        if not text:
            return cls()
        terms = []
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ConfigurationError(f"filter term {part!r} is not VAR=value")
            var, raw = part.split("=", 1)
            terms.append(Equals(var.strip(), _parse_filter_value(raw.strip())))
        return cls(tuple(terms))

    def to_string(self) -> str:
        parts = []
        for term in self.terms:
            if isinstance(term, Equals):
                parts.append(f"{term.var}={_format_filter_value(term.value)}")
            elif isinstance(term, UsesAll):
                parts.append("uses:" + ",".join(term.items))
        return ";".join(parts)


def _parse_filter_value(raw: str) -> Cell:
    low = raw.lower()
    if low in ("yes", "true", "y"):
        return True
    if low in ("no", "false", "n"):
        return False
    try:
        return int(raw)
    except ValueError:
        return raw


def _format_filter_value(value: Cell) -> str:
    if value is True:
        return "yes"
    if value is False:
        return "no"
    return str(value)


def _cell_equals(cell: Cell, wanted: Cell) -> bool:
    # allow 1/0 filter literals against yes/no cells; other ints never match
    if isinstance(cell, bool) and isinstance(wanted, int) and not isinstance(wanted, bool):
        return cell == bool(wanted) if wanted in (0, 1) else False
    return cell == wanted


def cell_is_used(cell: Cell, kind: ItemKind, policy: CleaningPolicy) -> bool:
    """Whether a decoded item cell counts as usage of that item."""
    if cell is None or cell is SKIPPED:
        return False
    if isinstance(cell, bool):
        return cell
    if isinstance(cell, int):
        if kind is ItemKind.METHOD:
            raise ConfigurationError("method cells must be yes/no, got a Likert level")
        return policy.counts_as_use(cell)
    raise ConfigurationError(f"categorical cell {cell!r} inside an item block")


# --- usage matrix ------------------------------------------------------------


class Tri(str, Enum):
    USED = "used"
    NOT_USED = "not_used"
    MISSING = "missing"


@dataclass(frozen=True)
class UsageMatrix:
    """Respondents x items tri-state matrix backed by per-column bitsets.

    Bit i of used[item] (and missing[item]) refers to row i of row_ids.
    Missing never counts toward usage; n is the support denominator.
    """

    row_ids: tuple[str, ...]
    items: tuple[str, ...]
    used: Mapping[str, int]
    missing: Mapping[str, int]

    @property
    def n(self) -> int:
        return len(self.row_ids)

    def used_mask(self, item_id: str) -> int:
        try:
            return self.used[item_id]
        except KeyError:
            raise UnknownItemError(f"item {item_id!r} is not a matrix column") from None

    def count(self, members: Sequence[str]) -> int:
        """Rows marking every member as used."""
        if not members:
            raise ValueError("empty itemset has no defined support")
        mask = -1
        for item_id in members:
            mask &= self.used_mask(item_id)
        if self.n == 0:
            return 0
        mask &= (1 << self.n) - 1
        return mask.bit_count()

    def cell(self, row_index: int, item_id: str) -> Tri:
        bit = 1 << row_index
        if self.used_mask(item_id) & bit:
            return Tri.USED
        if self.missing[item_id] & bit:
            return Tri.MISSING
        return Tri.NOT_USED


def project(table: RawResponseTable, kind: ItemKind, flt: Filter,
            policy: CleaningPolicy, catalog: ItemCatalog) -> UsageMatrix:
    """Project the filtered table onto the catalog's items of one kind.

    A row is included when it passes the filter and carries at least one
    non-NA answer inside the selected item block, so n varies per analysis.
    Within an included row, NA item cells are Missing (and never usage).
    """
    item_ids = [item.id for item in catalog.of_kind(kind)
                if table.has_variable(item.id)]
    col_idx = {item_id: table.var_index(item_id) for item_id in item_ids}

    row_ids: list[str] = []
    used = {item_id: 0 for item_id in item_ids}
    missing = {item_id: 0 for item_id in item_ids}
    for row in table.rows:
        block = [row.values[col_idx[item_id]] for item_id in item_ids]
        if any(cell is SKIPPED for cell in block):
            raise ConfigurationError(
                "projection requires a cleaned table (skipped cells present)")
        if not any(cell is not None for cell in block):
            continue
        if not flt.row_passes(table, row, policy):
            continue
        bit = 1 << len(row_ids)
        for item_id, cell in zip(item_ids, block):
            if cell is None:
                missing[item_id] |= bit
            elif cell_is_used(cell, kind, policy):
                used[item_id] |= bit
        row_ids.append(row.respondent_id)
    return UsageMatrix(
        row_ids=tuple(row_ids),
        items=tuple(item_ids),
        used=used,
        missing=missing,
    )


# --- canonical clean CSV -----------------------------------------------------

_CLEAN_ID_COLUMN = "respondent_id"


def write_clean_csv(table: RawResponseTable, destination: str | Path,
                    policy: CleaningPolicy) -> None:
    """Write the canonical wide CSV: usage cells as 1/0/NA, categories verbatim.

    Likert answers are categorized through the policy's use mapping at write
    time, so downstream consumers see plain usage booleans.
    """
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([_CLEAN_ID_COLUMN, *table.variables])
        for row in table.rows:
            record = [row.respondent_id]
            for var, cell in zip(table.variables, row.values):
                record.append(_encode_clean_cell(var, cell, policy))
            writer.writerow(record)


def _encode_clean_cell(var: str, cell: Cell, policy: CleaningPolicy) -> str:
    if cell is None:
        return "NA"
    if cell is SKIPPED:
        raise ConfigurationError(
            f"cannot serialize skipped cell for {var}: clean the table first")
    if isinstance(cell, bool):
        return "1" if cell else "0"
    if isinstance(cell, int):
        return "1" if policy.counts_as_use(cell) else "0"
    return str(cell)


def load_clean_csv(source: str | Path) -> RawResponseTable:
    """Load a canonical clean CSV back into a RawResponseTable."""
    text = Path(source).read_text(encoding="utf-8-sig")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file: missing header row", line=1) from None
    if not header or header[0] != _CLEAN_ID_COLUMN:
        raise ParseError(f"first column must be {_CLEAN_ID_COLUMN!r}", line=1)
    variables = tuple(header[1:])
    rows = []
    seen = set()
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, found {len(record)}", line=lineno)
        rid = record[0]
        if rid in seen:
            raise IngestionError(f"duplicate respondent id {rid!r} (line {lineno})")
        seen.add(rid)
        values = []
        for token in record[1:]:
            if token == "NA":
                values.append(None)
            elif token == "1":
                values.append(True)
            elif token == "0":
                values.append(False)
            else:
                values.append(token)
        rows.append(Row(rid, tuple(values)))
    return RawResponseTable(variables=variables, rows=tuple(rows))
