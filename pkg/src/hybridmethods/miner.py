"""Level-wise frequent itemset mining over usage matrices.

Counting runs on per-column row bitsets: the support count of an itemset is
the popcount of the AND of its member columns, and each frequent set keeps
its row mask so level k+1 candidates need a single AND + popcount. Candidate
generation is the classic prefix join with the downward-closure prune, which
is what keeps the high-threshold practice searches cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .catalog import ItemCatalog, ItemKind
from .dataset import CleaningPolicy, Filter, RawResponseTable, UsageMatrix, UsesAll, project
from .errors import DegenerateSubsetError, UnknownItemError

METHOD_THRESHOLD_DEFAULT = 0.35
PRACTICE_THRESHOLD_DEFAULT = 0.85
MAX_SIZE_DEFAULT = 8


@dataclass(frozen=True)
class MiningConfig:
    threshold: float
    min_size: int = 1
    max_size: int = MAX_SIZE_DEFAULT

    def __post_init__(self):
        if not 0 < self.threshold <= 1:
            raise ValueError("threshold must be in (0, 1]")
        if self.min_size < 1 or self.min_size > self.max_size:
            raise ValueError("need 1 <= min_size <= max_size")


@dataclass(frozen=True)
class SupportedItemset:
    """An itemset with its count and support in the mined matrix."""

    members: tuple[str, ...]
    count: int
    n: int

    @property
    def support(self) -> float:
        return self.count / self.n

    def as_dict(self) -> dict:
        return {"members": list(self.members), "count": self.count,
                "n": self.n, "support": self.support}


def min_count_for(threshold: float, n: int) -> int:
    """Smallest count c with c/n >= threshold, exact under float division."""
    c = max(0, math.ceil(threshold * n) - 1)
    while c / n < threshold:
        c += 1
    return c


def support_of(matrix: UsageMatrix, members: Sequence[str]) -> SupportedItemset:
    """Count the rows marking every member as used."""
    if matrix.n == 0:
        raise DegenerateSubsetError("matrix has no rows (n = 0)")
    if not members:
        raise ValueError("itemset must be nonempty")
    ordered = _ordered_members(matrix, members)
    return SupportedItemset(members=ordered, count=matrix.count(ordered), n=matrix.n)


def _ordered_members(matrix: UsageMatrix, members: Sequence[str]) -> tuple[str, ...]:
    pos = {item: i for i, item in enumerate(matrix.items)}
    try:
        return tuple(sorted(set(members), key=pos.__getitem__))
    except KeyError:
        missing = [m for m in members if m not in pos]
        raise UnknownItemError(f"items not in matrix: {missing}") from None


def mine(matrix: UsageMatrix, config: MiningConfig) -> list[SupportedItemset]:
    """All itemsets within the size window whose support clears the threshold.

    Output is grouped by size (ascending); inside a size group sets are
    ordered by support descending, then by members in catalog order. The
    ordering is part of the public contract: first-appearance indices
    downstream depend on it.
    """
    if matrix.n == 0:
        raise DegenerateSubsetError("matrix has no rows (n = 0)")
    n = matrix.n
    min_count = min_count_for(config.threshold, n)
    full = (1 << n) - 1

    # level 1: frequent singletons in catalog order, by column index
    masks: dict[tuple[int, ...], int] = {}
    counts: dict[tuple[int, ...], int] = {}
    level: list[tuple[int, ...]] = []
    for idx, item in enumerate(matrix.items):
        mask = matrix.used[item] & full
        count = mask.bit_count()
        if count >= min_count:
            key = (idx,)
            masks[key] = mask
            counts[key] = count
            level.append(key)

    frequent_by_size: dict[int, list[tuple[int, ...]]] = {1: level}
    size = 1
    while level and size < config.max_size:
        size += 1
        current = set(level)
        next_level: list[tuple[int, ...]] = []
        # prefix join: two frequent (k-1)-sets sharing all but the last index
        for i, left in enumerate(level):
            prefix = left[:-1]
            for right in level[i + 1:]:
                if right[:-1] != prefix:
                    break  # level is lexicographically sorted; prefix run ended
                candidate = left + (right[-1],)
                if size > 2 and not _all_subsets_frequent(candidate, current):
                    continue
                mask = masks[left] & masks[(right[-1],)]
                count = mask.bit_count()
                if count >= min_count:
                    masks[candidate] = mask
                    counts[candidate] = count
                    next_level.append(candidate)
        level = next_level
        if level:
            frequent_by_size[size] = level

    out: list[SupportedItemset] = []
    for s in range(config.min_size, config.max_size + 1):
        group = frequent_by_size.get(s, [])
        group = sorted(group, key=lambda key: (-counts[key], key))
        for key in group:
            out.append(SupportedItemset(
                members=tuple(matrix.items[i] for i in key),
                count=counts[key],
                n=n,
            ))
    return out


def _all_subsets_frequent(candidate: tuple[int, ...], frequent: set) -> bool:
    # The join already guarantees the two (k-1)-subsets sharing the prefix.
    for drop in range(len(candidate) - 2):
        if candidate[:drop] + candidate[drop + 1:] not in frequent:
            return False
    return True


# --- context-scoped practice mining -------------------------------------------


def frame_subset_matrix(table: RawResponseTable, frame: Sequence[str],
                        flt: Filter, policy: CleaningPolicy,
                        catalog: ItemCatalog) -> UsageMatrix:
    """Practice matrix over the rows adopting every method of the frame."""
    for item_id in frame:
        if catalog.get(item_id).kind is not ItemKind.METHOD:
            raise UnknownItemError(f"frame member {item_id!r} is not a method item")
    scoped = flt.with_term(UsesAll(tuple(frame))) if frame else flt
    matrix = project(table, ItemKind.PRACTICE, scoped, policy, catalog)
    if matrix.n == 0:
        raise DegenerateSubsetError("frame has no adopters")
    return matrix


def practices_in_context(table: RawResponseTable, frame: Sequence[str],
                         flt: Filter, threshold: float,
                         policy: CleaningPolicy,
                         catalog: ItemCatalog) -> list[SupportedItemset]:
    """Singleton practices clearing the threshold among the frame's adopters."""
    matrix = frame_subset_matrix(table, frame, flt, policy, catalog)
    return mine(matrix, MiningConfig(threshold=threshold, min_size=1, max_size=1))


def practice_tuples_in_context(table: RawResponseTable, frame: Sequence[str],
                               flt: Filter, threshold: float, size: int,
                               policy: CleaningPolicy,
                               catalog: ItemCatalog) -> list[SupportedItemset]:
    """Frequent practice tuples of one exact size among the frame's adopters."""
    matrix = frame_subset_matrix(table, frame, flt, policy, catalog)
    return mine(matrix, MiningConfig(threshold=threshold, min_size=size, max_size=size))
