"""Ranking of process variants and per-practice first-appearance indices.

For a frame's adopter subset, the variants at set size s are the frequent
practice s-sets. Each size's list is ordered (agreement desc, catalog-order
tie-break) and scanned once: the index of the first variant containing a
practice is that practice's rank signal at that size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .catalog import ItemCatalog
from .dataset import CleaningPolicy, Filter, RawResponseTable, UsageMatrix
from .miner import (
    MiningConfig,
    SupportedItemset,
    frame_subset_matrix,
    mine,
)

SIZE_RANGE_DEFAULT = (1, 8)


@dataclass(frozen=True)
class PracticeRank:
    practice: str
    first_index: int
    count_at_first: int
    n: int

    @property
    def agreement_at_first(self) -> float:
        return self.count_at_first / self.n

    def as_dict(self) -> dict:
        return {"practice": self.practice, "first_index": self.first_index,
                "agreement": self.agreement_at_first}


@dataclass(frozen=True)
class SizeRanking:
    size: int
    variants: tuple[SupportedItemset, ...]
    ranks: tuple[PracticeRank, ...]

    @property
    def variant_count(self) -> int:
        return len(self.variants)

    def rank_of(self, practice: str) -> PracticeRank | None:
        for rank in self.ranks:
            if rank.practice == practice:
                return rank
        return None


@dataclass(frozen=True)
class VariantRanking:
    frame: tuple[str, ...]
    subset_n: int
    threshold: float
    sizes: tuple[SizeRanking, ...]

    def for_size(self, size: int) -> SizeRanking | None:
        for entry in self.sizes:
            if entry.size == size:
                return entry
        return None

    def as_dict(self) -> dict:
        return {
            "frame": list(self.frame),
            "subset_n": self.subset_n,
            "threshold": self.threshold,
            "sizes": [{
                "set_size": s.size,
                "variant_count": s.variant_count,
                "ranks": [r.as_dict() for r in s.ranks],
            } for s in self.sizes],
        }


def rank_variants(table: RawResponseTable, frame: Sequence[str], flt: Filter,
                  threshold: float, policy: CleaningPolicy,
                  catalog: ItemCatalog,
                  size_range: tuple[int, int] = SIZE_RANGE_DEFAULT) -> VariantRanking:
    """Rank the frame's process variants for every set size in the range.

    Sizes with no frequent variant are omitted; an empty ranking (no size
    entries at all) is a valid result for a frame whose adopters agree on
    nothing at the threshold.
    """
    matrix = frame_subset_matrix(table, frame, flt, policy, catalog)
    return rank_matrix(matrix, frame, threshold, size_range)


def rank_matrix(matrix: UsageMatrix, frame: Sequence[str], threshold: float,
                size_range: tuple[int, int] = SIZE_RANGE_DEFAULT) -> VariantRanking:
    """Rank variants over an already-projected adopter matrix."""
    lo, hi = size_range
    mined = mine(matrix, MiningConfig(threshold=threshold, min_size=lo, max_size=hi))
    by_size: dict[int, list[SupportedItemset]] = {}
    for itemset in mined:
        by_size.setdefault(len(itemset.members), []).append(itemset)

    sizes = []
    for size in range(lo, hi + 1):
        variants = by_size.get(size)
        if not variants:
            continue
        ranks = []
        seen: set[str] = set()
        for index, variant in enumerate(variants):
            for practice in variant.members:
                if practice not in seen:
                    seen.add(practice)
                    ranks.append(PracticeRank(
                        practice=practice,
                        first_index=index,
                        count_at_first=variant.count,
                        n=matrix.n,
                    ))
        ranks.sort(key=lambda r: r.first_index)
        sizes.append(SizeRanking(size=size, variants=tuple(variants),
                                 ranks=tuple(ranks)))
    return VariantRanking(
        frame=tuple(frame),
        subset_n=matrix.n,
        threshold=threshold,
        sizes=tuple(sizes),
    )
