"""Incremental construction of hybrid methods with agreement bookkeeping.

A construction starts from a method frame (a frequent method combination),
optionally anchors a core of practices, and then grows a practice cluster
one add/remove at a time. When a session carries a target set size, adds
beyond that size keep the tuple size fixed: the engine re-derives the family
of size-k practice tuples that contain every over-added practice, reports
the family's minimal agreement, and brackets the re-sizing step with an
agreement interval (lower bound from the pre-extension size-k tuples, upper
bound from the size-(k-1) sub-tuples).

Sessions are event-sourced: the derived state is a pure function of the
session configuration and the surviving add sequence, so removing a practice
restores the earlier combinatorial state exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

from .catalog import ItemCatalog, ItemKind, default_catalog
from .dataset import CleaningPolicy, Filter, RawResponseTable, UsageMatrix, project
from .errors import (
    DegenerateSubsetError,
    IneligiblePracticeError,
    NotChosenError,
    UnknownItemError,
)
from .miner import (
    METHOD_THRESHOLD_DEFAULT,
    PRACTICE_THRESHOLD_DEFAULT,
    MiningConfig,
    SupportedItemset,
    frame_subset_matrix,
    min_count_for,
    mine,
)
from .variants import SIZE_RANGE_DEFAULT, rank_matrix


class FrameSource(str, Enum):
    ALL_DATA = "all_data"
    FILTERED = "filtered"


@dataclass(frozen=True)
class MethodFrame:
    members: tuple[str, ...]
    count: int
    n: int
    source: FrameSource

    @property
    def support(self) -> float:
        return self.count / self.n

    def as_dict(self) -> dict:
        return {"members": list(self.members), "count": self.count, "n": self.n,
                "support": self.support, "source": self.source.value}


@dataclass(frozen=True)
class Core:
    members: tuple[str, ...]
    count: int
    n: int

    @property
    def support(self) -> float:
        return self.count / self.n

    def as_dict(self) -> dict:
        return {"members": list(self.members), "count": self.count, "n": self.n,
                "support": self.support}


@dataclass(frozen=True)
class AgreementInterval:
    lower: float
    upper: float
    from_size: int
    to_size: int

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "from_size": self.from_size, "to_size": self.to_size}


def enumerate_frames(table: RawResponseTable, flt: Filter,
                     policy: CleaningPolicy, catalog: ItemCatalog,
                     threshold: float = METHOD_THRESHOLD_DEFAULT,
                     max_size: int = 8) -> list[MethodFrame]:
    """Frequent method combinations; the singletons are the base methods."""
    matrix = project(table, ItemKind.METHOD, flt, policy, catalog)
    if matrix.n == 0:
        raise DegenerateSubsetError("no rows provide method-block data")
    source = FrameSource.FILTERED if flt else FrameSource.ALL_DATA
    mined = mine(matrix, MiningConfig(threshold=threshold, min_size=1,
                                      max_size=max_size))
    return [MethodFrame(members=s.members, count=s.count, n=s.n, source=source)
            for s in mined]


def enumerate_cores(table: RawResponseTable, flt: Filter,
                    policy: CleaningPolicy, catalog: ItemCatalog,
                    threshold: float = PRACTICE_THRESHOLD_DEFAULT,
                    core_size: int = 2) -> list[Core]:
    """Frequent practice sets of the core size over the full projection."""
    matrix = project(table, ItemKind.PRACTICE, flt, policy, catalog)
    if matrix.n == 0:
        raise DegenerateSubsetError("no rows provide practice-block data")
    mined = mine(matrix, MiningConfig(threshold=threshold, min_size=core_size,
                                      max_size=core_size))
    return [Core(members=s.members, count=s.count, n=s.n) for s in mined]


@dataclass(frozen=True)
class CoreExtension:
    practice: str
    combined: SupportedItemset


def extend_core(table: RawResponseTable, frame: Sequence[str],
                core: Sequence[str], flt: Filter, policy: CleaningPolicy,
                catalog: ItemCatalog,
                threshold: float = PRACTICE_THRESHOLD_DEFAULT) -> list[CoreExtension]:
    """Practices whose union with the core stays frequent among frame adopters."""
    matrix = frame_subset_matrix(table, frame, flt, policy, catalog)
    min_count = min_count_for(threshold, matrix.n)
    core_members = tuple(core)
    out = []
    for practice in matrix.items:
        if practice in core_members:
            continue
        members = tuple(sorted({*core_members, practice},
                               key=matrix.items.index))
        count = matrix.count(members)
        if count >= min_count:
            out.append(CoreExtension(
                practice=practice,
                combined=SupportedItemset(members=members, count=count, n=matrix.n)))
    out.sort(key=lambda e: (-e.combined.count, matrix.items.index(e.practice)))
    return out


def subset_agreements(matrix: UsageMatrix, base: Sequence[str],
                      sub_size: int) -> list[SupportedItemset]:
    """Supports of all sub_size-subsets of the base, best agreement first."""
    base = tuple(base)
    if not 1 <= sub_size < len(base):
        raise ValueError("need 1 <= sub_size < len(base)")
    pos = {item: i for i, item in enumerate(matrix.items)}
    unknown = [m for m in base if m not in pos]
    if unknown:
        raise UnknownItemError(f"items not in matrix: {unknown}")
    ordered = tuple(sorted(base, key=pos.__getitem__))
    sets = []
    for combo in combinations(ordered, sub_size):
        sets.append(SupportedItemset(members=combo, count=matrix.count(combo),
                                     n=matrix.n))
    sets.sort(key=lambda s: (-s.count, tuple(pos[m] for m in s.members)))
    return sets


@dataclass(frozen=True)
class ExtensionResult:
    tuples: tuple[SupportedItemset, ...]
    min_count: int
    n: int
    interval: AgreementInterval
    warning: str | None = None

    @property
    def min_agreement(self) -> float:
        return self.min_count / self.n


def extend_with_practice(matrix: UsageMatrix, base: Sequence[str],
                         new_practice: str) -> ExtensionResult:
    """Swap one base slot for the new practice, keeping the tuple size.

    Every (k-1)-subset of the k-sized base is combined with the new practice;
    the minimum agreement over those tuples is the post-extension a_k. The
    returned interval brackets the move: lower bound from the pre-extension
    size-k agreement, upper bound from the best (k-1)-subset.
    """
    base = tuple(base)
    if new_practice in base:
        raise ValueError(f"practice {new_practice!r} is already in the base")
    if len(base) < 2:
        raise ValueError("base must have at least two practices")
    pos = {item: i for i, item in enumerate(matrix.items)}
    if new_practice not in pos:
        raise UnknownItemError(f"item {new_practice!r} is not a matrix column")

    base_count = matrix.count(base)
    subs = subset_agreements(matrix, base, len(base) - 1)
    tuples = []
    for sub in subs:
        members = tuple(sorted({*sub.members, new_practice}, key=pos.__getitem__))
        tuples.append(SupportedItemset(members=members,
                                       count=matrix.count(members), n=matrix.n))
    tuples.sort(key=lambda s: (-s.count, tuple(pos[m] for m in s.members)))
    interval = AgreementInterval(
        lower=base_count / matrix.n,
        upper=subs[0].count / matrix.n,
        from_size=len(base),
        to_size=len(base) - 1,
    )
    warning = None
    if matrix.count((new_practice,)) == 0:
        warning = (f"practice {new_practice!r} has zero support in this subset; "
                   "reported agreements fall accordingly")
    return ExtensionResult(
        tuples=tuple(tuples),
        min_count=min(t.count for t in tuples),
        n=matrix.n,
        interval=interval,
        warning=warning,
    )


# --- construction sessions -----------------------------------------------------


@dataclass(frozen=True)
class ChosenEntry:
    practice: str
    step: int  # 0 for core practices, add order (1-based) otherwise
    count_at_add: int
    n: int

    @property
    def agreement_at_add(self) -> float:
        return self.count_at_add / self.n

    def as_dict(self) -> dict:
        return {"id": self.practice, "step": self.step,
                "agreement_at_add": self.agreement_at_add}


@dataclass(frozen=True)
class CandidateEntry:
    practice: str
    rank: int
    projected_count: int
    n: int
    eligible: bool

    @property
    def projected_agreement(self) -> float:
        return self.projected_count / self.n

    def as_dict(self) -> dict:
        return {"id": self.practice, "rank": self.rank,
                "projected_agreement": self.projected_agreement,
                "eligible": self.eligible}


@dataclass(frozen=True)
class ConstructionState:
    """Snapshot of a session, fully derived from config + surviving adds."""

    frame: tuple[str, ...]
    filter_text: str
    core: tuple[str, ...]
    set_size: int | None
    threshold: float
    subset_n: int
    chosen: tuple[ChosenEntry, ...]
    candidates: tuple[CandidateEntry, ...]
    interval: AgreementInterval | None
    min_count: int | None

    @property
    def k(self) -> int:
        m = len(self.chosen)
        return min(m, self.set_size) if self.set_size else m

    @property
    def min_agreement(self) -> float | None:
        if self.min_count is None:
            return None
        return self.min_count / self.subset_n


class ConstructionSession:
    """Single-writer what-if session over one frame's adopter subset."""

    def __init__(self, table: RawResponseTable, frame: Sequence[str],
                 flt: Filter = Filter(), policy: CleaningPolicy | None = None,
                 catalog: ItemCatalog | None = None,
                 core: Sequence[str] = (),
                 set_size: int | None = None,
                 threshold: float = PRACTICE_THRESHOLD_DEFAULT,
                 size_range: tuple[int, int] = SIZE_RANGE_DEFAULT):
        self.catalog = catalog or default_catalog()
        self.policy = policy or CleaningPolicy()
        self.filter = flt
        self.threshold = threshold
        self.frame = self.catalog.sort_members(frame)
        self.set_size = set_size
        self.matrix = frame_subset_matrix(table, self.frame, flt, self.policy,
                                          self.catalog)
        self._min_count = min_count_for(threshold, self.matrix.n)
        self._pos = {item: i for i, item in enumerate(self.matrix.items)}
        self.core = tuple(sorted(core, key=self._pos.__getitem__))
        for practice in self.core:
            if self.matrix.count((practice,)) < self._min_count:
                raise IneligiblePracticeError(
                    f"core practice {practice!r} is below the agreement threshold")
        self._candidate_order = self._seed_candidate_order(size_range)
        self.events: list[tuple[str, str]] = []
        self._state = self._derive_state(list(self.core))

    def _seed_candidate_order(self, size_range: tuple[int, int]) -> tuple[str, ...]:
        """Order candidates by their first-appearance rank.

        The anchor size is the one with the most variants (ties to the
        smaller size); practices missing there fall back to their singleton
        rank, then to catalog order.
        """
        ranking = rank_matrix(self.matrix, self.frame, self.threshold, size_range)
        if not ranking.sizes:
            return ()
        anchor = max(ranking.sizes, key=lambda s: (s.variant_count, -s.size))
        singles = ranking.for_size(1)
        anchor_index = {r.practice: r.first_index for r in anchor.ranks}
        single_index = {r.practice: r.first_index for r in (singles.ranks if singles else ())}
        practices = sorted(
            single_index,
            key=lambda p: (anchor_index.get(p, len(anchor.variants)),
                           single_index[p],
                           self._pos[p]))
        return tuple(practices)

    # -- derived-state computation --------------------------------------------

    def _family(self, chosen: Sequence[str], required: Sequence[str],
                k: int) -> list[tuple[str, ...]]:
        """Size-k practice tuples drawn from chosen that contain every
        required (over-added) practice."""
        required = tuple(required)
        free = [p for p in chosen if p not in required]
        slots = k - len(required)
        if slots < 0:
            return []
        sets = []
        for combo in combinations(free, slots):
            members = tuple(sorted({*combo, *required}, key=self._pos.__getitem__))
            sets.append(members)
        sets.sort(key=lambda m: tuple(self._pos[x] for x in m))
        return sets

    def _family_counts(self, chosen: Sequence[str], required: Sequence[str],
                       k: int) -> list[int]:
        return [self.matrix.count(members)
                for members in self._family(chosen, required, k)]

    def _min_family_count(self, chosen: Sequence[str]) -> int | None:
        if not chosen:
            return None
        m = len(chosen)
        k = min(m, self.set_size) if self.set_size else m
        counts = self._family_counts(chosen, chosen[k:], k)
        return min(counts) if counts else None

    def _interval(self, chosen: Sequence[str]) -> AgreementInterval | None:
        m = len(chosen)
        k = min(m, self.set_size) if self.set_size else m
        if m < 2 or k < 2:
            return None
        if m == k:
            prev, required = chosen, ()
        else:
            prev, required = chosen[:-1], chosen[k:-1]
        lower_counts = self._family_counts(prev, required, k)
        upper_counts = self._family_counts(prev, required, k - 1)
        if not lower_counts:
            return None
        lower = min(lower_counts)
        upper = max(upper_counts) if upper_counts else lower
        return AgreementInterval(lower=lower / self.matrix.n,
                                 upper=upper / self.matrix.n,
                                 from_size=k, to_size=k - 1)

    def _derive_state(self, chosen: list[str]) -> ConstructionState:
        entries = []
        prefix: list[str] = []
        core_count = None
        for practice in self.core:
            prefix.append(practice)
        if self.core:
            core_count = self._min_family_count(prefix)
        for practice in self.core:
            entries.append(ChosenEntry(practice=practice, step=0,
                                       count_at_add=core_count, n=self.matrix.n))
        step = 0
        for practice in chosen[len(self.core):]:
            prefix.append(practice)
            step += 1
            entries.append(ChosenEntry(
                practice=practice, step=step,
                count_at_add=self._min_family_count(prefix), n=self.matrix.n))

        candidates = []
        chosen_set = set(chosen)
        rank = 0
        for practice in self._candidate_order:
            if practice in chosen_set:
                continue
            projected = self._min_family_count(list(chosen) + [practice])
            candidates.append(CandidateEntry(
                practice=practice, rank=rank,
                projected_count=projected, n=self.matrix.n,
                eligible=projected >= self._min_count))
            rank += 1

        return ConstructionState(
            frame=self.frame,
            filter_text=self.filter.to_string(),
            core=self.core,
            set_size=self.set_size,
            threshold=self.threshold,
            subset_n=self.matrix.n,
            chosen=tuple(entries),
            candidates=tuple(candidates),
            interval=self._interval(tuple(chosen)),
            min_count=self._min_family_count(chosen),
        )

    def _surviving_sequence(self) -> list[str]:
        chosen = list(self.core)
        for action, practice in self.events:
            if action == "add":
                chosen.append(practice)
            else:
                chosen.remove(practice)
        return chosen

    # -- public API -------------------------------------------------------------

    def state(self) -> ConstructionState:
        return self._state

    def add_practice(self, practice: str) -> ConstructionState:
        if practice not in self._pos:
            raise UnknownItemError(f"unknown practice {practice!r}")
        current = {c.practice for c in self._state.chosen}
        if practice in current:
            raise IneligiblePracticeError(f"practice {practice!r} is already chosen")
        candidate = next((c for c in self._state.candidates
                          if c.practice == practice), None)
        if candidate is None:
            raise IneligiblePracticeError(
                f"practice {practice!r} is not a candidate: its agreement in "
                "this subset is below the threshold")
        if not candidate.eligible:
            raise IneligiblePracticeError(
                f"adding {practice!r} would drop the minimal agreement to "
                f"{candidate.projected_agreement:.3f}, below the threshold "
                f"{self.threshold}")
        self.events.append(("add", practice))
        self._state = self._derive_state(self._surviving_sequence())
        return self._state

    def remove_practice(self, practice: str) -> ConstructionState:
        if practice in self.core:
            raise NotChosenError(
                f"practice {practice!r} is part of the session core")
        current = [c.practice for c in self._state.chosen if c.step > 0]
        if practice not in current:
            raise NotChosenError(f"practice {practice!r} is not chosen")
        self.events.append(("remove", practice))
        self._state = self._derive_state(self._surviving_sequence())
        return self._state

    def export(self) -> dict:
        """Hybrid-method descriptor for the current state."""
        state = self._state
        return {
            "frame": list(state.frame),
            "core": list(state.core),
            "practices": [e.as_dict() for e in state.chosen if e.step > 0],
            "final_min_agreement": state.min_agreement,
            "interval": ({"lower": state.interval.lower,
                          "upper": state.interval.upper}
                         if state.interval else None),
            "subset_n": state.subset_n,
            "filter": state.filter_text,
        }
