"""Item universe: the selectable methods and practices of a survey instrument.

The catalog order is the canonical ordering used for every deterministic
tie-break in the mining, ranking and construction layers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .errors import UnknownItemError

METHOD_PREFIX = "PU09"
PRACTICE_PREFIX = "PU10"


class ItemKind(str, Enum):
    METHOD = "method"
    PRACTICE = "practice"


def kind_for_id(item_id: str) -> ItemKind:
    """Derive an item's kind from its variable-id prefix."""
    if item_id.startswith(METHOD_PREFIX):
        return ItemKind.METHOD
    if item_id.startswith(PRACTICE_PREFIX):
        return ItemKind.PRACTICE
    raise ValueError(f"cannot derive item kind from id {item_id!r}")


@dataclass(frozen=True)
class Item:
    id: str
    kind: ItemKind
    label: str


class ItemCatalog:
    """Ordered, immutable collection of selectable items."""

    def __init__(self, items: Iterable[Item]):
        self._items: tuple[Item, ...] = tuple(items)
        self._index: dict[str, int] = {}
        for pos, item in enumerate(self._items):
            if item.id in self._index:
                raise ValueError(f"duplicate item id {item.id!r}")
            if kind_for_id(item.id) != item.kind:
                raise ValueError(f"item {item.id!r} declared as {item.kind.value} "
                                 f"but its id prefix says otherwise")
            self._index[item.id] = pos
        self._by_label = {}
        for item in self._items:
            self._by_label.setdefault(item.label.casefold(), []).append(item)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Item]:
        return iter(self._items)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._index

    @property
    def items(self) -> tuple[Item, ...]:
        return self._items

    def get(self, item_id: str) -> Item:
        try:
            return self._items[self._index[item_id]]
        except KeyError:
            raise UnknownItemError(f"unknown item id {item_id!r}") from None

    def index_of(self, item_id: str) -> int:
        try:
            return self._index[item_id]
        except KeyError:
            raise UnknownItemError(f"unknown item id {item_id!r}") from None

    def of_kind(self, kind: ItemKind) -> tuple[Item, ...]:
        return tuple(item for item in self._items if item.kind == kind)

    def ids_of_kind(self, kind: ItemKind) -> tuple[str, ...]:
        return tuple(item.id for item in self._items if item.kind == kind)

    def label_of(self, item_id: str) -> str:
        return self.get(item_id).label

    def resolve(self, token: str) -> str:
        """Map an item id or a unique label (case-insensitive) to the item id."""
        if token in self._index:
            return token
        matches = self._by_label.get(token.casefold(), [])
        if len(matches) == 1:
            return matches[0].id
        if not matches:
            raise UnknownItemError(f"no item with id or label {token!r}")
        raise UnknownItemError(f"label {token!r} is ambiguous")

    def resolve_many(self, tokens: Iterable[str]) -> tuple[str, ...]:
        return tuple(self.resolve(t) for t in tokens)

    def sort_members(self, item_ids: Iterable[str]) -> tuple[str, ...]:
        """Canonicalize a member collection: dedupe and sort by catalog order."""
        return tuple(sorted(set(item_ids), key=self.index_of))

    @classmethod
    def from_json(cls, source: str | Path | dict) -> "ItemCatalog":
        if isinstance(source, (str, Path)):
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        else:
            data = source
        items = [Item(id=entry["id"], kind=ItemKind(entry["kind"]), label=entry["label"])
                 for entry in data["items"]]
        return cls(items)

    def to_json(self) -> dict:
        return {"items": [{"id": i.id, "kind": i.kind.value, "label": i.label}
                          for i in self._items]}


def default_catalog() -> ItemCatalog:
    """The bundled catalog for the HELENA stage-2 variable scheme.

    Ships 24 framework/method items (PU09 block) and 36 practice items
    (PU10 block). Item ids follow the survey's variable naming; labels are
    a best-effort reconstruction and can be replaced by loading a custom
    catalog JSON.
    """
    ref = resources.files("hybridmethods").joinpath("data/helena_catalog.json")
    return ItemCatalog.from_json(json.loads(ref.read_text(encoding="utf-8")))
