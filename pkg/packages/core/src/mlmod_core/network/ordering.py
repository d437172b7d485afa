from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from mlmod_core.enums import OrderingKind
from mlmod_core.errors import ContractViolation


@dataclass(frozen=True)
class OrderingScheme:
    """
    Which layer pairings are comparable.

    `permutation` overrides the declaration order of layers (a permutation of 0..l-1);
    `descending` walks that order backwards. Both are ignored by the unordered scheme.
    """

    kind: OrderingKind = OrderingKind.unordered
    permutation: tuple[int, ...] | None = None
    descending: bool = False

    @property
    def is_ordered(self) -> bool:
        return self.kind != OrderingKind.unordered

    def order(self, ell: int) -> tuple[int, ...]:
        return _order(self.permutation, self.descending, ell)

    def positions(self, ell: int) -> dict[int, int]:
        return {layer: idx for idx, layer in enumerate(self.order(ell))}

    def pairings(self, ell: int, layer: int) -> tuple[int, ...]:
        return _pairings(self, ell, layer)

    def pair_count(self, ell: int) -> int:
        """p = sum over layers of |P(L)|."""
        return sum(len(self.pairings(ell, layer)) for layer in range(ell))

    def label(self) -> str:
        if not self.is_ordered:
            return self.kind.value
        return f"{self.kind.value}-{'desc' if self.descending else 'asc'}"


@lru_cache(maxsize=256)
def _order(permutation: tuple[int, ...] | None, descending: bool, ell: int) -> tuple[int, ...]:
    if permutation is None:
        base = tuple(range(ell))
    else:
        if sorted(permutation) != list(range(ell)):
            raise ContractViolation(
                f"Layer permutation {permutation!r} is not a permutation of 0..{ell - 1}."
            )
        base = tuple(permutation)
    return tuple(reversed(base)) if descending else base


@lru_cache(maxsize=4096)
def _pairings(scheme: OrderingScheme, ell: int, layer: int) -> tuple[int, ...]:
    if layer < 0 or layer >= ell:
        raise ContractViolation(f"Layer id {layer} out of range for {ell} layers.")
    if scheme.kind == OrderingKind.unordered:
        return tuple(other for other in range(ell) if other != layer)
    order = scheme.order(ell)
    idx = order.index(layer)
    if scheme.kind == OrderingKind.adjacent:
        return order[idx + 1 : idx + 2]
    return order[idx + 1 :]
