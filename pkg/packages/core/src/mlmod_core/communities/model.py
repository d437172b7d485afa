from __future__ import annotations

import sys
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from mlmod_core.errors import CommunityAssignmentError
from mlmod_core.network.model import MultilayerNetwork

Occurrence = tuple[int, int]  # (entity, layer)


@dataclass(frozen=True)
class Projection:
    community: int
    layer: int
    members: frozenset[int]


@dataclass(frozen=True, eq=False)
class CommunityStructure:
    """
    A partition of the occupied (entity, layer) pairs of one network into communities
    0..k-1. Use `from_assignment` to build a validated instance.
    """

    assignment: Mapping[Occurrence, int]
    labels: tuple[str, ...]
    ell: int

    @classmethod
    def from_assignment(
        cls,
        net: MultilayerNetwork,
        assignment: Mapping[Occurrence, int],
        *,
        labels: Sequence[str] | None = None,
    ) -> CommunityStructure:
        """
        Validate totality over V_L and densify ids. Community ids unused by any occurrence are
        dropped (reported on stderr); remaining ids keep their relative order.
        """
        for u, layer in assignment:
            if layer < 0 or layer >= net.ell or u not in net.layer_nodes[layer]:
                raise CommunityAssignmentError(
                    f"Assignment for ({_entity(net, u)!r}, {_layer(net, layer)!r}) refers to an "
                    "entity that is not present on that layer."
                )
        for layer, nodes in enumerate(net.layer_nodes):
            for u in sorted(nodes):
                if (u, layer) not in assignment:
                    raise CommunityAssignmentError(
                        f"Missing community assignment for "
                        f"({net.entity_labels[u]!r}, {net.layer_labels[layer]!r})."
                    )

        used = sorted(set(assignment.values()))
        declared = len(labels) if labels is not None else (used[-1] + 1 if used else 0)
        if labels is None:
            labels = [str(c) for c in range(declared)]
        dropped = declared - len(used)
        if dropped > 0:
            print(f"[communities] dropped_empty={dropped}", file=sys.stderr)
        remap = {old: new for new, old in enumerate(used)}
        dense = {occ: remap[c] for occ, c in sorted(assignment.items())}
        return cls(
            assignment=dense,
            labels=tuple(labels[old] for old in used),
            ell=net.ell,
        )

    @classmethod
    def from_entity_mapping(
        cls,
        net: MultilayerNetwork,
        mapping: Mapping[int, int],
        *,
        labels: Sequence[str] | None = None,
    ) -> CommunityStructure:
        """Replicate an entity-level assignment to every layer where the entity is present."""
        assignment = {
            (u, layer): mapping[u]
            for u, present in enumerate(net.entity_layers)
            if u in mapping
            for layer in present
        }
        return cls.from_assignment(net, assignment, labels=labels)

    @property
    def k(self) -> int:
        return len(self.labels)

    def community_of(self, u: int, layer: int) -> int:
        return self.assignment[(u, layer)]

    @cached_property
    def _projections(self) -> tuple[tuple[frozenset[int], ...], ...]:
        buckets: list[list[set[int]]] = [[set() for _ in range(self.ell)] for _ in range(self.k)]
        for (u, layer), c in self.assignment.items():
            buckets[c][layer].add(u)
        return tuple(tuple(frozenset(s) for s in per_layer) for per_layer in buckets)

    def members(self, community: int, layer: int) -> frozenset[int]:
        """C^(layer): the entities of `community` present on `layer`."""
        return self._projections[community][layer]

    def occurrences(self, community: int) -> list[Occurrence]:
        return [
            (u, layer)
            for layer, members in enumerate(self._projections[community])
            for u in sorted(members)
        ]

    @cached_property
    def _entity_members(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset().union(*per_layer) for per_layer in self._projections)

    def entity_members(self, community: int) -> frozenset[int]:
        """Entities belonging to `community` on at least one layer."""
        return self._entity_members[community]

    @cached_property
    def entity_communities(self) -> dict[int, frozenset[int]]:
        grouped: dict[int, set[int]] = {}
        for (u, _), c in self.assignment.items():
            grouped.setdefault(u, set()).add(c)
        return {u: frozenset(cs) for u, cs in grouped.items()}

    def relabeled(self, net: MultilayerNetwork, order: Sequence[int]) -> CommunityStructure:
        """Same partition with community `order[i]` renamed to i."""
        remap = {old: new for new, old in enumerate(order)}
        return CommunityStructure.from_assignment(
            net,
            {occ: remap[c] for occ, c in self.assignment.items()},
            labels=[self.labels[old] for old in order],
        )


def projection(
    cs: CommunityStructure, net: MultilayerNetwork, community: int, layer: int
) -> Projection:
    return Projection(community=community, layer=layer, members=cs.members(community, layer))


def community_layer_degrees(
    cs: CommunityStructure, net: MultilayerNetwork, community: int, layer: int
) -> tuple[int, int]:
    """(d_L(C), d_L^int(C)); the internal degree counts both endpoints of each internal edge."""
    members = cs.members(community, layer)
    graph = net.graphs[layer]
    d_total = 0
    d_internal = 0
    for u in members:
        for v in graph.adj[u]:
            d_total += 1
            if v in members:
                d_internal += 1
    return d_total, d_internal


def majority_vote(cs: CommunityStructure, net: MultilayerNetwork) -> CommunityStructure:
    """
    Entity-level structure: each entity goes to the community holding most of its layer
    occurrences (ties to the lowest id), replicated on every layer the entity is present on.
    """
    mapping: dict[int, int] = {}
    for u, present in enumerate(net.entity_layers):
        votes = Counter(cs.community_of(u, layer) for layer in present)
        best = max(votes.values())
        mapping[u] = min(c for c, count in votes.items() if count == best)
    order: dict[int, int] = {}
    for u in range(net.n):
        order.setdefault(mapping[u], len(order))
    return CommunityStructure.from_entity_mapping(
        net,
        {u: order[c] for u, c in mapping.items()},
        labels=[cs.labels[c] for c in sorted(order, key=order.__getitem__)],
    )


def _entity(net: MultilayerNetwork, u: int) -> str:
    return net.entity_labels[u] if 0 <= u < net.n else str(u)


def _layer(net: MultilayerNetwork, layer: int) -> str:
    return net.layer_labels[layer] if 0 <= layer < net.ell else str(layer)
