from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import ResolutionKind
from mlmod_core.errors import ContractViolation
from mlmod_core.network.model import Edge, MultilayerNetwork

GAMMA_WITHOUT_REDUNDANCY = 2.0


@dataclass(frozen=True)
class ResolutionSpec:
    kind: ResolutionKind = ResolutionKind.redundancy
    value: float = 1.0

    def __post_init__(self) -> None:
        if self.kind == ResolutionKind.fixed and not self.value >= 0:
            raise ContractViolation(f"Fixed resolution must be >= 0, got {self.value!r}.")

    @classmethod
    def fixed(cls, value: float = 1.0) -> ResolutionSpec:
        return cls(kind=ResolutionKind.fixed, value=float(value))

    @classmethod
    def redundancy(cls) -> ResolutionSpec:
        return cls(kind=ResolutionKind.redundancy)

    @classmethod
    def parse(cls, text: str) -> ResolutionSpec:
        """`redundancy` or `fixed:<value>`."""
        text = text.strip().lower()
        if text == ResolutionKind.redundancy.value:
            return cls.redundancy()
        if text.startswith("fixed"):
            _, _, raw = text.partition(":")
            try:
                return cls.fixed(float(raw) if raw else 1.0)
            except ValueError:
                raise ContractViolation(f"Invalid fixed resolution value: {raw!r}.") from None
        raise ContractViolation(f"Unknown resolution {text!r} (use `redundancy` or `fixed:<v>`).")

    def label(self) -> str:
        if self.kind == ResolutionKind.fixed:
            return f"fixed:{self.value:g}"
        return self.kind.value


@dataclass(frozen=True)
class PairIndexEntry:
    """
    Linked entity pairs of one community: P1 with the supporting layers SL of each pair.
    A pair is collected when both entities belong to the community on some layer.
    """

    community: int
    supporting: Mapping[Edge, frozenset[int]] = field(default_factory=dict)

    @property
    def p1(self) -> frozenset[Edge]:
        return frozenset(self.supporting)

    @cached_property
    def p2(self) -> frozenset[Edge]:
        return frozenset(pair for pair, layers in self.supporting.items() if len(layers) >= 2)

    @cached_property
    def nrp_by_layer(self) -> dict[int, int]:
        counts: dict[int, int] = defaultdict(int)
        for pair in self.p2:
            for layer in self.supporting[pair]:
                counts[layer] += 1
        return dict(counts)

    def supporting_layers(self) -> frozenset[int]:
        return frozenset().union(*(self.supporting[pair] for pair in self.p2))


class RedundantPairIndex:
    def __init__(self, entries: Mapping[int, PairIndexEntry]) -> None:
        self._entries = dict(entries)

    @classmethod
    def build(cls, cs: CommunityStructure, net: MultilayerNetwork) -> RedundantPairIndex:
        """One pass over every layer's edges; each edge is filed under every community that
        holds both endpoints."""
        collected: list[dict[Edge, list[int]]] = [defaultdict(list) for _ in range(cs.k)]
        memberships = cs.entity_communities
        for layer in range(net.ell):
            for u, v in net.graphs[layer].edges:
                shared = memberships[u] & memberships[v]
                if not shared:
                    continue
                pair = (u, v) if u < v else (v, u)
                for c in shared:
                    collected[c][pair].append(layer)
        return cls(
            {
                c: PairIndexEntry(
                    community=c,
                    supporting={pair: frozenset(layers) for pair, layers in pairs.items()},
                )
                for c, pairs in enumerate(collected)
            }
        )

    def entry(self, community: int) -> PairIndexEntry:
        return self._entries[community]

    def __len__(self) -> int:
        return len(self._entries)


@lru_cache(maxsize=16)
def pair_index(cs: CommunityStructure, net: MultilayerNetwork) -> RedundantPairIndex:
    """Cached per (structure, network) object pair."""
    return RedundantPairIndex.build(cs, net)


def build_pair_index(
    cs: CommunityStructure, net: MultilayerNetwork, community: int
) -> PairIndexEntry:
    members = cs.entity_members(community)
    supporting: dict[Edge, set[int]] = defaultdict(set)
    for layer in range(net.ell):
        adj = net.graphs[layer].adj
        for u in members:
            if u not in adj:
                continue
            for v in adj[u]:
                if u < v and v in members:
                    supporting[(u, v)].add(layer)
    return PairIndexEntry(
        community=community,
        supporting={pair: frozenset(layers) for pair, layers in supporting.items()},
    )


def redundancy(cs: CommunityStructure, net: MultilayerNetwork, community: int) -> float:
    """rho(C) = sum over P2_C of |SL| / (l * |P1_C|); 0 when P1_C is empty."""
    entry = pair_index(cs, net).entry(community)
    if not entry.supporting:
        return 0.0
    total = sum(len(entry.supporting[pair]) for pair in entry.p2)
    return total / (net.ell * len(entry.supporting))


def supporting_layers(
    cs: CommunityStructure, net: MultilayerNetwork, community: int
) -> frozenset[int]:
    """sup(C, L): union of SL over the community's redundant pairs."""
    return pair_index(cs, net).entry(community).supporting_layers()


def nrp(cs: CommunityStructure, net: MultilayerNetwork, layer: int, community: int) -> int:
    """Number of the community's redundant pairs whose supporting layers include `layer`."""
    return pair_index(cs, net).entry(community).nrp_by_layer.get(layer, 0)


def gamma_from_nrp(count: int) -> float:
    return 2.0 / (1.0 + math.log2(1.0 + count))


def gamma(
    spec: ResolutionSpec,
    cs: CommunityStructure,
    net: MultilayerNetwork,
    layer: int,
    community: int,
) -> float:
    if spec.kind == ResolutionKind.fixed:
        return spec.value
    return gamma_from_nrp(nrp(cs, net, layer, community))
