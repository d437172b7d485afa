from __future__ import annotations

import math
import statistics
from collections.abc import Set
from dataclasses import dataclass, field

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import CouplingVariant
from mlmod_core.errors import ContractViolation
from mlmod_core.network.model import MultilayerNetwork
from mlmod_core.network.ordering import OrderingScheme


@dataclass(frozen=True)
class CouplingSpec:
    beta: int = 1
    variant: CouplingVariant = CouplingVariant.symmetric
    time_aware: bool = False
    scheme: OrderingScheme = field(default_factory=OrderingScheme)

    def __post_init__(self) -> None:
        if self.beta not in (0, 1):
            raise ContractViolation(f"beta must be 0 or 1, got {self.beta!r}.")
        if self.time_aware and not self.scheme.is_ordered:
            raise ContractViolation(
                "Time-aware coupling needs an ordered scheme (adjacent or succeeding)."
            )

    @classmethod
    def none(cls, scheme: OrderingScheme | None = None) -> CouplingSpec:
        return cls(beta=0, scheme=scheme or OrderingScheme())

    def label(self) -> str:
        if not self.beta:
            return "none"
        parts = [self.variant.value, self.scheme.label()]
        if self.time_aware:
            parts.append("time")
        return "/".join(parts)


@dataclass(frozen=True)
class CouplingSummary:
    community: int
    total: float
    pairings: int
    mean: float
    std: float
    nonempty_pairings: int
    mean_nonempty: float


def sym_value(ci: Set[int], cj: Set[int], shared: int) -> float:
    """|C^(i) ∩ C^(j)| / |V_i ∩ V_j|, 0 when the layers share nothing or a projection is empty.
    """
    if not shared or not ci or not cj:
        return 0.0
    return len(ci & cj) / shared


def asym_value(ci: Set[int], cj: Set[int], shared: int, size_i: int) -> float:
    """sym_value scaled by |V_i| / |C^(i)|, evaluated as one integer ratio."""
    if not shared or not ci or not cj:
        return 0.0
    return len(ci & cj) * size_i / (shared * len(ci))


def coupling_value(
    variant: CouplingVariant,
    ci: Set[int],
    cj: Set[int],
    shared: int,
    size_i: int,
    size_j: int,
) -> float:
    """Untimed IC of a projection pair (C^(i), C^(j)) for layer sizes |V_i|, |V_j|."""
    if variant == CouplingVariant.symmetric:
        return sym_value(ci, cj, shared)
    if variant == CouplingVariant.asymmetric_inner:
        return asym_value(ci, cj, shared, size_i)
    return asym_value(cj, ci, shared, size_j)


def ic_sym(
    cs: CommunityStructure, net: MultilayerNetwork, community: int, li: int, lj: int
) -> float:
    return sym_value(cs.members(community, li), cs.members(community, lj), net.shared_count(li, lj))


def ic_asym(
    cs: CommunityStructure, net: MultilayerNetwork, community: int, li: int, lj: int
) -> float:
    """ic_sym scaled by |V_i| / |C^(i)|: the chance C lies on L_j given it lies on L_i."""
    return asym_value(
        cs.members(community, li),
        cs.members(community, lj),
        net.shared_count(li, lj),
        len(net.layer_nodes[li]),
    )


def time_factor(i: int, j: int) -> float:
    distance = abs(j - i)
    if distance == 0:
        raise ContractViolation("time_factor needs two distinct order positions.")
    return 2.0 / (1.0 + math.log2(1.0 + distance))


def ic(
    spec: CouplingSpec,
    cs: CommunityStructure,
    net: MultilayerNetwork,
    community: int,
    layer: int,
    other: int,
) -> float:
    if other not in spec.scheme.pairings(net.ell, layer):
        raise ContractViolation(
            f"Layer {other} is not a valid pairing of layer {layer} under {spec.scheme.label()}."
        )
    value = coupling_value(
        spec.variant,
        cs.members(community, layer),
        cs.members(community, other),
        net.shared_count(layer, other),
        len(net.layer_nodes[layer]),
        len(net.layer_nodes[other]),
    )
    if spec.time_aware and value:
        positions = spec.scheme.positions(net.ell)
        value *= time_factor(positions[layer], positions[other])
    return value


def coupling_summary(
    cs: CommunityStructure, net: MultilayerNetwork, community: int, spec: CouplingSpec
) -> CouplingSummary:
    """
    IC cumulated over the admissible pairings of one community. `mean` divides by every
    pairing; `mean_nonempty` only by pairings where both projections are non-empty.
    """
    values: list[float] = []
    nonempty: list[float] = []
    for layer in range(net.ell):
        for other in spec.scheme.pairings(net.ell, layer):
            value = ic(spec, cs, net, community, layer, other)
            values.append(value)
            if cs.members(community, layer) and cs.members(community, other):
                nonempty.append(value)
    total = math.fsum(values)
    return CouplingSummary(
        community=community,
        total=total,
        pairings=len(values),
        mean=total / len(values) if values else 0.0,
        std=statistics.pstdev(values) if values else 0.0,
        nonempty_pairings=len(nonempty),
        mean_nonempty=math.fsum(nonempty) / len(nonempty) if nonempty else 0.0,
    )
