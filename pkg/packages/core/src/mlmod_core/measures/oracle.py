from __future__ import annotations

import math

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import CouplingVariant, OrderingKind, ResolutionKind
from mlmod_core.errors import DegenerateInputError, SizeGuardError
from mlmod_core.measures.coupling import CouplingSpec
from mlmod_core.measures.resolution import ResolutionSpec
from mlmod_core.network.model import MultilayerNetwork
from mlmod_core.settings import settings


def _oracle_pairings(cspec: CouplingSpec, ell: int) -> tuple[list[int], dict[int, list[int]]]:
    scheme = cspec.scheme
    order = list(scheme.permutation) if scheme.permutation is not None else list(range(ell))
    if scheme.descending:
        order.reverse()
    pairings: dict[int, list[int]] = {}
    for pos, layer in enumerate(order):
        if scheme.kind == OrderingKind.unordered:
            pairings[layer] = [x for x in range(ell) if x != layer]
        elif scheme.kind == OrderingKind.adjacent:
            pairings[layer] = order[pos + 1 : pos + 2]
        else:
            pairings[layer] = order[pos + 1 :]
    return order, pairings


def q_oracle(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    rspec: ResolutionSpec,
    cspec: CouplingSpec,
) -> float:
    """
    Multilayer Q by direct enumeration over every entity pair and every layer pair.
    Only for cross-checking q_multilayer on small instances.
    """
    n, ell = net.n, net.ell
    if n * ell > settings.oracle_max_occurrences:
        raise SizeGuardError(
            f"Oracle refused n*l = {n * ell} > {settings.oracle_max_occurrences} occurrences."
        )

    present = [[net.graphs[layer].has_node(u) for u in range(n)] for layer in range(ell)]
    adjacency = [
        [[1 if net.graphs[layer].has_edge(u, v) else 0 for v in range(n)] for u in range(n)]
        for layer in range(ell)
    ]
    label = [
        [cs.assignment[(u, layer)] if present[layer][u] else -1 for u in range(n)]
        for layer in range(ell)
    ]
    order, pairings = _oracle_pairings(cspec, ell)
    position = {layer: pos for pos, layer in enumerate(order)}

    normalizer = 0
    for layer in range(ell):
        for u in range(n):
            for v in range(n):
                normalizer += adjacency[layer][u][v]
    if cspec.beta:
        for layer in range(ell):
            for other in pairings[layer]:
                for u in range(n):
                    if present[layer][u] and present[other][u]:
                        normalizer += 1
    if not normalizer:
        raise DegenerateInputError("Total degree d(V_L) is zero; Q is undefined.")

    communities = sorted({c for row in label for c in row if c >= 0})
    total: list[float] = []
    for c in communities:
        members = [[label[layer][u] == c for u in range(n)] for layer in range(ell)]
        anywhere = [any(members[layer][u] for layer in range(ell)) for u in range(n)]

        participation = [0] * ell
        for u in range(n):
            for v in range(u + 1, n):
                if not (anywhere[u] and anywhere[v]):
                    continue
                linked = [layer for layer in range(ell) if adjacency[layer][u][v]]
                if len(linked) >= 2:
                    for layer in linked:
                        participation[layer] += 1

        for layer in range(ell):
            d_c = 0
            d_int = 0
            for u in range(n):
                if not members[layer][u]:
                    continue
                for v in range(n):
                    d_c += adjacency[layer][u][v]
                    if members[layer][v]:
                        d_int += adjacency[layer][u][v]
            if rspec.kind == ResolutionKind.fixed:
                g = rspec.value
            else:
                g = 2.0 / (1.0 + math.log2(1.0 + participation[layer]))
            total.append((d_int - g * d_c * d_c / normalizer) / normalizer)

            if not cspec.beta:
                continue
            for other in pairings[layer]:
                value = _oracle_ic(cspec.variant, members, present, layer, other, n)
                if cspec.time_aware and value:
                    distance = abs(position[other] - position[layer])
                    value *= 2.0 / (1.0 + math.log2(1.0 + distance))
                total.append(value / normalizer)
    return math.fsum(total)


def _oracle_ic(
    variant: CouplingVariant,
    members: list[list[bool]],
    present: list[list[bool]],
    layer: int,
    other: int,
    n: int,
) -> float:
    if variant == CouplingVariant.asymmetric_outer:
        layer, other = other, layer
    both = sum(1 for u in range(n) if members[layer][u] and members[other][u])
    shared = sum(1 for u in range(n) if present[layer][u] and present[other][u])
    size_c = sum(1 for u in range(n) if members[layer][u])
    size_v = sum(1 for u in range(n) if present[layer][u])
    if not shared or not size_c or not any(members[other]):
        return 0.0
    value = both / shared
    if variant != CouplingVariant.symmetric:
        value *= size_v / size_c
    return value
