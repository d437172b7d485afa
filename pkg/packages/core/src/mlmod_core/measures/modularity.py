from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import ResolutionKind
from mlmod_core.errors import ContractViolation, DegenerateInputError
from mlmod_core.measures.coupling import CouplingSpec, ic
from mlmod_core.measures.resolution import ResolutionSpec, gamma, pair_index
from mlmod_core.network.model import MultilayerNetwork, total_degree
from mlmod_core.parallel import ordered_map


@dataclass(frozen=True)
class QReport:
    """Q together with every intermediate it was computed from."""

    q_global: float
    per_community: dict[int, float]
    gamma_values: dict[tuple[int, int], float]
    ic_values: dict[tuple[int, int, int], float]
    normalizer: int
    resolution: ResolutionSpec
    coupling: CouplingSpec
    community_labels: tuple[str, ...] = field(default=())

    def to_dict(self, net: MultilayerNetwork) -> dict[str, Any]:
        def community_name(c: int) -> str:
            return self.community_labels[c] if c < len(self.community_labels) else str(c)

        scheme = self.coupling.scheme
        return {
            "q_global": self.q_global,
            "normalizer": self.normalizer,
            "resolution": self.resolution.label(),
            "coupling": {
                "beta": self.coupling.beta,
                "variant": self.coupling.variant.value,
                "time_aware": self.coupling.time_aware,
                "ordering": scheme.kind.value,
                "descending": scheme.descending,
            },
            "per_community": [
                {"community": community_name(c), "contribution": value}
                for c, value in sorted(self.per_community.items())
            ],
            "gamma_values": [
                {
                    "layer": net.layer_labels[layer],
                    "community": community_name(c),
                    "gamma": value,
                }
                for (layer, c), value in sorted(self.gamma_values.items())
            ],
            "ic_values": [
                {
                    "community": community_name(c),
                    "layer": net.layer_labels[layer],
                    "paired_layer": net.layer_labels[other],
                    "ic": value,
                }
                for (c, layer, other), value in sorted(self.ic_values.items())
            ],
        }


def layer_degree_table(
    net: MultilayerNetwork, cs: CommunityStructure
) -> tuple[list[list[int]], list[list[int]]]:
    """d[L][C] and d_int[L][C], one pass over each layer's edges."""
    degrees = [[0] * cs.k for _ in range(net.ell)]
    internal = [[0] * cs.k for _ in range(net.ell)]
    for layer, graph in enumerate(net.graphs):
        d = degrees[layer]
        dint = internal[layer]
        for u, v in graph.edges:
            cu = cs.community_of(u, layer)
            cv = cs.community_of(v, layer)
            d[cu] += 1
            d[cv] += 1
            if cu == cv:
                dint[cu] += 2
    return degrees, internal


def q_ng(net: MultilayerNetwork, cs: CommunityStructure, layer: int | None = None) -> float:
    """
    Newman-Girvan modularity of a single layer: sum over C of d_int(C)/d(V) - (d(C)/d(V))^2.
    `layer` may be omitted only for single-layer networks.
    """
    if layer is None:
        if net.ell != 1:
            raise ContractViolation(f"q_ng needs a designated layer on a {net.ell}-layer network.")
        layer = 0
    total = 2 * net.edge_count(layer)
    if not total:
        raise DegenerateInputError(
            f"Layer {net.layer_labels[layer]!r} has no edges; Q is undefined."
        )
    degrees, internal = layer_degree_table(net, cs)
    return math.fsum(
        internal[layer][c] / total - (degrees[layer][c] / total) ** 2 for c in range(cs.k)
    )


def q_multilayer(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    rspec: ResolutionSpec,
    cspec: CouplingSpec,
    *,
    workers: int | None = None,
) -> QReport:
    normalizer = total_degree(net, cspec.scheme, cspec.beta)
    if not normalizer:
        raise DegenerateInputError("Total degree d(V_L) is zero; Q is undefined.")
    degrees, internal = layer_degree_table(net, cs)
    if rspec.kind == ResolutionKind.redundancy:
        pair_index(cs, net)

    def contribution(c: int) -> tuple[float, dict, dict]:
        terms: list[float] = []
        gammas: dict[tuple[int, int], float] = {}
        couplings: dict[tuple[int, int, int], float] = {}
        for layer in range(net.ell):
            if cs.members(c, layer):
                g = gamma(rspec, cs, net, layer, c)
                gammas[(layer, c)] = g
                terms.append(internal[layer][c] - g * degrees[layer][c] ** 2 / normalizer)
            if cspec.beta:
                for other in cspec.scheme.pairings(net.ell, layer):
                    value = ic(cspec, cs, net, c, layer, other)
                    couplings[(c, layer, other)] = value
                    terms.append(value)
        return math.fsum(terms) / normalizer, gammas, couplings

    results = ordered_map(contribution, range(cs.k), workers)
    per_community: dict[int, float] = {}
    gamma_values: dict[tuple[int, int], float] = {}
    ic_values: dict[tuple[int, int, int], float] = {}
    for c, (value, gammas, couplings) in enumerate(results):
        per_community[c] = value
        gamma_values.update(gammas)
        ic_values.update(couplings)
    return QReport(
        q_global=math.fsum(per_community[c] for c in range(cs.k)),
        per_community=per_community,
        gamma_values=gamma_values,
        ic_values=ic_values,
        normalizer=normalizer,
        resolution=rspec,
        coupling=cspec,
        community_labels=cs.labels,
    )
