from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from mlmod_core.errors import NetworkValidationError
from mlmod_core.network.ordering import OrderingScheme

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class MultilayerNetwork:
    """
    G_L = (V_L, E_L, V, L): entities 0..n-1, layers 0..l-1 (declaration order),
    one frozen undirected simple graph per layer whose node set is V_i.

    Inter-layer couplings are implicit: the same entity on two layers.
    """

    entity_labels: tuple[str, ...]
    layer_labels: tuple[str, ...]
    graphs: tuple[nx.Graph, ...]

    def __post_init__(self) -> None:
        if len(self.graphs) != len(self.layer_labels):
            raise NetworkValidationError(
                f"{len(self.graphs)} layer graphs for {len(self.layer_labels)} layer labels."
            )
        n = len(self.entity_labels)
        covered: set[int] = set()
        for layer, graph in enumerate(self.graphs):
            for u in graph.nodes:
                if not isinstance(u, int) or u < 0 or u >= n:
                    raise NetworkValidationError(
                        f"Layer {self.layer_labels[layer]!r} has node {u!r} outside 0..{n - 1}."
                    )
            for u, v in graph.edges:
                if u == v:
                    raise NetworkValidationError(
                        f"Self-loop on entity {self.entity_labels[u]!r} "
                        f"in layer {self.layer_labels[layer]!r}."
                    )
            covered.update(graph.nodes)
        missing = sorted(set(range(n)) - covered)
        if missing:
            names = ", ".join(repr(self.entity_labels[u]) for u in missing[:5])
            raise NetworkValidationError(
                f"{len(missing)} entities are present in no layer (e.g. {names})."
            )

    @classmethod
    def build(
        cls,
        *,
        entity_labels: Sequence[str],
        layer_labels: Sequence[str],
        layer_nodes: Sequence[Iterable[int]],
        layer_edges: Sequence[Iterable[Edge]],
    ) -> MultilayerNetwork:
        graphs = []
        for nodes, edges in zip(layer_nodes, layer_edges, strict=True):
            graph = nx.Graph()
            graph.add_nodes_from(sorted(set(nodes)))
            for u, v in edges:
                if u == v:
                    raise NetworkValidationError(f"Self-loop on entity id {u}.")
                graph.add_edge(u, v)
            graphs.append(nx.freeze(graph))
        return cls(
            entity_labels=tuple(entity_labels),
            layer_labels=tuple(layer_labels),
            graphs=tuple(graphs),
        )

    @property
    def n(self) -> int:
        return len(self.entity_labels)

    @property
    def ell(self) -> int:
        return len(self.layer_labels)

    @cached_property
    def layer_nodes(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(graph.nodes) for graph in self.graphs)

    def layer_edges(self, layer: int) -> list[Edge]:
        return sorted(normalize_edge(u, v) for u, v in self.graphs[layer].edges)

    def edge_count(self, layer: int) -> int:
        return self.graphs[layer].number_of_edges()

    def has_edge(self, u: int, v: int, layer: int) -> bool:
        return self.graphs[layer].has_edge(u, v)

    @cached_property
    def entity_layers(self) -> tuple[tuple[int, ...], ...]:
        present: list[list[int]] = [[] for _ in range(self.n)]
        for layer, nodes in enumerate(self.layer_nodes):
            for u in nodes:
                present[u].append(layer)
        return tuple(tuple(layers) for layers in present)

    @cached_property
    def _shared(self) -> tuple[tuple[int, ...], ...]:
        nodes = self.layer_nodes
        ell = self.ell
        return tuple(tuple(len(nodes[i] & nodes[j]) for j in range(ell)) for i in range(ell))

    def shared_count(self, li: int, lj: int) -> int:
        """|V_i ∩ V_j|."""
        return self._shared[li][lj]

    def signature(self) -> tuple:
        return (
            self.entity_labels,
            self.layer_labels,
            tuple(tuple(sorted(nodes)) for nodes in self.layer_nodes),
            tuple(tuple(self.layer_edges(layer)) for layer in range(self.ell)),
        )


def degree(net: MultilayerNetwork, u: int, layer: int) -> int:
    graph = net.graphs[layer]
    return graph.degree(u) if u in graph else 0


def total_degree(net: MultilayerNetwork, scheme: OrderingScheme, beta: int) -> int:
    """
    d(V_L). With beta=1 every directed valid pairing (L, L') adds |V_L ∩ V_L'|, i.e. one
    unit of coupling degree per shared entity.
    """
    within = sum(2 * net.edge_count(layer) for layer in range(net.ell))
    if not beta:
        return within
    coupling = sum(
        net.shared_count(layer, other)
        for layer in range(net.ell)
        for other in scheme.pairings(net.ell, layer)
    )
    return within + coupling
