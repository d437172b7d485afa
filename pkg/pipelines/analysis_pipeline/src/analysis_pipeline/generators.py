from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import networkx as nx

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.errors import ContractViolation, FormatError, NetworkValidationError
from mlmod_core.identity import LabelIndex
from mlmod_core.network.io import iter_records, split_fields
from mlmod_core.network.model import MultilayerNetwork

# Synthetic benchmark defaults: 4 groups, average degree 16, mixing 0.1.
BENCH_GROUPS = 4
BENCH_DEGREE = 16.0
BENCH_MIXING = 0.1

RECIPES = ("er-er", "gn-er-gn-er", "gn-er-er-gn", "replicated")


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ContractViolation(f"{name} must lie in [0, 1], got {value!r}.")


def gen_er(n: int, edge_prob: float, seed: int) -> nx.Graph:
    _check_probability("edge_prob", edge_prob)
    return nx.gnp_random_graph(n, edge_prob, seed=seed)


def gen_planted(n: int, k: int, p_in: float, p_out: float, seed: int) -> nx.Graph:
    """k equal blocks of consecutive node ids; p_in inside a block, p_out across blocks."""
    _check_probability("p_in", p_in)
    _check_probability("p_out", p_out)
    if k < 1 or n % k:
        raise ContractViolation(f"n={n} is not divisible into {k} equal blocks.")
    sizes = [n // k] * k
    probs = [[p_in if i == j else p_out for j in range(k)] for i in range(k)]
    return nx.Graph(nx.stochastic_block_model(sizes, probs, seed=seed))


def mixing_probabilities(n: int, k: int, avg_degree: float, mixing: float) -> tuple[float, float]:
    """(p_in, p_out) giving expected degree `avg_degree` with a `mixing` share of it external."""
    if k < 2 or n % k or n // k < 2:
        raise ContractViolation(f"Need k >= 2 blocks of >= 2 nodes, got n={n}, k={k}.")
    _check_probability("mixing", mixing)
    block = n // k
    p_in = (1.0 - mixing) * avg_degree / (block - 1)
    p_out = mixing * avg_degree / (n - block)
    if p_in > 1.0 or p_out > 1.0:
        raise ContractViolation(
            f"Average degree {avg_degree} is not reachable with n={n}, k={k}, mixing={mixing}."
        )
    return p_in, p_out


def gen_mixing(n: int, k: int, avg_degree: float, mixing: float, seed: int) -> nx.Graph:
    p_in, p_out = mixing_probabilities(n, k, avg_degree, mixing)
    return gen_planted(n, k, p_in, p_out, seed)


def load_layer_graph(path: Path | str) -> nx.Graph:
    """Single-layer `<u> <v>` edge list (e.g. output of an external benchmark generator)."""
    path = Path(path)
    if not path.exists():
        raise FormatError("File not found.", path=path)
    graph = nx.Graph()
    for line_no, text in iter_records(path):
        fields = split_fields(text)
        if len(fields) < 2:
            raise FormatError("Expected `<u> <v>`.", path=path, line_no=line_no)
        u, v = fields[0], fields[1]
        if u == v:
            raise NetworkValidationError(f"Self-loop on {u!r}.", path=path, line_no=line_no)
        graph.add_edge(u, v)
    return graph


def _ordered_nodes(graph: nx.Graph) -> list:
    try:
        return sorted(graph.nodes)
    except TypeError:
        return sorted(graph.nodes, key=str)


def compose_layers(
    graphs: Sequence[nx.Graph],
    *,
    replicate: int = 1,
    layer_labels: Sequence[str] | None = None,
) -> MultilayerNetwork:
    """
    Stack single-layer graphs over one entity universe (nodes matched by label). With
    replicate > 1 the whole stack is repeated.
    """
    if replicate < 1:
        raise ContractViolation(f"replicate must be >= 1, got {replicate}.")
    stack = list(graphs) * replicate
    if layer_labels is None:
        layer_labels = [f"L{layer + 1}" for layer in range(len(stack))]
    elif len(layer_labels) != len(stack):
        raise ContractViolation(f"{len(layer_labels)} layer labels for {len(stack)} layers.")

    entities = LabelIndex()
    layer_nodes: list[list[int]] = []
    layer_edges: list[list[tuple[int, int]]] = []
    for graph in stack:
        ids = {node: entities.intern(str(node)) for node in _ordered_nodes(graph)}
        layer_nodes.append(list(ids.values()))
        layer_edges.append([(ids[u], ids[v]) for u, v in graph.edges if u != v])
    return MultilayerNetwork.build(
        entity_labels=entities.labels(),
        layer_labels=layer_labels,
        layer_nodes=layer_nodes,
        layer_edges=layer_edges,
    )


def planted_structure(net: MultilayerNetwork, k: int) -> CommunityStructure:
    """k contiguous, near-equal blocks of entity ids, replicated on every layer."""
    if not 1 <= k <= net.n:
        raise ContractViolation(f"k must lie in 1..{net.n}, got {k}.")
    return CommunityStructure.from_entity_mapping(
        net,
        {u: u * k // net.n for u in range(net.n)},
        labels=[f"B{block + 1}" for block in range(k)],
    )


def recipe(name: str, seed: int, *, n: int | None = None, layers: int = 2) -> MultilayerNetwork:
    """
    Named synthetic networks: `er-er` (2 ER layers, 256 entities), `gn-er-gn-er` and
    `gn-er-er-gn` (4 layers, 128 entities; GN = 4 groups of 32, average degree 16),
    `replicated` (one GN layer repeated `layers` times).
    """
    def er(size: int, offset: int) -> nx.Graph:
        return gen_er(size, BENCH_DEGREE / (size - 1), seed + offset)

    def gn(size: int, offset: int) -> nx.Graph:
        return gen_mixing(size, BENCH_GROUPS, BENCH_DEGREE, BENCH_MIXING, seed + offset)

    if name == "er-er":
        size = n or 256
        return compose_layers([er(size, 0), er(size, 1)], layer_labels=["ER1", "ER2"])
    if name in ("gn-er-gn-er", "gn-er-er-gn"):
        size = n or 128
        kinds = name.split("-")
        graphs = [
            gn(size, idx) if kind == "gn" else er(size, idx) for idx, kind in enumerate(kinds)
        ]
        labels = [f"{kind.upper()}{idx + 1}" for idx, kind in enumerate(kinds)]
        return compose_layers(graphs, layer_labels=labels)
    if name == "replicated":
        return compose_layers([gn(n or 128, 0)], replicate=layers)
    raise ContractViolation(f"Unknown recipe {name!r} (choose from {', '.join(RECIPES)}).")
