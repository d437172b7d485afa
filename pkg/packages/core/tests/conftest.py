from __future__ import annotations

import random
from collections.abc import Callable, Iterable, Sequence

import pytest

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.network.model import MultilayerNetwork

NetFactory = Callable[..., MultilayerNetwork]


def build_net(
    layer_edges: Sequence[Iterable[tuple[int, int]]],
    *,
    n: int | None = None,
    layer_nodes: Sequence[Iterable[int]] | None = None,
) -> MultilayerNetwork:
    edges = [list(e) for e in layer_edges]
    if layer_nodes is None:
        layer_nodes = [{u for edge in e for u in edge} for e in edges]
    else:
        layer_nodes = [
            set(nodes) | {u for edge in e for u in edge}
            for nodes, e in zip(layer_nodes, edges, strict=True)
        ]
    if n is None:
        n = max((max(nodes) for nodes in layer_nodes if nodes), default=-1) + 1
    return MultilayerNetwork.build(
        entity_labels=[f"v{u}" for u in range(n)],
        layer_labels=[f"L{layer + 1}" for layer in range(len(edges))],
        layer_nodes=layer_nodes,
        layer_edges=edges,
    )


def random_instance(
    seed: int, *, max_n: int = 12, max_ell: int = 4, max_k: int = 4
) -> tuple[MultilayerNetwork, CommunityStructure]:
    """Random coverage, random edges, random occurrence-level communities; at least one edge."""
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    ell = rng.randint(1, max_ell)
    coverage = rng.uniform(0.4, 1.0)
    density = rng.uniform(0.15, 0.7)
    nodes = [{u for u in range(n) if rng.random() < coverage} for _ in range(ell)]
    for u in range(n):
        if not any(u in layer for layer in nodes):
            nodes[rng.randrange(ell)].add(u)
    edges: list[list[tuple[int, int]]] = []
    for layer in nodes:
        members = sorted(layer)
        edges.append(
            [
                (u, v)
                for i, u in enumerate(members)
                for v in members[i + 1 :]
                if rng.random() < density
            ]
        )
    if not any(edges):
        layer = max(range(ell), key=lambda x: len(nodes[x]))
        if len(nodes[layer]) < 2:
            nodes[layer].update({0, 1})
        a, b = sorted(nodes[layer])[:2]
        edges[layer].append((a, b))
    net = build_net(edges, n=n, layer_nodes=nodes)
    k = rng.randint(1, max_k)
    if rng.random() < 0.5:
        mapping = {u: rng.randrange(k) for u in range(n)}
        cs = CommunityStructure.from_entity_mapping(net, mapping)
    else:
        assignment = {
            (u, layer): rng.randrange(k)
            for layer in range(ell)
            for u in sorted(net.layer_nodes[layer])
        }
        cs = CommunityStructure.from_assignment(net, assignment)
    return net, cs


@pytest.fixture
def make_net() -> NetFactory:
    return build_net


@pytest.fixture
def two_cliques() -> tuple[MultilayerNetwork, CommunityStructure]:
    """Two disjoint K4 on one layer, one community per clique."""
    clique = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    net = build_net([clique + [(u + 4, v + 4) for u, v in clique]])
    cs = CommunityStructure.from_entity_mapping(net, {u: u // 4 for u in range(8)})
    return net, cs


@pytest.fixture
def write_text(tmp_path):
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
