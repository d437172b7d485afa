from __future__ import annotations

from pathlib import Path

import pytest

from mlmod_core.bounds import gen_clique_canonical
from mlmod_core.communities import save_communities
from mlmod_core.communities.model import CommunityStructure
from mlmod_core.network.io import save_network
from mlmod_core.network.model import MultilayerNetwork


def clique(nodes: range) -> list[tuple[int, int]]:
    members = list(nodes)
    return [(u, v) for i, u in enumerate(members) for v in members[i + 1 :]]


def build(layer_edges: list[list[tuple[int, int]]], n: int) -> MultilayerNetwork:
    return MultilayerNetwork.build(
        entity_labels=[f"v{u}" for u in range(n)],
        layer_labels=[f"L{layer + 1}" for layer in range(len(layer_edges))],
        layer_nodes=[{u for edge in edges for u in edge} for edges in layer_edges],
        layer_edges=layer_edges,
    )


@pytest.fixture
def make_net():
    return build


@pytest.fixture
def k4_and_path() -> tuple[MultilayerNetwork, CommunityStructure]:
    """One layer: K4 on v0..v3 and the path v4-v5-v6-v7, one community each."""
    net = build([clique(range(4)) + [(4, 5), (5, 6), (6, 7)]], 8)
    cs = CommunityStructure.from_entity_mapping(net, {u: u // 4 for u in range(8)})
    return net, cs


@pytest.fixture
def clique_files(tmp_path: Path) -> tuple[Path, Path]:
    net, cs = gen_clique_canonical(8, 2)
    return save_network(net, tmp_path / "net.tsv"), save_communities(cs, net, tmp_path / "comm.tsv")
