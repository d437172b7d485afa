from __future__ import annotations

from pathlib import Path

import networkx as nx
import pytest

from analysis_pipeline.generators import (
    compose_layers,
    gen_er,
    gen_mixing,
    gen_planted,
    load_layer_graph,
    mixing_probabilities,
    planted_structure,
    recipe,
)
from mlmod_core.errors import ContractViolation, NetworkValidationError
from mlmod_core.measures import CouplingSpec, ResolutionSpec, q_multilayer
from mlmod_core.network.ordering import OrderingScheme


def test_er_degenerate_probabilities() -> None:
    assert gen_er(20, 0.0, seed=1).number_of_edges() == 0
    full = gen_er(20, 1.0, seed=1)
    assert full.number_of_edges() == 20 * 19 // 2
    assert full.number_of_nodes() == 20


def test_planted_degenerate_probabilities_give_disjoint_cliques() -> None:
    graph = gen_planted(128, 4, 1.0, 0.0, seed=3)
    components = sorted(nx.connected_components(graph), key=min)
    assert [len(c) for c in components] == [32, 32, 32, 32]
    assert graph.number_of_edges() == 4 * (32 * 31 // 2)
    assert components[1] == set(range(32, 64))


def test_generators_are_reproducible() -> None:
    assert sorted(gen_er(50, 0.2, seed=7).edges) == sorted(gen_er(50, 0.2, seed=7).edges)
    a = gen_planted(40, 4, 0.5, 0.05, seed=11)
    b = gen_planted(40, 4, 0.5, 0.05, seed=11)
    assert sorted(a.edges) == sorted(b.edges)
    assert sorted(a.edges) != sorted(gen_planted(40, 4, 0.5, 0.05, seed=12).edges)


def test_planted_rejects_uneven_blocks_and_bad_probabilities() -> None:
    with pytest.raises(ContractViolation):
        gen_planted(10, 3, 1.0, 0.0, seed=0)
    with pytest.raises(ContractViolation):
        gen_planted(12, 3, 1.5, 0.0, seed=0)
    with pytest.raises(ContractViolation):
        gen_er(12, -0.1, seed=0)


def test_mixing_probabilities() -> None:
    p_in, p_out = mixing_probabilities(128, 4, 16.0, 0.1)
    assert p_in == pytest.approx(0.9 * 16 / 31)
    assert p_out == pytest.approx(1.6 / 96)
    with pytest.raises(ContractViolation):
        mixing_probabilities(32, 4, 16.0, 0.1)


def test_gen_mixing_average_degree_is_close() -> None:
    graph = gen_mixing(512, 4, 16.0, 0.1, seed=5)
    mean_degree = 2 * graph.number_of_edges() / graph.number_of_nodes()
    assert 14.0 < mean_degree < 18.0


def test_compose_replicated_layers_share_every_pair() -> None:
    net = compose_layers([gen_planted(12, 3, 1.0, 0.0, seed=0)], replicate=3)
    assert net.ell == 3
    assert net.layer_labels == ("L1", "L2", "L3")
    assert net.layer_edges(0) == net.layer_edges(1) == net.layer_edges(2)
    assert net.entity_labels[:3] == ("0", "1", "2")


def test_compose_matches_nodes_by_label() -> None:
    first = nx.Graph([("a", "b"), ("b", "c")])
    second = nx.Graph([("c", "d")])
    net = compose_layers([first, second], layer_labels=["X", "Y"])
    assert net.entity_labels == ("a", "b", "c", "d")
    assert net.entity_layers[2] == (0, 1)
    with pytest.raises(ContractViolation):
        compose_layers([first], layer_labels=["X", "Y"])


def test_layer_order_does_not_change_unordered_q() -> None:
    gn_a = gen_mixing(64, 4, 8.0, 0.1, seed=1)
    gn_b = gen_mixing(64, 4, 8.0, 0.1, seed=2)
    er_a = gen_er(64, 0.1, seed=3)
    er_b = gen_er(64, 0.1, seed=4)
    first = compose_layers([gn_a, er_a, gn_b, er_b])
    second = compose_layers([gn_a, er_a, er_b, gn_b])
    spec = CouplingSpec(scheme=OrderingScheme())
    rspec = ResolutionSpec.redundancy()
    q_first = q_multilayer(first, planted_structure(first, 4), rspec, spec).q_global
    q_second = q_multilayer(second, planted_structure(second, 4), rspec, spec).q_global
    assert q_first == pytest.approx(q_second, abs=1e-12)


def test_planted_structure_blocks() -> None:
    net = compose_layers([gen_planted(12, 3, 1.0, 0.0, seed=0)], replicate=2)
    cs = planted_structure(net, 3)
    assert cs.labels == ("B1", "B2", "B3")
    assert cs.entity_members(1) == frozenset(range(4, 8))
    with pytest.raises(ContractViolation):
        planted_structure(net, 13)


def test_recipes() -> None:
    er_er = recipe("er-er", seed=0)
    assert (er_er.n, er_er.ell) == (256, 2)
    mixed = recipe("gn-er-er-gn", seed=0)
    assert (mixed.n, mixed.ell) == (128, 4)
    assert mixed.layer_labels == ("GN1", "ER2", "ER3", "GN4")
    assert recipe("replicated", seed=0, layers=5).ell == 5
    with pytest.raises(ContractViolation):
        recipe("lfr", seed=0)


def test_load_layer_graph(tmp_path: Path) -> None:
    path = tmp_path / "layer.txt"
    path.write_text("# external benchmark\n1 2\n2 3 0.5\n", encoding="utf-8")
    graph = load_layer_graph(path)
    assert sorted(graph.edges) == [("1", "2"), ("2", "3")]
    path.write_text("1 1\n", encoding="utf-8")
    with pytest.raises(NetworkValidationError):
        load_layer_graph(path)
