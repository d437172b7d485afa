from __future__ import annotations

import math
import random

import numpy as np
import pytest

from analysis_pipeline.stats import CommunityStats, community_stats, correlate, pearson
from mlmod_core.communities.model import CommunityStructure
from mlmod_core.errors import ContractViolation, DegenerateInputError
from mlmod_core.measures import CouplingSpec, ResolutionSpec, q_multilayer

from conftest import clique


def _two_pass_pearson(xs: list[float], ys: list[float]) -> float:
    x = np.asarray(xs)
    y = np.asarray(ys)
    dx = x - x.sum() / len(x)
    dy = y - y.sum() / len(y)
    return float((dx * dy).sum() / math.sqrt((dx * dx).sum() * (dy * dy).sum()))


def test_clique_and_path_statistics(k4_and_path) -> None:
    net, cs = k4_and_path
    stats = community_stats(net, cs)
    assert stats[0].apl == 1.0
    assert stats[0].cc == 1.0
    assert stats[1].apl == pytest.approx(10 / 6)
    assert stats[1].cc == 0.0
    assert stats[0].node_coverage == 0.5
    assert stats[0].edge_coverage == pytest.approx(6 / 9)
    assert stats[1].edge_coverage == pytest.approx(3 / 9)
    # one layer: no pair can be redundant
    assert stats[0].redundancy == 0.0


def test_absent_layer_contributes_zero_coverage(make_net) -> None:
    net = make_net([clique(range(4)), clique(range(4, 8))], 8)
    cs = CommunityStructure.from_entity_mapping(net, {u: u // 4 for u in range(8)})
    stats = community_stats(net, cs)
    assert stats[0].node_coverage == 0.5
    assert stats[0].edge_coverage == 0.5
    assert stats[0].apl == 1.0


def test_coverages_sum_to_one_when_structure_covers_layers(make_net) -> None:
    rng = random.Random(4)
    ring = [(u, u + 1) for u in range(9)]
    edges = [ring + [(u, v) for u in range(10) for v in range(u + 2, 10) if rng.random() < 0.4]]
    net = make_net(edges, 10)
    cs = CommunityStructure.from_entity_mapping(net, {u: u % 3 for u in range(net.n)})
    stats = community_stats(net, cs)
    assert math.fsum(s.node_coverage for s in stats.values()) == pytest.approx(1.0)
    assert math.fsum(s.edge_coverage for s in stats.values()) <= 1.0 + 1e-12
    for s in stats.values():
        assert s.cc is None or 0.0 <= s.cc <= 1.0


def test_pearson_examples() -> None:
    xs = [1.0, 2.0, 3.0, 4.0]
    assert pearson(xs, [2 * x + 1 for x in xs]) == pytest.approx(1.0)
    assert pearson(xs, [-x for x in xs]) == pytest.approx(-1.0)
    assert pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)


def test_pearson_properties() -> None:
    rng = random.Random(9)
    for _ in range(50):
        xs = [rng.uniform(-5, 5) for _ in range(12)]
        ys = [rng.uniform(-5, 5) for _ in range(12)]
        r = pearson(xs, ys)
        assert -1.0 <= r <= 1.0
        assert pearson(ys, xs) == pytest.approx(r, abs=1e-12)
        assert pearson([3 * x - 2 for x in xs], ys) == pytest.approx(r, abs=1e-12)
        assert pearson([-0.5 * x for x in xs], ys) == pytest.approx(-r, abs=1e-12)
        assert r == pytest.approx(_two_pass_pearson(xs, ys), abs=1e-12)


def test_pearson_rejects_degenerate_input() -> None:
    with pytest.raises(DegenerateInputError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(ContractViolation):
        pearson([1, 2], [1, 2, 3])
    with pytest.raises(ContractViolation):
        pearson([1], [1])


def test_correlate_against_contributions(make_net) -> None:
    path = [(4, 5), (5, 6), (6, 7), (7, 8)]
    net = make_net([clique(range(4)) + path + clique(range(9, 12))], 12)
    cs = CommunityStructure.from_entity_mapping(
        net, {u: 0 if u < 4 else 1 if u < 9 else 2 for u in range(12)}
    )
    report = q_multilayer(net, cs, ResolutionSpec.fixed(1.0), CouplingSpec.none())
    stats = community_stats(net, cs)
    assert [stats[c].apl for c in range(3)] == [1.0, 2.0, 1.0]
    contributions = [report.per_community[c] for c in range(3)]
    result = correlate(stats, report)
    assert result["apl"] == pytest.approx(pearson([1.0, 2.0, 1.0], contributions))
    assert result["node_coverage"] == pytest.approx(
        pearson([4 / 12, 5 / 12, 3 / 12], contributions)
    )
    # redundancy is 0 everywhere
    assert result["redundancy"] is None


def test_correlate_with_constant_contributions(k4_and_path) -> None:
    net, cs = k4_and_path
    # K4: (12 - 144/18)/18, P4: (6 - 36/18)/18
    report = q_multilayer(net, cs, ResolutionSpec.fixed(1.0), CouplingSpec.none())
    assert report.per_community[0] == report.per_community[1]
    assert all(value is None for value in correlate(community_stats(net, cs), report).values())


def test_stats_as_dict_order() -> None:
    row = CommunityStats(apl=None, cc=0.5, node_coverage=1.0, edge_coverage=1.0, redundancy=0.0)
    assert list(row.as_dict()) == ["apl", "cc", "node_coverage", "edge_coverage", "redundancy"]
