from __future__ import annotations

import pytest
from conftest import build_net, random_instance

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import OrderingKind
from mlmod_core.errors import ContractViolation, FormatError
from mlmod_core.measures import QmsParams, load_layer_gammas, q_multislice, q_ng
from mlmod_core.measures.multislice import multislice_normalizer
from mlmod_core.network import OrderingScheme


@pytest.fixture
def twin_layers():
    clique = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    edges = clique + [(u + 4, v + 4) for u, v in clique] + [(3, 4)]
    net = build_net([edges, edges])
    cs = CommunityStructure.from_entity_mapping(net, {u: u // 4 for u in range(8)})
    return net, cs


def test_zero_omega_averages_layer_values(twin_layers) -> None:
    net, cs = twin_layers
    per_layer = q_ng(net, cs, layer=0)
    value = q_multislice(net, cs, QmsParams.uniform(2, 1.0, 0.0))
    assert value == pytest.approx(per_layer, abs=1e-12)


def test_large_omega_tends_to_one(twin_layers) -> None:
    net, cs = twin_layers
    values = [q_multislice(net, cs, QmsParams.uniform(2, 1.0, omega)) for omega in (1, 10, 100)]
    assert values[0] < values[1] < values[2] < 1.0
    assert values[2] > 0.95


def test_normalizer_counts_omega_per_directed_pairing(twin_layers) -> None:
    net, _ = twin_layers
    within = 2 * 2 * net.edge_count(0)
    assert multislice_normalizer(net, 0.5, OrderingScheme()) == within + 0.5 * 8 * 2
    adjacent = OrderingScheme(kind=OrderingKind.adjacent)
    assert multislice_normalizer(net, 0.5, adjacent) == within + 0.5 * 8


def test_edgeless_layer_contributes_no_null_term() -> None:
    net = build_net([[(0, 1), (2, 3)], []], layer_nodes=[range(4), range(4)])
    cs = CommunityStructure.from_entity_mapping(net, {0: 0, 1: 0, 2: 1, 3: 1})
    value = q_multislice(net, cs, QmsParams.uniform(2, 1.0, 1.0))
    # numerator: (4 - 2*4/4) + 8 agreeing couplings; normalizer: 4 + 8
    assert value == pytest.approx((2 + 8) / 12, abs=1e-15)


def test_disagreeing_occurrences_do_not_couple() -> None:
    net = build_net([[(0, 1)], [(0, 1)]])
    cs = CommunityStructure.from_assignment(net, {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1})
    value = q_multislice(net, cs, QmsParams.uniform(2, 1.0, 1.0))
    numerator = (2 - 4 / 2) + (0 - 1 / 2 - 1 / 2) + 1 * 2
    assert value == pytest.approx(numerator / (4 + 4), abs=1e-15)


@pytest.mark.parametrize("seed", range(30))
def test_omega_trace_is_finite_and_bounded(seed: int) -> None:
    net, cs = random_instance(seed)
    for omega in (0.0, 0.5, 1.0, 1.5, 2.0):
        value = q_multislice(net, cs, QmsParams.uniform(net.ell, 1.0, omega))
        assert -1.0 <= value <= 1.0


def test_params_validation() -> None:
    with pytest.raises(ContractViolation):
        QmsParams.uniform(2, 1.0, -1.0)
    with pytest.raises(ContractViolation):
        QmsParams(gamma_per_layer={0: -0.1})
    with pytest.raises(ContractViolation):
        QmsParams(gamma_per_layer={0: 1.0}).gamma_of(1)


def test_layer_gamma_file(twin_layers, write_text) -> None:
    net, cs = twin_layers
    gammas = load_layer_gammas(write_text("g.tsv", "L2 0.5\nL1\t1.5\n"), net)
    assert gammas == {0: 1.5, 1: 0.5}
    with pytest.raises(FormatError) as excinfo:
        load_layer_gammas(write_text("bad.tsv", "L1 1\n"), net)
    assert "L2" in excinfo.value.message
    with pytest.raises(FormatError) as excinfo:
        load_layer_gammas(write_text("dup.tsv", "L1 1\nL1 2\n"), net)
    assert excinfo.value.line_no == 2
