from __future__ import annotations

import pytest

from mlmod_core.communities import (
    CommunityStructure,
    community_layer_degrees,
    load_communities,
    majority_vote,
    projection,
    save_communities,
)
from mlmod_core.enums import CommunityFileMode
from mlmod_core.errors import CommunityAssignmentError
from mlmod_core.network.io import load_network

NETWORK = "L1 a b\nL1 b c\nL1 c d\nL2 a b\nL2 c d\n"


@pytest.fixture
def net(write_text):
    return load_network(write_text("net.tsv", NETWORK))


def test_per_node_layer_file(net, write_text) -> None:
    text = "a L1 x\nb L1 x\nc L1 y\nd L1 y\na L2 x\nb L2 y\nc L2 y\nd L2 y\n"
    cs = load_communities(write_text("comm.tsv", text), net)
    assert cs.k == 2
    assert cs.labels == ("x", "y")
    assert cs.members(0, 1) == frozenset({0})
    assert projection(cs, net, 1, 1).members == frozenset({1, 2, 3})
    assert cs.entity_members(1) == frozenset({1, 2, 3})
    assert cs.entity_communities[0] == frozenset({0})
    assert cs.entity_communities[1] == frozenset({0, 1})


def test_per_entity_file_replicates_to_every_layer(net, write_text) -> None:
    cs = load_communities(
        write_text("comm.tsv", "a x\nb x\nc y\nd y\n"), net, CommunityFileMode.per_entity
    )
    for layer in range(net.ell):
        assert cs.members(0, layer) == frozenset({0, 1})
        assert cs.members(1, layer) == frozenset({2, 3})


def test_missing_assignment_names_the_pair(net, write_text) -> None:
    text = "a L1 x\nb L1 x\nc L1 y\nd L1 y\na L2 x\nb L2 y\nc L2 y\n"
    with pytest.raises(CommunityAssignmentError) as excinfo:
        load_communities(write_text("comm.tsv", text), net)
    assert "('d', 'L2')" in excinfo.value.message


@pytest.mark.parametrize(
    ("text", "needle", "line_no"),
    [
        ("z L1 x\n", "Unknown entity", 1),
        ("a L9 x\n", "Unknown layer", 1),
        ("a L1 x\na L1 y\n", "first at line 1", 2),
        ("a L1\n", "Expected", 1),
    ],
)
def test_bad_community_lines(net, write_text, text: str, needle: str, line_no: int) -> None:
    with pytest.raises(Exception) as excinfo:
        load_communities(write_text("comm.tsv", text), net)
    assert needle in excinfo.value.message
    assert excinfo.value.line_no == line_no


def test_occurrence_not_on_layer(write_text) -> None:
    net = load_network(write_text("net.tsv", "L1 a b\nL2 b c\n"))
    with pytest.raises(CommunityAssignmentError) as excinfo:
        load_communities(write_text("comm.tsv", "c L1 x\n"), net)
    assert "not present" in excinfo.value.message


def test_repeated_identical_line_is_accepted(net, write_text) -> None:
    cs = load_communities(
        write_text("comm.tsv", "a x\na x\nb x\nc y\nd y\n"), net, CommunityFileMode.per_entity
    )
    assert cs.k == 2


def test_empty_communities_are_dropped(net, capsys) -> None:
    cs = CommunityStructure.from_entity_mapping(net, {0: 0, 1: 0, 2: 3, 3: 3})
    assert cs.k == 2
    assert cs.labels == ("0", "3")
    assert "[communities] dropped_empty=2" in capsys.readouterr().err


def test_save_round_trip(net, tmp_path) -> None:
    cs = CommunityStructure.from_entity_mapping(net, {0: 0, 1: 0, 2: 1, 3: 1}, labels=["p", "q"])
    path = save_communities(cs, net, tmp_path / "out.tsv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "a\tL1\tp"
    assert lines[4] == "a\tL2\tp"
    again = load_communities(path, net)
    assert again.assignment == cs.assignment
    assert again.labels == cs.labels


def test_layer_degrees_count_both_endpoints(net) -> None:
    cs = CommunityStructure.from_entity_mapping(net, {0: 0, 1: 0, 2: 1, 3: 1})
    # L1 is the path a-b-c-d
    assert community_layer_degrees(cs, net, 0, 0) == (3, 2)
    assert community_layer_degrees(cs, net, 1, 0) == (3, 2)
    assert community_layer_degrees(cs, net, 0, 1) == (2, 2)


def test_majority_vote(write_text) -> None:
    net = load_network(write_text("net.tsv", "L1 a b\nL2 a b\nL3 a b\n"))
    assignment = {
        (0, 0): 1,
        (0, 1): 1,
        (0, 2): 0,
        (1, 0): 0,
        (1, 1): 1,
        (1, 2): 2,
    }
    cs = CommunityStructure.from_assignment(net, assignment, labels=["x", "y", "z"])
    voted = majority_vote(cs, net)
    # a: y twice; b: one vote each, tie goes to the lowest id (x)
    assert voted.k == 2
    assert voted.labels == ("y", "x")
    assert all(voted.community_of(0, layer) == 0 for layer in range(3))
    assert all(voted.community_of(1, layer) == 1 for layer in range(3))


def test_relabeled_keeps_partition(net) -> None:
    cs = CommunityStructure.from_entity_mapping(net, {0: 0, 1: 0, 2: 1, 3: 1}, labels=["p", "q"])
    swapped = cs.relabeled(net, [1, 0])
    assert swapped.labels == ("q", "p")
    assert swapped.community_of(0, 0) == 1
