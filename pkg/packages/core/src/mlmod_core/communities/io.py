from __future__ import annotations

from pathlib import Path

from mlmod_core.communities.model import CommunityStructure, Occurrence
from mlmod_core.enums import CommunityFileMode
from mlmod_core.errors import CommunityAssignmentError, FormatError
from mlmod_core.identity import LabelIndex
from mlmod_core.network.io import iter_records, split_fields
from mlmod_core.network.model import MultilayerNetwork


def load_communities(
    path: Path | str,
    net: MultilayerNetwork,
    mode: CommunityFileMode = CommunityFileMode.per_node_layer,
) -> CommunityStructure:
    """
    per-node-layer: `<entity> <layer> <community>` per line.
    per-entity:     `<entity> <community>` per line, replicated to every layer of the entity.
    Community ids follow first appearance of their labels.
    """
    path = Path(path)
    if not path.exists():
        raise FormatError("File not found.", path=path)
    entity_ids = LabelIndex(net.entity_labels)
    layer_ids = LabelIndex(net.layer_labels)
    communities = LabelIndex()
    expected = 3 if mode == CommunityFileMode.per_node_layer else 2

    assignment: dict[Occurrence, int] = {}
    entity_assignment: dict[int, int] = {}
    seen_at: dict[object, int] = {}
    for line_no, text in iter_records(path):
        fields = split_fields(text)
        if len(fields) != expected:
            shape = (
                "`<entity-label> <layer-label> <community-label>`"
                if expected == 3
                else "`<entity-label> <community-label>`"
            )
            raise FormatError(f"Expected {shape}.", path=path, line_no=line_no)
        u = entity_ids.get(fields[0])
        if u is None:
            raise CommunityAssignmentError(
                f"Unknown entity {fields[0]!r}.", path=path, line_no=line_no
            )
        if mode == CommunityFileMode.per_node_layer:
            layer = layer_ids.get(fields[1])
            if layer is None:
                raise CommunityAssignmentError(
                    f"Unknown layer {fields[1]!r}.", path=path, line_no=line_no
                )
            if u not in net.layer_nodes[layer]:
                raise CommunityAssignmentError(
                    f"Entity {fields[0]!r} is not present on layer {fields[1]!r}.",
                    path=path,
                    line_no=line_no,
                )
            c = communities.intern(fields[2])
            key: object = (u, layer)
            previous = assignment.setdefault((u, layer), c)
        else:
            c = communities.intern(fields[1])
            key = u
            previous = entity_assignment.setdefault(u, c)
        if previous != c:
            raise CommunityAssignmentError(
                f"Conflicting assignment for {' '.join(fields[:-1])!r} "
                f"(first at line {seen_at[key]}).",
                path=path,
                line_no=line_no,
            )
        seen_at.setdefault(key, line_no)

    try:
        if mode == CommunityFileMode.per_entity:
            return CommunityStructure.from_entity_mapping(
                net, entity_assignment, labels=communities.labels()
            )
        return CommunityStructure.from_assignment(net, assignment, labels=communities.labels())
    except CommunityAssignmentError as exc:
        raise CommunityAssignmentError(exc.message, path=path) from exc


def dump_lines(cs: CommunityStructure, net: MultilayerNetwork) -> list[str]:
    return [
        f"{net.entity_labels[u]}\t{net.layer_labels[layer]}\t{cs.labels[c]}"
        for (u, layer), c in sorted(
            cs.assignment.items(), key=lambda item: (item[0][1], item[0][0])
        )
    ]


def save_communities(cs: CommunityStructure, net: MultilayerNetwork, path: Path | str) -> Path:
    path = Path(path)
    path.write_text("".join(f"{line}\n" for line in dump_lines(cs, net)), encoding="utf-8")
    return path
