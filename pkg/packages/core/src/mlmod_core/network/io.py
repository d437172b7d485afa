from __future__ import annotations

import re
from collections.abc import Iterator
from pathlib import Path

from mlmod_core.enums import NetworkFormat
from mlmod_core.errors import FormatError, NetworkValidationError
from mlmod_core.hashing import sha256_lines
from mlmod_core.identity import LabelIndex
from mlmod_core.network.model import MultilayerNetwork, normalize_edge

_FIELD_SEP = re.compile(r"[\t ,;]+")

SECTION_LAYERS = "*layers"
SECTION_NODES = "*nodes"
SECTION_EDGES = "*edges"
_SECTIONS = (SECTION_LAYERS, SECTION_NODES, SECTION_EDGES)


def split_fields(line: str) -> list[str]:
    return [f for f in _FIELD_SEP.split(line.strip()) if f]


def iter_records(path: Path) -> Iterator[tuple[int, str]]:
    """(1-based line number, stripped text) for every non-blank, non-comment line."""
    with path.open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            yield line_no, text


def load_layer_order(path: Path) -> list[str]:
    path = Path(path)
    if not path.exists():
        raise FormatError("File not found.", path=path)
    labels: list[str] = []
    seen: set[str] = set()
    for line_no, text in iter_records(path):
        if text in seen:
            raise FormatError(f"Layer {text!r} listed twice.", path=path, line_no=line_no)
        seen.add(text)
        labels.append(text)
    return labels


def load_network(
    path: Path | str,
    fmt: NetworkFormat = NetworkFormat.edgelist,
    *,
    layer_order: list[str] | None = None,
) -> MultilayerNetwork:
    """
    Parse the multilayer edge-list format:

        # comment
        *layers            (optional) layer labels, one per line, in order
        *nodes             (optional) `<layer> <entity>` occurrences, e.g. isolated nodes
        *edges             (default section) `<layer> <entity> <entity>`

    Layers and entities get dense ids in first-appearance order. When layers are declared
    (by a `*layers` section or `layer_order`), an edge or node on any other layer is an error.
    """
    if fmt != NetworkFormat.edgelist:
        raise FormatError(f"Unsupported network format: {fmt!r}")
    path = Path(path)
    if not path.exists():
        raise FormatError("File not found.", path=path)

    entities = LabelIndex()
    layers = LabelIndex(layer_order or ())
    declared = layer_order is not None
    nodes: list[set[int]] = [set() for _ in range(len(layers))]
    edges: list[dict[tuple[int, int], int]] = [{} for _ in range(len(layers))]

    def layer_id(label: str, line_no: int) -> int:
        existing = layers.get(label)
        if existing is not None:
            return existing
        if declared:
            raise NetworkValidationError(
                f"Layer {label!r} is not declared.", path=path, line_no=line_no
            )
        new_id = layers.intern(label)
        nodes.append(set())
        edges.append({})
        return new_id

    section = SECTION_EDGES
    for line_no, text in iter_records(path):
        lowered = text.lower()
        if lowered in _SECTIONS:
            if section == SECTION_LAYERS and lowered != SECTION_LAYERS:
                declared = True
            section = lowered
            continue
        fields = split_fields(text)
        if section == SECTION_LAYERS:
            if len(fields) != 1:
                raise FormatError("Expected `<layer-label>`.", path=path, line_no=line_no)
            if layer_order is None:
                layer_id(fields[0], line_no)
            elif fields[0] not in layers:
                raise NetworkValidationError(
                    f"Layer {fields[0]!r} is missing from the layer-order file.",
                    path=path,
                    line_no=line_no,
                )
            continue
        if section == SECTION_NODES:
            if len(fields) != 2:
                raise FormatError(
                    "Expected `<layer-label> <entity-label>`.", path=path, line_no=line_no
                )
            layer = layer_id(fields[0], line_no)
            nodes[layer].add(entities.intern(fields[1]))
            continue

        if len(fields) != 3:
            raise FormatError(
                "Expected `<layer-label> <entity-label> <entity-label>`.",
                path=path,
                line_no=line_no,
            )
        layer = layer_id(fields[0], line_no)
        if fields[1] == fields[2]:
            raise NetworkValidationError(
                f"Self-loop on entity {fields[1]!r} in layer {fields[0]!r}.",
                path=path,
                line_no=line_no,
            )
        u = entities.intern(fields[1])
        v = entities.intern(fields[2])
        key = normalize_edge(u, v)
        first = edges[layer].get(key)
        if first is not None:
            raise NetworkValidationError(
                f"Duplicate edge {fields[1]!r}-{fields[2]!r} in layer {fields[0]!r} "
                f"(first seen at line {first}).",
                path=path,
                line_no=line_no,
            )
        edges[layer][key] = line_no
        nodes[layer].update(key)

    if len(layers) == 0:
        raise FormatError("No layers found.", path=path)

    return MultilayerNetwork.build(
        entity_labels=entities.labels(),
        layer_labels=layers.labels(),
        layer_nodes=nodes,
        layer_edges=[list(layer_edges) for layer_edges in edges],
    )


def dump_lines(net: MultilayerNetwork) -> Iterator[str]:
    """
    Bit-stable serialization: layers in order, every occurrence ordered by (entity id, layer),
    then edges per layer sorted lexicographically by label. Reloading reproduces the same ids.
    """
    yield SECTION_LAYERS
    yield from net.layer_labels
    yield SECTION_NODES
    for u, present in enumerate(net.entity_layers):
        for layer in present:
            yield f"{net.layer_labels[layer]}\t{net.entity_labels[u]}"
    yield SECTION_EDGES
    for layer, label in enumerate(net.layer_labels):
        pairs = sorted(
            tuple(sorted((net.entity_labels[u], net.entity_labels[v])))
            for u, v in net.layer_edges(layer)
        )
        for a, b in pairs:
            yield f"{label}\t{a}\t{b}"


def save_network(net: MultilayerNetwork, path: Path | str) -> Path:
    path = Path(path)
    path.write_text("".join(f"{line}\n" for line in dump_lines(net)), encoding="utf-8")
    return path


def network_sha256(net: MultilayerNetwork) -> str:
    return sha256_lines(dump_lines(net))
