from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.errors import ContractViolation, DegenerateInputError, FormatError
from mlmod_core.measures.modularity import layer_degree_table
from mlmod_core.network.io import iter_records, split_fields
from mlmod_core.network.model import MultilayerNetwork
from mlmod_core.network.ordering import OrderingScheme


@dataclass(frozen=True)
class QmsParams:
    gamma_per_layer: Mapping[int, float]
    omega: float = 1.0

    def __post_init__(self) -> None:
        if not self.omega >= 0:
            raise ContractViolation(f"omega must be >= 0, got {self.omega!r}.")
        for layer, value in self.gamma_per_layer.items():
            if not value >= 0:
                raise ContractViolation(f"gamma for layer {layer} must be >= 0, got {value!r}.")

    @classmethod
    def uniform(cls, ell: int, gamma: float = 1.0, omega: float = 1.0) -> QmsParams:
        per_layer = {layer: float(gamma) for layer in range(ell)}
        return cls(gamma_per_layer=per_layer, omega=float(omega))

    def gamma_of(self, layer: int) -> float:
        try:
            return self.gamma_per_layer[layer]
        except KeyError:
            raise ContractViolation(f"No gamma given for layer {layer}.") from None


def load_layer_gammas(path: Path, net: MultilayerNetwork) -> dict[int, float]:
    """`<layer>\\t<gamma>` per line; every layer of `net` must be listed once."""
    path = Path(path)
    if not path.exists():
        raise FormatError("File not found.", path=path)
    layer_ids = {label: idx for idx, label in enumerate(net.layer_labels)}
    gammas: dict[int, float] = {}
    for line_no, text in iter_records(path):
        fields = split_fields(text)
        if len(fields) != 2:
            raise FormatError(
                f"Expected `layer gamma`, got {len(fields)} fields.", path=path, line_no=line_no
            )
        label, raw = fields
        if label not in layer_ids:
            raise FormatError(f"Unknown layer {label!r}.", path=path, line_no=line_no)
        layer = layer_ids[label]
        if layer in gammas:
            raise FormatError(f"Layer {label!r} listed twice.", path=path, line_no=line_no)
        try:
            gammas[layer] = float(raw)
        except ValueError:
            raise FormatError(f"Invalid gamma {raw!r}.", path=path, line_no=line_no) from None
    missing = [net.layer_labels[layer] for layer in range(net.ell) if layer not in gammas]
    if missing:
        raise FormatError(f"No gamma for layers: {', '.join(missing)}.", path=path)
    return gammas


def multislice_normalizer(net: MultilayerNetwork, omega: float, scheme: OrderingScheme) -> float:
    """sum 2|E_i| + omega per shared entity of every directed valid pairing."""
    within = sum(2 * net.edge_count(layer) for layer in range(net.ell))
    couplings = sum(
        net.shared_count(layer, other)
        for layer in range(net.ell)
        for other in scheme.pairings(net.ell, layer)
    )
    return within + omega * couplings


def q_multislice(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    params: QmsParams,
    scheme: OrderingScheme | None = None,
) -> float:
    """
    Multislice modularity with per-layer resolution and a constant coupling omega between an
    entity's occurrences on paired layers. Layers without edges contribute no null-model term.
    """
    scheme = scheme or OrderingScheme()
    normalizer = multislice_normalizer(net, params.omega, scheme)
    if not normalizer:
        raise DegenerateInputError("Multislice normalizer is zero; Q_ms is undefined.")
    degrees, internal = layer_degree_table(net, cs)
    terms: list[float] = []
    for layer in range(net.ell):
        m2 = 2 * net.edge_count(layer)
        if not m2:
            continue
        g = params.gamma_of(layer)
        for c in range(cs.k):
            terms.append(internal[layer][c] - g * degrees[layer][c] ** 2 / m2)
    if params.omega:
        for layer in range(net.ell):
            for other in scheme.pairings(net.ell, layer):
                agreeing = sum(
                    1
                    for u in net.layer_nodes[layer] & net.layer_nodes[other]
                    if cs.community_of(u, layer) == cs.community_of(u, other)
                )
                terms.append(params.omega * agreeing)
    return math.fsum(terms) / normalizer
