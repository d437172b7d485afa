from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass

import networkx as nx
import numpy as np
from scipy.stats import pearsonr

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.errors import ContractViolation, DegenerateInputError
from mlmod_core.measures.modularity import QReport
from mlmod_core.measures.resolution import redundancy
from mlmod_core.network.model import MultilayerNetwork

STAT_NAMES = ("apl", "cc", "node_coverage", "edge_coverage", "redundancy")


@dataclass(frozen=True)
class CommunityStats:
    """
    Per-community structure, each averaged over layers. `apl`/`cc` are None when no layer has
    a connected pair / three members of the community.
    """

    apl: float | None
    cc: float | None
    node_coverage: float
    edge_coverage: float
    redundancy: float

    def as_dict(self) -> dict[str, float | None]:
        return asdict(self)


def _average_path_length(induced: nx.Graph) -> float | None:
    """Mean distance over reachable ordered pairs; disconnected pairs are excluded."""
    total = 0
    pairs = 0
    for _, lengths in nx.all_pairs_shortest_path_length(induced):
        for distance in lengths.values():
            if distance:
                total += distance
                pairs += 1
    return total / pairs if pairs else None


def community_stats(net: MultilayerNetwork, cs: CommunityStructure) -> dict[int, CommunityStats]:
    stats: dict[int, CommunityStats] = {}
    for c in range(cs.k):
        apls: list[float] = []
        ccs: list[float] = []
        node_cov: list[float] = []
        edge_cov: list[float] = []
        for layer, graph in enumerate(net.graphs):
            members = cs.members(c, layer)
            induced = graph.subgraph(members)
            layer_size = graph.number_of_nodes()
            layer_edges = graph.number_of_edges()
            node_cov.append(len(members) / layer_size if layer_size else 0.0)
            edge_cov.append(induced.number_of_edges() / layer_edges if layer_edges else 0.0)
            if len(members) >= 2:
                apl = _average_path_length(induced)
                if apl is not None:
                    apls.append(apl)
            if len(members) >= 3:
                clustering = nx.clustering(induced)
                ccs.append(math.fsum(clustering.values()) / len(members))
        stats[c] = CommunityStats(
            apl=math.fsum(apls) / len(apls) if apls else None,
            cc=math.fsum(ccs) / len(ccs) if ccs else None,
            node_coverage=math.fsum(node_cov) / net.ell,
            edge_coverage=math.fsum(edge_cov) / net.ell,
            redundancy=redundancy(cs, net, c),
        )
    return stats


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise ContractViolation(f"pearson needs equal lengths, got {len(xs)} and {len(ys)}.")
    if len(xs) < 2:
        raise ContractViolation("pearson needs at least two observations.")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateInputError("Pearson correlation is undefined for a zero-variance input.")
    return float(pearsonr(x, y).statistic)


def correlate(stats: Mapping[int, CommunityStats], report: QReport) -> dict[str, float | None]:
    """
    Pearson r between each statistic and the per-community Q contribution, over communities
    where the statistic is defined. None when fewer than two such communities exist or either
    side is constant.
    """
    result: dict[str, float | None] = {}
    for name in STAT_NAMES:
        xs: list[float] = []
        ys: list[float] = []
        for c, row in sorted(stats.items()):
            value = getattr(row, name)
            if value is not None:
                xs.append(value)
                ys.append(report.per_community[c])
        try:
            result[name] = pearson(xs, ys)
        except (ContractViolation, DegenerateInputError):
            result[name] = None
    return result
