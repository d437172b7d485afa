from __future__ import annotations

from collections.abc import Mapping, Sequence
from typing import TextIO

import pandas as pd

from analysis_pipeline.stats import STAT_NAMES, CommunityStats
from mlmod_core.communities.model import CommunityStructure
from mlmod_core.measures.coupling import CouplingSpec, coupling_summary
from mlmod_core.measures.resolution import ResolutionSpec, gamma
from mlmod_core.network.model import MultilayerNetwork
from mlmod_core.parallel import ordered_map

IC_COLUMNS = [
    "community",
    "coupling",
    "pairings",
    "total",
    "mean",
    "std",
    "nonempty_pairings",
    "mean_nonempty",
]


def gamma_table(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    rspec: ResolutionSpec,
    *,
    decimals: int = 3,
    workers: int | None = 1,
) -> pd.DataFrame:
    """Rows are communities, columns layers; a cell is empty where the community is absent."""

    def row(c: int) -> dict[str, object]:
        cells: dict[str, object] = {"community": cs.labels[c]}
        for layer, label in enumerate(net.layer_labels):
            if cs.members(c, layer):
                cells[label] = round(gamma(rspec, cs, net, layer, c), decimals)
            else:
                cells[label] = None
        return cells

    rows = ordered_map(row, range(cs.k), workers)
    return pd.DataFrame(rows, columns=["community", *net.layer_labels])


def ic_table(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    specs: Sequence[CouplingSpec],
    *,
    workers: int | None = 1,
) -> pd.DataFrame:
    """Per community and coupling variant: IC cumulated over the admissible pairings."""

    def community_rows(c: int) -> list[dict[str, object]]:
        rows = []
        for spec in specs:
            summary = coupling_summary(cs, net, c, spec)
            rows.append(
                {
                    "community": cs.labels[c],
                    "coupling": spec.label(),
                    "pairings": summary.pairings,
                    "total": summary.total,
                    "mean": summary.mean,
                    "std": summary.std,
                    "nonempty_pairings": summary.nonempty_pairings,
                    "mean_nonempty": summary.mean_nonempty,
                }
            )
        return rows

    per_community = ordered_map(community_rows, range(cs.k), workers)
    return pd.DataFrame([row for rows in per_community for row in rows], columns=IC_COLUMNS)


def stats_table(
    cs: CommunityStructure,
    stats: Mapping[int, CommunityStats],
    contributions: Mapping[int, float] | None = None,
) -> pd.DataFrame:
    columns = ["community", *STAT_NAMES]
    if contributions is not None:
        columns.append("q_contribution")
    rows = []
    for c, row in sorted(stats.items()):
        record: dict[str, object] = {"community": cs.labels[c], **row.as_dict()}
        if contributions is not None:
            record["q_contribution"] = contributions[c]
        rows.append(record)
    return pd.DataFrame(rows, columns=columns)


def write_csv(frame: pd.DataFrame, stream: TextIO, *, decimals: int | None = None) -> None:
    """Header row, fixed column order, `.` decimals, empty cells for missing values."""
    float_format = f"%.{decimals}f" if decimals is not None else None
    frame.to_csv(stream, index=False, na_rep="", float_format=float_format, lineterminator="\n")
