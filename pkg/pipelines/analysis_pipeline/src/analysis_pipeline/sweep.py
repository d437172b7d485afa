from __future__ import annotations

import itertools
import sys
import time
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field

import pandas as pd

from analysis_pipeline.generators import (
    BENCH_DEGREE,
    BENCH_GROUPS,
    BENCH_MIXING,
    compose_layers,
    gen_mixing,
    planted_structure,
)
from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import CouplingVariant
from mlmod_core.errors import ContractViolation
from mlmod_core.measures.coupling import CouplingSpec
from mlmod_core.measures.modularity import q_multilayer
from mlmod_core.measures.multislice import QmsParams, q_multislice
from mlmod_core.measures.resolution import ResolutionSpec
from mlmod_core.network.model import MultilayerNetwork
from mlmod_core.network.ordering import OrderingScheme
from mlmod_core.parallel import ordered_map

AXES = ("k", "omega", "gamma", "layers")
SWEEP_COLUMNS = ["axis", "point", "value", "layers", "nodes", "measure", "q", "seconds"]


@dataclass(frozen=True)
class MeasureSpec:
    """One Q variant evaluated at every grid point."""

    name: str
    resolution: ResolutionSpec = field(default_factory=ResolutionSpec.redundancy)
    coupling: CouplingSpec = field(default_factory=CouplingSpec)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    point: int
    value: float
    layers: int
    nodes: int
    measure: str
    q: float | None
    seconds: float

    def to_dict(self) -> dict[str, object]:
        return asdict(self)


@dataclass(frozen=True)
class TrendReport:
    direction: str
    status: str
    violations: int
    values: tuple[float, ...]


def _timed(fn: Callable[..., float], *args: object) -> tuple[float, float]:
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


def _q_global(
    net: MultilayerNetwork, cs: CommunityStructure, rspec: ResolutionSpec, cspec: CouplingSpec
) -> float:
    return q_multilayer(net, cs, rspec, cspec, workers=1).q_global


def _progress(idx: int, total: int, axis: str, value: float, progress_every: int) -> None:
    if progress_every and (idx % progress_every == 0 or idx == total):
        print(f"[sweep] point {idx}/{total} axis={axis} value={value:g}", file=sys.stderr)


def _run_points(
    axis: str,
    values: Sequence[float],
    point_fn: Callable[[int, float], list[SweepRow]],
    *,
    workers: int,
    progress_every: int,
) -> list[SweepRow]:
    total = len(values)

    def run(idx: int) -> list[SweepRow]:
        rows = point_fn(idx, values[idx])
        _progress(idx + 1, total, axis, values[idx], progress_every)
        return rows

    return [row for rows in ordered_map(run, range(total), workers) for row in rows]


def sweep_k(
    net: MultilayerNetwork,
    ks: Sequence[int],
    measures: Sequence[MeasureSpec],
    *,
    workers: int = 1,
    progress_every: int = 0,
) -> list[SweepRow]:
    """Q of planted block structures of decreasing block size under each measure."""

    def point(idx: int, k: float) -> list[SweepRow]:
        cs = planted_structure(net, int(k))
        rows = []
        for measure in measures:
            q, seconds = _timed(_q_global, net, cs, measure.resolution, measure.coupling)
            rows.append(SweepRow("k", idx, float(k), net.ell, net.n, measure.name, q, seconds))
        return rows

    return _run_points("k", list(ks), point, workers=workers, progress_every=progress_every)


def _sweep_multislice(
    axis: str,
    net: MultilayerNetwork,
    cs: CommunityStructure,
    values: Sequence[float],
    params_for: Callable[[float], QmsParams],
    scheme: OrderingScheme,
    workers: int,
    progress_every: int,
) -> list[SweepRow]:
    def point(idx: int, value: float) -> list[SweepRow]:
        params = params_for(value)
        q, seconds = _timed(q_multislice, net, cs, params, scheme)
        return [SweepRow(axis, idx, float(value), net.ell, net.n, "qms", q, seconds)]

    return _run_points(axis, list(values), point, workers=workers, progress_every=progress_every)


def sweep_omega(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    omegas: Sequence[float],
    *,
    scheme: OrderingScheme | None = None,
    workers: int = 1,
    progress_every: int = 0,
) -> list[SweepRow]:
    """Q_ms with gamma = 1 for every omega."""
    return _sweep_multislice(
        "omega",
        net,
        cs,
        omegas,
        lambda omega: QmsParams.uniform(net.ell, 1.0, omega),
        scheme or OrderingScheme(),
        workers,
        progress_every,
    )


def sweep_gamma(
    net: MultilayerNetwork,
    cs: CommunityStructure,
    gammas: Sequence[float],
    *,
    scheme: OrderingScheme | None = None,
    workers: int = 1,
    progress_every: int = 0,
) -> list[SweepRow]:
    """Q_ms with omega = 1 - gamma (clipped at 0) for every gamma."""
    return _sweep_multislice(
        "gamma",
        net,
        cs,
        gammas,
        lambda g: QmsParams.uniform(net.ell, g, max(0.0, 1.0 - g)),
        scheme or OrderingScheme(),
        workers,
        progress_every,
    )


def sweep_layers(
    layer_counts: Sequence[int],
    node_counts: Sequence[int],
    *,
    seed: int = 0,
    variant: CouplingVariant = CouplingVariant.asymmetric_inner,
    progress_every: int = 0,
) -> list[SweepRow]:
    """
    Wall-clock time of Q on replicated planted-partition networks over a layers x nodes grid,
    once with fixed gamma and once with redundancy gamma. Runs serially so timings are clean.
    """
    grid = [(ell, n) for ell in layer_counts for n in node_counts]
    coupling = CouplingSpec(variant=variant)
    rows: list[SweepRow] = []
    for idx, (ell, n) in enumerate(grid):
        net = compose_layers(
            [gen_mixing(n, BENCH_GROUPS, BENCH_DEGREE, BENCH_MIXING, seed)], replicate=ell
        )
        cs = planted_structure(net, BENCH_GROUPS)
        for name, rspec in (
            ("q-fixed", ResolutionSpec.fixed(1.0)),
            ("q-redundancy", ResolutionSpec.redundancy()),
        ):
            q, seconds = _timed(_q_global, net, cs, rspec, coupling)
            rows.append(SweepRow("layers", idx, float(ell), ell, n, name, q, seconds))
        _progress(idx + 1, len(grid), "layers", ell, progress_every)
    return rows


def rows_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_dict() for row in rows], columns=SWEEP_COLUMNS)


def trend_report(values: Sequence[float], direction: str) -> TrendReport:
    """pass when the trace is monotone in `direction`, warn otherwise; never raises on data."""
    if direction not in ("non-increasing", "non-decreasing"):
        raise ContractViolation(f"Unknown direction {direction!r}.")
    sign = -1 if direction == "non-increasing" else 1
    violations = sum(1 for a, b in itertools.pairwise(values) if sign * (b - a) < -1e-12)
    return TrendReport(
        direction=direction,
        status="pass" if not violations else "warn",
        violations=violations,
        values=tuple(values),
    )
