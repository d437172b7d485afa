from __future__ import annotations

import enum
import json
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import pandas as pd
import typer

from analysis_pipeline.generators import (
    BENCH_GROUPS,
    RECIPES,
    compose_layers,
    load_layer_graph,
    planted_structure,
    recipe,
)
from analysis_pipeline.optimize import InitKind, greedy_maximize
from analysis_pipeline.settings import settings
from analysis_pipeline.stats import community_stats, correlate
from analysis_pipeline.sweep import (
    AXES,
    MeasureSpec,
    SweepRow,
    rows_frame,
    sweep_gamma,
    sweep_k,
    sweep_layers,
    sweep_omega,
    trend_report,
)
from analysis_pipeline.tables import gamma_table, ic_table, stats_table, write_csv
from mlmod_contracts.validate import (
    BOUNDS_VERIFICATION,
    Q_REPORT,
    SWEEP_ROW,
    ContractValidationError,
    assert_decomposition,
    validate_document,
)
from mlmod_core.bounds import (
    BoundSpec,
    gen_bipartite_canonical,
    gen_clique_canonical,
    lower_bound,
    realized_lower_bound,
    realized_upper_bound,
    upper_bound,
    verify,
)
from mlmod_core.communities import load_communities, majority_vote, save_communities
from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import CommunityFileMode, CouplingVariant, OrderingKind
from mlmod_core.errors import ContractViolation, MlmodError
from mlmod_core.measures import (
    CouplingSpec,
    QmsParams,
    QReport,
    ResolutionSpec,
    load_layer_gammas,
    q_multilayer,
    q_multislice,
    q_ng,
    q_oracle,
)
from mlmod_core.network.io import load_layer_order, load_network, network_sha256, save_network
from mlmod_core.network.model import MultilayerNetwork, total_degree
from mlmod_core.network.ordering import OrderingScheme
from mlmod_core.settings import settings as core_settings

app = typer.Typer(help="Multilayer modularity: evaluate, bound, analyze and optimize Q.")


class CouplingChoice(str, enum.Enum):
    none = "none"
    sym = "sym"
    asym_inner = "asym-inner"
    asym_outer = "asym-outer"


class ReportKind(str, enum.Enum):
    global_ = "global"
    per_community = "per-community"
    full_json = "full-json"


class Measure(str, enum.Enum):
    multilayer = "multilayer"
    ng = "ng"
    oracle = "oracle"


class Canonical(str, enum.Enum):
    bipartite = "bipartite"
    clique = "clique"


class Direction(str, enum.Enum):
    non_increasing = "non-increasing"
    non_decreasing = "non-decreasing"


_VARIANTS = {
    CouplingChoice.sym: CouplingVariant.symmetric,
    CouplingChoice.asym_inner: CouplingVariant.asymmetric_inner,
    CouplingChoice.asym_outer: CouplingVariant.asymmetric_outer,
}


@contextmanager
def _domain_errors() -> Iterator[None]:
    try:
        yield
    except (MlmodError, ContractValidationError) as exc:
        typer.echo(exc.message, err=True)
        raise typer.Exit(code=1) from exc


def _resolution(text: str) -> ResolutionSpec:
    try:
        return ResolutionSpec.parse(text)
    except ContractViolation as exc:
        raise typer.BadParameter(exc.message, param_hint="--resolution") from exc


def _scheme(ordering: OrderingKind, descending: bool) -> OrderingScheme:
    return OrderingScheme(kind=ordering, descending=descending)


def _coupling(choice: CouplingChoice, scheme: OrderingScheme, time_aware: bool) -> CouplingSpec:
    if choice == CouplingChoice.none:
        return CouplingSpec.none(scheme)
    return CouplingSpec(variant=_VARIANTS[choice], time_aware=time_aware, scheme=scheme)


def _load_network(network: Path, layer_order: Path | None) -> MultilayerNetwork:
    order = load_layer_order(layer_order) if layer_order is not None else None
    return load_network(network, layer_order=order)


def _load(
    network: Path,
    communities: Path,
    mode: CommunityFileMode,
    layer_order: Path | None,
) -> tuple[MultilayerNetwork, CommunityStructure]:
    net = _load_network(network, layer_order)
    return net, load_communities(communities, net, mode)


def _workers(threads: int | None) -> int:
    return threads or core_settings.workers


def _emit_json(document: dict[str, Any] | list[Any]) -> None:
    typer.echo(json.dumps(document, indent=2))


def _emit_scalar(
    net: MultilayerNetwork, measure: Measure, value: float, as_json: bool, **fields: Any
) -> None:
    if as_json:
        _emit_json(
            {
                "measure": measure.value,
                "q": value,
                **fields,
                "network_sha256": network_sha256(net),
            }
        )
    else:
        typer.echo(repr(value))


def _q_document(net: MultilayerNetwork, report: QReport) -> dict[str, Any]:
    document = {
        "schema_version": "q_report.v1",
        "network_sha256": network_sha256(net),
        **report.to_dict(net),
    }
    return validate_document(Q_REPORT, document)


def _emit_frame(frame: pd.DataFrame, as_json: bool, decimals: int | None = None) -> None:
    if as_json:
        typer.echo(frame.to_json(orient="records", double_precision=15))
    else:
        write_csv(frame, sys.stdout, decimals=decimals)


NETWORK = typer.Argument(..., help="Multilayer edge list (`<layer> <entity> <entity>`).")
COMMUNITIES = typer.Argument(..., help="Community file (see --mode).")
MODE = typer.Option(CommunityFileMode.per_node_layer, "--mode", help="Community file layout.")
LAYER_ORDER = typer.Option(None, "--layer-order", help="File listing layer labels in order.")
RESOLUTION = typer.Option("redundancy", "--resolution", help="`redundancy` or `fixed:<v>`.")
COUPLING = typer.Option(CouplingChoice.sym, "--coupling", help="Inter-layer coupling variant.")
ORDERING = typer.Option(OrderingKind.unordered, "--ordering", help="Admissible layer pairings.")
DESCENDING = typer.Option(False, "--descending", help="Walk the layer order backwards.")
TIME_AWARE = typer.Option(False, "--time-aware", help="Damp couplings by layer distance.")
THREADS = typer.Option(None, "--threads", help="Worker threads (default: MLMOD_WORKERS).")
AS_JSON = typer.Option(False, "--json", help="Emit JSON instead of text/CSV.")


@app.command("q")
def q(
    network: Path = NETWORK,
    communities: Path = COMMUNITIES,
    *,
    resolution: str = RESOLUTION,
    coupling: CouplingChoice = COUPLING,
    ordering: OrderingKind = ORDERING,
    descending: bool = DESCENDING,
    time_aware: bool = TIME_AWARE,
    measure: Measure = typer.Option(
        Measure.multilayer, "--measure", help="multilayer Q, single-layer Q_NG, or the oracle."
    ),
    layer: str | None = typer.Option(None, "--layer", help="Layer label for --measure ng."),
    report: ReportKind = typer.Option(ReportKind.global_, "--report", help="Output detail."),
    threads: int | None = THREADS,
    as_json: bool = AS_JSON,
    mode: CommunityFileMode = MODE,
    layer_order: Path | None = LAYER_ORDER,
) -> None:
    """Evaluate modularity of a community structure."""
    rspec = _resolution(resolution)
    if measure != Measure.multilayer and report != ReportKind.global_:
        raise typer.BadParameter("Only --measure multilayer has per-community reports.")
    with _domain_errors():
        net, cs = _load(network, communities, mode, layer_order)
        if measure == Measure.ng:
            layer_id = None
            if layer is not None:
                if layer not in net.layer_labels:
                    raise ContractViolation(f"Unknown layer {layer!r}.")
                layer_id = net.layer_labels.index(layer)
            _emit_scalar(net, measure, q_ng(net, cs, layer_id), as_json, layer=layer)
            return
        cspec = _coupling(coupling, _scheme(ordering, descending), time_aware)
        if measure == Measure.oracle:
            value = q_oracle(net, cs, rspec, cspec)
            _emit_scalar(
                net,
                measure,
                value,
                as_json,
                resolution=rspec.label(),
                coupling=cspec.label(),
            )
            return
        result = q_multilayer(net, cs, rspec, cspec, workers=_workers(threads))
        if as_json or report == ReportKind.full_json:
            _emit_json(_q_document(net, result))
        elif report == ReportKind.per_community:
            frame = pd.DataFrame(
                [
                    {"community": cs.labels[c], "contribution": value}
                    for c, value in sorted(result.per_community.items())
                ],
                columns=["community", "contribution"],
            )
            write_csv(frame, sys.stdout)
        else:
            typer.echo(repr(result.q_global))


@app.command("qms")
def qms(
    network: Path = NETWORK,
    communities: Path = COMMUNITIES,
    *,
    gamma: str = typer.Option("1.0", "--gamma", help="One gamma for all layers, or a file."),
    omega: float = typer.Option(1.0, "--omega", help="Inter-slice coupling strength."),
    ordering: OrderingKind = ORDERING,
    descending: bool = DESCENDING,
    as_json: bool = AS_JSON,
    mode: CommunityFileMode = MODE,
    layer_order: Path | None = LAYER_ORDER,
) -> None:
    """Evaluate multislice modularity Q_ms."""
    with _domain_errors():
        net, cs = _load(network, communities, mode, layer_order)
        try:
            params = QmsParams.uniform(net.ell, float(gamma), omega)
        except ValueError:
            params = QmsParams(gamma_per_layer=load_layer_gammas(Path(gamma), net), omega=omega)
        scheme = _scheme(ordering, descending)
        value = q_multislice(net, cs, params, scheme)
        if as_json:
            _emit_json(
                {
                    "network_sha256": network_sha256(net),
                    "q_ms": value,
                    "omega": params.omega,
                    "ordering": scheme.kind.value,
                    "gamma": {
                        net.layer_labels[layer]: params.gamma_of(layer) for layer in range(net.ell)
                    },
                }
            )
        else:
            typer.echo(repr(value))


@app.command("gamma-table")
def gamma_table_cmd(
    network: Path = NETWORK,
    communities: Path = COMMUNITIES,
    *,
    resolution: str = RESOLUTION,
    decimals: int | None = typer.Option(None, "--decimals", help="Rounding of gamma cells."),
    threads: int | None = THREADS,
    as_json: bool = AS_JSON,
    mode: CommunityFileMode = MODE,
    layer_order: Path | None = LAYER_ORDER,
) -> None:
    """Communities x layers table of resolution factors."""
    rspec = _resolution(resolution)
    places = settings.table_decimals if decimals is None else decimals
    with _domain_errors():
        net, cs = _load(network, communities, mode, layer_order)
        frame = gamma_table(net, cs, rspec, decimals=places, workers=_workers(threads))
        _emit_frame(frame, as_json, places)


@app.command("ic-table")
def ic_table_cmd(
    network: Path = NETWORK,
    communities: Path = COMMUNITIES,
    *,
    ordering: OrderingKind = ORDERING,
    descending: bool = DESCENDING,
    time_aware: bool = TIME_AWARE,
    threads: int | None = THREADS,
    as_json: bool = AS_JSON,
    mode: CommunityFileMode = MODE,
    layer_order: Path | None = LAYER_ORDER,
) -> None:
    """Per community and variant: coupling cumulated over admissible pairings (mean, std)."""
    with _domain_errors():
        net, cs = _load(network, communities, mode, layer_order)
        scheme = _scheme(ordering, descending)
        specs = [
            CouplingSpec(variant=variant, time_aware=time_aware, scheme=scheme)
            for variant in CouplingVariant
        ]
        _emit_frame(ic_table(net, cs, specs, workers=_workers(threads)), as_json)


@app.command("bounds")
def bounds(
    *,
    n: int = typer.Option(..., "--n", help="Entities (even, >= 4)."),
    layers: int = typer.Option(..., "--layers", help="Number of layers."),
    scheme: OrderingKind = typer.Option(OrderingKind.unordered, "--scheme", help="Ordering."),
    eta: int = typer.Option(0, "--eta", help="0 symmetric, 1 asymmetric coupling."),
    beta: int = typer.Option(1, "--beta", help="0 disables inter-layer coupling."),
    resolution: str = RESOLUTION,
    check: bool = typer.Option(False, "--verify", help="Cross-check on the canonical graphs."),
    tolerance: float = typer.Option(1e-9, "--tolerance", help="Allowed engine delta."),
    threads: int | None = THREADS,
    as_json: bool = AS_JSON,
) -> None:
    """Closed-form lower and upper values of Q; with --verify, engine deltas."""
    rspec = _resolution(resolution)
    with _domain_errors():
        spec = BoundSpec(
            n=n,
            ell=layers,
            scheme=OrderingScheme(kind=scheme),
            eta=eta,
            beta=beta,
            resolution=rspec,
        )
        if check:
            result = verify(spec, workers=_workers(threads))
            document = result.to_dict()
        else:
            result = None
            document = {
                "n": spec.n,
                "ell": spec.ell,
                "ordering": spec.scheme.kind.value,
                "p": spec.p,
                "eta": spec.eta,
                "beta": spec.beta,
                "resolution": rspec.label(),
                "lower": _unverified(lower_bound(spec), realized_lower_bound(spec)),
                "upper": _unverified(upper_bound(spec), realized_upper_bound(spec)),
            }
        document = validate_document(
            BOUNDS_VERIFICATION, {"schema_version": "bounds_verification.v1", **document}
        )
        if as_json:
            _emit_json(document)
        else:
            for side in ("lower", "upper"):
                entry = document[side]
                line = f"{side}\tprinted={entry['printed']!r}\trealized={entry['realized']!r}"
                if entry["engine"] is not None:
                    line += (
                        f"\tengine={entry['engine']!r}"
                        f"\tdelta_printed={entry['delta_printed']:.3e}"
                        f"\tdelta_realized={entry['delta_realized']:.3e}"
                    )
                typer.echo(line)
        if result is not None and not result.ok(tolerance):
            typer.echo(
                f"[bounds] engine differs from the closed form by more than {tolerance:g}",
                err=True,
            )
            raise typer.Exit(code=1)


def _unverified(printed: float, realized: float) -> dict[str, float | None]:
    return {
        "printed": printed,
        "realized": realized,
        "engine": None,
        "delta_printed": None,
        "delta_realized": None,
    }


@app.command("stats")
def stats_cmd(
    network: Path = NETWORK,
    communities: Path = COMMUNITIES,
    *,
    resolution: str = RESOLUTION,
    coupling: CouplingChoice = COUPLING,
    ordering: OrderingKind = ORDERING,
    descending: bool = DESCENDING,
    time_aware: bool = TIME_AWARE,
    correlations: bool = typer.Option(
        False, "--correlations", help="Print Pearson r of each statistic against Q contributions."
    ),
    threads: int | None = THREADS,
    as_json: bool = AS_JSON,
    mode: CommunityFileMode = MODE,
    layer_order: Path | None = LAYER_ORDER,
) -> None:
    """Per-community structural statistics next to each community's Q contribution."""
    rspec = _resolution(resolution)
    with _domain_errors():
        net, cs = _load(network, communities, mode, layer_order)
        cspec = _coupling(coupling, _scheme(ordering, descending), time_aware)
        report = q_multilayer(net, cs, rspec, cspec, workers=_workers(threads))
        stats = community_stats(net, cs)
        if correlations:
            frame = pd.DataFrame(
                [{"statistic": name, "r": r} for name, r in correlate(stats, report).items()],
                columns=["statistic", "r"],
            )
        else:
            frame = stats_table(cs, stats, report.per_community)
        _emit_frame(frame, as_json)


@app.command("gen")
def gen(
    *,
    recipe_name: str | None = typer.Option(
        None, "--recipe", help=f"Synthetic network: {', '.join(RECIPES)}."
    ),
    canonical: Canonical | None = typer.Option(
        None, "--canonical", help="Canonical bound construction instead of a recipe."
    ),
    layer_files: list[Path] = typer.Option(
        [], "--layer-file", help="Compose single-layer edge lists (repeatable)."
    ),
    seed: int | None = typer.Option(None, "--seed", help="Default: MLMOD_DEFAULT_SEED."),
    n: int | None = typer.Option(None, "--n", help="Entities (recipe default when omitted)."),
    layers: int = typer.Option(2, "--layers", help="Layers for `replicated` and canonical graphs."),
    out: Path = typer.Option(..., "--out", help="Network output file."),
    communities_out: Path | None = typer.Option(
        None, "--communities-out", help="Write the planted / canonical community structure."
    ),
    as_json: bool = AS_JSON,
) -> None:
    """Generate a multilayer network (and optionally its planted structure)."""
    sources = sum((recipe_name is not None, canonical is not None, bool(layer_files)))
    if sources != 1:
        raise typer.BadParameter("Pass exactly one of --recipe, --canonical or --layer-file.")
    with _domain_errors():
        cs: CommunityStructure | None
        if canonical is not None:
            if canonical == Canonical.bipartite:
                net, cs = gen_bipartite_canonical(n or 8, layers)
            else:
                net, cs = gen_clique_canonical(n or 8, layers)
        elif recipe_name is not None:
            net = recipe(
                recipe_name, settings.default_seed if seed is None else seed, n=n, layers=layers
            )
            cs = planted_structure(net, BENCH_GROUPS) if communities_out is not None else None
        else:
            net = compose_layers([load_layer_graph(path) for path in layer_files])
            cs = None
            if communities_out is not None:
                raise ContractViolation("Composed layer files carry no planted structure.")
        save_network(net, out)
        print(f"[gen] entities={net.n} layers={net.ell} out={out}", file=sys.stderr)
        if communities_out is not None and cs is not None:
            save_communities(cs, net, communities_out)
            print(f"[gen] communities={cs.k} out={communities_out}", file=sys.stderr)
        if as_json:
            written: dict[str, Any] = {"entities": net.n, "layers": net.ell, "out": str(out)}
            if communities_out is not None and cs is not None:
                written["communities"] = cs.k
                written["communities_out"] = str(communities_out)
            _emit_json(written)


def _values(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise typer.BadParameter(f"Expected comma-separated numbers, got {text!r}.") from exc


@app.command("sweep")
def sweep(
    *,
    axis: str = typer.Option(..., "--axis", help=f"One of {', '.join(AXES)}."),
    values: str = typer.Option(..., "--values", help="Comma-separated grid points."),
    network: Path | None = typer.Option(None, "--network", help="Network (default: recipe)."),
    communities: Path | None = typer.Option(
        None, "--communities", help="Structure for the omega and gamma axes."
    ),
    nodes: str = typer.Option("128,256", "--nodes", help="Node counts for the layers axis."),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the default network."),
    trend: Direction | None = typer.Option(
        None, "--trend", help="Report whether each measure's trace is monotone (never fails)."
    ),
    threads: int | None = THREADS,
    progress_every: int | None = typer.Option(None, "--progress-every", help="0 disables."),
    as_json: bool = AS_JSON,
    mode: CommunityFileMode = MODE,
) -> None:
    """Evaluate Q over a parameter grid; CSV rows with timings."""
    if axis not in AXES:
        raise typer.BadParameter(f"Unknown axis {axis!r}.", param_hint="--axis")
    grid = _values(values)
    workers = _workers(threads)
    every = settings.progress_every if progress_every is None else progress_every
    seed = settings.default_seed if seed is None else seed
    with _domain_errors():
        rows: list[SweepRow]
        if axis == "layers":
            rows = sweep_layers(
                [int(v) for v in grid],
                [int(v) for v in _values(nodes)],
                seed=seed,
                progress_every=every,
            )
        else:
            net = _load_network(network, None) if network else recipe("replicated", seed)
            cs = load_communities(communities, net, mode) if communities else None
            if axis == "k":
                measures = [
                    MeasureSpec("q-redundancy", ResolutionSpec.redundancy(), CouplingSpec()),
                    MeasureSpec("q-fixed", ResolutionSpec.fixed(1.0), CouplingSpec()),
                ]
                rows = sweep_k(
                    net, [int(v) for v in grid], measures, workers=workers, progress_every=every
                )
            else:
                cs = cs or planted_structure(net, BENCH_GROUPS)
                run = sweep_omega if axis == "omega" else sweep_gamma
                rows = run(net, cs, grid, workers=workers, progress_every=every)

        if trend is not None:
            for measure in dict.fromkeys(row.measure for row in rows):
                trace = [row.q for row in rows if row.measure == measure and row.q is not None]
                result = trend_report(trace, trend.value)
                print(
                    f"[sweep] trend measure={measure} direction={result.direction} "
                    f"status={result.status} violations={result.violations}",
                    file=sys.stderr,
                )
        if as_json:
            _emit_json(
                [
                    validate_document(
                        SWEEP_ROW, {"schema_version": "sweep_row.v1", **row.to_dict()}
                    )
                    for row in rows
                ]
            )
        else:
            write_csv(rows_frame(rows), sys.stdout)


@app.command("detect")
def detect(
    network: Path = NETWORK,
    *,
    resolution: str = RESOLUTION,
    coupling: CouplingChoice = COUPLING,
    ordering: OrderingKind = ORDERING,
    descending: bool = DESCENDING,
    time_aware: bool = TIME_AWARE,
    init: InitKind = typer.Option(InitKind.singletons, "--init", help="Starting structure."),
    max_passes: int | None = typer.Option(None, "--max-passes", help="Stop after N merges."),
    debug_merges: bool | None = typer.Option(
        None, "--debug-merges", help="Cross-check every merge against a full evaluation."
    ),
    vote: bool = typer.Option(
        False, "--majority-vote", help="Collapse the result to one community per entity."
    ),
    out: Path | None = typer.Option(None, "--out", help="Write the community structure here."),
    threads: int | None = THREADS,
    progress_every: int | None = typer.Option(None, "--progress-every", help="0 disables."),
    as_json: bool = AS_JSON,
    layer_order: Path | None = LAYER_ORDER,
) -> None:
    """Greedy agglomerative maximization of Q."""
    rspec = _resolution(resolution)
    with _domain_errors():
        net = _load_network(network, layer_order)
        cspec = _coupling(coupling, _scheme(ordering, descending), time_aware)
        workers = _workers(threads)
        result = greedy_maximize(
            net,
            rspec,
            cspec,
            init,
            max_passes,
            workers=workers,
            debug=settings.debug_merges if debug_merges is None else debug_merges,
            progress_every=settings.progress_every if progress_every is None else progress_every,
        )
        cs, report = result.structure, result.report
        if vote:
            cs = majority_vote(cs, net)
            report = q_multilayer(net, cs, rspec, cspec, workers=workers)
        print(
            f"[detect] merges={len(result.merges)} communities={cs.k} "
            f"initial_q={result.initial_q:.6f}",
            file=sys.stderr,
        )
        if out is not None:
            save_communities(cs, net, out)
        if as_json:
            _emit_json(_q_document(net, report))
        else:
            typer.echo(repr(report.q_global))


@app.command("validate")
def validate(
    network: Path = NETWORK,
    communities: Path = COMMUNITIES,
    *,
    mode: CommunityFileMode = MODE,
    layer_order: Path | None = LAYER_ORDER,
    threads: int | None = THREADS,
    as_json: bool = AS_JSON,
) -> None:
    """Load a network and a community file; report the first invariant violation."""
    with _domain_errors():
        net, cs = _load(network, communities, mode, layer_order)
        cspec = CouplingSpec()
        # Q is undefined on a network without edges or couplings; the structure can still be valid.
        checked = total_degree(net, cspec.scheme, cspec.beta) > 0
        if checked:
            report = q_multilayer(
                net, cs, ResolutionSpec.redundancy(), cspec, workers=_workers(threads)
            )
            assert_decomposition(
                report.q_global,
                [report.per_community[c] for c in range(cs.k)],
                tolerance=core_settings.decomposition_tolerance,
            )
        summary = {
            "entities": net.n,
            "layers": net.ell,
            "occurrences": len(cs.assignment),
            "communities": cs.k,
            "sha256": network_sha256(net),
            "decomposition": "checked" if checked else "skipped",
        }
        if as_json:
            _emit_json({"ok": True, **summary})
            return
        typer.echo("ok " + " ".join(f"{key}={value}" for key, value in summary.items()))
