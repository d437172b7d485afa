"""
Greedy agglomerative maximization of multilayer Q.

A baseline that uses Q as an objective, not a competitive detection method. Q splits into
per-community terms f(C) over a constant normalizer d(V_L), so the gain of merging A and B is
(f(A ∪ B) - f(A) - f(B)) / d(V_L), and a merge only changes the gains of pairs that touch the
merged community.
"""

from __future__ import annotations

import enum
import math
import sys
from collections import defaultdict
from dataclasses import dataclass, field

from mlmod_core.communities.model import CommunityStructure, Occurrence
from mlmod_core.enums import ResolutionKind
from mlmod_core.errors import ContractViolation, DegenerateInputError
from mlmod_core.measures.coupling import CouplingSpec, coupling_value, time_factor
from mlmod_core.measures.modularity import QReport, q_multilayer
from mlmod_core.measures.resolution import ResolutionSpec, gamma_from_nrp
from mlmod_core.network.model import MultilayerNetwork, degree, total_degree
from mlmod_core.parallel import ordered_map

# gains at or below float noise count as no improvement
MIN_GAIN = 1e-12


class InitKind(str, enum.Enum):
    singletons = "singletons"
    per_entity_singletons = "per-entity-singletons"


@dataclass(frozen=True)
class MergeRecord:
    step: int
    kept: int
    absorbed: int
    delta_q: float
    q_after: float


@dataclass(frozen=True)
class GreedyResult:
    structure: CommunityStructure
    report: QReport
    merges: list[MergeRecord] = field(default_factory=list)
    initial_q: float = 0.0


@dataclass
class _Community:
    members: list[set[int]]
    entities: set[int]
    degree: list[int]
    internal: list[int]
    value: float = 0.0


class _Objective:
    """f(C): the un-normalized contribution of one community to Q."""

    def __init__(
        self,
        net: MultilayerNetwork,
        rspec: ResolutionSpec,
        cspec: CouplingSpec,
        normalizer: int,
    ) -> None:
        self.net = net
        self.rspec = rspec
        self.cspec = cspec
        self.normalizer = normalizer
        self.positions = cspec.scheme.positions(net.ell)
        self.pairings = [cspec.scheme.pairings(net.ell, layer) for layer in range(net.ell)]
        self.sizes = [len(nodes) for nodes in net.layer_nodes]
        self.redundant: dict[int, dict[int, tuple[int, ...]]] = defaultdict(dict)
        if rspec.kind == ResolutionKind.redundancy:
            linked: dict[tuple[int, int], list[int]] = defaultdict(list)
            for layer in range(net.ell):
                for u, v in net.layer_edges(layer):
                    linked[(u, v)].append(layer)
            for (u, v), layers in linked.items():
                if len(layers) >= 2:
                    self.redundant[u][v] = tuple(layers)
                    self.redundant[v][u] = tuple(layers)

    def _nrp(self, entities: set[int]) -> list[int]:
        counts = [0] * self.net.ell
        for u in entities:
            for v, layers in self.redundant.get(u, {}).items():
                if u < v and v in entities:
                    for layer in layers:
                        counts[layer] += 1
        return counts

    def value(self, comm: _Community) -> float:
        fixed = self.rspec.kind == ResolutionKind.fixed
        nrps = None if fixed else self._nrp(comm.entities)
        terms: list[float] = []
        for layer in range(self.net.ell):
            if comm.members[layer]:
                g = self.rspec.value if fixed else gamma_from_nrp(nrps[layer])
                terms.append(comm.internal[layer] - g * comm.degree[layer] ** 2 / self.normalizer)
            if not self.cspec.beta:
                continue
            for other in self.pairings[layer]:
                ic = coupling_value(
                    self.cspec.variant,
                    comm.members[layer],
                    comm.members[other],
                    self.net.shared_count(layer, other),
                    self.sizes[layer],
                    self.sizes[other],
                )
                if self.cspec.time_aware and ic:
                    ic *= time_factor(self.positions[layer], self.positions[other])
                terms.append(ic)
        return math.fsum(terms)

    def merged(self, a: _Community, b: _Community) -> _Community:
        internal = []
        for layer, graph in enumerate(self.net.graphs):
            small, large = sorted((a.members[layer], b.members[layer]), key=len)
            cross = sum(1 for u in small for v in graph.adj[u] if v in large)
            internal.append(a.internal[layer] + b.internal[layer] + 2 * cross)
        comm = _Community(
            members=[a.members[layer] | b.members[layer] for layer in range(self.net.ell)],
            entities=a.entities | b.entities,
            degree=[x + y for x, y in zip(a.degree, b.degree, strict=True)],
            internal=internal,
        )
        comm.value = self.value(comm)
        return comm


def _initial(net: MultilayerNetwork, init: InitKind) -> list[_Community]:
    ell = net.ell
    comms: list[_Community] = []
    if init == InitKind.singletons:
        for u, present in enumerate(net.entity_layers):
            for layer in present:
                members = [set() for _ in range(ell)]
                members[layer].add(u)
                degrees = [0] * ell
                degrees[layer] = degree(net, u, layer)
                comms.append(_Community(members, {u}, degrees, [0] * ell))
    else:
        for u, present in enumerate(net.entity_layers):
            members = [{u} if layer in present else set() for layer in range(ell)]
            degrees = [degree(net, u, layer) for layer in range(ell)]
            comms.append(_Community(members, {u}, degrees, [0] * ell))
    return comms


def _structure(net: MultilayerNetwork, comms: dict[int, _Community]) -> CommunityStructure:
    def first_occurrence(cid: int) -> Occurrence:
        comm = comms[cid]
        return min((u, layer) for layer, members in enumerate(comm.members) for u in members)

    order = sorted(comms, key=first_occurrence)
    assignment = {
        (u, layer): idx
        for idx, cid in enumerate(order)
        for layer, members in enumerate(comms[cid].members)
        for u in members
    }
    return CommunityStructure.from_assignment(
        net, assignment, labels=[f"C{idx + 1}" for idx in range(len(order))]
    )


def greedy_maximize(
    net: MultilayerNetwork,
    rspec: ResolutionSpec,
    cspec: CouplingSpec,
    init: InitKind = InitKind.singletons,
    max_passes: int | None = None,
    *,
    workers: int = 1,
    debug: bool = False,
    progress_every: int = 0,
) -> GreedyResult:
    """
    Merge the candidate pair with the largest positive gain until none is left or
    `max_passes` merges were made. Candidates share an intra-layer edge or an entity; ties
    go to the lowest (id, id) pair.
    """
    normalizer = total_degree(net, cspec.scheme, cspec.beta)
    if not normalizer:
        raise DegenerateInputError("Total degree d(V_L) is zero; Q is undefined.")
    objective = _Objective(net, rspec, cspec, normalizer)
    comms = dict(enumerate(_initial(net, init)))
    for comm in comms.values():
        comm.value = objective.value(comm)

    owner: dict[Occurrence, int] = {
        (u, layer): cid
        for cid, comm in comms.items()
        for layer, members in enumerate(comm.members)
        for u in members
    }
    neighbors: dict[int, set[int]] = defaultdict(set)
    for layer in range(net.ell):
        for u, v in net.layer_edges(layer):
            a, b = owner[(u, layer)], owner[(v, layer)]
            if a != b:
                neighbors[a].add(b)
                neighbors[b].add(a)
    for u, present in enumerate(net.entity_layers):
        holders = {owner[(u, layer)] for layer in present}
        for a in holders:
            neighbors[a].update(holders - {a})

    def gain(pair: tuple[int, int]) -> tuple[float, _Community]:
        a, b = pair
        merged = objective.merged(comms[a], comms[b])
        return (merged.value - comms[a].value - comms[b].value) / normalizer, merged

    def score(pairs: list[tuple[int, int]]) -> dict[tuple[int, int], tuple[float, _Community]]:
        return dict(zip(pairs, ordered_map(gain, pairs, workers), strict=True))

    candidates = score(sorted({(min(a, b), max(a, b)) for a in neighbors for b in neighbors[a]}))

    q = math.fsum(comm.value for comm in comms.values()) / normalizer
    initial_q = q
    merges: list[MergeRecord] = []
    while candidates and (max_passes is None or len(merges) < max_passes):
        best_pair: tuple[int, int] | None = None
        best_gain = MIN_GAIN
        for pair, (delta, _) in candidates.items():
            tied = delta == best_gain and best_pair is not None and pair < best_pair
            if delta > best_gain or tied:
                best_pair, best_gain = pair, delta
        if best_pair is None:
            break

        kept, absorbed = best_pair
        comms[kept] = candidates[best_pair][1]
        del comms[absorbed]
        touched = (neighbors[kept] | neighbors[absorbed]) - {kept, absorbed}
        for x in neighbors[kept] | {absorbed}:
            candidates.pop((min(kept, x), max(kept, x)), None)
        for x in neighbors.pop(absorbed):
            candidates.pop((min(absorbed, x), max(absorbed, x)), None)
            neighbors[x].discard(absorbed)
        neighbors[kept] = touched
        for x in touched:
            neighbors[x].add(kept)
        candidates.update(score(sorted((min(kept, x), max(kept, x)) for x in touched)))

        q += best_gain
        record = MergeRecord(len(merges) + 1, kept, absorbed, best_gain, q)
        merges.append(record)
        if progress_every and record.step % progress_every == 0:
            print(
                f"[detect] merge={record.step} kept={kept} absorbed={absorbed} "
                f"dq={best_gain:.6g} q={q:.6f}",
                file=sys.stderr,
            )
        if debug:
            full = q_multilayer(net, _structure(net, comms), rspec, cspec, workers=1).q_global
            if abs(full - q) > 1e-9:
                raise ContractViolation(
                    f"Incremental Q {q!r} drifted from full evaluation {full!r} "
                    f"at merge {record.step}."
                )

    structure = _structure(net, comms)
    report = q_multilayer(net, structure, rspec, cspec, workers=workers)
    return GreedyResult(structure=structure, report=report, merges=merges, initial_q=initial_q)
