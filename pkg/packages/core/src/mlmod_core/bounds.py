"""
Closed-form lower and upper values of Q on the two canonical constructions, and the
generators that build those constructions for an engine cross-check.

The printed forms use a per-pairing coupling of (1+eta)/n. On the generated graphs the
projection couplings actually evaluate to 1/2 (symmetric) and 1 (asymmetric), i.e.
(1+eta)/2; the `realized_*` forms use that value and the engine's gamma, and are the ones
the engine reproduces exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from mlmod_core.communities.model import CommunityStructure
from mlmod_core.enums import CouplingVariant, ResolutionKind
from mlmod_core.errors import ContractViolation
from mlmod_core.measures.coupling import CouplingSpec
from mlmod_core.measures.modularity import q_multilayer
from mlmod_core.measures.resolution import GAMMA_WITHOUT_REDUNDANCY, ResolutionSpec, gamma_from_nrp
from mlmod_core.network.model import MultilayerNetwork
from mlmod_core.network.ordering import OrderingScheme


@dataclass(frozen=True)
class BoundSpec:
    n: int
    ell: int
    scheme: OrderingScheme = field(default_factory=OrderingScheme)
    eta: int = 0
    beta: int = 1
    resolution: ResolutionSpec = field(default_factory=ResolutionSpec.redundancy)

    def __post_init__(self) -> None:
        _check_canonical_size(self.n)
        if self.ell < 1:
            raise ContractViolation(f"ell must be >= 1, got {self.ell}.")
        if self.eta not in (0, 1) or self.beta not in (0, 1):
            raise ContractViolation("eta and beta must each be 0 or 1.")

    @property
    def p(self) -> int:
        return self.scheme.pair_count(self.ell)

    @property
    def coupling(self) -> CouplingSpec:
        variant = CouplingVariant.asymmetric_inner if self.eta else CouplingVariant.symmetric
        return CouplingSpec(beta=self.beta, variant=variant, scheme=self.scheme)


def _check_canonical_size(n: int) -> None:
    if n < 4 or n % 2:
        raise ContractViolation(f"Canonical constructions need an even n >= 4, got {n}.")


def _clique_pairs(n: int) -> int:
    """a = (n/2)(n/2 - 1): degree sum of one clique community on one layer."""
    half = n // 2
    return half * (half - 1)


def clique_gamma(n: int) -> float:
    """gamma when every intra-clique pair is redundant: nrp = a/2 pairs."""
    return gamma_from_nrp(_clique_pairs(n) // 2)


def _lower(spec: BoundSpec, gamma: float, kappa: float) -> float:
    n, ell, p = spec.n, spec.ell, spec.p
    d = n * n * ell / 2 + spec.beta * n * p
    community_degree = n * n / 4
    return 2 * (-gamma * ell * community_degree**2 / d**2 + spec.beta * p * kappa / d)


def _upper(spec: BoundSpec, gamma: float, kappa: float) -> float:
    n, ell, p = spec.n, spec.ell, spec.p
    a = _clique_pairs(n)
    d = 2 * ell * a + spec.beta * n * p
    return 2 * (ell * a / d - gamma * ell * (a / d) ** 2 + spec.beta * p * kappa / d)


def _fixed_or(spec: BoundSpec, value: float) -> float:
    if spec.resolution.kind == ResolutionKind.fixed:
        return spec.resolution.value
    return value


def lower_bound(spec: BoundSpec) -> float:
    """-n^2 l/(nl+2p)^2 + 4(1+eta)p/(n^2(nl+2p)); -1/l without couplings."""
    return _lower(spec, _fixed_or(spec, GAMMA_WITHOUT_REDUNDANCY), (1 + spec.eta) / spec.n)


def upper_bound(spec: BoundSpec) -> float:
    """(2l - gamma)/(2l) without couplings, gamma taken from the fully redundant clique."""
    return _upper(spec, _fixed_or(spec, clique_gamma(spec.n)), (1 + spec.eta) / spec.n)


def realized_lower_bound(spec: BoundSpec) -> float:
    return _lower(spec, _fixed_or(spec, GAMMA_WITHOUT_REDUNDANCY), (1 + spec.eta) / 2)


def realized_upper_bound(spec: BoundSpec) -> float:
    # a single layer has no redundant pairs
    engine_gamma = clique_gamma(spec.n) if spec.ell >= 2 else GAMMA_WITHOUT_REDUNDANCY
    return _upper(spec, _fixed_or(spec, engine_gamma), (1 + spec.eta) / 2)


def _canonical(
    n: int, ell: int, edges: list[tuple[int, int]]
) -> tuple[MultilayerNetwork, CommunityStructure]:
    net = MultilayerNetwork.build(
        entity_labels=[f"v{u}" for u in range(n)],
        layer_labels=[f"L{layer + 1}" for layer in range(ell)],
        layer_nodes=[range(n)] * ell,
        layer_edges=[edges] * ell,
    )
    half = n // 2
    cs = CommunityStructure.from_entity_mapping(
        net, {u: 0 if u < half else 1 for u in range(n)}, labels=["C1", "C2"]
    )
    return net, cs


def gen_bipartite_canonical(n: int, ell: int) -> tuple[MultilayerNetwork, CommunityStructure]:
    """Every layer is K(n/2, n/2) across the two halves, which are the two communities."""
    _check_canonical_size(n)
    half = n // 2
    return _canonical(n, ell, [(u, v) for u in range(half) for v in range(half, n)])


def gen_clique_canonical(n: int, ell: int) -> tuple[MultilayerNetwork, CommunityStructure]:
    """Every layer is two disjoint K(n/2) cliques on the two halves."""
    _check_canonical_size(n)
    half = n // 2
    edges = [
        (u, v)
        for lo, hi in ((0, half), (half, n))
        for u in range(lo, hi)
        for v in range(u + 1, hi)
    ]
    return _canonical(n, ell, edges)


@dataclass(frozen=True)
class BoundCheck:
    printed: float
    realized: float
    engine: float

    @property
    def delta_printed(self) -> float:
        return abs(self.engine - self.printed)

    @property
    def delta_realized(self) -> float:
        return abs(self.engine - self.realized)


@dataclass(frozen=True)
class BoundVerification:
    spec: BoundSpec
    lower: BoundCheck
    upper: BoundCheck

    def ok(self, tolerance: float = 1e-9) -> bool:
        return self.lower.delta_realized <= tolerance and self.upper.delta_realized <= tolerance

    def to_dict(self) -> dict[str, Any]:
        def check(c: BoundCheck) -> dict[str, float]:
            return {
                "printed": c.printed,
                "realized": c.realized,
                "engine": c.engine,
                "delta_printed": c.delta_printed,
                "delta_realized": c.delta_realized,
            }

        return {
            "n": self.spec.n,
            "ell": self.spec.ell,
            "ordering": self.spec.scheme.kind.value,
            "p": self.spec.p,
            "eta": self.spec.eta,
            "beta": self.spec.beta,
            "resolution": self.spec.resolution.label(),
            "lower": check(self.lower),
            "upper": check(self.upper),
        }


def verify(spec: BoundSpec, *, workers: int | None = 1) -> BoundVerification:
    """Build both canonical graphs and evaluate Q on them with the requested gamma and coupling."""
    checks = []
    for generate, printed, realized in (
        (gen_bipartite_canonical, lower_bound, realized_lower_bound),
        (gen_clique_canonical, upper_bound, realized_upper_bound),
    ):
        net, cs = generate(spec.n, spec.ell)
        report = q_multilayer(net, cs, spec.resolution, spec.coupling, workers=workers)
        checks.append(
            BoundCheck(printed=printed(spec), realized=realized(spec), engine=report.q_global)
        )
    return BoundVerification(spec=spec, lower=checks[0], upper=checks[1])
