from mlmod_core.measures.coupling import (
    CouplingSpec,
    CouplingSummary,
    coupling_summary,
    ic,
    ic_asym,
    ic_sym,
    time_factor,
)
from mlmod_core.measures.modularity import QReport, q_multilayer, q_ng
from mlmod_core.measures.multislice import QmsParams, load_layer_gammas, q_multislice
from mlmod_core.measures.oracle import q_oracle
from mlmod_core.measures.resolution import (
    PairIndexEntry,
    RedundantPairIndex,
    ResolutionSpec,
    build_pair_index,
    gamma,
    gamma_from_nrp,
    nrp,
    pair_index,
    redundancy,
    supporting_layers,
)

__all__ = [
    "CouplingSpec",
    "CouplingSummary",
    "PairIndexEntry",
    "QReport",
    "QmsParams",
    "RedundantPairIndex",
    "ResolutionSpec",
    "build_pair_index",
    "coupling_summary",
    "gamma",
    "gamma_from_nrp",
    "ic",
    "ic_asym",
    "ic_sym",
    "load_layer_gammas",
    "nrp",
    "pair_index",
    "q_multilayer",
    "q_multislice",
    "q_ng",
    "q_oracle",
    "redundancy",
    "supporting_layers",
    "time_factor",
]
