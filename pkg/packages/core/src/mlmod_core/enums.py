from __future__ import annotations

import enum


class OrderingKind(str, enum.Enum):
    unordered = "unordered"
    adjacent = "adjacent"
    succeeding = "succeeding"


class CouplingVariant(str, enum.Enum):
    symmetric = "symmetric"
    asymmetric_inner = "asymmetric_inner"
    asymmetric_outer = "asymmetric_outer"


class ResolutionKind(str, enum.Enum):
    fixed = "fixed"
    redundancy = "redundancy"


class NetworkFormat(str, enum.Enum):
    edgelist = "edgelist"


class CommunityFileMode(str, enum.Enum):
    per_node_layer = "per-node-layer"
    per_entity = "per-entity"
