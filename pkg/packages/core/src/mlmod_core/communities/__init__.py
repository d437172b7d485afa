from mlmod_core.communities.io import load_communities, save_communities
from mlmod_core.communities.model import (
    CommunityStructure,
    Projection,
    community_layer_degrees,
    majority_vote,
    projection,
)

__all__ = [
    "CommunityStructure",
    "Projection",
    "community_layer_degrees",
    "load_communities",
    "majority_vote",
    "projection",
    "save_communities",
]
