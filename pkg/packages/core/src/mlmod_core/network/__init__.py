from mlmod_core.network.model import MultilayerNetwork, degree, normalize_edge, total_degree
from mlmod_core.network.ordering import OrderingScheme


def valid_pairings(net: MultilayerNetwork, scheme: OrderingScheme, layer: int) -> tuple[int, ...]:
    """P(L): the layers comparable with `layer` under `scheme`."""
    return scheme.pairings(net.ell, layer)


__all__ = [
    "MultilayerNetwork",
    "OrderingScheme",
    "degree",
    "normalize_edge",
    "total_degree",
    "valid_pairings",
]
