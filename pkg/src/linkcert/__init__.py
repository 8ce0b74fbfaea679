"""linkcert: fixed-point and spectral-gap certificates from link graph data."""

from .errors import DomainError, LinkCertError, StructuralError
from .graph import GeneratingSetSpec, WeightedGraph

__all__ = [
    "DomainError",
    "GeneratingSetSpec",
    "LinkCertError",
    "StructuralError",
    "WeightedGraph",
]
