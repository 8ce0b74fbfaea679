"""
Normalised Laplacian spectrum and the exact p = 2 Poincaré constant.

Convention: L = I - Deg^{-1/2} W Deg^{-1/2}. Its smallest positive eigenvalue
is the minimum over nonconstant f of

    sum_{{u,v} in edges} |f(u) - f(v)|^2 w(u,v) / sum_v |f(v) - Qf|^2 deg(v),

with edges counted once. Under this convention kappa_2 = lambda_1^{-1/2}
reproduces both the two-vertex value 2^{-1/2} and the Feit-Higman spectrum
of projective plane incidence graphs. The p-Laplacian gap uses ordered edge
sums and equals 2 * lambda_1 at p = 2.
"""

import logging
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import DomainError
from .finite_geometry import prime_power_parts
from .graph import WeightedGraph

logger = logging.getLogger(__name__)

ZERO_THRESHOLD = 1e-9
RESIDUAL_TOL = 1e-9


class SpectrumResult(NamedTuple):
    eigenvalues: Tuple[float, ...]
    lambda1: Optional[float]
    multiplicity_of_zero: int


def normalized_laplacian(graph: WeightedGraph) -> np.ndarray:
    """
    Dense symmetric normalised Laplacian in vertex declaration order.

    Raises:
        DomainError: If some vertex has degree 0.
    """
    degrees = graph.degrees
    isolated = [graph.vertices[i] for i in np.flatnonzero(degrees <= 0)]
    if isolated:
        raise DomainError(f"Normalised Laplacian needs positive degrees; isolated: {isolated}.")
    scale = 1.0 / np.sqrt(degrees)
    adjacency = graph.weight_matrix() * scale[:, None] * scale[None, :]
    return np.eye(graph.num_vertices) - adjacency


def _eigendecomposition(graph: WeightedGraph) -> Tuple[np.ndarray, np.ndarray]:
    laplacian = normalized_laplacian(graph)
    values, vectors = scipy.linalg.eigh(laplacian)
    residual = np.linalg.norm(laplacian @ vectors - vectors * values, axis=0)
    worst = float(residual.max()) if residual.size else 0.0
    if worst > RESIDUAL_TOL:
        logger.warning("Eigen residual %.3e exceeds %.0e", worst, RESIDUAL_TOL)
    return values, vectors


def spectrum(graph: WeightedGraph) -> SpectrumResult:
    values, _ = _eigendecomposition(graph)
    positive = values[values > ZERO_THRESHOLD]
    return SpectrumResult(
        eigenvalues=tuple(float(v) for v in values),
        lambda1=float(positive[0]) if positive.size else None,
        multiplicity_of_zero=int(np.count_nonzero(values <= ZERO_THRESHOLD)),
    )


def lambda1(graph: WeightedGraph) -> float:
    """
    Smallest strictly positive eigenvalue of the normalised Laplacian.

    Raises:
        DomainError: If the graph is disconnected (zero has multiplicity > 1).
    """
    result = spectrum(graph)
    if result.multiplicity_of_zero != 1 or result.lambda1 is None:
        raise DomainError(
            f"Graph is disconnected ({result.multiplicity_of_zero} components); "
            "it has no positive spectral gap."
        )
    return result.lambda1


def fiedler_vector(graph: WeightedGraph) -> np.ndarray:
    """Eigenfunction f (in vertex coordinates) attaining lambda_1 in the Rayleigh quotient."""
    values, vectors = _eigendecomposition(graph)
    index = int(np.argmax(values > ZERO_THRESHOLD))
    return vectors[:, index] / np.sqrt(graph.degrees)


def kappa2(graph: WeightedGraph) -> float:
    return lambda1(graph) ** -0.5


def feit_higman_lambda1(q: int) -> float:
    prime_power_parts(q)
    return 1.0 - math.sqrt(q) / (q + 1)


def feit_higman_kappa2(q: int) -> float:
    """Closed-form kappa_2 of the projective plane incidence graph, (1 - sqrt(q)/(q+1))^{-1/2}."""
    return feit_higman_lambda1(q) ** -0.5
