"""
The discrete p-Laplacian, its variational spectral gap and Cayley graphs of
finite quotients.

The gap uses the ordered double sum over neighbours in the numerator, so each
edge contributes twice and at p = 2 the gap equals twice the smallest
positive eigenvalue of the normalised Laplacian.
"""

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import DomainError, StructuralError
from .graph import WeightedGraph, is_connected
from .poincare import signed_power
from .spectral import lambda1

logger = logging.getLogger(__name__)

ALPHA_TOL = 1e-12
STALL_WINDOW = 50
STALL_TOL = 1e-10


def apply_p_laplacian(graph: WeightedGraph, f, p: float) -> np.ndarray:
    """Delta_p f(x) = sum_{y ~ x} (f(x) - f(y))^[p] w(x, y), with a^[p] = |a|^{p-1} sign(a)."""
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}.")
    f = np.asarray(f, dtype=float)
    tails, heads, weights = graph.edge_arrays
    flow = weights * signed_power(f[tails] - f[heads], p - 1)
    n = graph.num_vertices
    return np.bincount(tails, flow, minlength=n) - np.bincount(heads, flow, minlength=n)


def _alpha_derivative(f: np.ndarray, alpha: float, p: float, degrees: np.ndarray) -> float:
    """d/d(alpha) of sum |f - alpha|^p deg, divided by -p."""
    return float(np.sum(degrees * signed_power(f - alpha, p - 1)))


def inner_alpha(f, p: float, degrees) -> float:
    """
    The unique minimiser of alpha -> sum_x |f(x) - alpha|^p deg(x) for p > 1,
    by bisection on the derivative over [min f, max f].
    """
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}.")
    f = np.asarray(f, dtype=float)
    degrees = np.asarray(degrees, dtype=float)
    lo, hi = float(f.min()), float(f.max())
    if lo == hi:
        return lo
    scale = float(degrees.sum()) * float(np.abs(f).max()) ** (p - 1)
    # the derivative is decreasing in alpha: positive at min f, negative at max f
    while True:
        mid = 0.5 * (lo + hi)
        slope = _alpha_derivative(f, mid, p, degrees)
        if abs(slope) <= ALPHA_TOL * scale or mid in (lo, hi):
            return mid
        if slope > 0:
            lo = mid
        else:
            hi = mid


def p_rayleigh_quotient(graph: WeightedGraph, f, p: float) -> Tuple[float, float]:
    """(quotient, alpha*) of the p-spectral-gap quotient for a single f."""
    f = np.asarray(f, dtype=float)
    tails, heads, weights = graph.edge_arrays
    degrees = graph.degrees
    numerator = 2.0 * float(np.sum(np.abs(f[tails] - f[heads]) ** p * weights))
    alpha = inner_alpha(f, p, degrees)
    denominator = float(np.sum(np.abs(f - alpha) ** p * degrees))
    if not denominator > 0:
        raise DomainError("The p-Rayleigh quotient is undefined for constant f.")
    return numerator / denominator, alpha


@dataclass(frozen=True)
class RayleighResult:
    p: float
    value: float
    witness: np.ndarray
    alpha_star: float
    iterations: int
    restarts: int
    residual: float


def _quotient_gradient(graph: WeightedGraph, f: np.ndarray, p: float, value: float, alpha: float):
    # Stationarity of the quotient: 2 Delta_p f = value * deg * (f - alpha)^[p].
    degrees = graph.degrees
    denominator = float(np.sum(np.abs(f - alpha) ** p * degrees))
    grad_num = 2.0 * p * apply_p_laplacian(graph, f, p)
    grad_den = p * degrees * signed_power(f - alpha, p - 1)
    return (grad_num - value * grad_den) / denominator


def _normalise(f: np.ndarray, alpha: float) -> np.ndarray:
    shifted = f - alpha
    return shifted / np.linalg.norm(shifted)


def _descend(
    graph: WeightedGraph, f: np.ndarray, p: float, max_iterations: int
) -> Tuple[np.ndarray, float, float, int]:
    value, alpha = p_rayleigh_quotient(graph, f, p)
    f = _normalise(f, alpha)
    value, alpha = p_rayleigh_quotient(graph, f, p)
    history: List[float] = [value]
    iteration = 0
    for iteration in range(1, max_iterations + 1):
        direction = _quotient_gradient(graph, f, p, value, alpha)
        direction -= direction.mean()
        norm = np.linalg.norm(direction)
        if norm < 1e-15:
            break
        direction /= norm
        step = 1.0
        while step > 1e-14:
            candidate = f - step * direction
            if np.ptp(candidate) > 0:
                candidate_value, candidate_alpha = p_rayleigh_quotient(graph, candidate, p)
                if candidate_value < value:
                    break
            step *= 0.5
        else:
            break
        # the quotient and alpha are equivariant under f -> (f - alpha) / c
        f, value, alpha = _normalise(candidate, candidate_alpha), candidate_value, 0.0
        history.append(value)
        if len(history) > STALL_WINDOW:
            previous = history[-STALL_WINDOW - 1]
            if (previous - value) / value < STALL_TOL:
                break
    return f, value, alpha, iteration


def lambda1_p(
    graph: WeightedGraph,
    p: float,
    restarts: int = 32,
    seed: int = 0,
    max_iterations: int = 20_000,
) -> RayleighResult:
    """
    Best (smallest) p-Rayleigh quotient found by multi-restart normalised
    gradient descent; an upper bound on lambda_1^(p).

    Restart i starts from ``default_rng([seed, i])``; the smallest value wins,
    ties go to the lowest restart index.

    Raises:
        DomainError: If the graph is disconnected or p <= 1.
    """
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}.")
    if graph.num_vertices < 2 or not is_connected(graph):
        raise DomainError("The p-spectral gap needs a connected graph with at least two vertices.")
    if restarts < 1:
        raise DomainError(f"restarts must be positive, got {restarts}.")

    best = None
    total_iterations = 0
    for index in range(restarts):
        rng = np.random.default_rng([seed, index])
        start = rng.standard_normal(graph.num_vertices)
        f, value, alpha, iterations = _descend(graph, start, p, max_iterations)
        total_iterations += iterations
        logger.debug("restart %d: quotient %.12g after %d iterations", index, value, iterations)
        if best is None or value < best[1]:
            best = (f, value, alpha)

    f, value, alpha = best
    residual = 2.0 * apply_p_laplacian(graph, f, p) - value * graph.degrees * signed_power(
        f - alpha, p - 1
    )
    return RayleighResult(
        p=p,
        value=value,
        witness=f,
        alpha_star=alpha,
        iterations=total_iterations,
        restarts=restarts,
        residual=float(np.abs(residual).max()),
    )


# ------------------------------ Cayley graphs ------------------------------ #
@dataclass(frozen=True)
class CayleyGraph:
    """Cayley graph of a finite group H for generator images of S, with weights deg(s)/omega(E)."""

    graph: WeightedGraph
    elements: Tuple[str, ...]
    identity: int
    generator_images: Mapping[str, int]


def _identity_and_inverses(table: np.ndarray) -> Tuple[int, np.ndarray]:
    order = table.shape[0]
    everything = np.arange(order)
    candidates = [
        e for e in range(order)
        if np.array_equal(table[e], everything) and np.array_equal(table[:, e], everything)
    ]
    if len(candidates) != 1:
        raise StructuralError("Multiplication table has no two-sided identity.")
    identity = candidates[0]
    inverses = np.empty(order, dtype=int)
    for g in range(order):
        hits = np.flatnonzero(table[g] == identity)
        if hits.size != 1 or table[hits[0], g] != identity:
            raise StructuralError(f"Element {g} has no two-sided inverse in the table.")
        inverses[g] = hits[0]
    return identity, inverses


def _validate_table(table: np.ndarray) -> None:
    if table.ndim != 2 or table.shape[0] == 0 or table.shape[1] != table.shape[0]:
        raise StructuralError("Multiplication table must be a nonempty square array.")
    order = table.shape[0]
    if table.min() < 0 or table.max() >= order:
        raise StructuralError("Multiplication table entries must be element indices.")
    for row in table:
        if np.unique(row).size != order:
            raise StructuralError("Multiplication table rows must be permutations.")


def cayley_graph(
    mult_table: Sequence[Sequence[int]],
    images: Mapping[str, int],
    link_degrees: Mapping[str, float],
    omega_E: float,
    inverse: Optional[Mapping[str, str]] = None,
    element_labels: Optional[Sequence[str]] = None,
) -> CayleyGraph:
    """
    Cayley graph of H with edge {g, h} iff g^-1 h = image(s), weighted
    deg(s)/omega(E) where deg is taken in the link graph of S.

    Raises:
        StructuralError: Malformed table, images outside H, the identity
            among the images, two generators with the same image, or
            images(s^-1) != images(s)^-1 when ``inverse`` is given.
        DomainError: If the images do not generate H.
    """
    table = np.asarray(mult_table, dtype=int)
    _validate_table(table)
    order = table.shape[0]
    identity, inverses = _identity_and_inverses(table)
    labels = tuple(element_labels) if element_labels is not None else tuple(str(g) for g in range(order))
    if len(labels) != order:
        raise StructuralError(f"{len(labels)} element labels for a group of order {order}.")

    by_element: Dict[int, str] = {}
    for s, image in images.items():
        if not 0 <= image < order:
            raise StructuralError(f"Image of '{s}' is {image}, outside the group.")
        if image == identity:
            raise StructuralError(f"Generator '{s}' maps to the identity.")
        if image in by_element:
            raise StructuralError(f"Generators '{by_element[image]}' and '{s}' share an image.")
        by_element[image] = s
        if s not in link_degrees:
            raise StructuralError(f"No link degree for generator '{s}'.")
    for s, image in images.items():
        if inverses[image] not in by_element:
            raise StructuralError(f"Image set is not symmetric: inverse of image('{s}') missing.")
        partner = by_element[inverses[image]]
        if inverse is not None and inverse.get(s) != partner:
            raise StructuralError(
                f"images({inverse.get(s)}) != images({s})^-1: involution mismatch."
            )
        if not math.isclose(link_degrees[s], link_degrees[partner], rel_tol=1e-12):
            raise StructuralError(
                f"deg({s}) != deg({partner}); Cayley weights would not be symmetric."
            )

    edges = []
    for g in range(order):
        for s_image, s in by_element.items():
            h = int(table[g, s_image])
            if g < h:
                edges.append((labels[g], labels[h], link_degrees[s] / omega_E))
    graph = WeightedGraph(labels, tuple(edges))
    if not nx.is_connected(graph.to_networkx()):
        raise DomainError("Generator images do not generate H: the Cayley graph is disconnected.")
    return CayleyGraph(graph, labels, identity, MappingProxyType(dict(images)))


# ----------------------------- Quotient bound ----------------------------- #
@dataclass(frozen=True)
class QuotientBoundReport:
    p: float
    pstar: float
    claimed: bool
    condition_value: float
    bound_stated: Optional[float] = None
    bound_derived: Optional[float] = None
    lambda_p: Optional[float] = None
    lambda_pstar: Optional[float] = None
    stated_holds: Optional[bool] = None
    derived_holds: Optional[bool] = None
    margin_stated: Optional[float] = None
    margin_derived: Optional[float] = None
    lambda_p_exact: Optional[float] = None
    note: str = ""


def check_quotient_bound(
    kappa_p_upper: float,
    cayley: CayleyGraph,
    p: float,
    restarts: int = 32,
    seed: int = 0,
) -> QuotientBoundReport:
    """
    Compares the p-spectral gaps of a finite quotient with the bounds implied
    by the link graph's kappa_p: lambda^(p) >= 2(1 - 2^{-1/p} kappa_p) as
    stated, and lambda^(p*) >= (2(1 - 2^{-1/p} kappa_p))^{p*} as derived.
    """
    if not 1 < p < math.inf:
        raise DomainError(f"p must satisfy 1 < p < inf, got {p}.")
    pstar = p / (p - 1.0)
    condition = 2.0 ** (-1.0 / p) * kappa_p_upper
    if condition >= 1.0:
        return QuotientBoundReport(p, pstar, False, condition, note="no bound claimed")

    stated = 2.0 * (1.0 - condition)
    derived = stated**pstar
    gap_p = lambda1_p(cayley.graph, p, restarts=restarts, seed=seed).value
    gap_pstar = (
        gap_p if math.isclose(pstar, p) else lambda1_p(cayley.graph, pstar, restarts=restarts, seed=seed).value
    )
    exact = 2.0 * lambda1(cayley.graph) if p == 2 else None
    return QuotientBoundReport(
        p=p,
        pstar=pstar,
        claimed=True,
        condition_value=condition,
        bound_stated=stated,
        bound_derived=derived,
        lambda_p=gap_p,
        lambda_pstar=gap_pstar,
        stated_holds=gap_p >= stated,
        derived_holds=gap_pstar >= derived,
        margin_stated=gap_p - stated,
        margin_derived=gap_pstar - derived,
        lambda_p_exact=exact,
    )
