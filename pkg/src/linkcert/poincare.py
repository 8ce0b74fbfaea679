"""
Estimates of the p-Poincaré constant kappa_p(S, R) of a weighted graph.

kappa_p is the supremum over nonconstant f of

    [sum_v |f(v) - Qf|^p deg(v)]^{1/p} / [sum_{{u,v} in edges} |f(u) - f(v)|^p w(u,v)]^{1/p}

with Qf the degree-weighted mean and every unordered edge counted once.
Optimisation only ever produces lower bounds (a witness f attains them).
Certified upper bounds come from the eigensolver (p = 2), norm interpolation
between l_2 and l_p, or the brute-force mesh with its covering slack.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import DomainError, StructuralError
from .graph import GeneratingSetSpec, WeightedGraph, graph_stats, is_connected, path_distance
from .spectral import fiedler_vector, kappa2

logger = logging.getLogger(__name__)

BRUTE_MAX_VERTICES = 5
BOUND_TOL = 1e-9


class Method(str, Enum):
    EIGEN = "eigen"
    OPTIMIZE = "optimize"
    BRUTE = "brute"
    INTERP = "interp"
    PATH = "path"

    @property
    def certifies_upper(self) -> bool:
        return self in (Method.EIGEN, Method.BRUTE, Method.INTERP)


@dataclass(frozen=True)
class PoincareEstimate:
    """Bracket lower <= kappa_p <= upper, tagged with the method that produced it."""

    p: float
    lower: float
    upper: float
    method: Method
    witness: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    resolution: Optional[float] = None

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError(f"Lower bound must be nonnegative, got {self.lower}.")
        if self.lower > self.upper + BOUND_TOL:
            raise ValueError(f"Lower bound {self.lower} exceeds upper bound {self.upper}.")

    @classmethod
    def exact(
        cls, p: float, value: float, method: Method = Method.EIGEN, witness=None
    ) -> "PoincareEstimate":
        return cls(p, value, value, Method(method), witness)

    @property
    def certified_upper(self) -> Optional[float]:
        if self.method.certifies_upper and math.isfinite(self.upper):
            return self.upper
        return None


def _check_p(p: float) -> None:
    if not (1 < p < math.inf):
        raise DomainError(f"p must satisfy 1 < p < inf, got {p}.")


def _check_connected(graph: WeightedGraph) -> None:
    if graph.num_vertices < 2 or not is_connected(graph):
        raise DomainError("Poincaré constants need a connected graph with at least two vertices.")


def signed_power(x: np.ndarray, exponent: float) -> np.ndarray:
    """x^[exponent + 1] in the notation |x|^exponent sign(x)."""
    return np.sign(x) * np.abs(x) ** exponent


# ------------------------------ Ratio ------------------------------ #
def poincare_ratio(graph: WeightedGraph, f, p: float) -> float:
    """
    The Poincaré ratio of f (scalar, shape (n,), or vector valued, shape (n, k)).

    For vector-valued f the fibre norm is the l_p norm on R^k.

    Raises:
        DomainError: If f is constant on every edge, or p is out of range.
    """
    _check_p(p)
    f = np.asarray(f, dtype=float)
    if f.shape[0] != graph.num_vertices:
        raise StructuralError(
            f"Function has {f.shape[0]} values, graph has {graph.num_vertices} vertices."
        )
    values = f.reshape(graph.num_vertices, -1)
    deg = graph.degrees
    tails, heads, weights = graph.edge_arrays
    centred = values - (deg @ values) / graph.omega_E
    numerator = np.sum(np.abs(centred) ** p * deg[:, None])
    denominator = np.sum(np.abs(values[tails] - values[heads]) ** p * weights[:, None])
    if not denominator > 0:
        raise DomainError("Poincaré ratio is undefined for a function constant on every edge.")
    return float((numerator / denominator) ** (1.0 / p))


class _PowerRatio:
    """F(f) = ratio(f)^p with its Euclidean gradient, for mean-zero f."""

    def __init__(self, graph: WeightedGraph, p: float):
        self.p = p
        self.n = graph.num_vertices
        self.deg = np.asarray(graph.degrees)
        self.omega_E = graph.omega_E
        self.tails, self.heads, self.weights = graph.edge_arrays

    def terms(self, f: np.ndarray):
        centred = f - (self.deg @ f) / self.omega_E
        diff = f[self.tails] - f[self.heads]
        numerator = float(np.sum(np.abs(centred) ** self.p * self.deg))
        denominator = float(np.sum(np.abs(diff) ** self.p * self.weights))
        return numerator, denominator, centred, diff

    def value(self, f: np.ndarray) -> float:
        numerator, denominator, _, _ = self.terms(f)
        return numerator / denominator if denominator > 0 else 0.0

    def gradient(self, f: np.ndarray) -> np.ndarray:
        p = self.p
        numerator, denominator, centred, diff = self.terms(f)
        inner = p * self.deg * signed_power(centred, p - 1)
        grad_num = inner - self.deg * inner.sum() / self.omega_E
        edge_terms = p * self.weights * signed_power(diff, p - 1)
        grad_den = np.bincount(self.tails, edge_terms, minlength=self.n) - np.bincount(
            self.heads, edge_terms, minlength=self.n
        )
        return (grad_num * denominator - numerator * grad_den) / denominator**2


# --------------------------- Optimisation --------------------------- #
def _project_mean_zero(x: np.ndarray, deg: np.ndarray) -> np.ndarray:
    return x - (x @ deg) / (deg @ deg) * deg


def _random_start(rng: np.random.Generator, deg: np.ndarray) -> np.ndarray:
    f = _project_mean_zero(rng.standard_normal(deg.size), deg)
    return f / np.linalg.norm(f)


def _ascend(
    objective: _PowerRatio, f: np.ndarray, tol: float, max_iterations: int
) -> Tuple[np.ndarray, float, int]:
    """Projected gradient ascent on {sum f deg = 0, |f| = 1} with halving line search."""
    deg = objective.deg
    value = objective.value(f)
    iteration = 0
    for iteration in range(1, max_iterations + 1):
        direction = _project_mean_zero(objective.gradient(f), deg)
        direction -= (direction @ f) * f
        norm = np.linalg.norm(direction)
        if norm < 1e-15:
            break
        direction /= norm
        step = 1.0
        while step > 1e-14:
            candidate = _project_mean_zero(f + step * direction, deg)
            candidate /= np.linalg.norm(candidate)
            candidate_value = objective.value(candidate)
            if candidate_value > value:
                break
            step *= 0.5
        else:
            break
        improvement = (candidate_value - value) / value if value > 0 else math.inf
        f, value = candidate, candidate_value
        if improvement < tol:
            break
    return f, value, iteration


def kappa_p_optimize(
    graph: WeightedGraph,
    p: float,
    restarts: int = 32,
    seed: int = 0,
    tol: float = 1e-10,
    max_iterations: int = 100_000,
) -> PoincareEstimate:
    """
    Lower bound on kappa_p by multi-restart projected gradient ascent.

    Restart i draws its start from ``default_rng([seed, i])``, so results do not
    depend on evaluation order; the best value wins, ties go to the lowest
    restart index. At p = 2 the upper bound is the eigensolver's kappa_2.
    """
    _check_p(p)
    _check_connected(graph)
    if restarts < 1:
        raise DomainError(f"restarts must be positive, got {restarts}.")

    objective = _PowerRatio(graph, p)
    best_f, best_value = None, -math.inf
    for index in range(restarts):
        rng = np.random.default_rng([seed, index])
        f, value, iterations = _ascend(
            objective, _random_start(rng, objective.deg), tol, max_iterations
        )
        logger.debug("restart %d: F=%.12g after %d iterations", index, value, iterations)
        if value > best_value:
            best_f, best_value = f, value

    lower = poincare_ratio(graph, best_f, p)
    upper = kappa2(graph) if p == 2 else math.inf
    return PoincareEstimate(p, lower, max(upper, lower), Method.OPTIMIZE, witness=best_f)


# ---------------------------- Brute force ---------------------------- #
def _cube_sphere_mesh(dim: int, mesh: int) -> np.ndarray:
    """Grid on the surface of [-1, 1]^dim with mesh subdivisions per edge, projected to the sphere."""
    grid = np.linspace(-1.0, 1.0, mesh + 1)
    faces = []
    others = np.array(np.meshgrid(*([grid] * (dim - 1)), indexing="ij")).reshape(dim - 1, -1).T
    for axis in range(dim):
        for sign in (-1.0, 1.0):
            face = np.insert(others, axis, sign, axis=1)
            faces.append(face)
    points = np.vstack(faces)
    return points / np.linalg.norm(points, axis=1)[:, None]


def _ratios(objective: _PowerRatio, functions: np.ndarray) -> np.ndarray:
    """Row-wise ratio^1 for a batch of functions (rows)."""
    p = objective.p
    centred = functions - (functions @ objective.deg)[:, None] / objective.omega_E
    numerator = np.sum(np.abs(centred) ** p * objective.deg, axis=1)
    diff = functions[:, objective.tails] - functions[:, objective.heads]
    denominator = np.sum(np.abs(diff) ** p * objective.weights, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(denominator > 0, numerator / denominator, 0.0)
    return ratios ** (1.0 / p)


def _mesh_slack(
    objective: _PowerRatio, basis: np.ndarray, best_ratio: float, resolution: float
) -> float:
    """Upper slack on kappa_p given a mesh whose covering radius is ``resolution``."""
    p, n = objective.p, objective.n
    num_edges = objective.weights.size
    centring = np.eye(n) - np.outer(np.ones(n), objective.deg) / objective.omega_E
    vertex_map = (objective.deg ** (1.0 / p))[:, None] * centring
    incidence = np.zeros((num_edges, n))
    incidence[np.arange(num_edges), objective.tails] = 1.0
    incidence[np.arange(num_edges), objective.heads] = -1.0
    edge_map = (objective.weights ** (1.0 / p))[:, None] * incidence

    def widen(size: int) -> float:
        return size ** max(0.0, 1.0 / p - 0.5)

    alpha = widen(n) * scipy.linalg.norm(vertex_map @ basis, 2)
    beta = widen(num_edges) * scipy.linalg.norm(edge_map @ basis, 2)
    shrink = num_edges ** min(0.0, 1.0 / p - 0.5)
    b_min = shrink * scipy.linalg.svdvals(edge_map @ basis).min()
    return (best_ratio * beta + alpha) * resolution / b_min


def kappa_p_brute(graph: WeightedGraph, p: float, mesh: int = 24) -> PoincareEstimate:
    """
    Exhaustive oracle for graphs with at most five vertices.

    Evaluates the ratio on a cube-surface mesh of the unit sphere of the
    mean-zero subspace, refines the best point with Nelder-Mead, and bounds
    kappa_p from above by the best mesh value plus the covering slack.
    """
    _check_p(p)
    if graph.num_vertices > BRUTE_MAX_VERTICES:
        raise DomainError(
            f"Brute force supports at most {BRUTE_MAX_VERTICES} vertices, got {graph.num_vertices}."
        )
    _check_connected(graph)
    if mesh < 1:
        raise DomainError(f"mesh must be positive, got {mesh}.")

    objective = _PowerRatio(graph, p)
    basis = scipy.linalg.null_space(objective.deg[None, :])
    dim = basis.shape[1]
    if dim == 1:
        points, resolution = np.array([[1.0], [-1.0]]), 0.0
    else:
        points = _cube_sphere_mesh(dim, mesh)
        resolution = 2.0 * math.sqrt(dim - 1) / mesh

    ratios = _ratios(objective, points @ basis.T)
    best = int(np.argmax(ratios))
    mesh_best = float(ratios[best])
    best_x = points[best]

    if dim > 1:
        refined = scipy.optimize.minimize(
            lambda x: -_ratios(objective, (basis @ x)[None, :])[0],
            best_x,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20_000},
        )
        if -refined.fun > mesh_best:
            best_x = refined.x / np.linalg.norm(refined.x)

    witness = basis @ best_x
    lower = poincare_ratio(graph, witness, p)
    slack = _mesh_slack(objective, basis, mesh_best, resolution) if resolution else 0.0
    upper = max(mesh_best + slack, lower)
    return PoincareEstimate(
        p, lower, upper, Method.BRUTE, witness=witness, resolution=upper / lower - 1.0
    )


# ---------------------------- Interpolation ---------------------------- #
def kappa_p_interp_upper(degree: float, omega_E: float, kappa_2: float, p: float) -> float:
    """
    Upper bound on kappa_p for p >= 2 on a regular graph, obtained from
    kappa_2 through the l_2 / l_p norm comparisons on vertices and edges.
    """
    if p < 2:
        raise DomainError(f"Primal interpolation bound needs p >= 2, got {p}.")
    exponent = 0.5 - 1.0 / p
    return degree ** (-exponent) * kappa_2 * (omega_E / 2.0) ** exponent


def kappa_p_interp_upper_dual(
    degree: float, num_vertices: int, kappa_2: float, p: float, weight_min: float = 1.0
) -> float:
    """
    Upper bound on kappa_p for 1 < p <= 2 on a regular graph:
    (deg #V / w_min)^{1/p - 1/2} kappa_2.

    The l_2 / l_p comparison on edges costs w_min^{1/2 - 1/p}, so the bound
    does not move when every weight is multiplied by the same factor.
    """
    if not 1 < p <= 2:
        raise DomainError(f"Dual interpolation bound needs 1 < p <= 2, got {p}.")
    if not weight_min > 0:
        raise DomainError(f"Minimum edge weight must be positive, got {weight_min}.")
    return (degree * num_vertices / weight_min) ** (1.0 / p - 0.5) * kappa_2


def kappa_p_interp(graph: WeightedGraph, p: float) -> PoincareEstimate:
    _check_p(p)
    _check_connected(graph)
    stats = graph_stats(graph)
    if not stats.regular:
        raise DomainError("Interpolation bounds need a regular graph.")
    k2 = kappa2(graph)
    if p >= 2:
        upper = kappa_p_interp_upper(stats.degree_max, stats.omega_E, k2, p)
    else:
        upper = kappa_p_interp_upper_dual(
            stats.degree_max, stats.num_vertices, k2, p, weight_min=stats.weight_min
        )
    return PoincareEstimate(p, 0.0, upper, Method.INTERP)


def kappa_p_eigen(graph: WeightedGraph) -> PoincareEstimate:
    _check_connected(graph)
    return PoincareEstimate.exact(2.0, kappa2(graph), Method.EIGEN, witness=fiedler_vector(graph))


def isomorphic_kappa_bound(kappa_y: float, distortion: float) -> float:
    """kappa_p(G, X) <= L kappa_p(G, Y) for an isomorphism with |x| <= |Tx| <= L |x|."""
    if distortion < 1:
        raise DomainError(f"Isomorphism distortion must be >= 1, got {distortion}.")
    return distortion * kappa_y


# ------------------------------ p = inf ------------------------------ #
@dataclass(frozen=True)
class KappaInfBound:
    value: int
    generator: Optional[str]
    witness: Optional[Mapping[str, float]] = field(default=None, compare=False)
    witness_ratio: Optional[float] = None

    def as_estimate(self) -> PoincareEstimate:
        return PoincareEstimate(math.inf, float(self.value), math.inf, Method.PATH)


def _tent_witness(
    graph: WeightedGraph, from_s: Mapping[str, int], from_inverse: Mapping[str, int], half: float
) -> Tuple[Dict[str, float], float]:
    witness = {
        t: max(0.0, 1.0 - from_s[t] / half) - max(0.0, 1.0 - from_inverse[t] / half)
        for t in graph.vertices
    }
    f = np.array([witness[t] for t in graph.vertices])
    tails, heads, _ = graph.edge_arrays
    centred = f - (graph.degrees @ f) / graph.omega_E
    steepest = np.abs(f[tails] - f[heads]).max()
    return witness, float(np.abs(centred).max() / steepest)


def kappa_inf_lower(spec: Optional[GeneratingSetSpec], graph: WeightedGraph) -> KappaInfBound:
    """
    Path-metric lower bound kappa_inf >= max_s d_S(s, s^-1).

    The witness is the tent function equal to 1 at the maximising s, -1 at
    s^-1, decaying linearly to 0 at half their distance; its sup-norm ratio
    is reported alongside.
    """
    if spec is None or not spec.inverse:
        raise DomainError("The p = inf bound needs the inverse map of S.")
    if set(spec.elements) != set(graph.vertices):
        raise StructuralError("Graph vertex set differs from the generating set.")
    _check_connected(graph)

    best_s, best_distance = None, 0
    for s in spec.elements:
        distance = path_distance(graph, s, spec.inverse[s])
        if distance > best_distance:
            best_s, best_distance = s, distance
    if best_s is None:
        return KappaInfBound(0, None)

    best_inverse = spec.inverse[best_s]
    witness, ratio = _tent_witness(
        graph,
        {t: path_distance(graph, best_s, t) for t in graph.vertices},
        {t: path_distance(graph, best_inverse, t) for t in graph.vertices},
        best_distance / 2.0,
    )
    return KappaInfBound(best_distance, best_s, witness, ratio)


def estimate_kappa(
    graph: WeightedGraph,
    p: float,
    method: Method,
    restarts: int = 32,
    seed: int = 0,
    tol: float = 1e-10,
    mesh: int = 24,
) -> PoincareEstimate:
    """Dispatches to the estimator named by ``method`` (finite p only)."""
    method = Method(method)
    if method is Method.EIGEN:
        if p != 2:
            raise DomainError(f"The eigen method is exact only at p = 2, got p = {p}.")
        return kappa_p_eigen(graph)
    if method is Method.OPTIMIZE:
        return kappa_p_optimize(graph, p, restarts=restarts, seed=seed, tol=tol)
    if method is Method.BRUTE:
        return kappa_p_brute(graph, p, mesh=mesh)
    if method is Method.INTERP:
        return kappa_p_interp(graph, p)
    raise DomainError("The path method gives only the p = inf bound; use kappa_inf_lower.")
