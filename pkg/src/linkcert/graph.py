import math
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np

from .errors import DomainError, StructuralError

# Relative tolerance for degree comparisons (admissibility, regularity).
DEGREE_REL_TOL = 1e-12

Edge = Tuple[str, str, float]


@dataclass(frozen=True)
class WeightedGraph:
    """
    Finite simple graph with symmetric, strictly positive edge weights.

    Vertex labels are opaque strings; numerical routines index vertices in
    declaration order. Each unordered edge is stored once. Formulas that sum
    over oriented pairs use the convention that every edge counts twice, so
    ``omega_E`` is twice the total edge weight.
    """

    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple((str(u), str(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        if len(set(vertices)) != len(vertices):
            raise StructuralError("Vertex labels must be unique.")
        declared = set(vertices)
        seen = set()
        for u, v, w in edges:
            for endpoint in (u, v):
                if endpoint not in declared:
                    raise StructuralError(
                        f"Edge {{{u}, {v}}} uses undeclared vertex '{endpoint}'."
                    )
            if u == v:
                raise StructuralError(f"Self-loop at vertex '{u}' is not allowed.")
            if not (w > 0 and math.isfinite(w)):
                raise StructuralError(
                    f"Edge {{{u}, {v}}} has weight {w}; weights must be positive and finite."
                )
            key = frozenset((u, v))
            if key in seen:
                raise StructuralError(
                    f"Edge {{{u}, {v}}} is declared twice; encode multiplicity as weight."
                )
            seen.add(key)

    # ------------------------------ Indexing ------------------------------ #
    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> Mapping[str, int]:
        return MappingProxyType({v: i for i, v in enumerate(self.vertices)})

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(tails, heads, weights) arrays, one entry per unordered edge."""
        tails = np.array([self.index[u] for u, _, _ in self.edges], dtype=np.intp)
        heads = np.array([self.index[v] for _, v, _ in self.edges], dtype=np.intp)
        weights = np.array([w for _, _, w in self.edges], dtype=float)
        for arr in (tails, heads, weights):
            arr.setflags(write=False)
        return tails, heads, weights

    @cached_property
    def _weight_lookup(self) -> Mapping[frozenset, float]:
        return MappingProxyType({frozenset((u, v)): w for u, v, w in self.edges})

    # ------------------------------- Weights ------------------------------ #
    def weight(self, u: str, v: str) -> float:
        """ω(u, v), or 0.0 when u and v are not adjacent."""
        return self._weight_lookup.get(frozenset((u, v)), 0.0)

    @cached_property
    def degrees(self) -> np.ndarray:
        """deg_ω as an array in vertex declaration order."""
        tails, heads, weights = self.edge_arrays
        n = self.num_vertices
        deg = np.bincount(tails, weights, minlength=n) + np.bincount(
            heads, weights, minlength=n
        )
        deg = deg.astype(float)
        deg.setflags(write=False)
        return deg

    def degree(self, v: str) -> float:
        return float(self.degrees[self.index[v]])

    @property
    def omega_E(self) -> float:
        """ω(E): each unordered edge counted twice."""
        return 2.0 * sum(w for _, _, w in self.edges)

    def weight_matrix(self) -> np.ndarray:
        n = self.num_vertices
        tails, heads, weights = self.edge_arrays
        matrix = np.zeros((n, n))
        matrix[tails, heads] = weights
        matrix[heads, tails] = weights
        return matrix

    def scaled(self, factor: float) -> "WeightedGraph":
        if not factor > 0:
            raise DomainError(f"Weight scale factor must be positive, got {factor}.")
        return WeightedGraph(
            self.vertices, tuple((u, v, w * factor) for u, v, w in self.edges)
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_weighted_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class GeneratingSetSpec:
    """
    A symmetric generating set S without the identity.

    ``inverse`` is the involution s -> s^-1. ``products`` is the partial map
    (s, t) -> r recording s^-1 t = r whenever that product lies in S.
    """

    elements: Tuple[str, ...]
    inverse: Mapping[str, str]
    products: Mapping[Tuple[str, str], str]

    def __post_init__(self):
        elements = tuple(str(s) for s in self.elements)
        inverse = {str(s): str(t) for s, t in self.inverse.items()}
        products = {(str(s), str(t)): str(r) for (s, t), r in self.products.items()}
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "inverse", MappingProxyType(inverse))
        object.__setattr__(self, "products", MappingProxyType(products))

        declared = set(elements)
        if len(declared) != len(elements):
            raise StructuralError("Generator labels must be unique.")
        if set(inverse) != declared:
            missing = sorted(declared - set(inverse))
            extra = sorted(set(inverse) - declared)
            raise StructuralError(
                f"Inverse map must cover exactly S (missing {missing}, unknown {extra})."
            )
        for s, s_inv in inverse.items():
            if s_inv not in declared:
                raise StructuralError(f"inverse({s}) = '{s_inv}' is not in S.")
            if inverse[s_inv] != s:
                raise StructuralError(
                    f"Inverse map is not an involution: inverse(inverse({s})) = '{inverse[s_inv]}'."
                )
        for (s, t), r in products.items():
            for label in (s, t, r):
                if label not in declared:
                    raise StructuralError(
                        f"Product entry ({s}, {t}) -> {r} uses '{label}', which is not in S."
                    )
            if s == t:
                raise StructuralError(
                    f"Product entry ({s}, {s}) would be the identity, which is excluded from S."
                )

    def product(self, s: str, t: str) -> Optional[str]:
        return self.products.get((s, t))


class Violation(NamedTuple):
    condition: str
    element: str
    lhs: float
    rhs: float


class AdmissibilityReport(NamedTuple):
    admissible: bool
    violations: Tuple[Violation, ...]

    @classmethod
    def from_violations(cls, violations: Iterable[Violation]) -> "AdmissibilityReport":
        violations = tuple(violations)
        return cls(admissible=not violations, violations=violations)


class GraphStats(NamedTuple):
    num_vertices: int
    num_edges: int
    omega_E: float
    degree_min: float
    degree_max: float
    weight_min: float
    regular: bool


def _close(lhs: float, rhs: float) -> bool:
    return math.isclose(lhs, rhs, rel_tol=DEGREE_REL_TOL, abs_tol=0.0)


def build_link_graph(spec: GeneratingSetSpec, default_weight: float = 1.0) -> WeightedGraph:
    """
    Builds the link graph of S: vertices S, with s ~ t iff s^-1 t lies in S.

    Raises:
        StructuralError: If the product table is not closed under
            (s, t) -> (t, s) with products(t, s) = inverse(products(s, t)).
        DomainError: If ``default_weight`` is not positive.
    """
    if not default_weight > 0:
        raise DomainError(f"Default weight must be positive, got {default_weight}.")

    edges: List[Edge] = []
    elements = spec.elements
    for i, s in enumerate(elements):
        for t in elements[i + 1 :]:
            forward = spec.product(s, t)
            backward = spec.product(t, s)
            if forward is None and backward is None:
                continue
            if forward is None or backward is None:
                present, absent = ((s, t), (t, s)) if backward is None else ((t, s), (s, t))
                raise StructuralError(
                    f"Inconsistent product table: ({present[0]}, {present[1]}) is defined "
                    f"but ({absent[0]}, {absent[1]}) is missing."
                )
            if backward != spec.inverse[forward]:
                raise StructuralError(
                    f"Inconsistent product table at pair ({s}, {t}): products({t}, {s}) = "
                    f"'{backward}', expected inverse('{forward}') = '{spec.inverse[forward]}'."
                )
            edges.append((s, t, default_weight))
    return WeightedGraph(elements, tuple(edges))


def verify_admissible(spec: GeneratingSetSpec, graph: WeightedGraph) -> AdmissibilityReport:
    """
    Checks both admissibility conditions for the weight carried by ``graph``.

    Condition ``inverse-degree``: deg(s) = deg(s^-1) for every s.
    Condition ``product-mass``: deg(r) equals the weight of all ordered pairs
    (s, t) with s^-1 t = r; an unordered edge contributes to both orders.
    """
    if set(graph.vertices) != set(spec.elements):
        raise StructuralError("Graph vertex set differs from the generating set.")

    violations: List[Violation] = []
    for s in spec.elements:
        lhs, rhs = graph.degree(s), graph.degree(spec.inverse[s])
        if not _close(lhs, rhs):
            violations.append(Violation("inverse-degree", s, lhs, rhs))

    mass: Dict[str, float] = {r: 0.0 for r in spec.elements}
    for (s, t), r in spec.products.items():
        mass[r] += graph.weight(s, t)
    for r in spec.elements:
        lhs = graph.degree(r)
        if not _close(lhs, mass[r]):
            violations.append(Violation("product-mass", r, lhs, mass[r]))

    return AdmissibilityReport.from_violations(violations)


def is_connected(graph: WeightedGraph) -> bool:
    if graph.num_vertices == 0:
        raise StructuralError("Connectivity is undefined for an empty vertex set.")
    return nx.is_connected(graph.to_networkx())


def graph_stats(graph: WeightedGraph) -> GraphStats:
    degrees = graph.degrees
    if degrees.size:
        deg_min, deg_max = float(degrees.min()), float(degrees.max())
    else:
        deg_min = deg_max = 0.0
    _, _, weights = graph.edge_arrays
    return GraphStats(
        num_vertices=graph.num_vertices,
        num_edges=len(graph.edges),
        omega_E=graph.omega_E,
        degree_min=deg_min,
        degree_max=deg_max,
        weight_min=float(weights.min()) if weights.size else 0.0,
        regular=all(_close(float(d), deg_max) for d in degrees),
    )


def path_distance(graph: WeightedGraph, u: str, v: str) -> Optional[int]:
    """Breadth-first path metric d_S(u, v); None when v is unreachable."""
    try:
        return nx.shortest_path_length(graph.to_networkx(), u, v)
    except nx.NetworkXNoPath:
        return None
