"""
Finite fields GF(k^n) and the incidence graph of the projective plane P^2(F_q).

Field elements are encoded as integers c_0 + c_1 k + ... + c_{n-1} k^{n-1},
i.e. coefficient vectors of residues modulo the field's defining polynomial.
Addition and multiplication tables are precomputed, so the plane construction
is a handful of vectorised table lookups.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .graph import WeightedGraph

logger = logging.getLogger(__name__)

Poly = Tuple[int, ...]  # coefficients, lowest degree first


def factorize(n: int) -> Dict[int, int]:
    """Prime factorisation by trial division."""
    if n < 1:
        raise DomainError(f"Cannot factorise {n}.")
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _format_factorization(factors: Dict[int, int]) -> str:
    return " · ".join(
        str(k) if e == 1 else f"{k}^{e}" for k, e in sorted(factors.items())
    )


def prime_power_parts(q: int) -> Tuple[int, int]:
    """
    Returns (k, n) with q = k^n and k prime.

    Raises:
        DomainError: If q < 2 or q has more than one prime factor.
    """
    if q < 2:
        raise DomainError(f"q must be at least 2, got {q}.")
    factors = factorize(q)
    if len(factors) != 1:
        raise DomainError(
            f"q = {q} is not a prime power: {q} = {_format_factorization(factors)}."
        )
    (k, n), = factors.items()
    return k, n


def is_prime_power(q: int) -> bool:
    try:
        prime_power_parts(q)
    except DomainError:
        return False
    return True


def prime_powers(limit: int) -> List[int]:
    """All prime powers 2 <= q <= limit in ascending order."""
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for d in range(2, int(limit**0.5) + 1):
        if sieve[d]:
            sieve[d * d :: d] = False
    found = set()
    for k in np.flatnonzero(sieve):
        power = int(k)
        while power <= limit:
            found.add(power)
            power *= int(k)
    return sorted(found)


# ------------------------- Polynomials over GF(k) ------------------------- #
def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], k: int) -> List[int]:
    """Remainder of a modulo the monic polynomial m over GF(k)."""
    r = [c % k for c in a]
    _poly_trim(r)
    deg_m = len(m) - 1
    while len(r) - 1 >= deg_m and r:
        coef = r[-1]
        shift = len(r) - 1 - deg_m
        for i, c in enumerate(m):
            r[shift + i] = (r[shift + i] - coef * c) % k
        _poly_trim(r)
    return r


def _monic_polys(degree: int, k: int):
    """Monic polynomials of the given degree, lower coefficients in lexicographic order."""
    for high_to_low in itertools.product(range(k), repeat=degree):
        yield tuple(reversed(high_to_low)) + (1,)


def is_irreducible(poly: Poly, k: int) -> bool:
    """Exhaustive check that no monic polynomial of degree 1..n/2 divides poly."""
    n = len(poly) - 1
    for d in range(1, n // 2 + 1):
        for divisor in _monic_polys(d, k):
            if not _poly_mod(poly, divisor, k):
                return False
    return True


@dataclass(frozen=True)
class FiniteField:
    """GF(k^n) with a fixed monic irreducible modulus of degree n."""

    characteristic: int
    degree: int
    modulus: Poly

    @property
    def order(self) -> int:
        return self.characteristic**self.degree

    # ---------------------------- Encoding ---------------------------- #
    def to_vector(self, a: int) -> Tuple[int, ...]:
        k = self.characteristic
        return tuple((a // k**i) % k for i in range(self.degree))

    def from_vector(self, coeffs: Sequence[int]) -> int:
        k = self.characteristic
        return sum((c % k) * k**i for i, c in enumerate(coeffs))

    def elements(self) -> range:
        return range(self.order)

    # ----------------------------- Tables ----------------------------- #
    @cached_property
    def add_table(self) -> np.ndarray:
        k, q = self.characteristic, self.order
        vectors = np.array([self.to_vector(a) for a in range(q)], dtype=np.int64)
        powers = k ** np.arange(self.degree, dtype=np.int64)
        sums = (vectors[:, None, :] + vectors[None, :, :]) % k
        table = sums @ powers
        table.setflags(write=False)
        return table

    @cached_property
    def mul_table(self) -> np.ndarray:
        k, q = self.characteristic, self.order
        table = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            va = self.to_vector(a)
            for b in range(a, q):
                vb = self.to_vector(b)
                prod = [0] * (2 * self.degree - 1)
                for i, x in enumerate(va):
                    if x:
                        for j, y in enumerate(vb):
                            prod[i + j] += x * y
                c = self.from_vector(_poly_mod(prod, self.modulus, k))
                table[a, b] = table[b, a] = c
        table.setflags(write=False)
        return table

    # --------------------------- Arithmetic --------------------------- #
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return self.from_vector([-c for c in self.to_vector(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("Zero has no multiplicative inverse.")
        return self.pow(a, self.order - 2)


def gf_build(q: int) -> FiniteField:
    """
    Builds GF(q) for a prime power q.

    The modulus is the first monic irreducible polynomial of degree n in
    lexicographic order of its lower coefficients (x^2 + x + 1 for q = 4).

    Raises:
        DomainError: If q is not a prime power.
    """
    k, n = prime_power_parts(q)
    if n == 1:
        return FiniteField(k, 1, (0, 1))
    for candidate in _monic_polys(n, k):
        if is_irreducible(candidate, k):
            logger.debug("GF(%d): modulus coefficients %s", q, candidate)
            return FiniteField(k, n, candidate)
    raise DomainError(f"No irreducible polynomial of degree {n} over GF({k}).")


# ---------------------------- Projective plane ---------------------------- #
@dataclass(frozen=True)
class ProjectivePlane:
    """
    P^2(F_q): points and lines as normalised vectors of F_q^3.

    A vector is normalised when its first nonzero coordinate is 1. Point p
    lies on line l iff p . l = 0.
    """

    field: FiniteField
    points: Tuple[Tuple[int, int, int], ...]
    incidence: np.ndarray  # incidence[i, j]: point i on line j

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def lines(self) -> Tuple[Tuple[int, int, int], ...]:
        return self.points


def _normalised_vectors(q: int) -> List[Tuple[int, int, int]]:
    vectors = []
    for lead in range(3):
        for tail in itertools.product(range(q), repeat=2 - lead):
            vectors.append((0,) * lead + (1,) + tail)
    return vectors


def projective_plane(q: int) -> ProjectivePlane:
    field = gf_build(q)
    points = _normalised_vectors(q)
    coords = np.array(points, dtype=np.int64)
    mul, add = field.mul_table, field.add_table
    dot = mul[coords[:, None, 0], coords[None, :, 0]]
    for axis in (1, 2):
        dot = add[dot, mul[coords[:, None, axis], coords[None, :, axis]]]
    incidence = dot == 0
    incidence.setflags(write=False)
    return ProjectivePlane(field, tuple(points), incidence)


def _label(prefix: str, vector: Tuple[int, int, int]) -> str:
    return prefix + ",".join(str(c) for c in vector)


def incidence_graph(q: int) -> WeightedGraph:
    """
    Point-line incidence graph of P^2(F_q) with unit weights.

    Vertices are ``P<a,b,c>`` for points followed by ``L<a,b,c>`` for lines.
    The graph is bipartite and (q+1)-regular on 2(q^2+q+1) vertices.
    """
    plane = projective_plane(q)
    point_labels = [_label("P", p) for p in plane.points]
    line_labels = [_label("L", l) for l in plane.lines]
    rows, cols = np.nonzero(plane.incidence)
    edges = tuple(
        (point_labels[i], line_labels[j], 1.0) for i, j in zip(rows.tolist(), cols.tolist())
    )
    logger.debug("Incidence graph of P^2(F_%d): %d edges", q, len(edges))
    return WeightedGraph(tuple(point_labels + line_labels), edges)
