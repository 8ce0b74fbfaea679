"""
Thresholds derived from Poincaré constants: fixed-point certificates,
admissible p-ranges for Ã2 and hyperbolic link graphs, conformal-dimension
lower bounds, Kazhdan-type constants and uniformly bounded representation
norms.

Certificates are one-sided. A pass needs certified upper bounds on both
kappa_p and kappa_{p*}; a fail or an obstruction needs lower bounds, which
every estimate carries (a witness ratio is always a lower bound).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple, Union

from tqdm import tqdm

from .errors import DomainError
from .finite_geometry import prime_power_parts, prime_powers
from .graph import WeightedGraph, graph_stats
from .poincare import Method, PoincareEstimate
from .spectral import feit_higman_kappa2, feit_higman_lambda1, kappa2

logger = logging.getLogger(__name__)

THRESHOLD_TOL = 1e-9
SQRT2 = math.sqrt(2.0)


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


def conjugate_exponent(p: float) -> float:
    if not 1 < p < math.inf:
        raise DomainError(f"p must satisfy 1 < p < inf, got {p}.")
    return p / (p - 1.0)


# ---------------------------- Fixed points ---------------------------- #
@dataclass(frozen=True)
class Certificate:
    p: float
    pstar: float
    kappa_p_upper: Optional[float]
    kappa_pstar_upper: Optional[float]
    condition_values: Tuple[float, float]
    verdict: Verdict
    provenance: Tuple[Method, Method]


def estimate_from_value(p: float, value: float, method: Union[Method, str]) -> PoincareEstimate:
    """
    Wraps a bare kappa value as an estimate according to what its method proves:
    eigen and brute values bracket kappa, interp values bound it from above,
    optimize and path values bound it from below.
    """
    method = Method(method)
    if method in (Method.EIGEN, Method.BRUTE):
        return PoincareEstimate(p, value, value, method)
    if method is Method.INTERP:
        return PoincareEstimate(p, 0.0, value, method)
    return PoincareEstimate(p, value, math.inf, method)


def _as_estimate(kappa, p: float, method) -> PoincareEstimate:
    if isinstance(kappa, PoincareEstimate):
        if not math.isclose(kappa.p, p, rel_tol=1e-12):
            raise DomainError(f"Estimate is for p = {kappa.p}, expected p = {p}.")
        return kappa
    if method is None:
        raise DomainError("A bare kappa value needs its method provenance.")
    return estimate_from_value(p, float(kappa), method)


def certify_fixed_point(
    kappa_p: Union[PoincareEstimate, float],
    kappa_pstar: Union[PoincareEstimate, float],
    p: float,
    provenance: Optional[Tuple[Union[Method, str], Union[Method, str]]] = None,
) -> Certificate:
    """
    Evaluates max{2^{-1/p} kappa_p, 2^{-1/p*} kappa_{p*}} < 1.

    Pass: both kappas carry certified upper bounds whose condition values are
    below 1 - 1e-9. Fail: a lower bound already puts a condition value at or
    above 1 + 1e-9. Anything else, including values within 1e-9 of 1, is
    inconclusive.
    """
    pstar = conjugate_exponent(p)
    methods = provenance or (None, None)
    estimates = (
        _as_estimate(kappa_p, p, methods[0]),
        _as_estimate(kappa_pstar, pstar, methods[1]),
    )
    factors = (2.0 ** (-1.0 / p), 2.0 ** (-1.0 / pstar))

    uppers = tuple(e.certified_upper for e in estimates)
    lower_values = tuple(f * e.lower for f, e in zip(factors, estimates))
    condition_values = tuple(
        f * (e.upper if math.isfinite(e.upper) else e.lower) for f, e in zip(factors, estimates)
    )

    if any(v >= 1.0 + THRESHOLD_TOL for v in lower_values):
        verdict = Verdict.FAIL
    elif all(u is not None and f * u < 1.0 - THRESHOLD_TOL for f, u in zip(factors, uppers)):
        verdict = Verdict.PASS
    else:
        verdict = Verdict.INCONCLUSIVE

    return Certificate(
        p=p,
        pstar=pstar,
        kappa_p_upper=uppers[0],
        kappa_pstar_upper=uppers[1],
        condition_values=condition_values,
        verdict=verdict,
        provenance=(estimates[0].method, estimates[1].method),
    )


def kazhdan_constant(kappa_pstar_upper: float, pstar: float) -> float:
    """2(1 - 2^{-1/p*} kappa_{p*}); a value <= 0 certifies nothing."""
    if not pstar > 1:
        raise DomainError(f"p* must exceed 1, got {pstar}.")
    return 2.0 * (1.0 - 2.0 ** (-1.0 / pstar) * kappa_pstar_upper)


def obstruction_check(
    kappa_p_lower: Union[PoincareEstimate, float],
    kappa_pstar_lower: Union[PoincareEstimate, float],
    p: float,
) -> bool:
    """
    True iff kappa_p >= 2^{1/p} or kappa_{p*} >= 2^{1/p*} is proven by the
    lower bounds, i.e. the spectral route to vanishing cohomology is blocked.
    """
    pstar = conjugate_exponent(p)
    lowers = [
        k.lower if isinstance(k, PoincareEstimate) else float(k)
        for k in (kappa_p_lower, kappa_pstar_lower)
    ]
    return lowers[0] >= 2.0 ** (1.0 / p) or lowers[1] >= 2.0 ** (1.0 / pstar)


# ------------------------------ p-ranges ------------------------------ #
@dataclass(frozen=True)
class PRangeReport:
    source: str
    p0: Optional[float]
    p0_bar: Optional[float]
    p0_bar_star: Optional[float]
    p_max: Optional[float]
    certified: bool
    conservative: bool = False
    note: str = ""


def _a2_constants(q: int) -> Tuple[int, int, float]:
    prime_power_parts(q)
    return q * q + q + 1, q + 1, feit_higman_lambda1(q)


def a2_p_max(q: int) -> float:
    """
    Upper end of the p-range [2, p_max) on which isometric L_p cohomology of
    the Ã2 group G_q vanishes.
    """
    points, degree, lam = _a2_constants(q)
    numerator = math.log(points) + math.log(degree)
    denominator = (
        0.5 * math.log(2 * points * degree) - math.log(2.0) - math.log(math.sqrt(lam))
    )
    return numerator / denominator


def a2_branches(q: int) -> PRangeReport:
    """
    Both sides of the Ã2 argument: the primal bound on p from kappa_p and the
    dual bound p* > p0_bar from kappa_{p*}. p_max is the closed form, which
    coincides with p0_bar_star.
    """
    points, degree, lam = _a2_constants(q)
    primal = 2.0 * math.log(2 * points) / (math.log(2 * points) - math.log(2.0 * lam))
    dual = math.log(points * degree) / (
        0.5 * math.log(2 * points * degree) + 0.5 * math.log(lam)
    )
    return PRangeReport(
        source=f"A2 q={q}",
        p0=primal,
        p0_bar=dual,
        p0_bar_star=dual / (dual - 1.0),
        p_max=a2_p_max(q),
        certified=True,
    )


def hyperbolic_p_bounds(
    degree: float,
    num_edges: float,
    num_vertices: int,
    kappa_2: float,
    degree_bounds: Optional[Tuple[float, float]] = None,
    source: str = "graph",
) -> PRangeReport:
    """
    The range p < min{p0, p0_bar*} for a regular link graph.

    With ``degree_bounds=(min, max)`` an irregular graph gets a conservative
    variant (max degree in numerators, min degree in denominators); it is
    flagged ``conservative`` since the closed forms assume regularity.
    """
    if kappa_2 >= SQRT2:
        return PRangeReport(source, None, None, None, None, False, note="no certified range")

    if degree_bounds is not None:
        deg_low, deg_high = min(degree_bounds), max(degree_bounds)
    else:
        deg_low = deg_high = degree
    log_kappa = math.log(kappa_2)

    a = math.log(deg_high) - math.log(2 * num_edges)
    b = 0.5 * math.log(deg_low / num_edges) - log_kappa
    if a < 0 and b < 0:
        p0 = a / b
    elif a < 0:
        p0 = math.inf
    else:
        raise DomainError("Degenerate degree data: deg >= 2 #E.")

    c = math.log(num_vertices * deg_high) - math.log(2.0)
    d = 0.5 * math.log(num_vertices * deg_low) - log_kappa
    if d <= 0:
        return PRangeReport(
            source, p0, None, None, None, False, degree_bounds is not None, "no certified range"
        )
    p0_bar = c / d
    p0_bar_star = p0_bar / (p0_bar - 1.0) if p0_bar > 1 else math.inf

    p_max = min(p0, p0_bar_star)
    return PRangeReport(
        source=source,
        p0=p0,
        p0_bar=p0_bar,
        p0_bar_star=p0_bar_star,
        p_max=p_max,
        certified=p_max > 2,
        conservative=degree_bounds is not None,
        note="conservative min/max degree variant" if degree_bounds is not None else "",
    )


def hyperbolic_p_bounds_for_graph(
    graph: WeightedGraph,
    kappa_2: Optional[float] = None,
    allow_irregular: bool = False,
    source: str = "graph",
) -> PRangeReport:
    """
    hyperbolic_p_bounds with the graph's weights divided by the smallest one.

    The degree data then carries the weighted degree and half the weighted
    edge mass in place of #E, so the range depends only on the ratios of the
    weights; with unit weights it is the plain count formula.
    """
    stats = graph_stats(graph)
    if kappa_2 is None:
        kappa_2 = kappa2(graph)
    unit = stats.weight_min
    if not unit > 0:
        raise DomainError("The p-range formulas need at least one edge.")
    edge_mass = stats.omega_E / (2.0 * unit)
    if stats.regular:
        return hyperbolic_p_bounds(
            stats.degree_max / unit, edge_mass, stats.num_vertices, kappa_2, source=source
        )
    if not allow_irregular:
        raise DomainError(
            f"Graph is irregular (degrees {stats.degree_min}..{stats.degree_max}); "
            "the p-range formulas need a single degree."
        )
    return hyperbolic_p_bounds(
        stats.degree_max / unit,
        edge_mass,
        stats.num_vertices,
        kappa_2,
        degree_bounds=(stats.degree_min / unit, stats.degree_max / unit),
        source=source,
    )


def confdim_lower_bound(report: PRangeReport) -> float:
    """Conformal dimension of the boundary is at least p_max."""
    if not report.certified or report.p_max is None:
        raise DomainError(f"No certified p-range for {report.source}: {report.note or 'p_max <= 2'}.")
    return report.p_max


# --------------------------- Other thresholds --------------------------- #
def ub_rep_threshold(kappa_2: float) -> float:
    """Uniformly bounded representations with sup |pi_g| below sqrt(2)/kappa_2 have H^1 = 0."""
    if not kappa_2 > 0:
        raise DomainError(f"kappa_2 must be positive, got {kappa_2}.")
    return SQRT2 / kappa_2


def a2_ub_rep_threshold(q: int) -> float:
    return math.sqrt(2.0 * feit_higman_lambda1(q))


def circle_alpha_threshold(q: int) -> float:
    """Homomorphisms G_q -> Diff^{1+alpha}_+(S^1) have finite image above this alpha."""
    points, degree, lam = _a2_constants(q)
    numerator = (
        0.5 * math.log(2 * points * degree) - math.log(2.0) - math.log(math.sqrt(lam))
    )
    return numerator / (math.log(points) + math.log(degree))


def circle_alpha_from_p(p: float) -> float:
    if not p > 2:
        raise DomainError(f"The circle-action threshold needs p > 2, got {p}.")
    return 1.0 / p


def a2_summary(q: int) -> dict:
    branches = a2_branches(q)
    k2 = feit_higman_kappa2(q)
    certificate = certify_fixed_point(k2, k2, 2.0, provenance=(Method.EIGEN, Method.EIGEN))
    return {
        "q": q,
        "lambda1": feit_higman_lambda1(q),
        "kappa2": k2,
        "p_max": branches.p_max,
        "p0": branches.p0,
        "p0_bar": branches.p0_bar,
        "p0_bar_star": branches.p0_bar_star,
        "alpha_threshold": circle_alpha_threshold(q),
        "alpha_from_p_max": circle_alpha_from_p(branches.p_max),
        "ub_rep_threshold": a2_ub_rep_threshold(q),
        "ub_rep_threshold_from_kappa2": ub_rep_threshold(k2),
        "kazhdan_constant": kazhdan_constant(k2, 2.0),
        "verdict_p2": certificate.verdict.value,
        "condition_value_p2": certificate.condition_values[0],
    }


class ScanRow(NamedTuple):
    q: int
    p_max: float


class ScanResult(NamedTuple):
    rows: Tuple[ScanRow, ...]
    argmax_q: int
    max_p: float


def scan_a2(q_max: int, progress: bool = False) -> ScanResult:
    """a2_p_max over every prime power q <= q_max, ascending in q."""
    qs = prime_powers(q_max)
    if not qs:
        raise DomainError(f"No prime powers up to {q_max}.")
    rows: List[ScanRow] = []
    for q in tqdm(qs, desc="scan-a2", unit="q", disable=not progress):
        rows.append(ScanRow(q, a2_p_max(q)))
    best = max(rows, key=lambda row: row.p_max)
    logger.info("scan-a2: %d prime powers, argmax q=%d", len(rows), best.q)
    return ScanResult(tuple(rows), best.q, best.p_max)
