import math

import numpy as np
import pytest

from linkcert.certificate import (
    SQRT2,
    Verdict,
    a2_branches,
    a2_p_max,
    a2_summary,
    a2_ub_rep_threshold,
    certify_fixed_point,
    circle_alpha_from_p,
    circle_alpha_threshold,
    confdim_lower_bound,
    conjugate_exponent,
    estimate_from_value,
    hyperbolic_p_bounds,
    hyperbolic_p_bounds_for_graph,
    kazhdan_constant,
    obstruction_check,
    scan_a2,
    ub_rep_threshold,
)
from linkcert.errors import DomainError
from linkcert.finite_geometry import prime_powers
from linkcert.poincare import (
    Method,
    kappa_p_interp,
    kappa_p_interp_upper,
    kappa_p_interp_upper_dual,
    kappa_p_optimize,
)
from linkcert.spectral import feit_higman_kappa2, kappa2

CERTIFYING = (Method.EIGEN, Method.BRUTE, Method.INTERP)
LOWER_ONLY = (Method.OPTIMIZE, Method.PATH)


def incidence_stats(q):
    points = q * q + q + 1
    return q + 1, (q + 1) * points, 2 * points


def test_conjugate_exponent():
    assert conjugate_exponent(3.0) == pytest.approx(1.5)
    assert conjugate_exponent(2.0) == 2.0
    with pytest.raises(DomainError):
        conjugate_exponent(1.0)


@pytest.mark.parametrize(
    "kappa, verdict",
    [
        (1.0, Verdict.PASS),
        (1.414, Verdict.PASS),
        (SQRT2, Verdict.INCONCLUSIVE),
        (1.5, Verdict.FAIL),
    ],
)
def test_self_dual_case_passes_iff_kappa_below_sqrt2(kappa, verdict):
    certificate = certify_fixed_point(kappa, kappa, 2.0, provenance=(Method.EIGEN, Method.EIGEN))
    assert certificate.verdict is verdict


def test_fano_certificate_at_p2(fano):
    k2 = kappa2(fano)
    certificate = certify_fixed_point(k2, k2, 2.0, provenance=("eigen", "eigen"))
    assert certificate.verdict is Verdict.PASS
    assert certificate.condition_values[0] == pytest.approx(0.9726, abs=1e-4)
    assert kazhdan_constant(certificate.kappa_pstar_upper, 2.0) == pytest.approx(
        2.0 * (1.0 - certificate.condition_values[1]), rel=1e-12
    )


def test_fano_interpolation_certificate_near_the_end_of_the_range(fano):
    passing = certify_fixed_point(
        kappa_p_interp(fano, 2.03), kappa_p_interp(fano, conjugate_exponent(2.03)), 2.03
    )
    assert passing.verdict is Verdict.PASS
    beyond = certify_fixed_point(
        kappa_p_interp(fano, 2.04), kappa_p_interp(fano, conjugate_exponent(2.04)), 2.04
    )
    assert beyond.verdict is Verdict.INCONCLUSIVE


def test_optimizer_alone_never_passes(k4):
    lower = kappa_p_optimize(k4, 2.0, restarts=4)
    certificate = certify_fixed_point(lower, lower, 2.0)
    assert lower.lower < SQRT2
    assert certificate.verdict is Verdict.INCONCLUSIVE


def test_soundness_direction_property():
    rng = np.random.default_rng(2024)
    methods = CERTIFYING + LOWER_ONLY
    for _ in range(500):
        p = float(rng.uniform(1.1, 4.0))
        pstar = conjugate_exponent(p)
        values = rng.uniform(0.05, 2.5, size=2)
        chosen = (methods[rng.integers(len(methods))], methods[rng.integers(len(methods))])
        certificate = certify_fixed_point(values[0], values[1], p, provenance=chosen)
        if any(m in LOWER_ONLY for m in chosen):
            assert certificate.verdict is not Verdict.PASS

        uppers = [estimate_from_value(e, v, Method.INTERP) for e, v in zip((p, pstar), values)]
        assert not obstruction_check(uppers[0], uppers[1], p)


def test_obstruction_fires_from_lower_bounds():
    lower = estimate_from_value(2.0, 1.5, Method.OPTIMIZE)
    assert obstruction_check(lower, lower, 2.0)
    assert certify_fixed_point(lower, lower, 2.0).verdict is Verdict.FAIL


def test_estimate_for_wrong_exponent_is_rejected():
    estimate = estimate_from_value(3.0, 1.0, Method.EIGEN)
    with pytest.raises(DomainError):
        certify_fixed_point(estimate, estimate, 2.0)


def test_bare_values_need_provenance():
    with pytest.raises(DomainError):
        certify_fixed_point(1.0, 1.0, 2.0)


# ------------------------------ Ã2 closed forms ------------------------------ #
def test_headline_value_at_q13():
    assert 2.105 <= a2_p_max(13) <= 2.107
    summary = a2_summary(13)
    assert summary["p_max"] == pytest.approx(2.106, abs=1e-3)
    assert summary["kappa2"] == pytest.approx(1.1606, abs=1e-4)
    assert summary["verdict_p2"] == "pass"


def test_fano_branches():
    branches = a2_branches(2)
    assert branches.p0 == pytest.approx(2.04305, abs=1e-5)
    assert branches.p0_bar == pytest.approx(1.96412, abs=1e-5)
    assert branches.p0_bar_star == pytest.approx(2.03722, abs=1e-5)
    assert branches.p_max == pytest.approx(branches.p0_bar_star, rel=1e-12)


def test_scan_argmax_is_13():
    scan = scan_a2(10_000)
    assert scan.argmax_q == 13
    assert [row.q for row in scan.rows] == prime_powers(10_000)
    assert 2.105 <= scan.max_p <= 2.107


def test_p_max_decreases_after_13_and_tends_to_2():
    qs = [q for q in prime_powers(10_000) if q >= 13]
    values = [a2_p_max(q) for q in qs]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert a2_p_max(1_000_003) > 2.0
    excess = a2_p_max(2**80) - 2.0
    assert 0.0 < excess < 0.01


def test_scan_without_prime_powers():
    with pytest.raises(DomainError):
        scan_a2(1)


def test_a2_rejects_non_prime_power():
    with pytest.raises(DomainError):
        a2_p_max(6)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
def test_hyperbolic_bounds_coincide_with_a2_closed_form(q):
    degree, num_edges, num_vertices = incidence_stats(q)
    report = hyperbolic_p_bounds(degree, num_edges, num_vertices, feit_higman_kappa2(q))
    branches = a2_branches(q)
    assert report.certified
    assert report.p_max == pytest.approx(a2_p_max(q), rel=1e-9)
    assert report.p0 == pytest.approx(branches.p0, rel=1e-9)
    assert report.p0_bar == pytest.approx(branches.p0_bar, rel=1e-9)


def test_interpolated_condition_is_one_at_the_range_ends(fano):
    k2 = kappa2(fano)
    report = hyperbolic_p_bounds_for_graph(fano, kappa_2=k2)
    primal = 2.0 ** (-1.0 / report.p0) * kappa_p_interp_upper(3.0, fano.omega_E, k2, report.p0)
    dual = 2.0 ** (-1.0 / report.p0_bar) * kappa_p_interp_upper_dual(3.0, 14, k2, report.p0_bar)
    assert primal == pytest.approx(1.0, rel=1e-12)
    assert dual == pytest.approx(1.0, rel=1e-12)


def test_large_kappa2_gives_no_certified_range():
    report = hyperbolic_p_bounds(3.0, 21, 14, 1.5)
    assert not report.certified
    assert report.note == "no certified range"
    with pytest.raises(DomainError):
        confdim_lower_bound(report)


def test_confdim_of_fano(fano):
    report = hyperbolic_p_bounds_for_graph(fano)
    assert confdim_lower_bound(report) == pytest.approx(a2_p_max(2), rel=1e-9)


def test_irregular_graph_needs_opt_in(path3):
    with pytest.raises(DomainError):
        hyperbolic_p_bounds_for_graph(path3)
    report = hyperbolic_p_bounds_for_graph(path3, allow_irregular=True)
    assert report.conservative


@pytest.mark.parametrize("q", [2, 3, 13])
def test_thresholds(q):
    k2 = feit_higman_kappa2(q)
    assert ub_rep_threshold(k2) == pytest.approx(a2_ub_rep_threshold(q), rel=1e-12)
    assert circle_alpha_threshold(q) == pytest.approx(1.0 / a2_p_max(q), rel=1e-12)


def test_circle_alpha_from_p():
    assert circle_alpha_from_p(2.5) == pytest.approx(0.4)
    with pytest.raises(DomainError):
        circle_alpha_from_p(2.0)


def test_thresholds_are_deterministic():
    assert a2_p_max(13) == a2_p_max(13)
    assert a2_summary(7) == a2_summary(7)
    assert not math.isnan(a2_summary(7)["alpha_threshold"])


@pytest.mark.parametrize("factor", [1e-3, 0.9, 7.5])
def test_interpolation_certificate_ignores_weight_scale(fano, factor):
    graph = fano.scaled(factor)
    for p, verdict in ((2.03, Verdict.PASS), (2.04, Verdict.INCONCLUSIVE)):
        pstar = conjugate_exponent(p)
        scaled = certify_fixed_point(kappa_p_interp(graph, p), kappa_p_interp(graph, pstar), p)
        base = certify_fixed_point(kappa_p_interp(fano, p), kappa_p_interp(fano, pstar), p)
        assert scaled.verdict is verdict
        assert scaled.condition_values == pytest.approx(base.condition_values, rel=1e-9)


@pytest.mark.parametrize("factor", [1e-3, 0.9, 7.5])
def test_p_range_invariant_under_weight_scaling(fano, path3, factor):
    base = hyperbolic_p_bounds_for_graph(fano)
    scaled = hyperbolic_p_bounds_for_graph(fano.scaled(factor))
    assert scaled.p_max == pytest.approx(base.p_max, rel=1e-9)
    assert scaled.p0 == pytest.approx(base.p0, rel=1e-9)
    assert scaled.p0_bar == pytest.approx(base.p0_bar, rel=1e-9)
    assert scaled.p_max <= a2_p_max(2) * (1 + 1e-9)

    irregular = hyperbolic_p_bounds_for_graph(path3, allow_irregular=True)
    rescaled = hyperbolic_p_bounds_for_graph(path3.scaled(factor), allow_irregular=True)
    assert rescaled.conservative
    assert rescaled.p_max == pytest.approx(irregular.p_max, rel=1e-9)


def test_a2_summary_reports_alpha_from_p_max():
    summary = a2_summary(13)
    assert summary["alpha_from_p_max"] == pytest.approx(circle_alpha_from_p(a2_p_max(13)))
    assert summary["alpha_from_p_max"] == pytest.approx(summary["alpha_threshold"], rel=1e-12)
