import math

import numpy as np
import pytest

from conftest import cyclic_group
from linkcert.errors import DomainError, StructuralError
from linkcert.graph import WeightedGraph, build_link_graph, graph_stats
from linkcert.p_laplacian import (
    apply_p_laplacian,
    cayley_graph,
    check_quotient_bound,
    inner_alpha,
    lambda1_p,
    p_rayleigh_quotient,
)
from linkcert.spectral import kappa2, lambda1


def cyclic_cayley(spec, n):
    link = build_link_graph(spec)
    group = cyclic_group(n)
    return link, cayley_graph(
        group["table"],
        group["images"],
        {v: link.degree(v) for v in link.vertices},
        link.omega_E,
        inverse=spec.inverse,
        element_labels=group["elements"],
    )


def test_p_laplacian_at_p2_is_the_combinatorial_laplacian(weighted_path3):
    f = np.array([1.0, -2.0, 0.5])
    expected = (np.diag(weighted_path3.degrees) - weighted_path3.weight_matrix()) @ f
    assert apply_p_laplacian(weighted_path3, f, 2.0) == pytest.approx(expected)


def test_inner_alpha_at_p2_is_the_weighted_mean():
    f = np.array([3.0, -1.0, 2.0, 0.0])
    degrees = np.array([1.0, 2.0, 0.5, 4.0])
    assert inner_alpha(f, 2.0, degrees) == pytest.approx(f @ degrees / degrees.sum(), abs=1e-10)


def test_inner_alpha_minimises_the_p_moment():
    rng = np.random.default_rng(4)
    f = rng.standard_normal(6)
    degrees = rng.uniform(0.5, 2.0, 6)
    p = 3.0
    alpha = inner_alpha(f, p, degrees)

    def moment(a):
        return float(np.sum(np.abs(f - a) ** p * degrees))

    assert moment(alpha) <= moment(alpha + 1e-4)
    assert moment(alpha) <= moment(alpha - 1e-4)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_two_vertex_gap_is_2_to_the_p(two_vertex, p):
    assert lambda1_p(two_vertex, p, restarts=4).value == pytest.approx(2.0**p, rel=1e-8)


def test_gap_at_p2_is_twice_the_normalised_gap(all_graphs):
    for name, graph in all_graphs.items():
        result = lambda1_p(graph, 2.0, restarts=8, seed=0)
        assert result.value == pytest.approx(2.0 * lambda1(graph), rel=1e-8), name


def test_gap_witness_reproduces_the_value(c4):
    result = lambda1_p(c4, 3.0, restarts=8)
    value, _ = p_rayleigh_quotient(c4, result.witness, 3.0)
    assert value == pytest.approx(result.value, rel=1e-9)
    assert result.residual >= 0.0


def test_gap_is_deterministic(k4):
    first = lambda1_p(k4, 2.5, restarts=4, seed=9)
    second = lambda1_p(k4, 2.5, restarts=4, seed=9)
    assert first.value == second.value
    assert np.array_equal(first.witness, second.witness)


def test_quotient_invariant_under_affine_change_of_f(all_graphs):
    rng = np.random.default_rng(12)
    for graph in all_graphs.values():
        for p in (1.5, 2.0, 3.0):
            f = rng.standard_normal(graph.num_vertices)
            c = float(rng.uniform(0.1, 10.0)) * rng.choice([-1.0, 1.0])
            d = float(rng.uniform(-5.0, 5.0))
            base, _ = p_rayleigh_quotient(graph, f, p)
            moved, _ = p_rayleigh_quotient(graph, c * f + d, p)
            assert moved == pytest.approx(base, rel=1e-10)


def test_gap_invariant_under_weight_scaling(path3):
    base = lambda1_p(path3, 3.0, restarts=4).value
    scaled = lambda1_p(path3.scaled(0.25), 3.0, restarts=4).value
    assert scaled == pytest.approx(base, rel=1e-9)


def test_gap_needs_connected_graph():
    graph = WeightedGraph(("a", "b", "c", "d"), (("a", "b", 1.0), ("c", "d", 1.0)))
    with pytest.raises(DomainError):
        lambda1_p(graph, 2.0)


def test_z5_cayley_graph_is_weighted_k5(z5_spec):
    _, cayley = cyclic_cayley(z5_spec, 5)
    stats = graph_stats(cayley.graph)
    assert stats.num_vertices == 5
    assert stats.num_edges == 10
    assert all(w == pytest.approx(0.25) for _, _, w in cayley.graph.edges)
    assert cayley.elements[cayley.identity] == "g0"


@pytest.mark.parametrize("spec_name, n, exact", [("z5_spec", 5, 2.5), ("z3_spec", 3, 3.0)])
def test_quotient_bound_at_p2(request, spec_name, n, exact):
    spec = request.getfixturevalue(spec_name)
    link, cayley = cyclic_cayley(spec, n)
    report = check_quotient_bound(kappa2(link), cayley, 2.0, restarts=8)
    assert report.claimed
    assert report.bound_derived == pytest.approx(report.bound_stated**2, rel=1e-12)
    assert report.lambda_p_exact == pytest.approx(exact, rel=1e-12)
    assert report.lambda_p == pytest.approx(exact, rel=1e-8)
    assert report.stated_holds and report.margin_stated > 0
    assert report.derived_holds and report.margin_derived > 0


def test_no_bound_claimed_for_large_kappa(z3_spec):
    _, cayley = cyclic_cayley(z3_spec, 3)
    report = check_quotient_bound(1.5, cayley, 2.0)
    assert not report.claimed
    assert report.note == "no bound claimed"
    assert report.lambda_p is None


def test_non_generating_images_are_a_domain_error(z3_spec):
    link = build_link_graph(z3_spec)
    group = cyclic_group(6)
    with pytest.raises(DomainError):
        cayley_graph(
            group["table"],
            {"1": 2, "2": 4},
            {v: link.degree(v) for v in link.vertices},
            link.omega_E,
            inverse=z3_spec.inverse,
        )


@pytest.mark.parametrize(
    "table, images",
    [
        ([[0, 1], [0, 1]], {"1": 1, "2": 1}),
        ([[0, 1, 2], [1, 2, 0], [2, 0, 1]], {"1": 0, "2": 0}),
        ([[0, 1, 2], [1, 2, 0], [2, 0, 1]], {"1": 1, "2": 1}),
        ([[0, 1, 2], [1, 2, 0], [2, 0, 1]], {"1": 1}),
        ([[0, 1, 2], [1, 2, 0], [2, 0, 1]], {"1": 1, "2": 7}),
    ],
)
def test_malformed_cayley_input_is_structural(z3_spec, table, images):
    link = build_link_graph(z3_spec)
    degrees = {v: link.degree(v) for v in link.vertices}
    with pytest.raises(StructuralError):
        cayley_graph(table, images, degrees, link.omega_E, inverse=z3_spec.inverse)


def test_quotient_bound_rejects_bad_exponent(z3_spec):
    _, cayley = cyclic_cayley(z3_spec, 3)
    with pytest.raises(DomainError):
        check_quotient_bound(0.5, cayley, math.inf)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.5])
def test_euler_identity(all_graphs, p):
    rng = np.random.default_rng(21)
    for name, graph in all_graphs.items():
        f = rng.standard_normal(graph.num_vertices)
        tails, heads, weights = graph.edge_arrays
        edge_sum = float(np.sum(np.abs(f[tails] - f[heads]) ** p * weights))
        assert f @ apply_p_laplacian(graph, f, p) == pytest.approx(edge_sum, rel=1e-10), name


def test_p_laplacian_on_two_vertices(two_vertex):
    assert apply_p_laplacian(two_vertex, [0.0, 1.0], 3.0) == pytest.approx([-1.0, 1.0])
    assert apply_p_laplacian(two_vertex, [2.5, 2.5], 3.0) == pytest.approx([0.0, 0.0])


def test_p_laplacian_of_constant_is_zero(all_graphs):
    for graph in all_graphs.values():
        constant = np.full(graph.num_vertices, -1.75)
        assert np.all(apply_p_laplacian(graph, constant, 2.5) == 0.0)


def test_inner_alpha_worked_example():
    f = np.array([0.0, 1.0])
    degrees = np.array([1.0, 2.0])
    alpha = inner_alpha(f, 3.0, degrees)
    assert alpha == pytest.approx(2.0 - math.sqrt(2.0), abs=1e-9)
    slope = float(np.sum(degrees * np.sign(f - alpha) * np.abs(f - alpha) ** 2))
    assert abs(slope) <= 1e-12 * degrees.sum() * np.abs(f).max() ** 2


def test_inner_alpha_of_symmetric_function():
    f = np.array([-2.0, -0.5, 0.5, 2.0])
    assert inner_alpha(f, 4.0, np.ones(4)) == pytest.approx(0.0, abs=1e-12)


def test_more_restarts_never_raise_the_gap(fano):
    few = lambda1_p(fano, 3.0, restarts=8, seed=5).value
    many = lambda1_p(fano, 3.0, restarts=64, seed=5).value
    assert many <= few
