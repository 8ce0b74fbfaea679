import numpy as np
import pytest

from linkcert.errors import DomainError, StructuralError
from linkcert.graph import (
    GeneratingSetSpec,
    WeightedGraph,
    build_link_graph,
    graph_stats,
    is_connected,
    path_distance,
    verify_admissible,
)
from linkcert.graph_io import GraphDocument, load_graph_document, save_graph


def test_degrees_and_omega_e_count_each_edge_twice(weighted_path3):
    assert weighted_path3.degree("a") == 0.5
    assert weighted_path3.degree("b") == 2.5
    assert weighted_path3.degree("c") == 2.0
    assert weighted_path3.omega_E == pytest.approx(5.0)
    assert weighted_path3.omega_E == pytest.approx(float(np.sum(weighted_path3.degrees)))


def test_weight_is_symmetric_and_zero_off_edges(path3):
    assert path3.weight("a", "b") == path3.weight("b", "a") == 1.0
    assert path3.weight("a", "c") == 0.0


@pytest.mark.parametrize(
    "vertices, edges",
    [
        (("a", "a"), ()),
        (("a", "b"), (("a", "z", 1.0),)),
        (("a", "b"), (("a", "a", 1.0),)),
        (("a", "b"), (("a", "b", 0.0),)),
        (("a", "b"), (("a", "b", float("inf")),)),
        (("a", "b"), (("a", "b", 1.0), ("b", "a", 2.0))),
    ],
)
def test_malformed_graphs_are_rejected(vertices, edges):
    with pytest.raises(StructuralError):
        WeightedGraph(vertices, edges)


def test_scaled_multiplies_every_weight(triangle):
    scaled = triangle.scaled(3.0)
    assert scaled.omega_E == pytest.approx(3.0 * triangle.omega_E)
    with pytest.raises(DomainError):
        triangle.scaled(0.0)


def test_link_graph_of_z5_is_k4(z5_spec):
    graph = build_link_graph(z5_spec)
    stats = graph_stats(graph)
    assert stats.num_vertices == 4
    assert stats.num_edges == 6
    assert stats.regular and stats.degree_max == 3.0


def test_link_graph_of_z3_is_a_single_edge(z3_spec):
    graph = build_link_graph(z3_spec)
    assert graph.edges == (("1", "2", 1.0),)


def test_free_group_link_graph_is_edgeless_and_disconnected(free_spec):
    graph = build_link_graph(free_spec)
    assert graph.edges == ()
    assert not is_connected(graph)


def test_path_spec_link_graph_is_a_path(path_spec):
    graph = build_link_graph(path_spec)
    assert is_connected(graph)
    assert path_distance(graph, "a", "A") == 3
    assert path_distance(graph, "b", "B") == 1


def test_inconsistent_product_table_names_the_pair():
    spec = GeneratingSetSpec(
        ("a", "A", "b", "B"),
        {"a": "A", "A": "a", "b": "B", "B": "b"},
        {("a", "b"): "b"},
    )
    with pytest.raises(StructuralError, match=r"\(a, b\)"):
        build_link_graph(spec)


def test_inverse_must_be_an_involution():
    with pytest.raises(StructuralError):
        GeneratingSetSpec(("a", "b", "c"), {"a": "b", "b": "c", "c": "a"}, {})


def test_products_must_stay_in_s():
    with pytest.raises(StructuralError):
        GeneratingSetSpec(("a", "A"), {"a": "A", "A": "a"}, {("a", "A"): "x"})


def test_empty_vertex_set_has_no_connectivity():
    with pytest.raises(StructuralError):
        is_connected(WeightedGraph((), ()))


def test_unit_weight_link_graphs_are_admissible(z3_spec, z5_spec, path_spec):
    for spec in (z3_spec, z5_spec, path_spec):
        report = verify_admissible(spec, build_link_graph(spec))
        assert report.admissible, report.violations


def test_admissibility_reports_violated_condition(z5_spec):
    graph = build_link_graph(z5_spec)
    edges = tuple((u, v, 2.0 if {u, v} == {"1", "2"} else w) for u, v, w in graph.edges)
    report = verify_admissible(z5_spec, WeightedGraph(graph.vertices, edges))
    assert not report.admissible
    conditions = {v.condition for v in report.violations}
    assert "product-mass" in conditions
    assert "inverse-degree" in conditions


def test_admissibility_is_invariant_under_rescaling(z5_spec, path_spec):
    rng = np.random.default_rng(7)
    for spec in (z5_spec, path_spec):
        graph = build_link_graph(spec)
        perturbed = WeightedGraph(
            graph.vertices,
            tuple((u, v, w * rng.uniform(0.5, 2.0)) for u, v, w in graph.edges),
        )
        for candidate in (graph, perturbed):
            verdict = verify_admissible(spec, candidate).admissible
            for _ in range(5):
                factor = float(rng.uniform(1e-3, 1e3))
                assert verify_admissible(spec, candidate.scaled(factor)).admissible == verdict


def test_graph_document_round_trip_is_bit_exact(tmp_path, path_spec):
    rng = np.random.default_rng(3)
    graph = build_link_graph(path_spec)
    graph = WeightedGraph(
        graph.vertices, tuple((u, v, float(rng.uniform(0.1, 10.0))) for u, v, _ in graph.edges)
    )
    path = tmp_path / "link.json"
    save_graph(str(path), graph, path_spec)

    document = load_graph_document(str(path))
    assert document.to_graph() == graph
    assert document.to_spec().products == path_spec.products
    assert [w for _, _, w in document.to_graph().edges] == [w for _, _, w in graph.edges]


def test_graph_document_without_inverse_is_not_a_spec(path3):
    document = GraphDocument.from_graph(path3)
    assert not document.has_spec
    with pytest.raises(StructuralError):
        document.to_spec()


def test_graph_document_rejects_nonpositive_weight(write_json):
    path = write_json("bad.json", {"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "w": -1}]})
    with pytest.raises(StructuralError):
        load_graph_document(path)
