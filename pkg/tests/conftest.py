import json

import pytest

from linkcert.finite_geometry import incidence_graph
from linkcert.graph import GeneratingSetSpec, WeightedGraph


def cyclic_spec(n: int) -> GeneratingSetSpec:
    """Z/n with S = Z/n minus 0; labels are residues, s^-1 t = t - s."""
    elements = tuple(str(k) for k in range(1, n))
    inverse = {str(k): str(n - k) for k in range(1, n)}
    products = {
        (str(s), str(t)): str((t - s) % n)
        for s in range(1, n)
        for t in range(1, n)
        if s != t
    }
    return GeneratingSetSpec(elements, inverse, products)


def cyclic_group(n: int) -> dict:
    return {
        "elements": [f"g{k}" for k in range(n)],
        "table": [[(i + j) % n for j in range(n)] for i in range(n)],
        "images": {str(k): k for k in range(1, n)},
    }


@pytest.fixture
def two_vertex():
    return WeightedGraph(("x", "y"), (("x", "y", 1.0),))


@pytest.fixture
def path3():
    return WeightedGraph(("a", "b", "c"), (("a", "b", 1.0), ("b", "c", 1.0)))


@pytest.fixture
def triangle():
    return WeightedGraph(
        ("a", "b", "c"), (("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0))
    )


@pytest.fixture
def k4():
    vertices = ("a", "b", "c", "d")
    edges = tuple(
        (u, v, 1.0) for i, u in enumerate(vertices) for v in vertices[i + 1 :]
    )
    return WeightedGraph(vertices, edges)


@pytest.fixture
def c4():
    return WeightedGraph(
        ("a", "b", "c", "d"),
        (("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)),
    )


@pytest.fixture
def weighted_path3():
    return WeightedGraph(("a", "b", "c"), (("a", "b", 0.5), ("b", "c", 2.0)))


@pytest.fixture
def fano():
    return incidence_graph(2)


@pytest.fixture
def small_graphs(two_vertex, path3, triangle, k4, c4):
    return {
        "two-vertex": two_vertex,
        "path-3": path3,
        "triangle": triangle,
        "K4": k4,
        "4-cycle": c4,
    }


@pytest.fixture
def all_graphs(small_graphs, fano):
    return {**small_graphs, "fano": fano}


@pytest.fixture
def z3_spec():
    return cyclic_spec(3)


@pytest.fixture
def z5_spec():
    return cyclic_spec(5)


@pytest.fixture
def free_spec():
    """Free group on a, b: no product of two generators lies in S."""
    return GeneratingSetSpec(
        ("a", "A", "b", "B"), {"a": "A", "A": "a", "b": "B", "B": "b"}, {}
    )


@pytest.fixture
def path_spec():
    """S = {a, b, A, B} whose link graph is the path a - b - B - A."""
    return GeneratingSetSpec(
        ("a", "b", "B", "A"),
        {"a": "A", "A": "a", "b": "B", "B": "b"},
        {
            ("a", "b"): "b",
            ("b", "a"): "B",
            ("b", "B"): "A",
            ("B", "b"): "a",
            ("B", "A"): "B",
            ("A", "B"): "b",
        },
    )


@pytest.fixture
def write_json(tmp_path):
    def write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
