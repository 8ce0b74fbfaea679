"""
JSON documents for graphs, generating sets and finite groups.

A graph document carries ``vertices``, ``edges`` (objects ``{u, v, w}``) and,
for generating sets, the optional ``inverse`` map and ``products`` triples
``[s, t, r]`` meaning s^-1 t = r. Floats are written in shortest round-trip
form, so loading a saved document reproduces every weight bit for bit.
"""

import json
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import StructuralError
from .graph import GeneratingSetSpec, WeightedGraph


class EdgeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    u: str
    v: str
    w: float = Field(gt=0, allow_inf_nan=False)


class GraphDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: List[str]
    inverse: Optional[Dict[str, str]] = None
    products: Optional[List[Tuple[str, str, str]]] = None
    edges: List[EdgeRecord] = Field(default_factory=list)

    @property
    def has_spec(self) -> bool:
        return self.inverse is not None

    def to_graph(self) -> WeightedGraph:
        return WeightedGraph(
            tuple(self.vertices), tuple((e.u, e.v, e.w) for e in self.edges)
        )

    def to_spec(self) -> GeneratingSetSpec:
        """
        The generating set described by ``inverse`` and ``products``.

        Raises:
            StructuralError: If ``inverse`` is absent or a product pair is
                listed twice with different results.
        """
        if self.inverse is None:
            raise StructuralError(
                "Document has no 'inverse' map; it describes a plain graph, not a generating set."
            )
        products: Dict[Tuple[str, str], str] = {}
        for s, t, r in self.products or ():
            if products.setdefault((s, t), r) != r:
                raise StructuralError(
                    f"Product ({s}, {t}) listed as both '{products[(s, t)]}' and '{r}'."
                )
        return GeneratingSetSpec(tuple(self.vertices), self.inverse, products)

    @classmethod
    def from_graph(
        cls, graph: WeightedGraph, spec: Optional[GeneratingSetSpec] = None
    ) -> "GraphDocument":
        inverse = products = None
        if spec is not None:
            inverse = dict(spec.inverse)
            products = [(s, t, r) for (s, t), r in spec.products.items()]
        return cls(
            vertices=list(graph.vertices),
            inverse=inverse,
            products=products,
            edges=[EdgeRecord(u=u, v=v, w=w) for u, v, w in graph.edges],
        )

    def dumps(self) -> str:
        return json.dumps(self.model_dump(exclude_none=True), indent=2) + "\n"


class GroupDocument(BaseModel):
    """A finite group H given by its row-major multiplication table of element indices."""

    model_config = ConfigDict(extra="forbid")

    elements: List[str]
    table: List[List[int]]
    images: Dict[str, int]


def _read(path: str, model):
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise StructuralError(f"Cannot parse '{path}': {exc}") from exc


def load_graph_document(path: str) -> GraphDocument:
    """
    Reads a graph document.

    Raises:
        OSError: If the file cannot be read.
        StructuralError: If the JSON is malformed or violates the schema.
    """
    return _read(path, GraphDocument)


def load_group_document(path: str) -> GroupDocument:
    return _read(path, GroupDocument)


def save_graph(
    path: str, graph: WeightedGraph, spec: Optional[GeneratingSetSpec] = None
) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(GraphDocument.from_graph(graph, spec).dumps())
