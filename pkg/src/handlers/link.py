from typing import Any, Dict

from linkcert.graph import AdmissibilityReport, build_link_graph, graph_stats, is_connected, verify_admissible

from .base_handler import BaseHandler


def _admissibility(report: AdmissibilityReport) -> Dict[str, Any]:
    return {
        "admissible": report.admissible,
        "violations": [violation._asdict() for violation in report.violations],
    }


class LinkGraphHandler(BaseHandler):
    """Builds the link graph of a generating set with a uniform edge weight."""

    input_attributes = ("spec",)

    def handle(self) -> None:
        spec = self._load_spec(self.args.spec)
        graph = build_link_graph(spec, default_weight=self.args.weight)
        self._emit_graph(self.args.emit_graph, graph, spec)
        self.emit(
            {
                "stats": graph_stats(graph),
                "connected": is_connected(graph),
                "edges": [{"u": u, "v": v, "w": w} for u, v, w in graph.edges],
                "admissibility": _admissibility(verify_admissible(spec, graph)),
            }
        )


class CheckAdmissibleHandler(BaseHandler):
    """Checks deg(s) = deg(s^-1) and the product-mass condition for a weighted link graph."""

    input_attributes = ("graph",)

    def handle(self) -> None:
        document = self._load_document(self.args.graph)
        graph = document.to_graph()
        report = verify_admissible(document.to_spec(), graph)
        self.emit({"stats": graph_stats(graph), **_admissibility(report)})
