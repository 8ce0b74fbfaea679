import logging
from typing import Any, Dict

from linkcert.errors import DomainError
from linkcert.graph import graph_stats
from linkcert.p_laplacian import cayley_graph, check_quotient_bound, lambda1_p
from linkcert.poincare import Method, estimate_kappa
from linkcert.spectral import lambda1

from .base_handler import BaseHandler
from .kappa import witness_by_vertex

logger = logging.getLogger(__name__)


class PLaplacianHandler(BaseHandler):
    """First positive eigenvalue of the p-Laplacian, by multi-restart descent."""

    input_attributes = ("graph",)

    def handle(self) -> None:
        config = self.config
        graph = self._load_graph(self.args.graph)
        found = lambda1_p(graph, config.p, restarts=config.restarts, seed=config.seed)
        result: Dict[str, Any] = {
            "p": found.p,
            "lambda1_p": found.value,
            "alpha_star": found.alpha_star,
            "residual": found.residual,
            "iterations": found.iterations,
            "restarts": found.restarts,
            "witness": witness_by_vertex(graph, found.witness),
        }
        if config.p == 2:
            result["lambda1_p_exact"] = 2.0 * lambda1(graph)
        self.emit(result)


class CayleyHandler(BaseHandler):
    """Weighted Cayley graph of a finite quotient H, optionally checked against the link bound."""

    input_attributes = ("group", "link")

    def handle(self) -> None:
        config = self.config
        group = self._load_group(self.args.group)
        link_document = self._load_document(self.args.link)
        link = link_document.to_graph()

        cayley = cayley_graph(
            group.table,
            group.images,
            {v: link.degree(v) for v in link.vertices},
            link.omega_E,
            inverse=link_document.inverse,
            element_labels=group.elements,
        )
        self._emit_graph(self.args.emit_graph, cayley.graph)

        stats = graph_stats(cayley.graph)
        gap = lambda1(cayley.graph)
        result: Dict[str, Any] = {
            "order": len(cayley.elements),
            "identity": cayley.elements[cayley.identity],
            "generator_images": {s: cayley.elements[g] for s, g in cayley.generator_images.items()},
            "stats": stats,
            "lambda1": gap,
            "lambda1_p2": 2.0 * gap,
        }

        if self.args.check_bound:
            p = config.p if config.p is not None else 2.0
            method = Method(config.method or (Method.EIGEN.value if p == 2 else Method.INTERP.value))
            estimate = estimate_kappa(
                link, p, method, restarts=config.restarts, seed=config.seed, tol=config.tol, mesh=config.mesh
            )
            if estimate.certified_upper is None:
                raise DomainError(
                    f"The quotient bound needs a certified upper bound on kappa_p; "
                    f"method '{method.value}' gives only a lower bound."
                )
            result["link_kappa_p"] = {"p": p, "upper": estimate.certified_upper, "method": method}
            result["bound"] = check_quotient_bound(
                estimate.certified_upper, cayley, p, restarts=config.restarts, seed=config.seed
            )
            logger.debug("cayley bound check at p=%g: %s", p, result["bound"])

        self.emit(result)
