import logging
from typing import Any, Dict, Optional

import numpy as np

from linkcert.certificate import (
    certify_fixed_point,
    confdim_lower_bound,
    conjugate_exponent,
    hyperbolic_p_bounds_for_graph,
    kazhdan_constant,
    obstruction_check,
    Verdict,
)
from linkcert.graph import WeightedGraph
from linkcert.poincare import (
    Method,
    PoincareEstimate,
    estimate_kappa,
    isomorphic_kappa_bound,
    kappa_inf_lower,
)
from linkcert.spectral import kappa2, spectrum

from .base_handler import BaseHandler

logger = logging.getLogger(__name__)


def witness_by_vertex(graph: WeightedGraph, witness) -> Optional[Dict[str, float]]:
    if witness is None:
        return None
    values = np.asarray(witness, dtype=float)
    return {v: float(x) for v, x in zip(graph.vertices, values)}


def estimate_summary(graph: WeightedGraph, estimate: PoincareEstimate) -> Dict[str, Any]:
    return {
        "p": estimate.p,
        "lower": estimate.lower,
        "upper": estimate.upper,
        "method": estimate.method,
        "certified_upper": estimate.certified_upper,
        "resolution": estimate.resolution,
        "witness": witness_by_vertex(graph, estimate.witness),
    }


class KappaHandler(BaseHandler):
    """kappa_p of a graph file by the requested method."""

    input_attributes = ("graph",)

    def handle(self) -> None:
        config = self.config
        document = self._load_document(self.args.graph)
        graph = document.to_graph()

        p = config.p if config.p is not None else 2.0
        method = config.method or (Method.EIGEN.value if p == 2 else Method.OPTIMIZE.value)

        if method == Method.PATH.value:
            spec = document.to_spec() if document.has_spec else None
            bound = kappa_inf_lower(spec, graph)
            self.emit(
                {
                    "p": "inf",
                    "lower": bound.value,
                    "upper": None,
                    "method": Method.PATH,
                    "generator": bound.generator,
                    "witness": bound.witness,
                    "witness_ratio": bound.witness_ratio,
                }
            )
            return

        estimate = estimate_kappa(
            graph,
            p,
            Method(method),
            restarts=config.restarts,
            seed=config.seed,
            tol=config.tol,
            mesh=config.mesh,
        )
        result = estimate_summary(graph, estimate)
        if estimate.method is Method.EIGEN:
            spec_result = spectrum(graph)
            result["lambda1"] = spec_result.lambda1
            result["kappa2"] = estimate.upper
            if self.args.spectrum:
                result["spectrum"] = spec_result.eigenvalues
        if self.args.distortion is not None and estimate.certified_upper is not None:
            result["isomorphic_upper"] = isomorphic_kappa_bound(
                estimate.certified_upper, self.args.distortion
            )
        self.emit(result)


class CertifyHandler(BaseHandler):
    """Fixed-point certificate max{2^{-1/p} kappa_p, 2^{-1/p*} kappa_p*} < 1."""

    input_attributes = ("graph",)

    def handle(self) -> None:
        config = self.config
        graph = self._load_graph(self.args.graph)
        p = config.p
        pstar = conjugate_exponent(p)
        method = Method(config.method or (Method.EIGEN.value if p == 2 else Method.INTERP.value))

        def estimate(exponent: float) -> PoincareEstimate:
            return estimate_kappa(
                graph,
                exponent,
                method,
                restarts=config.restarts,
                seed=config.seed,
                tol=config.tol,
                mesh=config.mesh,
            )

        kappa_p = estimate(p)
        kappa_pstar = kappa_p if pstar == p else estimate(pstar)
        certificate = certify_fixed_point(kappa_p, kappa_pstar, p)
        logger.debug("certify p=%g: condition values %s", p, certificate.condition_values)

        result: Dict[str, Any] = {
            "verdict": certificate.verdict,
            "p": p,
            "pstar": pstar,
            "condition_value": max(certificate.condition_values),
            "condition_values": certificate.condition_values,
            "kappa_p": estimate_summary(graph, kappa_p),
            "kappa_pstar": estimate_summary(graph, kappa_pstar),
            "provenance": certificate.provenance,
            "obstruction": obstruction_check(kappa_p, kappa_pstar, p),
            "kazhdan_constant": None,
        }
        if certificate.verdict is Verdict.PASS:
            result["kazhdan_constant"] = kazhdan_constant(certificate.kappa_pstar_upper, pstar)
        self.emit(result)


class ConfdimHandler(BaseHandler):
    """Certified p-range from link-graph statistics, and the conformal dimension bound it gives."""

    input_attributes = ("graph",)

    def handle(self) -> None:
        graph = self._load_graph(self.args.graph)
        k2 = kappa2(graph)
        report = hyperbolic_p_bounds_for_graph(
            graph, kappa_2=k2, allow_irregular=self.args.allow_irregular, source=self.args.graph
        )
        result: Dict[str, Any] = {"kappa2": k2, "p_range": report, "confdim_lower_bound": None}
        if report.certified and report.p_max is not None:
            result["confdim_lower_bound"] = confdim_lower_bound(report)
        self.emit(result)
