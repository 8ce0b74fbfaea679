import logging
import sys

from linkcert.certificate import a2_summary, scan_a2
from linkcert.finite_geometry import incidence_graph
from linkcert.spectral import kappa2

from .base_handler import BaseHandler

logger = logging.getLogger(__name__)

VERIFY_REL_TOL = 1e-9


class A2Handler(BaseHandler):
    """Closed-form p-range, thresholds and kappa_2 for the Ã2 group with parameter q."""

    def handle(self) -> None:
        q = self.args.q
        result = a2_summary(q)

        if self.args.verify or self.args.emit_graph:
            graph = incidence_graph(q)
            self._emit_graph(self.args.emit_graph, graph)
            if self.args.verify:
                numeric = kappa2(graph)
                relative = abs(numeric - result["kappa2"]) / result["kappa2"]
                result["verify"] = {
                    "kappa2_eigensolver": numeric,
                    "relative_error": relative,
                    "agrees": relative <= VERIFY_REL_TOL,
                }
                logger.debug("a2 q=%d: eigensolver kappa2 relative error %.3e", q, relative)

        self.emit(result)


class ScanA2Handler(BaseHandler):
    """p_max over every prime power up to --q-max, with its argmax."""

    def handle(self) -> None:
        scan = scan_a2(self.args.q_max, progress=sys.stderr.isatty())
        tail = [row.p_max for row in scan.rows if row.q >= scan.argmax_q]
        self.emit(
            {
                "q_max": self.args.q_max,
                "count": len(scan.rows),
                "argmax_q": scan.argmax_q,
                "max_p": scan.max_p,
                "decreasing_after_argmax": all(b < a for a, b in zip(tail, tail[1:])),
                "rows": [{"q": row.q, "p_max": row.p_max} for row in scan.rows],
            }
        )
