from .geometry import A2Handler, ScanA2Handler
from .kappa import CertifyHandler, ConfdimHandler, KappaHandler
from .laplacian import CayleyHandler, PLaplacianHandler
from .link import CheckAdmissibleHandler, LinkGraphHandler


def _runner(handler_class):
    """Instantiates and runs a handler for the parsed arguments."""

    def run_handler(args):
        handler_class(args).handle()

    return run_handler


COMMAND_HANDLERS = {
    "a2": _runner(A2Handler),
    "scan-a2": _runner(ScanA2Handler),
    "kappa": _runner(KappaHandler),
    "certify": _runner(CertifyHandler),
    "confdim": _runner(ConfdimHandler),
    "plaplacian": _runner(PLaplacianHandler),
    "cayley": _runner(CayleyHandler),
    "link-graph": _runner(LinkGraphHandler),
    "check-admissible": _runner(CheckAdmissibleHandler),
}
