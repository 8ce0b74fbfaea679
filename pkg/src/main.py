import argparse
import logging
import sys
from typing import List, Optional

import handlers
from linkcert.errors import DomainError, StructuralError
from utils import common_arg

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 64

KAPPA_METHODS = ("eigen", "optimize", "brute", "interp")


class LinkCertArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage status 64 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_arguments(argv: Optional[List[str]] = None):
    """
    Parses command-line arguments for linkcert.

    This function sets up the command-line interface using argparse, with one
    subcommand per computation: closed forms for the Ã2 family, Poincaré
    constants of a graph file, fixed-point certificates, p-Laplacian gaps of
    finite quotients, and link-graph construction from a generating set.

    Returns:
        argparse.Namespace: An object containing the parsed command-line arguments.
    """
    parser = LinkCertArgumentParser(
        prog="linkcert",
        description=(
            "linkcert: spectral certificates for fixed-point properties\n\n"
            "Computes Poincaré constants of weighted link graphs, turns them into "
            "pass / fail / inconclusive certificates for L_p fixed-point properties, "
            "and reproduces the p-ranges of the Ã2 family from their closed forms."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    subparsers = parser.add_subparsers(
        dest="command", title="Commands", metavar="<command>", required=True
    )

    # Subcommand: a2
    a2_parser = subparsers.add_parser("a2", help="Ã2 closed forms for one prime power q.")
    common_arg.add_common_arguments(a2_parser)
    a2_parser.add_argument("--q", type=common_arg.positive_int, required=True, help="Prime power q.")
    a2_parser.add_argument(
        "--emit-graph", type=str, help="Write the incidence graph of P^2(F_q) to this path."
    )
    a2_parser.add_argument(
        "--verify",
        action="store_true",
        help="Cross-check the closed-form kappa_2 against the eigensolver.",
    )

    # Subcommand: scan-a2
    scan_parser = subparsers.add_parser("scan-a2", help="p_max over all prime powers up to --q-max.")
    common_arg.add_common_arguments(scan_parser)
    scan_parser.add_argument("--q-max", type=common_arg.positive_int, required=True)

    # Subcommand: kappa
    kappa_parser = subparsers.add_parser("kappa", help="Poincaré constant kappa_p of a graph file.")
    common_arg.add_common_arguments(kappa_parser, has_solver=True)
    kappa_parser.add_argument("graph", help="Graph document (JSON).")
    kappa_parser.add_argument("--p", type=common_arg.exponent, help="Exponent p (default 2).")
    kappa_parser.add_argument(
        "--method",
        choices=KAPPA_METHODS + ("path",),
        help="eigen (p = 2), optimize, brute, interp, or path (p = inf lower bound).",
    )
    kappa_parser.add_argument(
        "--spectrum", action="store_true", help="Include the full normalised spectrum (eigen)."
    )
    kappa_parser.add_argument(
        "--distortion",
        type=common_arg.positive_float,
        help="Also bound kappa_p on a space L-isomorphic to this one (L >= 1).",
    )

    # Subcommand: certify
    certify_parser = subparsers.add_parser("certify", help="Fixed-point certificate at exponent p.")
    common_arg.add_common_arguments(certify_parser, has_solver=True)
    certify_parser.add_argument("graph", help="Graph document (JSON).")
    certify_parser.add_argument("--p", type=common_arg.exponent, required=True)
    certify_parser.add_argument(
        "--kappa-method",
        dest="method",
        choices=KAPPA_METHODS,
        help="Estimator for kappa_p and kappa_p* (default: eigen at p = 2, interp otherwise).",
    )

    # Subcommand: confdim
    confdim_parser = subparsers.add_parser(
        "confdim", help="Certified p-range and conformal dimension lower bound."
    )
    common_arg.add_common_arguments(confdim_parser)
    confdim_parser.add_argument("graph", help="Graph document (JSON).")
    confdim_parser.add_argument(
        "--allow-irregular",
        action="store_true",
        help="Use the conservative min/max-degree variant on irregular graphs.",
    )

    # Subcommand: plaplacian
    plap_parser = subparsers.add_parser("plaplacian", help="First positive eigenvalue of Delta_p.")
    common_arg.add_common_arguments(plap_parser, has_solver=True)
    plap_parser.add_argument("graph", help="Graph document (JSON).")
    plap_parser.add_argument("--p", type=common_arg.exponent, required=True)

    # Subcommand: cayley
    cayley_parser = subparsers.add_parser(
        "cayley", help="Weighted Cayley graph of a finite quotient and its spectral gap."
    )
    common_arg.add_common_arguments(cayley_parser, has_solver=True)
    cayley_parser.add_argument("group", help="Group document (JSON).")
    cayley_parser.add_argument("--link", required=True, help="Link graph document (JSON).")
    cayley_parser.add_argument(
        "--check-bound",
        action="store_true",
        help="Compare the gap with the bound implied by kappa_p of the link.",
    )
    cayley_parser.add_argument("--p", type=common_arg.exponent, help="Exponent for --check-bound (default 2).")
    cayley_parser.add_argument("--kappa-method", dest="method", choices=KAPPA_METHODS)
    cayley_parser.add_argument("--emit-graph", type=str, help="Write the Cayley graph to this path.")

    # Subcommand: link-graph
    link_parser = subparsers.add_parser("link-graph", help="Link graph of a generating set.")
    common_arg.add_common_arguments(link_parser)
    link_parser.add_argument("spec", help="Generating set document (JSON with inverse and products).")
    link_parser.add_argument(
        "--weight", type=common_arg.positive_float, default=1.0, help="Weight of every edge."
    )
    link_parser.add_argument("--emit-graph", type=str, help="Write the link graph to this path.")

    # Subcommand: check-admissible
    admissible_parser = subparsers.add_parser(
        "check-admissible", help="Check both admissibility conditions of a weighted link graph."
    )
    common_arg.add_common_arguments(admissible_parser)
    admissible_parser.add_argument("graph", help="Graph document with inverse and products.")

    args = parser.parse_args(argv)
    common_arg.handle_invalid_arguments(args)
    return args


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """
    Runs one linkcert command and returns its exit status.

    0 on success, 1 on I/O, parse and structural errors, 2 on domain errors
    (bad q, disconnected graph, p out of range), 64 on usage errors.
    """
    try:
        args = parse_arguments(argv)
    except argparse.ArgumentError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as e:
        return EXIT_OK if e.code is None else int(e.code)

    _configure_logging(args.verbose)
    try:
        handlers.COMMAND_HANDLERS[args.command](args)
    except DomainError as e:
        print(f"Domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except StructuralError as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        print(f"An unexpected error occurred: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main():
    """Entry point for the linkcert CLI."""
    sys.exit(run())


if __name__ == "__main__":
    main()
