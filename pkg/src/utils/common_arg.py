import argparse
import math
import os


def _validate_path(
    path_str: str,
    path_description: str,
    must_be_file: bool = False,
):
    """
    Validates a given path string for existence and optionally for type.

    Args:
        path_str: The path string to validate.
        path_description: A human-readable description for error messages (e.g., "graph file").
        must_be_file: If True, checks if the path is a regular file.

    Raises:
        argparse.ArgumentError: If validation fails.
    """
    if not os.path.exists(path_str):
        raise argparse.ArgumentError(
            None, f"The provided {path_description} path does not exist: '{path_str}'"
        )
    if must_be_file and not os.path.isfile(path_str):
        raise argparse.ArgumentError(
            None, f"The provided {path_description} path is not a file: '{path_str}'"
        )


# ------------------------------ Value types ------------------------------ #
def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{text}'")
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {value}")
    return value


def exponent(text: str) -> float:
    """An exponent p with 1 < p < inf."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{text}'")
    if not 1 < value < math.inf:
        raise argparse.ArgumentTypeError(f"p must satisfy 1 < p < inf, got {value}")
    return value


# --------------------------- Shared arguments --------------------------- #
def add_common_arguments(parser: argparse.ArgumentParser, has_solver: bool = False):
    """
    Adds shared command-line arguments to an argparse parser.

    Every command takes an output format, an optional JSON configuration file
    and a verbosity flag. Commands that run the numerical optimisers also take
    the solver settings.

    Args:
        parser: The argparse.ArgumentParser or subparser object to which
                the arguments will be added.
        has_solver: If True, adds --restarts, --seed, --tol and --mesh.
    """
    parser.add_argument(
        "--format",
        choices=("structured", "human"),
        default=None,
        help="Report format (default: structured JSON).",
    )
    parser.add_argument(
        "-c",
        "--config",
        type=str,
        help="Path to an optional JSON configuration file (restarts, tol, mesh, output_format).",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log diagnostics to stderr."
    )

    if has_solver:
        parser.add_argument(
            "--restarts", type=positive_int, default=None, help="Optimizer restarts (default 32)."
        )
        parser.add_argument(
            "--seed", type=nonnegative_int, default=None, help="Random seed (default 0)."
        )
        parser.add_argument(
            "--tol", type=positive_float, default=None, help="Convergence tolerance (default 1e-10)."
        )
        parser.add_argument(
            "--mesh", type=positive_int, default=None, help="Brute-force mesh size (default 24)."
        )


def handle_invalid_arguments(args: argparse.Namespace):
    """
    Validates the existence of every input file named on the command line.

    Missing graph, spec and group files are left to the handlers, which report
    them as I/O errors; only the configuration file is checked here.

    Args:
        args: An argparse.Namespace object containing the parsed command-line arguments.

    Raises:
        argparse.ArgumentError: If the configuration file path is invalid.
    """
    if getattr(args, "config", None):
        _validate_path(args.config, "configuration file", must_be_file=True)

    emit_path = getattr(args, "emit_graph", None)
    if emit_path:
        directory = os.path.dirname(os.path.abspath(emit_path))
        _validate_path(directory, "output directory")
