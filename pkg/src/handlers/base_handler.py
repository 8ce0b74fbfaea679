import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from linkcert.graph import GeneratingSetSpec, WeightedGraph
from linkcert.graph_io import (
    GraphDocument,
    GroupDocument,
    load_graph_document,
    load_group_document,
    save_graph,
)
from utils.config import RunConfig, build_run_config
from utils.report import render

logger = logging.getLogger(__name__)


class BaseHandler:
    """
    Base class for command handlers.

    Resolves the effective RunConfig, loads input documents and writes the
    rendered report to stdout.
    """

    input_attributes: tuple = ()

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: List[str] = [
            getattr(args, name) for name in self.input_attributes if getattr(args, name, None)
        ]
        self.config: RunConfig = build_run_config(args, self.inputs)

    # ------------------------------ Input files ----------------------------- #
    def _load_document(self, path: str) -> GraphDocument:
        """
        Reads a graph document, logging the OS error before re-raising it.

        Raises:
            OSError: If the file cannot be read.
            StructuralError: If the document is malformed.
        """
        try:
            return load_graph_document(path)
        except FileNotFoundError:
            logger.error("File '%s' not found.", path)
            raise
        except PermissionError:
            logger.error("Permission denied for '%s'.", path)
            raise

    def _load_graph(self, path: str) -> WeightedGraph:
        return self._load_document(path).to_graph()

    def _load_spec(self, path: str) -> GeneratingSetSpec:
        return self._load_document(path).to_spec()

    def _load_group(self, path: str) -> GroupDocument:
        return load_group_document(path)

    # ------------------------------ Output ------------------------------ #
    def _emit_graph(
        self, path: Optional[str], graph: WeightedGraph, spec: Optional[GeneratingSetSpec] = None
    ) -> None:
        if not path:
            return
        save_graph(path, graph, spec)
        print(f"Wrote graph: {path}", file=sys.stderr)

    def emit(self, result: Dict[str, Any]) -> None:
        sys.stdout.write(render(self.config, result))

    def handle(self) -> None:
        """Main method to run the command. Must be implemented by subclasses."""
        raise NotImplementedError("Subclasses must implement the 'handle' method.")
