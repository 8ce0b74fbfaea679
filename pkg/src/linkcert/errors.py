class LinkCertError(Exception):
    """Base class for every error raised by linkcert."""


class StructuralError(LinkCertError, ValueError):
    """Input data is malformed: undeclared vertices, self loops, inconsistent tables."""


class DomainError(LinkCertError, ValueError):
    """A mathematical precondition does not hold (bad q, disconnected graph, p out of range)."""
