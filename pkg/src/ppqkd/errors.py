"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """An exhaustive or matrix-level computation would exceed its size guard."""


class CertificationError(RuntimeError):
    """A numerical certificate (dual witness, dominance check) is infeasible."""


class NoRootError(RuntimeError):
    """A root finder could not establish a sign change in its bracket."""
