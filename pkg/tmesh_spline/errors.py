"""Exception hierarchy for mesh construction, spline algebra and file input."""

from typing import Any, Optional


class TMeshError(Exception):
    """Base class for every error raised by the toolkit.

    ``details`` carries structured context for reports.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "details": self.details}


# Mesh construction

class NotRegularError(TMeshError):
    """Boundary grid lines do not form a rectangle, or the cells do not tile it."""


class DanglingSegmentError(TMeshError):
    """A segment end point meets neither a perpendicular segment nor the boundary."""


class OverlapError(TMeshError):
    """Two colinear segments cover a common piece of positive length."""


# Hierarchical refinement

class DegenerateRegionError(TMeshError):
    """A region or degree pair cannot be partitioned into (m, n)-subdomains."""


class AlreadySubdividedError(TMeshError):
    pass


class StaleAddressError(TMeshError):
    """The addressed subdomain does not exist or its cells are no longer cells of the mesh."""


# Spline algebra

class NotConformalError(TMeshError):
    """A conformality vector fails an l-edge moment equation."""


class NotInteriorError(TMeshError):
    pass


class DegenerateKnotsError(TMeshError):
    pass


class NegativeResultError(TMeshError):
    """The closed-form dimension came out negative."""


class NotInClassError(TMeshError):
    """The mesh was not produced by hierarchical generation."""


# Basis construction

class NoParentSubdomainError(TMeshError):
    pass


class UnlabeledEdgeError(TMeshError):
    pass


class UnhandledConfigurationError(TMeshError):
    """No construction applies to a knot window."""


# File input

class MeshSyntaxError(TMeshError):
    """Malformed mesh or vector document, with the position of the offending text."""

    def __init__(self, message: str, line: int = 0, column: int = 0, details: Optional[dict[str, Any]] = None):
        super().__init__(f"{message} (line {line}, column {column})", details)
        self.line = line
        self.column = column
        self.details.update({"line": line, "column": column})


class MeshSemanticError(TMeshError):
    """Well-formed document describing an invalid mesh or refinement script."""


__all__ = [
    "TMeshError",
    "NotRegularError",
    "DanglingSegmentError",
    "OverlapError",
    "DegenerateRegionError",
    "AlreadySubdividedError",
    "StaleAddressError",
    "NotConformalError",
    "NotInteriorError",
    "DegenerateKnotsError",
    "NegativeResultError",
    "NotInClassError",
    "NoParentSubdomainError",
    "UnlabeledEdgeError",
    "UnhandledConfigurationError",
    "MeshSyntaxError",
    "MeshSemanticError",
]
