"""Structured error types shared by every module.

Each error carries a stable ``code`` plus an optional ``witness`` so the
command line layer can emit ``{code, message, witness}`` objects.
"""

from __future__ import annotations

from typing import Any


class TcdError(Exception):
    code = "TcdError"

    def __init__(self, message: str = "", witness: Any = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.witness = witness

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "witness": self.witness}


def _make(name: str, base: type = TcdError) -> type:
    return type(name, (base,), {"code": name})


# geometry
NotCollinear = _make("NotCollinear")
PointAtInfinity = _make("PointAtInfinity")
DegenerateDenominator = _make("DegenerateDenominator")
IncidenceViolated = _make("IncidenceViolated")
PointInCenter = _make("PointInCenter")
NonCoplanar = _make("NonCoplanar")
ExhaustedRetries = _make("ExhaustedRetries")

# combinatorics
MalformedEmbedding = _make("MalformedEmbedding")
InvalidGraph = _make("InvalidGraph")
NotMinimal = _make("NotMinimal")

# maps
CircuitViolated = _make("CircuitViolated")
NotTcdMap = _make("NotTcdMap")
NonGenericHyperplane = _make("NonGenericHyperplane")
ConstructionFailed = _make("ConstructionFailed")
RankDeficient = _make("RankDeficient")
NotAdmissible = _make("NotAdmissible")

# moves
InvalidMoveSite = _make("InvalidMoveSite")
IndeterminateMove = _make("IndeterminateMove")
MutationSingular = _make("MutationSingular", IndeterminateMove)
NodeLimitExceeded = _make("NodeLimitExceeded")
ConsistencyViolation = _make("ConsistencyViolation")

# cluster
NotMutable = _make("NotMutable")
UnsupportedDegree = _make("UnsupportedDegree")
NotPDB = _make("NotPDB")

# sections
NotOneGeneric = _make("NotOneGeneric")
SpanNotLine = _make("SpanNotLine")
MismatchFound = _make("MismatchFound")

# lattice
LevelMismatch = _make("LevelMismatch")
NotWeaklySeparated = _make("NotWeaklySeparated")
NotMaximal = _make("NotMaximal")
CollinearityViolation = _make("CollinearityViolation")
DskpViolation = _make("DskpViolation")

# io
DocumentError = _make("DocumentError")

__all__ = [name for name, obj in list(globals().items())
           if isinstance(obj, type) and issubclass(obj, TcdError)]
