"""Exception types shared by every gcx module.

Every error carries a short ``kind`` string (the class name) plus optional
structured ``details`` so the command line layer can serialise it.
"""

from __future__ import annotations


class GcxError(Exception):
    """Base class. ``verdict`` errors are mathematical negatives, not bad input."""

    verdict = True

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__class__.__name__)
        self.details = details

    @property
    def kind(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": str(self)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


def _jsonable(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


class InputError(GcxError):
    verdict = False


class ChartMismatch(InputError):
    pass


class UnknownCoordinate(InputError):
    pass


class DegreeError(InputError):
    pass


class ParseError(InputError):
    """Syntax error with 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)
        self.line = line
        self.column = column


class ManifestError(InputError):
    pass


class InvalidInput(InputError):
    pass


class DivisionByZeroDenominator(GcxError):
    pass


class ZeroDivisor(GcxError):
    pass


class NotDivisible(GcxError):
    pass


class NotClosed(GcxError):
    pass


class NotVanishingOnBase(GcxError):
    pass


class ZeroWeightComponent(GcxError):
    pass


class ZeroSpinorAtPoint(GcxError):
    pass


class InvalidJ(GcxError):
    pass


class NotAComplexStructure(GcxError):
    pass


class DegeneratePair(GcxError):
    pass


class RankDrop(GcxError):
    pass


class NotJacobi(GcxError):
    pass


class NotPoissonSubmanifold(GcxError):
    pass


class NotDegenerate(GcxError):
    pass


class IdentityFails(GcxError):
    pass


class IndexOutOfRange(InputError):
    pass


class NotDegenerateInput(GcxError):
    pass


class ZeroZ(GcxError):
    pass


class SampleOnZeroZ(GcxError):
    pass


class SampleInsideBall(GcxError):
    pass
