"""
Exception hierarchy. Every error raised by the solvers derives from
:class:`HankelError` and exposes a short ``kind`` tag, which the command
line front end writes into report error blocks.
"""
from __future__ import annotations
from typing import Any


class HankelError(Exception):
    kind = 'HankelError'


class InvalidMatrix(HankelError, ValueError):
    """Empty, ragged, non two-dimensional or non-finite input"""
    kind = 'InvalidMatrix'


class NonSymmetric(HankelError, ValueError):
    kind = 'NonSymmetric'


AsymmetricInput = NonSymmetric


class ZeroMatrix(HankelError, ValueError):
    kind = 'ZeroMatrix'


class RankZero(HankelError, ValueError):
    """The input has zero Frobenius norm, so no rank-1 target exists"""
    kind = 'RankZero'


class DegenerateZeroPolynomial(HankelError, ValueError):
    kind = 'DegenerateZeroPolynomial'


class NotRank1(HankelError, ValueError):
    kind = 'NotRank1'


class NotHankel(HankelError, ValueError):
    kind = 'NotHankel'


class PoleHit(HankelError, ArithmeticError):
    """A secular term has a vanishing denominator and a non-vanishing weight"""
    kind = 'PoleHit'


class HypothesisMismatch(HankelError, ValueError):
    kind = 'HypothesisMismatch'


class NoRank1Solution(HankelError):
    """
    Raised when the two largest eigenvalues have equal modulus and
    opposite sign. ``diagnostic`` holds the SpectralSolution describing
    the situation.
    """
    kind = 'NoRank1Solution'


    def __init__(self, message: str, diagnostic: Any = None):
        super().__init__(message)
        self.diagnostic = diagnostic


class ParseError(HankelError, ValueError):
    """Malformed matrix text; ``line`` is 1-based when known"""
    kind = 'ParseError'


    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
        self.line = line
