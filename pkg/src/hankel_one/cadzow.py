"""
Cadzow's alternating projection for rank-1 Hankel approximation.

Starting from the truncated SVD of the input, the iteration alternates
anti-diagonal averaging and rank-1 truncation. The leading singular values
never increase; the iterates either settle on a rank-1 Hankel matrix or
collapse to zero.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT, SolverConfig
from .errors import RankZero
from .hankel_core import build_rank1, extract_params, hankel_project
from .numerics import DenseMatrix, as_matrix, frobenius_norm, spectral_norm, svd
from .option import Option
from .result import Result


log = logging.getLogger(__name__)


class CadzowTerminal(str, Enum):
    ZERO_LIMIT = 'ZeroLimit'
    FIXED_POINT = 'Rank1HankelFixedPoint'
    MAX_ITERATIONS = 'MaxIterations'


@dataclass(frozen=True)
class CadzowTrace:
    """
    Attributes
    ----------
    sigmas : tuple of float
        leading singular value of the input, then of every averaged iterate
    iterate_deltas : tuple of float
        Frobenius distance between consecutive rank-1 iterates
    terminal : CadzowTerminal
    final : DenseMatrix
        last rank-1 iterate
    final_params : Option
        Some(Rank1HankelParams) when the limit is a rank-1 Hankel matrix
    error_spectral, error_frobenius : float
        norms of the input minus the approximant; the approximant is the
        materialized final parameters when they exist, zero on a zero
        limit, otherwise ``final``
    """
    sigmas: Tuple[float, ...]
    iterate_deltas: Tuple[float, ...]
    terminal: CadzowTerminal
    final: DenseMatrix
    final_params: Option = field(default_factory=lambda: Option(None))
    error_spectral: float = float('nan')
    error_frobenius: float = float('nan')


    @property
    def iterations(self) -> int:
        return len(self.iterate_deltas)


    @property
    def ratios(self) -> Tuple[float, ...]:
        """sigma_{j+1} / sigma_j for every step with sigma_j > 0"""
        s = self.sigmas
        return tuple(s[j + 1] / s[j] for j in range(len(s) - 1) if s[j] > 0)


    def approximant(self) -> DenseMatrix:
        if self.terminal is CadzowTerminal.ZERO_LIMIT:
            return np.zeros_like(self.final)
        return self.final_params.map(build_rank1).unwrap_or(self.final)


def fixed_point_residual(A_limit: DenseMatrix) -> float:
    """||P(A) - A||_F / max(1, ||A||_F)

    Examples
    --------
    >>> fixed_point_residual([[1.0, 2.0], [2.0, 4.0]])
    0.0
    """
    A_limit = as_matrix(A_limit)
    scale = max(1.0, frobenius_norm(A_limit))
    return frobenius_norm(hankel_project(A_limit) - A_limit) / scale


def near_hankel_constant(M: int, N: int) -> float:
    """
    Constant C with min ||u v^* - c z_M z_N^T||_F <= C * delta for every
    rank-1 u v^* lying within delta (entrywise) of its Hankel projection.

    >>> near_hankel_constant(2, 2)
    112320.0
    """
    return float(12 * M ** 2 * (N + 1) ** 2 * (M + N + 4 * (M * N) ** 3))


def _finish(A: DenseMatrix, sigmas, deltas, terminal: CadzowTerminal, final: DenseMatrix,
            extract_tol: float) -> CadzowTrace:
    params = Option(None)
    approximant = final
    if terminal is CadzowTerminal.ZERO_LIMIT:
        approximant = np.zeros_like(final)
    elif terminal is CadzowTerminal.FIXED_POINT:
        attempt = Result.into(lambda: extract_params(final, extract_tol))
        if attempt.is_err():
            log.warning('fixed point reached but parameters not recoverable: %s', attempt.unwrap_err())
        params = attempt.ok()
        approximant = params.map(build_rank1).unwrap_or(final)
    residual = A - approximant
    return CadzowTrace(
        sigmas=tuple(sigmas),
        iterate_deltas=tuple(deltas),
        terminal=terminal,
        final=final,
        final_params=params,
        error_spectral=spectral_norm(residual),
        error_frobenius=frobenius_norm(residual),
    )


def cadzow_iterate(A: DenseMatrix, tol: Optional[float] = None, tol_zero: Optional[float] = None,
                   max_iter: Optional[int] = None, config: SolverConfig = DEFAULT,
                   extract_tol: Optional[float] = None) -> CadzowTrace:
    """Runs the Cadzow iteration until it settles, collapses or runs out of steps

    Parameters
    ----------
    A : DenseMatrix
    tol : float, optional
        fixed point once the step between rank-1 iterates is at most
        ``tol * sigma_j``; ``config.cadzow_tol`` when omitted
    tol_zero : float, optional
        zero limit once ``sigma_j <= tol_zero * ||A||_F``;
        ``config.cadzow_tol_zero`` when omitted. A run whose sigma_j has
        fallen to ``config.cadzow_collapse * sigma_0`` is a zero limit as
        well, since rounding can leave a tiny Hankel remainder that never
        shrinks.
    max_iter : int, optional
        ``config.max_iter`` when omitted
    extract_tol : float, optional
        tolerance for reading (c, z) off the limit, defaults to the larger
        of ``config.tolerances.extract`` and ``100 * tol``

    Raises
    ------
    RankZero
        for the zero matrix

    Examples
    --------
    >>> trace = cadzow_iterate([[1, 0, 0.5], [0, 0.5, 0], [0.5, 0, 1]])
    >>> trace.terminal.value
    'ZeroLimit'
    >>> [round(s, 6) for s in trace.sigmas[:3]]
    [1.5, 1.25, 1.041667]
    """
    tol = config.cadzow_tol if tol is None else tol
    tol_zero = config.cadzow_tol_zero if tol_zero is None else tol_zero
    collapse = config.cadzow_collapse
    max_iter = config.max_iter if max_iter is None else max_iter
    if extract_tol is None:
        extract_tol = max(config.tolerances.extract, 100 * tol)

    A = as_matrix(A)
    norm = frobenius_norm(A)
    if norm == 0:
        raise RankZero('the zero matrix has no rank-1 approximation')

    dec = svd(A)
    current = dec.rank1(0)
    sigmas, deltas = [float(dec.s[0])], []
    floor = max(tol_zero * norm, collapse * sigmas[0])
    if fixed_point_residual(current) <= tol:
        log.debug('input truncation is already Hankel')
        return _finish(A, sigmas, deltas, CadzowTerminal.FIXED_POINT, current, extract_tol)

    terminal = CadzowTerminal.MAX_ITERATIONS
    for _ in range(max_iter):
        averaged = hankel_project(current)
        if not np.any(averaged):
            sigmas.append(0.0)
            deltas.append(frobenius_norm(current))
            current = np.zeros_like(current)
            terminal = CadzowTerminal.ZERO_LIMIT
            break
        dec = svd(averaged)
        following = dec.rank1(0)
        sigma = float(dec.s[0])
        sigmas.append(sigma)
        deltas.append(frobenius_norm(following - current))
        current = following

        if sigma <= floor:
            terminal = CadzowTerminal.ZERO_LIMIT
            break
        if deltas[-1] <= tol * sigma:
            terminal = CadzowTerminal.FIXED_POINT
            break

    if terminal is CadzowTerminal.MAX_ITERATIONS:
        log.warning('Cadzow stopped after %d iterations without settling', max_iter)
    else:
        log.debug('Cadzow terminated (%s) after %d iterations', terminal.value, len(deltas))
    return _finish(A, sigmas, deltas, terminal, current, extract_tol)
