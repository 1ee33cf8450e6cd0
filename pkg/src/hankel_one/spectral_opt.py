"""
Spectral-norm optimal rank-1 Hankel approximation of real symmetric
matrices.

With A = V diag(l) V^T ordered by modulus (l_0 > 0 after a possible sign
flip) and mu = V^T z_N(z), the error level x is reachable with generator z
exactly when the secular function

    f(z, x^2) = sum_j mu_j^2 / (l_j^2 - x^2) = z^T (A^2 - x^2 I)^{-1} z

is non-negative. The optimal error therefore lies in [|l_1|, l_0): either
|l_1| is attained by a common zero of the eigenvectors belonging to
|l_1|, or a bisection on x locates the smallest level whose maximal
secular value reaches zero.
"""
from __future__ import annotations
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT, SolverConfig, Tolerances
from .errors import (
    DegenerateZeroPolynomial,
    HypothesisMismatch,
    NoRank1Solution,
    PoleHit,
    RankZero,
)
from .hankel_core import (
    INF,
    ExtendedScalar,
    Rank1HankelParams,
    build_rank1,
    extract_params,
    structured_entries,
    structured_rows,
)
from .numerics import (
    DenseMatrix,
    SymmetricEigen,
    as_matrix,
    eig_symmetric,
    frobenius_norm,
    maximize_1d,
    real_roots,
    spectral_norm,
)
from .option import Option
from .result import Result


log = logging.getLogger(__name__)

# the reversed branch lives on the open interval (-1, 1)
_OPEN_MARGIN = 1e-12


class SpectralCase(str, Enum):
    ACHIEVED = 'achieved-lambda1'
    BISECTION = 'bisection'
    DEGENERATE_SAME_SIGN = 'degenerate-same-sign'
    DEGENERATE_OPPOSITE_SIGN = 'degenerate-opposite-sign'


@dataclass(frozen=True)
class SecularFunction:
    """
    f(z, x^2) of a symmetric eigendecomposition. Terms whose denominator
    vanishes are dropped when their weight vanishes too, and raise
    :class:`PoleHit` otherwise.
    """
    eig: SymmetricEigen
    tie: float = 1e-9
    pole: float = 1e-12


    def weights(self, z) -> np.ndarray:
        """mu = V^T z_N(z)"""
        return self.eig.eigenvectors.T @ structured_entries(z, len(self.eig))


    def __call__(self, z, lambda_sq: float) -> float:
        mu = self.weights(z)
        denominators = self.eig.eigenvalues ** 2 - lambda_sq
        scale = max(float(self.eig.eigenvalues[0]) ** 2, np.finfo(float).tiny)
        colliding = np.abs(denominators) <= self.tie * scale
        if np.any(mu[colliding] ** 2 > self.pole):
            raise PoleHit(f'x^2 = {lambda_sq!r} hits an eigenvalue with non-zero weight')
        keep = ~colliding
        return float(np.sum(mu[keep] ** 2 / denominators[keep]))


    def values(self, zs: np.ndarray, lambda_sq: float) -> np.ndarray:
        """f on an array of finite real points, no collisions allowed"""
        mu = structured_rows(np.asarray(zs, dtype=float), len(self.eig)) @ self.eig.eigenvectors
        return (mu ** 2) @ (1.0 / (self.eig.eigenvalues ** 2 - lambda_sq))


    def flipped_values(self, zs: np.ndarray, lambda_sq: float) -> np.ndarray:
        """f(1/z, x^2), evaluated through the reversed structured vector"""
        rows = structured_rows(np.asarray(zs, dtype=float), len(self.eig))[:, ::-1]
        mu = rows @ self.eig.eigenvectors
        return (mu ** 2) @ (1.0 / (self.eig.eigenvalues ** 2 - lambda_sq))


def secular_eval(eig: SymmetricEigen, z, lambda_sq: float, tol: float = 1e-12, tie: float = 1e-9) -> float:
    """f(z, lambda^2), dropping 0/0 terms

    Raises
    ------
    PoleHit
        if lambda^2 equals some l_j^2 whose weight mu_j^2 exceeds ``tol``
    """
    return SecularFunction(eig, tie=tie, pole=tol)(z, lambda_sq)


@dataclass(frozen=True)
class DiagPlusRank1:
    """
    D + sign * c * b b^T with D = diag(diagonal)
    """
    diagonal: np.ndarray
    b: np.ndarray
    c: float
    sign: int = 1


    def matrix(self) -> np.ndarray:
        d = np.asarray(self.diagonal, dtype=float)
        b = np.asarray(self.b, dtype=float)
        return np.diag(d) + self.sign * self.c * np.outer(b, b)


def diag_rank1_det(d: DiagPlusRank1) -> float:
    """det D + sign * c * sum_j b_j^2 prod_{k != j} d_k

    Examples
    --------
    >>> diag_rank1_det(DiagPlusRank1(np.ones(2), np.array([1.0, 0.0]), 1.0))
    2.0
    """
    diagonal = np.asarray(d.diagonal, dtype=float)
    b = np.asarray(d.b, dtype=float)
    cofactors = np.array([np.prod(np.delete(diagonal, j)) for j in range(diagonal.size)])
    return float(np.prod(diagonal) + d.sign * d.c * np.sum(b ** 2 * cofactors))


def psd_check(d: DiagPlusRank1, tol: float = 1e-12) -> bool:
    """Positive semidefiniteness of a diagonal plus or minus rank-1 matrix

    Two sign patterns are decided without an eigensolver:

    * exactly one negative diagonal entry, rank-1 term added: psd iff
      sum' b_j^2 / (-d_j) >= 1/c and b_j = 0 wherever d_j = 0;
    * non-negative diagonal with a positive entry, rank-1 term subtracted:
      psd iff sum' b_j^2 / d_j <= 1/c and b_j = 0 wherever d_j = 0.

    Raises
    ------
    HypothesisMismatch
        for c <= 0 or any other sign pattern
    """
    diagonal = np.asarray(d.diagonal, dtype=float)
    b = np.asarray(d.b, dtype=float)
    if not d.c > 0:
        raise HypothesisMismatch(f'rank-1 coefficient must be positive, got {d.c}')

    scale = max(float(np.max(np.abs(diagonal))), 1.0)
    zero = np.abs(diagonal) <= tol * scale
    negative = (diagonal < 0) & ~zero
    positive = (diagonal > 0) & ~zero
    b_scale = max(float(np.max(np.abs(b))), 1.0)

    if d.sign > 0 and np.count_nonzero(negative) == 1:
        if np.any(np.abs(b[zero]) > tol * b_scale):
            return False
        return bool(np.sum(b[~zero] ** 2 / -diagonal[~zero]) >= 1.0 / d.c)

    if d.sign < 0 and not np.any(negative) and np.any(positive):
        if np.any(np.abs(b[zero]) > tol * b_scale):
            return False
        return bool(np.sum(b[~zero] ** 2 / diagonal[~zero]) <= 1.0 / d.c)

    raise HypothesisMismatch('diagonal sign pattern fits neither semidefiniteness criterion')


@dataclass(frozen=True)
class SpectralSolution:
    """
    Attributes
    ----------
    lambda_tilde : float
        optimal spectral error level
    params : Rank1HankelParams or None
        None only for the opposite-sign degenerate diagnostic
    case : SpectralCase
    c_interval : Option
        Some((c_low, c_high)) when every c in the interval is optimal
    iterations : int
        bisection steps taken
    error_spectral, error_frobenius : float
        norms of A minus the materialized approximant
    error_spectrum : tuple of float
        eigenvalues of A minus the approximant, descending
    """
    lambda_tilde: float
    params: Optional[Rank1HankelParams]
    case: SpectralCase
    c_interval: Option = field(default_factory=lambda: Option(None))
    iterations: int = 0
    error_spectral: float = float('nan')
    error_frobenius: float = float('nan')
    error_spectrum: Tuple[float, ...] = ()


    def approximant(self) -> DenseMatrix:
        if self.params is None:
            raise NoRank1Solution('no rank-1 Hankel parameters for this case', self)
        return build_rank1(self.params)


def error_bounds(eig: SymmetricEigen) -> Tuple[float, float]:
    """(|l_1|, |l_0|): the optimal spectral error lies in between"""
    moduli = eig.moduli
    return (float(moduli[1]) if moduli.size > 1 else 0.0, float(moduli[0]))


def shifted_matrices(eig: SymmetricEigen, lambda_tilde: float, c: float, z) -> Tuple[DiagPlusRank1, DiagPlusRank1]:
    """The pair x I - (A - c z z^T) and x I + (A - c z z^T) in the eigenbasis

    Both are positive semidefinite exactly when the error level x is
    attained by (c, z).
    """
    mu = eig.eigenvectors.T @ structured_entries(z, len(eig))
    lam = eig.eigenvalues
    return (DiagPlusRank1(lambda_tilde - lam, mu, c, 1),
            DiagPlusRank1(lambda_tilde + lam, mu, c, -1))


def _tied_to_second(eig: SymmetricEigen, tie: float) -> list:
    moduli = eig.moduli
    return [j for j in range(1, moduli.size) if abs(moduli[j] - moduli[1]) <= tie * moduli[0]]


def case1_test(eig: SymmetricEigen, tol: Tolerances = Tolerances()) -> Option:
    """Whether the error level |l_1| is attainable

    Candidates are the common real zeros of the polynomials
    v_j(z) = sum_k v_j[k] z^k over all j with |l_j| = |l_1|, plus infinity
    when all their leading coefficients vanish. The first candidate with
    f(z, l_1^2) >= 0 wins.

    Returns
    -------
    Option
        Some((z, (c_low, c_high))) with every c in the closed interval
        attaining |l_1|, or None
    """
    lam = eig.eigenvalues
    V = eig.eigenvectors
    N = lam.size
    second = abs(float(lam[1]))
    tied = _tied_to_second(eig, tol.tie)
    joint = tol.extract

    try:
        roots = real_roots(V[:, tied[0]], trim=tol.structural).roots
    except DegenerateZeroPolynomial as e:
        log.debug('no finite candidates: %s', e)
        roots = ()

    candidates = []
    for r in roots:
        mu = V[:, tied].T @ structured_entries(r, N)
        if np.all(np.abs(mu) <= joint):
            candidates.append(ExtendedScalar(r))
    if np.all(np.abs(V[N - 1, tied]) <= joint):
        candidates.append(INF)

    others = np.array([j for j in range(N) if j not in tied])
    secular = SecularFunction(eig, tie=tol.tie, pole=tol.pole)
    for z in candidates:
        value = secular(z, second ** 2)
        log.debug('candidate z=%s: f(z, l_1^2) = %.6g', z, value)
        if value < 0:
            continue
        mu = secular.weights(z)[others]
        upper_sum = float(np.sum(mu ** 2 / (lam[others] - second)))
        lower_sum = float(np.sum(mu ** 2 / (lam[others] + second)))
        if upper_sum <= 0:
            continue
        c_high = 1.0 / lower_sum if lower_sum > 0 else float('inf')
        return Option((z, (1.0 / upper_sum, c_high)))
    return Option(None)


def _materialize(A: DenseMatrix, lambda_tilde: float, params: Rank1HankelParams, case: SpectralCase,
                 c_interval: Option = Option(None), iterations: int = 0) -> SpectralSolution:
    residual = A - build_rank1(params)
    spectrum = np.linalg.eigvalsh(0.5 * (residual + residual.T))[::-1]
    return SpectralSolution(
        lambda_tilde=float(lambda_tilde),
        params=params,
        case=case,
        c_interval=c_interval,
        iterations=iterations,
        error_spectral=spectral_norm(residual),
        error_frobenius=frobenius_norm(residual),
        error_spectrum=tuple(float(x) for x in spectrum),
    )


def degenerate_top(eig: SymmetricEigen, z_choice=0.0, A: Optional[DenseMatrix] = None,
                   tie: float = 1e-9) -> SpectralSolution:
    """Solution when the two largest eigenvalues share their modulus

    If every eigenvalue of largest modulus has the same sign, no rank-1
    Hankel matrix lowers the spectral error below |l_0| and each z works
    with c in (0, (sum_k mu_k^2 / (|l_0| + s l_k))^{-1}], s = sign(l_0).
    The largest such c is returned. With opposite signs the result is a
    parameterless diagnostic.
    """
    lam = eig.eigenvalues
    top_modulus = abs(float(lam[0]))
    top = [j for j in range(lam.size) if top_modulus - abs(lam[j]) <= tie * top_modulus]
    signs = {bool(lam[j] > 0) for j in top}
    if len(signs) > 1:
        log.debug('largest eigenvalues %s have opposite signs', lam[top])
        return SpectralSolution(top_modulus, None, SpectralCase.DEGENERATE_OPPOSITE_SIGN)

    s = 1.0 if lam[0] > 0 else -1.0
    z = ExtendedScalar.coerce(z_choice)
    mu = eig.eigenvectors.T @ structured_entries(z, lam.size)
    denominators = top_modulus + s * lam
    keep = np.abs(denominators) > 1e-12 * top_modulus
    c_high = 1.0 / float(np.sum(mu[keep] ** 2 / denominators[keep]))
    interval = (0.0, c_high) if s > 0 else (-c_high, 0.0)

    params = Rank1HankelParams(s * c_high, z, lam.size, lam.size)
    if A is None:
        A = eig.reconstruct()
    return _materialize(as_matrix(A), top_modulus, params, SpectralCase.DEGENERATE_SAME_SIGN, Option(interval))


def _level(secular: SecularFunction, x: float, grid: int, tol: float, pool) -> Tuple[float, ExtendedScalar]:
    """Largest secular value at level x and the generator attaining it"""
    lambda_sq = x * x
    inner = (lambda zs: secular.values(zs, lambda_sq), (-1.0, 1.0))
    outer = (lambda zs: secular.flipped_values(zs, lambda_sq), (-1.0 + _OPEN_MARGIN, 1.0 - _OPEN_MARGIN))
    if pool is not None:
        futures = [pool.submit(maximize_1d, f, interval, grid, tol, True) for f, interval in (inner, outer)]
        (z_in, w_in), (z_out, w_out) = (future.result() for future in futures)
    else:
        z_in, w_in = maximize_1d(inner[0], inner[1], grid, tol, vectorized=True)
        z_out, w_out = maximize_1d(outer[0], outer[1], grid, tol, vectorized=True)

    if w_in >= w_out:
        return w_in, ExtendedScalar(z_in)
    return w_out, ExtendedScalar(z_out).reciprocal()


def _bisect(A: DenseMatrix, eig: SymmetricEigen, eps: float, config: SolverConfig) -> SpectralSolution:
    tol = config.tolerances
    secular = SecularFunction(eig, tie=tol.tie, pole=tol.pole)
    lo, hi = error_bounds(eig)
    top = hi
    w_zero = tol.w_zero / top ** 2

    pool = ThreadPoolExecutor(max_workers=min(2, config.threads)) if config.threads > 0 else None
    try:
        x, iterations = 0.5 * (lo + hi), 0
        while iterations < config.max_bisection and hi - lo > eps:
            x = 0.5 * (lo + hi)
            iterations += 1
            W, _ = _level(secular, x, config.spectral_grid, tol.iterative, pool)
            log.debug('bisection step %d: x=%.15g W=%.3e', iterations, x, W)
            if abs(W) <= w_zero:
                break
            if W > 0:
                hi = x
            else:
                lo = x
        else:
            x = 0.5 * (lo + hi)
        _, z = _level(secular, x, config.spectral_grid, tol.iterative, pool)
    finally:
        if pool is not None:
            pool.shutdown()

    mu = secular.weights(z)
    inverse_c = float(np.sum(mu ** 2 / (eig.eigenvalues - x)))
    if not inverse_c > 0:
        log.warning('non-positive rank-1 coefficient at level %.15g', x)
    params = Rank1HankelParams(1.0 / inverse_c, z, len(eig), len(eig))
    return _materialize(A, x, params, SpectralCase.BISECTION, iterations=iterations)


def _exact_rank1(A: DenseMatrix, eig: SymmetricEigen, tol: Tolerances) -> Option:
    if len(eig) > 1 and eig.moduli[1] > tol.tie * eig.moduli[0]:
        return Option(None)
    params = Result.into(lambda: extract_params(A, tol.extract)).ok()
    return params.map(lambda p: _materialize(
        A, eig.moduli[1] if len(eig) > 1 else 0.0, p, SpectralCase.ACHIEVED, Option((p.c, p.c))))


def _solve_dominant_positive(A: DenseMatrix, eig: SymmetricEigen, eps: float, z_choice,
                             config: SolverConfig) -> SpectralSolution:
    tol = config.tolerances
    moduli = eig.moduli
    if moduli[0] - moduli[1] <= tol.tie * moduli[0]:
        solution = degenerate_top(eig, z_choice, A, tol.tie)
        if solution.case is SpectralCase.DEGENERATE_OPPOSITE_SIGN:
            raise NoRank1Solution('largest eigenvalues have equal modulus and opposite signs', solution)
        return solution

    exact = _exact_rank1(A, eig, tol)
    if exact.is_some():
        return exact.unwrap()

    attained = case1_test(eig, tol)
    if attained.is_some():
        z, (c_low, c_high) = attained.unwrap()
        params = Rank1HankelParams(c_low, z, len(eig), len(eig))
        return _materialize(A, moduli[1], params, SpectralCase.ACHIEVED, Option((c_low, c_high)))

    return _bisect(A, eig, eps, config)


def _negate(solution: SpectralSolution, A: DenseMatrix) -> SpectralSolution:
    if solution.params is None:
        return solution
    p = solution.params
    params = Rank1HankelParams(-p.c, p.z, p.rows, p.cols)
    interval = solution.c_interval.map(lambda bounds: (-bounds[1], -bounds[0]))
    return _materialize(A, solution.lambda_tilde, params, solution.case, interval, solution.iterations)


def solve_spectral(A: DenseMatrix, eps: Optional[float] = None, config: SolverConfig = DEFAULT,
                   z_choice=0.0) -> SpectralSolution:
    """Best rank-1 Hankel approximation of a real symmetric matrix in the
    spectral norm

    Parameters
    ----------
    A : DenseMatrix
        real symmetric matrix
    eps : float, optional
        bisection width at which the error level is accepted,
        ``config.eps`` when omitted
    config : SolverConfig
    z_choice : ExtendedScalar or number
        generator returned when the two largest eigenvalues tie with the
        same sign and every generator is optimal

    Returns
    -------
    SpectralSolution

    Raises
    ------
    NonSymmetric
    RankZero
        for the zero matrix
    NoRank1Solution
        when the two largest eigenvalues tie with opposite signs; the
        exception carries the diagnostic solution

    Examples
    --------
    >>> A = [[1, 0, 0.5], [0, 0.5, 0], [0.5, 0, 1]]
    >>> round(solve_spectral(A).lambda_tilde ** 2, 9)
    0.916666667
    """
    eps = config.eps if eps is None else eps
    A = as_matrix(A)
    eig = eig_symmetric(A, config.tolerances.structural, config.tolerances.tie)
    if not np.any(A):
        raise RankZero('the zero matrix has no rank-1 Hankel approximation')
    if len(eig) == 1:
        params = Rank1HankelParams(float(A[0, 0]), ExtendedScalar(0.0), 1, 1)
        return _materialize(A, 0.0, params, SpectralCase.ACHIEVED, Option((params.c, params.c)))

    if eig.eigenvalues[0] < 0:
        log.debug('dominant eigenvalue is negative, solving for -A')
        solution = _solve_dominant_positive(-A, eig.negated(), eps, z_choice, config)
        return _negate(solution, A)

    return _solve_dominant_positive(A, eig, eps, z_choice, config)
