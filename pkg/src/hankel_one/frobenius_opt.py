"""
Frobenius-norm optimal rank-1 Hankel approximation.

For fixed z the best c is G(z) = z_M^* A conj(z_N), and the residual is
``||A||_F^2 - |G(z)|^2``, so the whole problem reduces to maximizing the
rational function |G| over the extended complex plane (or the extended
real line). G only depends on the anti-diagonal sums h of A:

    G(z) = sum_l h_l conj(z)^l / (||(1, z, ..., z^{M-1})|| ||(1, z, ..., z^{N-1})||)

and |G| on the outside of the unit disc equals |G| of J_M A J_N on the
inside, so both searches stay on the closed unit disc.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple

import numpy as np
import numpy.polynomial.polynomial as P
from scipy.optimize import minimize, newton

from .config import DEFAULT, SolverConfig
from .errors import DegenerateZeroPolynomial, InvalidMatrix, RankZero
from .hankel_core import (
    INF,
    AntiDiagonalSums,
    ExtendedScalar,
    Rank1HankelParams,
    antidiagonal_sums,
    build_rank1,
    reverse_rows_cols,
    structured_entries,
    toeplitz_flip,
)
from .numerics import (
    DenseMatrix,
    as_matrix,
    frobenius_norm,
    is_real,
    real_roots,
    spectral_norm,
    svd,
)
from .option import Option


log = logging.getLogger(__name__)


def _norms(w: np.ndarray, K: int) -> np.ndarray:
    r = np.abs(w) ** 2
    return np.sqrt(np.sum(r[:, None] ** np.arange(K), axis=1))


@dataclass(frozen=True)
class FrobeniusObjective:
    """
    G(z) = z_M^* A conj(z_N) of an M x N matrix, evaluated from its
    anti-diagonal sums. Calling the objective on an extended scalar gives
    G(z), with G(infinity) = a_{M-1,N-1}.
    """
    sums: AntiDiagonalSums
    rows: int
    cols: int


    @classmethod
    def from_matrix(cls, A: DenseMatrix) -> FrobeniusObjective:
        A = as_matrix(A)
        return cls(antidiagonal_sums(A), *A.shape)


    @property
    def h(self) -> np.ndarray:
        return self.sums.values


    def reversed(self) -> FrobeniusObjective:
        """Objective of J_M A J_N, whose anti-diagonal sums run backwards"""
        return FrobeniusObjective(
            AntiDiagonalSums(self.sums.values[::-1], self.sums.counts[::-1]),
            self.rows, self.cols)


    def values(self, zs) -> np.ndarray:
        """G on an array of finite points

        Points outside the unit disc are evaluated through w = 1/z with
        the unimodular factor (conj(z)/|z|)^{M+N-2} split off.
        """
        zs = np.atleast_1d(np.asarray(zs))
        h = self.h
        degree = h.shape[0] - 1
        big = np.abs(zs) > 1
        safe = np.where(big, zs, 1)
        w = np.where(big, 1 / safe, zs)

        numerator = np.where(big, P.polyval(np.conj(w), h[::-1]), P.polyval(np.conj(w), h))
        if np.any(big):
            phase = np.where(big, np.conj(safe) / np.abs(safe), 1) ** degree
            numerator = numerator * phase
        return numerator / (_norms(w, self.rows) * _norms(w, self.cols))


    def __call__(self, z) -> complex:
        z = ExtendedScalar.coerce(z)
        if z.is_infinite:
            return self.h[-1]
        return self.values(np.array([z.value]))[0]


def objective(A: DenseMatrix, z) -> complex:
    """G(z) = z_M^* A conj(z_N)

    Examples
    --------
    >>> complex(objective(np.eye(2), 1.0))
    (1+0j)
    """
    A = as_matrix(A)
    _require_dims(A)
    return FrobeniusObjective.from_matrix(A)(z)


def _require_dims(A: DenseMatrix):
    if min(A.shape) < 2:
        raise InvalidMatrix(f'both dimensions must be at least 2, got {A.shape}')


def _even_powers(K: int) -> np.ndarray:
    c = np.zeros(2 * K - 1)
    c[::2] = 1.0
    return c


def critical_polynomial(h: Sequence[float], M: int, N: int) -> np.ndarray:
    """R = 2 a' q - a q' whose real roots are the finite critical points

    a(z) = sum h_l z^l and q(z) = (sum_{k<M} z^{2k}) (sum_{k<N} z^{2k}),
    the square of the normalizer product on the real line.
    """
    a = np.asarray(h, dtype=float)
    q = P.polymul(_even_powers(M), _even_powers(N))
    return P.polysub(2 * P.polymul(P.polyder(a), q), P.polymul(a, P.polyder(q)))


def sign_hint(h: np.ndarray) -> Tuple[float, float]:
    """Half of [-1, 1] that contains a real maximizer, judged from the signs of h

    The search still covers all of [-1, 1]; the hint only decides which of
    several equal maximizers becomes the primary one.

    Non-negative sums with h_0 >= h_last admit a maximizer z >= 0; sums
    that are non-negative at even and non-positive at odd positions admit
    one with z <= 0.
    """
    h = np.real(h)
    if np.all(h >= 0) and h[0] >= h[-1]:
        return (0.0, 1.0)
    if np.all(h[0::2] >= 0) and np.all(h[1::2] <= 0):
        return (-1.0, 0.0)
    return (-1.0, 1.0)


def _roots_or_empty(R: np.ndarray, interval) -> Tuple[float, ...]:
    try:
        return real_roots(R, interval, trim=1e-14).roots
    except DegenerateZeroPolynomial:
        return ()


def real_candidates(obj: FrobeniusObjective) -> List[ExtendedScalar]:
    """Critical points of |G| on the extended real line, plus 0 and infinity

    Roots of R inside [-1, 1] cover |z| <= 1; roots of the reversed
    problem there cover |z| >= 1 after inversion.
    """
    h = np.real(obj.h)
    interval = (-1.0, 1.0)
    inner = _roots_or_empty(critical_polynomial(h, obj.rows, obj.cols), interval)
    outer = _roots_or_empty(critical_polynomial(h[::-1], obj.rows, obj.cols), interval)

    # interval ends stand in for the critical points when R vanishes identically
    candidates = [ExtendedScalar(0.0), INF, ExtendedScalar(interval[0]), ExtendedScalar(interval[1])]
    candidates.extend(ExtendedScalar(r) for r in inner)
    candidates.extend(ExtendedScalar(r).reciprocal() for r in outer)
    log.debug('real search: interval %s, %d inner and %d outer critical points',
              interval, len(inner), len(outer))
    return candidates


@dataclass(frozen=True)
class FrobeniusSolution:
    """
    Attributes
    ----------
    params : Rank1HankelParams
        primary optimal parameters
    objective_value : float
        |G(z)|
    error_frobenius, error_spectral : float
        norms of A minus the materialized approximant
    mode : str
        'real' or 'complex'
    svd_coincident : bool
        whether the unstructured optimum is already this Hankel matrix
    ties : tuple of Rank1HankelParams
        every maximizer within tolerance, the primary one first
    structure : str
        'hankel', or 'toeplitz' when solved through the column flip
    """
    params: Rank1HankelParams
    objective_value: float
    error_frobenius: float
    error_spectral: float
    mode: str
    svd_coincident: bool = False
    ties: Tuple[Rank1HankelParams, ...] = field(default_factory=tuple)
    structure: str = 'hankel'


    def approximant(self) -> DenseMatrix:
        if self.structure == 'toeplitz':
            return self.params.as_toeplitz()
        return build_rank1(self.params)


def _tie_key(z: ExtendedScalar):
    if z.is_infinite:
        return (float('inf'), 0.0)
    return (round(z.modulus, 9), float(np.angle(z.value)))


def _dedupe(candidates: List[ExtendedScalar], tol: float = 1e-6) -> List[ExtendedScalar]:
    kept = []
    for z in candidates:
        if any(_close(z, k, tol) for k in kept):
            continue
        kept.append(z)
    return kept


def _close(z: ExtendedScalar, other: ExtendedScalar, tol: float) -> bool:
    if z.is_infinite or other.is_infinite:
        return z.is_infinite and other.is_infinite
    return abs(z.value - other.value) <= tol * max(1.0, abs(z.value))


def _order(winners: List[ExtendedScalar], prefer: Tuple[float, float]) -> List[ExtendedScalar]:
    """Primary first: real maximizers on the preferred side of 0 lead"""
    def key(z):
        outside = False
        if not z.is_infinite and z.is_real:
            x = float(np.real(z.value))
            outside = (x < 0 and prefer[0] >= 0) or (x > 0 and prefer[1] <= 0)
        return (outside,) + _tie_key(z)

    return sorted(winners, key=key)


def _select(obj: FrobeniusObjective, candidates: List[ExtendedScalar], tie: float,
            prefer: Tuple[float, float] = (-1.0, 1.0)) -> List[ExtendedScalar]:
    """Maximizers of |G| among the candidates, in primary-first order"""
    candidates = _dedupe(candidates)
    moduli = np.array([abs(obj(z)) for z in candidates])
    best = moduli.max()
    winners = [z for z, m in zip(candidates, moduli) if m >= best - tie * max(best, 1.0)]
    return _order(winners, prefer)


def _prepare(A: DenseMatrix) -> Tuple[DenseMatrix, bool]:
    A = as_matrix(A)
    _require_dims(A)
    if not np.any(A):
        raise RankZero('the zero matrix has no rank-1 Hankel approximation')
    flipped = abs(A[0, 0]) < abs(A[-1, -1])
    return A, flipped


def _finish(A: DenseMatrix, winners: List[ExtendedScalar], flipped: bool, mode: str,
            config: SolverConfig, prefer: Tuple[float, float] = (-1.0, 1.0)) -> FrobeniusSolution:
    if flipped:
        winners = _order([z.reciprocal() for z in winners], prefer)

    obj = FrobeniusObjective.from_matrix(A)
    M, N = A.shape
    real_input = is_real(A)

    def params_for(z):
        c = obj(z)
        c = float(np.real(c)) if real_input and z.is_real else complex(c)
        return Rank1HankelParams(c, z, M, N)

    ties = tuple(params_for(z) for z in winners)
    primary = ties[0]
    residual = A - build_rank1(primary)
    solution = FrobeniusSolution(
        params=primary,
        objective_value=float(abs(primary.c)),
        error_frobenius=frobenius_norm(residual),
        error_spectral=spectral_norm(residual),
        mode=mode,
        ties=ties,
    )
    coincident = svd_coincidence_certificate(A, solution, config.tolerances.extract)
    log.debug('%s search: z=%s c=%s error_F=%.6g (%d maximizers)',
              mode, primary.z, primary.c, solution.error_frobenius, len(ties))
    return replace(solution, svd_coincident=coincident)


def solve_real(A: DenseMatrix, config: SolverConfig = DEFAULT) -> FrobeniusSolution:
    """Best rank-1 Hankel approximation with real parameters c, z

    Parameters
    ----------
    A : DenseMatrix
        real matrix, both dimensions at least 2
    config : SolverConfig

    Returns
    -------
    FrobeniusSolution

    Raises
    ------
    RankZero
        for the zero matrix
    InvalidMatrix
        for complex input or a dimension below 2

    Examples
    --------
    >>> A = [[1, -0.5, -1], [-0.5, -1, -0.5], [-1, -0.5, 1]]
    >>> round(solve_real(A).error_frobenius, 6)
    2.20657
    """
    A, flipped = _prepare(A)
    if not is_real(A):
        raise InvalidMatrix('solve_real needs a real matrix, use solve_complex')
    A = np.real(A)
    work = reverse_rows_cols(A) if flipped else A

    obj = FrobeniusObjective.from_matrix(work)
    prefer = sign_hint(obj.h)
    winners = _select(obj, real_candidates(obj), config.tolerances.tie, prefer)
    return _finish(A, winners, flipped, 'real', config, prefer)


def _polar_grid(radii: int, angles: int) -> Tuple[np.ndarray, np.ndarray]:
    r = np.linspace(0.0, 1.0, radii)
    theta = 2 * np.pi * np.arange(angles) / angles
    points = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    return points, np.repeat(r, angles)


def _ascend(obj: FrobeniusObjective, z0: complex, scale: float, tol: float) -> complex:
    def negated(x):
        return -abs(obj.values(np.array([x[0] + 1j * x[1]]))[0]) ** 2 / scale

    res = minimize(negated, np.array([z0.real, z0.imag]), method='BFGS',
                   options={'gtol': tol, 'maxiter': 500})
    return complex(res.x[0], res.x[1])


def solve_complex(A: DenseMatrix, config: SolverConfig = DEFAULT) -> FrobeniusSolution:
    """Best rank-1 Hankel approximation with complex parameters

    |G| is scanned on a polar grid of the closed unit disc, and so is the
    reversed objective on the open disc. The best grid points seed a
    BFGS ascent on (Re z, Im z); the winner of the reversed branch maps
    back through z -> 1/z. For real input the real critical points join
    the candidates.

    Raises
    ------
    RankZero
    InvalidMatrix

    Examples
    --------
    >>> sol = solve_complex([[1, -0.5, -1], [-0.5, -1, -0.5], [-1, -0.5, 1]])
    >>> round(abs(sol.params.c), 6)
    1.75
    """
    A, flipped = _prepare(A)
    work = reverse_rows_cols(A) if flipped else A
    obj = FrobeniusObjective.from_matrix(work)
    branches = (obj, obj.reversed())

    points, radii = _polar_grid(config.grid_radii, config.grid_angles)
    inside = np.abs(branches[0].values(points))
    outside = np.abs(branches[1].values(points))
    outside[radii >= 1.0] = -np.inf
    scores = np.concatenate([inside, outside])
    starts = np.argsort(-scores, kind='stable')[:config.ascent_starts]

    candidates = real_candidates(obj) if is_real(work) else [ExtendedScalar(0.0), INF]
    scale = max(frobenius_norm(work) ** 2, np.finfo(float).tiny)
    for index in starts:
        branch, point = divmod(int(index), points.size)
        z = _ascend(branches[branch], points[point], scale, config.tolerances.iterative)
        if np.isnan(z.real) or np.isnan(z.imag):
            continue
        candidate = ExtendedScalar.coerce(z)
        candidates.append(candidate.reciprocal() if branch else candidate)

    winners = _select(obj, candidates, config.tolerances.tie)
    return _finish(A, winners, flipped, 'complex', config)


def solve_toeplitz(A: DenseMatrix, mode: str = 'real', config: SolverConfig = DEFAULT) -> FrobeniusSolution:
    """Best rank-1 Toeplitz approximation c z_M z_N^T J_N

    Solves the Hankel problem for A J_N; the flip is an isometry, so the
    errors carry over unchanged.
    """
    solver = {'real': solve_real, 'complex': solve_complex}[mode]
    A = as_matrix(A)
    hankel = solver(toeplitz_flip(A), config)
    solution = replace(hankel, structure='toeplitz')
    residual = A - solution.approximant()
    return replace(solution,
                    error_frobenius=frobenius_norm(residual),
                    error_spectral=spectral_norm(residual))


def svd_coincidence_certificate(A: DenseMatrix, sol: FrobeniusSolution, tol: float = 1e-8) -> bool:
    """Whether the optimal rank-1 Hankel matrix is also the truncated SVD

    Two checks: the top singular pair equals (z_M, conj(z_N)) up to phase,
    and error_F^2 = ||A||_F^2 - sigma_0^2. A disagreement between them is
    logged and reported as False.
    """
    A = as_matrix(A)
    M, N = A.shape
    dec = svd(A)
    z = sol.params.z
    left = abs(np.vdot(structured_entries(z, M), dec.u[:, 0]))
    right = abs(np.vdot(np.conj(structured_entries(z, N)), dec.v[:, 0]))
    aligned = left >= 1 - tol and right >= 1 - tol

    total = frobenius_norm(A) ** 2
    identity = abs(sol.error_frobenius ** 2 - (total - dec.s[0] ** 2)) <= tol * total
    if aligned != identity:
        log.warning('svd coincidence checks disagree: alignment %.3e/%.3e, identity gap %.3e',
                    1 - left, 1 - right, sol.error_frobenius ** 2 - (total - dec.s[0] ** 2))
    return bool(aligned and identity)


def monotone_positive_root(A: DenseMatrix) -> Option:
    """Positive real maximizer for square matrices with non-negative,
    non-increasing anti-diagonal sums

    Under that sign pattern the maximizer is the only root of R in (0, 1)
    and Newton's method from z = 1 reaches it. Returns Option(None) when
    the pattern does not hold or the iteration leaves (0, 1).
    """
    A = as_matrix(A)
    M, N = A.shape
    if M != N or not is_real(A):
        return Option(None)
    h = np.real(antidiagonal_sums(A).values)
    if np.any(h < 0) or np.any(np.diff(h) > 0):
        return Option(None)

    R = critical_polynomial(h, M, N)
    dR = P.polyder(R)
    try:
        root = newton(lambda x: P.polyval(x, R), 1.0, fprime=lambda x: P.polyval(x, dR), maxiter=200)
    except (RuntimeError, ZeroDivisionError):
        return Option(None)
    return Option(float(root)) if 0.0 < root < 1.0 else Option(None)
