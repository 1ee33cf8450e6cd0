"""
Dense linear algebra and scalar search primitives shared by the solvers:
ordered symmetric eigendecomposition, phase-normalized SVD, real
polynomial roots by Sturm bracketing, and bounded 1-D maximization.
"""
from __future__ import annotations
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Tuple

import numpy as np
import numpy.polynomial.polynomial as P
import scipy.linalg
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    DegenerateZeroPolynomial,
    InvalidMatrix,
    NonSymmetric,
    ZeroMatrix,
)


log = logging.getLogger(__name__)

DenseMatrix = np.ndarray


def as_matrix(data, name: str = 'A') -> DenseMatrix:
    """Validates and converts ``data`` into a float or complex 2-D array

    Complex input whose imaginary parts all vanish is returned as real.

    Raises
    ------
    InvalidMatrix
        for non-numeric, empty, non 2-D or non-finite input
    """
    try:
        A = np.array(data)
    except (TypeError, ValueError) as e:
        raise InvalidMatrix(f'{name}: {e}') from e

    if A.dtype.kind not in 'biufc':
        raise InvalidMatrix(f'{name} must be numeric, got dtype {A.dtype}')
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidMatrix(f'{name} must be a non-empty matrix, got shape {A.shape}')

    if A.dtype.kind == 'c':
        A = A.astype(complex)
        if not np.any(A.imag):
            A = A.real.copy()
    else:
        A = A.astype(float)

    if not np.all(np.isfinite(A)):
        raise InvalidMatrix(f'{name} has non-finite entries')
    return A


def is_real(A: DenseMatrix) -> bool:
    return not np.iscomplexobj(A) or not np.any(np.imag(A))


def spectral_norm(A: DenseMatrix) -> float:
    return float(np.linalg.norm(A, 2))


def frobenius_norm(A: DenseMatrix) -> float:
    return float(np.linalg.norm(A, 'fro'))


@dataclass(frozen=True)
class SymmetricEigen:
    """
    Eigenpairs of a real symmetric matrix ordered by non-increasing
    modulus. Column ``j`` of ``eigenvectors`` belongs to ``eigenvalues[j]``.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


    def __len__(self):
        return self.eigenvalues.shape[0]


    def __iter__(self) -> Iterator[Tuple[float, np.ndarray]]:
        for j in range(len(self)):
            yield float(self.eigenvalues[j]), self.eigenvectors[:, j]


    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.eigenvalues)


    def reconstruct(self) -> DenseMatrix:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T


    def negated(self) -> SymmetricEigen:
        """Eigendecomposition of -A, keeping the modulus ordering"""
        order = _modulus_order(-self.eigenvalues, 0.0)
        return SymmetricEigen(-self.eigenvalues[order], self.eigenvectors[:, order])


def _modulus_order(values: np.ndarray, tie: float) -> list:
    """Non-increasing modulus; near ties put positive values first, then index"""
    n = values.shape[0]
    moduli = np.abs(values)
    scale = float(moduli.max()) if n else 0.0
    by_modulus = sorted(range(n), key=lambda j: (-moduli[j], j))

    order, group = [], []
    for j in by_modulus:
        if group and moduli[group[0]] - moduli[j] > tie * scale:
            order.extend(sorted(group, key=lambda k: (values[k] < 0, k)))
            group = []
        group.append(j)
    order.extend(sorted(group, key=lambda k: (values[k] < 0, k)))
    return order


def _normalize_sign(V: np.ndarray) -> np.ndarray:
    # largest-modulus entry of every column made positive (first one on ties)
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def eig_symmetric(A: DenseMatrix, tol: float = 1e-10, tie: float = 1e-9) -> SymmetricEigen:
    """Ordered eigendecomposition of a real symmetric matrix

    Parameters
    ----------
    A : DenseMatrix
        real square matrix, symmetric within ``tol * ||A||_F``
    tol : float
        relative symmetry tolerance
    tie : float
        relative tolerance under which two moduli count as equal

    Returns
    -------
    SymmetricEigen
        eigenvalues with |l_0| >= |l_1| >= ..., positive before negative
        on modulus ties, then by the index LAPACK returned them in

    Raises
    ------
    NonSymmetric

    Examples
    --------
    >>> eig_symmetric(np.diag([1.0, -3.0, 2.0])).eigenvalues
    array([-3.,  2.,  1.])
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NonSymmetric(f'matrix is not square: {A.shape}')
    if not is_real(A):
        raise NonSymmetric('complex matrices have no real symmetric eigendecomposition')
    A = np.real(A)

    scale = frobenius_norm(A)
    asymmetry = frobenius_norm(A - A.T)
    if asymmetry > tol * scale:
        raise NonSymmetric(f'asymmetry {asymmetry:.3e} exceeds {tol:.1e} * ||A||_F')

    values, vectors = scipy.linalg.eigh(0.5 * (A + A.T))
    order = _modulus_order(values, tie)
    return SymmetricEigen(values[order], _normalize_sign(vectors[:, order]))


@dataclass(frozen=True)
class Svd:
    """
    Thin singular value decomposition ``A = u @ diag(s) @ vh``. Right
    singular vectors are the rows of ``vh`` conjugated, see :attr:`v`.
    """
    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray


    @property
    def v(self) -> np.ndarray:
        return self.vh.conj().T


    def rank1(self, j: int = 0) -> DenseMatrix:
        """sigma_j u_j v_j^*"""
        return self.s[j] * np.outer(self.u[:, j], self.vh[j, :])


    def reconstruct(self) -> DenseMatrix:
        return (self.u * self.s) @ self.vh


def svd(A: DenseMatrix) -> Svd:
    """Singular value decomposition with deterministic phases

    Each left singular vector is rotated so that its entry of largest
    modulus (first one on ties) is real and positive; the matching right
    vector absorbs the conjugate phase.

    Raises
    ------
    ZeroMatrix
        if ``||A||_F = 0``
    """
    A = as_matrix(A)
    if not np.any(A):
        raise ZeroMatrix('singular value decomposition of the zero matrix')

    u, s, vh = scipy.linalg.svd(A, full_matrices=False)
    pivots = np.argmax(np.abs(u), axis=0)
    pivot_entries = u[pivots, np.arange(u.shape[1])]
    phases = pivot_entries / np.abs(pivot_entries)
    u = u * np.conj(phases)
    vh = vh * phases[:, None]
    return Svd(u, s, vh)


@dataclass(frozen=True)
class RootSet:
    """
    Real roots found by :func:`real_roots`, ascending. Every root passed
    ``|p(r)| <= residual_bound * max|coeff| * max(1, |r|)**deg``.
    """
    roots: Tuple[float, ...]
    residual_bound: float


    def __len__(self):
        return len(self.roots)


    def __iter__(self):
        return iter(self.roots)


    def __getitem__(self, index):
        return self.roots[index]


def trim_coefficients(coeffs: Sequence[float], rtol: float = 0.0) -> np.ndarray:
    """Drops high-order coefficients with ``|c_k| <= rtol * max|c|``

    Coefficients are in increasing degree order, as everywhere in
    ``numpy.polynomial``.

    Raises
    ------
    DegenerateZeroPolynomial
    """
    c = np.asarray(coeffs, dtype=float).ravel()
    if c.size == 0 or not np.any(c):
        raise DegenerateZeroPolynomial('all polynomial coefficients vanish')
    scale = np.max(np.abs(c))
    kept = np.nonzero(np.abs(c) > rtol * scale)[0]
    return c[:kept[-1] + 1]


def _chop(c: np.ndarray, atol: float) -> np.ndarray:
    end = c.size
    while end > 0 and abs(c[end - 1]) <= atol:
        end -= 1
    return c[:end]


def sturm_sequence(coeffs: np.ndarray, tol: float = 1e-12) -> list:
    """Sturm chain p, p', -rem(p, p'), ... with each member scaled to unit max

    Remainders whose coefficients fall below ``tol`` relative to the
    dividend are treated as zero, which ends the chain at the numerical
    gcd; the chain then counts distinct roots.
    """
    p = np.asarray(coeffs, dtype=float)
    chain = [p / np.max(np.abs(p))]
    if p.size > 1:
        dp = P.polyder(p)
        chain.append(dp / np.max(np.abs(dp)))

    while chain[-1].size > 1:
        _, rem = P.polydiv(chain[-2], chain[-1])
        rem = _chop(np.atleast_1d(rem), tol * np.max(np.abs(chain[-2])))
        if rem.size == 0:
            break
        chain.append(-rem / np.max(np.abs(rem)))
    return chain


def sign_variations(chain: list, x: float) -> int:
    signs = [v for v in (np.sign(P.polyval(x, p)) for p in chain) if v != 0]
    return int(sum(1 for s, t in zip(signs, signs[1:]) if s != t))


def cauchy_bound(coeffs: np.ndarray) -> float:
    c = np.asarray(coeffs, dtype=float)
    if c.size == 1:
        return 1.0
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))


def _isolate(chain: list, lo: float, hi: float, min_width: float) -> list:
    """Intervals (a, b] each holding one distinct root according to the chain"""
    p = chain[0]
    isolated = []
    stack = [(lo, sign_variations(chain, lo), hi, sign_variations(chain, hi))]
    while stack:
        a, va, b, vb = stack.pop()
        count = va - vb
        if count <= 0:
            continue
        if count == 1 or b - a <= min_width:
            isolated.append((a, b))
            continue
        m = 0.5 * (a + b)
        if P.polyval(m, p) == 0.0:
            m = a + 0.5078125 * (b - a)
        vm = sign_variations(chain, m)
        stack.append((m, vm, b, vb))
        stack.append((a, va, m, vm))
    return isolated


def _refine(p: np.ndarray, a: float, b: float) -> float:
    fa, fb = P.polyval(a, p), P.polyval(b, p)
    if fb == 0.0:
        return b
    if fa == 0.0:
        return a
    if np.sign(fa) != np.sign(fb):
        r = brentq(lambda x: P.polyval(x, p), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    else:
        # touching root of even multiplicity: no sign change to bracket
        res = minimize_scalar(lambda x: abs(P.polyval(x, p)), bounds=(a, b), method='bounded',
                              options={'xatol': 1e-14 * max(1.0, abs(a), abs(b))})
        r = float(res.x)
    return _newton_polish(p, r, a, b)


def _newton_polish(p: np.ndarray, r: float, a: float, b: float, steps: int = 3) -> float:
    dp = P.polyder(p)
    best, best_res = r, abs(P.polyval(r, p))
    for _ in range(steps):
        slope = P.polyval(best, dp)
        if slope == 0.0:
            break
        candidate = best - P.polyval(best, p) / slope
        if not a <= candidate <= b:
            break
        res = abs(P.polyval(candidate, p))
        if res >= best_res:
            break
        best, best_res = candidate, res
    return float(best)


def real_roots(coeffs: Sequence[float], interval: Tuple[float, float] | None = None,
               residual: float = 1e-12, trim: float = 0.0) -> RootSet:
    """All distinct real roots of a real polynomial, optionally within an interval

    Sturm counts drive a bisection until every subinterval holds one
    root, which is then polished by Brent's method and Newton steps.
    A sign-change scan afterwards picks up any simple root the counts
    lost to rounding.

    Parameters
    ----------
    coeffs : sequence of float
        coefficients in increasing degree order
    interval : (float, float), optional
        closed search interval; all real roots when omitted
    residual : float
        acceptance bound, relative to ``max|coeff| * max(1, |r|)**deg``
    trim : float
        relative threshold for dropping negligible leading coefficients

    Returns
    -------
    RootSet

    Raises
    ------
    DegenerateZeroPolynomial

    Examples
    --------
    >>> [round(r, 12) for r in real_roots([-1.0, 0.0, 1.0])]
    [-1.0, 1.0]
    >>> len(real_roots([0.0, 1.0, 0.0, 1.0]))
    1
    """
    p = trim_coefficients(coeffs, trim)
    degree = p.size - 1
    scale = float(np.max(np.abs(p)))

    if interval is None:
        bound = cauchy_bound(p)
        lo, hi = -bound, bound
    else:
        lo, hi = float(min(interval)), float(max(interval))

    if degree == 0:
        return RootSet((), residual)

    def acceptable(r):
        return abs(P.polyval(r, p)) <= residual * scale * max(1.0, abs(r)) ** degree

    margin = 1e-9 * max(1.0, hi - lo)
    outer_lo, outer_hi = lo - margin, hi + margin
    chain = sturm_sequence(p)

    found = []
    for a, b in _isolate(chain, outer_lo, outer_hi, 1e-14 * max(1.0, abs(lo), abs(hi))):
        r = _refine(p, a, b)
        if acceptable(r):
            found.append(r)
        else:
            log.debug('rejected root candidate %.17g with residual %.3e', r, abs(P.polyval(r, p)))

    xs = np.linspace(outer_lo, outer_hi, 64 * (degree + 1))
    values = P.polyval(xs, p)
    for k in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
        a, b = xs[k], xs[k + 1]
        if any(a <= r <= b for r in found):
            continue
        r = _refine(p, a, b)
        if acceptable(r):
            log.debug('sign-change scan recovered root %.17g', r)
            found.append(r)

    roots = []
    for r in sorted(found):
        slack = 8 * np.finfo(float).eps * max(1.0, abs(r))
        if r < lo - slack or r > hi + slack:
            log.debug('dropped root %.17g outside [%g, %g]', r, lo, hi)
            continue
        r = min(max(r, lo), hi)
        if roots and abs(r - roots[-1]) <= 1e-10 * max(1.0, abs(r)):
            continue
        roots.append(float(r))
    return RootSet(tuple(roots), residual)


def _evaluate_grid(f: Callable, xs: np.ndarray, vectorized: bool, threads: int) -> np.ndarray:
    if vectorized:
        return np.asarray(f(xs), dtype=float)
    if threads > 0:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return np.fromiter(pool.map(f, xs), dtype=float, count=xs.size)
    return np.fromiter((f(x) for x in xs), dtype=float, count=xs.size)


def maximize_1d(f: Callable, interval: Tuple[float, float], grid: int = 2048, tol: float = 1e-12,
                vectorized: bool = False, threads: int = 0) -> Tuple[float, float]:
    """Maximum of a scalar function on a closed interval

    A uniform grid scan picks the best cell; a bounded Brent search
    (golden section with parabolic steps) then refines it. Only an
    improvement over the grid value is accepted, so the result is never
    below the grid maximum.

    Parameters
    ----------
    f : Callable
        scalar function; with ``vectorized=True`` it maps an array of
        abscissae to an array of values
    interval : (float, float)
    grid : int
        number of grid points, at least 3
    tol : float
        absolute abscissa tolerance of the refinement
    threads : int
        evaluate grid points of a scalar ``f`` on this many threads

    Returns
    -------
    (argmax, max)
        the smaller abscissa wins ties

    Examples
    --------
    >>> x, v = maximize_1d(lambda x: -(x - 0.3) ** 2, (-1.0, 1.0))
    >>> abs(x - 0.3) < 1e-6 and abs(v) < 1e-12
    True
    """
    if grid < 3:
        raise ValueError('grid must have at least 3 points')
    lo, hi = float(interval[0]), float(interval[1])
    xs = np.linspace(lo, hi, grid)
    values = _evaluate_grid(f, xs, vectorized, threads)

    i = int(np.argmax(values))
    best_x, best_value = float(xs[i]), float(values[i])

    if vectorized:
        def negated(x):
            return -float(f(np.array([x]))[0])
    else:
        def negated(x):
            return -float(f(x))

    a, b = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, grid - 1)])
    res = minimize_scalar(negated, bounds=(a, b), method='bounded', options={'xatol': tol})
    if np.isfinite(res.fun) and -res.fun > best_value:
        return float(res.x), float(-res.fun)
    return best_x, best_value
