"""
Rank-1 Hankel matrices and the anti-diagonal structure they live in.

Every rank-1 Hankel matrix of size M x N is either ``c * z_M(z) z_N(z)^T``
for a normalized geometric vector ``z_N(z) ~ (1, z, ..., z^{N-1})`` or the
corner matrix ``c * e_M e_N^T``, which is the same family evaluated at the
point z = infinity. :class:`ExtendedScalar` carries that point.
"""
from __future__ import annotations
import logging
import numbers
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NotHankel, NotRank1
from .numerics import DenseMatrix, as_matrix, frobenius_norm, is_real, svd


log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtendedScalar:
    """
    A finite complex (or real) number, or the point at infinity when
    ``value`` is None. Use :meth:`coerce` to build one from a plain number,
    ``float('inf')`` or the string ``"inf"``.
    """
    value: Union[complex, float, None] = None


    def __post_init__(self):
        if self.value is not None and not np.isfinite(self.value):
            raise ValueError(f'finite generator expected, got {self.value!r}')


    @classmethod
    def coerce(cls, z) -> ExtendedScalar:
        if isinstance(z, ExtendedScalar):
            return z
        if z is None or (isinstance(z, str) and z.strip().lower() in ('inf', 'infinity')):
            return INF
        if isinstance(z, numbers.Number):
            if np.iscomplexobj(z) or isinstance(z, complex):
                zc = complex(z)
                if np.isinf(zc.real) or np.isinf(zc.imag):
                    return INF
                return cls(zc.real if zc.imag == 0 else zc)
            if np.isinf(z):
                return INF
            return cls(float(z))
        raise TypeError(f'cannot interpret {z!r} as an extended scalar')


    @property
    def is_infinite(self) -> bool:
        return self.value is None


    @property
    def is_real(self) -> bool:
        return self.value is None or np.imag(self.value) == 0


    def reciprocal(self) -> ExtendedScalar:
        """0 and infinity swap, every other z maps to 1/z"""
        if self.is_infinite:
            return ExtendedScalar(0.0)
        if self.value == 0:
            return INF
        return ExtendedScalar(1 / self.value)


    @property
    def modulus(self) -> float:
        return float('inf') if self.is_infinite else float(abs(self.value))


    def __str__(self):
        if self.is_infinite:
            return 'inf'
        if self.is_real:
            return f'{float(np.real(self.value)):.6f}'
        return f'{complex(self.value):.6f}'


INF = ExtendedScalar(None)


@dataclass(frozen=True)
class StructuredVector:
    dimension: int
    generator: ExtendedScalar
    entries: np.ndarray


def structured_rows(zs: np.ndarray, N: int) -> np.ndarray:
    """Unit rows proportional to (1, z, ..., z^{N-1}) for finite zs

    For |z| > 1 the row is built from w = 1/z, reversed and multiplied by
    the phase (z/|z|)^{N-1}, so no power exceeds 1 in modulus.
    """
    zs = np.asarray(zs)
    big = np.abs(zs) > 1
    safe = np.where(big, zs, 1)
    w = np.where(big, 1 / safe, zs)
    powers = w[:, None] ** np.arange(N)
    rows = powers / np.linalg.norm(powers, axis=1)[:, None]
    if np.any(big):
        phase = (safe[big] / np.abs(safe[big])) ** (N - 1)
        rows[big] = rows[big][:, ::-1] * phase[:, None]
    return rows


def _unit(N: int) -> np.ndarray:
    e = np.zeros(N)
    e[-1] = 1.0
    return e


def structured_entries(z, N: int) -> np.ndarray:
    z = ExtendedScalar.coerce(z)
    if z.is_infinite:
        return _unit(N)
    return structured_rows(np.array([z.value]), N)[0]


def structured_vector(z, N: int) -> StructuredVector:
    """Normalized structured vector z_N(z), or e_N for z = infinity

    Examples
    --------
    >>> structured_vector(0.0, 4).entries
    array([1., 0., 0., 0.])
    >>> structured_vector('inf', 3).entries
    array([0., 0., 1.])
    """
    if N < 1:
        raise ValueError('dimension must be at least 1')
    z = ExtendedScalar.coerce(z)
    return StructuredVector(N, z, structured_entries(z, N))


def geometric_norm(z, N: int) -> float:
    """||(1, z, ..., z^{N-1})||_2 for finite z, computed without
    forming powers above 1 in modulus

    Examples
    --------
    >>> round(geometric_norm(2.0, 3), 6)
    4.582576
    """
    r = abs(complex(z))
    if r <= 1:
        return float(np.linalg.norm(r ** np.arange(N)))
    return float(r ** (N - 1) * np.linalg.norm((1 / r) ** np.arange(N)))


def w_vector(z, N: int) -> np.ndarray:
    """J_N z_N(1/z), the reversed form used for |z| > 1

    z_N(z) equals ``(z/|z|)**(N-1) * w_vector(z, N)`` for every finite
    non-zero z.
    """
    return structured_entries(ExtendedScalar.coerce(z).reciprocal(), N)[::-1]


@dataclass(frozen=True)
class Rank1HankelParams:
    """
    Parameters (c, z) of the rank-1 Hankel matrix ``c * z_M z_N^T``
    (``c * e_M e_N^T`` when z is infinite).
    """
    c: Union[complex, float]
    z: ExtendedScalar
    rows: int
    cols: int


    def __post_init__(self):
        object.__setattr__(self, 'z', ExtendedScalar.coerce(self.z))


    def materialize(self) -> DenseMatrix:
        return build_rank1(self)


    def as_toeplitz(self) -> DenseMatrix:
        """The Toeplitz counterpart c z_M z_N^T J_N"""
        return toeplitz_flip(build_rank1(self))


    def raw_coefficient(self, left: bool = False, right: bool = True) -> Union[complex, float]:
        """
        The scale that goes with unnormalized geometric factors.

        ``c`` multiplies unit vectors. Writing the same matrix as
        ``c' * x (1, z, ..., z^{N-1})^T`` with ``x`` unit (``right=True``),
        or with both factors raw (``left=True``, which makes ``c'`` the
        [0, 0] entry), divides c by the norms of the raw factors.
        For z = infinity the factors are e_M, e_N and c is returned.

        Examples
        --------
        >>> round(Rank1HankelParams(5.0, 0.0, 3, 3).raw_coefficient(), 6)
        5.0
        >>> p = Rank1HankelParams(2.0, 1.0, 2, 2)
        >>> round(p.raw_coefficient(), 6), round(p.raw_coefficient(left=True), 6)
        (1.414214, 1.0)
        """
        if self.z.is_infinite:
            return self.c
        scale = 1.0
        if left:
            scale *= geometric_norm(self.z.value, self.rows)
        if right:
            scale *= geometric_norm(self.z.value, self.cols)
        return self.c / scale


    @property
    def c_unit_left(self) -> Union[complex, float]:
        """c for a unit left factor and the raw right factor (1, z, ..., z^{N-1})"""
        return self.raw_coefficient()


    def __str__(self):
        c = self.c
        c_text = f'{float(np.real(c)):.6f}' if np.imag(c) == 0 else f'{complex(c):.6f}'
        return f'(z={self.z}, c={c_text}, {self.rows}x{self.cols})'


def build_rank1(params: Rank1HankelParams) -> DenseMatrix:
    """c z_M z_N^T without conjugating the right factor

    Examples
    --------
    >>> build_rank1(Rank1HankelParams(5.0, 'inf', 2, 2))
    array([[0., 0.],
           [0., 5.]])
    """
    left = structured_entries(params.z, params.rows)
    right = structured_entries(params.z, params.cols)
    return params.c * np.outer(left, right)


@dataclass(frozen=True)
class AntiDiagonalSums:
    """
    values[l] = sum of a_jk over j + k = l; counts[l] is the length of
    anti-diagonal l.
    """
    values: np.ndarray
    counts: np.ndarray


    @property
    def means(self) -> np.ndarray:
        return self.values / self.counts


    def __len__(self):
        return self.values.shape[0]


def _antidiagonal_index(M: int, N: int) -> np.ndarray:
    return np.add.outer(np.arange(M), np.arange(N))


def antidiagonal_sums(A: DenseMatrix) -> AntiDiagonalSums:
    """
    Examples
    --------
    >>> antidiagonal_sums([[1.0, 2.0], [3.0, 4.0]]).values
    array([1., 5., 4.])
    """
    A = as_matrix(A)
    M, N = A.shape
    index = _antidiagonal_index(M, N).ravel()
    length = M + N - 1
    counts = np.bincount(index, minlength=length)
    values = np.bincount(index, weights=A.real.ravel(), minlength=length)
    if np.iscomplexobj(A):
        values = values + 1j * np.bincount(index, weights=A.imag.ravel(), minlength=length)
    return AntiDiagonalSums(values, counts)


def hankel_project(A: DenseMatrix) -> DenseMatrix:
    """Orthogonal projection onto Hankel matrices: every anti-diagonal
    replaced by its mean

    Examples
    --------
    >>> hankel_project([[1.0, 2.0], [3.0, 4.0]])
    array([[1. , 2.5],
           [2.5, 4. ]])
    """
    A = as_matrix(A)
    M, N = A.shape
    if M > N:
        return hankel_project(A.T).T
    return antidiagonal_sums(A).means[_antidiagonal_index(M, N)]


def antidiagonal_spread(A: DenseMatrix) -> float:
    """Largest max - min over the anti-diagonals of A

    Complex entries use the modulus of the real and imaginary ranges.

    Examples
    --------
    >>> antidiagonal_spread([[1.0, 2.0], [5.0, 4.0]])
    3.0
    """
    A = as_matrix(A)
    M, N = A.shape
    index = _antidiagonal_index(M, N).ravel()
    length = M + N - 1

    def _range(part):
        high = np.full(length, -np.inf)
        low = np.full(length, np.inf)
        np.maximum.at(high, index, part)
        np.minimum.at(low, index, part)
        return high - low

    spread = _range(A.real.ravel())
    if np.iscomplexobj(A):
        spread = np.hypot(spread, _range(A.imag.ravel()))
    return float(np.max(spread))


def is_hankel(A: DenseMatrix, tol: float = 1e-10) -> bool:
    """
    Examples
    --------
    >>> is_hankel([[1.0, 2.0], [2.0, 3.0]])
    True
    """
    A = as_matrix(A)
    scale = max(1.0, float(np.max(np.sum(np.abs(A), axis=1))))
    return antidiagonal_spread(A) <= tol * scale


def toeplitz_flip(A: DenseMatrix) -> DenseMatrix:
    """A J_N: Toeplitz matrices become Hankel matrices and back"""
    return as_matrix(A)[:, ::-1].copy()


def reverse_rows_cols(A: DenseMatrix) -> DenseMatrix:
    """J_M A J_N"""
    return as_matrix(A)[::-1, ::-1].copy()


def extract_params(H: DenseMatrix, tol: float = 1e-8) -> Rank1HankelParams:
    """Reads (c, z) off a numerically rank-1 Hankel matrix

    z is the least-squares ratio of consecutive entries of the dominant
    singular vector along the longer dimension, or infinity once that
    vector has all but ``tol`` of its mass on the last coordinate.
    c is then z_M^* H conj(z_N).

    Raises
    ------
    NotRank1
        if sigma_1 > tol * sigma_0, or the structured fit misses H
    NotHankel
        if H deviates from Hankel structure by more than tol

    Examples
    --------
    >>> extract_params([[0.0, 0.0], [0.0, 3.0]])
    Rank1HankelParams(c=3.0, z=ExtendedScalar(value=None), rows=2, cols=2)
    """
    H = as_matrix(H, 'H')
    M, N = H.shape
    if not np.any(H):
        raise NotRank1('the zero matrix has rank 0')

    dec = svd(H)
    if dec.s.size > 1 and dec.s[1] > tol * dec.s[0]:
        raise NotRank1(f'sigma_1/sigma_0 = {dec.s[1] / dec.s[0]:.3e} exceeds {tol:.1e}')
    if not is_hankel(H, tol):
        raise NotHankel('matrix is not constant along its anti-diagonals')

    x = dec.u[:, 0] if M >= N else dec.vh[0, :]
    if x.size == 1:
        z = ExtendedScalar(0.0)
    elif abs(x[-1]) ** 2 >= 1 - tol:
        z = INF
    else:
        ratio = np.vdot(x[:-1], x[1:]) / np.vdot(x[:-1], x[:-1]).real
        z = ExtendedScalar.coerce(ratio.real if is_real(H) else ratio)

    zm, zn = structured_entries(z, M), structured_entries(z, N)
    c = np.conj(zm) @ H @ np.conj(zn)
    c = float(np.real(c)) if is_real(H) else complex(c)
    params = Rank1HankelParams(c, z, M, N)

    misfit = frobenius_norm(H - build_rank1(params))
    if misfit > tol * frobenius_norm(H):
        raise NotRank1(f'structured fit misses by {misfit:.3e}')
    return params
