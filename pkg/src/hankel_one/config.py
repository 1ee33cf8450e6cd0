"""
Solver configuration. Every tolerance used by the solvers lives here so
that a command line run, a test, or a library caller can override it in
one place.
"""
from __future__ import annotations
import logging
import os
from dataclasses import dataclass, field, replace


log = logging.getLogger(__name__)

THREADS_ENV = 'HANKEL1_THREADS'


@dataclass(frozen=True)
class Tolerances:
    """
    Attributes
    ----------
    structural : float
        symmetry, Hankel structure and zero tests, relative to the matrix scale
    iterative : float
        relative stopping tolerance of inner iterations
    tie : float
        relative tolerance deciding that two eigenvalue moduli coincide
    extract : float
        rank-1 and Hankel tolerance used when reading parameters off a
        numerically computed limit
    pole : float
        largest squared weight a secular term may carry at a pole and
        still be dropped
    w_zero : float
        bisection stops once the maximal secular value is this close to 0
    """
    structural: float = 1e-10
    iterative: float = 1e-12
    tie: float = 1e-9
    extract: float = 1e-8
    pole: float = 1e-12
    w_zero: float = 1e-10


    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f'tolerance {name} must be positive, got {value}')


@dataclass(frozen=True)
class SolverConfig:
    tolerances: Tolerances = field(default_factory=Tolerances)
    # complex Frobenius search
    grid_radii: int = 64
    grid_angles: int = 256
    ascent_starts: int = 8
    # spectral bisection
    spectral_grid: int = 2048
    eps: float = 1e-12
    max_bisection: int = 200
    # Cadzow
    cadzow_tol: float = 1e-12
    cadzow_tol_zero: float = 1e-12
    # zero limit once sigma_j <= cadzow_collapse * sigma_0
    cadzow_collapse: float = 1e-6
    max_iter: int = 100_000
    threads: int = 0


    def __post_init__(self):
        for name in ('grid_radii', 'grid_angles', 'spectral_grid'):
            if getattr(self, name) < 3:
                raise ValueError(f'{name} must be at least 3')
        for name in ('eps', 'cadzow_tol', 'cadzow_tol_zero', 'cadzow_collapse'):
            if not getattr(self, name) > 0:
                raise ValueError(f'{name} must be positive')
        if self.ascent_starts < 1 or self.max_bisection < 1 or self.max_iter < 0:
            raise ValueError('iteration counts must be positive')
        if self.threads < 0:
            raise ValueError('threads must be non-negative')


    @classmethod
    def from_env(cls, **overrides) -> SolverConfig:
        """Default configuration with ``threads`` taken from HANKEL1_THREADS

        Examples
        --------
        >>> SolverConfig.from_env(threads=2).threads
        2
        """
        raw = os.environ.get(THREADS_ENV, '').strip()
        if raw and 'threads' not in overrides:
            try:
                overrides['threads'] = max(0, int(raw))
            except ValueError:
                log.warning('ignoring non-integer %s=%r', THREADS_ENV, raw)
        return cls(**overrides)


    def replace(self, **changes) -> SolverConfig:
        return replace(self, **changes)


    def with_tolerances(self, **changes) -> SolverConfig:
        return replace(self, tolerances=replace(self.tolerances, **changes))


DEFAULT = SolverConfig()
