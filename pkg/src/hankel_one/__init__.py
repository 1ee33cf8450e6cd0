__version__ = '0.1.0'

from .option import Option
from .result import Result
from .config import DEFAULT, SolverConfig, Tolerances
from .errors import (
    AsymmetricInput,
    DegenerateZeroPolynomial,
    HankelError,
    HypothesisMismatch,
    InvalidMatrix,
    NoRank1Solution,
    NonSymmetric,
    NotHankel,
    NotRank1,
    ParseError,
    PoleHit,
    RankZero,
    ZeroMatrix,
)
from .hankel_core import (
    INF,
    ExtendedScalar,
    Rank1HankelParams,
    antidiagonal_spread,
    antidiagonal_sums,
    build_rank1,
    extract_params,
    hankel_project,
    is_hankel,
    structured_vector,
)
from .frobenius_opt import (
    FrobeniusSolution,
    objective,
    solve_complex,
    solve_real,
    solve_toeplitz,
    svd_coincidence_certificate,
)
from .spectral_opt import (
    SpectralCase,
    SpectralSolution,
    case1_test,
    secular_eval,
    solve_spectral,
)
from .cadzow import CadzowTerminal, CadzowTrace, cadzow_iterate, fixed_point_residual
from .matrix_io import parse_matrix, read_matrix, write_matrix
