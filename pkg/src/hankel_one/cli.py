"""
Command line front end::

    hankel1 frobenius --input A.csv --field complex
    hankel1 compare --input A.csv --output text
    hankel1 gen --kind random-symmetric --rows 4 --seed 7 --out A.csv

Every solver call is wrapped in a :class:`Result`; failures become error
blocks in the report and a non-zero exit status.
"""
from __future__ import annotations
import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import scipy.linalg

from . import __version__
from .cadzow import CadzowTrace, cadzow_iterate, fixed_point_residual
from .config import SolverConfig
from .errors import NoRank1Solution
from .frobenius_opt import FrobeniusSolution, solve_complex, solve_real, solve_toeplitz
from .hankel_core import ExtendedScalar, Rank1HankelParams, build_rank1, hankel_project
from .matrix_io import format_matrix, read_matrix, write_matrix
from .numerics import (
    DenseMatrix,
    eig_symmetric,
    frobenius_norm,
    is_real,
    spectral_norm,
    svd,
)
from .result import Result
from .spectral_opt import SpectralSolution, shifted_matrices, solve_spectral


log = logging.getLogger(__name__)

KINDS = ('random', 'random-symmetric', 'hankel', 'rank1-hankel-plus-noise')


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str = '-'
    field: Optional[str] = None
    structure: str = 'hankel'
    eps: Optional[float] = None
    tol: Optional[float] = None
    tol_zero: Optional[float] = None
    grid_radii: Optional[int] = None
    grid_angles: Optional[int] = None
    max_iter: Optional[int] = None
    trace: bool = False
    output: str = 'json'
    seed: int = 0
    kind: str = 'random'
    rows: int = 3
    cols: Optional[int] = None
    noise: float = 0.0
    out: Optional[str] = None
    verbose: bool = False


    def __post_init__(self):
        for name in ('eps', 'tol', 'tol_zero'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f'--{name.replace("_", "-")} must be positive')
        for name in ('grid_radii', 'grid_angles'):
            value = getattr(self, name)
            if value is not None and value < 3:
                raise ValueError(f'--{name.replace("_", "-")} must be at least 3')


    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        known = cls.__dataclass_fields__
        return cls(**{k: v for k, v in vars(args).items() if k in known})


    def solver_config(self) -> SolverConfig:
        overrides = {}
        for ours, theirs in (('eps', 'eps'), ('tol', 'cadzow_tol'), ('tol_zero', 'cadzow_tol_zero'),
                             ('grid_radii', 'grid_radii'), ('grid_angles', 'grid_angles'),
                             ('max_iter', 'max_iter')):
            value = getattr(self, ours)
            if value is not None:
                overrides[theirs] = value
        return SolverConfig.from_env(**overrides)


@dataclass
class Report:
    input: Dict[str, Any]
    solvers: List[Dict[str, Any]] = field(default_factory=list)
    timing_ms: Dict[str, float] = field(default_factory=dict)
    version: str = __version__


    @property
    def exit_status(self) -> int:
        return 1 if any('error' in block for block in self.solvers) else 0


    def as_dict(self) -> Dict[str, Any]:
        return {
            'input': self.input,
            'solvers': self.solvers,
            'timing_ms': self.timing_ms,
            'version': self.version,
        }


    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


    def to_text(self) -> str:
        lines = []
        if 'rows' in self.input:
            lines.append(f"input {self.input['rows']}x{self.input['cols']}  "
                         f"|A|_F = {_fmt(self.input['norm_frobenius'])}  "
                         f"|A|_2 = {_fmt(self.input['norm_spectral'])}")
        for notice in self.input.get('notices', []):
            lines.append(f'note: {notice}')
        for block in self.solvers:
            lines.append('')
            lines.append(f"[{block['solver']}]")
            if 'error' in block:
                lines.append(f"  error {block['error']['kind']}: {block['error']['message']}")
                continue
            for key, value in block.items():
                if key in ('solver', 'trace'):
                    continue
                lines.append(f'  {key}: {_fmt(value)}')
            if 'trace' in block:
                lines.append('  sigmas: ' + ' '.join(_fmt(s) for s in block['trace']['sigmas']))

        finished = [b for b in self.solvers if 'errors' in b]
        if len(finished) > 1:
            lines.append('')
            lines.append(f"{'solver':<20}{'error_F':>14}{'error_2':>14}")
            for b in finished:
                lines.append(f"{b['solver']:<20}{_fmt(b['errors']['frobenius']):>14}"
                             f"{_fmt(b['errors']['spectral']):>14}")
        return '\n'.join(lines) + '\n'


def _fmt(value) -> str:
    """six decimals for display"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return str(value)
    if isinstance(value, float):
        return f'{value:.6f}'
    if isinstance(value, dict):
        if set(value) == {'re', 'im'}:
            return f"{value['re']:.6f}{value['im']:+.6f}i"
        return '{' + ', '.join(f'{k}: {_fmt(v)}' for k, v in value.items()) + '}'
    if isinstance(value, (list, tuple)):
        return '[' + ', '.join(_fmt(v) for v in value) + ']'
    return str(value)


def _number(x):
    """JSON-safe scalar: complex as {"re", "im"}, infinities as "inf"
    """
    if x is None:
        return None
    if np.iscomplexobj(x) and np.imag(x) != 0:
        return {'re': float(np.real(x)), 'im': float(np.imag(x))}
    x = float(np.real(x))
    if np.isnan(x):
        return None
    if np.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return x


def _z(z: ExtendedScalar):
    return 'inf' if z.is_infinite else _number(z.value)


def _params(p: Rank1HankelParams) -> Dict[str, Any]:
    """c scales unit factors; c_unit_left goes with a raw right factor (1, z, ...)"""
    return {'c': _number(p.c), 'c_unit_left': _number(p.c_unit_left), 'z': _z(p.z),
            'rows': p.rows, 'cols': p.cols}


def _errors(A: DenseMatrix, approximant: DenseMatrix) -> Dict[str, float]:
    residual = A - approximant
    return {'frobenius': frobenius_norm(residual), 'spectral': spectral_norm(residual)}


def _error_block(name: str, e: Exception) -> Dict[str, Any]:
    return {'solver': name, 'error': {'kind': getattr(e, 'kind', type(e).__name__), 'message': str(e)}}


def _frobenius_block(name: str, A: DenseMatrix, sol: FrobeniusSolution) -> Dict[str, Any]:
    return {
        'solver': name,
        'structure': sol.structure,
        'params': _params(sol.params),
        'objective': _number(sol.objective_value),
        'errors': _errors(A, sol.approximant()),
        'svd_coincident': sol.svd_coincident,
        'ties': [_params(p) for p in sol.ties],
    }


def _spectral_block(A: DenseMatrix, sol: SpectralSolution) -> Dict[str, Any]:
    block = {
        'solver': 'spectral',
        'case': sol.case.value,
        'lambda_tilde': _number(sol.lambda_tilde),
        'iterations': sol.iterations,
        'c_interval': sol.c_interval.map(lambda bounds: [_number(b) for b in bounds]).unwrap_or(None),
        'params': _params(sol.params),
        'errors': _errors(A, sol.approximant()),
        'error_spectrum': [_number(x) for x in sol.error_spectrum],
    }
    eig = eig_symmetric(A)
    pair = shifted_matrices(eig, sol.lambda_tilde, float(np.real(sol.params.c)), sol.params.z)
    block['psd_margin'] = min(float(np.linalg.eigvalsh(m.matrix())[0]) for m in pair)
    return block


def _cadzow_block(A: DenseMatrix, trace: CadzowTrace, with_trace: bool) -> Dict[str, Any]:
    block = {
        'solver': 'cadzow',
        'terminal': trace.terminal.value,
        'iterations': trace.iterations,
        'params': trace.final_params.map(_params).unwrap_or(None),
        'errors': _errors(A, trace.approximant()),
        'fixed_point_residual': fixed_point_residual(trace.final),
        'sigma_first': trace.sigmas[0],
        'sigma_last': trace.sigmas[-1],
    }
    if with_trace:
        block['trace'] = {
            'sigmas': list(trace.sigmas),
            'iterate_deltas': list(trace.iterate_deltas),
            'ratios': list(trace.ratios),
        }
    return block


def _timed(report: Report, name: str, f: Callable[[], Dict[str, Any]]) -> Result:
    start = time.perf_counter()
    result = Result.into(f)
    report.timing_ms[name] = 1000 * (time.perf_counter() - start)
    if result.is_ok():
        report.solvers.append(result.unwrap())
    else:
        log.debug('%s failed: %r', name, result.unwrap_err())
        report.solvers.append(_error_block(name, result.unwrap_err()))
    return result


def summarize(A: DenseMatrix) -> Dict[str, Any]:
    M, N = A.shape
    summary = {
        'rows': M,
        'cols': N,
        'real': is_real(A),
        'norm_frobenius': frobenius_norm(A),
        'norm_spectral': spectral_norm(A),
        'notices': [],
    }
    dec = Result.into(lambda: svd(A))
    if dec.is_ok():
        summary['singular_values'] = [float(s) for s in dec.unwrap().s[:2]]
    eig = Result.into(lambda: eig_symmetric(A))
    if eig.is_ok():
        summary['eigenvalues'] = [float(x) for x in eig.unwrap().eigenvalues]
    return summary


def _fields(config: RunConfig, A: DenseMatrix) -> tuple:
    if config.field is not None:
        return ('real', 'complex') if config.field == 'both' else (config.field,)
    return ('real', 'complex') if is_real(A) else ('complex',)


def _run_frobenius(report: Report, A: DenseMatrix, config: RunConfig):
    solver_config = config.solver_config()
    for mode in _fields(config, A):
        name = f'frobenius-{mode}'
        if config.structure == 'toeplitz':
            _timed(report, name, lambda: _frobenius_block(
                name, A, solve_toeplitz(A, mode, solver_config)))
        else:
            solve = solve_real if mode == 'real' else solve_complex
            _timed(report, name, lambda: _frobenius_block(name, A, solve(A, solver_config)))


def _run_spectral(report: Report, A: DenseMatrix, config: RunConfig):
    solver_config = config.solver_config()

    def block():
        try:
            return _spectral_block(A, solve_spectral(A, config.eps, solver_config))
        except NoRank1Solution as e:
            report.input['notices'].append(
                f'spectral: largest eigenvalues tie in modulus with opposite signs, '
                f'error level {e.diagnostic.lambda_tilde:.6f} cannot be improved')
            raise

    _timed(report, 'spectral', block)


def _run_cadzow(report: Report, A: DenseMatrix, config: RunConfig):
    solver_config = config.solver_config()
    _timed(report, 'cadzow', lambda: _cadzow_block(
        A, cadzow_iterate(A, config=solver_config), config.trace))


def _load(config: RunConfig) -> Result:
    return Result.into(lambda: read_matrix(config.input))


def _start(config: RunConfig):
    loaded = _load(config)
    if loaded.is_err():
        report = Report(input={'source': config.input, 'notices': []})
        report.solvers.append(_error_block('input', loaded.unwrap_err()))
        return report, None
    A = loaded.unwrap()
    report = Report(input=dict(source=config.input, **summarize(A)))
    return report, A


def cmd_frobenius(config: RunConfig) -> Report:
    report, A = _start(config)
    if A is not None:
        _run_frobenius(report, A, config)
    return report


def cmd_spectral(config: RunConfig) -> Report:
    report, A = _start(config)
    if A is not None:
        _run_spectral(report, A, config)
    return report


def cmd_cadzow(config: RunConfig) -> Report:
    report, A = _start(config)
    if A is not None:
        _run_cadzow(report, A, config)
    return report


def cmd_compare(config: RunConfig) -> Report:
    """All applicable solvers side by side; the spectral block is skipped
    with a notice unless the input is real symmetric"""
    report, A = _start(config)
    if A is None:
        return report
    _run_frobenius(report, A, config)
    symmetric = A.shape[0] == A.shape[1] and Result.into(lambda: eig_symmetric(A)).is_ok()
    if symmetric:
        _run_spectral(report, A, config)
    else:
        report.input['notices'].append('spectral: skipped, input is not real symmetric')
    _run_cadzow(report, A, config)
    return report


def cmd_project(config: RunConfig) -> Result:
    """Hankel projection P(A) of the input"""
    return _load(config).map(hankel_project)


def cmd_gen(config: RunConfig) -> DenseMatrix:
    """Deterministic test matrix for ``config.seed``"""
    rng = np.random.default_rng(config.seed)
    M = config.rows
    N = config.cols if config.cols is not None else M
    if config.kind == 'random':
        A = rng.standard_normal((M, N))
    elif config.kind == 'random-symmetric':
        B = rng.standard_normal((M, M))
        A = 0.5 * (B + B.T)
    elif config.kind == 'hankel':
        h = rng.standard_normal(M + N - 1)
        A = scipy.linalg.hankel(h[:M], h[M - 1:])
    elif config.kind == 'rank1-hankel-plus-noise':
        params = Rank1HankelParams(float(rng.uniform(0.5, 2.0)), float(rng.uniform(-1.5, 1.5)), M, N)
        A = build_rank1(params)
        if config.noise > 0:
            A = A + config.noise * rng.standard_normal((M, N))
    else:
        raise ValueError(f'unknown matrix kind {config.kind!r}')
    return A


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog='hankel1',
                                     description='Rank-1 Hankel approximation of small dense matrices')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', default='-', metavar='FILE',
                        help="matrix file, '-' for standard input")
    common.add_argument('--output', choices=('json', 'text'), default='json')
    common.add_argument('-v', '--verbose', action='store_true')

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument('--field', choices=('real', 'complex', 'both'),
                        help='parameter field of the Frobenius search (default: both for real input)')
    solver.add_argument('--structure', choices=('hankel', 'toeplitz'), default='hankel')
    solver.add_argument('--eps', type=float, help='bisection width of the spectral search')
    solver.add_argument('--tol', type=float, help='Cadzow fixed point tolerance')
    solver.add_argument('--tol-zero', dest='tol_zero', type=float, help='Cadzow zero limit tolerance')
    solver.add_argument('--grid-radii', dest='grid_radii', type=int)
    solver.add_argument('--grid-angles', dest='grid_angles', type=int)
    solver.add_argument('--max-iter', dest='max_iter', type=int, help='Cadzow iteration cap')
    solver.add_argument('--trace', action='store_true', help='include the full Cadzow trace')

    sub = parser.add_subparsers(dest='command', required=True)
    for name in ('frobenius', 'spectral', 'cadzow', 'compare'):
        sub.add_parser(name, parents=[common, solver])
    sub.add_parser('project', parents=[common])

    gen = sub.add_parser('gen', parents=[common])
    gen.add_argument('--kind', choices=KINDS, default='random')
    gen.add_argument('--rows', type=int, default=3)
    gen.add_argument('--cols', type=int)
    gen.add_argument('--noise', type=float, default=0.0)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--out', metavar='FILE')

    return parser.parse_args(argv)


def run(config: RunConfig, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    if config.command == 'gen':
        write_matrix(cmd_gen(config), config.out or stdout)
        return 0

    if config.command == 'project':
        projected = cmd_project(config)
        if projected.is_err():
            e = projected.unwrap_err()
            log.error('%s: %s', getattr(e, 'kind', type(e).__name__), e)
            return 1
        stdout.write(format_matrix(projected.unwrap()))
        return 0

    command = {
        'frobenius': cmd_frobenius,
        'spectral': cmd_spectral,
        'cadzow': cmd_cadzow,
        'compare': cmd_compare,
    }[config.command]
    start = time.perf_counter()
    report = command(config)
    report.timing_ms['total'] = 1000 * (time.perf_counter() - start)
    stdout.write(report.to_json() + '\n' if config.output == 'json' else report.to_text())
    return report.exit_status


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        config = RunConfig.from_args(args)
    except ValueError as e:
        log.error('%s', e)
        return 2
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
