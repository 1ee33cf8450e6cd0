"""
Plain-text matrix format: one row per line, comma separated entries,
``#`` starts a comment line. Entries are real literals or complex ones
written ``a+bi``, ``a-bi``, ``bi`` or ``i``.
"""
from __future__ import annotations
import logging
import re
import sys
from typing import IO, Union

import numpy as np

from .errors import InvalidMatrix, ParseError
from .numerics import DenseMatrix, as_matrix


log = logging.getLogger(__name__)

_BARE_UNIT = re.compile(r'(^|[+-])i$')
_ALLOWED = re.compile(r'^[0-9eE.+\-i]+$')


def parse_entry(token: str, line: int | None = None) -> Union[float, complex]:
    """
    Examples
    --------
    >>> parse_entry(' 2.5 ')
    2.5
    >>> parse_entry('1 - 2i')
    (1-2j)
    """
    text = ''.join(token.split()).lower()
    if not text:
        raise ParseError('empty entry', line)
    if not _ALLOWED.match(text) or text.count('i') > 1:
        raise ParseError(f'cannot read {token.strip()!r} as a number', line)
    try:
        if text.endswith('i'):
            return complex(_BARE_UNIT.sub(r'\g<1>1i', text)[:-1] + 'j')
        return float(text)
    except ValueError:
        raise ParseError(f'cannot read {token.strip()!r} as a number', line) from None


def parse_matrix(text: str) -> DenseMatrix:
    rows = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith('#'):
            continue
        row = [parse_entry(token, number) for token in stripped.split(',')]
        if rows and len(row) != len(rows[0]):
            raise ParseError(f'expected {len(rows[0])} entries, found {len(row)}', number)
        rows.append(row)

    if not rows:
        raise ParseError('no matrix rows found')
    try:
        return as_matrix(rows)
    except InvalidMatrix as e:
        raise ParseError(str(e)) from e


def read_matrix(source: Union[str, IO[str]]) -> DenseMatrix:
    """Reads a matrix from a path, ``-`` for standard input, or an open
    text stream"""
    if hasattr(source, 'read'):
        return parse_matrix(source.read())
    if source == '-':
        return parse_matrix(sys.stdin.read())
    log.debug('reading matrix from %s', source)
    try:
        with open(source) as f:
            return parse_matrix(f.read())
    except OSError as e:
        raise ParseError(f'cannot open {source}: {e.strerror}') from e


def format_entry(x) -> str:
    """
    Full precision, complex entries as ``a+bi``

    >>> format_entry(0.1)
    '0.10000000000000001'
    >>> format_entry(1 - 2j)
    '1-2i'
    """
    if np.iscomplexobj(x) and np.imag(x) != 0:
        return f'{np.real(x):.17g}{np.imag(x):+.17g}i'
    return f'{float(np.real(x)):.17g}'


def format_matrix(A: DenseMatrix) -> str:
    A = as_matrix(A)
    return ''.join(','.join(format_entry(x) for x in row) + '\n' for row in A)


def write_matrix(A: DenseMatrix, target: Union[str, IO[str], None] = None):
    """Writes ``A`` to a path, an open stream, or standard output"""
    text = format_matrix(A)
    if target is None or target == '-':
        sys.stdout.write(text)
    elif hasattr(target, 'write'):
        target.write(text)
    else:
        with open(target, 'w') as f:
            f.write(text)
