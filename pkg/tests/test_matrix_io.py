from hankel_one.matrix_io import (
    format_entry,
    format_matrix,
    parse_entry,
    parse_matrix,
    read_matrix,
    write_matrix,
)
from hankel_one import ParseError
import io
import numpy as np
import pytest


def test_sanity():
    assert True


@pytest.fixture
def text():
    return '# symmetric example\n1, 0, 0.5\n\n0, 0.5, 0\n0.5, 0, 1\n'



@pytest.mark.parametrize('token,expected', [
    ('3', 3.0),
    (' -2.5e-1 ', -0.25),
    ('1+2i', 1 + 2j),
    ('1 - 2i', 1 - 2j),
    ('-3.5i', -3.5j),
    ('i', 1j),
    ('-i', -1j),
    ('2-i', 2 - 1j),
    ('1E3', 1000.0),
])
def test_parse_entry(token, expected):
    assert parse_entry(token) == expected


@pytest.mark.parametrize('token', ['', 'abc', '1+2j', '1ii', '--', '1,2', 'nan', 'inf'])
def test_parse_entry_rejects(token):
    with pytest.raises(ParseError):
        parse_entry(token)


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as info:
        parse_entry('x', 4)
    assert info.value.line == 4
    assert str(info.value).startswith('line 4')



def test_parse_matrix(text):
    A = parse_matrix(text)
    assert A.shape == (3, 3)
    assert not np.iscomplexobj(A)
    np.testing.assert_array_equal(A[1], [0.0, 0.5, 0.0])


def test_parse_matrix_complex():
    A = parse_matrix('1, i\n-i, 2\n')
    assert np.iscomplexobj(A)
    assert A[0, 1] == 1j


def test_parse_matrix_ragged():
    with pytest.raises(ParseError) as info:
        parse_matrix('1, 2\n3\n')
    assert info.value.line == 2


def test_parse_matrix_empty():
    with pytest.raises(ParseError):
        parse_matrix('# nothing here\n\n')


def test_parse_matrix_bad_entry():
    with pytest.raises(ParseError) as info:
        parse_matrix('1, 2\n3, four\n')
    assert info.value.line == 2



def test_read_matrix_from_path_and_stream(tmp_path, text):
    path = tmp_path / 'A.csv'
    path.write_text(text)
    np.testing.assert_array_equal(read_matrix(str(path)), read_matrix(io.StringIO(text)))


def test_read_matrix_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_matrix(str(tmp_path / 'missing.csv'))


def test_read_matrix_stdin(monkeypatch, text):
    monkeypatch.setattr('sys.stdin', io.StringIO(text))
    assert read_matrix('-').shape == (3, 3)



def test_format_entry():
    assert format_entry(2.0) == '2'
    assert format_entry(1 + 0j) == '1'
    assert format_entry(-0.5 + 1.5j) == '-0.5+1.5i'


def test_written_matrix_reads_back_exactly(tmp_path):
    rng = np.random.default_rng(5)
    A = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    path = tmp_path / 'out.csv'
    write_matrix(A, str(path))
    np.testing.assert_array_equal(read_matrix(str(path)), A)


def test_write_matrix_to_stream():
    out = io.StringIO()
    write_matrix([[1.0, 2.0], [3.0, 4.0]], out)
    assert out.getvalue() == format_matrix([[1.0, 2.0], [3.0, 4.0]]) == '1,2\n3,4\n'
