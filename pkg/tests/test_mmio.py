import numpy as np
import pytest
from hypothesis import given, strategies as st

from genpseudo import mmio
from genpseudo.errors import DuplicateEntry, ParseError, UnsupportedHeader


def test_array_complex_is_column_major():
    text = "%%MatrixMarket matrix array complex general\n% comment\n2 2\n1 0\n2 0\n3 1\n4 -1\n"
    a = mmio.parse_matrix_market_text(text)
    np.testing.assert_array_equal(a, [[1, 3 + 1j], [2, 4 - 1j]])


def test_coordinate_single_entry():
    text = "%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 1.0 0.0\n"
    np.testing.assert_array_equal(mmio.parse_matrix_market_text(text), [[1, 0], [0, 0]])


def test_real_variants():
    arr = "%%MatrixMarket matrix array real general\n2 1\n1.5\n-2\n"
    np.testing.assert_array_equal(mmio.parse_matrix_market_text(arr), [[1.5], [-2]])
    coo = "%%MatrixMarket matrix coordinate real general\n2 3 2\n2 3 7\n1 1 -1\n"
    np.testing.assert_array_equal(mmio.parse_matrix_market_text(coo), [[-1, 0, 0], [0, 0, 7]])


def test_header_is_case_insensitive():
    text = "%%MatrixMarket MATRIX Array Complex General\n1 1\n2 3\n"
    assert mmio.parse_matrix_market_text(text)[0, 0] == 2 + 3j


@pytest.mark.parametrize(
    "header",
    [
        "%%MatrixMarket matrix coordinate pattern general",
        "%%MatrixMarket matrix array integer general",
        "%%MatrixMarket matrix array real symmetric",
        "%%MatrixMarket vector array real general",
    ],
)
def test_unsupported_headers(header):
    with pytest.raises(UnsupportedHeader):
        mmio.parse_matrix_market_text(header + "\n1 1\n1\n")


def test_duplicate_entry_reports_line():
    text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n"
    with pytest.raises(DuplicateEntry) as info:
        mmio.parse_matrix_market_text(text)
    assert info.value.line == 4


@pytest.mark.parametrize(
    "text, line",
    [
        ("%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n", 5),
        ("%%MatrixMarket matrix array complex general\n1 1\n1\n", 3),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n", 3),
        ("%%MatrixMarket matrix array real general\n2 2\n1\n2\n", 4),
        ("not a banner\n", 1),
        ("%%MatrixMarket matrix array real general\n", 1),
        ("%%MatrixMarket matrix array real general\n1 1\nnan\n", 3),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        mmio.parse_matrix_market_text(text)
    assert info.value.line == line


@given(st.integers(0, 10_000), st.sampled_from(["array", "coordinate"]))
def test_round_trip_bit_identical(seed, fmt):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((5, 4)) * 10.0 ** rng.integers(-300, 300, (5, 4)) + 1j * rng.standard_normal((5, 4))
    a[0, 0] = 0
    if fmt == "array":
        # coordinate files omit zeros, so the sign of zero only survives the array format
        a[1, 1] = complex(-0.0, -0.0)
    back = mmio.parse_matrix_market_text(mmio.format_matrix_market(a, fmt))
    assert back.shape == a.shape
    assert back.tobytes() == a.tobytes()


def test_file_round_trip(tmp_path, rng):
    a = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    path = tmp_path / "a.mtx"
    mmio.write_matrix_market(path, a, comment="hello")
    assert mmio.parse_matrix_market(path).tobytes() == a.tobytes()
    assert not list(tmp_path.glob(".*tmp"))
