"""
Code layer: generator matrices, codeword enumeration, coefficient-order labels,
weights, puncturing and the matrix file format.
"""
import numpy as np
import pytest

from app.core.errors import CodeInputError, EnumerationLimitError
from app.services.codes import (
    GeneratorMatrix,
    check_enumerable,
    code_spec,
    codeword_matrix,
    coefficient_index,
    encode,
    enumerate_codewords,
    format_matrix,
    get_code,
    gf_rank,
    hamming8_generator,
    hamming_distance,
    iter_codewords,
    label,
    min_distance,
    parse_matrix,
    puncture,
    qr48_generator,
    quadratic_residue_generator,
    weight_distribution,
)


def test_golay24_parameters(golay24):
    assert (golay24.length, golay24.k, golay24.size) == (24, 12, 4096)
    assert weight_distribution(golay24) == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
    assert str(code_spec(golay24)) == "[24,12,8]"


def test_golay12_parameters(golay12):
    assert (golay12.length, golay12.k, golay12.size) == (12, 6, 729)
    assert weight_distribution(golay12) == {0: 1, 6: 264, 9: 440, 12: 24}
    assert str(code_spec(golay12)) == "[12,6,6]"


def test_golay24_pairwise_distances(golay24):
    words = enumerate_codewords(golay24)
    base = words[5]
    distances = {hamming_distance(base, c) for c in words}
    assert distances == {0, 8, 12, 16, 24}
    assert sum(1 for c in words if hamming_distance(base, c) == 12) == 2576


def test_labels_follow_coefficient_order(golay24):
    assert encode((0,) * 12, golay24).label == 1
    assert encode((0,) * 11 + (1,), golay24).label == 2
    assert encode((1,) + (0,) * 11, golay24).label == 2049
    top = encode((1,) * 12, golay24)
    assert top.label == 4096
    assert top.digits == (1,) * 24
    assert label((1, 0, 1) + (0,) * 9) == coefficient_index((1, 0, 1) + (0,) * 9, 2) + 1 == 2561


def test_encode_adds_rows(golay24):
    e1 = encode((1,) + (0,) * 11, golay24)
    e2 = encode((0, 1) + (0,) * 10, golay24)
    assert e1.digits == golay24.row(0)
    both = encode((1, 1) + (0,) * 10, golay24)
    assert both.digits == tuple(a ^ b for a, b in zip(golay24.row(0), golay24.row(1)))
    assert hamming_distance(e1, e2) == 8
    assert hamming_distance(e1, encode((0,) * 12, golay24)) == e1.weight


@pytest.mark.parametrize("name", ["golay24", "golay12"])
def test_encode_is_injective(name):
    G = get_code(name)
    assert len(np.unique(codeword_matrix(G), axis=0)) == G.size


def test_ternary_code_is_closed_under_addition(golay12):
    words = codeword_matrix(golay12).astype(np.int64)
    keys = words @ (3 ** np.arange(12, dtype=np.int64))
    sums = (words[:, None, :] + words[None, :, :]) % 3
    assert np.isin(sums @ (3 ** np.arange(12, dtype=np.int64)), keys).all()


def test_binary_code_is_closed_under_addition(golay24):
    words = codeword_matrix(golay24).astype(np.int64)
    powers = 2 ** np.arange(24, dtype=np.int64)
    keys = words @ powers
    rng = np.random.default_rng(24)
    for i in rng.integers(0, len(words), 64):
        assert np.isin(((words + words[i]) % 2) @ powers, keys).all()


def test_complement_labels(golay24):
    by_digits = {c.digits: c.label for c in iter_codewords(golay24)}
    for digits, n in by_digits.items():
        complement = tuple(1 - d for d in digits)
        assert by_digits[complement] == 4097 - n


def test_iter_and_enumerate_agree():
    G = hamming8_generator()
    words = enumerate_codewords(G)
    assert words == list(iter_codewords(G))
    assert len(words) == 16
    assert all(c.label is None for c in words)


def test_hamming8():
    G = get_code("hamming8")
    assert str(code_spec(G)) == "[8,4,4]"
    assert weight_distribution(G) == {0: 1, 4: 14, 8: 1}


def test_puncture(golay24, golay12):
    p24 = puncture(golay24, 23)
    assert p24.name == "golay24-p23"
    assert str(code_spec(p24)) == "[23,12,7]"
    assert str(code_spec(puncture(golay12, 11))) == "[11,6,5]"
    with pytest.raises(CodeInputError):
        puncture(golay24, 24)


def test_encode_rejects_bad_coefficients(golay12):
    with pytest.raises(CodeInputError):
        encode((0, 1, 2), golay12)
    with pytest.raises(CodeInputError):
        encode((0, 0, 0, 0, 0, 3), golay12)


def test_generator_validation():
    with pytest.raises(CodeInputError):
        GeneratorMatrix(5, np.eye(2, dtype=int))
    with pytest.raises(CodeInputError):
        GeneratorMatrix(2, np.array([[1, 1, 0], [1, 1, 0]]))
    with pytest.raises(CodeInputError):
        GeneratorMatrix(2, np.array([[1, 2, 0]]))
    assert gf_rank(np.array([[1, 2, 0], [2, 1, 0]]), 3) == 1


def test_matrix_round_trip(golay24, golay12):
    for G in (golay24, golay12):
        back = parse_matrix(format_matrix(G), name=G.name)
        assert back.field_order == G.field_order
        assert np.array_equal(back.rows, G.rows)


def test_matrix_accepts_minus_one():
    G = parse_matrix("field 3 length 3 dim 1\n1 -1 0\n")
    assert G.row(0) == (1, 2, 0)


@pytest.mark.parametrize("text", [
    "",
    "field 2 length 3\n1 0 1\n",
    "field 2 length 3 dim 2\n1 0 1\n",
    "field 2 length 3 dim 1\n1 0\n",
    "field 2 length 2 dim 1\n1 x\n",
])
def test_matrix_parse_errors(text):
    with pytest.raises(CodeInputError):
        parse_matrix(text)


def test_unknown_code():
    with pytest.raises(CodeInputError):
        get_code("golay23")


def test_enumeration_limits():
    G = qr48_generator()
    with pytest.raises(EnumerationLimitError):
        check_enumerable(G, limit=2 ** 20)
    with pytest.raises(EnumerationLimitError):
        enumerate_codewords(G)


def test_quadratic_residue_needs_prime_7_mod_8():
    with pytest.raises(CodeInputError):
        quadratic_residue_generator(41)
    with pytest.raises(CodeInputError):
        quadratic_residue_generator(55)
    assert str(code_spec(quadratic_residue_generator(23))) == "[24,12,8]"


@pytest.mark.slow
def test_qr48_parameters():
    G = qr48_generator()
    assert (G.length, G.k) == (48, 24)
    assert min_distance(G) == 12
    assert weight_distribution(G) == {
        0: 1, 12: 17296, 16: 535095, 20: 3995376, 24: 7681680,
        28: 3995376, 32: 535095, 36: 17296, 48: 1,
    }
