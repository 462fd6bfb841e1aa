"""
Linear codes over GF(2) and GF(3).

Holds the two Golay generator matrices, the extended quadratic-residue
[48,24,12] code and the extended Hamming [8,4,4] code, plus codeword
enumeration, labels, weights and puncturing.

Binary codes of length <= 64 are scanned as packed 64-bit words
(digit 0 is the most significant bit); everything else goes through
blocks of coefficient vectors multiplied into the generator mod q.
"""
import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import CodeInputError, EnumerationLimitError

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1 << 16

# Identity block split off at the left, as printed.
GOLAY24_ROWS = (
    "100000000000" "101000111011",
    "010000000000" "110100011101",
    "001000000000" "011010001111",
    "000100000000" "101101000111",
    "000010000000" "110110100011",
    "000001000000" "111011010001",
    "000000100000" "011101101001",
    "000000010000" "001110110101",
    "000000001000" "000111011011",
    "000000000100" "100011101101",
    "000000000010" "010001110111",
    "000000000001" "111111111110",
)

# -1 stored as digit 2.
GOLAY12_ROWS = (
    "100000" "011111",
    "010000" "201221",
    "001000" "210122",
    "000100" "221012",
    "000010" "222101",
    "000001" "212210",
)

HAMMING8_ROWS = (
    "10000111",
    "01001011",
    "00101101",
    "00011110",
)


# ─────────────────── GF(q) linear algebra ───────────────────

def gf_row_reduce(rows: np.ndarray, q: int) -> Tuple[np.ndarray, int]:
    """Reduced row echelon form over GF(q). Returns (nonzero rows, rank)."""
    A = np.array(rows, dtype=np.int64) % q
    m, n = A.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        pivots = np.nonzero(A[rank:, col])[0]
        if pivots.size == 0:
            continue
        p = rank + int(pivots[0])
        if p != rank:
            A[[rank, p]] = A[[p, rank]]
        inv = pow(int(A[rank, col]), -1, q)
        A[rank] = (A[rank] * inv) % q
        for r in np.nonzero(A[:, col])[0]:
            if r != rank:
                A[r] = (A[r] - A[r, col] * A[rank]) % q
        rank += 1
    return A[:rank].copy(), rank


def gf_rank(rows: np.ndarray, q: int) -> int:
    return gf_row_reduce(rows, q)[1]


# ─────────────────── domain types ───────────────────

@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """k x N generator over GF(field_order); rows are linearly independent."""
    field_order: int
    rows: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        if self.field_order not in (2, 3):
            raise CodeInputError(f"Unsupported field order {self.field_order} (GF(2) or GF(3) only)")
        try:
            rows = np.array(self.rows, dtype=np.int64)
        except (TypeError, ValueError) as e:
            raise CodeInputError(f"Generator rows are not a digit matrix: {e}")
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise CodeInputError("Generator must be a non-empty k x N matrix")
        k, n = rows.shape
        if k > n:
            raise CodeInputError(f"Dimension {k} exceeds length {n}")
        if rows.min() < 0 or rows.max() >= self.field_order:
            raise CodeInputError(f"Digits must lie in 0..{self.field_order - 1}")
        rank = gf_rank(rows, self.field_order)
        if rank != k:
            raise CodeInputError(f"Generator rows are dependent over GF({self.field_order}): rank {rank} < {k}")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def k(self) -> int:
        return int(self.rows.shape[0])

    @property
    def length(self) -> int:
        return int(self.rows.shape[1])

    @property
    def size(self) -> int:
        """Number of codewords, q^k."""
        return self.field_order ** self.k

    def row(self, i: int) -> Tuple[int, ...]:
        return tuple(int(d) for d in self.rows[i])


@dataclass(frozen=True)
class Codeword:
    digits: Tuple[int, ...]
    coeffs: Tuple[int, ...]
    label: Optional[int] = None

    @property
    def weight(self) -> int:
        return sum(1 for d in self.digits if d)


@dataclass(frozen=True)
class CodeSpec:
    length: int
    dimension: int
    min_distance: int
    field_order: int

    def __str__(self) -> str:
        return f"[{self.length},{self.dimension},{self.min_distance}]"


# ─────────────────── built-in generators ───────────────────

def _from_strings(rows: Sequence[str], q: int, name: str) -> GeneratorMatrix:
    return GeneratorMatrix(q, np.array([[int(c) for c in r] for r in rows]), name=name)


def golay_binary_generator() -> GeneratorMatrix:
    return _from_strings(GOLAY24_ROWS, 2, "golay24")


def golay_ternary_generator() -> GeneratorMatrix:
    return _from_strings(GOLAY12_ROWS, 3, "golay12")


def hamming8_generator() -> GeneratorMatrix:
    return _from_strings(HAMMING8_ROWS, 2, "hamming8")


def quadratic_residue_generator(p: int = 47) -> GeneratorMatrix:
    """
    Extended binary quadratic-residue code of length p+1.

    The cyclic shifts of the residue indicator span a [p,(p+1)/2] code
    (p = 7 mod 8); each shift gets an overall parity digit and the
    spanning set is row-reduced down to an independent basis.
    """
    if p < 7 or p % 8 != 7 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise CodeInputError(f"Need a prime p = 7 mod 8, got {p}")
    residues = {(i * i) % p for i in range(1, p)}
    shifts = np.zeros((p, p + 1), dtype=np.int64)
    for u in range(p):
        for r in residues:
            shifts[u, (u + r) % p] = 1
    shifts[:, p] = shifts[:, :p].sum(axis=1) % 2
    rows, rank = gf_row_reduce(shifts, 2)
    if rank != (p + 1) // 2:
        raise CodeInputError(f"Residue shifts for p={p} have rank {rank}, expected {(p + 1) // 2}")
    return GeneratorMatrix(2, rows, name=f"qr{p + 1}")


def qr48_generator() -> GeneratorMatrix:
    return quadratic_residue_generator(47)


NAMED_CODES: Dict[str, Callable[[], GeneratorMatrix]] = {
    "golay24": golay_binary_generator,
    "golay12": golay_ternary_generator,
    "qr48": qr48_generator,
    "hamming8": hamming8_generator,
}


def get_code(name: str) -> GeneratorMatrix:
    try:
        return NAMED_CODES[name]()
    except KeyError:
        raise CodeInputError(f"Unknown code {name!r} (known: {', '.join(sorted(NAMED_CODES))})")


# ─────────────────── encoding & labels ───────────────────

def _check_coeffs(coeffs: Sequence[int], G: GeneratorMatrix) -> np.ndarray:
    a = np.asarray(coeffs, dtype=np.int64)
    if a.ndim != 1 or a.size != G.k:
        raise CodeInputError(f"Expected {G.k} coefficients, got {a.size}")
    if a.size and (a.min() < 0 or a.max() >= G.field_order):
        raise CodeInputError(f"Coefficients must lie in 0..{G.field_order - 1}")
    return a


def coefficient_index(coeffs: Sequence[int], q: int) -> int:
    """Position of a coefficient vector in ascending order (first entry most significant)."""
    index = 0
    for a in coeffs:
        index = index * q + int(a)
    return index


def label(coeffs: Sequence[int]) -> int:
    """Label of a binary Golay codeword: one more than its 12-bit coefficient integer."""
    if len(coeffs) != 12:
        raise CodeInputError(f"Labels are defined for 12 binary coefficients, got {len(coeffs)}")
    if any(a not in (0, 1) for a in coeffs):
        raise CodeInputError("Labels need binary coefficients")
    return coefficient_index(coeffs, 2) + 1


def _has_labels(G: GeneratorMatrix) -> bool:
    return G.field_order == 2 and G.k == 12


def encode(coeffs: Sequence[int], G: GeneratorMatrix) -> Codeword:
    a = _check_coeffs(coeffs, G)
    digits = (a @ G.rows) % G.field_order
    coeff_tuple = tuple(int(x) for x in a)
    return Codeword(
        digits=tuple(int(d) for d in digits),
        coeffs=coeff_tuple,
        label=label(coeff_tuple) if _has_labels(G) else None,
    )


# ─────────────────── enumeration ───────────────────

def check_enumerable(G: GeneratorMatrix, limit: Optional[int] = None) -> int:
    limit = limit or settings.ENUMERATION_LIMIT
    if G.size > limit:
        raise EnumerationLimitError(
            f"{G.name}: {G.field_order}^{G.k} = {G.size} codewords exceeds the enumeration limit {limit}"
        )
    return G.size


def coefficient_block(start: int, stop: int, k: int, q: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % q


def iter_digit_blocks(G: GeneratorMatrix, block: int = BLOCK_SIZE) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (coeffs, digits) blocks of all codewords in ascending coefficient order."""
    total = check_enumerable(G)
    for start in range(0, total, block):
        coeffs = coefficient_block(start, min(total, start + block), G.k, G.field_order)
        yield coeffs, (coeffs @ G.rows) % G.field_order


def iter_codewords(G: GeneratorMatrix) -> Iterator[Codeword]:
    labelled = _has_labels(G)
    index = 0
    for coeffs, digits in iter_digit_blocks(G):
        for a, d in zip(coeffs.tolist(), digits.tolist()):
            index += 1
            yield Codeword(tuple(d), tuple(a), index if labelled else None)


def enumerate_codewords(G: GeneratorMatrix) -> List[Codeword]:
    """All q^k codewords in ascending coefficient order (ascending label for binary Golay)."""
    check_enumerable(G)
    if G.size > settings.STREAM_THRESHOLD:
        raise EnumerationLimitError(
            f"{G.name}: {G.size} codewords exceeds the materialization threshold "
            f"{settings.STREAM_THRESHOLD}; use iter_codewords"
        )
    return list(iter_codewords(G))


def codeword_matrix(G: GeneratorMatrix) -> np.ndarray:
    """q^k x N digit matrix in ascending coefficient order."""
    check_enumerable(G)
    if G.size > settings.STREAM_THRESHOLD:
        raise EnumerationLimitError(f"{G.name}: {G.size} codewords will not be materialized")
    return (coefficient_block(0, G.size, G.k, G.field_order) @ G.rows) % G.field_order


# ─────────────────── packed binary words ───────────────────

def pack_rows(digits: np.ndarray) -> np.ndarray:
    """Pack binary digit rows (length <= 64) into uint64, digit 0 most significant."""
    digits = np.asarray(digits, dtype=np.uint64)
    n = digits.shape[-1]
    if n > 64:
        raise CodeInputError(f"Cannot pack words of length {n} > 64")
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    return np.bitwise_or.reduce(digits << shifts, axis=-1)


def span_table(packed_rows: np.ndarray) -> np.ndarray:
    """All 2^m sums of m packed rows, indexed with the first row most significant."""
    table = np.zeros(1, dtype=np.uint64)
    for r in packed_rows[::-1]:
        table = np.concatenate([table, table ^ r])
    return table


def binary_split_tables(G: GeneratorMatrix) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    (high, low, low_bits) tables so that the codeword with coefficient
    index c is high[c >> low_bits] ^ low[c & (2^low_bits - 1)].
    """
    packed = pack_rows(G.rows)
    low_bits = G.k // 2
    return span_table(packed[: G.k - low_bits]), span_table(packed[G.k - low_bits:]), low_bits


def _packable(G: GeneratorMatrix) -> bool:
    return G.field_order == 2 and G.length <= 64


# ─────────────────── distances & weights ───────────────────

def hamming_distance(c1: Codeword, c2: Codeword) -> int:
    if len(c1.digits) != len(c2.digits):
        raise CodeInputError(f"Length mismatch: {len(c1.digits)} vs {len(c2.digits)}")
    return sum(1 for a, b in zip(c1.digits, c2.digits) if a != b)


def _weight_histogram(G: GeneratorMatrix) -> np.ndarray:
    check_enumerable(G)
    hist = np.zeros(G.length + 1, dtype=np.int64)
    if _packable(G):
        high, low, _ = binary_split_tables(G)
        step = max(1, (1 << 18) // low.size)
        for i in range(0, high.size, step):
            block = high[i:i + step, None] ^ low[None, :]
            hist += np.bincount(np.bitwise_count(block).ravel(), minlength=G.length + 1)
        return hist
    for _, digits in iter_digit_blocks(G):
        hist += np.bincount(np.count_nonzero(digits, axis=1), minlength=G.length + 1)
    return hist


def weight_distribution(G: GeneratorMatrix) -> Dict[int, int]:
    start = time.monotonic()
    hist = _weight_histogram(G)
    logger.info(f"Weight scan of {G.name} ({G.size} codewords) in {time.monotonic() - start:.2f}s")
    return {w: int(c) for w, c in enumerate(hist) if c}


def min_distance(G: GeneratorMatrix) -> int:
    return min(w for w in weight_distribution(G) if w > 0)


def code_spec(G: GeneratorMatrix) -> CodeSpec:
    return CodeSpec(G.length, G.k, min_distance(G), G.field_order)


def puncture(G: GeneratorMatrix, position: int) -> GeneratorMatrix:
    if not 0 <= position < G.length:
        raise CodeInputError(f"Puncture position {position} outside 0..{G.length - 1}")
    rows = np.delete(np.array(G.rows), position, axis=1)
    return GeneratorMatrix(G.field_order, rows, name=f"{G.name}-p{position}")


# ─────────────────── matrix text format ───────────────────

def render_digit(d: int, q: int) -> str:
    return "-1" if q == 3 and d == 2 else str(d)


def format_matrix(G: GeneratorMatrix) -> str:
    lines = [f"field {G.field_order} length {G.length} dim {G.k}"]
    lines += [" ".join(str(int(d)) for d in row) for row in G.rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, name: str = "custom") -> GeneratorMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CodeInputError("Empty matrix file")
    header = lines[0].split()
    if len(header) != 6 or header[0::2] != ["field", "length", "dim"]:
        raise CodeInputError(f"Bad header {lines[0]!r}; expected 'field <q> length <N> dim <k>'")
    try:
        q, n, k = (int(x) for x in header[1::2])
    except ValueError:
        raise CodeInputError(f"Non-integer header values in {lines[0]!r}")
    body = lines[1:]
    if len(body) != k:
        raise CodeInputError(f"Header announces {k} rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body, start=1):
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise CodeInputError(f"Row {i}: non-integer digit")
        if len(row) != n:
            raise CodeInputError(f"Row {i}: expected {n} digits, found {len(row)}")
        if q == 3:
            row = [2 if d == -1 else d for d in row]
        rows.append(row)
    return GeneratorMatrix(q, np.array(rows, dtype=np.int64), name=name)
