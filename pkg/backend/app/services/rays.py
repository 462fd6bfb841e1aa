"""
Codewords as projective rays.

Binary digits map 0 -> +1, 1 -> -1; ternary digits map 0 -> 0, 1 -> +1,
2 -> -1. A ray is stored as its canonical sign representative (first
nonzero entry +1) and labeled 1..R in ascending order of the smallest
coefficient index among its source codewords, which for the binary
Golay code is exactly the codeword label n <= 2048.

Orthogonality is exact integer arithmetic. Adjacency is kept as one
Python int bitset per ray, bit i standing for the i-th ray of the system.
"""
import logging
import time
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import EnumerationLimitError, RayInputError
from app.services.codes import Codeword, GeneratorMatrix, codeword_matrix, coefficient_index

logger = logging.getLogger(__name__)

TERNARY_SIGNS = (0, 1, -1)


@dataclass(frozen=True)
class Ray:
    vector: Tuple[int, ...]
    label: int
    source_code: str
    # First source codeword in coefficient order; always a real codeword.
    codeword: Tuple[int, ...] = ()
    weight: int = 0

    @property
    def dimension(self) -> int:
        return len(self.vector)


def canonical_vector(vector: Sequence[int]) -> Tuple[int, ...]:
    """Sign representative with first nonzero entry +1."""
    for x in vector:
        if x:
            return tuple(int(v) for v in vector) if x > 0 else tuple(-int(v) for v in vector)
    return tuple(int(v) for v in vector)


def _canonical_rows(vectors: np.ndarray) -> np.ndarray:
    nonzero = vectors != 0
    first = np.argmax(nonzero, axis=1)
    signs = np.sign(vectors[np.arange(vectors.shape[0]), first])
    signs[signs == 0] = 1
    return vectors * signs[:, None]


def binary_codeword_to_ray(c: Codeword, source_code: str = "golay24", label: Optional[int] = None) -> Ray:
    """
    Ray of a binary codeword. Labelled Golay codewords n and 4097 - n are
    complements and give the same Ray, stored with the member n <= 2048.
    """
    if any(d not in (0, 1) for d in c.digits):
        raise RayInputError("Binary ray mapping needs a binary codeword")
    digits = tuple(c.digits)
    if c.label is not None and c.label > 2048:
        digits = tuple(1 - d for d in digits)
    if label is None:
        if c.label is not None:
            label = min(c.label, 4097 - c.label)
        else:
            label = coefficient_index(c.coeffs, 2) + 1
    return Ray(
        vector=canonical_vector([1 - 2 * d for d in digits]),
        label=label,
        source_code=source_code,
        codeword=digits,
        weight=sum(digits),
    )


def ternary_ray_label(coeffs: Sequence[int]) -> int:
    """
    Label 1..(3^k - 1)/2 of the ray of a nonzero ternary codeword: the rank
    of its coefficient pair {a, 2a} by the member with leading coefficient 1.
    """
    lead = next((i for i, a in enumerate(coeffs) if a % 3), None)
    if lead is None:
        raise RayInputError("The zero coefficient vector has no ray")
    a = [int(x) % 3 for x in coeffs]
    if a[lead] == 2:
        a = [(2 * x) % 3 for x in a]
    block = 3 ** (len(a) - 1 - lead)
    return (block - 1) // 2 + coefficient_index(a, 3) - block + 1


def ternary_codeword_to_ray(c: Codeword, source_code: str = "golay12", label: Optional[int] = None) -> Ray:
    """
    Ray of a nonzero ternary codeword. A codeword and its negation give the
    same Ray, stored with the member whose leading coefficient is 1.
    """
    if any(d not in (0, 1, 2) for d in c.digits):
        raise RayInputError("Ternary ray mapping needs digits in 0..2")
    if not any(c.digits):
        raise RayInputError("The zero codeword has no ray")
    digits = tuple(c.digits)
    lead = next((a for a in c.coeffs if a), 1)
    if lead == 2:
        digits = tuple((3 - d) % 3 for d in digits)
    if label is None:
        label = ternary_ray_label(c.coeffs)
    return Ray(
        vector=canonical_vector([TERNARY_SIGNS[d] for d in digits]),
        label=label,
        source_code=source_code,
        codeword=digits,
        weight=sum(1 for d in digits if d),
    )


def inner_product(r1: Ray, r2: Ray) -> int:
    if r1.dimension != r2.dimension:
        raise RayInputError(f"Dimension mismatch: {r1.dimension} vs {r2.dimension}")
    return sum(a * b for a, b in zip(r1.vector, r2.vector))


def _bitsets(adjacency: np.ndarray) -> List[int]:
    packed = np.packbits(adjacency, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def iter_bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RaySystem:
    """Immutable set of rays (sorted by label) with its orthogonality relation."""

    def __init__(
        self,
        rays: Sequence[Ray],
        dimension: int,
        system_id: str,
        field_order: int,
        effective_dimension: Optional[int] = None,
    ):
        self._rays: Tuple[Ray, ...] = tuple(sorted(rays, key=lambda r: r.label))
        self._index: Dict[int, int] = {r.label: i for i, r in enumerate(self._rays)}
        if len(self._index) != len(self._rays):
            raise RayInputError(f"{system_id}: duplicate ray labels")
        self.dimension = dimension
        self.effective_dimension = dimension if effective_dimension is None else effective_dimension
        self.system_id = system_id
        self.field_order = field_order
        if self._rays:
            vectors = np.array([r.vector for r in self._rays], dtype=np.int64)
            orthogonal = (vectors @ vectors.T) == 0
            np.fill_diagonal(orthogonal, False)
            self._adjacency: Tuple[int, ...] = tuple(_bitsets(orthogonal))
        else:
            self._adjacency = ()
        self._by_vector: Optional[Dict[Tuple[int, ...], int]] = None

    # ─────────────────── lookup ───────────────────

    def __len__(self) -> int:
        return len(self._rays)

    @property
    def rays(self) -> Tuple[Ray, ...]:
        return self._rays

    @property
    def labels(self) -> List[int]:
        return [r.label for r in self._rays]

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adjacency

    def __contains__(self, label: int) -> bool:
        return label in self._index

    def index(self, label: int) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise RayInputError(f"{self.system_id}: unknown ray label {label}")

    def ray(self, label: int) -> Ray:
        return self._rays[self.index(label)]

    def label_for_vector(self, vector: Sequence[int]) -> int:
        if self._by_vector is None:
            self._by_vector = {r.vector: r.label for r in self._rays}
        try:
            return self._by_vector[canonical_vector(vector)]
        except KeyError:
            raise RayInputError(f"{self.system_id}: vector is not a ray of this system")

    def labels_of(self, mask: int) -> List[int]:
        return [self._rays[i].label for i in iter_bits(mask)]

    # ─────────────────── orthogonality ───────────────────

    def neighbor_mask(self, label: int) -> int:
        return self._adjacency[self.index(label)]

    def is_orthogonal(self, a: int, b: int) -> bool:
        return bool(self._adjacency[self.index(a)] >> self.index(b) & 1)

    def degree(self, label: int) -> int:
        return self.neighbor_mask(label).bit_count()

    def orthogonal_pair_count(self) -> int:
        return sum(m.bit_count() for m in self._adjacency) // 2

    def degree_histogram(self) -> Dict[int, int]:
        return dict(sorted(Counter(m.bit_count() for m in self._adjacency).items()))

    def weight_counts(self) -> Dict[int, int]:
        return dict(sorted(Counter(r.weight for r in self._rays).items()))

    def subsystem(self, labels: Iterable[int], system_id: str, effective_dimension: Optional[int] = None) -> "RaySystem":
        rays = [self.ray(lab) for lab in labels]
        return RaySystem(
            rays,
            self.dimension,
            system_id,
            self.field_order,
            self.effective_dimension if effective_dimension is None else effective_dimension,
        )


def orthogonality_degree(rs: RaySystem, label: int) -> int:
    return rs.degree(label)


def build_ray_system(G: GeneratorMatrix, system_id: Optional[str] = None) -> RaySystem:
    """Deduplicated canonical rays of all nonzero codewords, with adjacency."""
    expected_rays = G.size // 2
    if expected_rays > settings.MAX_RAY_SYSTEM:
        raise EnumerationLimitError(
            f"{G.name}: about {expected_rays} rays exceeds MAX_RAY_SYSTEM={settings.MAX_RAY_SYSTEM}"
        )
    start = time.monotonic()
    digits = codeword_matrix(G)
    if G.field_order == 2:
        vectors = 1 - 2 * digits
    else:
        vectors = np.choose(digits, TERNARY_SIGNS)
        digits, vectors = digits[1:], vectors[1:]
    canon = _canonical_rows(vectors)
    _, first = np.unique(canon, axis=0, return_index=True)
    first.sort()
    rays = [
        Ray(
            vector=tuple(int(x) for x in canon[idx]),
            label=label,
            source_code=G.name,
            codeword=tuple(int(d) for d in digits[idx]),
            weight=int(np.count_nonzero(digits[idx])),
        )
        for label, idx in enumerate(first.tolist(), start=1)
    ]
    rs = RaySystem(rays, G.length, system_id or G.name, G.field_order)
    logger.info(
        f"Ray system {rs.system_id}: {len(rs)} rays, {rs.orthogonal_pair_count()} orthogonal pairs "
        f"in {time.monotonic() - start:.2f}s"
    )
    return rs
