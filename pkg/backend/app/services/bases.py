"""
Basis systems over a RaySystem.

Two producers, plus sub-systems to feed them:
  - translation of a seed basis by every ray (binary codes)
  - exhaustive enumeration of all full-size cliques of the orthogonality graph
  - restriction to the rays orthogonal to a set of anchors, and weight filtering

Every basis handed out is re-checked by verify_basis, which works on the
integer ray vectors and never looks at the adjacency bitsets.
"""
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import (
    BasisError,
    BudgetExhaustedError,
    ExpensiveOperationError,
    InconsistencyError,
    RayInputError,
)
from app.services.codes import GeneratorMatrix, golay_binary_generator
from app.services.rays import RaySystem, inner_product, iter_bits

logger = logging.getLogger(__name__)

# Seed basis of the golay24 ray system; first row of its 2048 x 24 translation table.
GOLAY24_SEED = (
    1, 127, 128, 136, 177, 414, 586, 788, 866, 911, 1005, 1011,
    1225, 1323, 1324, 1366, 1491, 1510, 1589, 1607, 1704, 1722, 1756, 1821,
)

Ordering = Literal["canonical", "translation-table"]
SeedStatus = Literal["found", "exhausted", "absent"]


@dataclass(frozen=True, order=True)
class Basis:
    ray_labels: Tuple[int, ...]

    def __post_init__(self):
        labels = tuple(sorted(int(x) for x in self.ray_labels))
        if len(set(labels)) != len(labels):
            raise BasisError(f"Repeated ray in basis {labels}")
        object.__setattr__(self, "ray_labels", labels)

    def __len__(self) -> int:
        return len(self.ray_labels)

    def __iter__(self):
        return iter(self.ray_labels)


class BasisSystem:
    """
    Bases plus occurrence bookkeeping. ray_system may be None for systems
    loaded from a bases document (labels only, no vectors).
    """

    def __init__(
        self,
        bases: Iterable[Basis],
        ray_system: Optional[RaySystem] = None,
        ordering: Ordering = "canonical",
        matrix: Optional[Sequence[Sequence[int]]] = None,
        system_id: Optional[str] = None,
        basis_size: Optional[int] = None,
    ):
        self.bases: Tuple[Basis, ...] = tuple(bases)
        self.ray_system = ray_system
        self.ordering = ordering
        self.matrix = tuple(tuple(row) for row in matrix) if matrix is not None else None
        self.system_id = system_id or (ray_system.system_id if ray_system else "bases")
        if basis_size is None:
            if ray_system is not None:
                basis_size = ray_system.effective_dimension
            elif self.bases:
                basis_size = len(self.bases[0])
            else:
                basis_size = 0
        self.basis_size = basis_size

        counts = Counter(lab for b in self.bases for lab in b)
        universe = ray_system.labels if ray_system is not None else sorted(counts)
        unknown = set(counts) - set(universe)
        if unknown:
            raise BasisError(f"{self.system_id}: bases use unknown rays {sorted(unknown)[:5]}")
        self.occurrence: Dict[int, int] = {lab: counts.get(lab, 0) for lab in universe}

        bad = [b for b in self.bases if len(b) != self.basis_size]
        if bad:
            raise BasisError(f"{self.system_id}: basis {bad[0].ray_labels} does not have {self.basis_size} rays")
        if sum(self.occurrence.values()) != len(self.bases) * self.basis_size:
            raise InconsistencyError(f"{self.system_id}: occurrence total breaks the double count")

    def __len__(self) -> int:
        return len(self.bases)

    @property
    def ray_labels(self) -> List[int]:
        return list(self.occurrence)


# ─────────────────── independent checker ───────────────────

def verify_basis(b: Basis, rs: RaySystem, size: Optional[int] = None) -> None:
    """Raise BasisError unless b is `size` pairwise orthogonal rays of rs."""
    size = rs.effective_dimension if size is None else size
    if len(b) != size:
        raise BasisError(f"Basis has {len(b)} rays, expected {size}")
    try:
        rays = [rs.ray(lab) for lab in b]
    except RayInputError as e:
        raise BasisError(str(e))
    for i, r1 in enumerate(rays):
        for r2 in rays[i + 1:]:
            ip = inner_product(r1, r2)
            if ip != 0:
                raise BasisError(f"Rays {r1.label} and {r2.label} have inner product {ip}")


def is_valid_basis(b: Basis, rs: RaySystem) -> bool:
    try:
        verify_basis(b, rs)
    except BasisError:
        return False
    return True


def verify_system(bs: BasisSystem) -> None:
    if bs.ray_system is None:
        logger.warning(f"{bs.system_id}: no ray vectors attached, skipping basis verification")
        return
    for b in bs.bases:
        verify_basis(b, bs.ray_system, bs.basis_size)
    if len(set(bs.bases)) != len(bs.bases) and bs.ordering == "canonical":
        raise InconsistencyError(f"{bs.system_id}: duplicate bases")


# ─────────────────── seed search ───────────────────

@dataclass
class SeedSearchResult:
    basis: Optional[Basis]
    status: SeedStatus
    nodes: int


class _OutOfNodes(Exception):
    pass


def _color_sort(P: int, adj: Sequence[int]) -> Tuple[List[int], List[int]]:
    order: List[int] = []
    colors: List[int] = []
    color = 0
    work = P
    while work:
        color += 1
        Q = work
        used = 0
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            order.append(v)
            colors.append(color)
            used |= low
            Q &= ~low
            Q &= ~adj[v]
        work &= ~used
    return order, colors


class _SeedSearch:
    def __init__(self, adj: Sequence[int], target: int, budget: int):
        self.adj = adj
        self.target = target
        self.budget = budget
        self.nodes = 0

    def run(self, P: int) -> Optional[int]:
        return self._expand(0, 0, P)

    def _expand(self, size: int, R: int, P: int) -> Optional[int]:
        order, colors = _color_sort(P, self.adj)
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] < self.target:
                return None
            v = order[i]
            vbit = 1 << v
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfNodes
            if size + 1 == self.target:
                return R | vbit
            P2 = P & self.adj[v]
            if P2:
                found = self._expand(size + 1, R | vbit, P2)
                if found is not None:
                    return found
            P &= ~vbit
        return None


def _relabel(rs: RaySystem, order: Sequence[int]) -> List[int]:
    """Adjacency bitsets re-indexed so that position p holds ray order[p]."""
    position = {old: new for new, old in enumerate(order)}
    adj = []
    for old in order:
        mask = 0
        for u in iter_bits(rs.adjacency[old]):
            mask |= 1 << position[u]
        adj.append(mask)
    return adj


def find_seed_basis(rs: RaySystem, budget: Optional[int] = None) -> SeedSearchResult:
    """
    Backtracking search for one clique of size rs.effective_dimension.
    Rays are tried in descending degree (ties by label) with a greedy
    coloring bound. Deterministic for a fixed budget.
    """
    budget = budget or settings.CLIQUE_BUDGET
    target = rs.effective_dimension
    if target <= 0 or len(rs) < target or (target > 1 and rs.orthogonal_pair_count() == 0):
        return SeedSearchResult(None, "absent", 0)
    order = sorted(range(len(rs)), key=lambda i: (-rs.adjacency[i].bit_count(), rs.rays[i].label))
    adj = _relabel(rs, order)
    search = _SeedSearch(adj, target, budget)
    start = time.monotonic()
    try:
        found = search.run((1 << len(order)) - 1)
    except _OutOfNodes:
        logger.warning(f"Seed search on {rs.system_id} exhausted {budget} nodes")
        return SeedSearchResult(None, "exhausted", search.nodes - 1)
    elapsed = time.monotonic() - start
    if found is None:
        logger.info(f"Seed search on {rs.system_id}: no {target}-clique ({search.nodes} nodes, {elapsed:.2f}s)")
        return SeedSearchResult(None, "absent", search.nodes)
    basis = Basis(tuple(rs.rays[order[p]].label for p in iter_bits(found)))
    verify_basis(basis, rs)
    logger.info(f"Seed basis on {rs.system_id} after {search.nodes} nodes ({elapsed:.2f}s)")
    return SeedSearchResult(basis, "found", search.nodes)


def known_seed(G: GeneratorMatrix) -> Optional[Basis]:
    """The reference seed, if G is exactly the binary Golay generator."""
    if G.field_order == 2 and np.array_equal(G.rows, golay_binary_generator().rows):
        return Basis(GOLAY24_SEED)
    return None


# ─────────────────── translation ───────────────────

def _translate_label(label: int, t: int, rs: RaySystem) -> int:
    a = rs.ray(label).codeword
    b = rs.ray(t).codeword
    return rs.label_for_vector([1 - 2 * (x ^ y) for x, y in zip(a, b)])


def _translated_row(seed_labels: Sequence[int], t: int, rs: RaySystem) -> List[int]:
    if rs.field_order != 2:
        raise RayInputError(f"{rs.system_id}: translation needs a binary ray system")
    return [_translate_label(lab, t, rs) for lab in seed_labels]


def translate_basis(b: Basis, t: int, rs: RaySystem) -> Basis:
    """Add the codeword of ray t to the codeword of every ray of b."""
    return Basis(tuple(_translated_row(b.ray_labels, t, rs)))


def generate_translated_system(seed: Basis, rs: RaySystem) -> BasisSystem:
    """One translated basis per ray label, in label order; columns follow the seed's sorted order."""
    try:
        verify_basis(seed, rs)
    except BasisError as e:
        raise BasisError(f"Invalid seed basis: {e}")
    start = time.monotonic()
    matrix = [_translated_row(seed.ray_labels, t, rs) for t in rs.labels]
    universe = sorted(rs.labels)
    for col in range(len(seed)):
        if sorted(row[col] for row in matrix) != universe:
            raise InconsistencyError(f"Translation column {col} is not a permutation of the rays")
    bs = BasisSystem(
        (Basis(tuple(row)) for row in matrix),
        ray_system=rs,
        ordering="translation-table",
        matrix=matrix,
        system_id=f"{rs.system_id}-translate",
    )
    verify_system(bs)
    logger.info(f"Translated system {bs.system_id}: {len(bs)} bases in {time.monotonic() - start:.2f}s")
    return bs


# ─────────────────── exhaustive enumeration ───────────────────

class _CliqueEnumerator:
    def __init__(self, adj: Sequence[int], target: int, budget: int):
        self.adj = adj
        self.target = target
        self.budget = budget
        self.nodes = 0
        self.found: List[int] = []

    def root(self, v: int) -> None:
        self.nodes += 1
        vbit = 1 << v
        if self.target == 1:
            self.found.append(vbit)
            return
        higher = self.adj[v] & ~((vbit << 1) - 1)
        self._extend(1, vbit, higher)

    def _extend(self, size: int, R: int, P: int) -> None:
        need = self.target - size
        while P:
            if P.bit_count() < need:
                return
            low = P & -P
            P ^= low
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfNodes
            if need == 1:
                self.found.append(R | low)
                continue
            P2 = P & self.adj[low.bit_length() - 1]
            if P2.bit_count() >= need - 1:
                self._extend(size + 1, R | low, P2)


def _enumerate_roots(adj: Sequence[int], target: int, roots: Sequence[int], budget: int) -> Tuple[List[int], int, bool]:
    worker = _CliqueEnumerator(adj, target, budget)
    try:
        for v in roots:
            worker.root(v)
    except _OutOfNodes:
        return [], worker.nodes, False
    return worker.found, worker.nodes, True


def enumerate_all_bases(
    rs: RaySystem,
    size: Optional[int] = None,
    budget: Optional[int] = None,
    workers: Optional[int] = None,
    allow_expensive: bool = False,
) -> BasisSystem:
    """
    Every clique of `size` rays in the orthogonality graph, as a canonical
    (lexicographically sorted) basis list. Raises BudgetExhaustedError
    rather than returning a partial answer.
    """
    size = rs.effective_dimension if size is None else size
    if size != rs.effective_dimension:
        raise BasisError(f"Basis size {size} differs from the effective dimension {rs.effective_dimension}")
    if len(rs) > settings.EXPENSIVE_RAY_LIMIT and not allow_expensive:
        raise ExpensiveOperationError(
            f"{rs.system_id}: enumerating all bases of {len(rs)} rays needs the override flag"
        )
    budget = budget or settings.CLIQUE_BUDGET
    workers = workers or settings.THREADS
    start = time.monotonic()

    # Ascending degree keeps the forward candidate sets small.
    order = sorted(range(len(rs)), key=lambda i: (rs.adjacency[i].bit_count(), rs.rays[i].label))
    adj = _relabel(rs, order)
    roots = list(range(len(order))) if size > 0 else []
    chunks = [roots[i::workers] for i in range(workers)] if workers > 1 else [roots]

    if workers > 1 and len(roots) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_enumerate_roots, *zip(*[(adj, size, c, budget) for c in chunks])))
    else:
        results = [_enumerate_roots(adj, size, c, budget) for c in chunks]

    nodes = sum(r[1] for r in results)
    if not all(r[2] for r in results) or nodes > budget:
        raise BudgetExhaustedError(
            f"{rs.system_id}: clique enumeration exceeded {budget} nodes; the basis count would be incomplete",
            nodes,
        )
    bases = sorted(
        Basis(tuple(rs.rays[order[p]].label for p in iter_bits(mask)))
        for r in results
        for mask in r[0]
    )
    bs = BasisSystem(bases, ray_system=rs, system_id=rs.system_id)
    verify_system(bs)
    logger.info(
        f"Enumerated {len(bs)} bases of size {size} in {rs.system_id} "
        f"({nodes} nodes, {workers} worker(s), {time.monotonic() - start:.2f}s)"
    )
    return bs


# ─────────────────── sub-systems ───────────────────

def filter_rays_by_weight(rs: RaySystem, w: int) -> RaySystem:
    if rs.field_order != 3:
        raise RayInputError(f"{rs.system_id}: weight filtering applies to ternary ray systems")
    labels = [r.label for r in rs.rays if r.weight == w]
    return rs.subsystem(labels, system_id=f"{rs.system_id}-w{w}")


def restrict_system(rs: RaySystem, anchors: Iterable[int]) -> RaySystem:
    """Rays orthogonal to every anchor, living in dimension effective_dimension - |anchors|."""
    anchors = sorted(set(anchors))
    if not anchors:
        return rs
    rays = [rs.ray(a) for a in anchors]
    for i, r1 in enumerate(rays):
        for r2 in rays[i + 1:]:
            if inner_product(r1, r2) != 0:
                raise RayInputError(f"Anchors {r1.label} and {r2.label} are not orthogonal")
    if len(anchors) > rs.effective_dimension:
        raise RayInputError(f"{len(anchors)} anchors exceed dimension {rs.effective_dimension}")
    mask = (1 << len(rs)) - 1
    for a in anchors:
        mask &= rs.neighbor_mask(a)
    return rs.subsystem(
        rs.labels_of(mask),
        system_id=f"{rs.system_id}-r{'-'.join(str(a) for a in anchors)}",
        effective_dimension=rs.effective_dimension - len(anchors),
    )
