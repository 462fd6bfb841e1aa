"""
Kochen-Specker colorability checks.

Two independent deciders:
  - counting: the incidence symbol gives a bounded Diophantine equation
    (coefficients = occurrences, bounds = class sizes, target = bases);
    no solution means no noncontextual 0/1 assignment.
  - search: an exact-cover backtracking oracle looking for a ray set that
    meets every basis exactly once.

Certificates record both; a counting "infeasible" next to an oracle
"feasible" is an implementation bug and raises InconsistencyError.
"""
import logging
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import CodeInputError, EnumerationLimitError, ExpensiveOperationError, InconsistencyError
from app.services.bases import BasisSystem, find_seed_basis, generate_translated_system
from app.services.codes import GeneratorMatrix, binary_split_tables, check_enumerable, min_distance
from app.services.rays import build_ray_system

logger = logging.getLogger(__name__)

OracleVerdict = Literal["feasible", "infeasible", "unknown"]
VARIABLES = "xyzw"


# ─────────────────── incidence symbol ───────────────────

@dataclass(frozen=True)
class IncidenceSymbol:
    classes: Tuple[Tuple[int, int], ...]  # (ray_count, occurrence), ascending occurrence
    total_bases: int
    basis_size: int
    idle_rays: int = 0

    @property
    def ray_total(self) -> int:
        return sum(r for r, _ in self.classes) + self.idle_rays

    def verify(self) -> None:
        occurrences = [o for _, o in self.classes]
        if len(set(occurrences)) != len(occurrences) or any(o <= 0 for o in occurrences):
            raise InconsistencyError(f"Bad incidence classes {self.classes}")
        if sum(r * o for r, o in self.classes) != self.total_bases * self.basis_size:
            raise InconsistencyError(
                f"Incidence identity fails: {self.classes} vs {self.total_bases} x {self.basis_size}"
            )

    def render(self) -> str:
        left = " ".join(f"{r}_{o}" for r, o in self.classes) or "0"
        return f"{left} - {self.total_bases}_{self.basis_size}"


def incidence_symbol(bs: BasisSystem) -> IncidenceSymbol:
    groups = Counter(occ for occ in bs.occurrence.values() if occ > 0)
    symbol = IncidenceSymbol(
        classes=tuple((groups[o], o) for o in sorted(groups)),
        total_bases=len(bs),
        basis_size=bs.basis_size,
        idle_rays=sum(1 for occ in bs.occurrence.values() if occ == 0),
    )
    symbol.verify()
    if symbol.ray_total != len(bs.occurrence):
        raise InconsistencyError(f"{bs.system_id}: class sizes do not add up to {len(bs.occurrence)} rays")
    return symbol


# ─────────────────── bounded Diophantine feasibility ───────────────────

@dataclass(frozen=True)
class DiophantineInstance:
    coefficients: Tuple[int, ...]
    bounds: Tuple[int, ...]
    target: int

    def __post_init__(self):
        if len(self.coefficients) != len(self.bounds):
            raise CodeInputError("Coefficients and bounds differ in length")
        if any(c <= 0 for c in self.coefficients):
            raise CodeInputError("Coefficients must be positive")
        if any(b < 0 for b in self.bounds) or self.target < 0:
            raise CodeInputError("Bounds and target must be non-negative")

    @classmethod
    def from_symbol(cls, symbol: IncidenceSymbol) -> "DiophantineInstance":
        return cls(
            coefficients=tuple(o for _, o in symbol.classes),
            bounds=tuple(r for r, _ in symbol.classes),
            target=symbol.total_bases,
        )

    def variable(self, j: int) -> str:
        return VARIABLES[j] if len(self.coefficients) <= len(VARIABLES) else f"x{j + 1}"

    def render(self) -> str:
        lhs = " + ".join(f"{c}{self.variable(j)}" for j, c in enumerate(self.coefficients)) or "0"
        return f"{lhs} = {self.target}"

    def render_bounds(self) -> str:
        return ", ".join(f"0 <= {self.variable(j)} <= {b}" for j, b in enumerate(self.bounds))


@dataclass(frozen=True)
class DiophantineResult:
    feasible: bool
    witness: Optional[Tuple[int, ...]] = None


def _chunks(bound: int) -> List[int]:
    """Split 0..bound into 0/1 items 1, 2, 4, ..., remainder."""
    out, step = [], 1
    while bound > 0:
        take = min(step, bound)
        out.append(take)
        bound -= take
        step <<= 1
    return out


def _items(inst: DiophantineInstance) -> List[Tuple[int, int]]:
    """(class, multiplicity) 0/1 items covering every bounded class."""
    return [
        (j, m)
        for j, (c, b) in enumerate(zip(inst.coefficients, inst.bounds))
        for m in _chunks(min(b, inst.target // c))
    ]


def _reach(items: List[Tuple[int, int]], inst: DiophantineInstance, keep: bool) -> List[np.ndarray]:
    target = inst.target
    cur = np.zeros(target + 1, dtype=bool)
    cur[0] = True
    layers = [cur]
    for j, m in items:
        s = m * inst.coefficients[j]
        nxt = cur.copy()
        nxt[s:] |= cur[: target + 1 - s]
        cur = nxt
        if keep:
            layers.append(cur)
        else:
            layers[0] = cur
    return layers


def diophantine_feasible(inst: DiophantineInstance) -> DiophantineResult:
    """
    Reachable-sum dynamic programming over 0..target. Every bound is split
    into power-of-two chunks so each class costs O(log bound) passes. The
    per-item layers are only kept on a second pass, once a witness exists.
    """
    items = _items(inst)
    if not _reach(items, inst, keep=False)[-1][inst.target]:
        return DiophantineResult(False, None)
    layers = _reach(items, inst, keep=True)

    witness = [0] * len(inst.coefficients)
    rem = inst.target
    for i in range(len(items) - 1, -1, -1):
        if layers[i][rem]:
            continue
        j, m = items[i]
        witness[j] += m
        rem -= m * inst.coefficients[j]
    if rem != 0 or sum(c * x for c, x in zip(inst.coefficients, witness)) != inst.target:
        raise InconsistencyError(f"Witness {witness} does not satisfy {inst.render()}")
    return DiophantineResult(True, tuple(witness))


# ─────────────────── exact-cover oracle ───────────────────

@dataclass(frozen=True)
class ExactCoverResult:
    verdict: OracleVerdict
    assignment: Optional[Tuple[int, ...]]  # rays valued 1
    unconstrained: Tuple[int, ...] = ()
    nodes: int = 0
    note: str = ""  # why the verdict is "unknown"


class _OutOfNodes(Exception):
    pass


class _ExactCover:
    """Algorithm X over dict-of-sets: columns are bases, rows are rays."""

    def __init__(self, bs: BasisSystem, budget: int):
        self.X: Dict[int, set] = {j: set(b.ray_labels) for j, b in enumerate(bs.bases)}
        Y: Dict[int, List[int]] = defaultdict(list)
        for j, b in enumerate(bs.bases):
            for lab in b:
                Y[lab].append(j)
        self.Y = dict(Y)
        self.budget = budget
        self.nodes = 0
        self.solution: List[int] = []

    def _select(self, r: int) -> List[set]:
        cols = []
        for j in self.Y[r]:
            for i in self.X[j]:
                for k in self.Y[i]:
                    if k != j:
                        self.X[k].remove(i)
            cols.append(self.X.pop(j))
        return cols

    def _deselect(self, r: int, cols: List[set]) -> None:
        for j in reversed(self.Y[r]):
            self.X[j] = cols.pop()
            for i in self.X[j]:
                for k in self.Y[i]:
                    if k != j:
                        self.X[k].add(i)

    def solve(self) -> bool:
        if not self.X:
            return True
        j = min(self.X, key=lambda c: (len(self.X[c]), c))
        for r in sorted(self.X[j]):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfNodes
            self.solution.append(r)
            cols = self._select(r)
            if self.solve():
                return True
            self._deselect(r, cols)
            self.solution.pop()
        return False


def exact_cover_search(bs: BasisSystem, budget: Optional[int] = None) -> ExactCoverResult:
    """
    Look for rays valued 1 so that every basis holds exactly one of them.
    Rays in no basis are unconstrained and get 0. "infeasible" is a proof;
    "unknown" means the budget ran out.
    """
    budget = budget or settings.ORACLE_BUDGET
    unconstrained = tuple(lab for lab, occ in bs.occurrence.items() if occ == 0)
    incidences = len(bs) * bs.basis_size
    if incidences > settings.ORACLE_INCIDENCE_LIMIT:
        logger.warning(
            f"Exact-cover oracle skipped on {bs.system_id}: {incidences} incidences "
            f"> ORACLE_INCIDENCE_LIMIT={settings.ORACLE_INCIDENCE_LIMIT}"
        )
        return ExactCoverResult(
            "unknown", None, unconstrained, 0,
            note=f"not run: {incidences} incidences > ORACLE_INCIDENCE_LIMIT={settings.ORACLE_INCIDENCE_LIMIT}",
        )
    search = _ExactCover(bs, budget)
    start = time.monotonic()
    try:
        found = search.solve()
    except _OutOfNodes:
        logger.warning(f"Exact-cover oracle on {bs.system_id} exhausted {budget} nodes")
        return ExactCoverResult("unknown", None, unconstrained, budget, note=f"node budget {budget} exhausted")
    elapsed = time.monotonic() - start
    if not found:
        logger.info(f"Exact-cover oracle on {bs.system_id}: infeasible ({search.nodes} nodes, {elapsed:.2f}s)")
        return ExactCoverResult("infeasible", None, unconstrained, search.nodes)

    ones = tuple(sorted(search.solution))
    chosen = set(ones)
    for b in bs.bases:
        if sum(1 for lab in b if lab in chosen) != 1:
            raise InconsistencyError(f"Oracle assignment puts != 1 ones in basis {b.ray_labels}")
    logger.info(f"Exact-cover oracle on {bs.system_id}: feasible with {len(ones)} ones ({search.nodes} nodes)")
    return ExactCoverResult("feasible", ones, unconstrained, search.nodes)


def class_counts(assignment: Tuple[int, ...], bs: BasisSystem, symbol: IncidenceSymbol) -> Tuple[int, ...]:
    """Number of value-1 rays in each incidence class."""
    per_occurrence = Counter(bs.occurrence[lab] for lab in assignment)
    return tuple(per_occurrence.get(o, 0) for _, o in symbol.classes)


# ─────────────────── certificates ───────────────────

@dataclass
class KSCertificate:
    system_id: str
    symbol: IncidenceSymbol
    instance: DiophantineInstance
    diophantine_feasible: bool
    witness: Optional[Tuple[int, ...]]
    oracle_verdict: OracleVerdict
    ks_proved: bool
    oracle_assignment: Optional[Tuple[int, ...]] = None
    weight_classes: Optional[Dict[int, Tuple[int, ...]]] = None
    title: str = ""
    oracle_note: str = ""


def _settle(
    system_id: str,
    symbol: IncidenceSymbol,
    oracle: ExactCoverResult,
    weight_classes: Optional[Dict[int, Tuple[int, ...]]] = None,
    title: str = "",
) -> KSCertificate:
    instance = DiophantineInstance.from_symbol(symbol)
    dio = diophantine_feasible(instance)

    if len(symbol.classes) == 1:
        (count, occ), = symbol.classes
        divisible = symbol.total_bases % occ == 0 and symbol.total_bases // occ <= count
        if divisible != dio.feasible:
            raise InconsistencyError(f"{system_id}: divisibility shortcut disagrees with the DP")

    if not dio.feasible and oracle.verdict == "feasible":
        raise InconsistencyError(f"{system_id}: counting says infeasible but the oracle found an assignment")

    return KSCertificate(
        system_id=system_id,
        symbol=symbol,
        instance=instance,
        diophantine_feasible=dio.feasible,
        witness=dio.witness,
        oracle_verdict=oracle.verdict,
        ks_proved=(not dio.feasible) or oracle.verdict == "infeasible",
        oracle_assignment=oracle.assignment,
        weight_classes=weight_classes,
        title=title,
        oracle_note=oracle.note,
    )


def _weight_classes(bs: BasisSystem, symbol: IncidenceSymbol) -> Optional[Dict[int, Tuple[int, ...]]]:
    if bs.ray_system is None:
        return None
    weights: Dict[int, set] = defaultdict(set)
    for ray in bs.ray_system.rays:
        occ = bs.occurrence[ray.label]
        if occ > 0:
            weights[occ].add(ray.weight)
    return {o: tuple(sorted(weights[o])) for _, o in symbol.classes}


def ks_certificate(bs: BasisSystem, oracle_budget: Optional[int] = None, title: str = "") -> KSCertificate:
    symbol = incidence_symbol(bs)
    oracle = exact_cover_search(bs, oracle_budget)
    if oracle.verdict == "feasible":
        counts = class_counts(oracle.assignment, bs, symbol)
        if sum(c * o for c, (_, o) in zip(counts, symbol.classes)) != symbol.total_bases:
            raise InconsistencyError(f"{bs.system_id}: oracle assignment violates the counting equation")
    cert = _settle(bs.system_id, symbol, oracle, _weight_classes(bs, symbol), title)
    logger.info(
        f"Certificate {bs.system_id}: {symbol.render()}, {cert.instance.render()}, "
        f"diophantine_feasible={cert.diophantine_feasible}, oracle={cert.oracle_verdict}, ks_proved={cert.ks_proved}"
    )
    return cert


def certificate_from_symbol(system_id: str, symbol: IncidenceSymbol, title: str = "") -> KSCertificate:
    """Certificate for systems too large to materialize; the oracle is not run."""
    symbol.verify()
    oracle = ExactCoverResult("unknown", None, note="not run: basis system not materialized")
    return _settle(system_id, symbol, oracle, title=title)


# ─────────────────── generic binary pipeline ───────────────────

SeedOutcome = Literal["found", "exhausted", "absent", "not-run"]


@dataclass
class PipelineReport:
    code: str
    length: int
    dimension: int
    min_distance: int
    ray_count: int
    divisible: bool
    seed_status: SeedOutcome
    seed_nodes: int = 0
    seed: Optional[Tuple[int, ...]] = None
    seed_words: Optional[Tuple[str, ...]] = None
    certificate: Optional[KSCertificate] = None
    notes: List[str] = field(default_factory=list)


class _WordSearch:
    """Depth-first search for 2n words pairwise at distance n, on packed codewords."""

    def __init__(self, n: int, target: int, budget: int):
        self.n = n
        self.target = target
        self.budget = budget
        self.nodes = 0

    def run(self, chosen: List[int], cand: np.ndarray) -> Optional[List[int]]:
        if len(chosen) == self.target:
            return chosen
        for idx in range(cand.size):
            if len(chosen) + cand.size - idx < self.target:
                return None
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfNodes
            c = cand[idx]
            rest = cand[idx + 1:]
            nxt = rest[np.bitwise_count(rest ^ c) == self.n]
            if len(chosen) + 1 + nxt.size >= self.target:
                found = self.run(chosen + [int(c)], nxt)
                if found is not None:
                    return found
        return None


def find_seed_words(G: GeneratorMatrix, budget: Optional[int] = None) -> Tuple[SeedOutcome, Optional[List[int]], int]:
    """
    Seed search straight on packed codewords, for codes whose ray system is
    too large to hold. By translation the basis may contain the zero word,
    so candidates are the weight-n codewords with first digit 0.
    """
    budget = budget or settings.SEED_BUDGET
    check_enumerable(G)
    n = G.length // 2
    top = np.uint64(G.length - 1)
    high, low, _ = binary_split_tables(G)
    found_words = []
    for h in high:
        block = h ^ low
        keep = (np.bitwise_count(block) == n) & (((block >> top) & np.uint64(1)) == 0)
        found_words.append(block[keep])
    cand = np.unique(np.concatenate(found_words))
    logger.info(f"Seed word search on {G.name}: {cand.size} candidate words of weight {n}")
    search = _WordSearch(n, G.length, budget)
    try:
        words = search.run([0], cand)
    except _OutOfNodes:
        return "exhausted", None, budget
    if words is None:
        return "absent", None, search.nodes
    return "found", words, search.nodes


def generic_binary_pipeline(
    G: GeneratorMatrix,
    budget: Optional[int] = None,
    oracle_budget: Optional[int] = None,
    allow_expensive: bool = False,
) -> PipelineReport:
    """
    Divisibility test on 2^(k-1) versus 2n, then a seed basis, then the
    translated system and its certificate.
    """
    if G.field_order != 2:
        raise CodeInputError(f"{G.name}: the pipeline needs a binary code")
    if G.length % 2:
        raise CodeInputError(f"{G.name}: length {G.length} is odd")
    budget = budget or settings.SEED_BUDGET
    rays = 2 ** (G.k - 1)
    report = PipelineReport(
        code=G.name,
        length=G.length,
        dimension=G.k,
        min_distance=min_distance(G),
        ray_count=rays,
        divisible=rays % G.length == 0,
        seed_status="not-run",
    )
    if report.divisible:
        report.notes.append(f"{G.length} divides 2^{G.k - 1} = {rays}; translation cannot yield a proof")
        return report

    title = f"{G.name} [{G.length},{G.k},{report.min_distance}]"
    if rays <= settings.MAX_RAY_SYSTEM:
        rs = build_ray_system(G)
        result = find_seed_basis(rs, budget)
        report.seed_status, report.seed_nodes = result.status, result.nodes
        if result.basis is None:
            return report
        report.seed = result.basis.ray_labels
        system = generate_translated_system(result.basis, rs)
        report.certificate = ks_certificate(system, oracle_budget, title=title)
        return report

    if budget > settings.SEED_BUDGET and not allow_expensive:
        raise ExpensiveOperationError(
            f"{G.name}: seed search over {rays} rays with budget {budget} > {settings.SEED_BUDGET} needs the override flag"
        )
    try:
        status, words, nodes = find_seed_words(G, budget)
    except EnumerationLimitError as e:
        report.notes.append(str(e))
        return report
    report.seed_status, report.seed_nodes = status, nodes
    if words is None:
        return report
    report.seed_words = tuple(format(w, f"0{G.length}b") for w in words)
    symbol = IncidenceSymbol(((rays, G.length),), rays, G.length)
    report.certificate = certificate_from_symbol(f"{G.name}-translate", symbol, title=title)
    report.notes.append("Translated system not materialized; symbol follows from the column-permutation property")
    return report
