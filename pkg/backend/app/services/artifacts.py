"""
Artifact files: pydantic documents for every result plus the plain-text
views (rays CSV, translation table, proof summary).

Everything written here is a pure function of its input: sorted keys,
canonical orderings, no timestamps.
"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Iterable, List, Tuple, Union

from pydantic import BaseModel, ValidationError

from app.core.errors import CodeInputError
from app.schemas.bases import BasesDocument
from app.schemas.certificate import CertificateDocument, EquationDocument, SymbolDocument
from app.schemas.code import CodeReport
from app.schemas.pipeline import PipelineDocument
from app.schemas.rays import RaySummary
from app.services.bases import Basis, BasisSystem
from app.services.codes import GeneratorMatrix, code_spec, render_digit, weight_distribution
from app.services.kscheck import IncidenceSymbol, KSCertificate, PipelineReport
from app.services.rays import RaySystem

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def dump_json(doc: BaseModel) -> str:
    return json.dumps(doc.model_dump(), sort_keys=True, indent=2) + "\n"


def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path} ({len(text)} bytes)")
    return path


def write_json(path: PathLike, doc: BaseModel) -> Path:
    return write_text(path, dump_json(doc))


# ─────────────────── code ───────────────────

def code_report(G: GeneratorMatrix) -> CodeReport:
    spec = code_spec(G)
    return CodeReport(
        name=G.name,
        field_order=G.field_order,
        length=G.length,
        dimension=G.k,
        min_distance=spec.min_distance,
        symbol=str(spec),
        codewords=G.size,
        weight_distribution={str(w): n for w, n in weight_distribution(G).items()},
        matrix=[" ".join(render_digit(int(d), G.field_order) for d in row) for row in G.rows],
    )


# ─────────────────── rays ───────────────────

def ray_summary(rs: RaySystem) -> RaySummary:
    return RaySummary(
        system=rs.system_id,
        code=rs.rays[0].source_code if len(rs) else rs.system_id,
        dimension=rs.dimension,
        effective_dimension=rs.effective_dimension,
        rays=len(rs),
        orthogonal_pairs=rs.orthogonal_pair_count(),
        degree_histogram={str(d): n for d, n in rs.degree_histogram().items()},
        weight_counts={str(w): n for w, n in rs.weight_counts().items()},
    )


def rays_csv(rs: RaySystem) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "dim", "entries"])
    for r in rs.rays:
        writer.writerow([r.label, r.dimension, " ".join(str(x) for x in r.vector)])
    return buf.getvalue()


# ─────────────────── bases ───────────────────

def bases_document(bs: BasisSystem) -> BasesDocument:
    return BasesDocument(
        ray_system=bs.system_id,
        dimension=bs.basis_size,
        bases=[list(b.ray_labels) for b in bs.bases],
        occurrence={str(lab): n for lab, n in bs.occurrence.items()},
        ordering=bs.ordering,
        matrix=[list(row) for row in bs.matrix] if bs.matrix is not None else None,
    )


def translation_table(bs: BasisSystem) -> str:
    """The translation matrix, one basis per line, columns in seed order."""
    if bs.matrix is None:
        raise CodeInputError(f"{bs.system_id}: no translation matrix to render")
    width = len(str(max((lab for row in bs.matrix for lab in row), default=0)))
    return "".join(" ".join(f"{lab:>{width}}" for lab in row) + "\n" for row in bs.matrix)


def _read_json(path: PathLike) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise CodeInputError(f"Cannot read {path}: {e}")


def load_bases(path: PathLike) -> BasisSystem:
    """Label-only BasisSystem from a bases document; ray vectors are not restored."""
    try:
        doc = BasesDocument.model_validate(_read_json(path))
    except ValidationError as e:
        raise CodeInputError(f"{path} is not a bases document: {e}")
    # Zero-occurrence rays survive only through the document's occurrence map.
    bs = BasisSystem(
        (Basis(tuple(b)) for b in doc.bases),
        ordering=doc.ordering,
        matrix=doc.matrix,
        system_id=doc.ray_system,
        basis_size=doc.dimension,
    )
    stated = {int(k): v for k, v in doc.occurrence.items() if v}
    if stated != {lab: n for lab, n in bs.occurrence.items() if n}:
        raise CodeInputError(f"{path}: occurrence map does not match the bases")
    return bs


# ─────────────────── certificates ───────────────────

def certificate_document(cert: KSCertificate) -> CertificateDocument:
    return CertificateDocument(
        system=cert.system_id,
        symbol=SymbolDocument(
            classes=[[r, o] for r, o in cert.symbol.classes],
            bases=cert.symbol.total_bases,
            size=cert.symbol.basis_size,
        ),
        equation=EquationDocument(
            coeffs=list(cert.instance.coefficients),
            bounds=list(cert.instance.bounds),
            target=cert.instance.target,
        ),
        diophantine_feasible=cert.diophantine_feasible,
        witness=list(cert.witness) if cert.witness is not None else None,
        oracle=cert.oracle_verdict,
        oracle_note=cert.oracle_note or None,
        assignment=list(cert.oracle_assignment) if cert.oracle_assignment is not None else None,
        weight_classes=(
            {str(o): list(ws) for o, ws in cert.weight_classes.items()} if cert.weight_classes else None
        ),
        ks_proved=cert.ks_proved,
    )


def load_certificate_symbol(path: PathLike) -> Tuple[str, IncidenceSymbol]:
    """(system_id, IncidenceSymbol) from a certificate document."""
    try:
        doc = CertificateDocument.model_validate(_read_json(path))
    except ValidationError as e:
        raise CodeInputError(f"{path} is not a certificate document: {e}")
    symbol = IncidenceSymbol(
        classes=tuple((r, o) for r, o in doc.symbol.classes),
        total_bases=doc.symbol.bases,
        basis_size=doc.symbol.size,
    )
    return doc.system, symbol


def is_certificate_file(path: PathLike) -> bool:
    return "symbol" in _read_json(path)


def summary_line(cert: KSCertificate) -> str:
    equation = cert.instance.render()
    if len(cert.instance.coefficients) > 1:
        equation = f"{equation}  [{cert.instance.render_bounds()}]"
    return f"{cert.title or cert.system_id} | {cert.symbol.render()} | {equation}"


def proof_summary(certs: Iterable[KSCertificate]) -> str:
    """Plain-text table: code | rays-bases symbol | equation [constraints] | verdict."""
    lines: List[str] = ["code | rays-bases symbol | equation | verdict"]
    for cert in certs:
        verdict = "KS proved" if cert.ks_proved else f"not proved (oracle {cert.oracle_verdict})"
        lines.append(f"{summary_line(cert)} | {verdict}")
    return "\n".join(lines) + "\n"


# ─────────────────── pipeline ───────────────────

def pipeline_document(report: PipelineReport) -> PipelineDocument:
    return PipelineDocument(
        code=report.code,
        length=report.length,
        dimension=report.dimension,
        min_distance=report.min_distance,
        rays=report.ray_count,
        divisible=report.divisible,
        seed_status=report.seed_status,
        seed_nodes=report.seed_nodes,
        seed=list(report.seed) if report.seed is not None else None,
        seed_words=list(report.seed_words) if report.seed_words is not None else None,
        certificate=certificate_document(report.certificate) if report.certificate else None,
        notes=list(report.notes),
    )
