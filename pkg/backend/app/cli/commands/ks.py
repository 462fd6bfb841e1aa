"""`ks`: incidence symbol, Diophantine check and exact-cover oracle."""
from pathlib import Path

from app.cli import deps
from app.schemas.run import RunConfig
from app.services.artifacts import (
    certificate_document,
    is_certificate_file,
    load_bases,
    load_certificate_symbol,
    proof_summary,
    write_json,
    write_text,
)
from app.services.kscheck import KSCertificate, certificate_from_symbol, ks_certificate

EXIT_PROVED = 0
EXIT_NOT_PROVED = 1
EXIT_UNKNOWN = 3


def _certificate(config: RunConfig) -> KSCertificate:
    path = Path(config.code)
    if path.suffix == ".json" and path.is_file():
        if is_certificate_file(path):
            system_id, symbol = load_certificate_symbol(path)
            return certificate_from_symbol(system_id, symbol)
        return ks_certificate(load_bases(path), config.oracle_budget)
    return ks_certificate(deps.get_basis_system(config), config.oracle_budget)


def exit_code(cert: KSCertificate) -> int:
    if cert.ks_proved:
        return EXIT_PROVED
    if cert.oracle_verdict == "unknown":
        return EXIT_UNKNOWN
    return EXIT_NOT_PROVED


def run(config: RunConfig) -> int:
    cert = _certificate(config)
    summary = proof_summary([cert])
    write_json(deps.output_path(config, cert.system_id, "certificate.json"), certificate_document(cert))
    write_text(deps.output_path(config, cert.system_id, "summary.txt"), summary)
    print(summary, end="")
    if cert.witness is not None:
        print(f"witness: {list(cert.witness)}")
    if cert.oracle_note:
        print(f"oracle: {cert.oracle_note}")
    return exit_code(cert)
