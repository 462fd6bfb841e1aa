"""`pipeline`: divisibility, seed search, translation and certificate for a binary code."""

from app.cli import deps
from app.schemas.run import RunConfig
from app.services.artifacts import pipeline_document, proof_summary, write_json
from app.services.kscheck import generic_binary_pipeline


def run(config: RunConfig) -> int:
    G = deps.get_generator(config)
    report = generic_binary_pipeline(
        G,
        budget=config.budget,
        oracle_budget=config.oracle_budget,
        allow_expensive=config.override_expensive,
    )
    write_json(deps.output_path(config, G.name, "pipeline.json"), pipeline_document(report))
    print(f"{G.name} [{report.length},{report.dimension},{report.min_distance}]: "
          f"{report.ray_count} rays, divisible={report.divisible}, seed={report.seed_status}")
    for note in report.notes:
        print(f"note: {note}")
    if report.certificate is not None:
        print(proof_summary([report.certificate]), end="")
        return 0 if report.certificate.ks_proved else 1
    return 3 if report.seed_status == "exhausted" else 1
