"""`bases`: translated or enumerated basis systems."""

from app.cli import deps
from app.schemas.run import RunConfig
from app.services.artifacts import bases_document, translation_table, write_json, write_text


def run(config: RunConfig) -> int:
    bs = deps.get_basis_system(config)
    write_json(deps.output_path(config, bs.system_id, "bases.json"), bases_document(bs))
    if bs.matrix is not None:
        write_text(deps.output_path(config, bs.system_id, "table.txt"), translation_table(bs))
    print(f"{bs.system_id}: {len(bs)} bases of {bs.basis_size} rays")
    return 0
