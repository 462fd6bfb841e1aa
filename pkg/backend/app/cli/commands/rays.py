"""`rays`: ray listing and orthogonality summary."""

from app.cli import deps
from app.schemas.run import RunConfig
from app.services.artifacts import ray_summary, rays_csv, write_json, write_text


def run(config: RunConfig) -> int:
    rs = deps.get_ray_system(config)
    summary = ray_summary(rs)
    write_text(deps.output_path(config, rs.system_id, "rays.csv"), rays_csv(rs))
    write_json(deps.output_path(config, rs.system_id, "rays.json"), summary)
    print(f"{rs.system_id}: {summary.rays} rays, {summary.orthogonal_pairs} orthogonal pairs")
    return 0
