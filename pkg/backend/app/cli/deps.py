"""
Shared resolution for CLI commands: turn a RunConfig into a code, a ray
system or a basis system.
"""
import logging
from pathlib import Path
from typing import Optional

from app.core.errors import BasisError, BudgetExhaustedError, CodeInputError
from app.schemas.run import RunConfig
from app.services.bases import (
    BasisSystem,
    enumerate_all_bases,
    filter_rays_by_weight,
    find_seed_basis,
    generate_translated_system,
    known_seed,
    restrict_system,
)
from app.services.codes import NAMED_CODES, GeneratorMatrix, get_code, parse_matrix, puncture
from app.services.rays import RaySystem, build_ray_system

logger = logging.getLogger(__name__)


def get_generator(config: RunConfig) -> GeneratorMatrix:
    """Built-in code by name, otherwise a matrix file; punctured on request."""
    if config.code in NAMED_CODES:
        G = get_code(config.code)
    else:
        path = Path(config.code)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise CodeInputError(f"Unknown code {config.code!r} and unreadable as a matrix file: {e}")
        G = parse_matrix(text, name=path.stem)
    if config.puncture is not None:
        G = puncture(G, config.puncture)
    return G


def get_ray_system(config: RunConfig, G: Optional[GeneratorMatrix] = None) -> RaySystem:
    rs = build_ray_system(G or get_generator(config))
    if config.weight is not None:
        rs = filter_rays_by_weight(rs, config.weight)
    if config.restrict:
        rs = restrict_system(rs, config.restrict)
    return rs


def resolve_mode(config: RunConfig, G: GeneratorMatrix) -> str:
    """Restricted systems are always enumerated; otherwise binary codes default to translation."""
    if config.restrict:
        if config.mode == "translate":
            raise CodeInputError("--restrict enumerates the restricted ray system; drop --mode translate")
        return "enumerate"
    if config.mode is not None:
        return config.mode
    return "translate" if G.field_order == 2 else "enumerate"


def _translated(config: RunConfig, G: GeneratorMatrix) -> BasisSystem:
    if G.field_order != 2:
        raise CodeInputError(f"{G.name}: translation needs a binary code")
    if config.weight is not None:
        raise CodeInputError("--weight applies to ternary systems only")
    rs = build_ray_system(G)
    seed = known_seed(G)
    if seed is None:
        result = find_seed_basis(rs, config.budget)
        if result.status == "exhausted":
            raise BudgetExhaustedError(f"{G.name}: seed search ran out of nodes", result.nodes)
        if result.basis is None:
            raise BasisError(f"{G.name}: no {rs.effective_dimension} mutually orthogonal rays exist")
        seed = result.basis
    return generate_translated_system(seed, rs)


def get_basis_system(config: RunConfig, G: Optional[GeneratorMatrix] = None) -> BasisSystem:
    G = G or get_generator(config)
    mode = resolve_mode(config, G)
    logger.info(f"Building bases for {G.name} in {mode} mode")
    if mode == "translate":
        return _translated(config, G)
    return enumerate_all_bases(
        get_ray_system(config, G),
        budget=config.budget,
        workers=config.threads,
        allow_expensive=config.override_expensive,
    )


def output_path(config: RunConfig, stem: str, suffix: str) -> Path:
    return Path(config.out) / f"{stem}.{suffix}"
