"""
Shared fixtures. Ray and basis systems are expensive to build, so each is
built once per test session.
"""
import pytest

from app.services.bases import (
    GOLAY24_SEED,
    Basis,
    enumerate_all_bases,
    filter_rays_by_weight,
    generate_translated_system,
    restrict_system,
)
from app.services.codes import golay_binary_generator, golay_ternary_generator
from app.services.rays import build_ray_system


@pytest.fixture(scope="session")
def golay24():
    return golay_binary_generator()


@pytest.fixture(scope="session")
def golay12():
    return golay_ternary_generator()


@pytest.fixture(scope="session")
def golay24_rays(golay24):
    return build_ray_system(golay24)


@pytest.fixture(scope="session")
def golay12_rays(golay12):
    return build_ray_system(golay12)


@pytest.fixture(scope="session")
def seed():
    return Basis(GOLAY24_SEED)


@pytest.fixture(scope="session")
def translated(golay24_rays, seed):
    return generate_translated_system(seed, golay24_rays)


@pytest.fixture(scope="session")
def weight9_rays(golay12_rays):
    return filter_rays_by_weight(golay12_rays, 9)


@pytest.fixture(scope="session")
def weight9_bases(weight9_rays):
    return enumerate_all_bases(weight9_rays)


@pytest.fixture(scope="session")
def ternary_bases(golay12_rays):
    return enumerate_all_bases(golay12_rays)


@pytest.fixture(scope="session")
def restrictions(golay24_rays):
    """Bases of golay24 restricted to the rays orthogonal to some anchors, built once per anchor set."""
    cache = {}

    def build(anchors):
        anchors = tuple(anchors)
        if anchors not in cache:
            cache[anchors] = enumerate_all_bases(restrict_system(golay24_rays, anchors))
        return cache[anchors]

    return build
