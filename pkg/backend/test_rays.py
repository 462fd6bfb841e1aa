"""
Ray systems: labels, orthogonality, weight filters and restrictions.
"""
import numpy as np
import pytest

from app.core.errors import EnumerationLimitError, RayInputError
from app.services.bases import GOLAY24_SEED, filter_rays_by_weight, restrict_system
from app.services.codes import Codeword, encode, iter_codewords, puncture, qr48_generator
from app.services.rays import (
    binary_codeword_to_ray,
    build_ray_system,
    canonical_vector,
    inner_product,
    orthogonality_degree,
    ternary_codeword_to_ray,
)


def test_binary_system_shape(golay24_rays):
    assert len(golay24_rays) == 2048
    assert golay24_rays.labels == list(range(1, 2049))
    assert golay24_rays.degree_histogram() == {1288: 2048}
    assert golay24_rays.orthogonal_pair_count() == 2048 * 1288 // 2
    assert orthogonality_degree(golay24_rays, 1) == 1288


def test_binary_labels_fold_complements(golay24, golay24_rays):
    for coeffs in [(0,) * 12, (0,) * 11 + (1,), (1,) + (0,) * 11, (1,) * 11 + (0,), (1,) * 12]:
        c = encode(coeffs, golay24)
        ray = binary_codeword_to_ray(c)
        assert ray.label == min(c.label, 4097 - c.label)
        assert golay24_rays.ray(ray.label).vector == ray.vector


def test_ray_codeword_is_first_source(golay24, golay24_rays):
    ray = golay24_rays.ray(136)
    assert ray.codeword == encode(tuple(int(b) for b in format(135, "012b")), golay24).digits


def test_zero_codeword_is_the_all_plus_ray(golay24_rays):
    ray = golay24_rays.ray(1)
    assert ray.vector == (1,) * 24
    assert ray.weight == 0


def test_ternary_system(golay12_rays):
    assert len(golay12_rays) == 364
    assert golay12_rays.weight_counts() == {6: 132, 9: 220, 12: 12}
    assert all(r.vector[next(i for i, x in enumerate(r.vector) if x)] == 1 for r in golay12_rays.rays)


@pytest.mark.parametrize("w, count", [(6, 132), (9, 220), (12, 12)])
def test_weight_filter(golay12_rays, w, count):
    sub = filter_rays_by_weight(golay12_rays, w)
    assert len(sub) == count
    assert sub.system_id == f"golay12-w{w}"
    assert all(r.weight == w for r in sub.rays)


def test_weight_filter_needs_ternary(golay24_rays):
    with pytest.raises(RayInputError):
        filter_rays_by_weight(golay24_rays, 12)


def _coeffs(index):
    return tuple(int(b) for b in format(index, "012b"))


def test_ternary_row_one(golay12, golay12_rays):
    ray = ternary_codeword_to_ray(encode((1, 0, 0, 0, 0, 0), golay12))
    assert ray.vector == (1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1)
    assert ray.weight == 6
    assert ray.label == golay12_rays.label_for_vector(ray.vector)


def test_ternary_negation_keeps_the_ray(golay12):
    row = encode((0, 1, 0, 0, 0, 0), golay12)
    negated = encode((0, 2, 0, 0, 0, 0), golay12)
    assert negated.digits == tuple((3 - d) % 3 for d in row.digits)
    ray = ternary_codeword_to_ray(negated)
    assert ray == ternary_codeword_to_ray(row)
    assert ray.vector == (0, 1, 0, 0, 0, 0, -1, 0, 1, -1, -1, 1)
    assert ray.codeword == row.digits
    with pytest.raises(RayInputError):
        ternary_codeword_to_ray(Codeword(digits=(0,) * 12, coeffs=(0,) * 6))


def test_ternary_rays_match_the_system(golay12, golay12_rays):
    for c in iter_codewords(golay12):
        if not any(c.coeffs):
            continue
        ray = ternary_codeword_to_ray(c)
        assert ternary_codeword_to_ray(encode(tuple((2 * a) % 3 for a in c.coeffs), golay12)) == ray
        assert golay12_rays.ray(ray.label) == ray


@pytest.mark.parametrize("n", [1, 2, 136, 2048])
def test_complementary_codewords_share_a_ray(golay24, golay24_rays, n):
    c = encode(_coeffs(n - 1), golay24)
    partner = encode(_coeffs(4096 - n), golay24)
    assert partner.label == 4097 - n
    assert partner.digits == tuple(1 - d for d in c.digits)
    assert binary_codeword_to_ray(c) == binary_codeword_to_ray(partner) == golay24_rays.ray(n)


def test_ternary_degree_fixture(golay12_rays, weight9_rays):
    assert golay12_rays.degree_histogram() == {121: 12, 165: 220, 211: 132}
    by_weight = {}
    for r in golay12_rays.rays:
        by_weight.setdefault(r.weight, set()).add(orthogonality_degree(golay12_rays, r.label))
    assert by_weight == {6: {211}, 9: {165}, 12: {121}}
    assert golay12_rays.orthogonal_pair_count() == 32802
    assert weight9_rays.degree_histogram() == {99: 220}


def test_inner_product_tracks_distance(golay24_rays):
    vectors = np.array([r.vector for r in golay24_rays.rays], dtype=np.int64)
    words = np.array([r.codeword for r in golay24_rays.rays], dtype=np.int64)
    distance = words @ (1 - words).T + (1 - words) @ words.T
    assert np.array_equal(vectors @ vectors.T, 24 - 2 * distance)
    for i in range(0, len(golay24_rays), 97):
        lab = golay24_rays.rays[i].label
        expected = [golay24_rays.rays[j].label for j in np.flatnonzero(distance[i] == 12)]
        assert golay24_rays.labels_of(golay24_rays.neighbor_mask(lab)) == expected


@pytest.mark.parametrize("t", [2, 136, 1000, 2048])
def test_translation_preserves_adjacency(golay24_rays, t):
    shift = np.array(golay24_rays.ray(t).codeword, dtype=np.int64)
    words = np.array([r.codeword for r in golay24_rays.rays], dtype=np.int64)
    perm = np.array([
        golay24_rays.index(golay24_rays.label_for_vector(1 - 2 * ((w + shift) % 2)))
        for w in words
    ])
    assert sorted(perm.tolist()) == list(range(len(golay24_rays)))
    vectors = np.array([r.vector for r in golay24_rays.rays], dtype=np.int64)
    adjacency = vectors @ vectors.T == 0
    assert np.array_equal(adjacency[np.ix_(perm, perm)], adjacency)


def test_canonical_vector():
    assert canonical_vector((0, -1, 1)) == (0, 1, -1)
    assert canonical_vector((1, -1)) == (1, -1)


def test_inner_product(golay24_rays):
    a, b = golay24_rays.ray(1), golay24_rays.ray(2)
    assert inner_product(a, b) == 0
    assert golay24_rays.is_orthogonal(1, 2)
    assert inner_product(a, golay24_rays.ray(2048)) == -8
    assert not golay24_rays.is_orthogonal(1, 2048)
    short = binary_codeword_to_ray(Codeword(digits=(0, 1), coeffs=(0,)), source_code="toy", label=1)
    with pytest.raises(RayInputError):
        inner_product(a, short)


def test_unknown_label(golay24_rays):
    with pytest.raises(RayInputError):
        golay24_rays.ray(2049)


def test_punctured_binary_has_no_orthogonal_pairs(golay24):
    rs = build_ray_system(puncture(golay24, 23))
    assert len(rs) == 2048
    assert rs.dimension == 23
    assert rs.orthogonal_pair_count() == 0


def test_large_code_has_no_ray_system():
    with pytest.raises(EnumerationLimitError):
        build_ray_system(qr48_generator())


def test_restrict_empty_is_identity(golay24_rays):
    assert restrict_system(golay24_rays, []) is golay24_rays


def test_restrict_by_full_basis_is_empty(golay24_rays):
    sub = restrict_system(golay24_rays, GOLAY24_SEED)
    assert len(sub) == 0
    assert sub.effective_dimension == 0


def test_restrict_by_four_anchors(golay24_rays):
    anchors = GOLAY24_SEED[:4]
    sub = restrict_system(golay24_rays, anchors)
    assert sub.effective_dimension == 20
    assert sub.system_id == "golay24-r1-127-128-136"
    assert set(GOLAY24_SEED[4:]) <= set(sub.labels)
    for lab in sub.labels:
        assert all(golay24_rays.is_orthogonal(lab, a) for a in anchors)


def test_restrict_rejects_non_orthogonal_anchors(golay24_rays):
    with pytest.raises(RayInputError):
        restrict_system(golay24_rays, [1, 2048])
