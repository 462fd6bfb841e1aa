"""
Basis systems: seed translation, exhaustive enumeration, restriction and
the bases document round trip.
"""
import random

import pytest

from app.core.errors import BasisError, BudgetExhaustedError, ExpensiveOperationError, RayInputError
from app.services.artifacts import bases_document, load_bases, write_json
from app.services.bases import (
    GOLAY24_SEED,
    Basis,
    BasisSystem,
    enumerate_all_bases,
    find_seed_basis,
    generate_translated_system,
    is_valid_basis,
    known_seed,
    translate_basis,
    verify_basis,
)
from app.services.codes import golay_ternary_generator, puncture
from app.services.rays import build_ray_system

# Second row of the golay24 translation table (translation by ray 2).
GOLAY24_ROW_2 = (
    2, 128, 127, 135, 178, 413, 585, 787, 865, 912, 1006, 1012,
    1226, 1324, 1323, 1365, 1492, 1509, 1590, 1608, 1703, 1721, 1755, 1822,
)


def test_seed_is_a_basis(golay24_rays, seed):
    verify_basis(seed, golay24_rays)
    assert is_valid_basis(seed, golay24_rays)


def test_known_seed(golay24, golay12):
    assert known_seed(golay24) == Basis(GOLAY24_SEED)
    assert known_seed(golay12) is None


def test_basis_rejects_repeats():
    with pytest.raises(BasisError):
        Basis((1, 2, 2))
    assert Basis((3, 1, 2)).ray_labels == (1, 2, 3)


def test_verify_basis_rejects_bad_sets(golay24_rays):
    with pytest.raises(BasisError):
        verify_basis(Basis(GOLAY24_SEED[:23]), golay24_rays)
    with pytest.raises(BasisError):
        verify_basis(Basis(GOLAY24_SEED[1:] + (2048,)), golay24_rays)
    with pytest.raises(BasisError):
        verify_basis(Basis(GOLAY24_SEED[1:] + (5000,)), golay24_rays)


def test_translation_table_rows(translated):
    assert len(translated) == 2048
    assert translated.ordering == "translation-table"
    assert translated.system_id == "golay24-translate"
    assert translated.matrix[0] == GOLAY24_SEED
    assert translated.matrix[1] == GOLAY24_ROW_2


def test_translation_columns_are_permutations(translated):
    for col in range(24):
        assert sorted(row[col] for row in translated.matrix) == list(range(1, 2049))
    assert set(translated.occurrence.values()) == {24}


def test_translate_by_first_ray_is_identity(golay24_rays, seed):
    assert translate_basis(seed, 1, golay24_rays) == seed
    assert translate_basis(seed, 2, golay24_rays) == Basis(GOLAY24_ROW_2)


def test_translation_rejects_invalid_seed(golay24_rays):
    with pytest.raises(BasisError):
        generate_translated_system(Basis(GOLAY24_SEED[1:] + (2048,)), golay24_rays)


def test_translation_needs_binary(golay12_rays):
    with pytest.raises(RayInputError):
        translate_basis(Basis((1, 2)), 1, golay12_rays)


def test_weight9_enumeration(weight9_bases):
    assert len(weight9_bases) == 495
    assert set(weight9_bases.occurrence.values()) == {27}
    assert len(weight9_bases.occurrence) == 220
    assert list(weight9_bases.bases) == sorted(weight9_bases.bases)


def test_enumeration_ignores_input_order(weight9_rays, weight9_bases):
    labels = weight9_rays.labels
    random.Random(7).shuffle(labels)
    shuffled = weight9_rays.subsystem(labels, system_id="shuffled")
    assert enumerate_all_bases(shuffled).bases == weight9_bases.bases


def test_enumeration_is_worker_independent(weight9_rays, weight9_bases):
    assert enumerate_all_bases(weight9_rays, workers=2).bases == weight9_bases.bases


def test_enumeration_budget(weight9_rays):
    with pytest.raises(BudgetExhaustedError) as exc:
        enumerate_all_bases(weight9_rays, budget=10)
    assert exc.value.nodes > 10


def test_enumeration_size_must_match(weight9_rays):
    with pytest.raises(BasisError):
        enumerate_all_bases(weight9_rays, size=11)


def test_binary_enumeration_is_gated(golay24_rays):
    with pytest.raises(ExpensiveOperationError):
        enumerate_all_bases(golay24_rays)


@pytest.mark.slow
def test_full_ternary_enumeration(ternary_bases):
    assert len(ternary_bases) == 140647
    assert sorted(ternary_bases.occurrence.values()).count(27) == 220


def test_seed_search_on_weight9(weight9_rays):
    result = find_seed_basis(weight9_rays)
    assert result.status == "found"
    verify_basis(result.basis, weight9_rays)


def test_seed_search_without_pairs(golay24):
    rs = build_ray_system(puncture(golay24, 23))
    result = find_seed_basis(rs)
    assert (result.basis, result.status) == (None, "absent")


def test_seed_search_budget(golay12_rays):
    result = find_seed_basis(golay12_rays, budget=3)
    assert result.status == "exhausted"
    assert result.basis is None


@pytest.mark.parametrize("anchors", [GOLAY24_SEED[:4], GOLAY24_SEED[4:8], GOLAY24_SEED[8:12]])
def test_restricted_enumeration(restrictions, anchors):
    bs = restrictions(anchors)
    assert bs.basis_size == 20
    assert len(bs.ray_system) == 280
    assert len(bs) > 1
    assert Basis(tuple(x for x in GOLAY24_SEED if x not in anchors)) in bs.bases
    for b in bs.bases:
        verify_basis(b, bs.ray_system)


def test_seed_restriction_counts(restrictions):
    bs = restrictions(GOLAY24_SEED[:4])
    assert bs.system_id == "golay24-r1-127-128-136"
    assert len(bs) == 72
    assert sorted(bs.occurrence.values()).count(0) == 48


def test_punctured_ternary_has_no_bases():
    rs = build_ray_system(puncture(golay_ternary_generator(), 11))
    assert len(rs) == 364
    assert rs.effective_dimension == 11
    assert len(enumerate_all_bases(rs)) == 0


def test_random_translations_map_bases_to_bases(golay24_rays, translated):
    rng = random.Random(11)
    table = set(translated.bases)
    for _ in range(40):
        b = rng.choice(translated.bases)
        moved = translate_basis(b, rng.randint(1, 2048), golay24_rays)
        verify_basis(moved, golay24_rays)
        assert moved in table


def test_bases_document_round_trip(tmp_path, weight9_bases):
    path = write_json(tmp_path / "w9.bases.json", bases_document(weight9_bases))
    loaded = load_bases(path)
    assert loaded.ray_system is None
    assert loaded.bases == weight9_bases.bases
    assert loaded.occurrence == weight9_bases.occurrence
    assert loaded.basis_size == 12


def test_translation_document_keeps_matrix(tmp_path, translated):
    path = write_json(tmp_path / "t.bases.json", bases_document(translated))
    loaded = load_bases(path)
    assert loaded.ordering == "translation-table"
    assert loaded.matrix[1] == GOLAY24_ROW_2


def test_label_only_system_checks_sizes():
    with pytest.raises(BasisError):
        BasisSystem([Basis((1, 2)), Basis((1, 2, 3))])
