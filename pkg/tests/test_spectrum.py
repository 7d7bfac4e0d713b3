"""Candidate-spectrum storage, the ladder generator, and the disk format."""

import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import hypboot as hb
from hypboot.errors import DomainError, HorizonError, ParseError


def _basic(genus2_small, entries):
    ctx, window = genus2_small
    return hb.from_triples(ctx, window, entries)


def test_absent_and_outside_triples_read_zero(genus2_small):
    spec = _basic(genus2_small, [])
    assert spec.get(hb.Index(1, 0), hb.Index(1, 0), hb.Index(2, 0)) == 0
    # (-1, 0) is outside the index set: convention forces an exact 0
    assert spec.get(hb.Index(-1, 0), hb.Index(1, 1), hb.Index(1, 1)) == 0


def test_weight_support_enforced_on_ingest(genus2_small):
    with pytest.raises(DomainError):
        _basic(genus2_small, [(hb.Index(1, 0), hb.Index(1, 0), hb.Index(2, 1), 0.2)])


def test_symmetrized_read(genus2_small):
    i, j, l = hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)
    spec = _basic(genus2_small, [(i, j, l, 0.7)])
    assert spec.get(j, i, l) == 0.7
    assert spec.count == 1


def test_conjugation_closure(genus2_small):
    i, j, l = hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)
    spec = hb.extend_hb3_closure(_basic(genus2_small, [(i, j, l, 0.25 + 0.5j)]))
    got = spec.get(hb.bar(i), hb.bar(j), hb.bar(l))
    assert got == 0.25 - 0.5j


def test_unit_fill(genus2_small):
    ctx, window = genus2_small
    spec = hb.fill_unit(_basic(genus2_small, []))
    assert spec.get(hb.Index(0, 0), hb.Index(2, 1), hb.Index(2, 1)) == 1
    assert spec.get(hb.Index(0, 0), hb.Index(2, 1), hb.Index(1, 1)) == 0
    assert hb.check_hb4(spec, window).max_residual == 0


def test_se4_diagonal_fill(genus2_small):
    spec = hb.fill_se4_diagonal(hb.fill_unit(_basic(genus2_small, [])))
    i = hb.Index(-1, 1)
    assert spec.get(i, hb.bar(i), hb.Index(0, 0)) == -1
    assert spec.get(hb.Index(1, 2), hb.Index(1, -2), hb.Index(0, 0)) == 1


def test_ladder_seed_validation(genus2_small):
    ctx, window = genus2_small
    with pytest.raises(DomainError):
        hb.LadderSeed(0, 1, {})
    with pytest.raises(DomainError):
        hb.LadderSeed(1, 1, {(0, 1): 1.0})  # seed channel must sit at weight 0
    with pytest.raises(DomainError):
        # weight mismatch with the declared family
        hb.generate_ladder(ctx, window, hb.LadderSeed(1, 2, {(1, 0): 1.0}))
    with pytest.raises(HorizonError):
        hb.generate_ladder(ctx, window, hb.LadderSeed(1, 1, {(9, 0): 1.0}))


def test_ladder_seed_slice_and_first_step(genus2_small):
    ctx, window = genus2_small
    seed = hb.LadderSeed(1, 1, {(1, 0): F(1, 2), (2, 0): F(-1, 4)})
    spec = hb.generate_ladder(ctx, window, seed)
    i0 = hb.Index(-1, 1)
    assert spec.get(hb.bar(i0), i0, hb.Index(1, 0)) == F(1, 2)
    assert spec.get(hb.bar(i0), i0, hb.Index(2, 0)) == F(-1, 4)
    # |C at n=1|^2 / |C at n=0|^2 = lam_r / (2k), channel by channel
    for r, lam in ((1, F(2)), (2, F(16))):
        top = spec.get_squared(hb.bar(i0), hb.Index(-1, 2), hb.Index(r, 1))
        bot = spec.get_squared(hb.bar(i0), i0, hb.Index(r, 0))
        assert top / bot == lam / 2


def test_ladder_restricted_residual(ladder_fixture):
    report = hb.check_hb5(ladder_fixture["raw"], ladder_fixture["window"])
    assert report.instances > 0
    assert report.max_residual < 1e-12


# --- disk format ---------------------------------------------------------------

def test_round_trip_byte_identity(ladder_fixture):
    data = hb.serialize(ladder_fixture["full"])
    again = hb.serialize(hb.deserialize(data))
    assert again == data


def test_serialized_document_shape(ladder_fixture):
    doc = json.loads(hb.serialize(ladder_fixture["full"]))
    assert doc["version"] == "1"
    assert doc["window"] == {"r1": 6, "r2": 12}
    assert all(set(e) == {"i", "j", "l", "re", "im"} for e in doc["C"])
    for e in doc["C"]:
        for field in ("re", "im"):
            assert "e" not in e[field] and "E" not in e[field]
            assert not e[field].endswith(".0")
            assert e[field] != "-0"


def test_deserialize_accepts_exponent_and_rational_forms(genus2_small):
    spec = _basic(genus2_small, [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), 0.5)])
    doc = json.loads(hb.serialize(spec))
    doc["C"][0]["re"] = "5e-1"
    assert hb.deserialize(json.dumps(doc)).get(
        hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)) == 0.5
    doc["C"][0]["re"] = "1/2"
    assert hb.deserialize(json.dumps(doc)).get(
        hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)) == 0.5


def test_deserialize_validation_errors(genus2_small):
    spec = _basic(genus2_small, [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), 0.5)])
    base = json.loads(hb.serialize(spec))

    bad = json.loads(json.dumps(base))
    bad["C"][0]["l"] = [1, 1]
    with pytest.raises(ParseError, match="weights"):
        hb.deserialize(json.dumps(bad))

    bad = json.loads(json.dumps(base))
    bad["frobnicate"] = True
    with pytest.raises(ParseError, match="unknown"):
        hb.deserialize(json.dumps(bad))

    bad = json.loads(json.dumps(base))
    bad["C"][0]["i"] = [-1, 0]
    bad["C"][0]["j"] = [-1, 0]
    bad["C"][0]["l"] = [1, 0]
    with pytest.raises(ParseError, match="index"):
        hb.deserialize(json.dumps(bad))

    bad = json.loads(json.dumps(base))
    bad["C"][0]["re"] = "zz"
    with pytest.raises(ParseError):
        hb.deserialize(json.dumps(bad))


def test_deserialize_empty_C_is_valid(genus2_small):
    spec = _basic(genus2_small, [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), 0.5)])
    doc = json.loads(hb.serialize(spec))
    doc["C"] = []
    empty = hb.deserialize(json.dumps(doc))
    assert empty.count == 0
    assert empty.get(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)) == 0


def test_duplicate_orientations_keep_first_and_record_gap(genus2_small):
    spec = _basic(genus2_small, [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), 1.0)])
    doc = json.loads(hb.serialize(spec))
    swapped = dict(doc["C"][0])
    swapped["i"], swapped["j"] = swapped["j"], swapped["i"]
    swapped["re"] = "0"
    doc["C"].append(swapped)
    foreign = hb.deserialize(json.dumps(doc))
    assert foreign.get(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)) == 1.0
    assert len(foreign.ingest_asymmetry) == 1
    (key, gap), = foreign.ingest_asymmetry
    assert gap == 1.0


def test_exact_annotations_survive_round_trip(genus2_small):
    i, j, l = hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)
    spec = _basic(genus2_small, [(i, j, l, F(-3, 8))])
    back = hb.deserialize(hb.serialize(spec))
    assert back.get_exact(i, j, l) == F(-3, 8)
    assert back.get_squared(i, j, l) == F(9, 64)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-4, max_value=4).filter(lambda q: q != 0 and q.denominator < 10**6))
def test_round_trip_preserves_rationals(q):
    top = hb.TopologicalType(2, ())
    holo = hb.holomorphic_spectrum(top, 4)
    lam = (F(0), F(2), F(16))
    ctx = hb.SpectralContext(hb.LaplaceSpectrum(lam, lam[-1]), holo)
    spec = hb.from_triples(ctx, hb.Window(2, 4),
                           [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), q)])
    back = hb.deserialize(hb.serialize(spec))
    assert back.get_exact(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0)) == q
    assert hb.serialize(back) == hb.serialize(spec)
