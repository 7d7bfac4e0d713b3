"""Residual checkers for the six equation families and their consequences."""

import json
from fractions import Fraction as F

import pytest

import hypboot as hb


def _spec(genus2_small, entries):
    ctx, window = genus2_small
    return hb.from_triples(ctx, window, entries)


# --- hb1 / hb2 ---------------------------------------------------------------

def test_hb1_zero_on_canonical_store(ladder_fixture):
    report = hb.check_hb1(ladder_fixture["full"], ladder_fixture["window"])
    assert report.max_residual == 0
    assert report.instances > 0


def test_hb1_catches_foreign_asymmetry(genus2_small):
    spec = _spec(genus2_small, [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), 1.0)])
    doc = json.loads(hb.serialize(spec))
    other = dict(doc["C"][0])
    other["i"], other["j"] = other["j"], other["i"]
    other["re"] = "0"
    doc["C"].append(other)
    foreign = hb.deserialize(json.dumps(doc))
    stats = hb.check_hb1(foreign, foreign.window)
    assert stats.max_residual == 1.0
    assert stats.violations >= 1


def test_hb2_structurally_zero(ladder_fixture):
    report = hb.check_hb2(ladder_fixture["full"], ladder_fixture["window"])
    assert report.max_residual == 0


# --- hb3 ----------------------------------------------------------------------

def test_hb3_weight_zero_reality(genus2_small):
    triple = (hb.Index(1, 0), hb.Index(1, 0), hb.Index(2, 0))
    real = _spec(genus2_small, [(*triple, 0.7)])
    assert hb.check_hb3(real, real.window).max_residual == 0
    crooked = _spec(genus2_small, [(*triple, 0.7 + 0.3j)])
    stats = hb.check_hb3(crooked, crooked.window)
    assert stats.max_residual == pytest.approx(0.6)  # 2 |Im C|


def test_hb3_zero_after_closure(genus2_small):
    spec = hb.extend_hb3_closure(
        _spec(genus2_small, [(hb.Index(1, 1), hb.Index(2, -1), hb.Index(1, 0), 0.2 + 0.4j)]))
    assert hb.check_hb3(spec, spec.window).max_residual == 0


# --- hb4 / l0 diagonal ----------------------------------------------------------

def test_hb4_unit_filled(genus2_small):
    ctx, window = genus2_small
    spec = hb.fill_unit(_spec(genus2_small, []))
    stats = hb.check_hb4(spec, window)
    assert stats.max_residual == 0
    assert stats.instances > 0


def test_l0_diagonal_on_normalized_data(genus2_small):
    ctx, window = genus2_small
    spec = hb.fill_se4_diagonal(hb.fill_unit(_spec(genus2_small, [])))
    stats = hb.check_l0_diagonal(spec, window)
    assert stats.max_residual == 0
    assert stats.instances > 0


# --- hb5 and its inverted mirror -------------------------------------------------

def test_hb5_on_ladder(ladder_fixture):
    stats = hb.check_hb5(ladder_fixture["full"], ladder_fixture["window"])
    assert stats.instances > 0
    assert stats.max_residual < 1e-12


def test_hb5_inverted_mirrors(ladder_fixture):
    stats = hb.check_hb5_inverted(ladder_fixture["full"], ladder_fixture["window"])
    assert stats.instances > 0
    assert stats.max_residual < 1e-12


def test_hb5_all_zero(genus2_small):
    ctx, window = genus2_small
    stats = hb.check_hb5(_spec(genus2_small, []), window, mode="window")
    assert stats.max_residual == 0


def test_hb5_annihilated_lhs_constrains_rhs(genus2_small):
    # at l = (0,0) the lowering coefficient is sqrt(lam_0) = 0, so the
    # instance becomes a pure constraint on the two raised triples
    ctx, window = genus2_small
    i, j = hb.Index(-1, -2), hb.Index(-1, 1)
    cancelling = _spec(genus2_small, [
        (hb.raise_(i), j, hb.Index(0, 0), -1.0),
        (i, hb.raise_(j), hb.Index(0, 0), 1.0),
    ])
    assert hb.check_hb5(cancelling, window).max_residual == 0
    equal_signs = _spec(genus2_small, [
        (hb.raise_(i), j, hb.Index(0, 0), 1.0),
        (i, hb.raise_(j), hb.Index(0, 0), 1.0),
    ])
    stats = hb.check_hb5(equal_signs, window)
    assert stats.instances == 1
    assert stats.max_residual == pytest.approx(2 * 2 ** 0.5)


def test_num_recursion_on_ladder(ladder_fixture):
    stats = hb.check_num_recursion(ladder_fixture["full"], ladder_fixture["window"])
    assert stats.instances > 0
    assert stats.max_residual < 1e-10


# --- hb6 ---------------------------------------------------------------------------

def test_hb6_unit_quadruple(genus2_small):
    ctx, window = genus2_small
    spec = hb.fill_unit(_spec(genus2_small, []))
    z = hb.Index(0, 0)
    stats = hb.check_hb6(spec, window, quadruples=[(z, z, z, z)])
    assert stats.instances == 1
    assert stats.max_residual == 0


def test_hb6_all_zero(genus2_small):
    ctx, window = genus2_small
    z = hb.Index(0, 0)
    stats = hb.check_hb6(_spec(genus2_small, []), window, quadruples=[(z, z, z, z)])
    assert stats.max_residual == 0


def test_hb6_reduces_to_sign_law_at_origin(genus2_small):
    # primed pair at the origin: the identity collapses to the alternating
    # diagonal values C_{i bar(i)}^{(0,0)} = (-1)^(i2), given the unit rows
    ctx, window = genus2_small
    z = hb.Index(0, 0)
    i = hb.Index(-1, -1)
    good = hb.fill_se4_diagonal(hb.fill_unit(_spec(genus2_small, [])))
    ok = hb.check_hb6(good, window, quadruples=[(i, hb.bar(i), z, z)])
    assert ok.instances == 1 and ok.max_residual == 0
    flipped = hb.fill_unit(_spec(genus2_small, [(i, hb.bar(i), z, 1.0)]))
    bad = hb.check_hb6(flipped, window, quadruples=[(i, hb.bar(i), z, z)])
    assert bad.max_residual == pytest.approx(2.0)


def test_hb6_diagnostic_on_ladder(ladder_report):
    # honest diagnostic: a synthetic one-family fixture is not orbifold data,
    # so the quadratic identity genuinely fails while hb1-hb5 hold
    by_name = {e.equation: e for e in ladder_report.entries}
    assert by_name["hb6_crossing"].max_residual > 1.0


# --- aggregation and exact modes ------------------------------------------------

def test_check_all_aggregates(ladder_report):
    report = ladder_report
    names = [e.equation for e in report.entries]
    assert names == ["hb1_symmetry", "hb2_weight", "hb3_conjugation", "hb4_unit",
                     "hb5_lowering", "hb5_inverted", "num_recursion",
                     "l0_diagonal", "hb6_crossing"]
    enforced = [e for e in report.entries if e.equation != "hb6_crossing"]
    assert max(e.max_residual for e in enforced) < 1e-10
    assert report.mode == "support"


def test_exact_hb5_squared_is_exactly_zero(ladder_fixture):
    instances, skipped, worst = hb.exact_hb5_squared(
        ladder_fixture["full"], ladder_fixture["window"])
    assert instances > 400
    assert worst == 0


def test_exact_num_recursion_is_exactly_zero(ladder_fixture):
    instances, skipped, worst = hb.exact_num_recursion(
        ladder_fixture["full"], ladder_fixture["window"])
    assert instances > 300
    assert worst == 0


def test_corruption_detected(ladder_fixture):
    doc = json.loads(hb.serialize(ladder_fixture["full"]))
    # kick one stored magnitude by 5 percent
    target = None
    for e in doc["C"]:
        if e["l"] == [1, 3] and e["re"] not in ("0", "1", "-1"):
            target = e
            break
    assert target is not None
    target["re"] = str(float(F(target["re"])) * 1.05)
    corrupted = hb.deserialize(json.dumps(doc))
    flagged = [check(corrupted, corrupted.window)
               for check in (hb.check_hb5, hb.check_hb5_inverted, hb.check_num_recursion)]
    assert max(e.max_residual for e in flagged) > 1e-3
    assert any(e.violations for e in flagged)
    assert all(e.worst is not None for e in flagged if e.violations)
