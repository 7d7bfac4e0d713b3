"""Topological types, modular-form dimensions and holomorphic spectra."""

from collections import Counter
from fractions import Fraction

import pytest

import hypboot as hb
from hypboot.errors import DomainError


def test_genus2_dimensions():
    g2 = hb.TopologicalType(2, ())
    assert hb.dim_modular_forms(g2, 1) == 2
    assert hb.dim_modular_forms(g2, 4) == 7


def test_surface_dimension_closed_forms():
    # (g-1)(2k-1) for k >= 2, g for k = 1, on every bare surface type
    for g in range(2, 7):
        top = hb.TopologicalType(g, ())
        assert hb.dim_modular_forms(top, 1) == g
        for k in range(2, 9):
            assert hb.dim_modular_forms(top, k) == (g - 1) * (2 * k - 1)


def test_237_triangle_dimensions():
    t = hb.TopologicalType(0, (2, 3, 7))
    assert [hb.dim_modular_forms(t, k) for k in range(1, 6)] == [0, 0, 0, 0, 0]
    assert hb.dim_modular_forms(t, 6) == 1


def test_small_weight_rows():
    # each type admits a form at its designated weight
    rows = [
        (hb.TopologicalType(1, (2,)), 1),
        (hb.TopologicalType(0, (2, 2, 2, 3)), 2),
        (hb.TopologicalType(0, (3, 3, 4)), 3),
        (hb.TopologicalType(0, (2, 4, 5)), 4),
        (hb.TopologicalType(0, (2, 3, 7)), 6),
    ]
    for top, k in rows:
        assert hb.dim_modular_forms(top, k) >= 1


def test_holomorphic_spectrum_multiplicities():
    hs = hb.holomorphic_spectrum(hb.TopologicalType(2, ()), 6)
    assert dict(Counter(hs.entries)) == {1: 2, 2: 3, 3: 5, 4: 7, 5: 9, 6: 11}
    g3 = hb.holomorphic_spectrum(hb.TopologicalType(3, ()), 2)
    assert dict(Counter(g3.entries)) == {1: 3, 2: 6}


def test_spectrum_entries_sorted_and_bounded():
    hs = hb.holomorphic_spectrum(hb.TopologicalType(2, (3, 5)), 7)
    assert list(hs.entries) == sorted(hs.entries)
    assert all(1 <= k <= 7 for k in hs.entries)
    assert hs.horizon == 7


def test_non_hyperbolic_rejected():
    with pytest.raises(DomainError):
        hb.holomorphic_spectrum(hb.TopologicalType(0, ()), 2)
    with pytest.raises(DomainError):
        hb.dim_modular_forms(hb.TopologicalType(1, ()), 3)  # torus, chi = 0
    with pytest.raises(DomainError):
        hb.dim_modular_forms(hb.TopologicalType(0, (2, 2)), 1)


def test_euler_characteristic():
    assert hb.orbifold_euler_characteristic(hb.TopologicalType(2, ())) == -2
    assert hb.orbifold_euler_characteristic(
        hb.TopologicalType(0, (2, 3, 7))) == Fraction(-1, 42)
    assert hb.is_hyperbolic(hb.TopologicalType(2, ()))
    assert hb.is_hyperbolic(hb.TopologicalType(0, (2, 3, 7)))
    assert not hb.is_hyperbolic(hb.TopologicalType(1, ()))
    assert not hb.is_hyperbolic(hb.TopologicalType(0, (2, 2)))


def test_cone_orders_validated():
    with pytest.raises(DomainError):
        hb.TopologicalType(2, (1,))
    with pytest.raises(DomainError):
        hb.TopologicalType(-1, ())
