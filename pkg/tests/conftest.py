"""Shared fixtures: small spectral contexts and a reference ladder fixture."""

import random
from fractions import Fraction

import pytest

import hypboot as hb


@pytest.fixture(scope="session")
def genus2_small():
    """Genus-2 context with rational Laplace entries (0, 2, 16), horizon 4."""
    top = hb.TopologicalType(2, ())
    holo = hb.holomorphic_spectrum(top, 4)
    lam = (Fraction(0), Fraction(2), Fraction(16))
    ctx = hb.SpectralContext(hb.LaplaceSpectrum(lam, lam[-1]), holo)
    return ctx, hb.Window(2, 4)


@pytest.fixture(scope="session")
def ladder_fixture():
    """Genus-2 ladder fixture on window (6, 12), seeded on the first family.

    Laplace values are rational so the generator can track exact squared
    magnitudes; the identity channel carries the forced diagonal value -1.
    """
    top = hb.TopologicalType(2, ())
    holo = hb.holomorphic_spectrum(top, 12)
    rng = random.Random(5)
    lam = [Fraction(0)]
    for _ in range(6):
        lam.append(lam[-1] + Fraction(round(rng.uniform(0.8, 4.0) * 10**3), 10**3))
    ctx = hb.SpectralContext(hb.LaplaceSpectrum(tuple(lam), lam[-1]), holo)
    window = hb.Window(6, 12)
    base = (Fraction(-1), Fraction(7, 20), Fraction(-2, 5), Fraction(1, 4),
            Fraction(1, 5), Fraction(3, 20), Fraction(1, 10))
    seed = hb.LadderSeed(1, holo.weight(1), {(r, 0): v for r, v in enumerate(base)})
    raw = hb.generate_ladder(ctx, window, seed)
    full = hb.fill_se4_diagonal(hb.fill_unit(hb.extend_hb3_closure(raw)))
    return {"ctx": ctx, "window": window, "raw": raw, "full": full,
            "lam": tuple(lam), "seed": seed}


@pytest.fixture(scope="session")
def ladder_report(ladder_fixture):
    """check_all on the reference fixture, shared by everything that only reads it."""
    return hb.check_all(ladder_fixture["full"], ladder_fixture["window"])
