"""Tests for Weierstrass reduction data, point counts, and Frobenius roots."""

import math

import pytest

from mazurtate.curves import CURVES, curve, qexp_coeffs
from mazurtate.ellcurve import (
    ECurve,
    FrobeniusRoot,
    gf_point_count,
    local_p_torsion,
    p_torsion_from_trace,
)
from mazurtate.errors import BadReduction, SmallPrimeUnsupported

E11 = curve("11a1")
E14 = curve("14a1")
E37 = curve("37a1")
E32 = curve("32a1")


def _a_ell_character_sum(E, ell):
    """Independent a_ell via the quadratic character sum for odd good ell.

    Completing the square turns y^2 + (a1 x + a3) y = f(x) into
    u^2 = (a1 x + a3)^2 + 4 f(x), so each x carries 1 + chi(rhs) points.
    """
    assert ell % 2 == 1 and E.disc % ell != 0
    total = 1  # infinity
    for x in range(ell):
        f = (x**3 + E.a2 * x * x + E.a4 * x + E.a6) % ell
        rhs = ((E.a1 * x + E.a3) ** 2 + 4 * f) % ell
        if rhs == 0:
            total += 1
        else:
            total += 1 + (1 if pow(rhs, (ell - 1) // 2, ell) == 1 else -1)
    return ell + 1 - total


def test_a_ell_against_character_sum():
    for E in (E11, E14, E37, E32):
        for ell in (3, 5, 7, 13, 19, 23, 29):
            if E.disc % ell == 0:
                continue
            assert E.a_ell(ell) == _a_ell_character_sum(E, ell)


def test_a_ell_known_values():
    # first ten q-expansion coefficients, [Cremona, Tables 1]
    assert qexp_coeffs(E11, 10) == [1, -2, -1, 2, 1, 2, -2, 0, -2, -2]
    assert qexp_coeffs(E14, 10) == [1, -1, -2, 1, 0, 2, 1, -1, 1, 0]
    assert qexp_coeffs(E37, 10) == [1, -2, -3, 2, -2, 6, -1, 0, 6, 4]
    assert qexp_coeffs(E32, 10) == [1, 0, 0, 0, -2, 0, 0, 0, -3, 0]


def test_qexp_multiplicativity():
    """a_{mn} = a_m a_n for coprime m, n and the Hecke recursion at p^2."""
    for E in (E11, E37):
        a = [0] + qexp_coeffs(E, 200)
        for m in (2, 3, 4, 5, 7, 9):
            for n in (5, 7, 11, 13):
                if math.gcd(m, n) == 1:
                    assert a[m * n] == a[m] * a[n]
        for ell in (3, 5, 7, 13):
            if E.N % ell:
                assert a[ell * ell] == a[ell] ** 2 - ell
            else:
                assert a[ell * ell] == a[ell] ** 2


def test_reduction_classification():
    assert E11.classify_reduction(11).kind == "split"
    assert E14.classify_reduction(2).kind == "nonsplit"
    assert E14.classify_reduction(7).kind == "split"
    assert E37.classify_reduction(37).kind == "nonsplit"
    assert E32.classify_reduction(2).kind == "additive"
    assert E11.classify_reduction(3).kind == "good"
    assert E11.a_ell(11) == 1
    assert E14.a_ell(2) == -1 and E14.a_ell(7) == 1
    assert E37.a_ell(37) == -1
    assert E32.a_ell(2) == 0


def test_small_prime_requires_table():
    bare = ECurve((0, -1, 1, -10, -20), 11)
    assert bare.a_ell(2) == -2  # good reduction needs no table
    stripped = ECurve((1, 0, 1, 4, -6), 14)
    with pytest.raises(SmallPrimeUnsupported):
        stripped.classify_reduction(2)


def test_count_points_raises_at_bad_primes():
    with pytest.raises(BadReduction):
        E11.count_points(11)


def test_registry_curves_validate():
    for label, E in CURVES.items():
        assert E.label == label
        assert E.N == {"11a1": 11, "14a1": 14, "37a1": 37, "32a1": 32}[label]


def test_frobenius_root_satisfies_characteristic_poly():
    for a, c, p in ((-2, 2, 3), (1, 5, 3), (-1, 7, 5), (0, 3, 5), (2, 13, 7)):
        fr = FrobeniusRoot(a, c, p)
        # alpha^2 - a alpha + c = 0 in F_p[w]/(w^2 - D)
        sq = fr.power(2)
        lin = fr.power(1)
        u = (sq[0] - a * lin[0] + c) % p
        v = (sq[1] - a * lin[1]) % p
        assert (u, v) == (0, 0)
        if fr.mult_order() is not None:
            assert fr.power_is_one(fr.mult_order())


def test_local_p_torsion_matches_enumeration():
    """p | #E(F_{ell^f}) from Frobenius traces agrees with direct counts."""
    for E in (E11, E14, E37):
        for ell, f in ((3, 1), (3, 2), (5, 1), (5, 2), (13, 1), (7, 2)):
            if E.disc % ell == 0:
                continue
            npts = gf_point_count(E, ell, f)
            for p in (3, 5, 7):
                if p == ell:
                    continue
                assert local_p_torsion(E, ell, f, p) == (npts % p == 0)


def test_gf_point_count_degree_one_consistency():
    for E in (E11, E14, E37, E32):
        for ell in (3, 5, 13):
            if E.disc % ell == 0:
                continue
            assert gf_point_count(E, ell, 1) == E.count_points(ell)


def test_p_torsion_from_trace_at_multiplicative_primes():
    """At c = 0 the unit root alpha = a drives the torsion criterion."""
    # split (a=1): 1 - 1^f = 0, so p-torsion for every f
    assert p_torsion_from_trace(1, 0, 1, 5)
    # nonsplit (a=-1): 1 - (-1)^f vanishes mod p only for even f
    assert not p_torsion_from_trace(-1, 0, 1, 5)
    assert p_torsion_from_trace(-1, 0, 2, 5)


def test_anomalous_primes():
    """a_p = 1 mod p makes p | #E(F_p): 5 for 11a1 and 3 for 14a1 [MTT, §13]."""
    assert E11.a_ell(5) == 1 and E11.count_points(5) % 5 == 0
    assert E14.a_ell(3) == -2 and E14.count_points(3) % 3 == 0
    assert E37.count_points(3) % 3 != 0
