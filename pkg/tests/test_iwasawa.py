"""Tests for finite-level mu/lambda invariants and tame lambda-jump bookkeeping."""

from fractions import Fraction

import pytest

from mazurtate.arith import CycElt
from mazurtate.chars import DirichletChar, canonical_wild_char
from mazurtate.curves import CURVES, curve
from mazurtate.errors import PrecisionExhausted, SkippedMuPositive
from mazurtate.iwasawa import (
    INFINITY,
    InvariantPair,
    check_transition,
    g_layer,
    g_psi,
    invariants,
    omega_signed,
    q_level,
    signed_growth_check,
    signed_scan,
)
from mazurtate.theta import LambdaNPoly, mazur_tate

E11 = curve("11a1")
E14 = curve("14a1")
E37 = curve("37a1")
QUAD5 = DirichletChar(5, [2])
TRIV = DirichletChar.trivial(1)


# ----------------------------------------------------------------------
# invariants of synthetic elements


def test_invariants_unit():
    f = LambdaNPoly.unit_power(3, 1, 0, 7)  # the constant 7
    assert invariants(f) == (0, 0)


def test_invariants_mu_positive():
    f = LambdaNPoly.unit_power(3, 2, 0, 9)
    assert invariants(f) == (2, 0)


def test_invariants_lambda():
    # (1+T)^1 - 1 = T
    f = LambdaNPoly.unit_power(3, 1, 1) - LambdaNPoly.unit_power(3, 1, 0)
    assert invariants(f) == (0, 1)
    # 3(1+T) + ((1+T)^2 - 1): t-coeffs (3, 5, 1) -> mu 0, lambda 1
    g = LambdaNPoly(3, 1, [-1, 3, 1])
    assert invariants(g) == (0, 1)


def test_invariants_zero_element():
    z = LambdaNPoly.zero(3, 2)
    pair = invariants(z)
    assert pair.mu == INFINITY and pair.lam == INFINITY


def test_invariants_fractional_mu():
    """Ramified coefficients give mu in (1/(p-1)) Z."""
    pi = CycElt.root_of_unity(3, 1) - 1
    f = LambdaNPoly(3, 1, [pi, 0, 0])
    pair = invariants(f)
    assert pair.mu == Fraction(1, 2) and pair.lam == 0


def test_invariants_level_bound_flag():
    # t-coeffs of (1+T) + (1+T)^2 - 2 are (0, 3, 1): lambda = 2 = p^n - p^{n-1}
    f = LambdaNPoly(3, 1, [-2, 1, 1])
    pair = invariants(f)
    assert pair.astuple() == (0, 2)
    assert pair.level_bound
    assert not invariants(LambdaNPoly.unit_power(3, 1, 1)).level_bound


def test_invariants_precision_exhausted():
    deep = (CycElt.root_of_unity(9, 1) - 1) * 3**6
    f = LambdaNPoly(3, 1, [deep, 0, 0])
    with pytest.raises(PrecisionExhausted):
        invariants(f, B=4)
    assert invariants(f, B=12).astuple() == (Fraction(37, 6), 0)


def test_invariant_pair_equality():
    assert InvariantPair(0, 3) == (0, 3)
    assert InvariantPair(0, 3) == InvariantPair(0, 3, level_bound=True)


# ----------------------------------------------------------------------
# theta invariants at the curves


def test_theta_invariants_known():
    assert invariants(mazur_tate(E11, 3, 1)) == (0, 0)
    assert invariants(mazur_tate(E11, 3, 2)) == (0, 0)
    assert invariants(mazur_tate(E37, 3, 1)) == (0, 1)
    # anomalous saturation at a_5 = 1: lambda = p^n - 1 at every level
    assert invariants(mazur_tate(E11, 5, 1)) == (0, 4)
    assert invariants(mazur_tate(E11, 5, 2)) == (0, 24)
    assert invariants(mazur_tate(E11, 5, 1)).level_bound
    # mu-positive twist: 14a1 times the even quadratic character mod 5
    assert invariants(mazur_tate(E14, 3, 1, 5, QUAD5)).mu == 2


# ----------------------------------------------------------------------
# expected lambda jumps


def test_g_layer():
    assert g_layer(2, 3, 1) == 1  # t_1(2) = 2, prime to 3
    assert g_layer(17, 3, 1) == 3  # 17 = -1 mod 9 has trivial 1-unit part
    assert g_layer(19, 3, 1) == 3  # 19 = 1 mod 9
    assert g_layer(19, 3, 2) == 3  # t_2(19) = 3, so ord_3 = 1
    assert g_layer(2, 5, 1) == 1


def test_g_psi_good_prime_cases():
    # a_2(11a1) = -2 and psi + psi^{-1} = 2: no congruence mod 3, no jump
    assert g_psi(E11, TRIV, 2, 3, 1) == 0
    # a_47(11a1) = 8 = 2 mod 3 meets the trivial-character test with a = 2:
    # doubled jump from the repeated Euler root [MTT, §17]
    assert E11.a_ell(47) == 8
    assert g_psi(E11, TRIV, 47, 3, 1) == 2 * g_layer(47, 3, 1) == 2
    # 14a1 at 47 with p = 5: a_47 = -3 vs 2, and 47 = 2 mod 5: no jump
    assert g_psi(E14, TRIV, 47, 5, 1) == 0


def test_g_psi_single_jump_case():
    """a_ell = psi + psi^{-1} mod pi with a_ell not +-2 mod p jumps by g."""
    # quad5(19) = 1 (19 = 4 mod 5 is a square), a_19(11a1) = 0, and
    # 0 - 1 - 1 = -2 != 0 mod 3 -> no jump for quad5
    assert g_psi(E11, QUAD5, 19, 3, 1) == 0
    # quad5(2) = -1: a_2 - (-1) - (-1) = 0 mod 3 and a_2 = -2 = +-2 mod 3
    assert g_psi(E11, QUAD5, 2, 3, 1) == 2 * g_layer(2, 3, 1) == 2


def test_g_psi_bad_prime_case():
    # ell | N: jump iff a_ell = psi(ell) mod pi
    assert g_psi(E11, TRIV, 11, 3, 1) == g_layer(11, 3, 1) == 1  # a_11 = 1
    assert g_psi(E37, TRIV, 37, 3, 1) == 0  # a_37 = -1 != 1 mod 3
    assert g_psi(E37, TRIV, 37, 5, 1) == 0
    assert g_psi(E14, TRIV, 7, 3, 1) == g_layer(7, 3, 1) == 1  # a_7 = 1


def test_g_psi_vanishing_character():
    assert g_psi(E11, QUAD5, 5, 3, 1) == 0


def test_g_psi_ignores_wild_part():
    """p-power-order factors of psi are = 1 mod pi and cannot change the test."""
    wild = canonical_wild_char(3, 1)
    mixed = QUAD5.extend_to_modulus(45) * wild.extend_to_modulus(45)
    for ell in (2, 7, 13, 19, 47):
        assert g_psi(E11, mixed, ell, 3, 1) == g_psi(E11, QUAD5, ell, 3, 1)
    assert g_psi(E11, wild, 2, 3, 1) == g_psi(E11, TRIV, 2, 3, 1)


# ----------------------------------------------------------------------
# transitions


def test_transition_ok():
    rep = check_transition(E11, 3, 1, 1, 2, TRIV)
    assert rep.status == "ok"
    assert rep.base.astuple() == (0, 0) and rep.extended.astuple() == (0, 0)
    assert rep.jump == 0


def test_transition_with_jump():
    rep = check_transition(E11, 3, 1, 1, 11, TRIV)
    assert rep.status == "ok"
    assert rep.jump == 1
    assert rep.extended.lam == rep.base.lam + 1


def test_transition_split_edge_skipped():
    # 127 = 1 mod 9 is completely split in the first layer and a_127 = 8
    # meets the congruence, so the expected jump 2 * 3 exceeds p^n
    rep = check_transition(E11, 3, 1, 1, 127, TRIV)
    assert rep.status == "skipped-split-edge"
    assert rep.jump == 6
    assert rep.base is None and rep.extended is None


def test_transition_lambda_saturated_skipped():
    # expected jump 2 on top of lambda = 2 would exceed p^n - 1 = 2
    rep = check_transition(E11, 3, 1, 5, 2, QUAD5)
    assert rep.status == "skipped-lambda-saturated"
    assert rep.base.astuple() == (0, 2) and rep.jump == 2


def test_transition_mu_positive_raises():
    with pytest.raises(SkippedMuPositive):
        check_transition(E14, 3, 1, 5, 2, QUAD5)


# ----------------------------------------------------------------------
# signed growth at supersingular p


def test_q_level():
    assert q_level(3, 1) == 0
    assert q_level(3, 2) == 2
    assert q_level(3, 3) == 6
    assert q_level(5, 2) == 4
    assert q_level(5, 3) == 20


def test_omega_signed_factorization():
    """omega_n^+ omega_n^- = omega of the full tower below n (up to units)."""
    p, n = 3, 2
    plus = omega_signed(p, n, 1)
    minus = omega_signed(p, n, -1)
    prod = plus * minus
    # (1+T)^{p^n} - 1 = T * prod_{1<=i<=n} Phi_{p^i}(1+T) = 0 in Lambda_n,
    # so T * plus * minus = 0 there
    t_poly = LambdaNPoly.unit_power(p, n, 1) - LambdaNPoly.unit_power(p, n, 0)
    assert (t_poly * prod).is_zero()
    assert not prod.is_zero()


def test_signed_growth_32a1():
    """lambda(Theta_n) = q_n for 32a1 at p = 3 (a_3 = 0) [MTT, §11]."""
    const, rows = signed_growth_check(curve("32a1"), 3)
    assert const == 0
    assert rows == [(1, 0, 0), (2, 0, 2), (3, 0, 6)]


def test_signed_growth_requires_supersingular():
    with pytest.raises(AssertionError):
        signed_growth_check(E11, 3)  # a_3(11a1) = -1 != 0


def test_signed_scan_table():
    out = signed_scan(CURVES, 3, levels=(1, 2))
    labels = [row[0] for row in out]
    assert "32a1" in labels
    assert "14a1" not in labels  # 3 is anomalous ordinary for 14a1
    for label, const, rows in out:
        for n, mu, lam in rows:
            assert mu == 0 and lam == q_level(3, n) + const
