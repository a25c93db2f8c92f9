"""Tests for finite-level theta elements and their compatibilities [MTT, §1]."""

import math
from fractions import Fraction

import pytest

from mazurtate.arith import CycElt
from mazurtate.chars import DirichletChar, canonical_wild_char
from mazurtate.curves import curve
from mazurtate.errors import ConductorError, ConductorMismatch, NoConventionMatches
from mazurtate.theta import (
    LambdaNPoly,
    ThetaPoly,
    c_sequence,
    check_eval_compat,
    check_tame_compat,
    check_vertical,
    euler_h,
    mazur_tate,
    mazur_tate_raw,
    omega_n,
    twist,
)

E11 = curve("11a1")
E14 = curve("14a1")
E37 = curve("37a1")
QUAD5 = DirichletChar(5, [2])
QUAD7 = DirichletChar(7, [3])


# ----------------------------------------------------------------------
# group-ring polynomial algebra


def test_unit_power_is_multiplicative():
    """(1+T)^a (1+T)^b = (1+T)^{a+b}, with exponents wrapping mod p^n."""
    p, n = 3, 2
    for a in (0, 1, 4, 8):
        for b in (0, 2, 7, 8):
            lhs = LambdaNPoly.unit_power(p, n, a) * LambdaNPoly.unit_power(p, n, b)
            assert lhs == LambdaNPoly.unit_power(p, n, (a + b) % p**n)


def test_lambda_poly_ring_ops():
    p, n = 3, 1
    f = LambdaNPoly(p, n, [1, 2, 0])
    g = LambdaNPoly(p, n, [0, 1, 1])
    assert f + g - g == f
    assert (f - f).is_zero()
    assert f.scale(3) == f + f + f
    assert (-f) + f == LambdaNPoly.zero(p, n)
    assert f * g == g * f


def test_t_coeffs_binomial_transform():
    """a_i = sum_t binom(t, i) b_t; for (1+T)^t that is the binomial row."""
    p, n, t = 3, 2, 5
    tc = LambdaNPoly.unit_power(p, n, t).t_coeffs()
    for i, c in enumerate(tc):
        assert c.rational_value() == math.comb(t, i)


def test_eval_at_root_matches_direct_sum():
    p, n = 3, 2
    f = LambdaNPoly(p, n, list(range(1, 10)))
    for i in (0, 1, 2):
        q = p**i
        direct = CycElt.zero(1)
        for t, c in enumerate(f.coeffs):
            direct = direct + c * CycElt.root_of_unity(q, t % q)
        assert f.eval_at_root(i) == direct
    assert f.eval_at_root(0).rational_value() == sum(range(1, 10))


def test_proj_and_trace_adjunction():
    """pi(nu(F)) = p F and nu(pi(G)) = omega-trace of G."""
    p, n = 3, 1
    f = LambdaNPoly(p, n, [1, 5, -2])
    assert f.trace_up().proj_level() == f.scale(p)
    g = LambdaNPoly.unit_power(p, n, 1)
    assert omega_n(p, n) * g == g.proj_level().trace_up()


def test_subst_root_composes_with_eval():
    """Evaluating subst_root(j, m) at T = 0 gives F(zeta_{p^m}^j - 1)."""
    p, n = 3, 2
    f = LambdaNPoly(p, n, [Fraction(k * k - 4, 3) for k in range(9)])
    for m in (1, 2):
        for j in (1, 2):
            shifted = f.subst_root(j, m)
            direct = CycElt.zero(1)
            q = p**m
            for t, c in enumerate(f.coeffs):
                direct = direct + c * CycElt.root_of_unity(q, (j * t) % q)
            assert shifted.eval_at_root(0) == direct


def test_theta_poly_reduce_and_product():
    p = 3
    f = ThetaPoly(p, [1, 0, 0, 0, 2])  # 1 + 2(1+T)^4
    g = ThetaPoly(p, [0, 1])  # (1+T)
    prod = f * g
    assert prod.t_coeffs()[0] == 3  # value at T = 0 is f(0) g(0)
    red = prod.reduce(1)
    # (1+T) + 2(1+T)^5 folds exponents mod 3 to (1+T) + 2(1+T)^2
    assert red == LambdaNPoly(p, 1, [0, 1, 2])


# ----------------------------------------------------------------------
# theta elements


def test_theta_known_t_coeffs():
    assert mazur_tate(E11, 3, 1).rational_t_coeffs() == [
        Fraction(-1, 5), Fraction(-26, 5), Fraction(-17, 5)]
    assert mazur_tate(E11, 5, 1).rational_t_coeffs() == [
        Fraction(5), Fraction(-40), Fraction(-90), Fraction(-70), Fraction(-19)]
    assert mazur_tate(E37, 3, 1).rational_t_coeffs() == [
        Fraction(0), Fraction(-1), Fraction(-1)]
    assert mazur_tate(E14, 3, 1).rational_t_coeffs() == [
        Fraction(-3), Fraction(-3), Fraction(-4)]
    assert mazur_tate(E11, 3, 1, 5, QUAD5).rational_t_coeffs() == [
        Fraction(15), Fraction(15), Fraction(5)]


def test_theta_level_two_t_coeffs():
    assert mazur_tate(E11, 3, 2).rational_t_coeffs() == [
        Fraction(-8, 5), Fraction(-82, 5), Fraction(-508, 5),
        Fraction(-1137, 5), Fraction(-1362, 5), Fraction(-983, 5),
        Fraction(-432, 5), Fraction(-108, 5), Fraction(-12, 5)]


def test_theta_raw_unit_indexing():
    raw = mazur_tate_raw(E11, 3, 1, 5)
    units = {a for a in range(raw.modulus) if math.gcd(a, raw.modulus) == 1}
    assert set(raw.c) == units
    # symmetry c_{-a} relates to c_a through the involution eigenvalue
    total = sum(raw.c.values())
    assert total == sum(raw.c[raw.modulus - a] for a in raw.c)


def test_twist_rejects_oversized_conductor():
    raw = mazur_tate_raw(E11, 3, 1)
    with pytest.raises(ConductorMismatch):
        twist(raw, QUAD5)


def test_mazur_tate_rejects_bad_level():
    with pytest.raises(AssertionError):
        mazur_tate(E11, 11, 1)  # p divides the conductor
    with pytest.raises(AssertionError):
        mazur_tate(E11, 3, 1, 3)  # M divisible by p


def test_c_sequence_recursion():
    cs = c_sequence(E11, 3, 5)
    assert cs[0] == 0 and cs[1] == 1
    for m in range(2, 6):
        assert cs[m] == Fraction(E11.a_ell(3) * cs[m - 1] - cs[m - 2], 3)
    cs14 = c_sequence(E14, 7, 4)  # eps = 0 at the bad prime 7
    for m in range(2, 5):
        assert cs14[m] == Fraction(E14.a_ell(7) * cs14[m - 1], 7)


def test_euler_h_structure():
    """h = a_ell - psi(ell)(1+T)^t - eps psi(ell)^{-1}(1+T)^{-t}; h(0) pins the jump."""
    h = euler_h(E11, 3, 1, 2, DirichletChar.trivial(1))
    # t_1(2) = 2, so h = -2 - (1+T)^2 - (1+T)^1 with exponents mod 3
    assert h == LambdaNPoly(3, 1, [-2, -1, -1])
    assert h.eval_at_root(0).rational_value() == -4
    # ell | N drops the reciprocal term
    h11 = euler_h(E11, 3, 1, 11, DirichletChar.trivial(1))
    support = [t for t, c in enumerate(h11.coeffs) if not c.is_zero()]
    assert len(support) <= 2


def test_euler_h_rejects_p_and_vanishing_psi():
    with pytest.raises(ConductorError):
        euler_h(E11, 3, 1, 3, DirichletChar.trivial(1))
    with pytest.raises(ConductorError):
        euler_h(E11, 3, 1, 5, QUAD5)  # psi(5) = 0


def test_tame_compat_spot_checks():
    assert check_tame_compat(E11, 3, 1, 1, 2)
    assert check_tame_compat(E37, 3, 1, 1, 37)
    assert check_tame_compat(E11, 3, 1, 5, 19, QUAD5)


def test_vertical_convention():
    """One level-lowering convention holds uniformly for these curves."""
    assert check_vertical(E11, 3, 2) == "A"
    assert check_vertical(E14, 3, 2) == "A"
    assert check_vertical(E11, 5, 2) == "A"
    assert check_vertical(E37, 5, 2) == "A"


def test_eval_compat_interior():
    assert check_eval_compat(E11, 3, 2, 1, DirichletChar.trivial(1), 1)
    assert check_eval_compat(E37, 3, 2, 1, DirichletChar.trivial(1), 1)
    with pytest.raises(AssertionError):
        check_eval_compat(E11, 3, 2, 1, DirichletChar.trivial(1), 0)


def test_twist_by_wild_char_matches_subst():
    """Twisting by the canonical wild character is subst_root on the raw sum."""
    p, n = 3, 1
    chi = canonical_wild_char(p, 1)
    th = mazur_tate(E11, p, n, 1, chi)
    raw = mazur_tate_raw(E11, p, n, 1)
    assert not th.is_zero()
    # the chi-twist evaluated at T=0 equals sum_a chi(a) c_a
    direct = CycElt.zero(1)
    for a, ca in raw.c.items():
        direct = direct + chi.value(a) * ca
    assert th.eval_at_root(0) == direct
