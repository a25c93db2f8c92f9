"""Tests for Dirichlet characters, their groups, and abelian field data."""

import math
import random

import pytest

from mazurtate.arith import CycElt, euler_phi
from mazurtate.chars import (
    CharGroup,
    DirichletChar,
    canonical_wild_char,
    compute_nK,
    count_chars_vanishing,
    decompose_char,
    layer_field,
    splitting,
)
from mazurtate.errors import NotSubgroup

QUAD5 = DirichletChar(5, [2])
QUAD7 = DirichletChar(7, [3])
QUAD11 = DirichletChar(11, [5])


def test_trivial_char():
    chi = DirichletChar.trivial(1)
    assert chi.order == 1
    assert chi.conductor == 1
    assert chi.is_trivial()
    assert chi.value(17) == 1


def test_quadratic_orders_and_conductors():
    for chi, m in ((QUAD5, 5), (QUAD7, 7), (QUAD11, 11)):
        assert chi.order == 2
        assert chi.conductor == m
        assert (chi * chi).is_trivial()


def test_quadratic_values_are_legendre_symbols():
    """chi of order 2 mod an odd prime is the Legendre symbol [Was97, Ch. 3]."""
    for chi, m in ((QUAD5, 5), (QUAD7, 7), (QUAD11, 11)):
        for a in range(1, m):
            legendre = pow(a, (m - 1) // 2, m)
            expected = 1 if legendre == 1 else -1
            assert chi.value(a) == expected


def test_parity_matches_value_at_minus_one():
    for chi in (QUAD5, QUAD7, QUAD11, canonical_wild_char(3, 1), DirichletChar(7, [1])):
        assert chi.value(chi.modulus - 1) == chi.parity()
    assert QUAD5.parity() == 1  # 5 = 1 mod 4
    assert QUAD7.parity() == -1  # 7 = 3 mod 4
    assert QUAD11.parity() == -1


def test_character_multiplicativity():
    chi = DirichletChar(7, [1])  # order 6 generator
    assert chi.order == 6
    for a in range(1, 7):
        for b in range(1, 7):
            assert chi.value(a) * chi.value(b) == chi.value(a * b)


def test_value_vanishes_exactly_off_the_conductor():
    """Evaluation goes through the primitive character: chi(a) = 0 iff
    gcd(a, conductor) > 1, even when the modulus is larger."""
    chi = QUAD5.extend_to_modulus(15)
    for a in (5, 10):
        assert chi.value(a).is_zero()
    assert chi.value(3) == QUAD5.value(3)
    assert not chi.value(3).is_zero()


def test_extend_to_modulus_keeps_conductor():
    ext = QUAD5.extend_to_modulus(45)
    assert ext.modulus == 45
    assert ext.conductor == 5
    assert ext.order == 2
    for a in range(1, 45):
        if math.gcd(a, 45) == 1:
            assert ext.value(a) == QUAD5.value(a)


def test_inverse_and_conj_agree():
    chi = DirichletChar(7, [1])
    assert chi.inverse() == chi.conj()
    assert (chi * chi.inverse()).is_trivial()
    assert chi ** 6 == DirichletChar.trivial(7)


def test_conductor_of_wild_chars():
    for p, m in ((3, 1), (3, 2), (5, 1)):
        chi = canonical_wild_char(p, m)
        assert chi.order == p**m
        assert chi.conductor == p ** (m + 1)
        assert chi.value(1 + p ** (m + 1)) == 1


def test_decompose_char():
    """chi = tame x wild with coprime-to-p and p-power orders [Was97, 3.1]."""
    p = 3
    chi = canonical_wild_char(3, 1).extend_to_modulus(45) * QUAD5.extend_to_modulus(45)
    tame, wild = decompose_char(chi, p)
    assert tame.conductor == 5 and tame.order == 2
    assert wild.conductor == 9 and wild.order == 3
    assert tame.order % p != 0
    recomposed = tame.extend_to_modulus(45) * wild.extend_to_modulus(45)
    assert recomposed == chi
    for a in (2, 7, 11, 13):
        assert tame.value(a) == QUAD5.value(a)


def test_char_group_generated_by():
    X = CharGroup.generated_by(5, [QUAD5])
    assert X.order == 2
    assert X.conductor == 5
    assert X.contains_char(QUAD5)
    assert X.contains_char(DirichletChar.trivial(5))


def test_char_group_rejects_unclosed_list():
    chi = DirichletChar(7, [1])
    with pytest.raises(NotSubgroup):
        CharGroup(7, [DirichletChar.trivial(7), chi])


def test_char_group_full_cyclic():
    chi = DirichletChar(7, [1])
    X = CharGroup.generated_by(7, [chi])
    assert X.order == 6
    assert X.conductor == 7
    cubic = CharGroup.generated_by(7, [chi**2])
    assert cubic.order == 3
    assert X.contains_group(cubic)
    assert not cubic.contains_group(X)


def test_splitting_quadratic_field():
    """e, f, g for Q(sqrt(5)): ell splits iff ell is a square mod 5."""
    X = CharGroup.generated_by(5, [QUAD5])
    assert splitting(X, 11).astuple() == (1, 1, 2)
    assert splitting(X, 19).astuple() == (1, 1, 2)
    assert splitting(X, 2).astuple() == (1, 2, 1)
    assert splitting(X, 3).astuple() == (1, 2, 1)
    assert splitting(X, 5).astuple() == (2, 1, 1)


def test_splitting_efg_product():
    chi = DirichletChar(7, [1])
    for gens in ([chi], [chi**2], [chi**3], [chi.extend_to_modulus(35), QUAD5.extend_to_modulus(35)]):
        m = gens[0].modulus
        X = CharGroup.generated_by(m, gens)
        for ell in (2, 3, 11, 13, 19):
            if X.conductor % ell == 0:
                continue
            e, f, g = splitting(X, ell).astuple()
            assert e * f * g == X.order


def test_count_chars_vanishing():
    """#{chi in X : chi(ell) = 0} = |X|(1 - 1/e) for e the ramification."""
    rng = random.Random(7)
    mods = [5, 7, 9, 11, 13, 15, 21, 35, 45]
    for _ in range(25):
        m = rng.choice(mods)
        # random cyclic subgroup of the dual group mod m
        full = DirichletChar(m, [1] * len(DirichletChar.trivial(m).exps))
        k = rng.randrange(1, full.order + 1)
        X = CharGroup.generated_by(m, [full**k])
        for ell in (2, 3, 5, 7, 11, 13):
            direct = sum(1 for chi in X if chi.value(ell).is_zero())
            assert count_chars_vanishing(X, ell) == direct
            if math.gcd(ell, m) == 1:
                assert direct == 0
            else:
                e = splitting(X, ell).e
                assert direct * e == X.order * (e - 1)


def test_compute_nK():
    assert compute_nK(CharGroup.generated_by(5, [QUAD5]), 3) == 0
    assert compute_nK(CharGroup.generated_by(9, [canonical_wild_char(3, 1)]), 3) == 1
    assert compute_nK(CharGroup.generated_by(27, [canonical_wild_char(3, 2)]), 3) == 2
    assert compute_nK(CharGroup.generated_by(25, [canonical_wild_char(5, 1)]), 5) == 1


def test_layer_field():
    """X(n) adjoins the n-th cyclotomic layer: order gains a factor p^n."""
    X = CharGroup.generated_by(5, [QUAD5])
    L1 = layer_field(X, 3, 1)
    assert L1.order == 6
    assert L1.conductor == 45
    L0 = layer_field(X, 3, 0)
    assert L0.order == 2


def test_signature_is_modulus_independent():
    chi = QUAD5.extend_to_modulus(45) * canonical_wild_char(3, 1).extend_to_modulus(45)
    assert chi.signature() == chi.extend_to_modulus(90).signature()
    assert QUAD5.signature() == QUAD5.extend_to_modulus(45).signature()
    assert QUAD5.signature() != QUAD7.signature()
    f, order, _ = chi.signature()
    assert (f, order) == (45, 6)


def test_gauss_sum_absolute_value():
    """|tau(chi)|^2 = conductor for primitive chi [Was97, Lemma 4.8]."""
    rng = random.Random(1)
    checked = 0
    for m in (5, 7, 11, 13, 17, 19, 23):
        full = DirichletChar(m, [1])
        for _ in range(4):
            chi = full ** rng.randrange(1, m - 1)
            if chi.conductor != m:
                continue
            tau = CycElt.zero(1)
            for a in range(1, m):
                tau = tau + chi.value(a) * CycElt.root_of_unity(m, a)
            norm = tau * tau.conj()
            assert norm.is_rational() and norm.rational_value() == m
            checked += 1
    assert checked >= 20
