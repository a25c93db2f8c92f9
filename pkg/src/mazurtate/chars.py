"""Dirichlet characters, character groups, and abelian fields.

A character is stored by its exponent vector on a fixed generator system of
(Z/m)^* (CRT-combined least primitive roots; <-1, 5> for 2-power factors,
cf. [Was97] Ch. 3 or Stein, Alg. 4.16 for the conductor computation).
Values are exact roots of unity (CycElt); evaluation is always primitive,
i.e. chi(a) only vanishes when a shares a factor with the conductor.

An abelian field K/Q is its dual group X = Hom(Gal(K/Q), C^*) of Dirichlet
characters; ramification data (e, f, g) at a rational prime falls out of
counting characters by conductor and Frobenius order.
"""

import itertools
import math
from fractions import Fraction

from .arith import CycElt, euler_phi, factorize, is_prime, multiplicative_order
from .errors import ConductorMismatch, NotAUnit, NotSubgroup

# ----------------------------------------------------------------------
# unit group structure


def _least_primitive_root(ell):
    phi = ell - 1
    prime_divs = list(factorize(phi))
    for r in range(2, ell):
        if all(pow(r, phi // q, ell) != 1 for q in prime_divs):
            return r
    raise AssertionError("no primitive root found")  # pragma: no cover


class UnitGroup:
    """(Z/m)^* with fixed generators and discrete-log tables per factor."""

    _cache = {}

    def __new__(cls, m):
        if m in cls._cache:
            return cls._cache[m]
        self = super().__new__(cls)
        cls._cache[m] = self
        self._build(m)
        return self

    def _build(self, m):
        assert m >= 1
        self.m = m
        self.factors = []  # (q, ell, [(gen, order, dlog dict)])
        self.gens = []  # CRT-combined (g, order)
        for ell in sorted(factorize(m)):
            e = factorize(m)[ell]
            q = ell**e
            local = []
            if ell == 2:
                if e == 1:
                    pass  # trivial group
                elif e == 2:
                    local.append((3, 2, {1: 0, 3: 1}))
                else:
                    half = q // 2 - 1  # order of 5 mod 2^e is 2^{e-2}
                    d5 = {}
                    x = 1
                    for i in range(q // 4):
                        d5[x] = i
                        x = (x * 5) % q
                    dlog = {}
                    for u in range(1, q, 2):
                        if u in d5:
                            dlog[u] = (0, d5[u])
                        else:
                            dlog[u] = (1, d5[(-u) % q])
                    local.append(((-1) % q, 2, {u: v[0] for u, v in dlog.items()}))
                    local.append((5, q // 4, {u: v[1] for u, v in dlog.items()}))
            else:
                r = _least_primitive_root(ell)
                if e > 1 and pow(r, ell - 1, ell * ell) == 1:
                    r += ell
                order = euler_phi(q)
                d = {}
                x = 1
                for i in range(order):
                    d[x] = i
                    x = (x * r) % q
                local.append((r % q, order, d))
            self.factors.append((q, ell, local))
            for g, order, _ in local:
                # CRT-combine: generator g mod q, 1 elsewhere
                if m == q:
                    gm = g % m
                else:
                    rest = m // q
                    gm = (g * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % m
                self.gens.append((gm, order))
        self.exponent = 1
        for _, order in self.gens:
            self.exponent = self.exponent * order // math.gcd(self.exponent, order)
        if not self.gens:
            self.exponent = 1

    def dlog(self, a):
        """Exponent vector of a unit, aligned with self.gens."""
        a = a % self.m
        if math.gcd(a, self.m) != 1:
            raise NotAUnit(f"{a} is not a unit mod {self.m}")
        out = []
        for q, ell, local in self.factors:
            aa = a % q
            for _, _, table in local:
                out.append(table[aa])
        return out

    def orders(self):
        return [order for _, order in self.gens]


# ----------------------------------------------------------------------
# Dirichlet characters


class DirichletChar:
    """Character of (Z/m)^* given by chi(g_j) = zeta_{s_j}^{exps[j]}."""

    __slots__ = ("modulus", "exps", "_group", "_order", "_conductor")

    def __init__(self, modulus, exps):
        self.modulus = modulus
        self._group = UnitGroup(modulus)
        orders = self._group.orders()
        assert len(exps) == len(orders)
        self.exps = tuple(k % s for k, s in zip(exps, orders))
        self._order = None
        self._conductor = None

    @staticmethod
    def trivial(modulus=1):
        return DirichletChar(modulus, [0] * len(UnitGroup(modulus).gens))

    # -- group structure on characters of the same modulus
    def __mul__(self, other):
        assert self.modulus == other.modulus
        return DirichletChar(self.modulus, [a + b for a, b in zip(self.exps, other.exps)])

    def __pow__(self, k):
        return DirichletChar(self.modulus, [a * k for a in self.exps])

    def inverse(self):
        return self**-1

    def __eq__(self, other):
        return (
            isinstance(other, DirichletChar)
            and self.modulus == other.modulus
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.modulus, self.exps))

    @property
    def order(self):
        if self._order is None:
            o = 1
            for k, s in zip(self.exps, self._group.orders()):
                comp = s // math.gcd(s, k)
                o = o * comp // math.gcd(o, comp)
            self._order = o
        return self._order

    @property
    def conductor(self):
        if self._conductor is not None:
            return self._conductor
        cond = 1
        idx = 0
        for q, ell, local in self._group.factors:
            if ell == 2 and len(local) == 2:
                k_minus, k_five = self.exps[idx], self.exps[idx + 1]
                s_five = local[1][1]
                o5 = s_five // math.gcd(s_five, k_five)
                if o5 > 1:
                    cond *= 2 ** (2 + factorize(o5).get(2, 0))
                elif k_minus % 2 == 1:
                    cond *= 4
                idx += 2
            else:
                for g, s, _ in local:
                    k = self.exps[idx]
                    o = s // math.gcd(s, k)
                    if o > 1:
                        if ell == 2:
                            cond *= 4
                        else:
                            cond *= ell ** (1 + factorize(o).get(ell, 0))
                    idx += 1
        self._conductor = cond
        return cond

    def is_trivial(self):
        return all(k == 0 for k in self.exps)

    # -- evaluation (always through the primitive incarnation)
    def value_exponent(self, a):
        """(t, E) with chi(a) = zeta_E^t, or None when gcd(a, conductor) > 1."""
        E = self._group.exponent
        t = 0
        idx = 0
        for q, ell, local in self._group.factors:
            ks = self.exps[idx : idx + len(local)]
            idx += len(local)
            if all(k == 0 for k in ks):
                continue
            if a % ell == 0:
                return None
            aa = a % q
            for (g, s, table), k in zip(local, ks):
                if k:
                    t = (t + k * table[aa] * (E // s)) % E
        return t % E, E

    def value(self, a):
        """chi(a) as an exact CycElt (the zero element when it vanishes)."""
        ve = self.value_exponent(a)
        if ve is None:
            return CycElt.zero()
        t, E = ve
        o = self.order
        return CycElt.root_of_unity(o, t * o // E)

    def parity(self):
        """chi(-1), either +1 or -1."""
        t, E = self.value_exponent(self.modulus - 1 if self.modulus > 1 else 1)
        assert (2 * t) % E == 0
        return 1 if t == 0 else -1

    def conj(self):
        return self.inverse()

    # -- modulus changes
    def signature(self):
        """Primitive invariant: (conductor, order, values at the conductor's
        canonical generators), usable for equality across moduli."""
        f = self.conductor
        gens = UnitGroup(f).gens
        sig = []
        for g, _ in gens:
            t, E = self.value_exponent(g)
            o = self.order
            sig.append(t * o // E % o)
        return (f, self.order, tuple(sig))

    def extend_to_modulus(self, m2):
        """The character of modulus m2 inducing the same primitive character."""
        if m2 % self.conductor != 0:
            raise ConductorMismatch(f"conductor {self.conductor} does not divide {m2}")
        group2 = UnitGroup(m2)
        exps = []
        for g, s in group2.gens:
            ve = self.value_exponent(g)
            assert ve is not None, "generator not coprime to conductor"
            t, E = ve
            # chi(g) = zeta_E^t must be an s-th root of unity
            assert (t * s) % E == 0, "value incompatible with generator order"
            exps.append(t * s // E)
        return DirichletChar(m2, exps)

    def __repr__(self):
        return f"DirichletChar(mod {self.modulus}, exps {self.exps})"


def decompose_char(chi, p):
    """Split chi = psi * chi_p with ord(psi) prime to p, ord(chi_p) a p-power."""
    o = chi.order
    op = 1
    while o % p == 0:
        o //= p
        op *= p
    oprime = chi.order // op
    if op == 1:
        return chi, DirichletChar.trivial(chi.modulus)
    if oprime == 1:
        return DirichletChar.trivial(chi.modulus), chi
    # idempotents: a*oprime + b*op = 1
    a = pow(oprime, -1, op)
    b = pow(op, -1, oprime)
    chi_p = chi ** (a * oprime)
    psi = chi ** (b * op)
    assert psi * chi_p == chi
    return psi, chi_p


# ----------------------------------------------------------------------
# the canonical wild characters kappa_m


def canonical_wild_char(p, m):
    """Order-p^m character of conductor p^{m+1}: kappa(a) = zeta_{p^m}^{t_m(a)},
    the dual of the wild quotient with respect to gamma = 1 + p."""
    assert m >= 0
    if m == 0:
        return DirichletChar.trivial(1)
    modulus = p ** (m + 1)
    group = UnitGroup(modulus)
    from .arith import build_tn_table

    table = build_tn_table(p, m, 1)
    exps = []
    for g, s in group.gens:
        t = table.t(g)
        # kappa(g) = zeta_{p^m}^t as a power of zeta_s
        assert (t * s) % p**m == 0
        exps.append(t * s // p**m)
    chi = DirichletChar(modulus, exps)
    assert chi.order == p**m and chi.conductor == modulus
    return chi


# ----------------------------------------------------------------------
# character groups / abelian fields


class CharGroup:
    """A finite subgroup of the dual of (Z/m)^*, listed in a canonical order."""

    def __init__(self, modulus, chars):
        self.modulus = modulus
        for c in chars:
            assert c.modulus == modulus
        self.chars = sorted(set(chars), key=lambda c: c.exps)
        self._check_closed()

    def _check_closed(self):
        have = set(self.chars)
        for a in self.chars:
            for b in self.chars:
                if a * b not in have:
                    raise NotSubgroup("character list is not multiplication-closed")
        if not any(c.is_trivial() for c in self.chars):
            raise NotSubgroup("missing trivial character")

    @staticmethod
    def generated_by(modulus, gens):
        have = {DirichletChar.trivial(modulus)}
        frontier = list(have)
        while frontier:
            nxt = []
            for chi in frontier:
                for g in gens:
                    prod = chi * g
                    if prod not in have:
                        have.add(prod)
                        nxt.append(prod)
            frontier = nxt
        return CharGroup(modulus, list(have))

    @property
    def order(self):
        return len(self.chars)

    @property
    def conductor(self):
        c = 1
        for chi in self.chars:
            f = chi.conductor
            c = c * f // math.gcd(c, f)
        return c

    @property
    def exponent(self):
        e = 1
        for chi in self.chars:
            e = e * chi.order // math.gcd(e, chi.order)
        return e

    def signatures(self):
        return {chi.signature() for chi in self.chars}

    def contains_char(self, chi):
        return chi.signature() in self.signatures()

    def contains_group(self, other):
        return other.signatures() <= self.signatures()

    def extend_to_modulus(self, m2):
        return CharGroup(m2, [chi.extend_to_modulus(m2) for chi in self.chars])

    def __iter__(self):
        return iter(self.chars)

    def __repr__(self):
        return f"CharGroup(mod {self.modulus}, order {self.order})"


def char_group_from_subgroup(f, subgroup_gens):
    """Characters of (Z/f)^* trivial on the subgroup generated by the given
    units: the dual description of the fixed field of that subgroup."""
    group = UnitGroup(f)
    for h in subgroup_gens:
        if math.gcd(h, f) != 1:
            raise NotSubgroup(f"{h} is not a unit mod {f}")
    # close the subgroup H
    H = {1 % f}
    frontier = [1 % f]
    while frontier:
        nxt = []
        for x in frontier:
            for h in subgroup_gens:
                y = (x * h) % f
                if y not in H:
                    H.add(y)
                    nxt.append(y)
        frontier = nxt
    orders = group.orders()
    E = group.exponent
    hlogs = [group.dlog(h) for h in sorted(H)]
    chars = []
    for exps in itertools.product(*(range(s) for s in orders)):
        ok = True
        for xs in hlogs:
            t = 0
            for k, x, s in zip(exps, xs, orders):
                t = (t + k * x * (E // s)) % E
            if t != 0:
                ok = False
                break
        if ok:
            chars.append(DirichletChar(f, list(exps)))
    X = CharGroup(f, chars)
    assert X.order * len(H) == euler_phi(f), "index mismatch: H was not a subgroup"
    return X


def compute_nK(X, p):
    """Largest m with the canonical order-p^m, conductor-p^{m+1} character
    inside X (0 when even the first layer is missing)."""
    m = 0
    while True:
        kappa = canonical_wild_char(p, m + 1)
        if X.conductor % kappa.conductor != 0:
            return m
        if not X.contains_char(kappa):
            return m
        m += 1


class SplitData:
    """Ramification (e), residue degree (f), number of primes (g) of a
    rational prime in the abelian field cut out by X."""

    def __init__(self, e, f, g):
        self.e, self.f, self.g = e, f, g

    def astuple(self):
        return (self.e, self.f, self.g)

    def __eq__(self, other):
        return self.astuple() == (
            other.astuple() if isinstance(other, SplitData) else other
        )

    def __repr__(self):
        return f"SplitData(e={self.e}, f={self.f}, g={self.g})"


def splitting(X, ell):
    """Splitting data of ell in the field of X: e from the count of ramified
    characters, f from the order of the Frobenius value tuple [Was97, Ch. 3]."""
    assert is_prime(ell)
    unram = [chi for chi in X if chi.conductor % ell != 0]
    assert X.order % len(unram) == 0
    e = X.order // len(unram)
    f = 1
    for chi in unram:
        t, E = chi.value_exponent(ell)
        o = E // math.gcd(t, E) if t else 1
        f = f * o // math.gcd(f, o)
    assert len(unram) % f == 0
    g = len(unram) // f
    assert e * f * g == X.order
    return SplitData(e, f, g)


def count_chars_vanishing(X, ell):
    """|{chi in X : chi(ell) = 0}|; equals |X| (1 - 1/e)."""
    n = sum(1 for chi in X if chi.conductor % ell == 0)
    e = splitting(X, ell).e
    assert n * e == X.order * (e - 1)
    return n


def layer_field(X, p, n):
    """Character group of K_(n) = K * Q_(n+n_K): adjoin the canonical wild
    character of order p^{n + n_K}."""
    nK = compute_nK(X, p)
    if n + nK == 0:
        return X
    kappa = canonical_wild_char(p, n + nK)
    m2 = X.modulus * kappa.modulus // math.gcd(X.modulus, kappa.modulus)
    lifted = [chi.extend_to_modulus(m2) for chi in X]
    return CharGroup.generated_by(m2, lifted + [kappa.extend_to_modulus(m2)])


class AbelianFieldDesc:
    """An abelian number field K/Q presented by its character group."""

    def __init__(self, X, p=None):
        self.X = X
        self.degree = X.order
        self.conductor = X.conductor
        self.n_K = compute_nK(X, p) if p is not None else None

    def __repr__(self):
        return (
            f"AbelianFieldDesc(degree {self.degree}, conductor {self.conductor},"
            f" n_K {self.n_K})"
        )
