"""Exact p-adic and cyclotomic arithmetic.

Everything downstream (theta elements, Euler factors, descent) keeps its
coefficients exact: rationals are fractions.Fraction, and elements of Q(zeta_e)
are dense coefficient vectors modulo x^e - 1 (multiplication is exponent
addition; canonicalization modulo the cyclotomic polynomial Phi_e happens only
inside equality tests and rationality extraction).  Valuations are answered by
mapping into a finite model (Z/p^B)[x]/(u(x)) (x) Z[pi]/(Phi_{p^s}(1+pi)) of
the completion Z_p[zeta_d, zeta_{p^s}]; the piecewise formula
v(sum c_i pi^i) = min_i (v(c_i) + i/e) is exact because the fractional parts
i/e are pairwise distinct mod 1.  Valuations are normalized so ord_p(p) = 1.
"""

import cmath
import math
from fractions import Fraction

from .errors import BoundExceeded, CoefficientDrift, NotAUnit, PrecisionExhausted, ZeroInput

# ----------------------------------------------------------------------
# elementary number theory helpers


def factorize(n):
    """Prime factorization by trial division, returned as {p: exponent}."""
    assert n >= 1
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n):
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def moebius(n):
    mu = 1
    for _, e in factorize(n).items():
        if e > 1:
            return 0
        mu = -mu
    return mu


def multiplicative_order(a, m):
    """Order of a in (Z/m)^*; requires gcd(a, m) = 1."""
    assert math.gcd(a, m) == 1
    order = 1
    x = a % m
    while x != 1:
        x = (x * a) % m
        order += 1
        assert order <= m
    return order


def is_prime(n):
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def primes_up_to(bound):
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(bound + 1) if sieve[i]]


def val_p(x, p):
    """ord_p of a nonzero rational, normalized so val_p(p) = 1."""
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("val_p(0) undefined")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return Fraction(v)


# ----------------------------------------------------------------------
# Teichmueller decomposition and the t_n table


def teichmuller_decompose(a, p, n):
    """Split a unit mod p^{n+1} as (omega(a), <a>) with omega(a)^{p-1} = 1
    and <a> a 1-unit; omega(a) = a^{p^n} mod p^{n+1}."""
    q = p ** (n + 1)
    a = a % q
    if math.gcd(a, q) != 1:
        raise NotAUnit(f"{a} is not a unit mod {q}")
    omega = pow(a, p**n, q)
    one_unit = (a * pow(omega, -1, q)) % q
    assert (one_unit - 1) % p == 0
    return omega, one_unit


class TnTable:
    """Lookup a -> t_n(a) on (Z/p^{n+1}M)^*, where gamma^{t_n(a)} = <a>
    holds among the 1-units mod p^{n+1} for the fixed generator gamma
    (default 1+p).

    t_n(a) depends on a only through a mod p^{n+1}; the table is keyed by
    the full modulus p^{n+1}M because that is how theta coefficients index.
    """

    def __init__(self, p, n, M, gamma=None):
        assert is_prime(p) and p >= 3, "p must be an odd prime"
        assert n >= 0 and M >= 1 and M % p != 0
        if gamma is None:
            gamma = 1 + p
        q = p ** (n + 1)
        # gamma must generate the 1-units mod p^{n+1}
        if gamma % p != 1 or (n >= 1 and gamma % (p * p) == 1):
            raise NotAUnit(f"gamma={gamma} does not generate the 1-units")
        self.p, self.n, self.M, self.gamma = p, n, M, gamma
        self.modulus = q * M
        dlog = {}
        x = 1
        for j in range(p**n):
            dlog[x] = j
            x = (x * gamma) % q
        self._dlog = dlog
        self.entries = {}
        for a in range(1, self.modulus + 1):
            if math.gcd(a, self.modulus) == 1:
                _, one_unit = teichmuller_decompose(a, p, n)
                self.entries[a] = dlog[one_unit]

    def t(self, a):
        a = a % self.modulus
        if math.gcd(a, self.modulus) != 1:
            raise NotAUnit(f"{a} not a unit mod {self.modulus}")
        return self.entries[a]

    def units(self):
        return sorted(self.entries)


def build_tn_table(p, n, M, gamma=None):
    return TnTable(p, n, M, gamma=gamma)


def t_layer(ell, p, n):
    """t_n(ell) for a single prime-to-p integer, without a full table."""
    table = build_tn_table(p, n, 1)
    return table.t(ell)


# ----------------------------------------------------------------------
# integer / modular polynomial helpers (dense ascending coefficient lists)


def _zp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _zp_add(f, g):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return _zp_trim(out)


def _zp_sub(f, g):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] -= c
    return _zp_trim(out)


def _zp_mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _zp_trim(out)


def _zp_divmod_monic(f, g):
    """Division of integer polys by a monic g; returns (q, r) over Z."""
    assert g and g[-1] == 1
    f = list(f)
    dq = len(f) - len(g)
    if dq < 0:
        return [], _zp_trim(f)
    q = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = f[i + len(g) - 1]
        q[i] = c
        if c:
            for j, b in enumerate(g):
                f[i + j] -= c * b
    return _zp_trim(q), _zp_trim(f)


_CYCLO_CACHE = {1: [-1, 1]}


def cyclotomic_poly(n):
    """Phi_n as an integer coefficient list, via prod (x^{n/d}-1)^{mu(d)}."""
    if n in _CYCLO_CACHE:
        return list(_CYCLO_CACHE[n])
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d == 0:
            mu = moebius(n // d)
            if mu == 1:
                num = _zp_mul(num, [-1] + [0] * (d - 1) + [1])
            elif mu == -1:
                den = _zp_mul(den, [-1] + [0] * (d - 1) + [1])
    q, r = _zp_divmod_monic(num, den) if den != [1] else (num, [])
    assert not r, "cyclotomic division must be exact"
    _CYCLO_CACHE[n] = list(q)
    return list(q)


def _modp_norm(f, m):
    return _zp_trim([c % m for c in f])


def _modp_mul(f, g, m):
    return _modp_norm(_zp_mul(f, g), m)


def _modp_rem(f, g, m):
    """Remainder of f mod g over Z/m; g must have unit leading coefficient."""
    f = [c % m for c in f]
    _zp_trim(f)
    lead_inv = pow(g[-1], -1, m)
    while len(f) >= len(g):
        c = (f[-1] * lead_inv) % m
        shift = len(f) - len(g)
        for j, b in enumerate(g):
            f[shift + j] = (f[shift + j] - c * b) % m
        _zp_trim(f)
    return f


def _modp_divmod(f, g, m):
    """(q, r) with f = q*g + r over Z/m; g needs a unit leading coefficient."""
    f = [c % m for c in f]
    _zp_trim(f)
    g = _modp_norm(list(g), m)
    lead_inv = pow(g[-1], -1, m)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g):
        c = (f[-1] * lead_inv) % m
        shift = len(f) - len(g)
        q[shift] = c
        for j, b in enumerate(g):
            f[shift + j] = (f[shift + j] - c * b) % m
        _zp_trim(f)
    return _zp_trim(q), f


def _modp_gcd_monic(f, g, p):
    while g:
        f, g = g, _modp_rem(f, g, p)
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [(c * inv) % p for c in f]


def _modp_powmod(base, exp, mod_poly, p):
    result = [1]
    base = _modp_rem(base, mod_poly, p)
    while exp:
        if exp & 1:
            result = _modp_rem(_modp_mul(result, base, p), mod_poly, p)
        base = _modp_rem(_modp_mul(base, base, p), mod_poly, p)
        exp >>= 1
    return result


def _poly_bezout(u, v, p):
    """a, b with a*u + b*v = 1 mod p, deg a < deg v and deg b < deg u."""
    r0, r1 = _modp_norm(u, p), _modp_norm(v, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _modp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _modp_norm(_zp_sub(s0, _zp_mul(q, s1)), p)
        t0, t1 = t1, _modp_norm(_zp_sub(t0, _zp_mul(q, t1)), p)
    assert len(r0) == 1, "inputs were not coprime"
    inv = pow(r0[0], -1, p)
    a = [(c * inv) % p for c in s0]
    b = [(c * inv) % p for c in t0]
    return a, b


def _equal_degree_factor(f, r, p):
    """All monic irreducible factors of squarefree f mod p, each of degree r.

    Cantor-Zassenhaus splitting with a deterministic trial sequence so the
    factor list (and hence the lex-least choice) is reproducible.
    """
    assert p >= 3
    n = (len(f) - 1) // r
    if n == 1:
        inv = pow(f[-1], -1, p)
        return [[(c * inv) % p for c in f]]
    exp = (p**r - 1) // 2
    trial = 0
    while trial < 64 * n * r * p:
        c, k = trial % p, trial // p
        h = _modp_powmod([c, 1], 1 + k, f, p)
        trial += 1
        g = list(_modp_powmod(h, exp, f, p))
        if not g:
            continue
        g[0] = (g[0] - 1) % p
        d = _modp_gcd_monic(f, _zp_trim(g), p)
        if d and 0 < len(d) - 1 < len(f) - 1:
            q, rem = _zp_divmod_monic([x % p for x in f], d)
            assert not _modp_norm(rem, p)
            return sorted(
                _equal_degree_factor(d, r, p)
                + _equal_degree_factor(_modp_norm(q, p), r, p)
            )
    raise BoundExceeded("equal-degree splitting did not terminate")  # pragma: no cover


def _hensel_step(f, u, v, a, b, m2):
    """One quadratic Hensel step [vzG-Gerhard Alg. 15.10], all mod m2.

    In: f = u*v and a*u + b*v = 1 at the square root of the precision.
    Out: (u', v', a', b') with the same relations mod m2, u' monic.
    """
    e = _modp_norm(_zp_sub(f, _zp_mul(u, v)), m2)
    q, rr = _modp_divmod(_modp_mul(b, e, m2), u, m2)
    u1 = _modp_norm(_zp_add(u, rr), m2)
    v1 = _modp_norm(_zp_add(v, _zp_add(_modp_mul(a, e, m2), _modp_mul(q, v, m2))), m2)
    e1 = _modp_norm(_zp_sub(_zp_add(_zp_mul(a, u1), _zp_mul(b, v1)), [1]), m2)
    q1, r1 = _modp_divmod(_modp_mul(a, e1, m2), v1, m2)
    a1 = _modp_norm(_zp_sub(a, r1), m2)
    b1 = _modp_norm(_zp_sub(b, _zp_add(_modp_mul(b, e1, m2), _modp_mul(q1, u1, m2))), m2)
    return u1, v1, a1, b1


def hensel_factor(d, p, B):
    """Lexicographically least (ascending coefficient tuple) irreducible
    factor of Phi_d mod p, lifted mod p^B by quadratic Hensel iteration.

    Requires p odd and coprime to d, so Phi_d is squarefree mod p and all
    irreducible factors share the degree r = ord of p in (Z/d)^*.
    """
    assert d >= 1 and B >= 1 and p >= 3 and math.gcd(d, p) == 1
    target = p**B
    if d == 1:
        return [(-1) % target, 1]
    f = cyclotomic_poly(d)
    r = multiplicative_order(p, d)
    factors = _equal_degree_factor(_modp_norm(f, p), r, p)
    u = min(factors, key=tuple)
    v = _modp_norm(_zp_divmod_monic(f, u)[0], p)
    a, b = _poly_bezout(u, v, p)
    modulus = p
    while modulus < target:
        modulus = modulus * modulus
        u, v, a, b = _hensel_step(f, u, v, a, b, modulus)
    u = _modp_norm(u, target)
    if u[-1] != 1:
        u[-1] = 1  # monic by construction; normalization mod target
    v = _modp_norm(v, target)
    assert not _modp_norm(_zp_sub(f, _zp_mul(u, v)), target)
    assert len(u) - 1 == r
    return u


def _poly_shift(f, a):
    """f(x + a) for an integer polynomial f."""
    out = []
    xa = [a, 1]
    powc = [1]
    for c in f:
        if c:
            out = _zp_add(out, [c * t for t in powc])
        powc = _zp_mul(powc, xa)
    return out


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


# ----------------------------------------------------------------------
# exact cyclotomic numbers


class CycElt:
    """Element of Q(zeta_e), stored as c[0..e-1] with value sum c_k zeta_e^k.

    The rep is not canonical (x^e - 1 is not irreducible); equality and
    rationality pass through reduction mod Phi_e.  Arithmetic between
    different e promotes to the lcm.
    """

    __slots__ = ("e", "c")

    def __init__(self, e, c):
        assert len(c) == e and e >= 1
        self.e = e
        self.c = [Fraction(x) for x in c]

    @staticmethod
    def zero(e=1):
        return CycElt(e, [0] * e)

    @staticmethod
    def from_rational(q, e=1):
        c = [Fraction(0)] * e
        c[0] = Fraction(q)
        return CycElt(e, c)

    @staticmethod
    def root_of_unity(e, k):
        c = [Fraction(0)] * e
        c[k % e] = Fraction(1)
        return CycElt(e, c)

    def promote(self, E):
        assert E % self.e == 0
        if E == self.e:
            return self
        step = E // self.e
        c = [Fraction(0)] * E
        for k, v in enumerate(self.c):
            c[k * step] = v
        return CycElt(E, c)

    def _common(self, other):
        if not isinstance(other, CycElt):
            other = CycElt.from_rational(other)
        E = self.e * other.e // math.gcd(self.e, other.e)
        return self.promote(E), other.promote(E)

    def __add__(self, other):
        a, b = self._common(other)
        return CycElt(a.e, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.e, [-x for x in self.c])

    def __sub__(self, other):
        a, b = self._common(other)
        return CycElt(a.e, [x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElt(self.e, [x * other for x in self.c])
        a, b = self._common(other)
        out = [Fraction(0)] * a.e
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        out[(i + j) % a.e] += x * y
        return CycElt(a.e, out)

    __rmul__ = __mul__

    def conj(self):
        """Complex conjugation zeta -> zeta^{-1}."""
        out = [Fraction(0)] * self.e
        for k, v in enumerate(self.c):
            out[(-k) % self.e] += v
        return CycElt(self.e, out)

    def galois(self, j):
        """zeta -> zeta^j for gcd(j, e) = 1."""
        assert math.gcd(j, self.e) == 1
        out = [Fraction(0)] * self.e
        for k, v in enumerate(self.c):
            out[(j * k) % self.e] += v
        return CycElt(self.e, out)

    def canonical(self):
        """Coefficient tuple (length phi(e)) of the reduction mod Phi_e."""
        phi = cyclotomic_poly(self.e)
        deg_phi = len(phi) - 1
        rem = list(self.c)
        for i in range(len(rem) - 1, deg_phi - 1, -1):
            c = rem[i]
            if c:
                for j in range(len(phi)):
                    rem[i - deg_phi + j] -= c * phi[j]
        rem = rem[:deg_phi]
        rem += [Fraction(0)] * (deg_phi - len(rem))
        return tuple(rem)

    def is_zero(self):
        return all(v == 0 for v in self.canonical())

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycElt.from_rational(other)
        if not isinstance(other, CycElt):
            return NotImplemented
        a, b = self._common(other)
        return (a - b).is_zero()

    def __hash__(self):
        return hash((0,)) if self.is_zero() else hash(self.canonical())

    def is_rational(self):
        can = self.canonical()
        return all(v == 0 for v in can[1:])

    def rational_value(self):
        can = self.canonical()
        if any(v != 0 for v in can[1:]):
            raise CoefficientDrift(f"element of Q(zeta_{self.e}) is not rational")
        return can[0]

    def complex_value(self):
        """Embedding zeta_e -> exp(2 pi i / e), double precision."""
        total = 0j
        for k, v in enumerate(self.c):
            if v:
                total += float(v) * cmath.exp(2j * cmath.pi * k / self.e)
        return total

    def __repr__(self):
        terms = [f"({v})z{self.e}^{k}" for k, v in enumerate(self.c) if v]
        return " + ".join(terms) if terms else "CycElt(0)"


# ----------------------------------------------------------------------
# the finite local model used for valuation queries


class LocalRing:
    """Finite model of O = Z_p[zeta_d, zeta_{p^s}] at precision p^B.

    Unramified part W = (Z/p^B)[x]/(u(x)) with u the Hensel-lifted least
    factor of Phi_d; ramified part generated by pi = zeta_{p^s} - 1 with
    Phi_{p^s}(1 + pi) = 0, so e = phi(p^s) and v(pi) = 1/e.
    """

    def __init__(self, p, d, s, B=20):
        assert is_prime(p) and p >= 3
        assert d >= 1 and math.gcd(d, p) == 1 and s >= 0 and B >= 1
        self.p, self.d, self.s, self.B = p, d, s, B
        self.pB = p**B
        self.u = hensel_factor(d, p, B)
        self.r = len(self.u) - 1
        self.e = euler_phi(p**s) if s >= 1 else 1
        if s >= 1:
            eis = _poly_shift(cyclotomic_poly(p**s), 1)
            assert eis[-1] == 1 and len(eis) - 1 == self.e
            assert all(c % p == 0 for c in eis[:-1]) and eis[0] % (p * p) != 0
            self.eis = [c % self.pB for c in eis]
        else:
            self.eis = None
        # power tables: zeta_d^j mod u for j < d, (1+pi)^i for i < p^s
        self._ypow = []
        cur = [1]
        for _ in range(d):
            self._ypow.append(list(cur))
            cur = _modp_rem(_zp_mul(cur, [0, 1]), self.u, self.pB)
        if s >= 1:
            q = p**s
            self._wpow = []
            cur = [[1]]
            for _ in range(q):
                self._wpow.append([list(t) for t in cur])
                cur = self._pi_mul(cur, [[1], [1]])
        else:
            self._wpow = [[[1]]]

    def _pi_mul(self, A, Bv):
        """Product of two elements given as pi-power lists of unramified polys."""
        out = [[] for _ in range(len(A) + len(Bv) - 1)]
        for i, a in enumerate(A):
            if a:
                for j, b in enumerate(Bv):
                    if b:
                        out[i + j] = _zp_add(out[i + j], _zp_mul(a, b))
        out = [_modp_rem(t, self.u, self.pB) if t else [] for t in out]
        while self.eis is not None and len(out) > self.e:
            top = out.pop()
            if top:
                shift = len(out) - self.e
                for j in range(self.e):
                    prod = [(-self.eis[j]) * c % self.pB for c in top]
                    out[shift + j] = _modp_norm(_zp_add(out[shift + j], prod), self.pB)
        return [_modp_norm(t, self.pB) for t in out]

    def image_of(self, z):
        """Image of an exact CycElt, as (pi-power coefficient list, p_shift).

        The true element equals p^{p_shift} times the represented value; the
        shift absorbs any p-part of the coefficient denominators.
        """
        if not isinstance(z, CycElt):
            z = CycElt.from_rational(z)
        ps = self.p**self.s
        E = self.d * ps
        assert E % z.e == 0, f"Q(zeta_{z.e}) does not embed in the d={self.d}, s={self.s} model"
        z = z.promote(E)
        if self.d == 1:
            a_coef, b_coef = 0, 1
        elif ps == 1:
            a_coef, b_coef = 1, 0
        else:
            g, a_coef, b_coef = _xgcd(ps, self.d)
            assert g == 1
        den = 1
        for v in z.c:
            den = den * v.denominator // math.gcd(den, v.denominator)
        p_shift = 0
        while den % self.p == 0:
            den //= self.p
            p_shift -= 1
        den_inv = pow(den % self.pB, -1, self.pB)
        scale = self.p ** (-p_shift)
        acc = [[] for _ in range(self.e)]
        for k, v in enumerate(z.c):
            if not v:
                continue
            num = v.numerator * (den * scale // v.denominator)
            coef = (num % self.pB) * den_inv % self.pB
            if coef == 0:
                continue
            ypart = self._ypow[(a_coef * k) % self.d]
            wpart = self._wpow[(b_coef * k) % ps] if ps > 1 else [[1]]
            term = [
                _modp_rem([coef * c % self.pB for c in _zp_mul(ypart, wp)], self.u, self.pB)
                if wp
                else []
                for wp in wpart
            ]
            for i, t in enumerate(term):
                acc[i] = _modp_norm(_zp_add(acc[i], t), self.pB)
        return acc, p_shift

    def val(self, z):
        """Exact valuation (ord_p(p) = 1) of a nonzero exact element.

        Rational inputs take the exact fast path.  Otherwise the image at
        precision p^B decides; an image of 0 mod p^B aborts with
        PrecisionExhausted rather than returning a floor value.
        """
        if isinstance(z, (int, Fraction)):
            if z == 0:
                raise ZeroInput("valuation of 0")
            return val_p(z, self.p)
        if z.is_rational():
            q = z.canonical()[0]
            if q == 0:
                raise ZeroInput("valuation of 0")
            return val_p(q, self.p)
        coeffs, p_shift = self.image_of(z)
        best = None
        for i, c in enumerate(coeffs):
            vi = None
            for coef in c:
                coef %= self.pB
                if coef == 0:
                    continue
                v = 0
                while coef % self.p == 0:
                    coef //= self.p
                    v += 1
                vi = v if vi is None or v < vi else vi
            if vi is not None:
                cand = Fraction(vi) + Fraction(i, self.e)
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise PrecisionExhausted(
                f"image vanishes mod {self.p}^{self.B}; raise --precision to resolve"
            )
        return best + p_shift
