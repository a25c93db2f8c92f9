"""Elliptic curves over Q: point counts, reduction types, Frobenius data.

Curves are long-Weierstrass models assumed minimal; reduction type at a prime
ell >= 5 is decided from (c4, c6, Delta) in the usual way (multiplicative iff
ell | Delta, ell ∤ c4; split iff -c6 is a square mod ell), while ell in {2, 3}
comes from a per-curve table -- no Tate algorithm here.  a_ell at good primes
is a straight point count: a_ell = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6)
for odd ell, with a precomputed square table so the cost is O(ell).
"""

import math

from .arith import factorize, is_prime
from .errors import BadReduction, NotAUnit, SmallPrimeUnsupported

GOOD, SPLIT, NONSPLIT, ADDITIVE = "good", "split", "nonsplit", "additive"


class ReductionData:
    def __init__(self, kind, cond_exp, potentially=None):
        self.kind = kind
        self.cond_exp = cond_exp
        self.potentially = potentially  # for additive: "good" or "multiplicative"

    def is_multiplicative(self):
        return self.kind in (SPLIT, NONSPLIT)

    def __repr__(self):
        return f"ReductionData({self.kind}, f_cond={self.cond_exp})"


class ECurve:
    """Minimal Weierstrass model with optional small-prime reduction table."""

    def __init__(self, ainvs, conductor, small_prime_reduction=None, label=None):
        a1, a2, a3, a4, a6 = ainvs
        self.ainvs = tuple(ainvs)
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self.N = conductor
        self.label = label
        self.small = dict(small_prime_reduction or {})
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = (self.b2 * self.b6 - self.b4 * self.b4) // 4
        assert self.b2 * self.b6 - self.b4 * self.b4 == 4 * self.b8
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6
        self.disc = (self.c4**3 - self.c6**2) // 1728
        assert self.c4**3 - self.c6**2 == 1728 * self.disc
        assert self.disc != 0, "singular model"
        self._ap_cache = {}
        self._validate()

    # -- model bookkeeping
    def transform(self, u, r, s, t):
        """Standard change of variables (x, y) -> (u^2 x + r, u^3 y + u^2 s x + t)."""
        a1, a2, a3, a4, a6 = self.ainvs
        assert u in (1, -1), "only unit scalings supported"
        A1 = u * (a1 + 2 * s)
        A2 = a2 - s * a1 + 3 * r - s * s
        A3 = u * (a3 + r * a1 + 2 * t)
        A4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        A6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        return ECurve(
            (A1, A2, A3, A4, A6), self.N, small_prime_reduction=self.small, label=self.label
        )

    def _validate(self):
        for ell, e in factorize(abs(self.disc)).items():
            if ell >= 5:
                # minimality: not both ord(c4) >= 4 and ord(Delta) >= 12
                if e >= 12 and self.c4 % ell**4 == 0:
                    raise AssertionError(f"model not minimal at {ell}")
        for ell in factorize(self.N):
            try:
                rd = self.classify_reduction(ell)
            except SmallPrimeUnsupported:
                continue
            v = factorize(self.N).get(ell, 0)
            if rd.kind == GOOD:
                raise AssertionError(f"conductor lists good prime {ell}")
            if rd.is_multiplicative() and v != 1:
                raise AssertionError(f"multiplicative prime {ell} with v_ell(N)={v}")
            if rd.kind == ADDITIVE and v < 2:
                raise AssertionError(f"additive prime {ell} with v_ell(N)={v}")

    # -- reduction
    def classify_reduction(self, ell):
        assert is_prime(ell)
        if self.disc % ell != 0:
            return ReductionData(GOOD, 0)
        if ell in (2, 3):
            if ell not in self.small:
                raise SmallPrimeUnsupported(
                    f"reduction at {ell} requires table data for {self.label or self.ainvs}"
                )
            kind = self.small[ell]
            assert kind in (GOOD, SPLIT, NONSPLIT, ADDITIVE)
            if kind == GOOD:
                return ReductionData(GOOD, 0)
            if kind == ADDITIVE:
                e = factorize(self.N).get(ell, 2)
                return ReductionData(ADDITIVE, e, potentially=self.small.get(f"pot{ell}"))
            return ReductionData(kind, 1)
        if self.c4 % ell != 0:
            # multiplicative; split iff -c6 is a nonzero square mod ell
            if pow((-self.c6) % ell, (ell - 1) // 2, ell) == 1:
                return ReductionData(SPLIT, 1)
            return ReductionData(NONSPLIT, 1)
        v_disc = factorize(abs(self.disc))[ell]
        v_c4 = factorize(abs(self.c4)).get(ell, 0) if self.c4 else 99
        pot = "multiplicative" if 3 * v_c4 < v_disc else "good"
        return ReductionData(ADDITIVE, 2, potentially=pot)

    # -- point counting and Hecke eigenvalues
    def count_points(self, ell):
        """#E(F_ell) including the point at infinity; good reduction required."""
        if self.disc % ell == 0:
            raise BadReduction(f"{ell} divides the discriminant")
        if ell == 2:
            count = 1
            for x in range(2):
                for y in range(2):
                    lhs = (y * y + self.a1 * x * y + self.a3 * y) % 2
                    rhs = (x**3 + self.a2 * x * x + self.a4 * x + self.a6) % 2
                    if lhs == rhs:
                        count += 1
            return count
        # odd ell: complete the square; #E = 1 + ell + sum chi(g(x))
        sq = bytearray(ell)
        for z in range(ell):
            sq[z * z % ell] = 1
        b2, b4, b6 = self.b2 % ell, (2 * self.b4) % ell, self.b6 % ell
        total = 1 + ell
        for x in range(ell):
            g = (((4 * x + b2) * x + b4) * x + b6) % ell
            if g == 0:
                continue
            total += 1 if sq[g] else -1
        return total

    def count_a_ell(self, ell):
        """a_ell = ell + 1 - #E(F_ell) at a good prime, with the Hasse check."""
        a = ell + 1 - self.count_points(ell)
        assert a * a <= 4 * ell, "Hasse bound violated"
        return a

    def a_ell(self, ell):
        """Hecke eigenvalue at any prime (table-backed at bad primes)."""
        if ell in self._ap_cache:
            return self._ap_cache[ell]
        rd = self.classify_reduction(ell)
        if rd.kind == GOOD:
            a = self.count_a_ell(ell)
        elif rd.kind == SPLIT:
            a = 1
        elif rd.kind == NONSPLIT:
            a = -1
        else:
            a = 0
        self._ap_cache[ell] = a
        return a

    def eps_N(self, a):
        """Indicator of a being prime to the level."""
        return 1 if math.gcd(a, self.N) == 1 else 0

    def __repr__(self):
        return f"ECurve({self.label or self.ainvs}, N={self.N})"


# ----------------------------------------------------------------------
# Frobenius roots mod p and local p-torsion


class FrobeniusRoot:
    """A root alpha of x^2 - a x + c over F_p, living in F_p[w]/(w^2 - D).

    For c = 0 (level-dividing primes) the nonzero root alpha = a is taken.
    """

    def __init__(self, a, c, p):
        assert is_prime(p) and p >= 3
        self.a, self.c, self.p = a % p, c % p, p
        if self.c == 0:
            self.D = None
            self.u, self.v = self.a, 0  # alpha = a, the unit root
        else:
            self.D = (self.a * self.a - 4 * self.c) % p
            inv2 = pow(2, -1, p)
            sqrt_d = self._sqrt(self.D, p)
            if sqrt_d is not None:
                self.u, self.v = (self.a + sqrt_d) * inv2 % p, 0
                self.D = None if self.D == 0 else self.D
            else:
                self.u, self.v = self.a * inv2 % p, inv2 % p
                # alpha = u + v*w with w^2 = D, canonical v in 1..(p-1)/2
                if self.v > p - self.v:
                    self.u, self.v = self.u, (p - self.v) % p

    @staticmethod
    def _sqrt(d, p):
        d %= p
        for z in range((p + 1) // 2 + 1):
            if z * z % p == d:
                return z
        return None

    def in_fp(self):
        return self.v == 0

    def _mul(self, x, y):
        (xu, xv), (yu, yv) = x, y
        D = self.D if self.D is not None else 0
        return ((xu * yu + D * xv * yv) % self.p, (xu * yv + xv * yu) % self.p)

    def power(self, k):
        result = (1, 0)
        base = (self.u, self.v)
        while k:
            if k & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            k >>= 1
        return result

    def mult_order(self):
        """Order of alpha in the unit group; None when alpha = 0."""
        if (self.u, self.v) == (0, 0):
            return None
        cur = (self.u, self.v)
        for k in range(1, self.p * self.p):
            if cur == (1, 0):
                return k
            cur = self._mul(cur, (self.u, self.v))
        raise NotAUnit(f"alpha = {self.u}+{self.v}w is not a unit mod {self.p}")

    def power_is_one(self, f):
        return self.power(f) == (1, 0)

    def __repr__(self):
        if self.v == 0:
            return f"FrobeniusRoot({self.u} mod {self.p})"
        return f"FrobeniusRoot({self.u}+{self.v}w, w^2={self.D} mod {self.p})"


def frobenius_root(a, c, p):
    return FrobeniusRoot(a, c, p)


def p_torsion_from_trace(a, c, f, p):
    """(1 - alpha^f)(1 - bar-alpha^f) = 0 mod p for the roots of x^2 - ax + c."""
    fr = FrobeniusRoot(a, c, p)
    au, av = fr.power(f)
    bu, bv = FrobeniusRootConj(fr).power(f)
    one_minus = lambda t: ((1 - t[0]) % p, (-t[1]) % p)
    xu, xv = one_minus((au, av))
    yu, yv = one_minus((bu, bv))
    D = fr.D if fr.D is not None else 0
    prod_u = (xu * yu + D * xv * yv) % p
    prod_v = (xu * yv + xv * yu) % p
    assert prod_v == 0, "norm form must be rational"
    return prod_u == 0


def local_p_torsion(E, ell, f, p):
    """Whether p | #E(F_{ell^f}) at a good prime ell != p, decided exactly
    from the Frobenius roots: #E = (1 - alpha^f)(1 - bar-alpha^f) mod p."""
    assert E.classify_reduction(ell).kind == GOOD and ell != p
    return p_torsion_from_trace(E.a_ell(ell), ell, f, p)


class FrobeniusRootConj:
    """The conjugate root a - alpha, sharing the quadratic model of alpha."""

    def __init__(self, fr):
        self.p, self.D = fr.p, fr.D
        self.u, self.v = (fr.a - fr.u) % fr.p, (-fr.v) % fr.p
        self._mul = fr._mul

    def power(self, k):
        result = (1, 0)
        base = (self.u, self.v)
        while k:
            if k & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            k >>= 1
        return result


# ----------------------------------------------------------------------
# direct point counts over small extension fields (test oracle)


def _find_irreducible(ell, f):
    """Deterministically first monic irreducible of degree f over F_ell."""
    from .arith import _modp_norm, _modp_powmod, _modp_gcd_monic, _zp_sub

    if f == 1:
        return [0, 1]
    count = 0
    limit = ell**f
    while count < limit:
        digits = []
        c = count
        for _ in range(f):
            digits.append(c % ell)
            c //= ell
        poly = digits + [1]
        # irreducibility: x^{ell^f} = x mod poly and gcd(x^{ell^{f/q}} - x, poly) = 1
        xq = _modp_powmod([0, 1], ell**f, poly, ell)
        if _modp_norm(_zp_sub(xq, [0, 1]), ell) == []:
            ok = True
            for q in factorize(f):
                xr = _modp_powmod([0, 1], ell ** (f // q), poly, ell)
                g = _modp_gcd_monic(poly, _modp_norm(_zp_sub(xr, [0, 1]), ell), ell)
                if len(g) > 1:
                    ok = False
                    break
            if ok:
                return poly
        count += 1
    raise AssertionError("no irreducible found")  # pragma: no cover


def gf_point_count(E, ell, f):
    """#E(F_{ell^f}) by enumeration; intended as an oracle for ell^f <= 10^4."""
    from .arith import _modp_rem, _zp_mul, _zp_add

    q = ell**f
    assert q <= 200000, "enumeration oracle out of range"
    if E.disc % ell == 0:
        raise BadReduction(f"{ell} divides the discriminant")
    modpoly = _find_irreducible(ell, f)

    def elements():
        for idx in range(q):
            digits = []
            c = idx
            for _ in range(f):
                digits.append(c % ell)
                c //= ell
            while digits and digits[-1] == 0:
                digits.pop()
            yield digits

    def mul(x, y):
        return _modp_rem(_zp_mul(x, y), modpoly, ell) if x and y else []

    def add(x, y):
        return [c % ell for c in _zp_add(x, y)]

    def scal(k, x):
        return [c * k % ell for c in x]

    count = 1  # infinity
    if ell == 2:
        # y^2 + c(x) y = d(x): one solution when c = 0, else 2 iff Tr(d/c^2)=0
        for x in elements():
            cpoly = add(scal(E.a1 % 2, x), [E.a3 % 2])
            x2 = mul(x, x)
            d = add(add(mul(x2, x), scal(E.a2 % 2, x2)), add(scal(E.a4 % 2, x), [E.a6 % 2]))
            from .arith import _zp_trim

            cpoly = _zp_trim(cpoly)
            d = _zp_trim(d)
            if not cpoly:
                count += 1  # unique square root in char 2
            else:
                cinv = _ff_inv(cpoly, modpoly, ell)
                u = mul(d, mul(cinv, cinv))
                # absolute trace to F_2
                tr = []
                frob = u
                for _ in range(f):
                    tr = add(tr, frob)
                    frob = mul(frob, frob)
                tr = _zp_trim([c % 2 for c in tr])
                count += 2 if not tr else 0
        return count
    # odd characteristic: count solutions of z^2 = g(x), g = 4x^3+b2x^2+2b4x+b6
    squares = set()
    for idx in range(q):
        digits = []
        c = idx
        for _ in range(f):
            digits.append(c % ell)
            c //= ell
        while digits and digits[-1] == 0:
            digits.pop()
        squares.add(tuple(_modp_rem(_zp_mul(digits, digits), modpoly, ell) if digits else []))
    for x in elements():
        x2 = mul(x, x)
        g = add(
            add(scal(4, mul(x2, x)), scal(E.b2 % ell, x2)),
            add(scal((2 * E.b4) % ell, x), [E.b6 % ell]),
        )
        from .arith import _zp_trim

        g = _zp_trim([c % ell for c in g])
        if not g:
            count += 1
        elif tuple(g) in squares:
            count += 2
    return count


def _ff_inv(x, modpoly, ell):
    """Inverse in F_ell[t]/(modpoly) via Fermat: x^{q-2}."""
    from .arith import _modp_powmod

    q = ell ** (len(modpoly) - 1)
    return _modp_powmod(x, q - 2, modpoly, ell)
