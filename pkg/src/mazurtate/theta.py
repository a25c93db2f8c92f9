"""Mazur-Tate elements of weight-2 rational newforms and their algebra.

Theta_n^M(f) = sum over units a mod p^{n+1}M of phi_f({oo} - {a/p^{n+1}M})
sigma_a; twisting by a Dirichlet character psi and collapsing the wild
direction through the logarithm t_n sends it to the finite-level Iwasawa
algebra O[T]/((1+T)^{p^n} - 1).  Polynomials are stored on the group basis
(1+T)^j, where multiplication is cyclic convolution, the level-lowering
projection and the trace are exponent reduction and fibre spreading, and
evaluation at p-power roots of unity is a character sum.
"""

import math
from fractions import Fraction

from .arith import CycElt, TnTable, euler_phi
from .chars import DirichletChar
from .errors import (CoefficientDrift, ConductorError, ConductorMismatch,
                     DescentResidual, NoConventionMatches)
from .modsym import isolate_eigensymbol


class LambdaNPoly:
    """Element of O[T]/((1+T)^{p^n} - 1) on the basis (1+T)^j, j < p^n."""

    def __init__(self, p, n, coeffs):
        assert n >= 0 and len(coeffs) == p**n
        self.p = p
        self.n = n
        self.coeffs = [self._lift(c) for c in coeffs]

    @staticmethod
    def _lift(c):
        if isinstance(c, CycElt):
            return c
        return CycElt.from_rational(Fraction(c))

    @classmethod
    def zero(cls, p, n):
        return cls(p, n, [Fraction(0)] * p**n)

    @classmethod
    def unit_power(cls, p, n, t, scalar=1):
        """scalar * (1+T)^t."""
        c = [Fraction(0)] * p**n
        poly = cls(p, n, c)
        poly.coeffs[t % p**n] = poly._lift(scalar)
        return poly

    def copy(self):
        return LambdaNPoly(self.p, self.n, list(self.coeffs))

    def __add__(self, other):
        assert (self.p, self.n) == (other.p, other.n)
        return LambdaNPoly(self.p, self.n,
                           [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        assert (self.p, self.n) == (other.p, other.n)
        return LambdaNPoly(self.p, self.n,
                           [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return LambdaNPoly(self.p, self.n, [-a for a in self.coeffs])

    def scale(self, s):
        s = self._lift(s)
        return LambdaNPoly(self.p, self.n, [a * s for a in self.coeffs])

    def __mul__(self, other):
        assert (self.p, self.n) == (other.p, other.n)
        q = self.p**self.n
        out = [CycElt.zero(1) for _ in range(q)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero():
                    continue
                k = (i + j) % q
                out[k] = out[k] + a * b
        return LambdaNPoly(self.p, self.n, out)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return (self.p, self.n) == (other.p, other.n) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    # -- level maps
    def proj_level(self):
        """pi: reduce exponents mod p^{n-1} (quotient by (1+T)^{p^{n-1}} - 1)."""
        assert self.n >= 1
        q = self.p ** (self.n - 1)
        out = [CycElt.zero(1) for _ in range(q)]
        for t, c in enumerate(self.coeffs):
            out[t % q] = out[t % q] + c
        return LambdaNPoly(self.p, self.n - 1, out)

    def trace_up(self):
        """nu: spread each exponent over its p lifts one level up."""
        q = self.p**self.n
        out = [self.coeffs[i % q] for i in range(q * self.p)]
        return LambdaNPoly(self.p, self.n + 1, out)

    def subst_root(self, j, m):
        """Substitute (1+T) -> zeta_{p^m}^j (1+T)."""
        out = []
        for t, c in enumerate(self.coeffs):
            out.append(c * CycElt.root_of_unity(self.p**m, j * t))
        return LambdaNPoly(self.p, self.n, out)

    def eval_at_root(self, i):
        """Value at T = zeta_{p^i} - 1 (i <= n), as an exact cyclotomic number."""
        assert 0 <= i <= self.n
        q = self.p**i
        acc = CycElt.zero(1)
        for t, c in enumerate(self.coeffs):
            acc = acc + c * CycElt.root_of_unity(q, t % q)
        return acc

    # -- T-power coefficients, for invariants
    def t_coeffs(self):
        """Coefficients of T^i, i < p^n: a_i = sum_t binom(t, i) b_t."""
        q = self.p**self.n
        out = []
        for i in range(q):
            acc = CycElt.zero(1)
            for t in range(i, q):
                b = self.coeffs[t]
                if not b.is_zero():
                    acc = acc + b * math.comb(t, i)
            out.append(acc)
        return out

    def rational_t_coeffs(self):
        """T-power coefficients as Fractions; CoefficientDrift if irrational."""
        return [c.rational_value() for c in self.t_coeffs()]

    def __repr__(self):
        return f"LambdaNPoly(p={self.p}, n={self.n})"


class ThetaPoly:
    """Polynomial on the basis (1+T)^t with no level reduction.

    Character-group products of theta elements are taken here: mu and lambda
    are additive for honest polynomial products, while the finite-level
    quotient would fold exponents past p^n back down and destroy that.
    """

    def __init__(self, p, coeffs):
        self.p = p
        self.n = None  # not confined to a level
        cs = [LambdaNPoly._lift(c) for c in coeffs]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @classmethod
    def from_level(cls, F):
        return cls(F.p, F.coeffs)

    def __mul__(self, other):
        assert self.p == other.p
        out = [CycElt.zero(1)
               for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return ThetaPoly(self.p, out)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if self.p != other.p or len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def subst_root(self, j, m):
        """Substitute (1+T) -> zeta_{p^m}^j (1+T)."""
        out = [c * CycElt.root_of_unity(self.p**m, j * t)
               for t, c in enumerate(self.coeffs)]
        return ThetaPoly(self.p, out)

    def t_coeffs(self):
        """Coefficients of T^i: a_i = sum_t binom(t, i) b_t."""
        length = len(self.coeffs)
        out = []
        for i in range(length):
            acc = CycElt.zero(1)
            for t in range(i, length):
                b = self.coeffs[t]
                if not b.is_zero():
                    acc = acc + b * math.comb(t, i)
            out.append(acc)
        return out

    def rational_t_coeffs(self):
        """T-power coefficients as Fractions; CoefficientDrift if irrational."""
        return [c.rational_value() for c in self.t_coeffs()]

    def reduce(self, n):
        """The image in Lambda_n: fold exponents mod p^n."""
        q = self.p**n
        out = [CycElt.zero(1) for _ in range(q)]
        for t, c in enumerate(self.coeffs):
            out[t % q] = out[t % q] + c
        return LambdaNPoly(self.p, n, out)

    def __repr__(self):
        return f"ThetaPoly(p={self.p}, degree<{len(self.coeffs)})"


def omega_n(p, n):
    """nu(1) = sum_{j<p} (1+T)^{j p^{n-1}} in Lambda_n."""
    assert n >= 1
    one = LambdaNPoly(p, n - 1, [1] + [0] * (p ** (n - 1) - 1))
    return one.trace_up()


class ThetaRaw:
    """Untwisted Mazur-Tate element: value c_a for each unit a mod p^{n+1}M."""

    def __init__(self, E, p, n, M, c):
        self.E = E
        self.p = p
        self.n = n
        self.M = M
        self.modulus = p ** (n + 1) * M
        self.c = c
        assert set(c) == {a for a in range(self.modulus) if math.gcd(a, self.modulus) == 1}


_RAW_CACHE = {}
_SYMBOL_AT_P = {}
_TN_CACHE = {}


def _tn_table(p, n, M):
    key = (p, n, M)
    if key not in _TN_CACHE:
        _TN_CACHE[key] = TnTable(p, n, M)
    return _TN_CACHE[key]


def _full_symbol_at_p(E, p):
    key = (E.ainvs, E.N, p)
    if key not in _SYMBOL_AT_P:
        sym = isolate_eigensymbol(E)
        vp, vm = sym.normalize_at_p(p)
        _SYMBOL_AT_P[key] = (sym.space, [a + b for a, b in zip(vp, vm)])
    return _SYMBOL_AT_P[key]


def mazur_tate_raw(E, p, n, M=1):
    """Theta_n^M(f) as the unit-indexed family of full-symbol values."""
    assert M % p != 0 and E.N % p != 0
    key = (E.ainvs, E.N, p, n, M)
    if key in _RAW_CACHE:
        return _RAW_CACHE[key]
    space, w = _full_symbol_at_p(E, p)
    m = p ** (n + 1) * M
    c = {}
    for a in range(1, m):
        if math.gcd(a, m) != 1:
            continue
        pairs = space.path_to_infty(a, m)
        c[a] = sum(w[i] * s for i, s in pairs)
    raw = ThetaRaw(E, p, n, M, c)
    _RAW_CACHE[key] = raw
    return raw


def twist(raw, psi):
    """Theta_n^M(f, psi, T) = sum_a c_a psi(a) (1+T)^{t_n(a)} in Lambda_n."""
    p, n, M = raw.p, raw.n, raw.M
    if raw.modulus % psi.conductor != 0:
        raise ConductorMismatch(
            f"conductor {psi.conductor} does not divide {raw.modulus}")
    tn = _tn_table(p, n, M)
    q = p**n
    out = [CycElt.zero(1) for _ in range(q)]
    for a, ca in raw.c.items():
        if ca == 0:
            continue
        val = psi.value(a)
        if val.is_zero():
            continue
        t = tn.t(a)
        out[t] = out[t] + val * ca
    return LambdaNPoly(p, n, out)


def mazur_tate(E, p, n, M=1, psi=None):
    if psi is None:
        psi = DirichletChar.trivial(1)
    return twist(mazur_tate_raw(E, p, n, M), psi)


def c_sequence(E, p, upto):
    """c_0 = 0, c_1 = 1, c_m = (a_p c_{m-1} - eps_N(p) c_{m-2})/p."""
    ap = E.a_ell(p)
    eps = 1 if E.N % p else 0
    cs = [Fraction(0), Fraction(1)]
    while len(cs) <= upto:
        cs.append(Fraction(ap * cs[-1] - eps * cs[-2], p))
    return cs[: upto + 1]


def euler_h(E, p, n, ell, psi):
    """h_ell(psi, T) = a_ell - psi(ell)(1+T)^{t_n(ell)} - eps_N(ell) psi(ell)^{-1} (1+T)^{-t_n(ell)}."""
    if math.gcd(ell, p) != 1:
        raise ConductorError("Euler factor at p is not defined here")
    val = psi.value(ell)
    if val.is_zero():
        raise ConductorError(
            f"psi({ell}) = 0: no Euler factor at a prime dividing the conductor")
    t = _tn_table(p, n, 1).t(ell % p ** (n + 1))
    q = p**n
    h = LambdaNPoly.unit_power(p, n, 0, E.a_ell(ell))
    h = h - LambdaNPoly.unit_power(p, n, t).scale(val)
    if E.N % ell != 0:
        inv = psi.inverse().value(ell)
        h = h - LambdaNPoly.unit_power(p, n, (q - t) % q).scale(inv)
    return h


def check_tame_compat(E, p, n, M, ell, psi=None):
    """Exact identity Theta^{M ell}_n(psi) = h_ell(psi) Theta^M_n(psi), ell coprime to M p."""
    if psi is None:
        psi = DirichletChar.trivial(1)
    assert math.gcd(ell, M * p) == 1 and ell != p
    lhs = mazur_tate(E, p, n, M * ell, psi)
    rhs = euler_h(E, p, n, ell, psi) * mazur_tate(E, p, n, M, psi)
    return lhs == rhs


def check_vertical(E, p, n, M=1, psi=None):
    """Which level-lowering convention holds for pi(Theta_n); 'A', 'B', or both.

    A: pi(Theta_n) = a_p Theta_{n-1} - eps_N(p) nu(Theta_{n-2})
    B: pi(Theta_n) = (a_p - eps_N(p) p) Theta_{n-1}
    """
    if psi is None:
        psi = DirichletChar.trivial(1)
    assert n >= 2, "both sides need levels n-1 and n-2"
    eps = 1 if E.N % p else 0
    lhs = mazur_tate(E, p, n, M, psi).proj_level()
    th1 = mazur_tate(E, p, n - 1, M, psi)
    conv_a = th1.scale(E.a_ell(p)) - mazur_tate(E, p, n - 2, M, psi).trace_up().scale(eps)
    conv_b = th1.scale(E.a_ell(p) - eps * p)
    match_a = lhs == conv_a
    match_b = lhs == conv_b
    if match_a and match_b:
        return "both (degenerate)"
    if match_a:
        return "A"
    if match_b:
        return "B"
    raise NoConventionMatches(
        f"{E.label or E.ainvs}, p={p}, n={n}, M={M}: no vertical convention matches")


def check_eval_compat(E, p, n, M, psi, i):
    """Theta_n(psi, zeta_{p^i}-1) = p^{n-i} c_{n-i+1} Theta_i(psi, zeta_{p^i}-1), 0 < i < n."""
    assert 0 < i < n
    lhs = mazur_tate(E, p, n, M, psi).eval_at_root(i)
    cs = c_sequence(E, p, n - i + 1)
    rhs = mazur_tate(E, p, i, M, psi).eval_at_root(i) * (p ** (n - i) * cs[n - i + 1])
    return lhs == rhs


_DESCEND_CACHE = {}


def descend_to_field(E, X, p, n):
    """Theta_n(f/K) for the abelian field K cut out by the character group X.

    Forms the polynomial g = prod_{psi in X} Theta^{M_psi}_{n + n_K}(f, psi, T),
    checks that g has rational coefficients and is invariant under
    (1+T) -> zeta_{p^{n_K}}(1+T), and reads off the unique h with
    g(T) = h((1+T)^{p^{n_K}} - 1) from the supported exponents [Was97, 13.39].
    Returns (h, g) as honest polynomials: mu and lambda of theta products are
    additive only before reduction to a finite level.
    """
    from .chars import compute_nK

    key = (E.label or E.ainvs, p, n, frozenset(psi.signature() for psi in X))
    if key in _DESCEND_CACHE:
        return _DESCEND_CACHE[key]
    n_K = compute_nK(X, p)
    level = n + n_K
    g = None
    for psi in X:
        M_psi = psi.conductor
        while M_psi % p == 0:
            M_psi //= p
        factor = ThetaPoly.from_level(mazur_tate(E, p, level, M_psi, psi))
        g = factor if g is None else g * factor
    for c in g.coeffs:
        if not c.is_rational():
            raise CoefficientDrift("descent product has an irrational coefficient")
    if n_K > 0:
        for j in range(1, p**n_K):
            if g.subst_root(j, n_K) != g:
                raise DescentResidual(
                    f"descent product not invariant under the order-p^{n_K} substitution")
    step = p**n_K
    out = []
    for t, c in enumerate(g.coeffs):
        if t % step == 0:
            out.append(c)
        elif not c.is_zero():
            raise DescentResidual("support not contained in multiples of p^{n_K}")
    h = ThetaPoly(p, out)
    _DESCEND_CACHE[key] = (h, g)
    return h, g
