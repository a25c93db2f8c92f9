"""Weight-2 modular symbols for Gamma_0(N) over Q via Manin symbols.

The space M_2(Gamma_0(N)) is presented by generators V(c:d), (c:d) in
P^1(Z/N), and the two Manin relations V(x) + V(x sigma) = 0 and
V(x) + V(x tau) + V(x tau^2) = 0 (Manin; see also Cremona's and Stein's
books).  We work throughout with the dual picture: a symbol is a vector of
values w[x] = phi(V(x)) annihilated by the relation rows, Hecke operators
act through their action on classes, and evaluation at a path
{oo} - {a/m} expands the path into unimodular steps by continued
fractions.  The eigensymbol of a rational newform is cut out by
(T_ell - a_ell) for ell up to the Sturm bound ceil(index/6) together with
the involution iota, and is normalized to cohomological scale: its values
on the integral cuspidal sublattice (kernel of the boundary map) have
content 1, so boundary torsion may contribute denominators -- for 11a1
the plus-part takes values in (1/5)Z.
"""

import math
from fractions import Fraction

from .arith import factorize, is_prime, primes_up_to
from .errors import NotRationalNewform
from .linalg import kernel_basis

SIGMA = ((0, -1), (1, 0))
TAU = ((0, -1), (1, -1))
TAU2 = ((-1, 1), (-1, 0))


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


class P1List:
    """Canonical representatives of P^1(Z/N): unit-orbit minima of (c, d)."""

    def __init__(self, N):
        assert N >= 1
        self.N = N
        units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1]
        seen = {}
        reps = []
        for c in range(max(N, 1)):
            for d in range(max(N, 1)):
                if math.gcd(math.gcd(c, d), N) != 1 or (c, d) in seen:
                    continue
                orbit = sorted(((u * c) % N, (u * d) % N) for u in units)
                idx = len(reps)
                reps.append(orbit[0])
                for pt in orbit:
                    seen[pt] = idx
        self.reps = reps
        self._lookup = seen

    def index(self, c, d):
        key = (c % self.N, d % self.N)
        assert key in self._lookup, f"({c}:{d}) not a point of P^1(Z/{self.N})"
        return self._lookup[key]

    def apply(self, i, g):
        """Index of rep_i acted on the right by the 2x2 matrix g."""
        c, d = self.reps[i]
        return self.index(c * g[0][0] + d * g[1][0], c * g[0][1] + d * g[1][1])

    def __len__(self):
        return len(self.reps)


def _lift_to_sl2(c, d, N):
    """An SL_2(Z) matrix whose bottom row is congruent to (c, d) mod N."""
    if N == 1:
        return (1, 0, 0, 1)
    c0 = c % N
    d0 = d % N
    if c0 == 0:
        # (0:d) with d a unit is the point (0:1); take the identity lift
        assert math.gcd(d0, N) == 1
        return (1, 0, 0, 1)
    t = 0
    while math.gcd(c0, d0 + t * N) != 1:
        t += 1
        assert t <= N, "no coprime lift found"
    d1 = d0 + t * N
    g, x, y = _xgcd(d1, -c0)
    if g < 0:
        g, x, y = -g, -x, -y
    assert g == 1
    # a*d1 - b*c0 = 1 with a = x, b = y
    return (x, y, c0, d1)


def _cusp_normalize(num, den):
    if den == 0:
        return (1, 0)
    g = math.gcd(num, den)
    num, den = num // g, den // g
    if den < 0:
        num, den = -num, -den
    return (num, den)


def _cusps_equivalent(c1, c2, N):
    """Gamma_0(N)-equivalence of cusps (Cremona, Prop. 8.13)."""
    (a1, q1), (a2, q2) = c1, c2
    s1 = _inverse_mod_loose(a1, q1)
    s2 = _inverse_mod_loose(a2, q2)
    g = math.gcd(q1 * q2, N)
    return (s1 * q2 - s2 * q1) % g == 0 if g else s1 * q2 == s2 * q1


def _inverse_mod_loose(a, c):
    if c == 0:
        assert a in (1, -1)
        return a
    if c == 1:
        return 0
    return pow(a % c, -1, c)


def _num_cusps(N):
    return sum(
        _phi(math.gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0
    )


def _phi(n):
    r = 1
    for p, e in factorize(n).items():
        r *= (p - 1) * p ** (e - 1)
    return r


def genus_gamma0(N):
    """Genus of X_0(N) by the index/elliptic-point/cusp count formula."""
    idx = N
    for p in factorize(N):
        idx = idx // p * (p + 1)
    if N % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p in factorize(N):
            if p == 2:
                continue
            nu2 *= 1 + (1 if p % 4 == 1 else -1)
    if N % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p in factorize(N):
            if p == 3:
                continue
            nu3 *= 1 + (1 if p % 3 == 1 else -1)
    nuinf = _num_cusps(N)
    g = 1 + Fraction(idx, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nuinf, 2)
    assert g.denominator == 1
    return int(g)


class ModSymSpace:
    """Dual-presented weight-2 modular symbol space for Gamma_0(N)."""

    def __init__(self, N):
        self.N = N
        self.p1 = P1List(N)
        n = len(self.p1)
        self.index = n
        rows = []
        for i in range(n):
            r = [Fraction(0)] * n
            r[i] += 1
            r[self.p1.apply(i, SIGMA)] += 1
            rows.append(r)
        for i in range(n):
            r = [Fraction(0)] * n
            r[i] += 1
            r[self.p1.apply(i, TAU)] += 1
            r[self.p1.apply(i, TAU2)] += 1
            rows.append(r)
        self.relation_rows = rows
        self.symbol_kernel = kernel_basis(rows, n)
        self._path_cache = {}
        self._build_boundary()
        g = genus_gamma0(N)
        assert len(self.cusp_classes) == _num_cusps(N)
        assert len(self.symbol_kernel) == 2 * g + _num_cusps(N) - 1, (
            len(self.symbol_kernel), g, _num_cusps(N))
        self.genus = g

    # -- boundary map
    def _build_boundary(self):
        classes = []

        def class_of(cusp):
            for k, rep in enumerate(classes):
                if _cusps_equivalent(cusp, rep, self.N):
                    return k
            classes.append(cusp)
            return len(classes) - 1

        n = len(self.p1)
        col_entries = []
        for c, d in self.p1.reps:
            a, b, c0, d0 = _lift_to_sl2(c, d, self.N)
            col_entries.append((class_of(_cusp_normalize(b, d0)), class_of(_cusp_normalize(a, c0))))
        self.cusp_classes = classes
        D = [[0] * n for _ in range(len(classes))]
        for i, (k0, k1) in enumerate(col_entries):
            D[k0][i] += 1
            D[k1][i] -= 1
        self.boundary_rows = D

    # -- path expansion
    def path_to_infty(self, num, den):
        """{oo} - {num/den} as [(rep_index, coeff)]; continued fractions."""
        key = (num, den)
        hit = self._path_cache.get(key)
        if hit is not None:
            return hit
        assert den != 0, "path endpoint must be a rational number"
        if den < 0:
            num, den = -num, -den
        g = math.gcd(abs(num), den)
        if g:
            num, den = num // g, den // g
        # convergents of num/den, with p_{-1}/q_{-1} = 1/0
        a, m = num, den
        quots = []
        while m:
            q, r = divmod(a, m)
            quots.append(q)
            a, m = m, r
        p_prev, q_prev = 1, 0
        p_cur, q_cur = quots[0], 1
        out = [((-1) ** (0 - 1) * q_cur, q_prev)]
        for k in range(1, len(quots)):
            p_prev, p_cur = p_cur, quots[k] * p_cur + p_prev
            q_prev, q_cur = q_cur, quots[k] * q_cur + q_prev
            out.append(((-1) ** (k - 1) * q_cur, q_prev))
        pairs = tuple((self.p1.index(c, d), 1) for (c, d) in out)
        self._path_cache[key] = pairs
        return pairs

    def path_vector(self, alpha, beta):
        """{alpha} - {beta} as [(rep_index, coeff)]; endpoints in Q or None=oo."""
        acc = {}
        if beta is not None:
            for i, s in self.path_to_infty(beta[0], beta[1]):
                acc[i] = acc.get(i, 0) + s
        if alpha is not None:
            for i, s in self.path_to_infty(alpha[0], alpha[1]):
                acc[i] = acc.get(i, 0) - s
        return [(i, s) for i, s in acc.items() if s]

    # -- Hecke and involution matrices (acting on value vectors)
    def hecke_rows(self, ell):
        assert is_prime(ell)
        n = len(self.p1)
        eps = 1 if self.N % ell else 0
        rows = []
        for i, (c, d) in enumerate(self.p1.reps):
            a, b, c0, d0 = _lift_to_sl2(c, d, self.N)
            acc = [0] * n
            g0 = (b, d0)
            ginf = (a, c0)
            images = []
            if eps:
                images.append((self._scale(g0, ell), self._scale(ginf, ell)))
            for j in range(ell):
                images.append((self._shift_div(g0, j, ell), self._shift_div(ginf, j, ell)))
            for al, be in images:
                for idx, s in self.path_vector(al, be):
                    acc[idx] += s
            rows.append(acc)
        return rows

    @staticmethod
    def _scale(pt, ell):
        num, den = pt
        if den == 0:
            return None
        return (num * ell, den)

    @staticmethod
    def _shift_div(pt, j, ell):
        num, den = pt
        if den == 0:
            return None
        return (num + j * den, den * ell)

    def iota_rows(self):
        n = len(self.p1)
        rows = []
        for i, (c, d) in enumerate(self.p1.reps):
            r = [0] * n
            r[self.p1.index(-c, d)] = 1
            rows.append(r)
        return rows

    def sturm_bound(self):
        return -(-self.index // 6)


def integer_kernel(rows, ncols):
    """Saturated basis of {v in Z^ncols : A v = 0} by unimodular column ops."""
    A = [list(map(int, r)) for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def combine(j, k, a, b, c, d):
        for row in A:
            row[j], row[k] = a * row[j] + b * row[k], c * row[j] + d * row[k]
        for row in U:
            row[j], row[k] = a * row[j] + b * row[k], c * row[j] + d * row[k]

    fixed = 0
    for r in range(len(A)):
        while True:
            nz = [j for j in range(fixed, ncols) if A[r][j]]
            if len(nz) <= 1:
                break
            j, k = nz[0], nz[1]
            g, x, y = _xgcd(A[r][j], A[r][k])
            # col_j <- x col_j + y col_k (entry g); col_k <- -(Ak/g) col_j + (Aj/g) col_k (entry 0)
            combine(j, k, x, y, -(A[r][k] // g), A[r][j] // g)
        nz = [j for j in range(fixed, ncols) if A[r][j]]
        if nz:
            j = nz[0]
            if j != fixed:
                combine(fixed, j, 0, 1, 1, 0)
            fixed += 1
    return [[U[i][j] for i in range(ncols)] for j in range(fixed, ncols)]


class EigenSymbol:
    """The +- eigensymbol vectors of a rational newform, cohomologically scaled."""

    def __init__(self, E, space, wplus, wminus):
        self.E = E
        self.space = space
        self.wplus = wplus
        self.wminus = wminus

    def value_vector(self, sign):
        return self.wplus if sign > 0 else self.wminus

    def normalize_at_p(self, p):
        """Sign vectors divided by p^c, c = min ord_p over the generator values."""
        out = []
        for w in (self.wplus, self.wminus):
            vals = [x for x in w if x]
            c = min(_ord_p_fraction(x, p) for x in vals)
            scale = Fraction(1, p**c) if c >= 0 else Fraction(p ** (-c))
            out.append([x * scale for x in w])
        return out

    def ev(self, num, den, sign=0):
        """phi({oo} - {num/den}); sign=+1/-1 picks a component, 0 the full symbol."""
        pairs = self.space.path_to_infty(num, den)
        if sign > 0:
            w = self.wplus
        elif sign < 0:
            w = self.wminus
        else:
            w = None
        if w is not None:
            return sum(w[i] * s for i, s in pairs)
        return sum((self.wplus[i] + self.wminus[i]) * s for i, s in pairs)


def _ord_p_fraction(x, p):
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _primitive_integer(vec):
    """Scale a rational vector to a primitive integer vector, first nonzero > 0."""
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    assert g > 0, "zero vector"
    ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-u for u in ints]
            break
    return ints

_SPACE_CACHE = {}
_EIGEN_CACHE = {}


def symbol_space(N):
    if N not in _SPACE_CACHE:
        _SPACE_CACHE[N] = ModSymSpace(N)
    return _SPACE_CACHE[N]


def isolate_eigensymbol(E, sturm_override=None):
    """Cut out phi_E^+- by Hecke kernels and iota; cohomological normalization."""
    key = (E.ainvs, E.N, sturm_override)
    if key in _EIGEN_CACHE:
        return _EIGEN_CACHE[key]
    space = symbol_space(E.N)
    n = space.index
    sturm = sturm_override if sturm_override is not None else space.sturm_bound()
    stacked = [list(r) for r in space.relation_rows]
    for ell in primes_up_to(sturm):
        a = E.a_ell(ell)
        for i, row in enumerate(space.hecke_rows(ell)):
            r = [Fraction(x) for x in row]
            r[i] -= a
            stacked.append(r)
    iota = space.iota_rows()
    cut = {}
    for sign in (1, -1):
        rows = [list(r) for r in stacked]
        for i in range(n):
            r = [Fraction(x) for x in iota[i]]
            r[i] -= sign
            rows.append(r)
        ker = kernel_basis(rows, n)
        if len(ker) != 1:
            raise NotRationalNewform(
                f"{E.label or E.ainvs}: {('plus' if sign > 0 else 'minus')} eigenspace has "
                f"dimension {len(ker)} at Sturm bound {sturm}"
            )
        cut[sign] = ker[0]
    ker_z = integer_kernel(space.boundary_rows, n)
    out = []
    for sign in (1, -1):
        w = _primitive_integer(cut[sign])
        g = 0
        for v in ker_z:
            g = math.gcd(g, abs(sum(wi * vi for wi, vi in zip(w, v))))
        assert g > 0, "eigensymbol vanishes on the cuspidal lattice"
        # pair against (1 +- iota)H_1, whose values are twice those on H_1;
        # this is the scale in which 11a1 shows the classical 1/5 at {oo}-{0}
        out.append([Fraction(x, 2 * g) for x in w])
    sym = EigenSymbol(E, space, out[0], out[1])
    _EIGEN_CACHE[key] = sym
    return sym
