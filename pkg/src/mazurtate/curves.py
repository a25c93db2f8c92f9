"""Built-in table of minimal models used throughout the test corpus.

Models and reduction data follow Cremona's tables; the small-prime entries
record reduction kinds at 2 and 3 that the c4/c6 criteria cannot decide.
"""

from .ellcurve import ECurve

CURVES = {
    "11a1": ECurve((0, -1, 1, -10, -20), 11, label="11a1"),
    "14a1": ECurve((1, 0, 1, 4, -6), 14, small_prime_reduction={2: "nonsplit"}, label="14a1"),
    "37a1": ECurve((0, 0, 1, -1, 0), 37, label="37a1"),
    "32a1": ECurve(
        (0, 0, 0, 4, 0), 32, small_prime_reduction={2: "additive", "pot2": "good"}, label="32a1"
    ),
}


def curve(label):
    assert label in CURVES, f"unknown curve label {label}"
    return CURVES[label]


def qexp_coeffs(E, bound):
    """[a_1, ..., a_bound] of the attached weight-2 newform, by multiplicativity."""
    from .arith import primes_up_to

    a = [0] * (bound + 1)
    a[1] = 1
    for ell in primes_up_to(bound):
        ap = E.a_ell(ell)
        eps = 1 if E.N % ell else 0
        q = ell
        prev, cur = 1, ap
        while q <= bound:
            a[q] = cur
            prev, cur = cur, ap * cur - eps * ell * prev
            q *= ell
    for n in range(2, bound + 1):
        # split off the ell-primary part for the smallest prime factor
        m = n
        ell = 2
        while ell * ell <= m and m % ell:
            ell += 1
        if ell * ell > m:
            ell = m
        q = 1
        while m % ell == 0:
            m //= ell
            q *= ell
        if m > 1:
            a[n] = a[q] * a[m]
    return a[1:]
