"""Exact linear algebra over Q (dense Fraction matrices).

Only what the modular-symbol quotient needs: row echelon form with a fixed
pivot order (leftmost column first, first nonzero row), kernel bases, and
solving.  Deterministic by construction -- no pivoting heuristics.
"""

from fractions import Fraction


def rref(rows, ncols):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        sel = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        inv = Fraction(1) / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat[:rank], pivots


def kernel_basis(rows, ncols):
    """Basis of the right kernel {v : A v = 0}, echelonized."""
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[fc]
        basis.append(v)
    return basis


def mat_mul_vec(rows, v):
    return [sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in rows]


def intersect_kernels(mats, ncols):
    """Basis of the common right kernel of a list of matrices."""
    stacked = []
    for m in mats:
        stacked.extend(m)
    if not stacked:
        return [[Fraction(1) if i == j else Fraction(0) for j in range(ncols)] for i in range(ncols)]
    return kernel_basis(stacked, ncols)
