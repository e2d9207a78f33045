"""Small exact linear algebra over Fraction: kernels, restriction, Pfaffians.

Nothing here is clever.  The matrices that show up are antisymmetric forms
on cell coordinates, a dozen rows at most, so recursive expansion with a
subset memo beats bringing in a numerical stack and keeps every value an
exact rational.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainMismatch


def kernel_basis(rows, dim) -> list:
    """Basis of the common kernel of the given functionals on Q^dim.

    ``rows`` is an iterable of length-``dim`` rational vectors.  Returns the
    standard free-column basis from the reduced row echelon form, one vector
    per non-pivot coordinate.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    for row in mat:
        if len(row) != dim:
            raise DomainMismatch(f"row length {len(row)} != dimension {dim}")
    pivots = []
    r = 0
    for c in range(dim):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    basis = []
    pivot_set = set(pivots)
    for c in range(dim):
        if c in pivot_set:
            continue
        vec = [Fraction(0)] * dim
        vec[c] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][c]
        basis.append(vec)
    return basis


def restrict_form(matrix, basis) -> list:
    """Pull an antisymmetric form back to a subspace: B^T A B."""
    a = [[Fraction(x) for x in row] for row in matrix]
    out = []
    for u in basis:
        au = [sum(a[i][j] * u[j] for j in range(len(u))) for i in range(len(a))]
        out.append([sum(v[i] * au[i] for i in range(len(v))) for v in basis])
    # out[i][j] currently holds v_j^T A u_i; transpose into row-major B^T A B
    return [[out[j][i] for j in range(len(basis))] for i in range(len(basis))]


def pfaffian(matrix) -> Fraction:
    """Pfaffian of an antisymmetric rational matrix (0 for odd size, 1 for empty)."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    for i in range(n):
        if len(a[i]) != n:
            raise DomainMismatch("matrix is not square")
        for j in range(i, n):
            if a[i][j] != -a[j][i]:
                raise DomainMismatch("matrix is not antisymmetric")
    if n % 2 == 1:
        return Fraction(0)

    memo = {}

    def pf(indices):
        if not indices:
            return Fraction(1)
        key = indices
        hit = memo.get(key)
        if hit is not None:
            return hit
        first = indices[0]
        rest = indices[1:]
        total = Fraction(0)
        for pos, j in enumerate(rest):
            if a[first][j]:
                sub = rest[:pos] + rest[pos + 1:]
                term = a[first][j] * pf(sub)
                total += term if pos % 2 == 0 else -term
        memo[key] = total
        return total

    return pf(tuple(range(n)))
