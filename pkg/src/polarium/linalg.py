"""Small dense exact linear algebra over CycloNumber entries.

Everything works on lists of row vectors (tuples). Sizes stay in the tens,
so plain fraction-free-less Gaussian elimination is plenty.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycloNumber

Vector = tuple[CycloNumber, ...]


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def vec_is_zero(u: Vector) -> bool:
    return all(a.is_zero() if isinstance(a, CycloNumber) else a == 0 for a in u)


def dot_int(ints, u: Vector):
    """Pair an integer vector with a CycloNumber covector."""
    total = CycloNumber.zero()
    for k, a in zip(ints, u):
        if k:
            total = total + k * a
    return total


def rref(rows: list[list[CycloNumber]]) -> tuple[list[list[CycloNumber]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [inv * v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows: list[list[CycloNumber]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: list[list[CycloNumber]], ncols: int) -> list[Vector]:
    """Deterministic basis of the right kernel of the matrix."""
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [CycloNumber.zero() for _ in range(ncols)]
        vec[fc] = CycloNumber.one()
        for i, pc in enumerate(pivots):
            vec[pc] = -reduced[i][fc]
        basis.append(tuple(vec))
    return basis


def solve_in_span(basis: list[Vector], target: Vector) -> list[CycloNumber] | None:
    """Coordinates of target in the span of basis, or None if outside."""
    if vec_is_zero(target):
        return [CycloNumber.zero() for _ in basis]
    if not basis:
        return None
    n = len(target)
    aug = [[basis[j][i] for j in range(len(basis))] + [target[i]] for i in range(n)]
    reduced, pivots = rref(aug)
    k = len(basis)
    if k in pivots:
        return None
    coords = [CycloNumber.zero()] * k
    for i, pc in enumerate(pivots):
        coords[pc] = reduced[i][k]
    return coords


def in_span(basis: list[Vector], target: Vector) -> bool:
    return solve_in_span(basis, target) is not None


def from_int_matrix(m) -> list[list[CycloNumber]]:
    return [[CycloNumber.from_rational(Fraction(x)) for x in row] for row in m]
