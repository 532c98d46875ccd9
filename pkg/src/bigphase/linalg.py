"""Dense linear algebra over series-valued square matrices.

Matrices are tuples of tuples of :class:`~bigphase.series.TruncatedSeries`
(row-major, 0-based).  Sizes stay at desk scale (N ≤ 3 rows), so plain dense
loops are the right tool; the only nontrivial routine is the inverse, which
combines an exact Gaussian elimination of the constant block with a Neumann
series for the higher-degree part.
"""

from __future__ import annotations

from typing import Callable, Sequence, Tuple

from .series import SeriesRing, TruncatedSeries

__all__ = [
    "SeriesMatrix",
    "mat_from_rows",
    "mat_identity",
    "mat_zero",
    "mat_const",
    "mat_add",
    "mat_sub",
    "mat_neg",
    "mat_mul",
    "mat_scale",
    "mat_transpose",
    "mat_conjugate",
    "mat_map",
    "mat_commutator",
    "mat_apply",
    "mat_inverse",
    "mat_max_abs",
    "scalar_mat_inverse",
]

SeriesMatrix = Tuple[Tuple[TruncatedSeries, ...], ...]


def mat_from_rows(rows: Sequence[Sequence[TruncatedSeries]]) -> SeriesMatrix:
    size = len(rows)
    out = tuple(tuple(row) for row in rows)
    for row in out:
        if len(row) != size:
            raise ValueError("matrix must be square")
    return out


def mat_identity(ring: SeriesRing, size: int) -> SeriesMatrix:
    return tuple(
        tuple(ring.one() if i == j else ring.zero() for j in range(size))
        for i in range(size)
    )


def mat_zero(ring: SeriesRing, size: int) -> SeriesMatrix:
    return tuple(tuple(ring.zero() for _ in range(size)) for _ in range(size))


def mat_const(ring: SeriesRing, entries: Sequence[Sequence]) -> SeriesMatrix:
    """Build a constant matrix from scalar-like entries."""
    return tuple(tuple(ring.const(x) for x in row) for row in entries)


def mat_add(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: SeriesMatrix) -> SeriesMatrix:
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(a: SeriesMatrix, s) -> SeriesMatrix:
    return tuple(tuple(x * s for x in row) for row in a)


def mat_mul(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    size = len(a)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = a[i][0] * b[0][j]
            for k in range(1, size):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_transpose(a: SeriesMatrix) -> SeriesMatrix:
    return tuple(tuple(a[j][i] for j in range(len(a))) for i in range(len(a)))


def mat_conjugate(a: SeriesMatrix) -> SeriesMatrix:
    return tuple(tuple(x.conjugate() for x in row) for row in a)


def mat_map(a: SeriesMatrix, fn: Callable[[TruncatedSeries], TruncatedSeries]) -> SeriesMatrix:
    return tuple(tuple(fn(x) for x in row) for row in a)


def mat_commutator(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def mat_apply(a: SeriesMatrix, vec: Sequence[TruncatedSeries]) -> Tuple[TruncatedSeries, ...]:
    """Matrix-vector product ``(a @ vec)``."""
    out = []
    for row in a:
        acc = row[0] * vec[0]
        for k in range(1, len(row)):
            acc = acc + row[k] * vec[k]
        out.append(acc)
    return tuple(out)


def scalar_mat_inverse(ring: SeriesRing, entries: Sequence[Sequence]) -> Tuple[Tuple, ...]:
    """Exact inverse of a scalar matrix via Gauss-Jordan elimination.

    Entries and the result are ring scalars (ComplexRational or complex).
    Raises ``ValueError`` when the matrix is singular.
    """
    size = len(entries)
    work = [[ring.scalar(x) for x in row] for row in entries]
    if any(len(row) != size for row in work):
        raise ValueError("matrix must be square")
    aug = [row + [ring.scalar(1 if i == j else 0) for j in range(size)]
           for i, row in enumerate(work)]
    for col in range(size):
        pivot_row = next(
            (r for r in range(col, size) if not ring.scalar_is_zero(aug[r][col])),
            None,
        )
        if pivot_row is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [x / pivot for x in aug[col]]
        for r in range(size):
            if r == col:
                continue
            factor = aug[r][col]
            if ring.scalar_is_zero(factor):
                continue
            aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


def mat_inverse(a: SeriesMatrix) -> SeriesMatrix:
    """Inverse of a series matrix with invertible constant block.

    Writes ``A = A0 (I - X)`` with ``X = I - A0^{-1} A`` of valuation ≥ 1 and
    sums the geometric series in ``X`` through the degree cap.
    """
    ring = a[0][0].ring
    size = len(a)
    const_block = [[entry.constant_term() for entry in row] for row in a]
    inv0_scalars = scalar_mat_inverse(ring, const_block)
    inv0 = tuple(tuple(ring.const(x) for x in row) for row in inv0_scalars)
    x = mat_sub(mat_identity(ring, size), mat_mul(inv0, a))
    window = min(min(e._window() for row in a for e in row), ring.d_max)
    acc = mat_identity(ring, size)
    power = mat_identity(ring, size)
    for _ in range(window):
        power = mat_mul(power, x)
        if all(e.is_zero for row in power for e in row):
            break
        acc = mat_add(acc, power)
    result = mat_mul(acc, inv0)
    if all(e.is_zero for row in x for e in row) and all(
        e.exact for row in a for e in row
    ):
        return result  # constant matrix: the inverse is exact
    return mat_map(result, lambda s: s._with_window(False, window))


def mat_max_abs(a: SeriesMatrix):
    """Largest coefficient magnitude over all entries."""
    best = None
    for row in a:
        for entry in row:
            m = entry.max_abs()
            best = m if best is None else max(best, m)
    return best
