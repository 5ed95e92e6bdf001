"""Exact Gaussian elimination over the rationals on sparse rows.

Rows are dicts column -> Fraction.  Pivoting is deterministic: columns are
processed in ascending index order and the first available row is taken, so
reduced forms, ranks and nullspace bases are reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows: list[dict[int, Fraction]], ncols: int):
    """Reduce rows in place to reduced row echelon form.

    Returns the list of pivot (row, col) pairs.  Zero rows are left at the
    bottom in their original relative order.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i].get(c):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = {j: v / pv for j, v in rows[r].items()}
        prow = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            factor = rows[i].get(c)
            if not factor:
                continue
            row = rows[i]
            for j, v in prow.items():
                s = row.get(j, 0) - factor * v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    return pivots


def nullspace(rows: list[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Canonical basis of the kernel of the matrix given by sparse rows.

    Each basis vector has a 1 in one free column and the pivot columns
    filled by back substitution; vectors are ordered by free column index.
    """
    work = [dict(row) for row in rows]
    pivots = rref(work, ncols)
    pivot_cols = {c: r for r, c in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        vec = {f: Fraction(1)}
        for c, r in pivot_cols.items():
            v = work[r].get(f)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def rank(rows: list[dict[int, Fraction]], ncols: int) -> int:
    work = [dict(row) for row in rows]
    return len(rref(work, ncols))
