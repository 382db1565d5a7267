"""Exact sparse linear algebra over Z, Q and F_p.

Everything here is integer arithmetic: rank over F_p by sparse elimination
mod p, rank over Q by fraction-free integer elimination (rows are rescaled
by the pivot and renormalized by their gcd, which preserves rank and keeps
entries bounded in practice), and Smith normal form with a bit-length
guard for integer homology with torsion.  No floating point, no
probabilistic shortcuts anywhere: the artifact exists to detect dimension
differences of size one.

Matrices are dicts of sparse rows: ``rows[i] == {j: value}`` with nonzero
values only.
"""

from __future__ import annotations

from math import gcd

from .errors import ResourceLimitError

SparseRows = list[dict[int, int]]


def _column_index(rows: dict[int, dict[int, int]]) -> dict[int, set[int]]:
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    return cols


def _pick_pivot(
    rows: dict[int, dict[int, int]], cols: dict[int, set[int]], unit_only_first: bool
) -> tuple[int, int] | None:
    """Markowitz-style pivot: prefer +-1 entries, then minimal fill-in
    estimate (nnz(row)-1)*(nnz(col)-1)."""
    best = None
    best_score = None
    for r, row in rows.items():
        rl = len(row) - 1
        for c, v in row.items():
            unit = abs(v) == 1
            score = (not unit, rl * (len(cols[c]) - 1), abs(v))
            if best_score is None or score < best_score:
                best, best_score = (r, c), score
                if unit and score[1] == 0:
                    return best
    return best


def rank_mod_p(rows: SparseRows, p: int) -> int:
    """Exact rank over F_p by sparse Gaussian elimination."""
    work: dict[int, dict[int, int]] = {}
    for i, row in enumerate(rows):
        reduced = {j: v % p for j, v in row.items() if v % p}
        if reduced:
            work[i] = reduced
    cols = _column_index(work)
    rank = 0
    while work:
        picked = _pick_pivot(work, cols, unit_only_first=False)
        if picked is None:
            break
        r, c = picked
        pivot_row = work.pop(r)
        for j in pivot_row:
            cols[j].discard(r)
        rank += 1
        inv = pow(pivot_row[c], -1, p)
        targets = [i for i in cols.get(c, ()) if i in work]
        for i in targets:
            row = work[i]
            f = row[c] * inv % p
            for j, v in pivot_row.items():
                new = (row.get(j, 0) - f * v) % p
                if new:
                    if j not in row:
                        cols.setdefault(j, set()).add(i)
                    row[j] = new
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del work[i]
    return rank


def rank_integer(rows: SparseRows) -> int:
    """Exact rank over Q by fraction-free elimination with arbitrary
    precision integers.

    Row updates use ``p*row - a*pivot`` (an invertible operation over Q)
    followed by division of the row by its content, so no fractions ever
    appear.  Pivots are chosen Markowitz-style with +-1 entries preferred,
    which keeps boundary-matrix eliminations almost growth-free.
    """
    work: dict[int, dict[int, int]] = {}
    for i, row in enumerate(rows):
        reduced = {j: v for j, v in row.items() if v}
        if reduced:
            work[i] = reduced
    cols = _column_index(work)
    rank = 0
    while work:
        picked = _pick_pivot(work, cols, unit_only_first=True)
        if picked is None:
            break
        r, c = picked
        pivot_row = work.pop(r)
        for j in pivot_row:
            cols[j].discard(r)
        rank += 1
        p = pivot_row[c]
        targets = [i for i in cols.get(c, ()) if i in work]
        for i in targets:
            row = work[i]
            a = row[c]
            new_row: dict[int, int] = {}
            for j, v in row.items():
                new_row[j] = p * v
            for j, v in pivot_row.items():
                new_row[j] = new_row.get(j, 0) - a * v
            content = 0
            cleaned = {}
            for j, v in new_row.items():
                if v:
                    cleaned[j] = v
                    content = gcd(content, v)
            if content > 1:
                cleaned = {j: v // content for j, v in cleaned.items()}
            for j in row:
                if j not in cleaned:
                    cols[j].discard(i)
            for j in cleaned:
                if j not in row:
                    cols.setdefault(j, set()).add(i)
            if cleaned:
                work[i] = cleaned
            else:
                del work[i]
    return rank


def smith_invariant_factors(rows: SparseRows, max_entry_bits: int = 4096) -> list[int]:
    """Invariant factors (diagonal of the Smith normal form, divisibility
    ordered, without trailing zeros) of an integer matrix.

    Classical pivoting on a smallest-absolute-value entry with row/column
    moves; any intermediate entry exceeding ``max_entry_bits`` bits raises
    a resource error.
    """
    work: dict[int, dict[int, int]] = {}
    for i, row in enumerate(rows):
        reduced = {j: v for j, v in row.items() if v}
        for v in reduced.values():
            if v.bit_length() > max_entry_bits:
                raise ResourceLimitError(
                    "snf-entry-bits",
                    f"Smith normal form entry exceeded {max_entry_bits} bits",
                )
        if reduced:
            work[i] = dict(reduced)
    cols = _column_index(work)

    def set_entry(r: int, c: int, v: int) -> None:
        if v.bit_length() > max_entry_bits:
            raise ResourceLimitError(
                "snf-entry-bits",
                f"Smith normal form entry exceeded {max_entry_bits} bits",
            )
        row = work.setdefault(r, {})
        if v:
            if c not in row:
                cols.setdefault(c, set()).add(r)
            row[c] = v
        elif c in row:
            del row[c]
            cols[c].discard(r)
            if not row:
                del work[r]

    def add_row(dst: int, src: int, factor: int) -> None:
        if not factor or src not in work:
            return
        for c, v in list(work[src].items()):
            set_entry(dst, c, work.get(dst, {}).get(c, 0) + factor * v)

    def add_col(dst: int, src: int, factor: int) -> None:
        if not factor:
            return
        for r in list(cols.get(src, ())):
            v = work.get(r, {}).get(src, 0)
            if v:
                set_entry(r, dst, work.get(r, {}).get(dst, 0) + factor * v)

    diagonal: list[int] = []
    while work:
        r0, c0, v0 = None, None, None
        for r, row in work.items():
            for c, v in row.items():
                if v0 is None or abs(v) < abs(v0):
                    r0, c0, v0 = r, c, v
        assert r0 is not None and c0 is not None and v0 is not None

        while True:
            # clear the pivot column, then the pivot row, by quotients;
            # nonzero remainders become strictly smaller pivots
            changed = False
            for r in list(cols.get(c0, ())):
                if r == r0:
                    continue
                v = work.get(r, {}).get(c0, 0)
                if not v:
                    continue
                q = v // v0
                if v - q * v0 == 0:
                    add_row(r, r0, -q)
                else:
                    add_row(r, r0, -q)
                    r0, v0 = r, work[r][c0]
                    changed = True
                    break
            if changed:
                continue
            for c in list(work.get(r0, {})):
                if c == c0:
                    continue
                v = work[r0][c]
                q = v // v0
                add_col(c, c0, -q)
                if work.get(r0, {}).get(c, 0):
                    c0, v0 = c, work[r0][c]
                    changed = True
                    break
            if not changed:
                break

        # pivot row and column now hold only the pivot; check the pivot
        # divides the rest of the matrix, else fold an offending row in
        offender = None
        for r, row in work.items():
            if r == r0:
                continue
            for c, v in row.items():
                if v % v0:
                    offender = r
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(r0, offender, 1)
            continue

        diagonal.append(abs(v0))
        row = work.pop(r0, {})
        for c in row:
            cols[c].discard(r0)

    diagonal.sort()
    return diagonal
