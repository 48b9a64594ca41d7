"""Exact rank and cokernel of sparse integer relation matrices.

Ranks are computed modulo at least two ~2**31 primes and cross-checked;
a modular rank can only undershoot the rational one, so agreement across
independent primes certifies the value far beyond test noise while
keeping elimination in machine words.  A fraction-free integer
elimination is kept alongside as the small-matrix oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, UnluckyPrimeError
from .relations import RelationRow

# Verified primes just below 2**31, largest first.
PRIME_POOL = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
    2147483549, 2147483543, 2147483497, 2147483489, 2147483477,
)
DEFAULT_PRIMES = PRIME_POOL[:2]


@dataclass(frozen=True)
class SparseMatrix:
    """Relation rows over a fixed column count."""

    rows: tuple[RelationRow, ...]
    num_cols: int

    def __post_init__(self) -> None:
        if self.num_cols < 0:
            raise DomainError("num_cols must be >= 0")
        for row in self.rows:
            if row.entries and row.entries[-1][0] >= self.num_cols:
                raise DomainError("row references a column beyond num_cols")

    @classmethod
    def from_rows(cls, rows: Sequence[RelationRow], num_cols: int) -> "SparseMatrix":
        return cls(tuple(rows), num_cols)

    def max_abs_coefficient(self) -> int:
        return max((abs(v) for row in self.rows for _, v in row.entries), default=0)


@dataclass(frozen=True)
class RankResult:
    rank: int
    primes: tuple[int, ...]
    agreement: bool
    quotient_dim: int

    def __post_init__(self) -> None:
        if self.rank < 0 or self.quotient_dim < 0:
            raise DomainError("rank and quotient dimension must be >= 0")


def _column_blocks(rows: list[dict[int, int]]) -> dict[int, list[dict[int, int]]]:
    """Group rows into connected blocks of columns (union-find); columns
    never sharing a row can be eliminated independently."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in rows:
        cols = list(row)
        for col in cols:
            parent.setdefault(col, col)
        root = find(cols[0])
        for col in cols[1:]:
            parent[find(col)] = root
    blocks: dict[int, list[dict[int, int]]] = {}
    for row in rows:
        blocks.setdefault(find(next(iter(row))), []).append(row)
    return blocks


def _eliminate_block(rows: list[dict[int, int]], p: int) -> int:
    """Sparse Gaussian elimination of one block over F_p.

    Pivot policy: shortest remaining row, then lowest leading column,
    then insertion order (Markowitz-lite, fully deterministic).
    """
    col_rows: dict[int, set[int]] = {}
    for rid, row in enumerate(rows):
        for col in row:
            col_rows.setdefault(col, set()).add(rid)
    alive = set(range(len(rows)))
    rank = 0
    while alive:
        rid = min(alive, key=lambda r: (len(rows[r]), min(rows[r]), r))
        alive.discard(rid)
        pivot_row = rows[rid]
        pc = min(pivot_row)
        inv = pow(pivot_row[pc], -1, p)
        pivot_row = {c: (v * inv) % p for c, v in pivot_row.items()}
        rows[rid] = pivot_row
        rank += 1
        for sid in list(col_rows.get(pc, ())):
            if sid == rid or sid not in alive:
                continue
            target = rows[sid]
            factor = target[pc]
            for c, v in pivot_row.items():
                new = (target.get(c, 0) - factor * v) % p
                if new:
                    if c not in target:
                        col_rows.setdefault(c, set()).add(sid)
                    target[c] = new
                elif c in target:
                    del target[c]
                    col_rows[c].discard(sid)
            if not target:
                alive.discard(sid)
    return rank


def _rows_mod_p(m: SparseMatrix, p: int) -> list[dict[int, int]]:
    out = []
    for row in m.rows:
        reduced = {c: v % p for c, v in row.entries if v % p}
        if reduced:
            out.append(reduced)
    return out


def _check_prime(m: SparseMatrix, p: int) -> None:
    if p <= m.max_abs_coefficient():
        raise DomainError(f"prime {p} does not exceed the largest coefficient")


def rank_mod_p(m: SparseMatrix, p: int) -> int:
    """Rank of the row space over F_p."""
    _check_prime(m, p)
    rows = _rows_mod_p(m, p)
    if not rows:
        return 0
    return sum(_eliminate_block(block, p)
               for _, block in sorted(_column_blocks(rows).items()))


def rank_multiprime(m: SparseMatrix, primes: Sequence[int] = DEFAULT_PRIMES,
                    max_retries: int = 3) -> RankResult:
    """Rank agreed across several primes.

    Disagreement (an unlucky prime undershooting) triggers retries with
    fresh primes from the pool; persistent disagreement raises
    UnluckyPrimeError rather than guessing.
    """
    primes = tuple(primes)
    if len(set(primes)) < 2:
        raise DomainError("need at least two distinct primes")
    used = set(primes)
    observed_max = 0
    attempt_primes = primes
    for _ in range(max_retries + 1):
        ranks = [rank_mod_p(m, p) for p in attempt_primes]
        observed_max = max(observed_max, *ranks)
        if len(set(ranks)) == 1:
            return RankResult(rank=ranks[0], primes=attempt_primes,
                              agreement=True,
                              quotient_dim=m.num_cols - ranks[0])
        fresh = [p for p in PRIME_POOL if p not in used][:len(primes)]
        if len(fresh) < 2:
            break
        used.update(fresh)
        attempt_primes = tuple(fresh)
    raise UnluckyPrimeError(
        f"modular ranks kept disagreeing; max observed rank {observed_max}")


def _rref_mod_p(m: SparseMatrix, p: int) -> tuple[list[tuple[int, dict[int, int]]], int]:
    """Reduced row echelon form over F_p: sorted (pivot column, row) pairs."""
    pivots: list[tuple[int, dict[int, int]]] = []
    for source in m.rows:
        row = {c: v % p for c, v in source.entries if v % p}
        for pc, prow in pivots:
            if pc in row:
                factor = row[pc]
                for c, v in prow.items():
                    new = (row.get(c, 0) - factor * v) % p
                    if new:
                        row[c] = new
                    else:
                        row.pop(c, None)
        if not row:
            continue
        pc = min(row)
        inv = pow(row[pc], -1, p)
        row = {c: (v * inv) % p for c, v in row.items()}
        for i, (opc, orow) in enumerate(pivots):
            if pc in orow:
                factor = orow[pc]
                for c, v in row.items():
                    new = (orow.get(c, 0) - factor * v) % p
                    if new:
                        orow[c] = new
                    else:
                        orow.pop(c, None)
        pivots.append((pc, row))
    pivots.sort()
    return pivots, len(pivots)


def cokernel_functionals(m: SparseMatrix, p: int) -> list[list[int]]:
    """Canonical basis of functionals over F_p vanishing on every row.

    One vector per non-pivot column of the reduced echelon form, so the
    list has exactly num_cols - rank entries and is deterministic.
    """
    _check_prime(m, p)
    pivots, _ = _rref_mod_p(m, p)
    pivot_cols = {pc for pc, _ in pivots}
    out = []
    for free in range(m.num_cols):
        if free in pivot_cols:
            continue
        vec = [0] * m.num_cols
        vec[free] = 1
        for pc, row in pivots:
            coef = row.get(free, 0)
            if coef:
                vec[pc] = (-coef) % p
        out.append(vec)
    return out


def apply_functional(row: RelationRow, vec: Sequence[int], p: int) -> int:
    """<row, vec> mod p; zero for every cokernel functional."""
    return sum(v * vec[c] for c, v in row.entries) % p


def fraction_free_rank(m: SparseMatrix) -> int:
    """Exact integer rank by fraction-free (Bareiss) elimination.

    Densifies the matrix; intended as the independent oracle on small
    instances (a few hundred columns), not the production path.
    """
    dense = [[0] * m.num_cols for _ in range(len(m.rows))]
    for i, row in enumerate(m.rows):
        for c, v in row.entries:
            dense[i][c] = v
    n_rows = len(dense)
    rank = 0
    prev = 1
    for col in range(m.num_cols):
        pivot = next((i for i in range(rank, n_rows) if dense[i][col]), None)
        if pivot is None:
            continue
        dense[rank], dense[pivot] = dense[pivot], dense[rank]
        piv_val = dense[rank][col]
        for i in range(rank + 1, n_rows):
            row_i = dense[i]
            factor = row_i[col]
            for j in range(col + 1, m.num_cols):
                row_i[j] = (row_i[j] * piv_val - factor * dense[rank][j]) // prev
            row_i[col] = 0
        prev = piv_val
        rank += 1
        if rank == n_rows:
            break
    return rank
