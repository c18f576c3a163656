"""The paired antisymmetric weighted matrices and their structural identities.

Two matrix families (a plain and a starred variant) are defined for every
order p = 2**n with n >= 2.  The order-4 matrices are fixed tables; every
larger matrix is a (p/4 x p/4) array of 4x4 blocks whose content depends
only on the signed block offset d = (block column - block row):

* d odd: the negated base block, with +4 or -4 added on its diagonal
  according to d mod 4;
* d = y * 2**x with x >= 1 and y odd: the base block itself, with
  +(x + 4) or -(x + 4) added on its diagonal according to y mod 4.

The starred variant uses the opposite diagonal signs throughout.  Entries
are "levels" in [-(n+1), n+1]; the extreme levels +-(n+1) occur exactly at
the p positions (i, i +- p/2).

Two independent evaluation routes are provided and cross-validated by the
test suite: ``build_dense`` assembles the block structure literally, while
``entry_at``/``entry_values`` evaluate any single entry in constant time
from the offset decomposition.  All public indices are 1-based so that
printed fixtures can be compared positionally.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from recon_census.report import VerificationReport

__all__ = [
    "DENSE_ORDER_LIMIT",
    "MatrixVariant",
    "WeightedMatrix",
    "base_matrix",
    "build_dense",
    "check_lemma1",
    "entry_at",
    "entry_grid",
    "entry_values",
    "level_bound",
    "order_exponent",
    "sign_flip",
]

#: Largest order materialized as a dense matrix by default (16 MiB of int8).
DENSE_ORDER_LIMIT = 8192


class MatrixVariant(enum.Enum):
    """Selects one of the two matrix families."""

    PLAIN = "plain"
    STAR = "star"


_BASE = {
    MatrixVariant.PLAIN: np.array(
        [
            [0, 1, 2, 3],
            [-1, 0, 3, -2],
            [-2, -3, 0, 1],
            [-3, 2, -1, 0],
        ],
        dtype=np.int8,
    ),
    MatrixVariant.STAR: np.array(
        [
            [0, -2, -3, -1],
            [2, 0, 1, -3],
            [3, -1, 0, 2],
            [1, 3, -2, 0],
        ],
        dtype=np.int8,
    ),
}
for _b in _BASE.values():
    _b.setflags(write=False)


def order_exponent(p: int) -> int:
    """Return n for a valid order p = 2**n >= 4, else raise ValueError."""
    if not isinstance(p, (int, np.integer)):
        raise ValueError(f"order must be an integer, got {p!r}")
    p = int(p)
    if p < 4 or p & (p - 1):
        raise ValueError(f"order must be a power of two >= 4, got {p}")
    return p.bit_length() - 1


def level_bound(p: int) -> int:
    """Largest absolute entry value at order p (one more than the exponent)."""
    return order_exponent(p) + 1


@dataclass(frozen=True, eq=False)
class WeightedMatrix:
    """Immutable dense matrix of one variant at one order.

    ``entries`` is a read-only int8 array addressed 0-based; the public
    accessors are 1-based.
    """

    order: int
    variant: MatrixVariant
    entries: np.ndarray

    def __post_init__(self) -> None:
        n = order_exponent(self.order)
        e = self.entries
        if e.shape != (self.order, self.order) or e.dtype != np.int8:
            raise ValueError("entries must be an int8 array of shape (p, p)")
        if np.any(np.diagonal(e) != 0):
            raise ValueError("diagonal entries must be 0")
        if not np.array_equal(e.T, -e):
            raise ValueError("matrix must be antisymmetric")
        if int(np.abs(e).max()) > n + 1:
            raise ValueError(f"entries must lie in [-(n+1), n+1] = [{-(n+1)}, {n+1}]")
        e.setflags(write=False)

    @property
    def exponent(self) -> int:
        return order_exponent(self.order)

    def entry(self, i: int, j: int) -> int:
        """Entry at row i, column j (1-based)."""
        if not (1 <= i <= self.order and 1 <= j <= self.order):
            raise IndexError(f"indices must lie in 1..{self.order}, got ({i}, {j})")
        return int(self.entries[i - 1, j - 1])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entry(i, j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedMatrix):
            return NotImplemented
        return (
            self.order == other.order
            and self.variant == other.variant
            and np.array_equal(self.entries, other.entries)
        )

    def __repr__(self) -> str:
        return f"WeightedMatrix(order={self.order}, variant={self.variant.value})"

    def to_csv(self) -> str:
        """Rows as comma-separated signed integers, each newline-terminated."""
        return "".join(
            ",".join(str(int(v)) for v in row) + "\n" for row in self.entries
        )


def base_matrix(variant: MatrixVariant) -> WeightedMatrix:
    """The fixed order-4 matrix of the given variant."""
    return WeightedMatrix(4, variant, _BASE[variant].copy())


def _offset_block(variant: MatrixVariant, d: int) -> np.ndarray:
    """The 4x4 block placed at signed block offset d."""
    base = _BASE[variant]
    if d == 0:
        return base
    star = variant is MatrixVariant.STAR
    if d % 2 == 1:
        sign = 1 if d % 4 == 1 else -1
        if star:
            sign = -sign
        block = -base.astype(np.int32) + 4 * sign * np.eye(4, dtype=np.int32)
    else:
        x = (d & -d).bit_length() - 1
        y = d >> x
        # the offset case split is total: every even d is y * 2**x, y odd
        if not (x >= 1 and y % 2 == 1):
            raise AssertionError(f"offset decomposition failed for d={d}")
        sign = 1 if y % 4 == 1 else -1
        if star:
            sign = -sign
        block = base.astype(np.int32) + (x + 4) * sign * np.eye(4, dtype=np.int32)
    return block.astype(np.int8)


@lru_cache(maxsize=16)
def _dense_entries(p: int, variant: MatrixVariant) -> np.ndarray:
    if p == 4:
        return _BASE[variant]
    nb = p // 4
    tiled = np.zeros((nb, 4, nb, 4), dtype=np.int8)
    for d in range(-(nb - 1), nb):
        block = _offset_block(variant, d)
        rows = np.arange(max(0, -d), min(nb, nb - d))
        tiled[rows, :, rows + d, :] = block
    entries = tiled.reshape(p, p)
    entries.setflags(write=False)
    return entries


def build_dense(
    p: int, variant: MatrixVariant, *, dense_limit: int = DENSE_ORDER_LIMIT
) -> WeightedMatrix:
    """Assemble the full matrix block by block.

    Refuses orders above ``dense_limit`` (default 2**13) so that memory
    use stays predictable; ``entry_at`` serves larger orders.
    """
    order_exponent(p)
    if p > dense_limit:
        raise ValueError(
            f"dense construction refused for p={p} > limit {dense_limit}; "
            "use entry_at/entry_values instead"
        )
    return WeightedMatrix(p, variant, _dense_entries(p, variant))


def entry_at(p: int, variant: MatrixVariant, i: int, j: int) -> int:
    """Constant-time evaluation of entry (i, j) at order p (1-based).

    Computes the block offset of the position, its 2-adic decomposition,
    and combines the order-4 base entry with the sign and diagonal
    increment of the matching offset case.  Agrees with ``build_dense``
    entrywise (cross-validated by the acceptance suite).
    """
    order_exponent(p)
    if not (1 <= i <= p and 1 <= j <= p):
        raise IndexError(f"indices must lie in 1..{p}, got ({i}, {j})")
    r = (i - 1) & 3
    c = (j - 1) & 3
    base = int(_BASE[variant][r, c])
    d = ((j - 1) >> 2) - ((i - 1) >> 2)
    if d == 0:
        return base
    star = variant is MatrixVariant.STAR
    if d % 2 == 1:
        sign = 1 if d % 4 == 1 else -1
        if star:
            sign = -sign
        return -base + (4 * sign if r == c else 0)
    x = (d & -d).bit_length() - 1
    y = d >> x
    sign = 1 if y % 4 == 1 else -1
    if star:
        sign = -sign
    return base + ((x + 4) * sign if r == c else 0)


def _offset_case_values(variant: MatrixVariant, d, r, c) -> np.ndarray:
    """Closed-form value for block offset d and in-block residues r, c (0-based)."""
    base = _BASE[variant][r, c].astype(np.int32)
    diag = r == c
    odd = (d & 1) == 1
    odd_sign = np.where((d & 3) == 1, 4, -4)
    safe = np.where(odd | (d == 0), np.int32(2), d)
    x = np.bitwise_count((safe & -safe) - np.int32(1)).astype(np.int32)
    y = safe >> x
    even_sign = np.where((y & 3) == 1, x + 4, -(x + 4))
    sign = np.where(odd, odd_sign, even_sign)
    if variant is MatrixVariant.STAR:
        sign = -sign
    vals = np.where(odd, -base, base)
    vals = np.where(diag & (d != 0), vals + sign, vals)
    vals = np.where(d == 0, base, vals)
    return vals.astype(np.int8)


@lru_cache(maxsize=32)
def _offset_case_table(p: int, variant: MatrixVariant) -> np.ndarray:
    """All distinct entry values at order p, indexed [d + p/4 - 1, r, c]."""
    nb = p // 4
    d = np.arange(-(nb - 1), nb, dtype=np.int32)[:, None, None]
    r = np.arange(4, dtype=np.int32)[:, None]
    c = np.arange(4, dtype=np.int32)[None, :]
    table = _offset_case_values(variant, d, r, c)
    table.setflags(write=False)
    return table


def entry_values(p: int, variant: MatrixVariant, i, j) -> np.ndarray:
    """Vectorized ``entry_at``: i and j are broadcast 1-based index arrays.

    Entries depend only on the block offset and the in-block residues, so
    the closed form is evaluated once per distinct case into a per-order
    table and the query becomes a single gather.
    """
    order_exponent(p)
    i = np.asarray(i, dtype=np.int32)
    j = np.asarray(j, dtype=np.int32)
    if i.size and (i.min() < 1 or i.max() > p):
        raise IndexError(f"row indices must lie in 1..{p}")
    if j.size and (j.min() < 1 or j.max() > p):
        raise IndexError(f"column indices must lie in 1..{p}")
    table = _offset_case_table(p, variant)
    offset = ((j - 1) >> 2) - ((i - 1) >> 2) + (p // 4 - 1)
    return table[offset, (i - 1) & 3, (j - 1) & 3]


def entry_grid(
    p: int, variant: MatrixVariant, rows=None, cols=None
) -> np.ndarray:
    """Rectangular grid of entries, evaluated in row chunks.

    ``rows``/``cols`` are 1-based index vectors; both default to 1..p.
    """
    rows = np.arange(1, p + 1, dtype=np.int32) if rows is None else np.asarray(rows, np.int32)
    cols = np.arange(1, p + 1, dtype=np.int32) if cols is None else np.asarray(cols, np.int32)
    out = np.empty((rows.size, cols.size), dtype=np.int8)
    step = max(1, (1 << 22) // max(1, cols.size))
    for s in range(0, rows.size, step):
        out[s : s + step] = entry_values(
            p, variant, rows[s : s + step, None], cols[None, :]
        )
    return out


def sign_flip(p: int, i: int, j: int) -> int:
    """Sign relating an entry to its half-shifted images.

    For distinct i, j in 1..p/2 the entries at (i, j + p/2) and
    (i + p/2, j) equal ``sign_flip(p, i, j)`` times the entry at (i, j),
    in both variants: always -1 at p = 8, and -1 exactly when
    |j - i| = p/4 for p >= 16.
    """
    order_exponent(p)
    if p < 8:
        raise ValueError(f"sign_flip requires p >= 8, got {p}")
    h = p // 2
    if not (1 <= i <= h and 1 <= j <= h):
        raise IndexError(f"indices must lie in 1..{h}, got ({i}, {j})")
    if i == j:
        raise ValueError("sign_flip is undefined on the diagonal")
    if p == 8:
        return -1
    return -1 if abs(j - i) == p // 4 else 1


def _first_mismatch(lhs: np.ndarray, rhs: np.ndarray, rows, cols, mask=None):
    """First (i, j, lhs, rhs) difference in row-major order, or None."""
    neq = lhs != rhs
    if mask is not None:
        neq &= mask
    if not neq.any():
        return None
    r, c = divmod(int(np.argmax(neq)), neq.shape[1])
    return int(rows[r]), int(cols[c]), int(lhs[r, c]), int(rhs[r, c])


def check_lemma1(p: int) -> VerificationReport:
    """Exhaustively verify the four structural identities at order p >= 8.

    (a) both half-order quadrants (top-left, bottom-right) equal the
    half-order matrix entrywise; (b)/(c) half-shifted entries flip sign
    exactly as ``sign_flip`` states; (d) the extreme levels +-(n+1) sit
    exactly at column/row offsets of p/2.  Both variants are checked;
    the first violation, if any, is reported.
    """
    n = order_exponent(p)
    if p < 8:
        raise ValueError(f"check_lemma1 requires p >= 8, got {p}")
    h = p // 2
    idx = np.arange(1, h + 1, dtype=np.int32)
    checked = 0
    counterexample = None

    for variant in (MatrixVariant.PLAIN, MatrixVariant.STAR):
        top_left = entry_grid(p, variant, idx, idx)
        half = entry_grid(h, variant, idx, idx)
        bottom_right = entry_grid(p, variant, idx + h, idx + h)
        col_shift = entry_grid(p, variant, idx, idx + h)
        row_shift = entry_grid(p, variant, idx + h, idx)

        # (a) nested copies
        for big, rows, cols in (
            (top_left, idx, idx),
            (bottom_right, idx + h, idx + h),
        ):
            checked += h * h
            if counterexample is None:
                hit = _first_mismatch(big, half, rows, cols)
                if hit is not None:
                    counterexample = (0, *hit)

        # (b)/(c) half-shift sign pattern on off-diagonal pairs
        if p == 8:
            signs = np.full((h, h), -1, dtype=np.int32)
        else:
            dist = np.abs(idx[None, :] - idx[:, None])
            signs = np.where(dist == p // 4, -1, 1)
        off = idx[:, None] != idx[None, :]
        expected = (signs * top_left.astype(np.int32)).astype(np.int8)
        for shifted, rows, cols in (
            (col_shift, idx, idx + h),
            (row_shift, idx + h, idx),
        ):
            checked += h * h - h
            if counterexample is None:
                hit = _first_mismatch(shifted, expected, rows, cols, mask=off)
                if hit is not None:
                    counterexample = (0, *hit)

        # (d) extreme levels at offset p/2
        upper = 1 if variant is MatrixVariant.PLAIN else -1
        want_up = np.full(h, upper * (n + 1), dtype=np.int8)
        up = entry_values(p, variant, idx, idx + h)
        down = entry_values(p, variant, idx + h, idx)
        checked += 2 * h
        if counterexample is None:
            for got, want, rows, cols in (
                (up, want_up, idx, idx + h),
                (down, -want_up, idx + h, idx),
            ):
                bad = np.nonzero(got != want)[0]
                if bad.size:
                    b = int(bad[0])
                    counterexample = (
                        0,
                        int(rows[b]),
                        int(cols[b]),
                        int(got[b]),
                        int(want[b]),
                    )
                    break

    return VerificationReport(
        check_name="lemma1",
        order=p,
        outcome=counterexample is None,
        counterexample=counterexample,
        checked_count=checked,
    )
