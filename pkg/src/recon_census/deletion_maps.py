"""The point-deletion mappings: construction, evaluation, and identity checks.

For every order p = 2**n >= 4 and every deleted point k, a bijection on
{1..p} minus {k} is defined.  The order-4 mappings are fixed tables; at
larger orders the value is obtained by folding both arguments into the
half order (subtract p/2 from anything above p/2), recursing, and adding
p/2 back when the queried point lay in the lower half.  Points whose fold
collides with the deleted point's fold are fixed.

``sigma`` is that folded evaluation (O(log p) per query).  It is a derived
simplification, so the verbatim case-by-case recursion is kept alongside
as ``sigma_reference`` and the two are cross-validated exhaustively by the
test suite, together with the printed order 4/8/16 tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from recon_census.report import VerificationReport
from recon_census.weight_matrix import order_exponent

__all__ = [
    "DeletionMap",
    "ExtendedMap",
    "base_sigma",
    "build_map",
    "check_lemma2",
    "extend_sigma_p1",
    "sigma",
    "sigma_reference",
    "sigma_table_tsv",
    "sigma_values",
]

# _SIGMA4[k-1, i-1] = image of point i when point k is deleted (order 4);
# the diagonal is a 0 placeholder for the undefined slot.
_SIGMA4 = np.array(
    [
        [0, 4, 2, 3],
        [3, 0, 4, 1],
        [4, 1, 0, 2],
        [2, 3, 1, 0],
    ],
    dtype=np.int32,
)
_SIGMA4.setflags(write=False)


def _check_args(p: int, k: int, i: int) -> None:
    order_exponent(p)
    if not 1 <= k <= p:
        raise IndexError(f"deleted point must lie in 1..{p}, got {k}")
    if not 1 <= i <= p:
        raise IndexError(f"point must lie in 1..{p}, got {i}")
    if i == k:
        raise ValueError(f"mapping is undefined at the deleted point {k}")


def sigma(p: int, k: int, i: int) -> int:
    """Image of point i under the order-p mapping that deletes point k."""
    _check_args(p, k, i)
    shift = 0
    while p > 4:
        h = p >> 1
        fi = i - h if i > h else i
        fk = k - h if k > h else k
        if fi == fk:
            return i + shift
        if i <= h:
            shift += h
        p, i, k = h, fi, fk
    return int(_SIGMA4[k - 1, i - 1]) + shift


def sigma_reference(p: int, k: int, i: int) -> int:
    """Verbatim case-by-case recursion; cross-check oracle for ``sigma``."""
    _check_args(p, k, i)
    if p == 4:
        return int(_SIGMA4[k - 1, i - 1])
    h = p // 2
    if k <= h:
        if i <= h:
            return sigma_reference(h, k, i) + h
        if i != k + h:
            return sigma_reference(h, k, i - h)
        return i
    if i <= h:
        if i != k - h:
            return sigma_reference(h, k - h, i) + h
        return i
    return sigma_reference(h, k - h, i - h)


def sigma_values(p: int, k, i) -> np.ndarray:
    """Vectorized ``sigma``: k and i are broadcast 1-based index arrays."""
    order_exponent(p)
    k = np.asarray(k, dtype=np.int32)
    i = np.asarray(i, dtype=np.int32)
    k, i = np.broadcast_arrays(k, i)
    if i.size == 0:
        return np.zeros(i.shape, dtype=np.int32)
    if i.min() < 1 or i.max() > p or k.min() < 1 or k.max() > p:
        raise IndexError(f"points must lie in 1..{p}")
    if np.any(i == k):
        raise ValueError("mapping is undefined at the deleted point")
    out = np.zeros(i.shape, dtype=np.int32)
    shift = np.zeros(i.shape, dtype=np.int32)
    done = np.zeros(i.shape, dtype=bool)
    ci = i.copy()
    ck = k.copy()
    while p > 4:
        h = p >> 1
        fi = np.where(ci > h, ci - h, ci)
        fk = np.where(ck > h, ck - h, ck)
        fixed = ~done & (fi == fk)
        out = np.where(fixed, ci + shift, out)
        done |= fixed
        live = ~done
        shift = np.where(live & (ci <= h), shift + h, shift)
        ci = np.where(live, fi, ci)
        ck = np.where(live, fk, ck)
        p = h
    rem = ~done
    base = _SIGMA4[np.where(rem, ck, 1) - 1, np.where(rem, ci, 1) - 1]
    return np.where(rem, base + shift, out)


@dataclass(frozen=True, eq=False)
class DeletionMap:
    """One mapping, tabulated.

    ``table`` is a read-only int32 array of p slots where slot i-1 holds
    the image of point i; the deleted point's slot holds the absence
    marker 0.
    """

    order: int
    deleted_point: int
    table: np.ndarray

    def __post_init__(self) -> None:
        order_exponent(self.order)
        if not 1 <= self.deleted_point <= self.order:
            raise ValueError(
                f"deleted point must lie in 1..{self.order}, got {self.deleted_point}"
            )
        table = np.ascontiguousarray(self.table, dtype=np.int32)
        if table.shape != (self.order,):
            raise ValueError(f"table must have {self.order} slots")
        if table[self.deleted_point - 1] != 0:
            raise ValueError("the deleted slot must hold the absence marker 0")
        points = np.arange(1, self.order + 1, dtype=np.int32)
        keep = points != self.deleted_point
        if not np.array_equal(np.sort(table[keep]), points[keep]):
            raise ValueError(
                "defined slots must form a bijection missing the deleted point"
            )
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def apply(self, i: int) -> int:
        _check_args(self.order, self.deleted_point, i)
        return int(self.table[i - 1])

    def as_array(self) -> np.ndarray:
        return self.table

    def items(self):
        """Yield (point, image) pairs in point order, skipping the deleted slot."""
        for i in range(1, self.order + 1):
            if i != self.deleted_point:
                yield i, int(self.table[i - 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DeletionMap):
            return NotImplemented
        return (
            self.order == other.order
            and self.deleted_point == other.deleted_point
            and np.array_equal(self.table, other.table)
        )

    def __repr__(self) -> str:
        return f"DeletionMap(order={self.order}, deleted_point={self.deleted_point})"


@dataclass(frozen=True, eq=False)
class ExtendedMap:
    """The deleted-point-1 mapping extended to a full permutation by fixing 1."""

    order: int
    permutation: np.ndarray

    def __post_init__(self) -> None:
        order_exponent(self.order)
        if self.order < 8:
            raise ValueError(f"extension requires order >= 8, got {self.order}")
        perm = np.ascontiguousarray(self.permutation, dtype=np.int32)
        if perm.shape != (self.order,):
            raise ValueError(f"permutation must have {self.order} slots")
        if perm[0] != 1:
            raise ValueError("the extension must fix point 1")
        points = np.arange(1, self.order + 1, dtype=np.int32)
        if not np.array_equal(np.sort(perm), points):
            raise ValueError("extension is not a permutation")
        if not np.array_equal(perm[1:], _map_table(self.order, 1)[1:]):
            raise ValueError("extension must restrict to the point-1 deletion mapping")
        perm.setflags(write=False)
        object.__setattr__(self, "permutation", perm)

    def apply(self, i: int) -> int:
        if not 1 <= i <= self.order:
            raise IndexError(f"point must lie in 1..{self.order}, got {i}")
        return int(self.permutation[i - 1])

    def as_array(self) -> np.ndarray:
        return self.permutation

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtendedMap):
            return NotImplemented
        return self.order == other.order and np.array_equal(
            self.permutation, other.permutation
        )

    def __repr__(self) -> str:
        return f"ExtendedMap(order={self.order})"


@lru_cache(maxsize=None)
def _map_table(p: int, k: int) -> np.ndarray:
    points = np.arange(1, p + 1, dtype=np.int32)
    keep = points != k
    table = np.zeros(p, dtype=np.int32)
    table[keep] = sigma_values(p, k, points[keep])
    # bijectivity onto {1..p} minus {k}
    if not np.array_equal(np.sort(table[keep]), points[keep]):
        raise AssertionError(f"mapping table for (p={p}, k={k}) is not a bijection")
    table.setflags(write=False)
    return table


def build_map(p: int, k: int) -> DeletionMap:
    """Tabulate the order-p mapping deleting point k (cached per (p, k))."""
    order_exponent(p)
    if not 1 <= k <= p:
        raise IndexError(f"deleted point must lie in 1..{p}, got {k}")
    return DeletionMap(p, k, _map_table(p, k))


def base_sigma(k: int) -> DeletionMap:
    """The fixed order-4 mapping deleting point k."""
    return build_map(4, k)


def build_all_maps(p: int) -> tuple[DeletionMap, ...]:
    """All p mappings at order p, in deleted-point order."""
    order_exponent(p)
    return tuple(build_map(p, k) for k in range(1, p + 1))


def extend_sigma_p1(p: int) -> ExtendedMap:
    """Extend the point-1 deletion mapping to a permutation by fixing point 1."""
    order_exponent(p)
    if p < 8:
        raise ValueError(f"extend_sigma_p1 requires p >= 8, got {p}")
    perm = _map_table(p, 1).copy()
    perm[0] = 1
    return ExtendedMap(p, perm)


def sigma_table_tsv(p: int) -> str:
    """Tab-separated table, rows = point, columns = deleted point, 'X' at the hole."""
    order_exponent(p)
    columns = [_map_table(p, k) for k in range(1, p + 1)]
    lines = []
    for i in range(1, p + 1):
        cells = ["X" if i == k else str(int(columns[k - 1][i - 1])) for k in range(1, p + 1)]
        lines.append("\t".join(cells) + "\n")
    return "".join(lines)


def check_lemma2(p: int) -> VerificationReport:
    """Exhaustively verify the four mapping identities at order p >= 8.

    (a) deleting k and k + p/2 gives the same images away from both;
    (b) shifting the queried point by p/2 shifts its image by -p/2;
    (c) the image of j under the map deleting i lands at i +- p/2 exactly
    when j = i +- p/2, with matching sign; (d) under any deletion, image
    pairs differ by p/2 exactly when the points do, with the difference
    reversed in orientation.
    """
    order_exponent(p)
    if p < 8:
        raise ValueError(f"check_lemma2 requires p >= 8, got {p}")
    h = p // 2
    cols = [_map_table(p, k) for k in range(1, p + 1)]
    points = np.arange(1, p + 1, dtype=np.int32)
    checked = 0
    counterexample = None

    # (a) column halving
    for k in range(1, h + 1):
        a, b = cols[k - 1], cols[k + h - 1]
        mask = np.ones(p, dtype=bool)
        mask[[k - 1, k + h - 1]] = False
        checked += p - 2
        if counterexample is None:
            bad = np.nonzero((a != b) & mask)[0]
            if bad.size:
                i = int(bad[0]) + 1
                counterexample = (k, i, 0, int(a[i - 1]), int(b[i - 1]))

    # (b) half-shift equivariance
    low = np.arange(1, h + 1, dtype=np.int32)
    for k in range(1, p + 1):
        t = cols[k - 1]
        valid = (low != k) & (low + h != k)
        checked += int(valid.sum())
        if counterexample is None:
            lhs = t[low + h - 1]
            rhs = t[low - 1] - h
            bad = np.nonzero((lhs != rhs) & valid)[0]
            if bad.size:
                i = int(low[bad[0]])
                counterexample = (k, i + h, 0, int(lhs[bad[0]]), int(rhs[bad[0]]))

    # (c) distance-p/2 detection under deletion of an endpoint
    for i in range(1, p + 1):
        t = cols[i - 1]
        mask = points != i
        checked += p - 1
        if counterexample is None:
            plus_bad = ((points == i + h) != (t == i + h)) & mask
            minus_bad = ((points == i - h) != (t == i - h)) & mask
            bad = np.nonzero(plus_bad | minus_bad)[0]
            if bad.size:
                j = int(points[bad[0]])
                counterexample = (i, i, j, int(t[j - 1]), j)

    # (d) distance-p/2 preservation under every deletion
    for k in range(1, p + 1):
        t = cols[k - 1]
        rest = points[points != k]
        imgs = t[rest - 1]
        point_diff = rest[None, :] - rest[:, None]       # j - i
        image_diff = imgs[:, None] - imgs[None, :]       # image(i) - image(j)
        checked += (p - 1) * (p - 1)
        if counterexample is None:
            bad = ((point_diff == h) != (image_diff == h)) | (
                (point_diff == -h) != (image_diff == -h)
            )
            if bad.any():
                r, c = divmod(int(np.argmax(bad)), bad.shape[1])
                counterexample = (
                    k,
                    int(rest[r]),
                    int(rest[c]),
                    int(image_diff[r, c]),
                    int(point_diff[r, c]),
                )

    return VerificationReport(
        check_name="lemma2",
        order=p,
        outcome=counterexample is None,
        counterexample=counterexample,
        checked_count=checked,
    )
