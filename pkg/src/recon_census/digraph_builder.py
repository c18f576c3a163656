"""From weighted matrices to digraphs: assignments, canonical pairs, census.

A proper binary assignment sends every nonzero level to 0 or 1, the same
bit for all occurrences of a level.  Applying one to a weighted matrix
yields a loop-free digraph.  The canonical tournament pair maps positive
levels to 1 and negative levels to 0; the variant digraph pair maps
1, -1 and everything >= 3 to 1, and 2, -2 and everything <= -3 to 0.

Because the two extreme levels +-(n+1) are the only place the plain and
starred matrices disagree under the extended point-1 mapping, any
assignment giving both extremes the same bit produces an isomorphic pair
(``forced_isomorphism`` returns the verified witness).  Conjugating by the
half-swap involution exchanges the two extreme levels and nothing else
(``swap_involution`` verifies this), which pairs up assignments into
orbits yielding the same digraph pair.  ``assignment_census`` enumerates
every proper assignment at small orders and tabulates which ones yield
non-isomorphic pairs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from recon_census.deletion_maps import ExtendedMap, extend_sigma_p1
from recon_census.errors import ContradictionError
from recon_census.weight_matrix import (
    MatrixVariant,
    WeightedMatrix,
    build_dense,
    entry_grid,
    entry_values,
    order_exponent,
)

__all__ = [
    "BinaryAssignment",
    "CensusRow",
    "CensusTable",
    "DEFAULT_ISO_BUDGET",
    "Digraph",
    "ScoreVector",
    "apply_assignment",
    "assignment_census",
    "assignment_from_bits",
    "assignment_from_mapping",
    "constant_assignment",
    "forced_isomorphism",
    "scores",
    "standard_pair",
    "swap_involution",
    "threshold_scores",
    "tournament_assignment",
    "variant_assignment",
    "variant_pair",
]

DEFAULT_ISO_BUDGET = 200_000


@dataclass(frozen=True)
class BinaryAssignment:
    """A proper assignment of bits to the nonzero levels of order exponent n.

    ``bits`` is aligned with ``level_order()``: levels 1..n+1 first, then
    -1..-(n+1).
    """

    order_n: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        m = 2 * (self.order_n + 1)
        if len(self.bits) != m:
            raise ValueError(f"expected {m} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    def level_order(self) -> tuple[int, ...]:
        top = self.order_n + 1
        return tuple(range(1, top + 1)) + tuple(range(-1, -top - 1, -1))

    def value_for(self, level: int) -> int:
        top = self.order_n + 1
        if not 1 <= abs(level) <= top:
            raise ValueError(f"level {level} outside the domain +-1..+-{top}")
        return self.bits[level - 1] if level > 0 else self.bits[top - level - 1]

    def items(self):
        return zip(self.level_order(), self.bits)

    @property
    def bit_string(self) -> str:
        return "".join(str(b) for b in self.bits)


def assignment_from_mapping(n: int, mapping) -> BinaryAssignment:
    """Build an assignment from a {level: bit} mapping covering every level."""
    top = n + 1
    levels = tuple(range(1, top + 1)) + tuple(range(-1, -top - 1, -1))
    missing = [v for v in levels if v not in mapping]
    if missing:
        raise ValueError(f"mapping must cover every nonzero level; missing {missing}")
    return BinaryAssignment(n, tuple(int(mapping[v]) for v in levels))


def assignment_from_bits(n: int, bit_string: str) -> BinaryAssignment:
    if set(bit_string) - {"0", "1"}:
        raise ValueError(f"bit string must be binary, got {bit_string!r}")
    return BinaryAssignment(n, tuple(int(c) for c in bit_string))


def tournament_assignment(n: int) -> BinaryAssignment:
    """Positive levels to 1, negative levels to 0 (yields tournaments)."""
    top = n + 1
    return BinaryAssignment(n, (1,) * top + (0,) * top)


def variant_assignment(n: int) -> BinaryAssignment:
    """1, -1 and levels >= 3 to 1; 2, -2 and levels <= -3 to 0."""
    mapping = {}
    for v in range(1, n + 2):
        mapping[v] = 0 if v == 2 else 1
        mapping[-v] = 1 if v == 1 else 0
    return assignment_from_mapping(n, mapping)


def constant_assignment(n: int, bit: int) -> BinaryAssignment:
    return BinaryAssignment(n, (int(bit),) * (2 * (n + 1)))


@dataclass(frozen=True, eq=False)
class Digraph:
    """Immutable loop-free digraph on points 1..p, adjacency as 0/1 bytes."""

    order: int
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        a = self.adjacency
        if a.shape != (self.order, self.order) or a.dtype != np.uint8:
            raise ValueError("adjacency must be a uint8 array of shape (p, p)")
        if a.max(initial=0) > 1:
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diagonal(a) != 0):
            raise ValueError("loops are not allowed")
        a.setflags(write=False)

    def arc(self, i: int, j: int) -> bool:
        if not (1 <= i <= self.order and 1 <= j <= self.order):
            raise IndexError(f"points must lie in 1..{self.order}, got ({i}, {j})")
        return bool(self.adjacency[i - 1, j - 1])

    def arc_count(self) -> int:
        return int(self.adjacency.sum())

    def scores(self) -> "ScoreVector":
        return ScoreVector(tuple(int(s) for s in self.adjacency.sum(axis=1)))

    def is_tournament(self) -> bool:
        a = self.adjacency
        both = a + a.T
        off = ~np.eye(self.order, dtype=bool)
        return bool(np.all(both[off] == 1))

    def delete_point(self, k: int) -> "Digraph":
        """Point-deleted subgraph, remaining points relabeled order-preservingly."""
        if not 1 <= k <= self.order:
            raise IndexError(f"point must lie in 1..{self.order}, got {k}")
        trimmed = np.delete(np.delete(self.adjacency, k - 1, axis=0), k - 1, axis=1)
        return Digraph(self.order - 1, np.ascontiguousarray(trimmed))

    def relabel(self, perm) -> "Digraph":
        """Digraph whose arc (i, j) mirrors this one's arc (perm(i), perm(j))."""
        perm = np.asarray(perm, dtype=np.int64)
        sel = perm - 1
        return Digraph(self.order, np.ascontiguousarray(self.adjacency[np.ix_(sel, sel)]))

    @cached_property
    def bitrows(self) -> tuple[int, ...]:
        """Row bitmasks: bit (j-1) of entry (i-1) set when arc i -> j exists."""
        rows = []
        for row in self.adjacency:
            bits = 0
            for j in np.nonzero(row)[0]:
                bits |= 1 << int(j)
            rows.append(bits)
        return tuple(rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.order == other.order and np.array_equal(
            self.adjacency, other.adjacency
        )

    def __repr__(self) -> str:
        return f"Digraph(order={self.order}, arcs={self.arc_count()})"

    def to_csv(self) -> str:
        return "".join(",".join(str(int(v)) for v in row) + "\n" for row in self.adjacency)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {i};" for i in range(1, self.order + 1)]
        rows, cols = np.nonzero(self.adjacency)
        lines += [f"  {i + 1} -> {j + 1};" for i, j in zip(rows, cols)]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_digraph6(self) -> str:
        bits = self.adjacency.reshape(-1)
        pad = (-bits.size) % 6
        if pad:
            bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
        groups = bits.reshape(-1, 6) @ (1 << np.arange(5, -1, -1, dtype=np.int32))
        body = "".join(chr(int(g) + 63) for g in groups)
        return "&" + _encode_count(self.order) + body

    @classmethod
    def from_digraph6(cls, text: str) -> "Digraph":
        text = text.strip()
        if not text.startswith("&"):
            raise ValueError("digraph6 data must start with '&'")
        n, pos = _decode_count(text, 1)
        need = (n * n + 5) // 6
        body = text[pos:]
        if len(body) != need:
            raise ValueError(f"expected {need} payload characters, got {len(body)}")
        codes = np.frombuffer(body.encode("ascii"), dtype=np.uint8).astype(np.int32) - 63
        if codes.size and (codes.min() < 0 or codes.max() > 63):
            raise ValueError("payload characters out of range")
        bits = (codes[:, None] >> np.arange(5, -1, -1)) & 1
        adj = bits.reshape(-1)[: n * n].reshape(n, n).astype(np.uint8)
        return cls(n, adj)


def _encode_count(n: int) -> str:
    if n < 0 or n > 68719476735:
        raise ValueError(f"count out of encodable range: {n}")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        shifts = (12, 6, 0)
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in shifts)
    shifts = (30, 24, 18, 12, 6, 0)
    return chr(126) * 2 + "".join(chr(((n >> s) & 63) + 63) for s in shifts)


def _decode_count(text: str, pos: int) -> tuple[int, int]:
    first = ord(text[pos]) - 63
    if first != 63:
        return first, pos + 1
    if ord(text[pos + 1]) - 63 != 63:
        chunk = [ord(c) - 63 for c in text[pos + 1 : pos + 4]]
        return (chunk[0] << 12) | (chunk[1] << 6) | chunk[2], pos + 4
    chunk = [ord(c) - 63 for c in text[pos + 2 : pos + 8]]
    value = 0
    for c in chunk:
        value = (value << 6) | c
    return value, pos + 8


@dataclass(frozen=True)
class ScoreVector:
    """Outdegrees in point order."""

    scores: tuple[int, ...]

    @property
    def arc_count(self) -> int:
        return sum(self.scores)


def scores(g: Digraph) -> ScoreVector:
    """Row sums of the adjacency matrix."""
    return g.scores()


def threshold_scores(p: int, variant: MatrixVariant) -> np.ndarray:
    """Scores of the canonical tournament at order p without materializing it.

    Counts positive entries per row through the constant-time entry
    oracle, in chunks, so arbitrarily large orders stay cheap.
    """
    order_exponent(p)
    out = np.empty(p, dtype=np.int64)
    idx = np.arange(1, p + 1, dtype=np.int32)
    step = max(1, (1 << 22) // p)
    for s in range(0, p, step):
        rows = idx[s : s + step]
        grid = entry_values(p, variant, rows[:, None], idx[None, :])
        out[s : s + step] = (grid > 0).sum(axis=1)
    return out


def apply_assignment(m: WeightedMatrix, a: BinaryAssignment) -> Digraph:
    """Replace each off-diagonal entry by its assigned bit; no loops."""
    n = m.exponent
    if a.order_n != n:
        raise ValueError(
            f"assignment covers levels up to {a.order_n + 1}, matrix needs {n + 1}"
        )
    lut = np.zeros(2 * (n + 1) + 1, dtype=np.uint8)
    for level, bit in a.items():
        lut[level + n + 1] = bit
    adj = lut[m.entries.astype(np.int16) + (n + 1)]
    np.fill_diagonal(adj, 0)
    return Digraph(m.order, adj)


def standard_pair(p: int) -> tuple[Digraph, Digraph]:
    """The canonical tournament pair at order p (positive entries become arcs)."""
    n = order_exponent(p)
    a = tournament_assignment(n)
    g = apply_assignment(build_dense(p, MatrixVariant.PLAIN), a)
    h = apply_assignment(build_dense(p, MatrixVariant.STAR), a)
    if not (g.is_tournament() and h.is_tournament()):
        raise ContradictionError("canonical pair failed the tournament check")
    return g, h


def variant_pair(p: int) -> tuple[Digraph, Digraph]:
    """The second digraph pair at order p >= 8 (not tournaments)."""
    n = order_exponent(p)
    if p < 8:
        raise ValueError(f"variant_pair requires p >= 8, got {p}")
    a = variant_assignment(n)
    g = apply_assignment(build_dense(p, MatrixVariant.PLAIN), a)
    h = apply_assignment(build_dense(p, MatrixVariant.STAR), a)
    return g, h


def _is_arc_preserving(g: Digraph, h: Digraph, perm: np.ndarray) -> bool:
    sel = np.asarray(perm, dtype=np.int64) - 1
    return np.array_equal(g.adjacency, h.adjacency[np.ix_(sel, sel)])


def forced_isomorphism(p: int, a: BinaryAssignment) -> Optional[ExtendedMap]:
    """Witness map when both extreme levels get the same bit, else None.

    When the assignment gives +-(n+1) equal bits, the extended point-1
    mapping must carry the assigned plain digraph onto the assigned
    starred digraph; the witness is verified arc by arc before being
    returned, and a verification failure is a fatal internal error.
    """
    n = order_exponent(p)
    if p < 8:
        raise ValueError(f"forced_isomorphism requires p >= 8, got {p}")
    if a.order_n != n:
        raise ValueError("assignment exponent does not match the order")
    if a.value_for(n + 1) != a.value_for(-(n + 1)):
        return None
    ext = extend_sigma_p1(p)
    g = apply_assignment(build_dense(p, MatrixVariant.PLAIN), a)
    h = apply_assignment(build_dense(p, MatrixVariant.STAR), a)
    if not _is_arc_preserving(g, h, ext.as_array()):
        raise ContradictionError(
            f"extended point-1 mapping is not an isomorphism at p={p} "
            f"for assignment {a.bit_string}"
        )
    return ext


def swap_involution(p: int) -> np.ndarray:
    """The half-swap permutation, verified to exchange only the extreme levels.

    Returns tau with tau(i) = i + p/2 for i <= p/2 and i - p/2 above.
    Conjugating either matrix by tau must swap the levels n+1 and -(n+1)
    and fix every other level; failure is a fatal internal error.
    """
    n = order_exponent(p)
    if p < 8:
        raise ValueError(f"swap_involution requires p >= 8, got {p}")
    h = p // 2
    tau = np.concatenate(
        [np.arange(h + 1, p + 1, dtype=np.int32), np.arange(1, h + 1, dtype=np.int32)]
    )
    top = n + 1
    for variant in (MatrixVariant.PLAIN, MatrixVariant.STAR):
        grid = entry_grid(p, variant).astype(np.int16)
        conjugated = grid[np.ix_(tau - 1, tau - 1)]
        swapped = np.where(grid == top, -top, np.where(grid == -top, top, grid))
        if not np.array_equal(conjugated, swapped):
            raise ContradictionError(
                f"half-swap failed the level-swap identity at p={p} ({variant.value})"
            )
    tau.setflags(write=False)
    return tau


@dataclass(frozen=True)
class CensusRow:
    assignment_bits: str
    is_tournament: bool
    isomorphic: Optional[bool]
    orbit_id: int


@dataclass(frozen=True)
class CensusTable:
    """One row per proper assignment, in ascending bit-string order."""

    order: int
    rows: tuple[CensusRow, ...]

    @cached_property
    def _by_bits(self) -> dict[str, CensusRow]:
        return {row.assignment_bits: row for row in self.rows}

    def row_for(self, a) -> CensusRow:
        bits = a.bit_string if isinstance(a, BinaryAssignment) else str(a)
        return self._by_bits[bits]

    def to_csv(self) -> str:
        def word(value: Optional[bool]) -> str:
            if value is None:
                return "undecided"
            return "yes" if value else "no"

        lines = ["assignment_bits,is_tournament,isomorphic,orbit_id"]
        for row in self.rows:
            lines.append(
                f"{row.assignment_bits},{word(row.is_tournament)},"
                f"{word(row.isomorphic)},{row.orbit_id}"
            )
        return "\n".join(lines) + "\n"


def _census_entry(args: tuple[int, str, int]):
    p, bits, budget = args
    # imported here to avoid a module cycle with the isomorphism engine
    from recon_census.iso_engine import IsoStatus, are_isomorphic

    n = order_exponent(p)
    a = assignment_from_bits(n, bits)
    g = apply_assignment(build_dense(p, MatrixVariant.PLAIN), a)
    h = apply_assignment(build_dense(p, MatrixVariant.STAR), a)
    verdict = are_isomorphic(g, h, budget=budget)
    iso = {
        IsoStatus.ISOMORPHIC: True,
        IsoStatus.NON_ISOMORPHIC: False,
        IsoStatus.UNDECIDED: None,
    }[verdict.status]
    return g.is_tournament() and h.is_tournament(), iso


def _swap_partner_bits(n: int, bits: str) -> str:
    """Bit string of the assignment with the two extreme levels' bits exchanged."""
    chars = list(bits)
    chars[n], chars[2 * n + 1] = chars[2 * n + 1], chars[n]
    return "".join(chars)


def assignment_census(
    p: int, iso_budget: int = DEFAULT_ISO_BUDGET, jobs: int = 1
) -> CensusTable:
    """Tabulate every proper assignment at order p in {8, 16}.

    Each row records whether the assigned pair are tournaments and
    whether they are isomorphic (None when the search exhausted
    ``iso_budget``).  ``orbit_id`` is the smaller bit-string value of the
    row and its extreme-level-swap partner, which yield the same digraph
    pair up to the half-swap relabeling.
    """
    if p not in (8, 16):
        raise ValueError(f"census is budget-bounded to orders 8 and 16, got {p}")
    n = order_exponent(p)
    m = 2 * (n + 1)
    all_bits = [format(x, f"0{m}b") for x in range(1 << m)]
    tasks = [(p, bits, iso_budget) for bits in all_bits]
    if jobs > 1:
        chunk = max(1, len(tasks) // (8 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_census_entry, tasks, chunksize=chunk))
    else:
        results = [_census_entry(t) for t in tasks]
    rows = []
    for bits, (tourn, iso) in zip(all_bits, results):
        orbit_id = min(int(bits, 2), int(_swap_partner_bits(n, bits), 2))
        rows.append(CensusRow(bits, tourn, iso, orbit_id))
    return CensusTable(p, tuple(rows))
