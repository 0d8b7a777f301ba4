"""Building blocks consumed by the constructions.

Small pair-balanced designs (a validated catalog), resolvable designs,
Hadamard matrices, orthogonal arrays, and a brute-force existence
oracle.  Every catalog design is validated computationally on first use
rather than trusted from any table.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Sequence

import numpy as np

from .errors import (
    UNKNOWN,
    InvalidInputError,
    NotConstructibleError,
    NotInCatalogError,
)
from .model import BlockDesign, BlockPartition, complement_design

# --------------------------------------------------------------------------
# balance checking


def check_t_design(design: BlockDesign, t: int) -> int | None:
    """The constant t-subset coverage count, or None if not balanced.

    Requires uniform block sizes; a design whose blocks vary in size is
    reported as unbalanced.  The count may legitimately be 0 when the
    blocks are smaller than t.
    """
    if t < 1:
        raise InvalidInputError(f"t must be >= 1, got {t}")
    sizes = {len(b) for b in design.blocks}
    if len(sizes) != 1:
        return None
    counts: Counter = Counter()
    for block in design.blocks:
        counts.update(combinations(block, t))
    values = {counts.get(c, 0) for c in combinations(range(design.v), t)}
    if len(values) != 1:
        return None
    return values.pop()


# --------------------------------------------------------------------------
# catalog designs


def pair_design(v: int) -> BlockDesign:
    """All pairs of a v-set: the unique 2-(v,2,1)."""
    if v < 3:
        raise InvalidInputError(f"pair design needs v >= 3, got {v}")
    return BlockDesign(v=v, blocks=tuple(combinations(range(v), 2)))


def near_complete_design(v: int) -> BlockDesign:
    """All (v-1)-subsets of a v-set: the symmetric 2-(v,v-1,v-2)."""
    if v < 3:
        raise InvalidInputError(f"near-complete design needs v >= 3, got {v}")
    pts = set(range(v))
    return BlockDesign(v=v, blocks=tuple(tuple(sorted(pts - {x})) for x in range(v)))


def cyclic_development(v: int, base_blocks: Sequence[Sequence[int]]) -> BlockDesign:
    """Develop base blocks under x -> x+1 (mod v), deduplicating short orbits."""
    seen = set()
    out = []
    for base in base_blocks:
        for s in range(v):
            block = tuple(sorted((x + s) % v for x in base))
            if block not in seen:
                seen.add(block)
                out.append(block)
    return BlockDesign(v=v, blocks=tuple(out))


def affine_plane(q: int) -> BlockDesign:
    """Lines of the affine plane over Z_q, q prime; resolvable 2-(q^2,q,1).

    Lines come out grouped by direction: q parallel classes of slope
    0..q-1 followed by the vertical class.
    """
    if q < 2 or any(q % d == 0 for d in range(2, q)):
        raise InvalidInputError(f"affine_plane needs a prime, got {q}")
    lines = []
    for s in range(q):
        for c in range(q):
            lines.append(tuple(sorted(q * x + (s * x + c) % q for x in range(q))))
    for c in range(q):
        lines.append(tuple(q * c + y for y in range(q)))
    return BlockDesign(v=q * q, blocks=tuple(lines))


# Kirkman triple system on 15 points: resolvable 2-(15,3,1) whose 35
# blocks are listed class-major (7 parallel classes of 5 triples).
_KIRKMAN_15 = (
    ((1, 2, 3), (4, 8, 12), (5, 10, 15), (6, 11, 13), (7, 9, 14)),
    ((1, 4, 5), (2, 8, 10), (3, 13, 14), (6, 9, 15), (7, 11, 12)),
    ((1, 6, 7), (2, 9, 11), (3, 12, 15), (4, 10, 14), (5, 8, 13)),
    ((1, 8, 9), (2, 12, 14), (3, 5, 6), (4, 11, 15), (7, 10, 13)),
    ((1, 10, 11), (2, 13, 15), (3, 4, 7), (5, 9, 12), (6, 8, 14)),
    ((1, 12, 13), (2, 4, 6), (3, 9, 10), (5, 11, 14), (7, 8, 15)),
    ((1, 14, 15), (2, 5, 7), (3, 8, 11), (4, 9, 13), (6, 10, 12)),
)


def kirkman_15() -> BlockDesign:
    """Resolvable 2-(15,3,1), blocks listed class-major."""
    blocks = tuple(tuple(x - 1 for x in tri) for day in _KIRKMAN_15 for tri in day)
    return BlockDesign(v=15, blocks=blocks)


# 2-(16,6,2): developed from the difference set {0,1,2,4,8,15} in the
# elementary abelian group of order 16 (XOR on 0..15); no difference set
# with these parameters exists in Z16.
_BLOCKS_16_6_2 = (
    (0, 1, 2, 4, 8, 15), (0, 1, 3, 5, 9, 14), (0, 2, 3, 6, 10, 13),
    (1, 2, 3, 7, 11, 12), (0, 4, 5, 6, 11, 12), (1, 4, 5, 7, 10, 13),
    (2, 4, 6, 7, 9, 14), (3, 5, 6, 7, 8, 15), (0, 7, 8, 9, 10, 12),
    (1, 6, 8, 9, 11, 13), (2, 5, 8, 10, 11, 14), (3, 4, 9, 10, 11, 15),
    (3, 4, 8, 12, 13, 14), (2, 5, 9, 12, 13, 15), (1, 6, 10, 12, 14, 15),
    (0, 7, 11, 13, 14, 15),
)

# 2-(25,9,3): no difference set with these parameters exists in either
# group of order 25, so the design cannot be developed; this one was
# found by backtracking constrained to pairwise block meets of 3.
_BLOCKS_25_9_3 = (
    (0, 1, 2, 3, 4, 5, 6, 7, 8), (0, 1, 2, 9, 10, 11, 12, 13, 14),
    (0, 1, 2, 15, 16, 17, 18, 19, 20), (0, 3, 4, 9, 10, 15, 16, 21, 22),
    (0, 3, 4, 11, 12, 17, 18, 23, 24), (0, 5, 6, 9, 10, 19, 20, 23, 24),
    (0, 5, 6, 13, 14, 17, 18, 21, 22), (0, 7, 8, 11, 12, 19, 20, 21, 22),
    (0, 7, 8, 13, 14, 15, 16, 23, 24), (1, 3, 5, 11, 13, 15, 19, 21, 23),
    (1, 3, 5, 12, 14, 16, 20, 22, 24), (1, 4, 7, 9, 13, 17, 19, 22, 24),
    (1, 4, 7, 10, 14, 18, 20, 21, 23), (1, 6, 8, 9, 11, 16, 18, 21, 24),
    (1, 6, 8, 10, 12, 15, 17, 22, 23), (2, 3, 8, 9, 13, 18, 20, 22, 23),
    (2, 3, 8, 10, 14, 17, 19, 21, 24), (2, 4, 6, 11, 14, 16, 19, 22, 23),
    (2, 4, 6, 12, 13, 15, 20, 21, 24), (2, 5, 7, 9, 12, 16, 17, 21, 23),
    (2, 5, 7, 10, 11, 15, 18, 22, 24), (3, 6, 7, 9, 11, 14, 15, 17, 20),
    (3, 6, 7, 10, 12, 13, 16, 18, 19), (4, 5, 8, 9, 12, 14, 15, 18, 19),
    (4, 5, 8, 10, 11, 13, 16, 17, 20),
)


def _quadratic_residues(p: int) -> tuple[int, ...]:
    return tuple(sorted({(i * i) % p for i in range(1, p)}))


_DIFFERENCE_FAMILIES: dict[tuple[int, int, int], tuple[tuple[int, ...], ...]] = {
    (7, 3, 1): ((0, 1, 3),),
    (11, 5, 2): (_quadratic_residues(11),),
    (13, 4, 1): ((0, 1, 3, 9),),
    (15, 7, 3): ((0, 1, 2, 4, 5, 8, 10),),
    (19, 9, 4): (_quadratic_residues(19),),
    (23, 11, 5): (_quadratic_residues(23),),
}


def hadamard_halves(order: int) -> BlockDesign:
    """Resolvable 2-(n, n/2, n/2-1) from a Hadamard matrix of order n.

    Each row after the first of the normalized matrix splits the columns
    into its +1 set and its -1 set; the 2(n-1) blocks come out in
    complementary pairs, so the parallel classes are consecutive pairs.
    """
    H = hadamard_matrix(order).as_array()
    H = _normalize_pm_matrix(H)
    blocks = []
    for i in range(1, order):
        row = H[i]
        blocks.append(tuple(int(j) for j in range(order) if row[j] == 1))
        blocks.append(tuple(int(j) for j in range(order) if row[j] == -1))
    return BlockDesign(v=order, blocks=tuple(blocks))


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog design: its parameters and a builder."""

    v: int
    k: int
    lam: int
    b: int
    name: str
    build: Callable[[], BlockDesign]
    symmetric: bool = False


def _fixed_entries() -> tuple[CatalogEntry, ...]:
    entries = []
    for (v, k, lam), bases in _DIFFERENCE_FAMILIES.items():
        b = lam * v * (v - 1) // (k * (k - 1))
        entries.append(CatalogEntry(v, k, lam, b, f"cyclic 2-({v},{k},{lam})",
                                    lambda v=v, bases=bases: cyclic_development(v, bases),
                                    symmetric=(b == v)))
    entries.append(CatalogEntry(16, 6, 2, 16, "2-(16,6,2) from a difference set in (Z2)^4",
                                lambda: BlockDesign(16, _BLOCKS_16_6_2), symmetric=True))
    entries.append(CatalogEntry(25, 9, 3, 25, "2-(25,9,3) by backtracking",
                                lambda: BlockDesign(25, _BLOCKS_25_9_3), symmetric=True))
    entries.append(CatalogEntry(6, 3, 2, 10, "2-(6,3,2) by brute force",
                                lambda: _brute_662()))
    entries.append(CatalogEntry(9, 3, 1, 12, "affine plane of order 3",
                                lambda: affine_plane(3)))
    entries.append(CatalogEntry(15, 3, 1, 35, "Kirkman triple system",
                                kirkman_15))
    for order in (8, 12, 16):
        entries.append(CatalogEntry(order, order // 2, order // 2 - 1, 2 * (order - 1),
                                    f"halves of a Hadamard matrix of order {order}",
                                    lambda order=order: hadamard_halves(order)))
    return tuple(entries)


def _brute_662() -> BlockDesign:
    design = brute_force_bibd(6, 3, 2, 10)
    assert isinstance(design, BlockDesign)
    return design


def catalog_entries(max_blocks: int = 64,
                    include_complements: bool = True) -> tuple[CatalogEntry, ...]:
    """Every catalog design with at most ``max_blocks`` blocks.

    Parametric families (all pairs, all (v-1)-subsets) are expanded up
    to the block bound; complements are included unless they collide
    with an existing parameter triple.
    """
    entries = list(_fixed_entries())
    v = 3
    while v * (v - 1) // 2 <= max_blocks:
        entries.append(CatalogEntry(v, 2, 1, v * (v - 1) // 2, f"all pairs of {v}",
                                    lambda v=v: pair_design(v), symmetric=(v == 3)))
        v += 1
    for v in range(4, max_blocks + 1):
        entries.append(CatalogEntry(v, v - 1, v - 2, v, f"all {v - 1}-subsets of {v}",
                                    lambda v=v: near_complete_design(v), symmetric=True))
    entries = [e for e in entries if e.b <= max_blocks]
    if include_complements:
        known = {(e.v, e.k, e.lam) for e in entries}
        for e in list(entries):
            kc = e.v - e.k
            if kc < 2:
                continue
            r = e.b * e.k // e.v
            lamc = e.lam + e.b - 2 * r
            if lamc < 1 or (e.v, kc, lamc) in known:
                continue
            known.add((e.v, kc, lamc))
            entries.append(CatalogEntry(e.v, kc, lamc, e.b, f"complement of {e.name}",
                                        lambda e=e: complement_design(e.build()),
                                        symmetric=e.symmetric))
    return tuple(sorted(entries, key=lambda e: (e.b, e.v, e.k, e.lam)))


@lru_cache(maxsize=None)
def _validated(key: tuple[int, int, int]) -> BlockDesign:
    v, k, lam = key
    entry = None
    if k == 2 and lam == 1:
        entry = CatalogEntry(v, 2, 1, v * (v - 1) // 2, f"all pairs of {v}",
                             lambda: pair_design(v))
    elif k == v - 1 and lam == v - 2:
        entry = CatalogEntry(v, k, lam, v, f"all {k}-subsets of {v}",
                             lambda: near_complete_design(v))
    else:
        for candidate in catalog_entries(max_blocks=256):
            if (candidate.v, candidate.k, candidate.lam) == key:
                entry = candidate
                break
    if entry is None:
        raise NotInCatalogError(f"no 2-({v},{k},{lam}) in the built-in catalog")
    design = entry.build()
    got = check_t_design(design, 2)
    if got != lam or {len(b) for b in design.blocks} != {k}:
        raise AssertionError(
            f"catalog entry {entry.name} failed validation: lambda={got}")
    return design


def get_bibd(v: int, k: int, lam: int) -> BlockDesign:
    """A catalog 2-(v,k,lam), validated by :func:`check_t_design`.

    Raises NotInCatalogError when the parameters are admissible but not
    covered (which is weaker than nonexistence), InvalidInputError when
    they are inadmissible.
    """
    if v < 2 or not 2 <= k < v or lam < 1:
        raise InvalidInputError(f"inadmissible parameters ({v},{k},{lam})")
    if (lam * (v - 1)) % (k - 1) or (lam * v * (v - 1)) % (k * (k - 1)):
        raise InvalidInputError(f"divisibility fails for ({v},{k},{lam})")
    return _validated((v, k, lam))


# --------------------------------------------------------------------------
# resolvability


def resolvable_classes(design: BlockDesign) -> BlockPartition | None:
    """Partition the blocks into parallel classes, or None.

    Each class covers every point exactly once.  Exact backtracking,
    returning the lexicographically least resolution; None means no
    resolution exists (or the sizes make one impossible).
    """
    sizes = {len(b) for b in design.blocks}
    if len(sizes) != 1:
        return None
    k = sizes.pop()
    v = design.v
    if v % k or (design.b * k) % v:
        return None
    per_class = v // k
    n_classes = design.b * k // v

    by_point: list[list[int]] = [[] for _ in range(v)]
    for t, block in enumerate(design.blocks):
        for x in block:
            by_point[x].append(t)

    used = [False] * design.b
    classes: list[tuple[int, ...]] = []

    def build(current: list[int], covered: set[int]) -> bool:
        if len(current) == per_class:
            classes.append(tuple(current))
            if len(classes) == n_classes:
                return True
            if build([], set()):
                return True
            classes.pop()
            return False
        pivot = min(set(range(v)) - covered)
        for t in by_point[pivot]:
            if used[t] or not covered.isdisjoint(design.blocks[t]):
                continue
            if current and t < current[-1]:
                continue
            used[t] = True
            current.append(t)
            if build(current, covered | set(design.blocks[t])):
                return True
            current.pop()
            used[t] = False
        return False

    if build([], set()):
        return BlockPartition(tuple(classes))
    return None


# --------------------------------------------------------------------------
# Hadamard matrices


@dataclass(frozen=True)
class HadamardMatrix:
    """A +-1 matrix with pairwise orthogonal rows."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        H = np.asarray(self.entries, dtype=np.int64)
        n = H.shape[0] if H.ndim == 2 else 0
        if H.ndim != 2 or H.shape != (n, n) or not np.isin(H, (-1, 1)).all():
            raise InvalidInputError("entries must form a square +-1 matrix")
        if not np.array_equal(H @ H.T, n * np.eye(n, dtype=np.int64)):
            raise InvalidInputError("rows are not pairwise orthogonal")
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in row) for row in H))

    @property
    def order(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64)


def _normalize_pm_matrix(H: np.ndarray) -> np.ndarray:
    """Negate columns then rows so the first row and column are all +1."""
    H = H.copy()
    H[:, H[0] == -1] *= -1
    H[H[:, 0] == -1] *= -1
    return H


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _sylvester(order: int) -> np.ndarray:
    H = np.array([[1]], dtype=np.int64)
    while H.shape[0] < order:
        H = np.block([[H, H], [H, -H]])
    return H


def _paley_type_1(q: int) -> np.ndarray:
    """Order q+1 from the quadratic character of Z_q, q prime, q = 3 mod 4."""
    squares = {(i * i) % q for i in range(1, q)}
    chi = [0] + [1 if x in squares else -1 for x in range(1, q)]
    n = q + 1
    H = np.ones((n, n), dtype=np.int64)
    for i in range(1, n):
        H[i, 0] = -1
        for j in range(1, n):
            H[i, j] = 1 if i == j else chi[(j - i) % q]
    return H


_BUILTIN_H12 = (
    (+1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1),
    (+1, +1, +1, +1, +1, +1, -1, -1, -1, -1, -1, -1),
    (+1, -1, +1, -1, +1, -1, +1, -1, -1, +1, +1, -1),
    (+1, -1, -1, -1, +1, +1, -1, -1, +1, -1, +1, +1),
    (+1, +1, +1, -1, -1, -1, -1, +1, +1, -1, +1, -1),
    (+1, -1, -1, +1, +1, -1, +1, +1, +1, -1, -1, -1),
    (+1, -1, -1, +1, -1, +1, -1, +1, -1, +1, +1, -1),
    (+1, -1, +1, +1, -1, -1, -1, -1, +1, +1, -1, +1),
    (+1, +1, -1, -1, +1, -1, -1, +1, -1, +1, -1, +1),
    (+1, +1, -1, +1, -1, -1, +1, -1, -1, -1, +1, +1),
    (+1, +1, -1, -1, -1, +1, +1, -1, +1, +1, -1, -1),
    (+1, -1, +1, -1, -1, +1, +1, +1, -1, -1, -1, +1),
)


@lru_cache(maxsize=None)
def hadamard_matrix(order: int) -> HadamardMatrix:
    """A verified Hadamard matrix of the given order.

    Construction preference: Sylvester doubling for powers of two, the
    built-in order-12 matrix, Paley type I when order-1 is a prime
    congruent to 3 mod 4, then doubling of a constructible half-order.
    """
    if order < 1 or (order > 2 and order % 4):
        raise InvalidInputError(f"no Hadamard matrix of order {order} exists")
    if order & (order - 1) == 0:
        return HadamardMatrix(tuple(map(tuple, _sylvester(order))))
    if order == 12:
        return HadamardMatrix(_BUILTIN_H12)
    q = order - 1
    if _is_prime(q) and q % 4 == 3:
        return HadamardMatrix(tuple(map(tuple, _paley_type_1(q))))
    if order % 2 == 0:
        try:
            half = hadamard_matrix(order // 2).as_array()
        except (NotConstructibleError, InvalidInputError):
            pass
        else:
            return HadamardMatrix(tuple(map(tuple, np.block([[half, half], [half, -half]]))))
    raise NotConstructibleError(f"order {order} is outside the built-in constructions")


# --------------------------------------------------------------------------
# orthogonal arrays


@dataclass(frozen=True)
class OrthogonalArray:
    """Rows over per-column alphabets, balanced on every t-subset of columns."""

    rows: tuple[tuple[int, ...], ...]
    symbols: tuple[int, ...]
    strength: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        symbols = tuple(int(s) for s in self.symbols)
        m = len(symbols)
        if not rows or any(len(row) != m for row in rows):
            raise InvalidInputError("rows must all have one entry per column")
        for row in rows:
            for x, s in zip(row, symbols):
                if not 0 <= x < s:
                    raise InvalidInputError(f"symbol {x} out of range for alphabet {s}")
        t = self.strength
        if not 1 <= t <= m:
            raise InvalidInputError(f"strength must be in 1..{m}, got {t}")
        for cols in combinations(range(m), t):
            counts = Counter(tuple(row[c] for c in cols) for row in rows)
            expected, rem = divmod(len(rows), int(np.prod([symbols[c] for c in cols])))
            if rem or set(counts.values()) != {expected} or len(counts) * expected != len(rows):
                raise InvalidInputError(f"columns {cols} are not balanced")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "symbols", symbols)

    @property
    def s(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> int:
        return len(self.symbols)


def full_factorial_oa(symbols: Sequence[int]) -> OrthogonalArray:
    """All symbol combinations in lexicographic row order; strength = m."""
    symbols = tuple(int(s) for s in symbols)
    rows = tuple(product(*(range(s) for s in symbols)))
    return OrthogonalArray(rows=rows, symbols=symbols, strength=len(symbols))


def orthogonal_array(symbols: Sequence[int], strength: int) -> OrthogonalArray:
    """A verified orthogonal array from the built-in families.

    Families: full factorial (strength = column count); strength-2
    linear arrays with q^2 rows over a prime alphabet q on up to q+1
    columns; strength-2 two-symbol arrays read off a normalized Hadamard
    matrix.
    """
    symbols = tuple(int(s) for s in symbols)
    m = len(symbols)
    if m < 1 or any(s < 2 for s in symbols):
        raise InvalidInputError(f"need at least one column of >= 2 symbols, got {symbols}")
    if not 1 <= strength <= m:
        raise InvalidInputError(f"strength must be in 1..{m}, got {strength}")
    if strength == m:
        return full_factorial_oa(symbols)
    if strength == 2:
        q = symbols[0]
        if all(s == q for s in symbols) and _is_prime(q) and m <= q + 1:
            rows = []
            for a, bsym in product(range(q), repeat=2):
                row = [a, bsym] + [(a + i * bsym) % q for i in range(1, m - 1)]
                rows.append(tuple(row[:m]))
            return OrthogonalArray(rows=tuple(rows), symbols=symbols, strength=2)
        if all(s == 2 for s in symbols):
            order = 4
            while order - 1 < m:
                order += 4
            H = _normalize_pm_matrix(hadamard_matrix(order).as_array())
            rows = tuple(tuple(0 if H[i, j] == 1 else 1 for j in range(1, m + 1))
                         for i in range(order))
            return OrthogonalArray(rows=rows, symbols=symbols, strength=2)
    raise NotConstructibleError(
        f"no built-in orthogonal array for symbols {symbols} at strength {strength}")


# --------------------------------------------------------------------------
# brute-force existence oracle


def brute_force_bibd(v: int, k: int, lam: int, b: int,
                     budget: int = 10_000_000):
    """First 2-(v,k,lam) in b blocks in lex order, None, or UNKNOWN.

    Backtracking over non-decreasing block sequences (repeats allowed)
    with pair-count and replication pruning.  UNKNOWN means the node
    budget ran out before the search was decided.
    """
    if v < 2 or not 2 <= k < v or lam < 1 or b < 1:
        raise InvalidInputError(f"inadmissible parameters ({v},{k},{lam};{b})")
    if (b * k) % v or b * k * (k - 1) != lam * v * (v - 1):
        raise InvalidInputError(f"counting relations fail for ({v},{k},{lam};{b})")
    r = b * k // v

    candidates = list(combinations(range(v), k))
    pair = Counter()
    rep = [0] * v
    chosen: list[tuple[int, ...]] = []
    nodes = 0

    def fits(block) -> bool:
        if any(rep[x] >= r for x in block):
            return False
        return all(pair[p] < lam for p in combinations(block, 2))

    def place(block, sign):
        for p in combinations(block, 2):
            pair[p] += sign
        for x in block:
            rep[x] += sign

    def extend(start: int):
        nonlocal nodes
        if len(chosen) == b:
            return list(chosen)
        for i in range(start, len(candidates)):
            nodes += 1
            if nodes > budget:
                return UNKNOWN
            block = candidates[i]
            if not fits(block):
                continue
            place(block, +1)
            chosen.append(block)
            got = extend(i)
            if got is UNKNOWN or got is not None:
                return got
            chosen.pop()
            place(block, -1)
        return None

    result = extend(0)
    if result is UNKNOWN:
        return UNKNOWN
    if result is None:
        return None
    return BlockDesign(v=v, blocks=tuple(result))
