"""Constructions that produce multi-part designs.

Every function returns a :class:`MultipartDesign` with a fixed,
reproducible block order: lexicographic by (class, array row) for the
orthogonal-array composition, by (first ingredient block, second
ingredient block) for products, and by host-block order for the
filtering construction.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import (
    ClassCountMismatchError,
    ClassNotUniformError,
    ComplementTooSmallError,
    FactorNotPreservedError,
    IngredientNotBalancedError,
    InvalidInputError,
    LambdaTooSmallError,
    NoBlocksSelectedError,
    NotHadamardError,
    NotNormalizableError,
    NotSymmetricDesignError,
    SizeMismatchError,
    SymbolCountMismatchError,
)
from .ingredients import OrthogonalArray, _normalize_pm_matrix, check_t_design
from .model import (
    BlockDesign,
    BlockPartition,
    MultipartDesign,
    default_factor_names,
)


@dataclass(frozen=True)
class ClassMatching:
    """A bijection j -> perm[j] matching class indices of two groupings."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise InvalidInputError(f"not a permutation: {perm}")
        object.__setattr__(self, "perm", perm)

    @property
    def c(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, c: int) -> "ClassMatching":
        return cls(tuple(range(c)))

    def __getitem__(self, j: int) -> int:
        return self.perm[j]


def _require_2_design(bd: BlockDesign, role: str) -> int:
    lam = check_t_design(bd, 2)
    sizes = {len(b) for b in bd.blocks}
    k = sizes.pop() if len(sizes) == 1 else None
    if lam is None or lam < 1 or k is None or k >= bd.v:
        raise IngredientNotBalancedError(
            f"{role} must be a pair-balanced design with k < v "
            f"(got lambda={lam}, k={k}, v={bd.v})")
    return lam


def _class_replications(bd: BlockDesign, cls: Sequence[int]) -> tuple[int, ...]:
    counts: Counter = Counter()
    for t in cls:
        counts.update(bd.blocks[t])
    return tuple(counts.get(x, 0) for x in range(bd.v))


def _require_uniform_classes(bd: BlockDesign, partition: BlockPartition, role: str):
    if partition.b != bd.b:
        raise ClassCountMismatchError(
            f"{role}: partition covers {partition.b} blocks, design has {bd.b}")
    reps = {_class_replications(bd, cls) for cls in partition.classes}
    if len(reps) != 1:
        raise ClassNotUniformError(
            f"{role}: classes do not replicate every point equally")


def arrange_by_classes(bd: BlockDesign, partition: BlockPartition) -> BlockDesign:
    """Reorder blocks class-major so each class is a contiguous index run."""
    if partition.b != bd.b:
        raise ClassCountMismatchError(
            f"partition covers {partition.b} blocks, design has {bd.b}")
    order = [t for cls in partition.classes for t in cls]
    return BlockDesign(v=bd.v, blocks=tuple(bd.blocks[t] for t in order))


# --------------------------------------------------------------------------
# products


def cartesian_product(parts: Sequence[BlockDesign]) -> MultipartDesign:
    """All combinations of one block from each ingredient.

    b is the product of the ingredient block counts and the result has
    strength equal to the number of ingredients.
    """
    parts = tuple(parts)
    if not parts:
        raise InvalidInputError("need at least one ingredient design")
    for i, bd in enumerate(parts):
        _require_2_design(bd, f"ingredient {i}")
    blocks = tuple(combo for combo in product(*(bd.blocks for bd in parts)))
    return MultipartDesign(v=tuple(bd.v for bd in parts), blocks=blocks)


def subcartesian_product(d1: BlockDesign, d2: BlockDesign,
                         p2: BlockPartition,
                         matching: ClassMatching | None = None) -> MultipartDesign:
    """Product taken class-by-class instead of in full.

    The blocks of ``d1`` are cut into c groups of b1/c in index order;
    group g is crossed with class ``matching[g]`` of ``d2`` only, giving
    b1*b2/c blocks.  Classes of ``p2`` must replicate every point of
    ``d2`` equally.
    """
    _require_2_design(d1, "first ingredient")
    _require_2_design(d2, "second ingredient")
    _require_uniform_classes(d2, p2, "second ingredient")
    c = p2.c
    if matching is None:
        matching = ClassMatching.identity(c)
    if matching.c != c:
        raise ClassCountMismatchError(
            f"matching has {matching.c} classes, partition has {c}")
    if d1.b % c:
        raise ClassCountMismatchError(
            f"class count {c} does not divide the {d1.b} blocks of the first ingredient")
    group = d1.b // c
    blocks = []
    for t1, block1 in enumerate(d1.blocks):
        cls = p2.classes[matching[t1 // group]]
        for t2 in cls:
            blocks.append((block1, d2.blocks[t2]))
    return MultipartDesign(v=(d1.v, d2.v), blocks=tuple(blocks))


# --------------------------------------------------------------------------
# Hadamard matrices


def hadamard_2part(H, second_row: int = 1) -> MultipartDesign:
    """Two-factor design from a Hadamard matrix of order 4n, n >= 2.

    After normalization the chosen row splits the columns into 2n
    C-columns (+1) and 2n D-columns (-1); every remaining row yields two
    blocks, its +1 columns and its -1 columns, listed in that order so
    consecutive block pairs form the (4n-2) partition classes.
    """
    arr = H.as_array() if hasattr(H, "as_array") else np.asarray(H, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or not np.isin(arr, (-1, 1)).all():
        raise NotHadamardError("input is not a square +-1 matrix")
    order = arr.shape[0]
    if order % 4 or order < 8:
        raise NotHadamardError(f"need order 4n with n >= 2, got {order}")
    if not np.array_equal(arr @ arr.T, order * np.eye(order, dtype=np.int64)):
        raise NotHadamardError("rows are not pairwise orthogonal")
    arr = _normalize_pm_matrix(arr)
    if not 0 <= second_row < order or second_row == 0:
        raise NotNormalizableError(
            f"splitting row must differ from the all-ones row 0, got {second_row}")

    split = arr[second_row]
    c_cols = [j for j in range(order) if split[j] == 1]
    d_cols = [j for j in range(order) if split[j] == -1]
    c_index = {j: x for x, j in enumerate(c_cols)}
    d_index = {j: x for x, j in enumerate(d_cols)}

    blocks = []
    for i in range(order):
        if i == 0 or i == second_row:
            continue
        row = arr[i]
        for sign in (1, -1):
            cols = [j for j in range(order) if row[j] == sign]
            blocks.append((
                tuple(sorted(c_index[j] for j in cols if j in c_index)),
                tuple(sorted(d_index[j] for j in cols if j in d_index)),
            ))
    half = order // 2
    return MultipartDesign(v=(half, half), blocks=tuple(blocks))


def row_pair_partition(design: MultipartDesign) -> BlockPartition:
    """The consecutive-pair classes {2t, 2t+1} of a Hadamard-built design."""
    if design.b % 2:
        raise InvalidInputError("needs an even number of blocks")
    return BlockPartition(tuple((2 * t, 2 * t + 1) for t in range(design.b // 2)))


# --------------------------------------------------------------------------
# symmetric designs


def symmetric_block_split(bd: BlockDesign, gamma: int) -> MultipartDesign:
    """Split a symmetric design around one of its blocks.

    The points of block ``gamma`` become the second factor, the rest the
    first; every other block splits into its part outside gamma and its
    meet with gamma.  Yields b = v - 1 blocks with k = (k - lam, lam).
    """
    lam = check_t_design(bd, 2)
    sizes = {len(b) for b in bd.blocks}
    if lam is None or len(sizes) != 1 or bd.b != bd.v:
        raise NotSymmetricDesignError(
            f"need a symmetric pair-balanced design (b={bd.b}, v={bd.v})")
    k = sizes.pop()
    if not 0 <= gamma < bd.b:
        raise InvalidInputError(f"block index {gamma} out of range")
    special = set(bd.blocks[gamma])
    meets = {len(special & set(block)) for t, block in enumerate(bd.blocks) if t != gamma}
    if meets != {lam}:
        raise NotSymmetricDesignError(
            f"blocks meet the chosen block in {sorted(meets)}, expected {{{lam}}}")
    if lam < 2:
        raise LambdaTooSmallError(
            f"pairwise balance {lam} < 2 leaves the second factor unbalanced")

    others = sorted(set(range(bd.v)) - special)
    c_index = {p: x for x, p in enumerate(others)}
    d_index = {p: x for x, p in enumerate(sorted(special))}
    blocks = []
    for t, block in enumerate(bd.blocks):
        if t == gamma:
            continue
        blocks.append((
            tuple(sorted(c_index[p] for p in block if p not in special)),
            tuple(sorted(d_index[p] for p in block if p in special)),
        ))
    return MultipartDesign(v=(bd.v - k, k), blocks=tuple(blocks))


# --------------------------------------------------------------------------
# augmentation and swaps


def augment(design: MultipartDesign, factor: int) -> MultipartDesign:
    """Add one level to a factor with v = 2k + 1, doubling the blocks.

    Each block is replaced by two: one keeps its part plus the new
    level, the other takes the complement of the original part within
    the enlarged level set.
    """
    if not 0 <= factor < design.m:
        raise InvalidInputError(f"factor {factor} out of range")
    sizes = {len(block[factor]) for block in design.blocks}
    if len(sizes) != 1:
        raise SizeMismatchError("augment needs a uniform part size on the factor")
    k = sizes.pop()
    v = design.v[factor]
    if v != 2 * k + 1:
        raise SizeMismatchError(f"augment needs v = 2k + 1, got v={v}, k={k}")

    new_v = tuple(x + 1 if i == factor else x for i, x in enumerate(design.v))
    enlarged = set(range(v + 1))
    blocks = []
    for block in design.blocks:
        part = set(block[factor])
        keep = tuple(sorted(part | {v}))
        swap = tuple(sorted(enlarged - part - {v}))
        for new_part in (keep, swap):
            blocks.append(tuple(new_part if i == factor else p
                                for i, p in enumerate(block)))
    return MultipartDesign(v=new_v, blocks=tuple(blocks),
                           factor_names=design.factor_names)


def part_swap(design: MultipartDesign, factor: int) -> MultipartDesign:
    """Replace the chosen factor's part of every block by its complement.

    Needs at least two levels outside every part; on a uniform design
    the parameters transform as k -> v - k, within-concurrence ->
    b - 2r + lambda, and cross counts -> r_other - lambda.
    """
    if not 0 <= factor < design.m:
        raise InvalidInputError(f"factor {factor} out of range")
    v = design.v[factor]
    full = set(range(v))
    blocks = []
    for t, block in enumerate(design.blocks):
        comp = tuple(sorted(full - set(block[factor])))
        if len(comp) < 2:
            raise ComplementTooSmallError(
                f"block {t} leaves only {len(comp)} levels after complementing")
        blocks.append(tuple(comp if i == factor else p for i, p in enumerate(block)))
    return MultipartDesign(v=design.v, blocks=tuple(blocks),
                           factor_names=design.factor_names)


# --------------------------------------------------------------------------
# group actions and block filters


def orbit_design(v: Sequence[int], generators: Sequence[Sequence[int]],
                 seed: Sequence[Sequence[int]]) -> MultipartDesign:
    """Orbit of a seed block under permutations of the zipped point set.

    Every generator must preserve each factor's level range setwise.
    The orbit is deduplicated and sorted; validity is not guaranteed and
    is the verifier's job.
    """
    sizes = tuple(int(x) for x in v)
    total = sum(sizes)
    offsets = []
    acc = 0
    for s in sizes:
        offsets.append(acc)
        acc += s
    ranges = [set(range(off, off + s)) for off, s in zip(offsets, sizes)]

    perms = []
    for g, perm in enumerate(generators):
        perm = tuple(int(x) for x in perm)
        if sorted(perm) != list(range(total)):
            raise InvalidInputError(f"generator {g} is not a permutation of {total} points")
        for i, rng in enumerate(ranges):
            if {perm[p] for p in rng} != rng:
                raise FactorNotPreservedError(
                    f"generator {g} does not preserve factor {i}")
        perms.append(perm)

    seed_parts = tuple(tuple(sorted(int(x) for x in part)) for part in seed)
    if len(seed_parts) != len(sizes):
        raise InvalidInputError(f"seed has {len(seed_parts)} parts, expected {len(sizes)}")
    if any(len(p) < 2 for p in seed_parts):
        raise InvalidInputError("every seed part needs at least two levels")

    def to_block(zipped: frozenset) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(p - offsets[i] for p in zipped if p in ranges[i]))
                     for i in range(len(sizes)))

    start = frozenset(offsets[i] + x for i, part in enumerate(seed_parts) for x in part)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for perm in perms:
            image = frozenset(perm[p] for p in current)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    blocks = sorted(to_block(z) for z in seen)
    return MultipartDesign(v=sizes, blocks=tuple(blocks))


def meet_filter(host: BlockDesign, special: Sequence[int], t: int) -> MultipartDesign:
    """Two-factor design from host blocks meeting a fixed set in t points.

    Selected blocks split into their meet with the special set (first
    factor) and the remainder (second factor); blocks that would leave
    either part empty are discarded.
    """
    special_set = set(int(x) for x in special)
    if not special_set or not special_set <= set(range(host.v)):
        raise InvalidInputError("special set must be a non-empty subset of the points")
    inside = sorted(special_set)
    outside = sorted(set(range(host.v)) - special_set)
    red = {p: x for x, p in enumerate(inside)}
    green = {p: x for x, p in enumerate(outside)}

    blocks = []
    for block in host.blocks:
        meet = [p for p in block if p in special_set]
        rest = [p for p in block if p not in special_set]
        if len(meet) != t or not meet or not rest:
            continue
        blocks.append((
            tuple(sorted(red[p] for p in meet)),
            tuple(sorted(green[p] for p in rest)),
        ))
    if not blocks:
        raise NoBlocksSelectedError(
            f"no host block meets the special set in exactly {t} points "
            f"with a non-empty remainder")
    return MultipartDesign(v=(len(inside), len(outside)), blocks=tuple(blocks))


# --------------------------------------------------------------------------
# orthogonal-array composition and multi-part products


def oa_compose(parts: Sequence[BlockDesign],
               partitions: Sequence[BlockPartition],
               oa: OrthogonalArray,
               matchings: Sequence[ClassMatching] | None = None) -> MultipartDesign:
    """Cross one block per ingredient, chosen class-by-class via an array.

    For every class j and array row, the row's symbol in column i picks
    a block (in index order) from class j of ingredient i; the chosen
    blocks are crossed into one block of the result.  b = c * rows, and
    the strength matches the array's (verified by the caller).
    """
    parts = tuple(parts)
    partitions = tuple(partitions)
    m = len(parts)
    if oa.columns != m:
        raise ClassCountMismatchError(
            f"array has {oa.columns} columns for {m} ingredients")
    if len(partitions) != m:
        raise ClassCountMismatchError(
            f"{len(partitions)} partitions for {m} ingredients")
    cs = {p.c for p in partitions}
    if len(cs) != 1:
        raise ClassCountMismatchError(f"class counts differ: {sorted(cs)}")
    c = cs.pop()
    if matchings is None:
        matchings = tuple(ClassMatching.identity(c) for _ in range(m))
    if len(matchings) != m or any(mt.c != c for mt in matchings):
        raise ClassCountMismatchError("one matching of the full class count per ingredient")

    for i, (bd, partition) in enumerate(zip(parts, partitions)):
        _require_2_design(bd, f"ingredient {i}")
        _require_uniform_classes(bd, partition, f"ingredient {i}")
        if oa.symbols[i] != bd.b // c:
            raise SymbolCountMismatchError(
                f"column {i} has {oa.symbols[i]} symbols, class size is {bd.b // c}")

    blocks = []
    for j in range(c):
        chosen_classes = [sorted(partitions[i].classes[matchings[i][j]]) for i in range(m)]
        for row in oa.rows:
            blocks.append(tuple(parts[i].blocks[chosen_classes[i][row[i]]]
                                for i in range(m)))
    return MultipartDesign(v=tuple(bd.v for bd in parts), blocks=tuple(blocks))


def multipart_product(a: MultipartDesign, b: MultipartDesign) -> MultipartDesign:
    """Concatenate every block of ``a`` with every block of ``b``."""
    blocks = tuple(block_a + block_b
                   for block_a in a.blocks for block_b in b.blocks)
    return MultipartDesign(v=a.v + b.v, blocks=blocks,
                           factor_names=default_factor_names(a.m + b.m))


def class_matched_product(theta: MultipartDesign, p: BlockPartition,
                          delta: BlockDesign) -> MultipartDesign:
    """Append one block of ``delta`` as a new factor to each class of ``theta``.

    Class j of the partition gets delta's block j; the partition must be
    a verified equal-replication grouping and delta must have exactly
    one block per class.
    """
    from .verify import verify_partition

    if p.b != theta.b:
        raise ClassCountMismatchError(
            f"partition covers {p.b} blocks, design has {theta.b}")
    if delta.b != p.c:
        raise ClassCountMismatchError(
            f"delta has {delta.b} blocks for {p.c} classes")
    if not verify_partition(theta, p):
        raise ClassNotUniformError("classes do not replicate every level equally")

    extended: list = [None] * theta.b
    for j, cls in enumerate(p.classes):
        for t in cls:
            extended[t] = theta.blocks[t] + (delta.blocks[j],)
    return MultipartDesign(v=theta.v + (delta.v,), blocks=tuple(extended),
                           factor_names=default_factor_names(theta.m + 1))
