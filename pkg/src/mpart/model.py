"""Immutable data model for multi-part block designs.

A multi-part design allocates, to each of its b blocks, one non-empty
subset of levels per factor.  The model is deliberately permissive: it
enforces structural sanity (indices in range, non-empty parts, sorted
storage, no duplicate levels) but not balance, so the verifier can
report exactly which balance conditions fail instead of refusing to
represent the object.

Levels are 0-based internally; the file formats in :mod:`mpart.files`
use 1-based labels with factor-name prefixes.  Blocks are multisets:
repeated blocks are legal and design equality is multiset equality of
blocks, while the stored order is the construction order and is
preserved through serialization.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, NonUniformIntersectionError

_DEFAULT_NAMES = ("C", "D", "B", "A")


def default_factor_names(m: int) -> tuple[str, ...]:
    """Default factor labels: C, D, B, A, then F5, F6, ..."""
    names = list(_DEFAULT_NAMES[:m])
    while len(names) < m:
        names.append(f"F{len(names) + 1}")
    return tuple(names)


def _normalize_part(part: Iterable[int], size: int, what: str) -> tuple[int, ...]:
    levels = tuple(part)
    if len(set(levels)) != len(levels):
        raise InvalidInputError(f"duplicate level in {what}: {sorted(levels)}")
    if not levels:
        raise InvalidInputError(f"empty part in {what}")
    for x in levels:
        if not 0 <= x < size:
            raise InvalidInputError(f"level {x} out of range [0, {size}) in {what}")
    return tuple(sorted(levels))


@dataclass(frozen=True, eq=False)
class MultipartDesign:
    """m factors with level counts ``v`` and blocks of per-factor level sets.

    ``blocks[t][i]`` is the sorted tuple of factor-``i`` levels of block
    ``t``.  Equality and hashing treat the blocks as a multiset.
    """

    v: tuple[int, ...]
    blocks: tuple[tuple[tuple[int, ...], ...], ...]
    factor_names: tuple[str, ...] = ()

    def __post_init__(self):
        v = tuple(int(x) for x in self.v)
        if not v or any(x < 1 for x in v):
            raise InvalidInputError(f"factor sizes must be positive, got {v}")
        m = len(v)
        names = tuple(self.factor_names) or default_factor_names(m)
        if len(names) != m or len(set(names)) != m:
            raise InvalidInputError(f"need {m} distinct factor names, got {names}")
        blocks = []
        for t, block in enumerate(self.blocks):
            parts = tuple(block)
            if len(parts) != m:
                raise InvalidInputError(f"block {t} has {len(parts)} parts, expected {m}")
            blocks.append(tuple(_normalize_part(p, v[i], f"block {t}, factor {i}")
                                for i, p in enumerate(parts)))
        if not blocks:
            raise InvalidInputError("a design needs at least one block")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "factor_names", names)

    @property
    def m(self) -> int:
        return len(self.v)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def offsets(self) -> tuple[int, ...]:
        """Start offset of each factor's levels in the zipped point set."""
        out, total = [], 0
        for size in self.v:
            out.append(total)
            total += size
        return tuple(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultipartDesign):
            return NotImplemented
        return self.v == other.v and sorted(self.blocks) == sorted(other.blocks)

    def __hash__(self) -> int:
        return hash((self.v, tuple(sorted(self.blocks))))

    def __repr__(self) -> str:
        return f"MultipartDesign(v={self.v}, b={self.b})"


@dataclass(frozen=True, eq=False)
class BlockDesign:
    """A single-factor block design: ``v`` points, blocks as level subsets.

    Repeated blocks are legal (multiset semantics); equality is multiset
    equality of blocks.
    """

    v: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        v = int(self.v)
        if v < 1:
            raise InvalidInputError(f"point count must be positive, got {v}")
        blocks = tuple(_normalize_part(block, v, f"block {t}")
                       for t, block in enumerate(self.blocks))
        if not blocks:
            raise InvalidInputError("a design needs at least one block")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "blocks", blocks)

    @property
    def b(self) -> int:
        return len(self.blocks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockDesign):
            return NotImplemented
        return self.v == other.v and sorted(self.blocks) == sorted(other.blocks)

    def __hash__(self) -> int:
        return hash((self.v, tuple(sorted(self.blocks))))

    def __repr__(self) -> str:
        return f"BlockDesign(v={self.v}, b={self.b})"


@dataclass(frozen=True)
class BlockPartition:
    """Grouping of block indices 0..b-1 into equal-size disjoint classes."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        classes = tuple(tuple(sorted(int(x) for x in cls)) for cls in self.classes)
        if not classes:
            raise InvalidInputError("a partition needs at least one class")
        sizes = {len(cls) for cls in classes}
        if len(sizes) != 1 or 0 in sizes:
            raise InvalidInputError(f"classes must be equal-size and non-empty, got sizes {sorted(sizes)}")
        seen = [x for cls in classes for x in cls]
        b = len(seen)
        if sorted(seen) != list(range(b)):
            raise InvalidInputError("classes must partition the block indices 0..b-1")
        object.__setattr__(self, "classes", classes)

    @property
    def c(self) -> int:
        return len(self.classes)

    @property
    def b(self) -> int:
        return self.c * len(self.classes[0])

    def class_of(self) -> tuple[int, ...]:
        """Map block index -> class index."""
        out = [0] * self.b
        for j, cls in enumerate(self.classes):
            for t in cls:
                out[t] = j
        return tuple(out)


@dataclass(frozen=True)
class MultipartParams:
    """Exact counted parameters of a design.

    Entries are ``None`` when the corresponding raw counts are not
    constant across the design; the ``uniform`` property is true when
    every field is constant.  ``lam[i][i]`` is the within-factor pair
    concurrence, ``lam[i][j]`` the cross-factor level-pair count.
    """

    b: int
    v: tuple[int, ...]
    k: tuple[int | None, ...]
    r: tuple[int | None, ...]
    lam: tuple[tuple[int | None, ...], ...]

    @property
    def m(self) -> int:
        return len(self.v)

    @property
    def uniform(self) -> bool:
        if any(x is None for x in self.k) or any(x is None for x in self.r):
            return False
        return all(x is not None for row in self.lam for x in row)


def derive_parameters(design: MultipartDesign) -> MultipartParams:
    """Count k, r and the full concurrence table of a design.

    Counting is multiset over blocks; never fails.  A quantity that
    varies across the design is reported as ``None``.
    """
    m, b, v = design.m, design.b, design.v

    def constant(values):
        vals = set(values)
        return vals.pop() if len(vals) == 1 else None

    k = tuple(constant(len(block[i]) for block in design.blocks) for i in range(m))

    r = []
    per_level: list[Counter] = []
    for i in range(m):
        counts: Counter = Counter()
        for block in design.blocks:
            counts.update(block[i])
        per_level.append(counts)
        r.append(constant(counts.get(x, 0) for x in range(v[i])))

    lam: list[list[int | None]] = [[None] * m for _ in range(m)]
    for i in range(m):
        if v[i] == 1:
            lam[i][i] = 0
            continue
        pair_counts: Counter = Counter()
        for block in design.blocks:
            pair_counts.update(combinations(block[i], 2))
        lam[i][i] = constant(pair_counts.get(p, 0) for p in combinations(range(v[i]), 2))
    for i in range(m):
        for j in range(i + 1, m):
            cross: Counter = Counter()
            for block in design.blocks:
                cross.update(product(block[i], block[j]))
            value = constant(cross.get(p, 0) for p in product(range(v[i]), range(v[j])))
            lam[i][j] = lam[j][i] = value

    return MultipartParams(b=b, v=v, k=k, r=tuple(r),
                           lam=tuple(tuple(row) for row in lam))


def zip_design(design: MultipartDesign) -> BlockDesign:
    """Unite each block's parts over the disjoint union of the level sets.

    Factor i's levels are offset by v_1 + ... + v_{i-1}; the result has
    one point set of size sum(v) and block sizes k_1 + ... + k_m.
    """
    offsets = design.offsets
    blocks = tuple(
        tuple(sorted(x + offsets[i] for i, part in enumerate(block) for x in part))
        for block in design.blocks
    )
    return BlockDesign(v=sum(design.v), blocks=blocks)


def unzip_design(bd: BlockDesign, group_sizes: Sequence[int]) -> MultipartDesign:
    """Inverse of :func:`zip_design` for a given grouping of the points.

    Every block must meet each group in the same count across blocks;
    otherwise the grouping is not a valid multi-part split and
    :class:`NonUniformIntersectionError` is raised.
    """
    sizes = tuple(int(x) for x in group_sizes)
    if any(x < 1 for x in sizes):
        raise InvalidInputError(f"group sizes must be positive, got {sizes}")
    if sum(sizes) != bd.v:
        raise InvalidInputError(f"group sizes {sizes} do not sum to {bd.v} points")
    offsets, total = [], 0
    for size in sizes:
        offsets.append(total)
        total += size

    split_blocks = []
    for block in bd.blocks:
        parts = tuple(
            tuple(x - offsets[i] for x in block if offsets[i] <= x < offsets[i] + sizes[i])
            for i in range(len(sizes))
        )
        split_blocks.append(parts)

    for i in range(len(sizes)):
        counts = {len(parts[i]) for parts in split_blocks}
        if len(counts) != 1:
            raise NonUniformIntersectionError(
                f"blocks meet group {i} in varying counts {sorted(counts)}")
        if counts == {0}:
            raise NonUniformIntersectionError(f"no block meets group {i}")

    return MultipartDesign(v=sizes, blocks=tuple(split_blocks))


def incidence_matrix(design: MultipartDesign, factor: int) -> np.ndarray:
    """The v_i x b 0/1 matrix of factor levels against blocks."""
    if not 0 <= factor < design.m:
        raise InvalidInputError(f"factor {factor} out of range for m={design.m}")
    out = np.zeros((design.v[factor], design.b), dtype=np.int64)
    for t, block in enumerate(design.blocks):
        for x in block[factor]:
            out[x, t] = 1
    return out


def as_multipart(bd: BlockDesign) -> MultipartDesign:
    """View a plain block design as a 1-part design, preserving block order."""
    return MultipartDesign(v=(bd.v,), blocks=tuple((block,) for block in bd.blocks))


def complement_design(bd: BlockDesign) -> BlockDesign:
    """Replace every block by its complement in the point set."""
    full = set(range(bd.v))
    return BlockDesign(v=bd.v, blocks=tuple(tuple(sorted(full - set(b))) for b in bd.blocks))


def relabel_levels(design: MultipartDesign,
                   perms: Sequence[Sequence[int]]) -> MultipartDesign:
    """Apply per-factor level permutations (``perms[i][old] = new``)."""
    if len(perms) != design.m:
        raise InvalidInputError(f"need {design.m} permutations, got {len(perms)}")
    for i, perm in enumerate(perms):
        if sorted(perm) != list(range(design.v[i])):
            raise InvalidInputError(f"not a permutation of factor {i} levels: {perm}")
    blocks = tuple(
        tuple(tuple(sorted(perms[i][x] for x in part)) for i, part in enumerate(block))
        for block in design.blocks
    )
    return MultipartDesign(v=design.v, blocks=blocks, factor_names=design.factor_names)


def permute_factors(design: MultipartDesign, order: Sequence[int]) -> MultipartDesign:
    """Reorder factors so new position j holds old factor ``order[j]``."""
    if sorted(order) != list(range(design.m)):
        raise InvalidInputError(f"not a permutation of factors: {order}")
    return MultipartDesign(
        v=tuple(design.v[i] for i in order),
        blocks=tuple(tuple(block[i] for i in order) for block in design.blocks),
        factor_names=tuple(design.factor_names[i] for i in order),
    )


def select_factors(design: MultipartDesign, factors: Sequence[int]) -> MultipartDesign:
    """Restrict the design to a subset of factors, in the given order."""
    if not factors or len(set(factors)) != len(factors):
        raise InvalidInputError(f"factor selection must be non-empty and distinct: {factors}")
    for i in factors:
        if not 0 <= i < design.m:
            raise InvalidInputError(f"factor {i} out of range for m={design.m}")
    return MultipartDesign(
        v=tuple(design.v[i] for i in factors),
        blocks=tuple(tuple(block[i] for i in factors) for block in design.blocks),
        factor_names=tuple(design.factor_names[i] for i in factors),
    )


def reorder_blocks(design: MultipartDesign, order: Sequence[int]) -> MultipartDesign:
    """Permute the stored block order (the design stays equal as a multiset)."""
    if sorted(order) != list(range(design.b)):
        raise InvalidInputError(f"not a permutation of blocks: {order}")
    return MultipartDesign(v=design.v,
                           blocks=tuple(design.blocks[t] for t in order),
                           factor_names=design.factor_names)
