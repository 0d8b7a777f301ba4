"""Canonical labeling, isomorphism and weak isomorphism of designs.

Isomorphism allows independent relabeling of every factor's levels and
of the blocks; weak isomorphism additionally lets factors of compatible
shape trade places.  The canonical form is the lexicographically least
sorted block list over all per-factor relabelings, found by iterative
refinement on level invariants (replication, concurrence fingerprints,
cross fingerprints) with backtracking over the residual permutations.
Two designs are isomorphic iff their certificates are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .errors import BudgetExceededError
from .model import MultipartDesign, permute_factors


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical representative plus the byte certificate compared for equality."""

    design: MultipartDesign
    certificate: bytes


def _fingerprint(design: MultipartDesign) -> tuple:
    """Cheap relabeling-invariant summary, used as a certificate prefix.

    Covers the per-block size profiles and the multiset of pairwise
    block-meet profiles, which already separates many non-isomorphic
    designs without any search.
    """
    m = design.m
    size_profiles = tuple(sorted(tuple(len(p) for p in block) for block in design.blocks))
    masks = [tuple(sum(1 << x for x in block[i]) for i in range(m))
             for block in design.blocks]
    meets = sorted(
        tuple((a[i] & b[i]).bit_count() for i in range(m))
        for a, b in combinations(masks, 2)
    )
    reps = []
    for i in range(m):
        counts = [0] * design.v[i]
        for block in design.blocks:
            for x in block[i]:
                counts[x] += 1
        reps.append(tuple(sorted(counts)))
    return (design.v, size_profiles, tuple(reps), tuple(meets))


class _Canonicalizer:
    """Individualization-refinement search for the least sorted block list.

    Refinement colors points by replication, colored concurrence/cross
    profiles and the multiset of their block colors; blocks by their
    size profile and point colors.  Branching individualizes one point
    of the first non-singleton class in canonical color order, with
    orbits under already-discovered automorphisms (those fixing the
    individualized points) explored only once.
    """

    def __init__(self, design: MultipartDesign, budget: int):
        self.design = design
        self.budget = budget
        self.nodes = 0
        self.m = design.m
        offsets = design.offsets
        self.total = sum(design.v)
        self.b = design.b
        self.factor_of = [i for i in range(self.m) for _ in range(design.v[i])]
        self.parts = [
            tuple(tuple(offsets[i] + x for x in block[i]) for i in range(self.m))
            for block in design.blocks
        ]
        self.block_points = [tuple(p for part in parts for p in part)
                             for parts in self.parts]
        self.size_profiles = [tuple(len(part) for part in parts)
                              for parts in self.parts]
        self.point_blocks: list[tuple[int, ...]] = [() for _ in range(self.total)]
        for t, points in enumerate(self.block_points):
            for p in points:
                self.point_blocks[p] += (t,)
        Z = np.zeros((self.total, self.b), dtype=np.int64)
        for t, points in enumerate(self.block_points):
            Z[list(points), t] = 1
        self.pair = [tuple(int(x) for x in row) for row in (Z @ Z.T)]
        self.best: list | None = None
        self.best_position: list[int] | None = None
        self.autos: list[tuple[int, ...]] = []

    def _refine(self, colors: tuple[int, ...]) -> tuple[int, ...]:
        n_colors = len(set(colors))
        while True:
            block_sigs = [
                (self.size_profiles[t], tuple(sorted(colors[p] for p in self.block_points[t])))
                for t in range(self.b)
            ]
            block_rank = {sig: i for i, sig in enumerate(sorted(set(block_sigs)))}
            block_colors = [block_rank[sig] for sig in block_sigs]
            sigs = []
            for p in range(self.total):
                sigs.append((
                    colors[p],
                    tuple(sorted(zip(colors, self.pair[p]))),
                    tuple(sorted(block_colors[t] for t in self.point_blocks[p])),
                ))
            rank = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
            colors = tuple(rank[sig] for sig in sigs)
            if len(rank) == n_colors:
                return colors
            n_colors = len(rank)

    def _positions(self, colors: tuple[int, ...]) -> list[int]:
        """Discrete coloring -> canonical position of every point."""
        offsets = self.design.offsets
        position = [0] * self.total
        for i in range(self.m):
            pts = sorted((p for p in range(self.total) if self.factor_of[p] == i),
                         key=lambda p: colors[p])
            for new, p in enumerate(pts):
                position[p] = offsets[i] + new
        return position

    def _candidate(self, position: list[int]) -> list:
        offsets = self.design.offsets
        return sorted(
            tuple(tuple(sorted(position[p] - offsets[i] for p in part))
                  for i, part in enumerate(parts))
            for parts in self.parts
        )

    def _leaf(self, colors: tuple[int, ...]):
        position = self._positions(colors)
        candidate = self._candidate(position)
        if self.best is None or candidate < self.best:
            self.best = candidate
            self.best_position = position
        elif candidate == self.best and self.best_position is not None:
            inverse = [0] * self.total
            for p, pos in enumerate(self.best_position):
                inverse[pos] = p
            sigma = tuple(inverse[position[p]] for p in range(self.total))
            if any(sigma[p] != p for p in range(self.total)) and len(self.autos) < 64:
                self.autos.append(sigma)

    def _orbit_representatives(self, cell: list[int],
                               fixed: tuple[int, ...]) -> list[int]:
        useful = [g for g in self.autos if all(g[x] == x for x in fixed)]
        if not useful:
            return cell
        reps = []
        seen: set[int] = set()
        for p in cell:
            if p in seen:
                continue
            reps.append(p)
            orbit = {p}
            stack = [p]
            while stack:
                q = stack.pop()
                for g in useful:
                    r = g[q]
                    if r not in orbit:
                        orbit.add(r)
                        stack.append(r)
            seen |= orbit
        return reps

    def _search(self, colors: tuple[int, ...], fixed: tuple[int, ...]):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(
                f"canonical labeling exceeded {self.budget} nodes",
                partial=self.best)
        colors = self._refine(colors)
        cells: dict[int, list[int]] = {}
        for p, color in enumerate(colors):
            cells.setdefault(color, []).append(p)
        target = None
        for color in sorted(cells):
            if len(cells[color]) > 1:
                target = cells[color]
                break
        if target is None:
            self._leaf(colors)
            return
        for p in self._orbit_representatives(target, fixed):
            branched = [2 * c + 1 for c in colors]
            branched[p] -= 1
            rank = {c: i for i, c in enumerate(sorted(set(branched)))}
            self._search(tuple(rank[c] for c in branched), fixed + (p,))

    def run(self) -> list:
        self._search(tuple(self.factor_of), ())
        assert self.best is not None
        return self.best


def canonical_form(design: MultipartDesign, budget: int = 10_000_000) -> CanonicalForm:
    """Deterministic canonical representative of a design.

    Invariant under any per-factor level permutation and any block
    permutation.  Raises BudgetExceededError (carrying the best partial
    certificate) if the search does not finish within ``budget`` nodes.
    """
    blocks = _Canonicalizer(design, budget).run()
    canonical = MultipartDesign(v=design.v, blocks=tuple(blocks),
                                factor_names=design.factor_names)
    certificate = repr((_fingerprint(design), blocks)).encode()
    return CanonicalForm(design=canonical, certificate=certificate)


def are_isomorphic(d1: MultipartDesign, d2: MultipartDesign,
                   budget: int = 10_000_000) -> bool:
    """Certificate equality: same per-factor relabeling class.

    Shape mismatches and fingerprint mismatches decide quickly; only
    designs that agree on every cheap invariant reach the search.
    """
    if d1.m != d2.m or d1.v != d2.v:
        return False
    if _fingerprint(d1) != _fingerprint(d2):
        return False
    c1 = canonical_form(d1, budget=budget)
    c2 = canonical_form(d2, budget=budget)
    return c1.certificate == c2.certificate


def are_weakly_isomorphic(d1: MultipartDesign, d2: MultipartDesign,
                          budget: int = 10_000_000) -> bool:
    """Isomorphism up to exchanging the roles of compatible factors."""
    if d1.m != d2.m:
        return False
    profile1 = [tuple(sorted(len(b[i]) for b in d1.blocks)) for i in range(d1.m)]
    profile2 = [tuple(sorted(len(b[i]) for b in d2.blocks)) for i in range(d2.m)]
    for sigma in permutations(range(d2.m)):
        if any(d1.v[j] != d2.v[sigma[j]] or profile1[j] != profile2[sigma[j]]
               for j in range(d1.m)):
            continue
        if are_isomorphic(d1, permute_factors(d2, sigma), budget=budget):
            return True
    return False
