"""Parameter-space enumeration over the ingredient catalog.

Reproduces the least-block-count tables for two-factor designs: full
products (construction 1), class-matched subproducts (2), Hadamard
splits (3) and symmetric-design splits (4).  Every emitted row comes
from an actually constructed and verified design, deduplicated to the
least block count per (v, k) signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .constructions import (
    hadamard_2part,
    subcartesian_product,
    symmetric_block_split,
)
from .errors import UNKNOWN, DesignError, InvalidInputError, NotConstructibleError
from .ingredients import CatalogEntry, catalog_entries, hadamard_matrix
from .model import BlockDesign, MultipartDesign, as_multipart, complement_design
from .verify import check_admissible, check_multipart, find_partition


@dataclass(frozen=True)
class ParameterRow:
    """One table row: least b for a (v, k) signature plus construction data.

    ``r`` is the class count used by the subproduct route (for rows also
    reachable from a Hadamard matrix of order 4n it equals 2n - 1, the
    replication of the half-size ingredient the subproduct would use);
    ``sym`` is the (v, k, lambda) of the symmetric ingredient.
    """

    b: int
    v: tuple[int, ...]
    k: tuple[int, ...]
    constructions: tuple[int, ...]
    r: int | None = None
    sym: tuple[int, int, int] | None = None

    @property
    def sort_key(self):
        return (self.b,) + self.v + self.k


def _normalize_signature(v: Sequence[int], k: Sequence[int]):
    pairs = sorted(zip(v, k), reverse=True)
    return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


def _satisfies_swap_convention(v: Sequence[int], k: Sequence[int]) -> bool:
    return all(2 * ki <= vi or ki == vi - 1 for vi, ki in zip(v, k))


@dataclass
class _Candidate:
    b: int
    v: tuple[int, ...]
    k: tuple[int, ...]
    tag: int
    r: int | None = None
    sym: tuple[int, int, int] | None = None


def _verified_signature(design: MultipartDesign):
    report = check_multipart(design)
    if not report.valid:
        return None
    return _normalize_signature(design.v, report.k)


class _Enumerator:
    def __init__(self, max_b: int, ingredient_blocks: int, partition_budget: int):
        self.max_b = max_b
        self.partition_budget = partition_budget
        self.entries = catalog_entries(max_blocks=ingredient_blocks)
        self.primaries = catalog_entries(max_blocks=ingredient_blocks,
                                         include_complements=False)
        self._designs: dict[str, BlockDesign] = {}

    def design_of(self, entry: CatalogEntry) -> BlockDesign:
        if entry.name not in self._designs:
            self._designs[entry.name] = entry.build()
        return self._designs[entry.name]

    @lru_cache(maxsize=None)
    def partitions_of(self, name: str, c: int):
        entry = next(e for e in self.entries if e.name == name)
        result = find_partition(as_multipart(self.design_of(entry)), c,
                                budget=self.partition_budget)
        return None if result is UNKNOWN else result

    # ---- construction 1: full products

    def cartesian(self) -> Iterable[_Candidate]:
        for i, e1 in enumerate(self.entries):
            for e2 in self.entries[i:]:
                b = e1.b * e2.b
                if b > self.max_b:
                    continue
                v, k = _normalize_signature((e1.v, e2.v), (e1.k, e2.k))
                yield _Candidate(b=b, v=v, k=k, tag=1)

    # ---- construction 2: subcartesian products

    def subcartesian(self) -> Iterable[_Candidate]:
        for e2 in self.entries:
            for c in range(2, e2.b + 1):
                if e2.b % c:
                    continue
                if all((e1.b % c) or (e1.b * e2.b // c > self.max_b)
                       for e1 in self.entries):
                    continue
                partition = self.partitions_of(e2.name, c)
                if partition is None:
                    continue
                d2 = self.design_of(e2)
                for e1 in self.entries:
                    b = e1.b * e2.b // c
                    if e1.b % c or b > self.max_b:
                        continue
                    design = subcartesian_product(self.design_of(e1), d2, partition)
                    sig = _verified_signature(design)
                    if sig is None:
                        continue
                    yield _Candidate(b=b, v=sig[0], k=sig[1], tag=2, r=c)

    # ---- construction 3: Hadamard splits

    def hadamard(self) -> Iterable[_Candidate]:
        order = 8
        while 2 * order - 4 <= self.max_b:
            try:
                H = hadamard_matrix(order)
            except NotConstructibleError:
                order += 4
                continue
            design = hadamard_2part(H, second_row=1)
            sig = _verified_signature(design)
            if sig is not None:
                yield _Candidate(b=design.b, v=sig[0], k=sig[1], tag=3,
                                 r=order // 2 - 1)
            order += 4

    # ---- construction 4: symmetric splits

    def symmetric(self) -> Iterable[_Candidate]:
        for entry in self.primaries:
            if not entry.symmetric or entry.b - 1 > self.max_b:
                continue
            used = (entry.v, entry.k, entry.lam)
            design = self.design_of(entry)
            if entry.lam < 2:
                kc = entry.v - entry.k
                lamc = entry.lam + entry.b - 2 * (entry.b * entry.k // entry.v)
                if kc < 2 or lamc < 2:
                    continue
                design = complement_design(design)
                used = (entry.v, kc, lamc)
            try:
                split = symmetric_block_split(design, 0)
            except DesignError:
                continue
            sig = _verified_signature(split)
            if sig is None:
                continue
            yield _Candidate(b=split.b, v=sig[0], k=sig[1], tag=4, sym=used)


def _collect(max_b: int, constructions: frozenset[int],
             swap_convention: bool, ingredient_blocks: int,
             partition_budget: int) -> dict[tuple, list[_Candidate]]:
    enum = _Enumerator(max_b, ingredient_blocks, partition_budget)
    generators = {1: enum.cartesian, 2: enum.subcartesian,
                  3: enum.hadamard, 4: enum.symmetric}
    unknown = constructions - set(generators)
    if unknown:
        raise InvalidInputError(
            f"tables cover constructions 1-4, got {sorted(unknown)}")
    best: dict[tuple, list[_Candidate]] = {}
    for tag in sorted(constructions):
        for cand in generators[tag]():
            if swap_convention and not _satisfies_swap_convention(cand.v, cand.k):
                continue
            key = (cand.v, cand.k)
            kept = best.get(key)
            if kept is None or cand.b < kept[0].b:
                best[key] = [cand]
            elif cand.b == kept[0].b:
                kept.append(cand)
    return best


def enumerate_reachable(max_b: int,
                        constructions: Iterable[int] = (1, 2, 3, 4),
                        exclude: Iterable[int] = (),
                        swap_convention: bool = True,
                        ingredient_blocks: int = 64,
                        partition_budget: int = 200_000) -> tuple[ParameterRow, ...]:
    """Least-b parameter rows reachable by the chosen constructions.

    ``exclude`` drops any signature the excluded construction reaches at
    the same or a smaller block count.  ``swap_convention`` keeps only
    rows with k_i <= v_i/2 or k_i = v_i - 1 for every factor (the tables
    for constructions 1-3 follow it; the symmetric-split table does not).
    """
    constructions = frozenset(constructions)
    exclude = frozenset(exclude)
    if constructions & exclude:
        raise InvalidInputError("a construction cannot be both included and excluded")
    best = _collect(max_b, constructions, swap_convention,
                    ingredient_blocks, partition_budget)
    if exclude:
        shadow = _collect(max_b, exclude, False, ingredient_blocks, partition_budget)
        best = {key: cands for key, cands in best.items()
                if key not in shadow or shadow[key][0].b > cands[0].b}

    rows = []
    for (v, k), cands in best.items():
        b = cands[0].b
        tags = tuple(sorted({c.tag for c in cands}))
        if 3 in tags:
            r = b // 4
        else:
            r_values = [c.r for c in cands if c.r is not None]
            r = max(r_values) if r_values else None
        sym_values = [c.sym for c in cands if c.sym is not None]
        sym = sym_values[0] if sym_values else None
        assert check_admissible(b, v, k).ok
        rows.append(ParameterRow(b=b, v=v, k=k, constructions=tags, r=r, sym=sym))
    return tuple(sorted(rows, key=lambda row: row.sort_key))


def render_rows(rows: Sequence[ParameterRow]) -> str:
    """Aligned text table; rows reachable from a Hadamard split get a star."""
    header = ["b"]
    m = max((len(r.v) for r in rows), default=2)
    header += [f"v{i+1}" for i in range(m)] + [f"k{i+1}" for i in range(m)]
    header += ["r", "sym", "via"]
    lines = [[str(r.b)]
             + [str(x) for x in r.v] + [""] * (m - len(r.v))
             + [str(x) for x in r.k] + [""] * (m - len(r.k))
             + [str(r.r) if r.r is not None else "-",
                f"({r.sym[0]},{r.sym[1]},{r.sym[2]})" if r.sym else "-",
                ",".join(str(t) for t in r.constructions)
                + (" *" if 3 in r.constructions else "")]
             for r in rows]
    widths = [max(len(header[i]), *(len(line[i]) for line in lines)) if lines else len(header[i])
              for i in range(len(header))]
    out = ["  ".join(header[i].rjust(widths[i]) for i in range(len(header)))]
    for line in lines:
        out.append("  ".join(line[i].rjust(widths[i]) for i in range(len(header))))
    return "\n".join(out) + "\n"
