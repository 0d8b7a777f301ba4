"""Balance verification, parameter admissibility, and block partitions.

All arithmetic is exact; a derived parameter that is not an integer is a
hard admissibility failure, never rounded.  Verification never raises on
an unbalanced design: the report carries the failures.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import UNKNOWN, InvalidInputError
from .model import (
    BlockPartition,
    MultipartDesign,
    incidence_matrix,
)


def concurrence_matrix(design: MultipartDesign, factor: int) -> np.ndarray:
    """v_i x v_i matrix: off-diagonal pair concurrences, diagonal replications."""
    N = incidence_matrix(design, factor)
    return N @ N.T


def cross_matrix(design: MultipartDesign, i: int, j: int) -> np.ndarray:
    """v_i x v_j matrix counting blocks containing each cross-factor level pair."""
    if i == j:
        raise InvalidInputError("cross_matrix needs two distinct factors")
    return incidence_matrix(design, i) @ incidence_matrix(design, j).T


def check_strength(design: MultipartDesign, t: int) -> dict[tuple[int, ...], int] | None:
    """Per-t-subset constant incidence counts, or None when unbalanced.

    Strength t includes all lower strengths: the table for the t-subsets
    is only returned when every t'-subset with 2 <= t' <= t is balanced.
    """
    if not 2 <= t <= design.m:
        raise InvalidInputError(f"t must be in 2..{design.m}, got {t}")
    table: dict[tuple[int, ...], int] = {}
    for tt in range(2, t + 1):
        level: dict[tuple[int, ...], int] = {}
        for factors in combinations(range(design.m), tt):
            counts: Counter = Counter()
            for block in design.blocks:
                counts.update(product(*(block[i] for i in factors)))
            full = product(*(range(design.v[i]) for i in factors))
            values = {counts.get(combo, 0) for combo in full}
            if len(values) != 1:
                return None
            level[factors] = values.pop()
        if tt == t:
            table = level
    return table


def design_strength(design: MultipartDesign) -> int:
    """Largest t with strength t; 1 when even pairs are unbalanced or m = 1."""
    best = 1
    for t in range(2, design.m + 1):
        if check_strength(design, t) is None:
            break
        best = t
    return best


@dataclass(frozen=True)
class VerificationReport:
    """Structured evidence for every balance condition of a design."""

    b: int
    v: tuple[int, ...]
    k: tuple[int | None, ...]
    r: tuple[int | None, ...]
    sizes_uniform: tuple[bool, ...]
    incomplete: tuple[bool, ...]
    within_lambda: tuple[int | None, ...]
    within_balance: tuple[bool, ...]
    within_nonzero: tuple[bool, ...]
    cross_lambda: tuple[tuple[int | None, ...], ...]
    cross_balance: tuple[tuple[bool, ...], ...]
    strength: int
    allow_degenerate: bool
    valid: bool

    @property
    def m(self) -> int:
        return len(self.v)

    def summary(self) -> str:
        lines = [f"{self.m}-part design: b={self.b} v={self.v}"]
        for i in range(self.m):
            bits = [
                f"k={self.k[i]}" if self.sizes_uniform[i] else "k varies",
                f"r={self.r[i]}" if self.r[i] is not None else "r varies",
                (f"lambda_{i}{i}={self.within_lambda[i]}"
                 if self.within_balance[i] else f"lambda_{i}{i} varies"),
                "incomplete" if self.incomplete[i] else "NOT incomplete",
            ]
            lines.append(f"  factor {i}: " + ", ".join(bits))
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if self.cross_balance[i][j]:
                    lines.append(f"  lambda_{i}{j}={self.cross_lambda[i][j]}")
                else:
                    lines.append(f"  lambda_{i}{j} varies")
        lines.append(f"  strength: {self.strength}")
        lines.append(f"  verdict: {'valid' if self.valid else 'INVALID'}")
        return "\n".join(lines)


def check_multipart(design: MultipartDesign,
                    allow_degenerate: bool = False) -> VerificationReport:
    """Check uniform incomplete part sizes, within- and cross-factor balance.

    The verdict requires uniform k_i with 2 <= k_i < v_i, constant
    non-zero within-factor concurrence, and constant cross counts for
    every factor pair (strength 2 when m >= 2).  With
    ``allow_degenerate``, a factor with k_i = 1 (hence zero
    concurrence) is reported but not fatal.
    """
    m = design.m
    sizes_uniform = []
    k: list[int | None] = []
    for i in range(m):
        sizes = {len(block[i]) for block in design.blocks}
        uniform = len(sizes) == 1
        sizes_uniform.append(uniform)
        k.append(sizes.pop() if uniform else None)

    r: list[int | None] = []
    within_lambda: list[int | None] = []
    within_balance = []
    within_nonzero = []
    for i in range(m):
        conc = concurrence_matrix(design, i)
        reps = set(np.diag(conc).tolist())
        r.append(reps.pop() if len(reps) == 1 else None)
        if design.v[i] == 1:
            within_lambda.append(0)
            within_balance.append(True)
            within_nonzero.append(False)
            continue
        off = conc[~np.eye(design.v[i], dtype=bool)]
        values = set(off.tolist())
        balanced = len(values) == 1
        within_balance.append(balanced)
        within_lambda.append(values.pop() if balanced else None)
        within_nonzero.append(balanced and within_lambda[i] > 0)

    cross_lambda: list[list[int | None]] = [[None] * m for _ in range(m)]
    cross_balance = [[i == j for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            values = set(cross_matrix(design, i, j).ravel().tolist())
            if len(values) == 1:
                cross_balance[i][j] = cross_balance[j][i] = True
                cross_lambda[i][j] = cross_lambda[j][i] = values.pop()

    incomplete = [k[i] is not None and k[i] < design.v[i] for i in range(m)]
    strength = design_strength(design)

    valid = True
    for i in range(m):
        if not (sizes_uniform[i] and incomplete[i] and within_balance[i]):
            valid = False
        elif within_nonzero[i] and k[i] >= 2:
            pass
        elif allow_degenerate and k[i] == 1 and within_lambda[i] == 0:
            pass
        else:
            valid = False
    if m >= 2:
        valid = valid and strength >= 2

    return VerificationReport(
        b=design.b, v=design.v, k=tuple(k), r=tuple(r),
        sizes_uniform=tuple(sizes_uniform), incomplete=tuple(incomplete),
        within_lambda=tuple(within_lambda), within_balance=tuple(within_balance),
        within_nonzero=tuple(within_nonzero),
        cross_lambda=tuple(tuple(row) for row in cross_lambda),
        cross_balance=tuple(tuple(row) for row in cross_balance),
        strength=strength, allow_degenerate=allow_degenerate, valid=valid,
    )


@dataclass(frozen=True)
class AdmissibilityReport:
    """Derived parameters with integrality flags and block-count bounds."""

    b: int
    v: tuple[int, ...]
    k: tuple[int, ...]
    c: int | None
    r: tuple[Fraction, ...]
    lam: tuple[tuple[Fraction, ...], ...]
    r_integral: tuple[bool, ...]
    lam_integral: tuple[tuple[bool, ...], ...]
    bound_basic: bool
    c_divides_b: bool | None
    bound_partitioned: bool | None
    ok: bool

    @property
    def m(self) -> int:
        return len(self.v)

    def summary(self) -> str:
        def frac(x: Fraction) -> str:
            return str(x) if x.denominator != 1 else str(x.numerator)

        lines = [f"b={self.b} v={self.v} k={self.k}" + (f" c={self.c}" if self.c else "")]
        for i in range(self.m):
            mark = "" if self.r_integral[i] else "  <- not an integer"
            lines.append(f"  r_{i} = {frac(self.r[i])}{mark}")
        for i in range(self.m):
            for j in range(i, self.m):
                mark = "" if self.lam_integral[i][j] else "  <- not an integer"
                lines.append(f"  lambda_{i}{j} = {frac(self.lam[i][j])}{mark}")
        need = sum(self.v) - self.m + 1
        lines.append(f"  b >= {need}: {'pass' if self.bound_basic else 'FAIL'}")
        if self.c is not None:
            lines.append(f"  c | b: {'pass' if self.c_divides_b else 'FAIL'}")
            need_c = sum(self.v) + self.c - self.m
            lines.append(f"  b >= {need_c}: {'pass' if self.bound_partitioned else 'FAIL'}")
        lines.append(f"  verdict: {'admissible' if self.ok else 'NOT admissible'}")
        return "\n".join(lines)


def check_admissible(b: int, v: Sequence[int], k: Sequence[int],
                     c: int | None = None) -> AdmissibilityReport:
    """Exact admissibility of (b, v, k[, c]).

    Derives r_i = b k_i / v_i, lambda_ii = b k_i (k_i - 1) / (v_i (v_i - 1))
    and lambda_ij = b k_i k_j / (v_i v_j); flags non-integral values and
    checks b >= sum(v) - m + 1, plus c | b and b >= sum(v) + c - m when a
    class count is given.
    """
    v = tuple(int(x) for x in v)
    k = tuple(int(x) for x in k)
    if b < 1 or len(v) != len(k) or not v:
        raise InvalidInputError(f"bad shapes: b={b}, v={v}, k={k}")
    if any(x < 1 for x in v + k) or (c is not None and c < 1):
        raise InvalidInputError("all inputs must be positive")
    if any(ki >= vi for vi, ki in zip(v, k)):
        raise InvalidInputError(f"need k_i < v_i, got v={v}, k={k}")
    m = len(v)

    r = tuple(Fraction(b * k[i], v[i]) for i in range(m))
    lam = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        lam[i][i] = (Fraction(b * k[i] * (k[i] - 1), v[i] * (v[i] - 1))
                     if v[i] > 1 else Fraction(0))
        for j in range(i + 1, m):
            lam[i][j] = lam[j][i] = Fraction(b * k[i] * k[j], v[i] * v[j])

    r_integral = tuple(x.denominator == 1 for x in r)
    lam_integral = tuple(tuple(x.denominator == 1 for x in row) for row in lam)
    bound_basic = b >= sum(v) - m + 1
    c_divides_b = (b % c == 0) if c is not None else None
    bound_partitioned = (b >= sum(v) + c - m) if c is not None else None

    ok = all(r_integral) and all(all(row) for row in lam_integral) and bound_basic
    if c is not None:
        ok = ok and c_divides_b and bound_partitioned

    return AdmissibilityReport(
        b=b, v=v, k=k, c=c, r=r,
        lam=tuple(tuple(row) for row in lam),
        r_integral=r_integral, lam_integral=lam_integral,
        bound_basic=bound_basic, c_divides_b=c_divides_b,
        bound_partitioned=bound_partitioned, ok=ok,
    )


def verify_partition(design: MultipartDesign, partition: BlockPartition) -> bool:
    """True iff every level of every factor is equally replicated per class."""
    if partition.b != design.b:
        raise InvalidInputError(
            f"partition covers {partition.b} blocks, design has {design.b}")
    for i in range(design.m):
        per_class = []
        for cls in partition.classes:
            counts: Counter = Counter()
            for t in cls:
                counts.update(design.blocks[t][i])
            per_class.append(tuple(counts.get(x, 0) for x in range(design.v[i])))
        if len(set(per_class)) != 1:
            return False
    return True


def find_partition(design: MultipartDesign, c: int,
                   budget: int = 10_000_000):
    """A c-class partition witness, None (none exists), or UNKNOWN.

    Exact backtracking over class assignments in block-index order with
    per-factor occurrence quotas; block 0 is pinned to class 0 and a
    block may only open class j once classes below j are open, so the
    witness returned is the lexicographically least canonical one.
    Divisibility failures (c not dividing b or some level count) decide
    "none exists" immediately.
    """
    if c < 1:
        raise InvalidInputError(f"class count must be positive, got {c}")
    b = design.b
    if c == 1:
        return BlockPartition((tuple(range(b)),))
    if b % c:
        return None

    quotas: list[dict[int, int]] = []
    for i in range(design.m):
        counts: Counter = Counter()
        for block in design.blocks:
            counts.update(block[i])
        for x in range(design.v[i]):
            if counts.get(x, 0) % c:
                return None
        quotas.append({x: counts.get(x, 0) // c for x in range(design.v[i])})

    class_size = b // c
    fill = [0] * c
    usage = [[dict.fromkeys(q, 0) for q in quotas] for _ in range(c)]
    assign = [-1] * b
    nodes = 0
    exhausted = False

    def feasible(t: int, j: int) -> bool:
        if fill[j] >= class_size:
            return False
        block = design.blocks[t]
        for i in range(design.m):
            use = usage[j][i]
            quota = quotas[i]
            for x in block[i]:
                if use[x] + 1 > quota[x]:
                    return False
        return True

    def place(t: int, j: int, sign: int):
        fill[j] += sign
        for i in range(design.m):
            use = usage[j][i]
            for x in design.blocks[t][i]:
                use[x] += sign

    def extend(t: int) -> bool:
        nonlocal nodes, exhausted
        if t == b:
            return True
        opened = max(assign[:t], default=-1) + 1
        limit = 1 if t == 0 else min(c, opened + 1)
        for j in range(limit):
            nodes += 1
            if nodes > budget:
                exhausted = True
                return False
            if not feasible(t, j):
                continue
            assign[t] = j
            place(t, j, +1)
            if extend(t + 1):
                return True
            place(t, j, -1)
            assign[t] = -1
        return False

    if extend(0):
        classes = [[] for _ in range(c)]
        for t, j in enumerate(assign):
            classes[j].append(t)
        return BlockPartition(tuple(tuple(cls) for cls in classes))
    return UNKNOWN if exhausted else None
