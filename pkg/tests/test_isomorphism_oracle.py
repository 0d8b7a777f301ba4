"""Isomorphism decisions cross-checked against a brute-force oracle.

The oracle tries every combination of per-factor level permutations and
compares block multisets, which is exact (if slow) for small designs.
This pins down the search-based implementation: equal certificates must
mean a permutation exists, different certificates must mean none does,
and automorphism orbit pruning must not change any certificate.
"""

import random
from itertools import permutations

from mpart.fixtures import DESIGN_FIXTURES, load_design
from mpart.isomorphism import _Canonicalizer, are_isomorphic, canonical_form
from mpart.model import MultipartDesign

from helpers import random_design, random_relabeled


def brute_force_isomorphic(d1: MultipartDesign, d2: MultipartDesign) -> bool:
    if d1.m != d2.m or d1.v != d2.v or d1.b != d2.b:
        return False
    target = sorted(d1.blocks)
    for perms in _all_perm_tuples(d2.v):
        relabeled = sorted(
            tuple(tuple(sorted(perms[i][x] for x in part))
                  for i, part in enumerate(block))
            for block in d2.blocks
        )
        if relabeled == target:
            return True
    return False


def _all_perm_tuples(v):
    from itertools import product

    spaces = [list(permutations(range(size))) for size in v]
    return product(*spaces)


def test_random_pairs_agree_with_brute_force():
    rng = random.Random(0x1501)
    isomorphic_seen = 0
    distinct_seen = 0
    for trial in range(150):
        d1 = random_design(rng, max_m=2, max_v=4, max_b=5)
        if trial % 2 == 0:
            d2 = random_relabeled(rng, d1)
        else:
            d2 = random_design(rng, max_m=2, max_v=4, max_b=5)
        expected = brute_force_isomorphic(d1, d2)
        assert are_isomorphic(d1, d2) == expected, (d1, d2)
        isomorphic_seen += expected
        distinct_seen += not expected
    assert isomorphic_seen >= 50
    assert distinct_seen >= 25


def test_three_factor_pairs_agree_with_brute_force():
    rng = random.Random(0x1502)
    for trial in range(40):
        d1 = random_design(rng, max_m=3, max_v=3, max_b=4)
        d2 = (random_relabeled(rng, d1) if trial % 2
              else random_design(rng, max_m=3, max_v=3, max_b=4))
        assert are_isomorphic(d1, d2) == brute_force_isomorphic(d1, d2)


class _NoPruning(_Canonicalizer):
    def _orbit_representatives(self, cell, fixed):
        return cell


def test_orbit_pruning_never_changes_the_certificate():
    for name in DESIGN_FIXTURES:
        design = load_design(name)
        pruned = _Canonicalizer(design, 10_000_000)
        plain = _NoPruning(design, 10_000_000)
        assert pruned.run() == plain.run(), name


def test_orbit_pruning_never_changes_random_certificates():
    rng = random.Random(0x1503)
    for _ in range(40):
        design = random_design(rng, max_m=2, max_v=5, max_b=8)
        pruned = _Canonicalizer(design, 10_000_000)
        plain = _NoPruning(design, 10_000_000)
        assert pruned.run() == plain.run()


def test_certificates_equal_iff_brute_force_isomorphic():
    rng = random.Random(0x1504)
    designs = [random_design(rng, max_m=2, max_v=4, max_b=4) for _ in range(12)]
    forms = [canonical_form(d).certificate for d in designs]
    for i in range(len(designs)):
        for j in range(i + 1, len(designs)):
            expected = brute_force_isomorphic(designs[i], designs[j])
            assert (forms[i] == forms[j]) == expected, (i, j)
