"""Acceptance suite: one test per criterion, exact integer assertions.

Each test prints one pass line on success (visible with ``pytest -s``);
a failure shows up as the test failing.  Everything is exact integer
arithmetic; there are no tolerances anywhere.
"""

import random

from mpart.constructions import (
    augment,
    cartesian_product,
    hadamard_2part,
    meet_filter,
    multipart_product,
    oa_compose,
    part_swap,
    symmetric_block_split,
)
from mpart.errors import UNKNOWN
from mpart.fixtures import (
    DESIGN_FIXTURES,
    EXTENSION_POINT_23,
    load_design,
    steiner_3_22_6,
    steiner_4_23_7,
)
from mpart.ingredients import (
    brute_force_bibd,
    full_factorial_oa,
    get_bibd,
    hadamard_matrix,
    orthogonal_array,
    resolvable_classes,
)
from mpart.isomorphism import are_isomorphic, are_weakly_isomorphic, canonical_form
from mpart.model import (
    BlockDesign,
    as_multipart,
    derive_parameters,
    select_factors,
    unzip_design,
    zip_design,
)
from mpart.tables import enumerate_reachable
from mpart.verify import (
    check_admissible,
    check_multipart,
    check_strength,
    cross_matrix,
    find_partition,
    verify_partition,
)

from helpers import oracle_lambda, random_design, random_relabeled

TRIALS = 1000

# (b, k, r, lam) per fixture; lam maps ordered factor pairs to the exact count
FIXTURE_PARAMETERS = {
    "fig1": (10, (3, 2), (5, 4), {(0, 0): 2, (1, 1): 1, (0, 1): 2}),
    "fig3": (6, (2, 2), (4, 3), {(0, 0): 2, (1, 1): 1, (0, 1): 2}),
    "fig5a": (12, (2, 2), (6, 6), {(0, 0): 2, (1, 1): 2, (0, 1): 3}),
    "fig5b": (12, (2, 2), (6, 6), {(0, 0): 2, (1, 1): 2, (0, 1): 3}),
    "fig4a": (20, (3, 3), (10, 10), {(0, 0): 4, (1, 1): 4, (0, 1): 5}),
    "fig4b": (20, (3, 3, 2), (10, 10, 8),
              {(0, 0): 4, (1, 1): 4, (2, 2): 2, (0, 1): 5, (0, 2): 4, (1, 2): 4}),
    "fig8a": (9, (2, 2, 2), (6, 6, 6),
              {(i, i): 3 for i in range(3)} | {(0, 1): 4, (0, 2): 4, (1, 2): 4}),
    "fig8b": (12, (2, 2, 2), (6, 6, 6),
              {(i, i): 2 for i in range(3)} | {(0, 1): 3, (0, 2): 3, (1, 2): 3}),
    "fig9": (9, (2, 2, 2, 2), (6, 6, 6, 6),
             {(i, i): 3 for i in range(4)}
             | {(i, j): 4 for i in range(4) for j in range(i + 1, 4)}),
}


def _report(n: int, text: str):
    print(f"[acceptance] criterion {n:2d}: PASS - {text}")


def test_criterion_01_fixture_verification():
    for name, (b, k, r, lam) in FIXTURE_PARAMETERS.items():
        design = load_design(name)
        report = check_multipart(design)
        assert report.valid, name
        assert report.b == b, name
        assert report.k == k, name
        assert report.r == r, name
        for (i, j), value in lam.items():
            if i == j:
                assert report.within_lambda[i] == value, (name, i)
            else:
                assert report.cross_lambda[i][j] == value, (name, i, j)
    fig4b = FIXTURE_PARAMETERS["fig4b"]
    assert fig4b[3][(0, 2)] == fig4b[3][(1, 2)] == 2 * fig4b[1][2]
    _report(1, "all 9 fixtures verify strictly with exact parameters")


def test_criterion_02_symmetric_split_every_block():
    fig1 = load_design("fig1")
    biplane = get_bibd(11, 5, 2)
    for gamma in range(biplane.b):
        split = symmetric_block_split(biplane, gamma)
        assert are_isomorphic(split, fig1), f"gamma={gamma}"
    _report(2, "2-(11,5,2) split is the fig1 design for every removed block")


def test_criterion_03_hadamard_partition_bound():
    design = hadamard_2part(hadamard_matrix(12), second_row=1)
    assert design.b == 20
    assert design.v == (6, 6)
    witness = find_partition(design, 10)
    assert witness is not UNKNOWN and witness is not None
    assert verify_partition(design, witness)
    assert design.b == design.v[0] + design.v[1] + 10 - 2  # bound met exactly
    _report(3, "order-12 matrix: 20 blocks, 10-partitionable, bound tight")


def test_criterion_04_augment_matches_fig4a():
    augmented = augment(load_design("fig1"), factor=1)
    assert are_isomorphic(augmented, load_design("fig4a"))
    _report(4, "augmenting fig1 on drugs gives fig4a")


def test_criterion_05_weak_isomorphism_separations():
    assert not are_weakly_isomorphic(load_design("fig5a"), load_design("fig5b"))
    fig4b_cd = select_factors(load_design("fig4b"), (0, 1))
    assert not are_weakly_isomorphic(load_design("fig4a"), fig4b_cd)
    _report(5, "fig5a vs fig5b and fig4a vs fig4b|CD are not weakly isomorphic")


def test_criterion_06_oa_compose_fig8b():
    ingredient = get_bibd(4, 2, 1)
    classes = resolvable_classes(ingredient)
    oa = orthogonal_array((2, 2, 2), 2)
    built = oa_compose([ingredient] * 3, [classes] * 3, oa)
    assert built.b == 12
    assert are_isomorphic(built, load_design("fig8b"))
    assert check_strength(built, 2) is not None
    assert check_strength(built, 3) is None
    _report(6, "OA(4,3,2,2) composition is fig8b: strength 2, not 3")


def test_criterion_07_product_strength_3():
    product = multipart_product(load_design("fig1"), as_multipart(get_bibd(3, 2, 1)))
    assert product.b == 30
    assert check_strength(product, 3) is not None
    _report(7, "fig1 x three-point pair design: 30 blocks, strength 3")


def test_criterion_08_meet_filter_parameters():
    host = steiner_3_22_6()
    sixty = meet_filter(host, host.blocks[0], 2)
    params = derive_parameters(sixty)
    assert (params.b, params.v, params.k) == (60, (6, 16), (2, 4))
    assert (params.lam[0][0], params.lam[0][1], params.lam[1][1]) == (4, 5, 3)

    theta = steiner_4_23_7()
    special = next(b for b in theta.blocks if EXTENSION_POINT_23 not in b)
    thirty_five = meet_filter(host, special, 3)
    params = derive_parameters(thirty_five)
    assert (params.b, params.v, params.k) == (35, (7, 15), (3, 3))
    assert (params.lam[0][0], params.lam[0][1], params.lam[1][1]) == (5, 3, 1)
    _report(8, "meet filters: 60 blocks (4,5,3) and 35 blocks (5,3,1), exact")


def test_criterion_09_table_reproduction():
    symmetric = enumerate_reachable(max_b=24, constructions=(4,),
                                    swap_convention=False)
    assert [(r.b, r.v, r.k, r.sym) for r in symmetric] == [
        (6, (4, 3), (2, 2), (7, 4, 2)),
        (10, (6, 5), (3, 2), (11, 5, 2)),
        (12, (9, 4), (6, 3), (13, 9, 6)),
        (14, (8, 7), (4, 3), (15, 7, 3)),
        (15, (10, 6), (4, 2), (16, 6, 2)),
        (18, (10, 9), (5, 4), (19, 9, 4)),
        (22, (12, 11), (6, 5), (23, 11, 5)),
        (24, (16, 9), (6, 3), (25, 9, 3)),
    ]

    products = enumerate_reachable(max_b=21, constructions=(1,))
    by_signature = {(r.v, r.k): r.b for r in products}
    known_rows = {
        (9, (3, 3), (2, 2)), (12, (4, 3), (3, 2)), (15, (5, 3), (4, 2)),
        (16, (4, 4), (3, 3)), (18, (4, 3), (2, 2)), (18, (6, 3), (5, 2)),
        (20, (5, 4), (4, 3)), (21, (7, 3), (3, 2)), (21, (7, 3), (6, 2)),
    }
    assert known_rows <= {(r.b, r.v, r.k) for r in products}
    for b, v, k in known_rows:
        assert by_signature[(v, k)] == b

    matched = enumerate_reachable(max_b=60, constructions=(2, 3), exclude=(1,))
    by_signature = {(r.v, r.k): r for r in matched}
    for b, v, k, r_value in (
        (12, (4, 4), (2, 2), 3), (20, (6, 6), (3, 3), 5),
        (28, (8, 8), (4, 4), 7), (36, (10, 10), (5, 5), 9),
        (44, (12, 12), (6, 6), 11), (60, (16, 16), (8, 8), 15),
    ):
        row = by_signature[(v, k)]
        assert (row.b, row.r) == (b, r_value), (v, k)
        assert 3 in row.constructions, (v, k)
    _report(9, "symmetric table exact; product and matched tables agree")


# ---------------------------------------------------------------------------
# criterion 10: property suites, 1000 fixed-seed trials each


def test_criterion_10a_zip_unzip_round_trip():
    rng = random.Random(0xA1)
    for _ in range(TRIALS):
        design = random_design(rng, uniform_k=True)
        back = unzip_design(zip_design(design), design.v)
        assert back.blocks == design.blocks
    _report(10, f"zip/unzip round trip, {TRIALS} trials")


def _swap_eligible(design):
    params = derive_parameters(design)
    return [i for i in range(design.m)
            if params.k[i] is not None and design.v[i] - params.k[i] >= 2]


def test_criterion_10b_part_swap_involution_and_transform():
    rng = random.Random(0xB2)
    pool = [load_design(name) for name in DESIGN_FIXTURES]
    pool.append(hadamard_2part(hadamard_matrix(12), 1))
    pool.append(cartesian_product([get_bibd(4, 3, 2), get_bibd(3, 2, 1)]))
    pool = [(d, derive_parameters(d), _swap_eligible(d)) for d in pool]
    pool = [entry for entry in pool if entry[2]]
    for trial in range(TRIALS):
        if trial % 2 == 0:
            design = random_design(rng, max_v=7, min_part=2, max_part_slack=2)
            factor = rng.randrange(design.m)
            assert part_swap(part_swap(design, factor), factor).blocks == design.blocks
        else:
            design, params, eligible = pool[rng.randrange(len(pool))]
            factor = rng.choice(eligible)
            swapped = part_swap(design, factor)
            b, v = params.b, design.v
            expected_k = v[factor] - params.k[factor]
            expected_within = b - 2 * params.r[factor] + params.lam[factor][factor]
            got = derive_parameters(swapped)
            assert got.k[factor] == expected_k
            assert got.lam[factor][factor] == expected_within
            # independent recount of the swapped design
            assert oracle_lambda(swapped.blocks, v, factor, factor) == expected_within
            for other in range(design.m):
                if other == factor:
                    continue
                expected_cross = params.r[other] - params.lam[factor][other]
                assert got.lam[factor][other] == expected_cross
                i, j = min(factor, other), max(factor, other)
                assert oracle_lambda(swapped.blocks, v, i, j) == expected_cross
    _report(10, f"part swap involution and parameter transform, {TRIALS} trials")


def test_criterion_10c_relabeling_invariance():
    rng = random.Random(0xC3)
    references = {name: canonical_form(load_design(name)).certificate
                  for name in DESIGN_FIXTURES}
    for trial in range(TRIALS):
        name = DESIGN_FIXTURES[trial % len(DESIGN_FIXTURES)]
        shuffled = random_relabeled(rng, load_design(name))
        assert canonical_form(shuffled).certificate == references[name], name
    _report(10, f"canonical certificate relabeling invariance, {TRIALS} trials")


def test_criterion_10d_block_count_bound():
    rng = random.Random(0xD4)
    pool = [load_design(name) for name in DESIGN_FIXTURES]
    pool.append(hadamard_2part(hadamard_matrix(12), 1))
    pool.append(symmetric_block_split(get_bibd(11, 5, 2), 2))
    small = [(3, 2, 1), (4, 2, 1), (4, 3, 2), (5, 4, 3), (7, 3, 1), (6, 3, 2)]
    for _ in range(TRIALS):
        if rng.random() < 0.5:
            design = pool[rng.randrange(len(pool))]
        else:
            picks = [get_bibd(*small[rng.randrange(len(small))])
                     for _ in range(rng.randint(1, 2))]
            design = cartesian_product(picks)
        report = check_multipart(design)
        assert report.valid
        admissible = check_admissible(design.b, design.v, report.k)
        assert admissible.ok
        assert design.b >= sum(design.v) - design.m + 1
    _report(10, f"b >= sum(v) - m + 1 on valid designs, {TRIALS} trials")


def test_criterion_10e_cross_constancy_iff_strength_2():
    rng = random.Random(0xE5)
    checked = 0
    while checked < TRIALS:
        design = random_design(rng, max_m=3, max_v=5, max_b=10)
        if design.m < 2:
            continue
        checked += 1
        constant = all(
            len(set(cross_matrix(design, i, j).ravel().tolist())) == 1
            for i in range(design.m) for j in range(i + 1, design.m)
        )
        assert constant == (check_strength(design, 2) is not None)
    _report(10, f"cross constancy matches strength-2 presence, {TRIALS} trials")


def test_criterion_11_oracle_equivalence():
    found = brute_force_bibd(7, 3, 1, 7)
    assert isinstance(found, BlockDesign)
    assert are_isomorphic(as_multipart(found), as_multipart(get_bibd(7, 3, 1)))

    rng = random.Random(0xF6)
    choices = [(3, 2, 1), (4, 2, 1), (4, 3, 2), (5, 4, 3), (6, 5, 4), (7, 3, 1)]
    for _ in range(3):
        a = get_bibd(*choices[rng.randrange(len(choices))])
        b = get_bibd(*choices[rng.randrange(len(choices))])
        product = cartesian_product([a, b])
        oa = full_factorial_oa((a.b, b.b))
        single_a = find_partition(as_multipart(a), 1)
        single_b = find_partition(as_multipart(b), 1)
        composed = oa_compose([a, b], [single_a, single_b], oa)
        assert sorted(composed.blocks) == sorted(product.blocks)
    _report(11, "brute-force oracle and array composition agree with the library")
