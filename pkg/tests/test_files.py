import json

import pytest

from mpart.errors import (
    DualRequiresTwoFactorsError,
    DuplicateLevelInPartError,
    ParseError,
    UnknownFactorError,
)
from mpart.files import (
    from_json_dict,
    parse_blocks,
    parse_concise,
    render,
    serialize_blocks,
    serialize_concise,
    serialize_json,
    to_json_dict,
)
from mpart.fixtures import DESIGN_FIXTURES, fixture_text, load_design
from mpart.model import derive_parameters


def test_parse_fig2b_table():
    text = fixture_text("fig1.design")
    d = parse_concise(text)
    assert d.b == 10
    assert d.factor_names == ("C", "D")
    assert d.blocks[0] == ((0, 1, 2), (0, 4))


def test_round_trip_every_fixture_is_byte_exact():
    for name in DESIGN_FIXTURES:
        text = fixture_text(name + ".design")
        assert serialize_concise(parse_concise(text)) == text, name


def test_parse_round_trips_whitespace_freely():
    text = "mpart v1\nfactors: C=3 D=3\nblock: C{ 1 ,2} D{2,3}\n"
    d = parse_concise(text)
    assert d.blocks == (((0, 1), (1, 2)),)
    assert serialize_concise(d) == "mpart v1\nfactors: C=3 D=3\nblock: C{1,2} D{2,3}\n"


def test_parse_empty_block_line():
    with pytest.raises(ParseError):
        parse_concise("mpart v1\nfactors: C=3 D=3\nblock:\n")


def test_parse_unknown_factor():
    with pytest.raises(UnknownFactorError) as err:
        parse_concise("mpart v1\nfactors: C=3 D=3\nblock: C{1,2} X{1}\n")
    assert err.value.line == 3


def test_parse_duplicate_level():
    with pytest.raises(DuplicateLevelInPartError):
        parse_concise("mpart v1\nfactors: C=3 D=3\nblock: C{1,1} D{1,2}\n")


def test_parse_level_out_of_range():
    with pytest.raises(ParseError):
        parse_concise("mpart v1\nfactors: C=3 D=3\nblock: C{1,4} D{1,2}\n")


def test_parse_bad_header():
    with pytest.raises(ParseError):
        parse_concise("mpart v2\nfactors: C=3\nblock: C{1,2}\n")


def test_render_dual_fig2b():
    d = load_design("fig1")
    dual = render(d, "dual")
    lines = dual.splitlines()
    assert lines[0].split("|")[1].strip() == "D1"
    # cell (C1, D1) holds blocks 1 and 2
    c1 = next(line for line in lines if line.startswith("C1"))
    assert c1.split("|")[1].strip() == "1,2"
    # every cell holds exactly lambda_12 = 2 names: b k1 k2 names in total
    names = sum(cell.count(",") + 1
                for line in lines[2:] for cell in line.split("|")[1:])
    assert names == 10 * 3 * 2


def test_render_full_fig2b():
    d = load_design("fig1")
    full = render(d, "full")
    first = full.splitlines()[0]
    assert first == "Block 1: (C1,D1) (C1,D5) (C2,D1) (C2,D5) (C3,D1) (C3,D5)"


def test_render_dual_needs_two_factors():
    with pytest.raises(DualRequiresTwoFactorsError):
        render(load_design("fig8a"), "dual")


def test_json_round_trip():
    d = load_design("fig4b")
    data = json.loads(serialize_json(d))
    assert data["params"]["b"] == 20
    assert from_json_dict(data) == d
    assert from_json_dict(to_json_dict(d)).factor_names == d.factor_names


def test_json_carries_derived_parameters():
    d = load_design("fig1")
    data = to_json_dict(d)
    params = derive_parameters(d)
    assert data["params"]["r"] == list(params.r)
    assert data["params"]["lambda"][0][1] == params.lam[0][1]


def test_parse_blocks_format():
    text = "# comment\n1 2 3\n2 3 4\n"
    bd = parse_blocks(text)
    assert bd.v == 4
    assert bd.blocks == ((0, 1, 2), (1, 2, 3))
    assert serialize_blocks(bd) == "1 2 3\n2 3 4\n"


def test_parse_blocks_rejects_zero():
    with pytest.raises(ParseError):
        parse_blocks("0 1 2\n")
