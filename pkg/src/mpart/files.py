"""Text formats and renderings.

The concise format mirrors the tabular layout used for hand-checked
designs: a header naming the factors and their level counts, then one
line per block listing each factor's levels in braces.  Labels in files
are 1-based with factor-name prefixes; the in-memory model is 0-based.

    mpart v1
    factors: C=6 D=5
    block: C{1,2,3} D{1,5}

Serialization is canonical (single spaces, no padding), so
parse(serialize(d)) round-trips exactly and serialize(parse(text))
reproduces canonical files byte for byte.
"""

from __future__ import annotations

import json
import re
from itertools import product
from typing import Any

from .errors import (
    DualRequiresTwoFactorsError,
    DuplicateLevelInPartError,
    InvalidInputError,
    ParseError,
    UnknownFactorError,
)
from .model import BlockDesign, MultipartDesign, derive_parameters

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_HEADER = "mpart v1"


def serialize_concise(design: MultipartDesign) -> str:
    for name in design.factor_names:
        if not _NAME_RE.fullmatch(name):
            raise InvalidInputError(f"factor name {name!r} is not serializable")
    lines = [_HEADER]
    lines.append("factors: " + " ".join(
        f"{name}={size}" for name, size in zip(design.factor_names, design.v)))
    for block in design.blocks:
        parts = " ".join(
            f"{design.factor_names[i]}{{{','.join(str(x + 1) for x in part)}}}"
            for i, part in enumerate(block))
        lines.append(f"block: {parts}")
    return "\n".join(lines) + "\n"


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_concise(text: str) -> MultipartDesign:
    """Parse the concise format; raises ParseError with line and column."""
    lines = text.splitlines()
    meaningful = [(n + 1, _strip_comment(raw)) for n, raw in enumerate(lines)]
    meaningful = [(n, line) for n, line in meaningful if line.strip()]
    if not meaningful:
        raise ParseError("empty input", 1, 1)

    n, header = meaningful[0]
    if header.strip() != _HEADER:
        raise ParseError(f"expected header {_HEADER!r}", n, 1)
    if len(meaningful) < 2:
        raise ParseError("missing factors line", n, 1)

    n, factors_line = meaningful[1]
    stripped = factors_line.strip()
    if not stripped.startswith("factors:"):
        raise ParseError("expected 'factors:' line", n, 1)
    names: list[str] = []
    sizes: list[int] = []
    for token in stripped[len("factors:"):].split():
        m = re.fullmatch(rf"({_NAME_RE.pattern})=(\d+)", token)
        if not m:
            raise ParseError(f"bad factor declaration {token!r}", n,
                             factors_line.find(token) + 1)
        names.append(m.group(1))
        sizes.append(int(m.group(2)))
    if not names:
        raise ParseError("no factors declared", n, 1)
    if len(set(names)) != len(names):
        raise ParseError("duplicate factor names", n, 1)

    part_re = re.compile(rf"({_NAME_RE.pattern})\{{\s*([0-9,\s]*)\}}")
    blocks = []
    for n, line in meaningful[2:]:
        stripped = line.strip()
        if not stripped.startswith("block:"):
            raise ParseError("expected 'block:' line", n, line.find(stripped[0]) + 1)
        body = stripped[len("block:"):]
        consumed = re.sub(part_re, " ", body)
        if consumed.strip():
            bad = consumed.strip().split()[0]
            raise ParseError(f"unrecognized text {bad!r}", n, line.find(bad) + 1)
        parts: dict[str, tuple[int, ...]] = {}
        order: list[str] = []
        for m in part_re.finditer(body):
            name = m.group(1)
            col = line.find(m.group(0)) + 1
            if name not in names:
                raise UnknownFactorError(f"unknown factor {name!r}", n, col)
            if name in parts:
                raise ParseError(f"factor {name!r} repeated in block", n, col)
            items = [tok for tok in m.group(2).replace(",", " ").split()]
            if not items:
                raise ParseError(f"empty part for factor {name!r}", n, col)
            levels = []
            for tok in items:
                x = int(tok)
                size = sizes[names.index(name)]
                if not 1 <= x <= size:
                    raise ParseError(f"level {x} out of range 1..{size}", n, col)
                levels.append(x - 1)
            if len(set(levels)) != len(levels):
                raise DuplicateLevelInPartError(
                    f"duplicate level in factor {name!r}", n, col)
            parts[name] = tuple(sorted(levels))
            order.append(name)
        if order != names:
            missing = [nm for nm in names if nm not in parts]
            if missing:
                raise ParseError(f"block is missing factor {missing[0]!r}", n, 1)
            raise ParseError(f"factors out of order: {order}", n, 1)
        blocks.append(tuple(parts[name] for name in names))
    if not blocks:
        raise ParseError("no blocks", meaningful[-1][0], 1)
    return MultipartDesign(v=tuple(sizes), blocks=tuple(blocks),
                           factor_names=tuple(names))


# --------------------------------------------------------------------------
# plain block lists (ingredient fixtures): 1-based points, one block per line


def parse_blocks(text: str, v: int | None = None) -> BlockDesign:
    """Fixture format: space-separated 1-based point labels, '#' comments."""
    blocks = []
    top = 0
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        try:
            points = [int(token) for token in line.split()]
        except ValueError as exc:
            raise ParseError(str(exc), n, 1) from None
        if any(p < 1 for p in points):
            raise ParseError("points are 1-based", n, 1)
        top = max(top, max(points))
        blocks.append(tuple(x - 1 for x in points))
    if not blocks:
        raise ParseError("no blocks", 1, 1)
    if v is None:
        v = top
    return BlockDesign(v=v, blocks=tuple(blocks))


def serialize_blocks(bd: BlockDesign, comments: tuple[str, ...] = ()) -> str:
    lines = [f"# {comment}" for comment in comments]
    lines += [" ".join(str(x + 1) for x in block) for block in bd.blocks]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# JSON mirror


def to_json_dict(design: MultipartDesign) -> dict[str, Any]:
    """Same data as the concise format plus derived parameters."""
    params = derive_parameters(design)
    return {
        "format": "mpart",
        "version": 1,
        "factors": [{"name": name, "levels": size}
                    for name, size in zip(design.factor_names, design.v)],
        "blocks": [[[x + 1 for x in part] for part in block]
                   for block in design.blocks],
        "params": {
            "b": params.b,
            "k": list(params.k),
            "r": list(params.r),
            "lambda": [list(row) for row in params.lam],
            "uniform": params.uniform,
        },
    }


def serialize_json(design: MultipartDesign) -> str:
    return json.dumps(to_json_dict(design), indent=2) + "\n"


def from_json_dict(data: dict[str, Any]) -> MultipartDesign:
    if data.get("format") != "mpart" or data.get("version") != 1:
        raise ParseError("not a version-1 design document")
    factors = data["factors"]
    return MultipartDesign(
        v=tuple(f["levels"] for f in factors),
        blocks=tuple(tuple(tuple(x - 1 for x in part) for part in block)
                     for block in data["blocks"]),
        factor_names=tuple(f["name"] for f in factors),
    )


# --------------------------------------------------------------------------
# renderings


def _label(design: MultipartDesign, factor: int, level: int) -> str:
    return f"{design.factor_names[factor]}{level + 1}"


def render_full(design: MultipartDesign) -> str:
    """Every block expanded into its level combinations."""
    lines = []
    for t, block in enumerate(design.blocks, start=1):
        combos = product(*(range(len(part)) for part in block))
        cells = ["(" + ",".join(_label(design, i, block[i][x]) for i, x in enumerate(combo)) + ")"
                 for combo in combos]
        lines.append(f"Block {t}: " + " ".join(cells))
    return "\n".join(lines) + "\n"


def render_dual(design: MultipartDesign) -> str:
    """Two-factor grid: cell (i, j) lists the blocks pairing level i with j."""
    if design.m != 2:
        raise DualRequiresTwoFactorsError(
            f"dual rendering needs exactly 2 factors, design has {design.m}")
    v1, v2 = design.v
    cells = [[[] for _ in range(v2)] for _ in range(v1)]
    for t, (part1, part2) in enumerate(design.blocks, start=1):
        for x in part1:
            for y in part2:
                cells[x][y].append(t)
    texts = [[",".join(str(t) for t in cell) for cell in row] for row in cells]
    row_labels = [_label(design, 0, x) for x in range(v1)]
    col_labels = [_label(design, 1, y) for y in range(v2)]
    widths = [max(len(col_labels[y]), max(len(texts[x][y]) for x in range(v1)))
              for y in range(v2)]
    label_width = max(len(lab) for lab in row_labels)
    header = " " * label_width + " | " + " | ".join(
        col_labels[y].ljust(widths[y]) for y in range(v2))
    rule = "-" * len(header)
    lines = [header, rule]
    for x in range(v1):
        lines.append(row_labels[x].ljust(label_width) + " | " + " | ".join(
            texts[x][y].ljust(widths[y]) for y in range(v2)))
    return "\n".join(lines) + "\n"


def render(design: MultipartDesign, mode: str = "concise") -> str:
    """Render as ``concise`` block lines, the ``dual`` grid, or the ``full`` expansion."""
    if mode == "concise":
        return serialize_concise(design)
    if mode == "dual":
        return render_dual(design)
    if mode == "full":
        return render_full(design)
    raise InvalidInputError(f"unknown rendering mode {mode!r}")
