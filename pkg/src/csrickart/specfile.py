"""Line-oriented text format for rings and modules.

Module file::

    name: M
    ring: Z            # or zn:<n>, or custom:<path to ring file>
    orders: 2 16
    act e1 g2 = 0 1    # coefficients of g2 * e1 (custom rings only)

Ring file::

    orders: 2 2
    unit: 1 1
    mul e1 e1 = 1 0    # coefficients of e1 * e1; missing products are 0

Generators are numbered from 1.  Text after ``#`` is ignored.
"""
from __future__ import annotations

import re
from pathlib import Path

from .core import CUSTOM_TAG, INTEGERS, AlgebraError, FiniteModule, FiniteRing, make_module, make_ring, zn


class SpecSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = f"{source or '<text>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


_PRODUCT = re.compile(r"^(mul|act)\s+e(\d+)\s+([eg])(\d+)\s*=\s*(.*)$")


def _ints(text: str, line: int, source, what: str) -> list[int]:
    try:
        vals = [int(tok) for tok in text.split()]
    except ValueError:
        raise SpecSyntaxError(f"{what} must be integers, got {text.strip()!r}", line, source) from None
    if not vals:
        raise SpecSyntaxError(f"{what} is empty", line, source)
    return vals


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body


def parse_ring_spec(text: str, *, source: str | None = None) -> FiniteRing:
    orders = unit = None
    table: dict[tuple[int, int], list[int]] = {}
    entries = []
    for no, body in _lines(text):
        m = _PRODUCT.match(body)
        if body.startswith("orders:"):
            orders = _ints(body[7:], no, source, "orders")
            if any(o < 1 for o in orders):
                raise SpecSyntaxError("orders must be positive", no, source)
        elif body.startswith("unit:"):
            unit = _ints(body[5:], no, source, "unit")
        elif m and m.group(1) == "mul" and m.group(3) == "e":
            entries.append((no, int(m.group(2)), int(m.group(4)), m.group(5)))
        else:
            raise SpecSyntaxError(f"cannot read {body!r}", no, source)
    if orders is None or unit is None:
        raise SpecSyntaxError("a ring file needs 'orders:' and 'unit:' lines", None, source)
    r = len(orders)
    if len(unit) != r:
        raise SpecSyntaxError(f"unit needs {r} coefficients", None, source)
    for no, i, j, rhs in entries:
        if not (1 <= i <= r and 1 <= j <= r):
            raise SpecSyntaxError(f"generator index out of range 1..{r}", no, source)
        vec = _ints(rhs, no, source, "coefficients")
        if len(vec) != r:
            raise SpecSyntaxError(f"expected {r} coefficients, got {len(vec)}", no, source)
        table[(i - 1, j - 1)] = vec
    ring = make_ring(orders, unit, table)
    ring.source_path = source
    return ring


def read_ring(path) -> FiniteRing:
    path = Path(path)
    return parse_ring_spec(path.read_text(encoding="utf-8"), source=str(path))


def _ring_from_designator(value: str, no: int, source, base: Path | None) -> FiniteRing:
    value = value.strip()
    if value == "Z":
        return INTEGERS
    if value.startswith("zn:"):
        try:
            n = int(value[3:])
        except ValueError:
            raise SpecSyntaxError(f"bad ring designator {value!r}", no, source) from None
        if n < 1:
            raise SpecSyntaxError("zn:<n> needs n >= 1", no, source)
        return zn(n)
    if value.startswith("custom:"):
        path = Path(value[7:].strip())
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            return read_ring(path)
        except OSError as exc:
            raise SpecSyntaxError(f"cannot read ring file {path}: {exc.strerror}", no, source) from None
    raise SpecSyntaxError(f"ring must be Z, zn:<n> or custom:<path>, got {value!r}", no, source)


def parse_ring_designator(value: str) -> FiniteRing:
    return _ring_from_designator(value, 0, "<argument>", None)


def parse_module_spec(text: str, *, source: str | None = None, base: Path | None = None) -> FiniteModule:
    """Parse, construct and validate a module."""
    ring = orders = name = None
    acts = []
    for no, body in _lines(text):
        m = _PRODUCT.match(body)
        if body.startswith("ring:"):
            ring = _ring_from_designator(body[5:], no, source, base)
        elif body.startswith("orders:"):
            orders = _ints(body[7:], no, source, "orders")
            if any(o < 1 for o in orders):
                raise SpecSyntaxError("orders must be positive integers", no, source)
        elif body.startswith("name:"):
            name = body[5:].strip() or None
        elif m and m.group(1) == "act" and m.group(3) == "g":
            acts.append((no, int(m.group(2)), int(m.group(4)), m.group(5)))
        else:
            raise SpecSyntaxError(f"cannot read {body!r}", no, source)
    if ring is None:
        raise SpecSyntaxError("missing 'ring:' line", None, source)
    if orders is None:
        raise SpecSyntaxError("missing 'orders:' line", None, source)
    t = len(orders)
    action = None
    if acts:
        if ring.tag != CUSTOM_TAG:
            raise SpecSyntaxError("act lines are only allowed over custom rings", acts[0][0], source)
        action = {}
        for no, i, j, rhs in acts:
            if not (1 <= i <= ring.rank and 1 <= j <= t):
                raise SpecSyntaxError("generator index out of range", no, source)
            vec = _ints(rhs, no, source, "coefficients")
            if len(vec) != t:
                raise SpecSyntaxError(f"expected {t} coefficients, got {len(vec)}", no, source)
            action[(i - 1, j - 1)] = vec
    elif ring.tag == CUSTOM_TAG:
        action = {}
    return make_module(ring, orders, action, name=name)


def read_module(path) -> FiniteModule:
    path = Path(path)
    return parse_module_spec(path.read_text(encoding="utf-8"), source=str(path), base=path.parent)


def format_module_spec(M: FiniteModule, ring_path: str | None = None) -> str:
    """Spec text for M; a custom ring needs the path of its ring file."""
    lines = []
    if M.name:
        lines.append(f"name: {M.name}")
    if M.ring.is_integers:
        lines.append("ring: Z")
    elif M.ring.n is not None:
        lines.append(f"ring: zn:{M.ring.n}")
    else:
        path = ring_path or M.ring.source_path
        if path is None:
            raise AlgebraError("a module over a custom ring needs the ring file path")
        lines.append(f"ring: custom:{path}")
    lines.append("orders: " + " ".join(str(o) for o in M.orders))
    if M.ring.tag == CUSTOM_TAG:
        for i, A in enumerate(M.action):
            for j, row in enumerate(A):
                if row.any():
                    lines.append(f"act e{i + 1} g{j + 1} = " + " ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def format_ring_spec(R: FiniteRing) -> str:
    lines = ["orders: " + " ".join(str(o) for o in R.orders), "unit: " + " ".join(str(u) for u in R.unit)]
    for i in range(R.rank):
        for j in range(R.rank):
            if R.table[i, j].any():
                lines.append(f"mul e{i + 1} e{j + 1} = " + " ".join(str(int(v)) for v in R.table[i, j]))
    return "\n".join(lines) + "\n"
