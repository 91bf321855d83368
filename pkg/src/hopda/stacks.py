"""Nested higher-order stacks with explicit cell positions.

A 0-stack is a single cell: a stack symbol together with its position, a
tuple of coordinates ``(x_n, ..., x_1)`` listed outermost first.  For
``k >= 1`` a k-stack is a nonempty sequence of (k-1)-stacks whose topmost
element sits at the right end.  Positions always coincide with the 1-based
path indices inside the ambient stack; every operation preserves this and
``validate`` re-checks it.

Cells also carry a collapse link: the number of 1-stacks the surrounding
2-stack had when the cell was created by an order-1 push.  Links are stored
unconditionally but only the collapse operation interprets them.
"""

from __future__ import annotations

from dataclasses import dataclass


class StackError(Exception):
    """Structural violation in a nested stack."""


class BlockedPop(StackError):
    """A pop or collapse would empty a stack that must stay nonempty."""


@dataclass(frozen=True)
class Cell:
    """0-stack: one symbol with its position and collapse link."""

    symbol: str
    pos: tuple[int, ...]
    link: int = 1


@dataclass(frozen=True)
class Stack:
    """k-stack for k >= 1: nonempty tuple of (k-1)-stacks, top at the right."""

    order: int
    items: tuple

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Push:
    """Duplicate the topmost (k-1)-stack, rewriting its top symbol.

    For k = 1 this pushes a fresh cell whose link records the current size
    of the surrounding 2-stack.  For k >= 2 links are copied verbatim.
    """

    k: int
    symbol: str


@dataclass(frozen=True)
class Pop:
    """Remove the topmost (k-1)-stack; blocked if it is the only one."""

    k: int


@dataclass(frozen=True)
class Collapse:
    """Shrink the order-2 stack to the prefix recorded in the top link."""


Op = Push | Pop | Collapse


def initial_stack(order: int, symbol: str) -> Stack:
    """The order-``order`` stack holding a single cell with `symbol`."""
    if order < 1:
        raise StackError("stack order must be at least 1")
    obj: Cell | Stack = Cell(symbol, (1,) * order)
    for k in range(1, order + 1):
        obj = Stack(k, (obj,))
    return obj


def top(k: int, stack: Stack) -> Stack | Cell:
    """Topmost k-stack of `stack`; the top cell itself for k = 0."""
    if k < 0 or k > stack.order:
        raise StackError(f"no order-{k} substack in an order-{stack.order} stack")
    obj: Stack | Cell = stack
    while isinstance(obj, Stack) and obj.order > k:
        obj = obj.items[-1]
    return obj


def top_symbol(stack: Stack) -> str:
    cell = top(0, stack)
    assert isinstance(cell, Cell)
    return cell.symbol


def _retop(obj: Stack | Cell, symbol: str, link: int | None) -> Stack | Cell:
    if isinstance(obj, Cell):
        return Cell(symbol, obj.pos, obj.link if link is None else link)
    return Stack(obj.order, obj.items[:-1] + (_retop(obj.items[-1], symbol, link),))


def _bump(obj: Stack | Cell, index: int) -> Stack | Cell:
    if isinstance(obj, Cell):
        pos = list(obj.pos)
        pos[index] += 1
        return Cell(obj.symbol, tuple(pos), obj.link)
    return Stack(obj.order, tuple(_bump(sub, index) for sub in obj.items))


def push(stack: Stack, k: int, symbol: str) -> Stack:
    """Append a rewritten copy of the topmost (k-1)-stack inside the top k-stack."""
    n = stack.order
    if not 1 <= k <= n:
        raise StackError(f"push{k} undefined for an order-{n} stack")
    link = None
    if k == 1 and n >= 2:
        two = top(2, stack)
        assert isinstance(two, Stack)
        link = len(two.items)
    elif k == 1:
        link = 1

    def go(s: Stack) -> Stack:
        if s.order == k:
            dup = _bump(_retop(s.items[-1], symbol, link), n - k)
            return Stack(s.order, s.items + (dup,))
        return Stack(s.order, s.items[:-1] + (go(s.items[-1]),))

    return go(stack)


def pop(stack: Stack, k: int) -> Stack:
    """Drop the topmost (k-1)-stack inside the top k-stack."""
    n = stack.order
    if not 1 <= k <= n:
        raise StackError(f"pop{k} undefined for an order-{n} stack")

    def go(s: Stack) -> Stack:
        if s.order == k:
            if len(s.items) < 2:
                raise BlockedPop(f"pop{k} on a singleton {k}-stack")
            return Stack(s.order, s.items[:-1])
        return Stack(s.order, s.items[:-1] + (go(s.items[-1]),))

    return go(stack)


def collapse(stack: Stack) -> Stack:
    """Keep the bottom ``link - 1`` 1-stacks, as recorded by the top cell."""
    if stack.order != 2:
        raise StackError("collapse is only defined on order-2 stacks")
    cell = top(0, stack)
    assert isinstance(cell, Cell)
    if cell.link <= 1:
        raise BlockedPop("collapse would empty the stack")
    if cell.link > len(stack.items):
        raise StackError("collapse link exceeds current stack size")
    return Stack(2, stack.items[: cell.link - 1])


def apply(op: Op, stack: Stack) -> Stack:
    if isinstance(op, Push):
        return push(stack, op.k, op.symbol)
    if isinstance(op, Pop):
        return pop(stack, op.k)
    if isinstance(op, Collapse):
        return collapse(stack)
    raise StackError(f"unknown stack operation {op!r}")


def positionless(obj: Stack | Cell):
    """Strip positions and links, leaving nested tuples of symbols."""
    if isinstance(obj, Cell):
        return obj.symbol
    return tuple(positionless(sub) for sub in obj.items)


def validate(stack: Stack) -> None:
    """Check orders, nonemptiness, and the position = path invariant."""
    if not isinstance(stack, Stack):
        raise StackError("not a stack")

    def go(obj, order: int, prefix: tuple[int, ...]) -> None:
        if order == 0:
            if not isinstance(obj, Cell):
                raise StackError(f"expected a cell at path {prefix}")
            if obj.pos != prefix:
                raise StackError(f"cell position {obj.pos} differs from path {prefix}")
            if not isinstance(obj.link, int) or obj.link < 1:
                raise StackError(f"bad link {obj.link!r} at {prefix}")
            return
        if not isinstance(obj, Stack) or obj.order != order:
            raise StackError(f"expected an order-{order} stack at path {prefix}")
        if not obj.items:
            raise StackError(f"empty order-{order} stack at path {prefix}")
        for i, sub in enumerate(obj.items, start=1):
            go(sub, order - 1, prefix + (i,))

    go(stack, stack.order, ())


def from_symbols(order: int, literal) -> Stack:
    """Build a stack with canonical positions from nested symbol sequences.

    Cells may be plain symbols or ``(symbol, link)`` pairs.
    """

    def go(obj, k: int, prefix: tuple[int, ...]):
        if k == 0:
            if isinstance(obj, str):
                return Cell(obj, prefix)
            sym, link = obj
            return Cell(sym, prefix, link)
        if isinstance(obj, str):
            raise StackError(f"symbol {obj!r} found where an order-{k} stack was expected")
        items = tuple(go(sub, k - 1, prefix + (i,)) for i, sub in enumerate(obj, start=1))
        if not items:
            raise StackError("stack literals must be nonempty at every level")
        return Stack(k, items)

    result = go(literal, order, ())
    if not isinstance(result, Stack):
        raise StackError("order must be at least 1")
    return result


def render(obj: Stack | Cell, links: bool = True) -> str:
    """Compact text form, e.g. ``[[a,b],[c,d]]``; links > 1 shown as ``a^3``."""
    if isinstance(obj, Cell):
        return obj.symbol if obj.link == 1 or not links else f"{obj.symbol}^{obj.link}"
    return "[" + ",".join(render(sub, links) for sub in obj.items) + "]"


def parse_literal(text: str):
    """Parse the `render` syntax back into nested lists of (symbol, link)."""
    pos = 0

    def skip_ws() -> None:
        nonlocal pos
        while pos < len(text) and text[pos] in " \t":
            pos += 1

    def parse_node():
        nonlocal pos
        skip_ws()
        if pos >= len(text):
            raise StackError("unexpected end of stack literal")
        if text[pos] == "[":
            pos += 1
            items = []
            skip_ws()
            if pos < len(text) and text[pos] == "]":
                raise StackError("empty level in stack literal")
            while True:
                items.append(parse_node())
                skip_ws()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == "]":
                    pos += 1
                    return items
                raise StackError(f"expected ',' or ']' at offset {pos}")
        start = pos
        while pos < len(text) and (text[pos].isalnum() or text[pos] in "_"):
            pos += 1
        if start == pos:
            raise StackError(f"expected a symbol at offset {pos}")
        sym = text[start:pos]
        if pos < len(text) and text[pos] == "^":
            pos += 1
            digits = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            if digits == pos:
                raise StackError("missing link value after '^'")
            return (sym, int(text[digits:pos]))
        return sym

    node = parse_node()
    skip_ws()
    if pos != len(text):
        raise StackError(f"trailing characters in stack literal: {text[pos:]!r}")
    return node


def parse_stack(order: int, text: str) -> Stack:
    return from_symbols(order, parse_literal(text))
