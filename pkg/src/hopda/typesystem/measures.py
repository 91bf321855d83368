"""Progress measures on annotated stacks: low, high and len.

low counts productive descriptors and may only shrink slowly along a
run; high and len are tower functions that strictly dominate, step by
step, the number of productive reads and the total length of the run a
stack can still support. high and len weigh each derivation tree by a
constant C_depth drawn from a context table.

The recursion peels the last item off a stack, splitting annotations
between the item and the prefix with a loose restriction: descriptors
that select nothing contribute nothing. Results are exact big integers;
a configurable bit budget guards against towers that would not fit in
memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

from .annotated import ACell, Annotated, AStack, restrict_loose, type_of
from .descriptors import universe_size
from .trees import PushTree, tree_depth

__all__ = ["MeasureError", "MeasureOverflow", "MeasureContext",
           "fitted_context", "pow", "measures"]

_builtin_pow = pow

DEFAULT_MAX_BITS = 1 << 22


class MeasureError(ValueError):
    pass


class MeasureOverflow(OverflowError):
    """A high or len value would exceed the configured bit budget."""


def pow(args: Iterable[int], max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Right-to-left tower with offsets: pow(m1, ms) = (1+m1)^pow(ms) - 1.

    The empty tower is 1, so pow([m]) = m. All arguments must be
    positive; results are exact big integers.
    """
    acc = 1
    for v in reversed(tuple(args)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise MeasureError(f"tower arguments must be positive integers, "
                               f"got {v!r}")
        if acc * (v + 1).bit_length() > max_bits:
            raise MeasureOverflow(
                f"tower value needs more than {max_bits} bits")
        acc = _builtin_pow(v + 1, acc) - 1
    return acc


@dataclass(frozen=True)
class MeasureContext:
    """The table of per-depth constants C_0, C_1, ... and a bit budget."""

    table: Tuple[int, ...]
    max_bits: int = DEFAULT_MAX_BITS

    def __post_init__(self):
        if not self.table:
            raise MeasureError("the constant table must not be empty")
        if any(not isinstance(c, int) or c < 1 for c in self.table):
            raise MeasureError("constants must be positive integers")
        if self.table[0] < 2:
            raise MeasureError("the depth-0 constant must be at least 2")
        if any(a > b for a, b in zip(self.table, self.table[1:])):
            raise MeasureError("the constant table must be nondecreasing")

    def c(self, depth: int) -> int:
        if depth >= len(self.table):
            raise MeasureError(
                f"constant table covers depths below {len(self.table)}, "
                f"a tree has depth {depth}")
        return self.table[depth]

    @classmethod
    def explicit(cls, *values: int, max_bits: int = DEFAULT_MAX_BITS
                 ) -> "MeasureContext":
        return cls(tuple(values), max_bits)

    @classmethod
    def from_recurrence(cls, order: int, type_count: int, depth: int,
                        max_bits: int = DEFAULT_MAX_BITS) -> "MeasureContext":
        """C_0 = 2 and C_{z+1} = (2t)^order * C_z^(t+1) for a size bound t.

        Any table at least this fast-growing keeps the run-length
        inequalities valid on stacks whose annotation sets stay within
        the size bound, so tests may pick t far below the full
        descriptor universe.
        """
        if order < 1 or type_count < 1 or depth < 0:
            raise MeasureError("need order >= 1, type_count >= 1, depth >= 0")
        table = [2]
        for _ in range(depth):
            table.append((2 * type_count) ** order
                         * table[-1] ** (type_count + 1))
        return cls(tuple(table), max_bits)

    @classmethod
    def for_session(cls, order: int, depth: int,
                    max_bits: int = DEFAULT_MAX_BITS) -> "MeasureContext":
        """The recurrence with the session's materialized descriptor count."""
        return cls.from_recurrence(order, max(1, universe_size(0)), depth,
                                   max_bits)


def fitted_context(stacks: Iterable[Annotated],
                   max_bits: int = DEFAULT_MAX_BITS) -> MeasureContext:
    """The smallest constant table that is admissible for these stacks.

    The recurrence of from_recurrence closes over a whole descriptor
    universe; here each depth constant only has to dominate the push
    nodes that actually occur, which keeps the towers computable for
    far more instances. Admissible means: strictly increasing, and at
    every push node the constant of the node covers (2w)^order times
    the product of its children's constants, where w bounds every
    annotation set in the given stacks.
    """
    stacks = tuple(stacks)
    if not stacks:
        raise MeasureError("need at least one stack to fit a table")
    order = stacks[0].ctx.automaton.order
    type_ctx = stacks[0].ctx
    width = 2
    trees = set()

    def scan(s) -> None:
        nonlocal width
        if isinstance(s, ACell):
            width = max(width, len(s.trees))
            for t in s.trees:
                scan_tree(t)
            return
        width = max(width, len(type_of(s)))
        for item in s.items:
            scan(item)

    def scan_tree(t) -> None:
        nonlocal width
        if t in trees:
            return
        trees.add(t)
        rd = type_ctx.rd(t)
        for i in range(rd.order + 1, rd.top_order + 1):
            width = max(width, len(rd.ass(i)))
        if isinstance(t, PushTree):
            width = max(width, len(t.others))
            scan_tree(t.child)
            for o in t.others:
                scan_tree(o)
        elif hasattr(t, "child"):
            scan_tree(t.child)

    for s in stacks:
        scan(s)

    by_depth: dict = {}
    for t in trees:
        by_depth.setdefault(tree_depth(t), []).append(t)
    top = max(by_depth) if by_depth else 0
    table = [2]
    for z in range(1, top + 1):
        need = table[z - 1] + 1
        for t in by_depth.get(z, ()):
            if not isinstance(t, PushTree):
                continue
            r = (2 * width) ** order * table[tree_depth(t.child)]
            for o in t.others:
                r *= table[tree_depth(o)]
            need = max(need, r)
        table.append(need)
    return MeasureContext(tuple(table), max_bits)


def measures(s: Annotated, ctx: MeasureContext) -> Tuple[int, int, int]:
    """The triple (low, high, len) of a well-formed annotated stack."""
    return _measure(s, ctx)


def _measure(s: Annotated, ctx: MeasureContext) -> Tuple[int, int, int]:
    if isinstance(s, ACell):
        low, high, length = 0, 1, 1
        for t in s.trees:
            c = ctx.c(tree_depth(t))
            length *= c
            if s.ctx.rd(t).productive:
                low += 1
                high *= c
        return low, high, length
    if not s.items:
        return 0, 1, 1
    prefix = AStack(s.order, s.items[:-1], s.ctx)
    u = s.items[-1]
    low, high, length = 0, 1, 1
    for d in sorted(type_of(u), key=lambda d: d.uid):
        below = frozenset(x for _, x in d.ass(s.order))
        la, ha, na = _measure(restrict_loose(prefix, below), ctx)
        lb, hb, nb = _measure(restrict_loose(u, frozenset((d,))), ctx)
        low += la + lb
        high *= pow((ha, hb), ctx.max_bits)
        length *= pow((na, nb), ctx.max_bits)
        if max(high.bit_length(), length.bit_length()) > ctx.max_bits:
            raise MeasureOverflow(
                f"measure value needs more than {ctx.max_bits} bits")
    return low, high, length
