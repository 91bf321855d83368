"""Annotated stacks: positionless stacks whose cells carry derivation trees.

A context pins the automaton, the morphism into a finite monoid, and
the distinguished productive input letter; every annotated value keeps
a reference to its context so that types, well-formedness and the
successor step need no extra arguments. Context identity is excluded
from equality, which stays purely structural.

The successor of a singular well-formed stack follows the top cell's
single tree: an empty tree halts, a read tree swaps in its child, a pop
tree discards the top segments, and a push tree duplicates the top
order-k segment, splitting the annotations between the old copy (the
composer's levels) and the new top (the child's assumptions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple, Union

from ..automata import (Automaton, Configuration, Halt, Run, StepWitness,
                        step as automaton_step)
from ..monoids import Morphism
from ..stacks import from_symbols, positionless
from .descriptors import RunDescriptor, red
from .trees import (Checked, DerivationTree, EmptyTree, PopTree, PushTree,
                    ReadTree, TreeError, check_tree_full)

__all__ = [
    "TypeContext", "ACell", "AStack", "Annotated",
    "TypesysError", "CapExceeded", "WfReport", "AnnotatedRun",
    "st", "type_of", "is_singular", "top_cell", "conf",
    "well_formed", "well_formed_report", "stack_from_segments",
    "restrict", "merge", "successor", "annotated_run", "stack_to_json",
]


class TypesysError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """An annotated run needed more successor steps than the cap allows."""


class TypeContext:
    """Shared setting: automaton, morphism, productive letter, caches."""

    def __init__(self, automaton: Automaton, morphism: Morphism,
                 productive_letter: str = "#"):
        if automaton.mode != "plain":
            raise TypesysError("annotated stacks cover plain automata only")
        missing = [x for x in automaton.input_alphabet
                   if x not in morphism.alphabet]
        if missing:
            raise TypesysError(
                f"morphism lacks input letters {sorted(missing)}")
        self.automaton = automaton
        self.morphism = morphism
        self.productive_letter = productive_letter
        self._checked: dict = {}
        self._types: dict = {}

    def checked(self, t: DerivationTree) -> Checked:
        return check_tree_full(self.automaton, self.morphism, t,
                               self.productive_letter, memo=self._checked)

    def rd(self, t: DerivationTree) -> RunDescriptor:
        return self.checked(t).rd

    def cell(self, symbol: str, trees: Iterable[DerivationTree] = ()) -> "ACell":
        canon = tuple(sorted({t.uid: t for t in trees}.values(),
                             key=lambda t: t.uid))
        return ACell(symbol, canon, self)

    def stack(self, order: int, items: Iterable["Annotated"]) -> "AStack":
        got = tuple(items)
        if order < 1:
            raise TypesysError("stack order must be at least 1")
        for x in got:
            if _order_of(x) != order - 1:
                raise TypesysError(
                    f"an order-{order} stack holds order-{order - 1} items, "
                    f"got order {_order_of(x)}")
            if x.ctx is not self:
                raise TypesysError("items built in a different context")
        return AStack(order, got, self)


@dataclass(frozen=True)
class ACell:
    symbol: str
    trees: Tuple[DerivationTree, ...]
    ctx: TypeContext = field(compare=False, repr=False)


@dataclass(frozen=True)
class AStack:
    order: int
    items: Tuple["Annotated", ...]
    ctx: TypeContext = field(compare=False, repr=False)


Annotated = Union[ACell, AStack]


def _order_of(s: Annotated) -> int:
    return 0 if isinstance(s, ACell) else s.order


def st(s: Annotated):
    """Forget annotations: the underlying positionless stack."""
    if isinstance(s, ACell):
        return s.symbol
    return tuple(st(x) for x in s.items)


def type_of(s: Annotated) -> frozenset:
    """Descriptors certified for s, read off the topmost branch."""
    memo = s.ctx._types
    got = memo.get(s)
    if got is not None:
        return got
    if isinstance(s, ACell):
        out = frozenset(s.ctx.rd(t) for t in s.trees)
    elif not s.items:
        out = frozenset()
    else:
        out = frozenset(red(s.order, d) for d in type_of(s.items[-1]))
    memo[s] = out
    return out


def is_singular(s: Annotated) -> bool:
    return len(type_of(s)) == 1


def top_cell(s: Annotated) -> ACell:
    while isinstance(s, AStack):
        if not s.items:
            raise TypesysError("no top cell in an empty stack")
        s = s.items[-1]
    return s


def conf(s: AStack) -> Configuration:
    """The configuration a singular stack stands at."""
    tp = type_of(s)
    if len(tp) != 1:
        raise TypesysError(f"stack is not singular: type has {len(tp)} "
                           f"descriptors")
    (d,) = tp
    return Configuration(d.state, from_symbols(s.order, st(s)))


@dataclass(frozen=True)
class WfReport:
    ok: bool
    reason: Optional[str] = None
    where: Optional[str] = None

    def __bool__(self):
        return self.ok


def well_formed_report(s: Annotated, _where: str = "top") -> WfReport:
    """Check well-formedness; on failure say what broke and where."""
    if isinstance(s, ACell):
        seen = {}
        for t in s.trees:
            try:
                c = s.ctx.checked(t)
            except TreeError as err:
                return WfReport(False, f"invalid-tree: {err}", _where)
            if c.symbol != s.symbol:
                return WfReport(
                    False, f"symbol-mismatch: tree for {c.symbol!r} "
                    f"annotates a cell holding {s.symbol!r}", _where)
            if c.rd in seen:
                return WfReport(
                    False, f"duplicate-descriptor: two trees certify "
                    f"{c.rd}", _where)
            seen[c.rd] = t
        return WfReport(True)
    if not s.items:
        return WfReport(True)
    prefix = AStack(s.order, s.items[:-1], s.ctx)
    u = s.items[-1]
    for part, wh in ((prefix, _where + " / prefix"),
                     (u, _where + f" / item {len(s.items)}")):
        rep = well_formed_report(part, wh)
        if not rep.ok:
            return rep
    required = frozenset()
    for d in type_of(u):
        required |= frozenset(x for _, x in d.ass(s.order))
    actual = type_of(prefix)
    if actual != required:
        missing = required - actual
        spare = actual - required
        if missing and not spare:
            return WfReport(
                False, f"missing-annotations: the prefix lacks "
                f"{sorted(map(str, missing))}", _where)
        if spare and not missing:
            return WfReport(
                False, f"spare-annotations: the prefix certifies unneeded "
                f"{sorted(map(str, spare))}", _where)
        return WfReport(
            False, f"annotation-mismatch: prefix provides "
            f"{sorted(map(str, spare))} instead of "
            f"{sorted(map(str, missing))}", _where)
    if len(type_of(s)) != len(type_of(u)):
        return WfReport(
            False, "reduction-collapse: distinct descriptors of the top "
            "item reduce to the same descriptor", _where)
    return WfReport(True)


def well_formed(s: Annotated) -> bool:
    return well_formed_report(s).ok


def stack_from_segments(segments) -> Annotated:
    """Assemble s^k : s^{k-1} : ... : s^l from its segments.

    Segments come highest order first, each an order-i stack used as the
    prefix at its level; the last may be a cell.
    """
    segs = list(segments)
    if not segs:
        raise TypesysError("no segments")
    for a, b in zip(segs, segs[1:]):
        if _order_of(a) != _order_of(b) + 1:
            raise TypesysError("segment orders must descend one by one")
        if isinstance(a, ACell):
            raise TypesysError("only the last segment may be a cell")
    cur = segs[-1]
    for seg in segs[-2::-1]:
        cur = AStack(seg.order, seg.items + (cur,), seg.ctx)
    return cur


def _spine(s: AStack):
    """Split s into prefix segments of orders n..1 plus the top cell."""
    segments = {}
    cur: Annotated = s
    while isinstance(cur, AStack):
        if not cur.items:
            raise TypesysError("no top cell in an empty stack")
        segments[cur.order] = AStack(cur.order, cur.items[:-1], cur.ctx)
        cur = cur.items[-1]
    return segments, cur


def _restrict(s: Annotated, want: frozenset, check: bool) -> Annotated:
    if isinstance(s, ACell):
        if check:
            have = type_of(s)
            if want - have:
                raise TypesysError(
                    f"cannot keep {sorted(map(str, want - have))}: not in "
                    f"the cell's type")
        keep = tuple(t for t in s.trees if s.ctx.rd(t) in want)
        return ACell(s.symbol, keep, s.ctx)
    if not s.items:
        if check and want:
            raise TypesysError("cannot keep descriptors in an empty stack")
        return s
    u = s.items[-1]
    phi = frozenset(d for d in type_of(u) if red(s.order, d) in want)
    if check and want - frozenset(red(s.order, d) for d in phi):
        raise TypesysError(
            f"cannot keep descriptors outside the stack's type")
    below = frozenset()
    for d in phi:
        below |= frozenset(x for _, x in d.ass(s.order))
    prefix = _restrict(AStack(s.order, s.items[:-1], s.ctx), below, check)
    return AStack(s.order, prefix.items + (_restrict(u, phi, check),), s.ctx)


def restrict(s: Annotated, want) -> Annotated:
    """Drop annotations so that exactly the descriptors in want remain.

    Requires want to be a subset of type_of(s); the result of
    restricting a well-formed stack is well-formed with type want.
    """
    return _restrict(s, frozenset(want), check=True)


def restrict_loose(s: Annotated, want) -> Annotated:
    """Like restrict, but descriptors outside the type select nothing."""
    return _restrict(s, frozenset(want), check=False)


def merge(s: Annotated, t: Annotated) -> Annotated:
    """Union of two annotations of the same underlying stack.

    Both arguments must be well-formed; the result is well-formed with
    type type_of(s) | type_of(t).
    """
    if s.ctx is not t.ctx:
        raise TypesysError("cannot merge annotations from different contexts")
    if st(s) != st(t):
        raise TypesysError("cannot merge annotations of different stacks")
    return _merge(s, t)


def _merge(s: Annotated, t: Annotated) -> Annotated:
    extra = type_of(t) - type_of(s)
    tr = _restrict(t, extra, check=True)
    if isinstance(s, ACell):
        return s.ctx.cell(s.symbol, s.trees + tr.trees)
    if not s.items:
        return s
    k = s.order
    merged_prefix = _merge(AStack(k, s.items[:-1], s.ctx),
                           AStack(k, tr.items[:-1], tr.ctx))
    merged_top = _merge(s.items[-1], tr.items[-1])
    return AStack(k, merged_prefix.items + (merged_top,), s.ctx)


def _successor(s: AStack):
    """One annotated step; returns (stack, witness) or None at an empty tree."""
    ctx = s.ctx
    segments, cell = _spine(s)
    if len(cell.trees) != 1:
        raise TypesysError("top cell must carry exactly one tree")
    (d,) = cell.trees
    checked = ctx.checked(d)
    n = s.order

    def assemble(low: int, cur: Annotated) -> AStack:
        for j in range(low, n + 1):
            cur = AStack(j, segments[j].items + (cur,), ctx)
        return cur

    if isinstance(d, EmptyTree):
        return None

    if isinstance(d, ReadTree):
        trans = ctx.automaton.delta[(d.state, cell.symbol)]
        child_rd = ctx.rd(d.child)
        letter = next(x for x, q in trans.mapping if q == child_rd.state)
        nxt = assemble(1, ACell(cell.symbol, (d.child,), ctx))
        return nxt, StepWitness(letter, None)

    if isinstance(d, PopTree):
        k = d.assumption.order
        if not segments[k].items:
            raise TypesysError("pop from an exhausted segment")
        cur: Annotated = segments[k]
        for j in range(k + 1, n + 1):
            cur = AStack(j, segments[j].items + (cur,), ctx)
        op = ctx.automaton.delta[(d.state, cell.symbol)].op
        return cur, StepWitness(None, op)

    if isinstance(d, PushTree):
        info = checked.push
        k, comp, tau = info.k, info.composer, info.child_rd
        old: Annotated = ACell(cell.symbol, d.others, ctx)
        for j in range(1, k):
            pref = _restrict(segments[j],
                             frozenset(x for _, x in comp.phi(j)), True)
            old = AStack(j, pref.items + (old,), ctx)
        pref_k = _restrict(segments[k],
                           frozenset(x for _, x in comp.phi(k)), True)
        tk = AStack(k, pref_k.items + (old,), ctx)
        new: Annotated = ACell(info.new_symbol, (d.child,), ctx)
        for j in range(1, k):
            pref = _restrict(segments[j],
                             frozenset(x for _, x in tau.ass(j)), True)
            new = AStack(j, pref.items + (new,), ctx)
        lvl_k = AStack(k, tk.items + (new,), ctx)
        op = ctx.automaton.delta[(d.state, cell.symbol)].op
        return assemble(k + 1, lvl_k), StepWitness(None, op)

    raise TypesysError(f"top cell carries a non-tree {d!r}")


def successor(a: Automaton, m: Morphism, s: AStack) -> Optional[AStack]:
    """The next annotated stack, or None when the top tree is (empty, ...)."""
    if a is not s.ctx.automaton or m is not s.ctx.morphism:
        raise TypesysError("stack was built for a different automaton or "
                           "morphism")
    got = _successor(s)
    return None if got is None else got[0]


@dataclass(frozen=True)
class AnnotatedRun:
    """A maximal chain of successors with its projection to a plain run."""
    stacks: Tuple[AStack, ...]
    run: Run

    def __len__(self):
        return len(self.stacks) - 1


def annotated_run(a: Automaton, m: Morphism, s: AStack,
                  cap: int = 10_000) -> AnnotatedRun:
    """Iterate successor from s until it halts, checking each projected step.

    Raises CapExceeded when the chain does not halt within cap steps.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    if a is not s.ctx.automaton or m is not s.ctx.morphism:
        raise TypesysError("stack was built for a different automaton or "
                           "morphism")
    stacks = [s]
    confs = [conf(s)]
    steps = []
    cur = s
    while True:
        got = _successor(cur)
        if got is None:
            break
        if len(steps) >= cap:
            raise CapExceeded(
                f"annotated run exceeds {cap} steps from {st(s)!r}")
        nxt, witness = got
        replay = automaton_step(a, confs[-1], witness.letter)
        if isinstance(replay, Halt):
            raise TypesysError(
                f"automaton halts ({replay.reason}) where the annotated "
                f"stack still steps")
        new_conf, _ = replay
        want_conf = conf(nxt)
        if (new_conf.state != want_conf.state
                or positionless(new_conf.stack) != st(nxt)):
            raise TypesysError("successor disagrees with the automaton step")
        stacks.append(nxt)
        confs.append(new_conf)
        steps.append(witness)
        cur = nxt
    return AnnotatedRun(tuple(stacks), Run(tuple(confs), tuple(steps)))


def stack_to_json(s: Annotated) -> dict:
    """Nested arrays of (symbol, tree ids) plus a table of tree terms."""
    table: dict = {}
    ids: dict = {}

    def walk(x):
        if isinstance(x, ACell):
            refs = []
            for t in x.trees:
                if t.uid not in ids:
                    ids[t.uid] = len(ids)
                    table[ids[t.uid]] = t.to_sexpr()
                refs.append(ids[t.uid])
            return [x.symbol, refs]
        return [walk(i) for i in x.items]

    body = walk(s)
    return {"order": _order_of(s), "stack": body,
            "trees": [{"id": i, "tree": table[i]} for i in sorted(table)]}
