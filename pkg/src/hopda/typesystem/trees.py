"""Derivation trees: checkable certificates that a cell admits a descriptor.

A tree is one of four shapes. Leaves either promise nothing (empty) or
borrow an assumption (pop); inner nodes consume a read transition or a
push transition. Checking a tree against an automaton and a morphism
into a finite monoid either returns its unique conclusion, a judgment
``symbol |- descriptor``, or raises TreeError pinpointing the broken
side condition.

Trees are interned like descriptors, so equality is identity and sets
of trees order canonically by uid.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Optional, Tuple

from ..automata import Automaton, OpStep, Read
from ..monoids import Morphism
from ..stacks import Pop, Push
from .composers import Composer, ComposerError, composer_from_base
from .descriptors import RunDescriptor, compose, descriptor, pair_set, red

__all__ = [
    "DerivationTree", "EmptyTree", "ReadTree", "PopTree", "PushTree",
    "TreeError", "Checked", "PushInfo",
    "empty_tree", "read_tree", "pop_tree", "push_tree",
    "tree_depth", "tree_symbol", "check_tree", "check_tree_full",
]


class TreeError(ValueError):
    pass


class DerivationTree:
    __slots__ = ("uid",)

    def to_sexpr(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.to_sexpr()


class EmptyTree(DerivationTree):
    __slots__ = ("symbol", "state")

    def __init__(self, symbol, state, uid):
        self.symbol = symbol
        self.state = state
        self.uid = uid

    def to_sexpr(self):
        return f"(empty {self.symbol} {self.state})"


class ReadTree(DerivationTree):
    __slots__ = ("state", "child")

    def __init__(self, state, child, uid):
        self.state = state
        self.child = child
        self.uid = uid

    def to_sexpr(self):
        return f"(read {self.state} {self.child.to_sexpr()})"


class PopTree(DerivationTree):
    __slots__ = ("symbol", "state", "assumption")

    def __init__(self, symbol, state, assumption, uid):
        self.symbol = symbol
        self.state = state
        self.assumption = assumption
        self.uid = uid

    def to_sexpr(self):
        return f"(pop {self.symbol} {self.state} {self.assumption.to_sexpr()})"


class PushTree(DerivationTree):
    __slots__ = ("symbol", "state", "child", "others")

    def __init__(self, symbol, state, child, others, uid):
        self.symbol = symbol
        self.state = state
        self.child = child
        self.others = others
        self.uid = uid

    def to_sexpr(self):
        inner = "".join(" " + e.to_sexpr() for e in self.others)
        return (f"(push {self.symbol} {self.state} "
                f"{self.child.to_sexpr()} (others{inner}))")


_lock = threading.Lock()
_interned: dict = {}
_uids = itertools.count()
_depths: dict = {}


def _intern(key, build):
    with _lock:
        found = _interned.get(key)
        if found is None:
            found = build(next(_uids))
            _interned[key] = found
        return found


def empty_tree(symbol: str, state: str) -> EmptyTree:
    return _intern(("empty", symbol, state),
                   lambda u: EmptyTree(symbol, state, u))


def read_tree(state: str, child: DerivationTree) -> ReadTree:
    return _intern(("read", state, child.uid),
                   lambda u: ReadTree(state, child, u))


def pop_tree(symbol: str, state: str, assumption: RunDescriptor) -> PopTree:
    if assumption.order < 1:
        raise TreeError("a pop tree borrows a descriptor of order >= 1")
    return _intern(("pop", symbol, state, assumption.uid),
                   lambda u: PopTree(symbol, state, assumption, u))


def push_tree(symbol: str, state: str, child: DerivationTree,
              others=()) -> PushTree:
    canon = tuple(sorted({e.uid: e for e in others}.values(),
                         key=lambda e: e.uid))
    key = ("push", symbol, state, child.uid, tuple(e.uid for e in canon))
    return _intern(key, lambda u: PushTree(symbol, state, child, canon, u))


def tree_depth(t: DerivationTree) -> int:
    """Leaves have depth 0; inner nodes one more than their deepest child."""
    got = _depths.get(t.uid)
    if got is not None:
        return got
    if isinstance(t, (EmptyTree, PopTree)):
        d = 0
    elif isinstance(t, ReadTree):
        d = 1 + tree_depth(t.child)
    else:
        d = 1 + max(tree_depth(t.child),
                    max((tree_depth(e) for e in t.others), default=0))
    _depths[t.uid] = d
    return d


def tree_symbol(t: DerivationTree) -> str:
    """The stack symbol a tree annotates, read off the syntax."""
    while isinstance(t, ReadTree):
        t = t.child
    return t.symbol


@dataclass(frozen=True)
class PushInfo:
    """What the push case established, kept for the successor step."""
    k: int
    new_symbol: str
    child_rd: RunDescriptor
    composer: Composer


@dataclass(frozen=True)
class Checked:
    symbol: str
    rd: RunDescriptor
    push: Optional[PushInfo] = None


def check_tree_full(a: Automaton, m: Morphism, t: DerivationTree,
                    productive_letter: str = "#",
                    memo: Optional[dict] = None) -> Checked:
    """Validate t and return its conclusion plus push-case details."""
    if a.mode != "plain":
        raise TreeError("derivation trees cover plain automata only")
    if memo is None:
        memo = {}
    return _check(a, m, t, productive_letter, memo)


def check_tree(a: Automaton, m: Morphism, t: DerivationTree,
               productive_letter: str = "#",
               memo: Optional[dict] = None) -> Tuple[str, RunDescriptor]:
    """Validate t; return the judgment (symbol, descriptor) it concludes."""
    full = check_tree_full(a, m, t, productive_letter, memo)
    return full.symbol, full.rd


def _empty_slots(n: int) -> Tuple[Tuple, ...]:
    return ((),) * n


def _check(a, m, t, pletter, memo) -> Checked:
    got = memo.get(t.uid)
    if got is not None:
        return got
    n = a.order
    spec = m.monoid

    if isinstance(t, EmptyTree):
        if t.symbol not in a.stack_alphabet:
            raise TreeError(f"unknown stack symbol {t.symbol!r}")
        if t.state not in a.states:
            raise TreeError(f"unknown state {t.state!r}")
        out = Checked(t.symbol, descriptor(t.state, 0, _empty_slots(n), False))

    elif isinstance(t, ReadTree):
        child = _check(a, m, t.child, pletter, memo)
        trans = a.delta.get((t.state, child.symbol))
        if not isinstance(trans, Read):
            raise TreeError(
                f"state {t.state!r} does not read on {child.symbol!r}")
        letters = [x for x, q in trans.mapping if q == child.rd.state]
        if not letters:
            raise TreeError(
                f"no input letter leads from {t.state!r} to the child "
                f"state {child.rd.state!r}")
        letter = letters[0]
        img = m.eval(letter)
        slots = tuple(compose(spec, img, child.rd.ass(i))
                      for i in range(n, 0, -1))
        productive = child.rd.productive or letter == pletter
        out = Checked(child.symbol,
                      descriptor(t.state, 0, slots, productive))

    elif isinstance(t, PopTree):
        trans = a.delta.get((t.state, t.symbol))
        if not (isinstance(trans, OpStep) and isinstance(trans.op, Pop)):
            raise TreeError(
                f"state {t.state!r} on {t.symbol!r} is not a pop")
        k = trans.op.k
        tau = t.assumption
        if tau.order != k:
            raise TreeError(
                f"borrowed descriptor has order {tau.order}, the pop "
                f"removes order {k}")
        if tau.top_order != n:
            raise TreeError(
                f"borrowed descriptor has top order {tau.top_order}, "
                f"automaton has order {n}")
        if tau.state != trans.state:
            raise TreeError(
                f"borrowed descriptor is for state {tau.state!r}, the pop "
                f"continues in {trans.state!r}")
        slots = (tuple(tau.ass(i) for i in range(n, k, -1))
                 + (((spec.identity_element, tau),),)
                 + _empty_slots(k - 1))
        out = Checked(t.symbol, descriptor(t.state, 0, slots, False))

    elif isinstance(t, PushTree):
        trans = a.delta.get((t.state, t.symbol))
        if not (isinstance(trans, OpStep) and isinstance(trans.op, Push)):
            raise TreeError(
                f"state {t.state!r} on {t.symbol!r} is not a push")
        k, alpha = trans.op.k, trans.op.symbol
        child = _check(a, m, t.child, pletter, memo)
        if child.symbol != alpha:
            raise TreeError(
                f"push writes {alpha!r} but the child tree is for "
                f"{child.symbol!r}")
        tau = child.rd
        if tau.state != trans.state:
            raise TreeError(
                f"child descriptor is for state {tau.state!r}, the push "
                f"continues in {trans.state!r}")
        rds = []
        for e in t.others:
            ce = _check(a, m, e, pletter, memo)
            if ce.symbol != t.symbol:
                raise TreeError(
                    f"annotation tree is for symbol {ce.symbol!r}, "
                    f"cell holds {t.symbol!r}")
            rds.append(ce.rd)
        if len({d.uid for d in rds}) != len(rds):
            raise TreeError(
                "two annotation trees certify the same descriptor")
        psi_k = tau.ass(k)
        psi_lookup = {}
        for elem, xi in psi_k:
            psi_lookup.setdefault(xi.uid, []).append(elem)
        phi0 = []
        for rho in rds:
            elems = psi_lookup.get(red(k, rho).uid)
            if not elems:
                raise TreeError(
                    f"annotation descriptor {rho} is not justified by the "
                    f"child's order-{k} assumptions")
            phi0.extend((elem, rho) for elem in elems)
        try:
            comp = composer_from_base(spec, phi0, k, low=0)
        except ComposerError as err:
            raise TreeError(str(err)) from err
        if set(comp.psi) != set(psi_k):
            missing = set(psi_k) - set(comp.psi)
            raise TreeError(
                f"child assumption pairs {sorted(missing)} have no "
                f"annotation tree")
        slots = (tuple(tau.ass(i) for i in range(n, k, -1))
                 + (comp.phi(k),)
                 + tuple(pair_set(tau.ass(i) + comp.phi(i))
                         for i in range(k - 1, 0, -1)))
        productive = (comp.productive or tau.productive
                      or any(rho.productive for rho in rds))
        if not productive:
            for i in range(1, k):
                tau_descs = {d.uid for _, d in tau.ass(i)}
                if any(d.uid in tau_descs and d.productive
                       for _, d in comp.phi(i)):
                    productive = True
                    break
        out = Checked(t.symbol, descriptor(t.state, 0, slots, productive),
                      PushInfo(k, alpha, tau, comp))

    else:
        raise TreeError(f"not a derivation tree: {t!r}")

    memo[t.uid] = out
    return out
