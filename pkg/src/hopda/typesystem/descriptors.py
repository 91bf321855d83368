"""Run descriptors: behavioural types for cells of higher-order stacks.

A descriptor of order k pairs a control state with one assumption set
per order from the top order n down to k+1, plus a productivity flag.
An assumption set holds (monoid element, descriptor) pairs whose
descriptors have the order the slot is for, so nesting is well founded:
order-n descriptors carry no assumption sets at all.

Descriptors are immutable and interned: structurally equal descriptors
are the same object, equality is identity, and the canonical ordering
of assumption pairs uses the interning id. All interning goes through
one lock, so descriptors may be built from several threads.
"""

from __future__ import annotations

import itertools
import threading
from collections.abc import Hashable
from typing import Iterable, Tuple

__all__ = [
    "RunDescriptor",
    "Pair",
    "PairSet",
    "descriptor",
    "pair_set",
    "red",
    "compose",
    "universe_size",
]

Pair = Tuple[str, "RunDescriptor"]
PairSet = Tuple[Pair, ...]


class RunDescriptor:
    """An order-k descriptor (state, ass^n, ..., ass^{k+1}, flag).

    ``assumptions`` stores the slots highest order first, one canonical
    pair tuple per order from ``top_order`` down to ``order + 1``.
    ``productive`` is True for the pr flag and False for np.
    """

    __slots__ = ("state", "order", "assumptions", "productive", "uid")

    def __init__(self, state: str, order: int, assumptions: Tuple[PairSet, ...],
                 productive: bool, uid: int):
        self.state = state
        self.order = order
        self.assumptions = assumptions
        self.productive = productive
        self.uid = uid

    @property
    def top_order(self) -> int:
        return self.order + len(self.assumptions)

    @property
    def flag(self) -> str:
        return "pr" if self.productive else "np"

    def ass(self, i: int) -> PairSet:
        """Assumption set for order i, for order < i <= top_order."""
        if not self.order < i <= self.top_order:
            raise ValueError(
                f"descriptor of order {self.order} has no assumption set "
                f"for order {i}")
        return self.assumptions[self.top_order - i]

    def to_sexpr(self) -> str:
        parts = [f"(rd {self.state} {self.order} {self.flag}"]
        for j, pairs in enumerate(self.assumptions):
            inner = "".join(
                f" ({m} {d.to_sexpr()})" for m, d in pairs)
            parts.append(f" (ass {self.top_order - j}{inner})")
        return "".join(parts) + ")"

    def __repr__(self) -> str:
        return self.to_sexpr()


_lock = threading.Lock()
_interned: dict = {}
_uids = itertools.count()


def pair_set(pairs: Iterable[Pair]) -> PairSet:
    """Canonical form of a set of (element, descriptor) pairs."""
    seen = set()
    out = []
    for m, d in pairs:
        if not isinstance(m, Hashable):
            raise TypeError(f"monoid element label must be hashable, got {m!r}")
        if not isinstance(d, RunDescriptor):
            raise TypeError(f"expected a RunDescriptor, got {d!r}")
        key = (m, d.uid)
        if key not in seen:
            seen.add(key)
            out.append((m, d))
    # labels need not be mutually comparable, so order by their text form
    out.sort(key=lambda p: (type(p[0]).__name__, str(p[0]), p[1].uid))
    return tuple(out)


def descriptor(state: str, order: int,
               assumptions: Iterable[Iterable[Pair]] = (),
               productive: bool = False) -> RunDescriptor:
    """Intern the descriptor (state, assumption slots highest first, flag)."""
    if order < 0:
        raise ValueError("descriptor order must be nonnegative")
    slots = tuple(pair_set(ps) for ps in assumptions)
    top = order + len(slots)
    for j, pairs in enumerate(slots):
        want = top - j
        for _, child in pairs:
            if child.order != want:
                raise ValueError(
                    f"assumption set for order {want} holds a descriptor "
                    f"of order {child.order}")
            if child.top_order != top:
                raise ValueError(
                    f"assumption descriptor has top order {child.top_order}, "
                    f"expected {top}")
    key = (state, order, bool(productive),
           tuple(tuple((m, d.uid) for m, d in ps) for ps in slots))
    with _lock:
        found = _interned.get(key)
        if found is None:
            found = RunDescriptor(state, order, slots, bool(productive),
                                  next(_uids))
            _interned[key] = found
        return found


def red(k: int, d: RunDescriptor) -> RunDescriptor:
    """Reduce d to order k, dropping assumption sets for orders <= k.

    The result is productive when d is, or when any dropped pair holds
    a productive descriptor.
    """
    if not d.order <= k <= d.top_order:
        raise ValueError(
            f"cannot reduce an order-{d.order} descriptor with top order "
            f"{d.top_order} to order {k}")
    if k == d.order:
        return d
    keep = d.top_order - k
    dropped = d.assumptions[keep:]
    productive = d.productive or any(
        child.productive for ps in dropped for _, child in ps)
    return descriptor(d.state, k, d.assumptions[:keep], productive)


def compose(spec, m: str, pairs: Iterable[Pair]) -> PairSet:
    """Left-multiply every element of a pair set: m o psi."""
    return pair_set((spec.mult(m, m2), d) for m2, d in pairs)


def universe_size(order: int | None = None) -> int:
    """Number of descriptors interned so far, optionally of one order."""
    with _lock:
        if order is None:
            return len(_interned)
        return sum(1 for d in _interned.values() if d.order == order)
