"""Composers: how assumption sets of stacked segments fit together.

A composer (Phi^k, ..., Phi^l; Psi^k; f) certifies that annotated
segments of orders l..k with types pi2(Phi^i) can be stacked into one
order-k segment of type pi2(Psi^k). The base set Phi^l determines every
other coordinate, so the constructor takes just the base and the target
order and checks the one condition that can fail: reduction to order k
must stay injective on the base descriptors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

from .descriptors import PairSet, compose, pair_set, red

__all__ = ["Composer", "ComposerError", "composer_from_base", "is_composer",
           "split_composer"]


class ComposerError(ValueError):
    pass


@dataclass(frozen=True)
class Composer:
    """(phis[0], ..., phis[-1]; psi; f) with phis highest order first."""

    low: int
    high: int
    phis: Tuple[PairSet, ...]
    psi: PairSet
    productive: bool

    def phi(self, i: int) -> PairSet:
        if not self.low <= i <= self.high:
            raise ValueError(f"no level {i} in a composer for orders "
                             f"{self.low}..{self.high}")
        return self.phis[self.high - i]

    @property
    def flag(self) -> str:
        return "pr" if self.productive else "np"


def _distinct(pairs: PairSet):
    seen = {}
    for _, d in pairs:
        seen[d.uid] = d
    return tuple(seen.values())


def composer_from_base(spec, phi_l: Iterable, k: int,
                       low: int | None = None) -> Composer:
    """Build the unique composer with base set phi_l and top order k.

    ``low`` is inferred from the base descriptors and is only needed
    when the base is empty. Raises ComposerError when two base
    descriptors reduce to the same order-k descriptor.
    """
    base = pair_set(phi_l)
    if base:
        orders = {d.order for _, d in base}
        if len(orders) != 1:
            raise ComposerError(f"base descriptors of mixed orders {sorted(orders)}")
        found = orders.pop()
        if low is not None and low != found:
            raise ComposerError(f"base has order {found}, not {low}")
        low = found
        tops = {d.top_order for _, d in base}
        if len(tops) != 1:
            raise ComposerError("base descriptors of mixed top orders")
        if k > tops.pop():
            raise ComposerError(
                f"order {k} exceeds the base descriptors' slot range")
    elif low is None:
        raise ComposerError("empty base needs an explicit low order")
    if not 0 <= low <= k:
        raise ComposerError(f"need low <= k, got orders {low}..{k}")

    phis = {low: base}
    for i in range(low + 1, k + 1):
        acc = []
        for m, d in base:
            acc.extend(compose(spec, m, d.ass(i)))
        phis[i] = pair_set(acc)

    psi = pair_set((m, red(k, d)) for m, d in base)
    base_descs = _distinct(base)
    if len(_distinct(psi)) != len(base_descs):
        images = {}
        for d in base_descs:
            images.setdefault(red(k, d).uid, []).append(d)
        clash = next(ds for ds in images.values() if len(ds) > 1)
        raise ComposerError(
            f"distinct base descriptors reduce to the same order-{k} "
            f"descriptor: {clash[0]} and {clash[1]}")

    productive = False
    for a in range(len(base_descs)):
        for b in range(a + 1, len(base_descs)):
            s, t = base_descs[a], base_descs[b]
            for i in range(low + 1, k + 1):
                shared = ({d.uid for _, d in s.ass(i)}
                          & {d.uid for _, d in t.ass(i)})
                if any(d.uid in shared and d.productive
                       for _, d in s.ass(i)):
                    productive = True
    return Composer(low, k, tuple(phis[i] for i in range(k, low - 1, -1)),
                    psi, productive)


def is_composer(spec, c: Composer) -> bool:
    """Check a fully given tuple against the composer conditions."""
    if len(c.phis) != c.high - c.low + 1:
        return False
    try:
        built = composer_from_base(spec, c.phi(c.low), c.high, low=c.low)
    except ComposerError:
        return False
    return (built.productive == c.productive
            and set(built.psi) == set(c.psi)
            and all(set(built.phi(i)) == set(c.phi(i))
                    for i in range(c.low, c.high + 1)))


def split_composer(spec, c: Composer, j: int) -> Tuple[Composer, Composer]:
    """Factor c at level j into an upper and a lower composer.

    The lower composer stacks orders low..j, the upper stacks its
    result with the remaining levels j..high, and c is productive if
    and only if either part is.
    """
    if not c.low <= j <= c.high:
        raise ValueError(f"split level {j} outside {c.low}..{c.high}")
    lower = composer_from_base(spec, c.phi(c.low), j, low=c.low)
    upper = composer_from_base(spec, lower.psi, c.high, low=j)
    return upper, lower
