"""Budgeted search for derivable judgments and configuration types.

The derivation rules are monotone, so iterating them to a fixpoint over
a growing but capped universe of descriptors yields a sound
under-approximation of the derivable judgments: every reported judgment
carries a witness tree that passes the checker. Pop leaves may borrow
any descriptor already seen or explicitly declared; push nodes choose,
for every order-k assumption of the child, one annotation tree whose
conclusion reduces to it.

Configuration typing assembles well-formed singular annotated stacks
over a concrete stack bottom-up from the derived judgments. A singular
stack splits into independent per-order prefixes, each owing exactly
the corresponding assumption set of the top descriptor, so the solver
picks one provider per required descriptor and recurses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple

from ..automata import Automaton, Configuration, OpStep, Read
from ..monoids import Morphism
from ..stacks import Pop, positionless
from .annotated import TypeContext, stack_from_segments, well_formed
from .descriptors import RunDescriptor, red
from .trees import (DerivationTree, TreeError, check_tree, empty_tree,
                    pop_tree, push_tree, read_tree, tree_depth)

__all__ = ["DerivBudget", "UniverseCap", "Judgments", "derive_judgments",
           "BudgetedTypes", "TypingSession", "types_of_configuration"]


class UniverseCap(RuntimeError):
    """The budgeted search materialized more descriptors than allowed."""


@dataclass(frozen=True)
class DerivBudget:
    """Caps for the fixpoint search.

    max_card bounds every assumption-set size, max_depth the witness
    tree depth, max_universe the number of distinct descriptors the
    search may materialize. declared seeds extra descriptors that pop
    leaves may borrow even though no tree concludes them.
    """
    max_card: int = 2
    max_depth: int = 3
    max_universe: int = 4000
    declared: Tuple[RunDescriptor, ...] = ()


@dataclass(frozen=True)
class Judgments:
    """Derived judgments with one witness tree each, plus the budget."""
    budget: DerivBudget
    witnesses: Dict[Tuple[str, RunDescriptor], DerivationTree] = field(
        default_factory=dict)

    @property
    def judgments(self) -> FrozenSet[Tuple[str, RunDescriptor]]:
        return frozenset(self.witnesses)

    def __contains__(self, judgment) -> bool:
        return judgment in self.witnesses

    def __len__(self):
        return len(self.witnesses)


def _fits(d: RunDescriptor, max_card: int) -> bool:
    return all(len(ps) <= max_card for ps in d.assumptions)


def derive_judgments(a: Automaton, m: Morphism, budget: DerivBudget,
                     productive_letter: str = "#") -> Judgments:
    """All judgments derivable within the budget, with witness trees."""
    if a.mode != "plain":
        raise TreeError("judgment derivation covers plain automata only")
    memo: dict = {}
    out = Judgments(budget)
    witnesses = out.witnesses
    borrowable: set = set()

    def note_borrowable(d: RunDescriptor):
        for k in range(d.order, d.top_order + 1):
            r = red(k, d)
            if r not in borrowable:
                borrowable.add(r)
                if len(borrowable) > budget.max_universe:
                    raise UniverseCap(
                        f"budgeted search needs more than "
                        f"{budget.max_universe} descriptors")

    def admit(t: DerivationTree) -> bool:
        if tree_depth(t) > budget.max_depth:
            return False
        try:
            symbol, rd = check_tree(a, m, t, productive_letter, memo=memo)
        except TreeError:
            return False
        if not _fits(rd, budget.max_card):
            return False
        if (symbol, rd) in witnesses:
            return False
        witnesses[(symbol, rd)] = t
        note_borrowable(rd)
        return True

    for d in budget.declared:
        note_borrowable(d)

    for symbol in sorted(a.stack_alphabet):
        for state in a.states:
            admit(empty_tree(symbol, state))

    changed = True
    while changed:
        changed = False
        judgments = list(witnesses.items())
        for (state, symbol), trans in sorted(a.delta.items()):
            if isinstance(trans, Read):
                targets = {q for _, q in trans.mapping}
                for (csym, crd), ctree in judgments:
                    if csym == symbol and crd.state in targets:
                        changed |= admit(read_tree(state, ctree))
            elif isinstance(trans, OpStep) and isinstance(trans.op, Pop):
                k = trans.op.k
                for d in sorted(borrowable, key=lambda d: d.uid):
                    if d.order == k and d.state == trans.state:
                        changed |= admit(pop_tree(symbol, state, d))
            elif isinstance(trans, OpStep):
                k, alpha = trans.op.k, trans.op.symbol
                for (csym, crd), ctree in judgments:
                    if csym != alpha or crd.state != trans.state:
                        continue
                    needed = sorted({x for _, x in crd.ass(k)},
                                    key=lambda d: d.uid)
                    pools = []
                    for xi in needed:
                        pool = [t for (gs, rho), t in judgments
                                if gs == symbol and red(k, rho) == xi]
                        pools.append(pool)
                    if any(not pool for pool in pools):
                        continue
                    for pick in itertools.product(*pools):
                        changed |= admit(
                            push_tree(symbol, state, ctree, pick))
    return out


@dataclass(frozen=True)
class BudgetedTypes:
    """Descriptors reachable at a configuration within a budget."""
    budget: DerivBudget
    descriptors: FrozenSet[RunDescriptor]

    def __contains__(self, d) -> bool:
        return d in self.descriptors

    def __iter__(self):
        return iter(self.descriptors)

    def __len__(self):
        return len(self.descriptors)


def _top_symbol(lit) -> str:
    while isinstance(lit, tuple):
        lit = lit[-1]
    return lit


def annotate_literal(derived: Judgments, ctx: TypeContext, lit, order: int,
                     want: FrozenSet[RunDescriptor], memo=None, shuffle=None):
    """A well-formed annotation of lit with type exactly want, or None.

    Picks one provider judgment per wanted descriptor, recursing into
    the prefix with the union of the providers' assumption sets.
    shuffle, given a list, may reorder it in place to randomize which
    annotation is found first.
    """
    if memo is None:
        memo = {}
    key = (lit, order, want)
    if key in memo:
        return memo[key]
    out = None
    if order == 0:
        trees = []
        for d in sorted(want, key=lambda d: d.uid):
            t = derived.witnesses.get((lit, d))
            if t is None:
                break
            trees.append(t)
        else:
            out = ctx.cell(lit, trees)
    elif not lit:
        out = ctx.stack(order, ()) if not want else None
    else:
        *rest, last = lit
        topsym = _top_symbol(last)
        pools = []
        for xi in sorted(want, key=lambda d: d.uid):
            pool = sorted(
                {red(order - 1, rho)
                 for (gs, rho) in derived.witnesses
                 if gs == topsym and red(order, rho) == xi},
                key=lambda d: d.uid)
            if shuffle is not None:
                shuffle(pool)
            pools.append(pool)
        for pick in itertools.product(*pools):
            sub = annotate_literal(derived, ctx, last, order - 1,
                                   frozenset(pick), memo, shuffle)
            if sub is None:
                continue
            below: FrozenSet[RunDescriptor] = frozenset()
            for d in pick:
                below |= frozenset(x for _, x in d.ass(order))
            pre = annotate_literal(derived, ctx, tuple(rest), order, below,
                                   memo, shuffle)
            if pre is None:
                continue
            out = ctx.stack(order, pre.items + (sub,))
            break
    memo[key] = out
    return out


def singular_annotation(derived: Judgments, ctx: TypeContext, literal,
                        rd: RunDescriptor, memo=None, shuffle=None):
    """A well-formed singular annotation of literal topped by rd, or None."""
    order = ctx.automaton.order
    prefixes = {}
    cur = literal
    for i in range(order, 0, -1):
        prefixes[i] = tuple(cur[:-1])
        cur = cur[-1]
    witness = derived.witnesses.get((cur, rd))
    if witness is None or rd.order != 0:
        return None
    segments = []
    for i in range(order, 0, -1):
        want = frozenset(x for _, x in rd.ass(i))
        si = annotate_literal(derived, ctx, prefixes[i], i, want, memo,
                              shuffle)
        if si is None:
            return None
        segments.append(si)
    s = stack_from_segments(segments + [ctx.cell(cur, (witness,))])
    return s if well_formed(s) else None


class TypingSession:
    """Reusable budgeted typing for many configurations of one machine.

    Judgments are derived once; annotation solving is memoized across
    calls, which only depends on stack literals, never on the queried
    configuration.
    """

    def __init__(self, a: Automaton, m: Morphism, budget: DerivBudget,
                 productive_letter: str = "#"):
        self.budget = budget
        self.derived = derive_judgments(a, m, budget, productive_letter)
        self.ctx = TypeContext(a, m, productive_letter)
        self._memo: dict = {}

    def types(self, c: Configuration) -> BudgetedTypes:
        """Top-cell descriptors of budgeted well-formed singular stacks at c.

        An under-approximation of the configuration's type: growing the
        budget can only grow the result.
        """
        literal = positionless(c.stack)
        topsym = _top_symbol(literal)
        found = set()
        for (symbol, rd) in sorted(self.derived.witnesses,
                                   key=lambda j: j[1].uid):
            if symbol != topsym or rd.state != c.state or rd.order != 0:
                continue
            if singular_annotation(self.derived, self.ctx, literal, rd,
                                   self._memo) is not None:
                found.add(rd)
        return BudgetedTypes(self.budget, frozenset(found))


def types_of_configuration(a: Automaton, m: Morphism, c: Configuration,
                           budget: DerivBudget,
                           productive_letter: str = "#") -> BudgetedTypes:
    return TypingSession(a, m, budget, productive_letter).types(c)
