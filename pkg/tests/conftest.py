"""Shared test helpers: run enumeration and recursive run recognizers.

The recognizers mirror the recursive characterizations of upper runs and
returns and act as an independent oracle for the hist-based classifiers.
"""

from __future__ import annotations

from functools import lru_cache

from hopda.automata import Automaton, Configuration, Halt, Run, step
from hopda.stacks import Pop, Push


def enumerate_runs(a: Automaton, max_len: int, start: Configuration | None = None) -> list[Run]:
    """All maximal runs from the start, branching over read letters.

    A run ends at max_len, at a halt, or at a read (each letter forks a
    branch).  Prefixes are not listed separately; tests slice subruns.
    """
    from hopda.automata import needs_letter

    start = a.initial_configuration() if start is None else start
    out: list[Run] = []

    def walk(configs, steps):
        if len(steps) == max_len:
            out.append(Run(tuple(configs), tuple(steps)))
            return
        cur = configs[-1]
        if needs_letter(a, cur):
            extended = False
            for letter in a.input_alphabet:
                res = step(a, cur, letter)
                if isinstance(res, Halt):
                    continue
                nxt, witness = res
                extended = True
                walk(configs + [nxt], steps + [witness])
            if not extended:
                out.append(Run(tuple(configs), tuple(steps)))
            return
        res = step(a, cur)
        if isinstance(res, Halt):
            out.append(Run(tuple(configs), tuple(steps)))
            return
        nxt, witness = res
        walk(configs + [nxt], steps + [witness])

    walk([start], [])
    return out


def all_subruns(run: Run):
    for i in range(len(run) + 1):
        for j in range(i, len(run) + 1):
            yield run.subrun(i, j)


def make_recognizers(run: Run):
    """Recursive upper/return recognizers over subruns of one base run."""

    def first_op(i):
        return run.steps[i].op

    @lru_cache(maxsize=None)
    def upper(i: int, j: int, k: int) -> bool:
        if i == j:
            return True
        op = first_op(i)
        if j - i == 1:
            if op is None or isinstance(op, Push):
                return True
            return isinstance(op, Pop) and op.k <= k
        if isinstance(op, Push) and op.k >= k + 1 and ret(i + 1, j, op.k):
            return True
        return any(upper(i, m, k) and upper(m, j, k) for m in range(i + 1, j))

    @lru_cache(maxsize=None)
    def ret(i: int, j: int, r: int) -> bool:
        if i == j:
            return False
        op = first_op(i)
        if j - i == 1:
            return isinstance(op, Pop) and op.k == r
        if (
            op is None
            or (isinstance(op, Pop) and op.k < r)
            or (isinstance(op, Push) and op.k != r)
        ) and ret(i + 1, j, r):
            return True
        if isinstance(op, Push) and op.k >= r:
            return any(ret(i + 1, x, op.k) and ret(x, j, r) for x in range(i + 2, j + 1))
        return False

    return upper, ret


import pytest


@pytest.fixture(scope="session")
def annotated_run_batch():
    """Randomized annotated-run fixtures shared across test modules."""
    from annotation_helpers import generate_runs

    return generate_runs(seed=2026, survivors=1000)
