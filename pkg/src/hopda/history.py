"""The history function on stack references and run classification.

A reference addresses a k-stack inside a configuration by the coordinates
``(x_n, ..., x_{k+1})`` of its path from the root; an order-0 reference is
a full cell position.  Because positions coincide with path indices, the
backward history map of a run is pure coordinate arithmetic: only a
``push^r`` step moves references, namely those of order < r sitting inside
the freshly pushed copy, whose ``x_r`` coordinate is decremented.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Run
from .stacks import Cell, Push, Stack, StackError, pop


@dataclass(frozen=True)
class StackRef:
    """Order-k substack of a configuration, addressed by path coordinates."""

    order: int
    prefix: tuple[int, ...]


def resolve(stack: Stack, ref: StackRef) -> Stack | Cell:
    if len(ref.prefix) != stack.order - ref.order:
        raise StackError(f"reference {ref} does not fit an order-{stack.order} stack")
    obj: Stack | Cell = stack
    for coord in ref.prefix:
        if not isinstance(obj, Stack) or coord < 1 or coord > len(obj.items):
            raise StackError(f"reference {ref} does not resolve")
        obj = obj.items[coord - 1]
    return obj


def topmost_ref(stack: Stack, k: int) -> StackRef:
    """Reference to the topmost k-stack."""
    if k < 0 or k > stack.order:
        raise StackError(f"no order-{k} substack in an order-{stack.order} stack")
    prefix = []
    obj: Stack | Cell = stack
    while isinstance(obj, Stack) and obj.order > k:
        prefix.append(len(obj.items))
        obj = obj.items[-1]
    return StackRef(k, tuple(prefix))


def hist_step(run: Run, i: int, ref: StackRef) -> StackRef:
    """Map a reference at R(i+1) back to R(i)."""
    op = run.steps[i].op
    if not isinstance(op, Push):
        return ref
    r = op.k
    if ref.order >= r:
        return ref
    n = run.configs[i + 1].stack.order
    target = topmost_ref(run.configs[i + 1].stack, r - 1)
    # inside the new copy: coordinates x_n..x_r agree with its path
    depth = n - r + 1
    if ref.prefix[:depth] != target.prefix[:depth]:
        return ref
    moved = list(ref.prefix)
    moved[depth - 1] -= 1
    return StackRef(ref.order, tuple(moved))


def hist(run: Run, ref: StackRef) -> StackRef:
    """Map a reference at the end of the run back to its start."""
    resolve(run.configs[-1].stack, ref)
    for i in range(len(run.steps) - 1, -1, -1):
        ref = hist_step(run, i, ref)
    resolve(run.configs[0].stack, ref)
    return ref


@dataclass(frozen=True)
class Classification:
    k: int
    upper: bool
    ret: bool

    def __post_init__(self):
        if self.ret and not self.upper:
            raise StackError("a k-return must be k-upper")


def is_upper(run: Run, k: int) -> bool:
    """hist maps the topmost k-stack of the end onto the topmost of the start."""
    n = run.configs[0].stack.order
    if not 0 <= k <= n:
        raise StackError(f"k={k} out of range for order {n}")
    end_ref = topmost_ref(run.configs[-1].stack, k)
    return hist(run, end_ref) == topmost_ref(run.configs[0].stack, k)


def is_return(run: Run, k: int) -> bool:
    """The end's topmost (k-1)-stack descends from just below the start's top.

    Additionally no nonempty suffix, including the full run, is (k-1)-upper.
    """
    n = run.configs[0].stack.order
    if not 1 <= k <= n:
        raise StackError(f"k={k} out of range for returns at order {n}")
    if len(run.steps) == 0:
        return False
    start = run.configs[0].stack
    try:
        popped = pop(start, k)
    except StackError:
        return False
    end_ref = topmost_ref(run.configs[-1].stack, k - 1)
    if hist(run, end_ref) != topmost_ref(popped, k - 1):
        return False
    return not any(is_upper(run.subrun(i, len(run)), k - 1) for i in range(len(run)))


def classify(run: Run, k: int) -> Classification:
    upper = is_upper(run, k)
    n = run.configs[0].stack.order
    ret = is_return(run, k) if 1 <= k <= n else False
    return Classification(k, upper, ret)


def classification_table(run: Run) -> list[dict]:
    """Table of upper/return index sets per prefix, mirroring a run matrix.

    Row j lists, for each order, the set of i such that subrun(i, j) is
    k-upper (k < n) or a k-return (k >= 1).
    """
    from .stacks import render

    n = run.configs[0].stack.order
    rows = []
    for j in range(len(run) + 1):
        row: dict = {"j": j, "stack": render(run.configs[j].stack, links=False)}
        for k in range(n):
            row[f"up{k}"] = [i for i in range(j + 1) if is_upper(run.subrun(i, j), k)]
        for k in range(1, n + 1):
            row[f"ret{k}"] = [i for i in range(j + 1) if is_return(run.subrun(i, j), k)]
        rows.append(row)
    return rows


def max_upper_decomposition(run: Run, k: int) -> list[Run]:
    """Split a k-upper run by repeatedly cutting minimal k-upper suffixes."""
    if len(run) == 0:
        return []
    if not is_upper(run, k):
        raise StackError(f"run is not {k}-upper")
    pieces: list[Run] = []
    j = len(run)
    while j > 0:
        i = next(
            (i for i in range(j - 1, -1, -1) if is_upper(run.subrun(i, j), k)),
            None,
        )
        if i is None:
            raise StackError(f"no {k}-upper suffix boundary above 0")
        pieces.append(run.subrun(i, j))
        j = i
    pieces.reverse()
    return pieces


def boundaries(pieces: list[Run], total: int) -> list[int]:
    """Cut indices of a decomposition of a run of length `total`."""
    out = [total]
    for piece in reversed(pieces):
        out.append(out[-1] - len(piece))
    out.reverse()
    return out


def parallel(k: int, morphism, run_r: Run, run_s: Run) -> bool:
    """(k, phi)-parallel: matching decompositions with equal images and tops."""
    from .stacks import positionless, top

    for run in (run_r, run_s):
        if not is_upper(run, k):
            raise StackError(f"run is not {k}-upper")

    def tops(run: Run, i: int):
        return positionless(top(k, run.configs[i].stack))

    if tops(run_r, len(run_r)) != tops(run_s, len(run_s)):
        return False
    pieces_r = max_upper_decomposition(run_r, k)
    pieces_s = max_upper_decomposition(run_s, k)
    if len(pieces_r) != len(pieces_s):
        return False
    for piece_r, piece_s in zip(pieces_r, pieces_s):
        if morphism.eval(piece_r.word) != morphism.eval(piece_s.word):
            return False
        if positionless(top(k, piece_r.configs[0].stack)) != positionless(
            top(k, piece_s.configs[0].stack)
        ):
            return False
    return True


def advancing_set(run: Run, k: int, lo: int, hi: int) -> set[int]:
    """Indices i in [lo, hi] whose suffix subrun(i, hi) is k-upper."""
    if not 0 <= lo <= hi <= len(run):
        raise StackError("advancing_set bounds out of range")
    return {i for i in range(lo, hi + 1) if is_upper(run.subrun(i, hi), k)}


def is_clear(run: Run, i: int, ref: StackRef, c0) -> bool:
    """The reference's top does not descend from the start's topmost part."""
    if run.configs[0] != c0:
        raise StackError("run does not start at the given configuration")
    if ref.order < 1:
        raise StackError("clearness is defined for k-stacks with k >= 1")
    stack_i = run.configs[i].stack
    sub = resolve(stack_i, ref)
    assert isinstance(sub, Stack)
    inner = topmost_ref(sub, ref.order - 1)
    top_ref = StackRef(ref.order - 1, ref.prefix + inner.prefix)
    back = hist(run.subrun(0, i), top_ref)
    return back != topmost_ref(c0.stack, ref.order - 1)
