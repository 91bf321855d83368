"""Deterministic higher-order pushdown automata.

Provides the automaton record, a line-oriented text format, deterministic
stepping, word runs with a silent-step budget, run traces, and the
order-lift construction that turns accepting runs into top-order returns.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .stacks import (
    BlockedPop,
    Collapse,
    Op,
    Pop,
    Push,
    Stack,
    apply,
    from_symbols,
    initial_stack,
    parse_literal,
    render,
    top_symbol,
)


class AutomatonError(Exception):
    """Ill-formed automaton or source text."""


@dataclass(frozen=True)
class Read:
    """Input transition: an injective letter-to-state dispatch."""

    mapping: tuple[tuple[str, str], ...]

    def target(self, letter: str) -> str | None:
        for ch, state in self.mapping:
            if ch == letter:
                return state
        return None

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(ch for ch, _ in self.mapping)


@dataclass(frozen=True)
class OpStep:
    """Silent transition: move to `state` after applying `op`."""

    state: str
    op: Op


Transition = Read | OpStep


@dataclass(frozen=True)
class Configuration:
    state: str
    stack: Stack


@dataclass(frozen=True)
class StepWitness:
    """What happened in one step: a consumed letter or a stack operation."""

    letter: str | None
    op: Op | None


@dataclass(frozen=True)
class Run:
    """Alternating configurations and witnessed steps; top config at index 0."""

    configs: tuple[Configuration, ...]
    steps: tuple[StepWitness, ...]

    def __post_init__(self):
        if len(self.configs) != len(self.steps) + 1:
            raise AutomatonError("run shape mismatch")

    def __len__(self) -> int:
        return len(self.steps)

    def at(self, i: int) -> Configuration:
        return self.configs[i]

    @property
    def word(self) -> str:
        return "".join(w.letter for w in self.steps if w.letter is not None)

    def subrun(self, i: int, j: int) -> "Run":
        if not 0 <= i <= j <= len(self.steps):
            raise AutomatonError(f"subrun bounds ({i},{j}) out of range")
        return Run(self.configs[i : j + 1], self.steps[i:j])

    def compose(self, other: "Run") -> "Run":
        if self.configs[-1] != other.configs[0]:
            raise AutomatonError("runs do not meet at a shared configuration")
        return Run(self.configs + other.configs[1:], self.steps + other.steps)


@dataclass(frozen=True)
class Automaton:
    order: int
    mode: str
    input_alphabet: tuple[str, ...]
    stack_alphabet: tuple[str, ...]
    init_state: str
    init_symbol: str
    accepting: frozenset[str]
    delta: dict[tuple[str, str], Transition]
    init_stack_literal: object = None

    def __post_init__(self):
        if self.mode not in ("plain", "collapse"):
            raise AutomatonError(f"unknown mode {self.mode!r}")
        if self.mode == "collapse" and self.order != 2:
            raise AutomatonError("collapse mode requires order 2")
        if self.init_symbol not in self.stack_alphabet:
            raise AutomatonError(f"initial symbol {self.init_symbol!r} not in stack alphabet")
        for (state, sym), t in self.delta.items():
            where = f"transition ({state},{sym})"
            if sym not in self.stack_alphabet:
                raise AutomatonError(f"{where}: unknown stack symbol")
            if isinstance(t, Read):
                seen_letters, seen_targets = set(), set()
                for ch, q in t.mapping:
                    if ch not in self.input_alphabet:
                        raise AutomatonError(f"{where}: letter {ch!r} not in input alphabet")
                    if ch in seen_letters:
                        raise AutomatonError(f"{where}: duplicate letter {ch!r}")
                    if q in seen_targets:
                        raise AutomatonError(f"{where}: read map is not injective")
                    seen_letters.add(ch)
                    seen_targets.add(q)
            elif isinstance(t.op, (Push, Pop)):
                if not 1 <= t.op.k <= self.order:
                    raise AutomatonError(f"{where}: order-{t.op.k} operation out of range")
                if isinstance(t.op, Push) and t.op.symbol not in self.stack_alphabet:
                    raise AutomatonError(f"{where}: unknown push symbol {t.op.symbol!r}")
            elif isinstance(t.op, Collapse) and self.mode != "collapse":
                raise AutomatonError(f"{where}: collapse in plain mode")

    @property
    def states(self) -> tuple[str, ...]:
        seen: dict[str, None] = {self.init_state: None}
        for (state, _), t in self.delta.items():
            seen.setdefault(state, None)
            if isinstance(t, Read):
                for _, q in t.mapping:
                    seen.setdefault(q, None)
            else:
                seen.setdefault(t.state, None)
        for q in sorted(self.accepting):
            seen.setdefault(q, None)
        return tuple(seen)

    def initial_configuration(self) -> Configuration:
        if self.init_stack_literal is not None:
            stack = from_symbols(self.order, self.init_stack_literal)
        else:
            stack = initial_stack(self.order, self.init_symbol)
        return Configuration(self.init_state, stack)


@dataclass(frozen=True)
class Halt:
    reason: str  # BlockedPop | NoTransition | LetterNotAccepted


def step(a: Automaton, c: Configuration, letter: str | None = None):
    """One deterministic step; returns (Configuration, StepWitness) or Halt."""
    t = a.delta.get((c.state, top_symbol(c.stack)))
    if t is None:
        return Halt("NoTransition")
    if isinstance(t, Read):
        if letter is None:
            raise AutomatonError("a letter is required for a read transition")
        q = t.target(letter)
        if q is None:
            return Halt("LetterNotAccepted")
        return Configuration(q, c.stack), StepWitness(letter, None)
    try:
        stack = apply(t.op, c.stack)
    except BlockedPop:
        return Halt("BlockedPop")
    return Configuration(t.state, stack), StepWitness(None, t.op)


def needs_letter(a: Automaton, c: Configuration) -> bool:
    return isinstance(a.delta.get((c.state, top_symbol(c.stack))), Read)


@dataclass(frozen=True)
class RunResult:
    run: Run
    accepted: bool
    consumed: int
    halt_reason: str | None
    budget_exceeded: bool


def feed_run(a: Automaton, c: Configuration, feed, max_steps: int):
    """Drive the automaton from `c`, asking `feed` for a letter at each read.

    `feed` returning None stops the run in front of the read.  Returns the
    run together with the halt reason (None if `max_steps` ran out).
    """
    configs = [c]
    steps: list[StepWitness] = []
    reason: str | None = None
    while len(steps) < max_steps:
        letter = feed() if needs_letter(a, configs[-1]) else None
        if needs_letter(a, configs[-1]) and letter is None:
            reason = "AwaitingInput"
            break
        out = step(a, configs[-1], letter)
        if isinstance(out, Halt):
            reason = out.reason
            break
        nxt, witness = out
        configs.append(nxt)
        steps.append(witness)
    return Run(tuple(configs), tuple(steps)), reason


def run_word(a: Automaton, word: str, silent_budget: int = 10**6) -> RunResult:
    """Run `word` from the initial configuration.

    The word is accepted when it is consumed completely and the maximal
    silent extension afterwards passes through an accepting state before
    the next read.  Exceeding the silent budget is reported separately.
    """
    c = a.initial_configuration()
    configs = [c]
    steps: list[StepWitness] = []
    consumed = 0
    silent = 0
    after_word = 0 if word == "" else None
    halt_reason: str | None = None
    budget_exceeded = False
    while True:
        cur = configs[-1]
        if needs_letter(a, cur):
            if consumed == len(word):
                break
            letter = word[consumed]
            out = step(a, cur, letter)
            if isinstance(out, Halt):
                halt_reason = out.reason
                break
            consumed += 1
            silent = 0
        else:
            if silent >= silent_budget:
                budget_exceeded = True
                break
            out = step(a, cur)
            if isinstance(out, Halt):
                halt_reason = out.reason
                break
            silent += 1
        nxt, witness = out
        configs.append(nxt)
        steps.append(witness)
        if consumed == len(word) and after_word is None:
            after_word = len(configs) - 1
    accepted = (
        consumed == len(word)
        and after_word is not None
        and any(cfg.state in a.accepting for cfg in configs[after_word:])
    )
    return RunResult(Run(tuple(configs), tuple(steps)), accepted, consumed, halt_reason, budget_exceeded)


def op_to_text(op: Op) -> str:
    if isinstance(op, Push):
        return f"push{op.k} {op.symbol}"
    if isinstance(op, Pop):
        return f"pop{op.k}"
    return "collapse"


def stack_to_json(obj):
    if isinstance(obj, Stack):
        return [stack_to_json(sub) for sub in obj.items]
    return obj.symbol


def run_to_trace(run: Run) -> list[dict]:
    """Trace JSON: one entry per configuration with the step taken from it."""
    entries = []
    for i, cfg in enumerate(run.configs):
        witness = run.steps[i] if i < len(run.steps) else None
        entries.append(
            {
                "state": cfg.state,
                "stack": stack_to_json(cfg.stack),
                "letter": witness.letter if witness else None,
                "op": op_to_text(witness.op) if witness and witness.op else None,
            }
        )
    return entries


_TRANS_RE = re.compile(r"^trans\s+(\S+)\s+(\S+)\s*->\s*(.+)$")
_OP_RE = re.compile(r"^(\S+)\s+(push(\d+)\s+(\S+)|pop(\d+)|collapse)$")
_READ_RE = re.compile(r"^read\s*\{(.*)\}$")
_PAIR_RE = re.compile(r"^'(.)'\s*:\s*(\S+)$")


def _strip_comment(line: str) -> str:
    out = []
    in_quote = False
    for i, ch in enumerate(line):
        if ch == "'" and not in_quote:
            in_quote = True
        elif ch == "'" and in_quote:
            in_quote = False
        if ch == ";" and not in_quote:
            break
        out.append(ch)
    return "".join(out)


def parse_automaton(text: str) -> Automaton:
    headers: dict[str, str] = {}
    delta: dict[tuple[str, str], Transition] = {}
    order: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        where = f"line {lineno}"
        if line.startswith("trans"):
            m = _TRANS_RE.match(line)
            if not m:
                raise AutomatonError(f"{where}: cannot parse transition")
            state, sym, rhs = m.group(1), m.group(2), m.group(3).strip()
            if (state, sym) in delta:
                raise AutomatonError(f"{where}: duplicate transition for ({state},{sym})")
            rm = _READ_RE.match(rhs)
            if rm:
                pairs = []
                body = rm.group(1).strip()
                if body:
                    for part in body.split(","):
                        pm = _PAIR_RE.match(part.strip())
                        if not pm:
                            raise AutomatonError(f"{where}: bad read entry {part.strip()!r}")
                        pairs.append((pm.group(1), pm.group(2)))
                delta[(state, sym)] = Read(tuple(pairs))
                continue
            om = _OP_RE.match(rhs)
            if not om:
                raise AutomatonError(f"{where}: cannot parse operation {rhs!r}")
            target = om.group(1)
            if om.group(3):
                op: Op = Push(int(om.group(3)), om.group(4))
            elif om.group(5):
                op = Pop(int(om.group(5)))
            else:
                op = Collapse()
            delta[(state, sym)] = OpStep(target, op)
            continue
        if ":" not in line:
            raise AutomatonError(f"{where}: expected 'key: value' or a transition")
        key, _, value = line.partition(":")
        key = key.strip()
        if key in headers:
            raise AutomatonError(f"{where}: duplicate header {key!r}")
        headers[key] = value.strip()
    for required in ("order", "mode", "input", "stack", "init-state", "init-symbol"):
        if required not in headers:
            raise AutomatonError(f"missing header {required!r}")
    try:
        order = int(headers["order"])
    except ValueError:
        raise AutomatonError("order must be an integer") from None
    letters = tuple(m.group(1) for m in re.finditer(r"'(.)'", headers["input"]))
    if not letters:
        raise AutomatonError("empty input alphabet")
    symbols = tuple(headers["stack"].split())
    accepting = frozenset(headers.get("accepting", "").split())
    init_literal = None
    if "init-stack" in headers:
        init_literal = parse_literal(headers["init-stack"])
    return Automaton(
        order=order,
        mode=headers["mode"],
        input_alphabet=letters,
        stack_alphabet=symbols,
        init_state=headers["init-state"],
        init_symbol=headers["init-symbol"],
        accepting=accepting,
        delta=delta,
        init_stack_literal=init_literal,
    )


def render_automaton(a: Automaton) -> str:
    lines = [
        f"order: {a.order}",
        f"mode: {a.mode}",
        "input: " + " ".join(f"'{ch}'" for ch in a.input_alphabet),
        "stack: " + " ".join(a.stack_alphabet),
        f"init-state: {a.init_state}",
        f"init-symbol: {a.init_symbol}",
        "accepting: " + " ".join(sorted(a.accepting)),
    ]
    if a.init_stack_literal is not None:
        lines.append("init-stack: " + render(from_symbols(a.order, a.init_stack_literal)))
    for (state, sym), t in a.delta.items():
        if isinstance(t, Read):
            body = ", ".join(f"'{ch}': {q}" for ch, q in t.mapping)
            lines.append(f"trans {state} {sym} -> read {{ {body} }}")
        else:
            lines.append(f"trans {state} {sym} -> {t.state} {op_to_text(t.op)}")
    return "\n".join(lines) + "\n"


def _fresh(name: str, taken) -> str:
    candidate = name
    i = 0
    while candidate in taken:
        i += 1
        candidate = f"{name}{i}"
    return candidate


def order_lift(a: Automaton, target_order: int | None = None) -> Automaton:
    """Wrap `a` so accepting runs end with a top-order pop.

    The result has order `target_order` (default: one above `a`).  A fresh
    initial state pushes a copy of the whole stack, the original machine
    runs inside the copy, and every formerly accepting state pops back and
    accepts.  The language is preserved for prefix-free languages, which is
    the intended use.
    """
    n = a.order + 1 if target_order is None else target_order
    if n < a.order:
        raise AutomatonError("cannot lift below the current order")
    for (state, sym), t in a.delta.items():
        if isinstance(t, OpStep) and isinstance(t.op, (Push, Pop)) and t.op.k >= n:
            raise AutomatonError(
                f"transition ({state},{sym}) already uses an order-{t.op.k} operation"
            )
    if a.mode != "plain":
        raise AutomatonError("order_lift expects a plain-mode automaton")
    if a.init_stack_literal is not None:
        raise AutomatonError("order_lift expects a default initial stack")
    taken = set(a.states)
    p_init = _fresh("lift_init", taken)
    taken.add(p_init)
    p_fin = _fresh("lift_acc", taken)
    delta: dict[tuple[str, str], Transition] = {}
    delta[(p_init, a.init_symbol)] = OpStep(a.init_state, Push(n, a.init_symbol))
    for key, t in a.delta.items():
        state, _ = key
        if state in a.accepting:
            continue
        delta[key] = t
    for q in a.accepting:
        for sym in a.stack_alphabet:
            delta[(q, sym)] = OpStep(p_fin, Pop(n))
    return Automaton(
        order=n,
        mode="plain",
        input_alphabet=a.input_alphabet,
        stack_alphabet=a.stack_alphabet,
        init_state=p_init,
        init_symbol=a.init_symbol,
        accepting=frozenset({p_fin}),
        delta=delta,
    )
