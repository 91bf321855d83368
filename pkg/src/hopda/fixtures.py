"""Built-in automata and stacks used by the tests, the demos, and the CLI.

Each automaton is kept as format source text so the parser round-trips are
exercised constantly; loaders return fresh parsed values.
"""

from __future__ import annotations

from .automata import Automaton, Run, feed_run, parse_automaton

TABLE1_SOURCE = """\
; six chained silent steps over a fixed start stack
order: 2
mode: plain
input: 'x'
stack: a b c d e
init-state: q0
init-symbol: a
init-stack: [[a,b],[c,d]]
accepting:
trans q0 d -> q1 push2 e
trans q1 e -> q2 pop1
trans q2 c -> q3 pop2
trans q3 d -> q4 pop1
trans q4 c -> q5 push1 d
trans q5 d -> q6 pop1
"""

A1_SOURCE = """\
; order-2 loop: push a fresh cell, copy the 1-stack, drop the copy's top,
; then dispatch on a letter and discard the copy
order: 2
mode: plain
input: 'a' 'b' '#'
stack: g
init-state: q1
init-symbol: g
accepting:
trans q1 g -> q2 push1 g
trans q2 g -> q3 push2 g
trans q3 g -> q4 pop1
trans q4 g -> read { 'a': q5, 'b': q6, '#': q7 }
trans q5 g -> q3 pop2
trans q6 g -> q3 pop2
trans q7 g -> q3 pop2
"""

A2_SOURCE = """\
; order-2 chain whose reads alternate with double pops
order: 2
mode: plain
input: '#'
stack: g
init-state: q1
init-symbol: g
accepting:
trans q1 g -> q2 push2 g
trans q2 g -> q3 pop1
trans q3 g -> q4 pop1
trans q4 g -> read { '#': q5 }
trans q5 g -> q6 pop2
trans q6 g -> q7 pop1
trans q7 g -> q4 pop1
"""

LOOP3_SOURCE = """\
; order-3 machine that reads stars forever while its stack grows;
; every visit to p1 exposes the same two-cell topmost 2-stack
order: 3
mode: plain
input: '*'
stack: a
init-state: p0
init-symbol: a
accepting:
trans p0 a -> p1 push1 a
trans p1 a -> p2 push2 a
trans p2 a -> p3 push3 a
trans p3 a -> p4 pop1
trans p4 a -> read { '*': p5 }
trans p5 a -> p6 push3 a
trans p6 a -> p7 pop2
trans p7 a -> p1 push3 a
"""

U_SOURCE = """\
; collapsible order-2 recognizer for the separating language:
; words w over [ ] * followed by exactly stars(w)+1 sharps.
; X marks bracket depth zero, Y is one open bracket, Z marks the bottom.
; Every star copies the top 1-stack, so a bracket's collapse link
; remembers how many stars preceded it.
order: 2
mode: collapse
input: '[' ']' '*' '#'
stack: X Y Z
init-state: q0
init-symbol: X
accepting: acc
trans q0 X -> q1 push1 Z
trans q1 Z -> q2 push2 Z
trans q2 Z -> loop pop1
trans loop X -> read { '[': open, ']': over, '*': star, '#': acc }
trans loop Y -> read { '[': open, ']': close, '*': star, '#': clps }
trans open X -> loop push1 Y
trans open Y -> loop push1 Y
trans star X -> loop push2 X
trans star Y -> loop push2 Y
trans close Y -> loop pop1
trans clps Y -> next collapse
trans next X -> read { '#': popp }
trans next Y -> read { '#': popp }
trans next Z -> acc push1 Z
trans popp X -> next pop2
trans popp Y -> next pop2
trans over X -> read { '[': ovA, ']': ovB, '*': ovC, '#': acc }
trans ovA X -> over push1 X
trans ovB X -> over push1 X
trans ovC X -> over push1 X
"""

_SOURCES = {
    "table1": TABLE1_SOURCE,
    "a1": A1_SOURCE,
    "a2": A2_SOURCE,
    "loop3": LOOP3_SOURCE,
    "u": U_SOURCE,
}


def fixture_names() -> tuple[str, ...]:
    return tuple(sorted(_SOURCES))


def automaton_source(name: str) -> str:
    try:
        return _SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}") from None


def load_automaton(name: str) -> Automaton:
    return parse_automaton(automaton_source(name))


def table1_run() -> Run:
    """The six-step silent run whose classification the tests pin down."""
    a = load_automaton("table1")
    run, reason = feed_run(a, a.initial_configuration(), lambda: None, 100)
    assert reason == "NoTransition" and len(run) == 6
    return run
