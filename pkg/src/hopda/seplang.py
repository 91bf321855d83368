"""The separating language over '[', ']', '*', '#'.

A sharp-free word earns a star count: the number of stars strictly before
its last unmatched opening bracket, or zero when no bracket stays open or
some prefix over-closes.  The language consists of each such word followed
by exactly one more sharp than its star count.  A 12-state order-2
collapse machine recognizes it: every star copies the top 1-stack, so the
collapse link of an open-bracket cell remembers how many stars preceded it.
"""

from __future__ import annotations

from .automata import Automaton
from .fixtures import load_automaton

BRACKET_STAR = "[]*"
ALPHABET = "[]*#"


def stars(word: str) -> int:
    """Stars strictly before the last unmatched '['; 0 when none survives."""
    open_counts: list[int] = []
    seen = 0
    for ch in word:
        if ch == "[":
            open_counts.append(seen)
        elif ch == "]":
            if not open_counts:
                return 0
            open_counts.pop()
        elif ch == "*":
            seen += 1
        else:
            raise ValueError(f"letter {ch!r} not in {BRACKET_STAR!r}")
    return open_counts[-1] if open_counts else 0


def u_member(word: str) -> bool:
    """Membership: a bracket-star body followed by stars(body)+1 sharps."""
    if any(ch not in ALPHABET for ch in word):
        return False
    cut = word.find("#")
    if cut == -1:
        return False
    body, sharps = word[:cut], word[cut:]
    if any(ch != "#" for ch in sharps):
        return False
    return len(sharps) == stars(body) + 1


def build_u_automaton() -> Automaton:
    return load_automaton("u")
