"""Finite monoids with explicit multiplication tables, and morphisms that
evaluate input words into them.

Elements are arbitrary hashable labels; the table works on indices.  Two
ready-made morphisms matter elsewhere: a five-class one that separates
all-sharp words and single-close-bracket words from everything else, and a
bounded bracket-pattern tracker with an absorbing overflow element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product


class MonoidError(ValueError):
    pass


# explicit tables only; anything past this is not auditable in reasonable time
ELEMENT_CAP = 1024


@dataclass(frozen=True)
class MonoidSpec:
    """A finite monoid: element labels, identity index, index-level table."""

    elements: tuple
    identity: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise MonoidError("a monoid needs at least the identity element")
        if n > ELEMENT_CAP:
            raise MonoidError(f"element count {n} exceeds cap {ELEMENT_CAP}")
        if len(set(self.elements)) != n:
            raise MonoidError("duplicate element labels")
        if not 0 <= self.identity < n:
            raise MonoidError("identity index out of range")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise MonoidError("multiplication table must be n by n")
        for row in self.table:
            for entry in row:
                if not 0 <= entry < n:
                    raise MonoidError("table entry out of range")
        e = self.identity
        for i in range(n):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise MonoidError("identity law fails")
        if n <= 64:
            _check_associativity(self.table)

    @cached_property
    def _index_of(self) -> dict:
        return {label: i for i, label in enumerate(self.elements)}

    def index(self, element) -> int:
        try:
            return self._index_of[element]
        except KeyError:
            raise MonoidError(f"unknown element {element!r}") from None

    def mult(self, x, y):
        """Product of two elements, by label."""
        return self.elements[self.table[self.index(x)][self.index(y)]]

    @property
    def identity_element(self):
        return self.elements[self.identity]


def _check_associativity(table) -> None:
    n = len(table)
    for i in range(n):
        row_i = table[i]
        for j in range(n):
            ij = row_i[j]
            row_j = table[j]
            for k in range(n):
                if table[ij][k] != row_i[row_j[k]]:
                    raise MonoidError(f"associativity fails at ({i}, {j}, {k})")


def audit_monoid(spec: MonoidSpec) -> None:
    """Exhaustive associativity check, regardless of size (may be slow)."""
    _check_associativity(spec.table)


@dataclass(frozen=True)
class Morphism:
    """A homomorphism from words over a fixed alphabet into a finite monoid."""

    monoid: MonoidSpec
    letters: tuple[tuple[str, int], ...]  # letter -> element index

    def __post_init__(self):
        seen = set()
        for letter, idx in self.letters:
            if len(letter) != 1:
                raise MonoidError(f"letter {letter!r} must be a single character")
            if letter in seen:
                raise MonoidError(f"duplicate letter {letter!r}")
            seen.add(letter)
            if not 0 <= idx < len(self.monoid.elements):
                raise MonoidError("letter image out of range")

    @cached_property
    def _letter_index(self) -> dict[str, int]:
        return dict(self.letters)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(letter for letter, _ in self.letters)

    def eval(self, word: str):
        """Image of a word: the identity extended letter by letter."""
        table = self.monoid.table
        acc = self.monoid.identity
        for ch in word:
            try:
                acc = table[acc][self._letter_index[ch]]
            except KeyError:
                raise MonoidError(f"letter {ch!r} not in the morphism alphabet") from None
        return self.monoid.elements[acc]


def eval_word(morphism: Morphism, word: str):
    return morphism.eval(word)


def monoid_from_labels(elements, identity, mult) -> MonoidSpec:
    """Build a spec from a label-level product function."""
    elements = tuple(elements)
    index = {label: i for i, label in enumerate(elements)}
    table = tuple(
        tuple(index[mult(x, y)] for y in elements) for x in elements
    )
    return MonoidSpec(elements, index[identity], table)


def morphism_from_labels(monoid: MonoidSpec, letter_map: dict) -> Morphism:
    letters = tuple((letter, monoid.index(label)) for letter, label in letter_map.items())
    return Morphism(monoid, letters)


def nonempty_morphism(alphabet: str) -> Morphism:
    """Two elements: did the word contain any letter at all."""
    spec = monoid_from_labels(
        ("empty", "nonempty"),
        "empty",
        lambda x, y: "nonempty" if "nonempty" in (x, y) else "empty",
    )
    return morphism_from_labels(spec, {ch: "nonempty" for ch in alphabet})


def trivial_morphism(alphabet: str) -> Morphism:
    """The one-element monoid; every word maps to the identity."""
    spec = MonoidSpec(("1",), 0, ((0,),))
    return Morphism(spec, tuple((ch, 0) for ch in alphabet))


def letter_count_morphism(alphabet: str, letter: str, modulus: int) -> Morphism:
    """Occurrence count of one letter, modulo a small number."""
    if modulus < 1:
        raise MonoidError("modulus must be positive")
    if letter not in alphabet:
        raise MonoidError(f"counted letter {letter!r} not in alphabet")
    spec = monoid_from_labels(range(modulus), 0, lambda x, y: (x + y) % modulus)
    return morphism_from_labels(
        spec, {ch: (1 if ch == letter else 0) % modulus for ch in alphabet}
    )


# The five-class word morphism.  Classes: the empty word, sharps only,
# stars only, stars around exactly one closing bracket, everything else.
# "other" is absorbing: an opening bracket, a second closing bracket, or a
# sharp mixed with anything else can never be concatenated away.

_LAMBDA_ALPHABET = "[]*#"


def word_class(word: str) -> str:
    """Brute-force classifier the five-class morphism must agree with."""
    if word == "":
        return "empty"
    if all(ch == "#" for ch in word):
        return "sharps"
    if all(ch == "*" for ch in word):
        return "stars"
    if word.count("]") == 1 and all(ch in "]*" for ch in word):
        return "close"
    return "other"


def star_sharp_bracket_morphism() -> Morphism:
    reps = {"empty": "", "sharps": "#", "stars": "*", "close": "]", "other": "["}
    spec = monoid_from_labels(
        tuple(reps),
        "empty",
        lambda x, y: word_class(reps[x] + reps[y]),
    )
    return morphism_from_labels(
        spec, {ch: word_class(ch) for ch in _LAMBDA_ALPHABET}
    )


# Bounded bracket patterns.  The pattern of a word is its subsequence of
# brackets; the morphism keeps it exactly while it fits under the bound and
# collapses to an absorbing None once it grows longer.


def bracket_pattern(word: str):
    return "".join(ch for ch in word if ch in "[]")


def pattern_morphism(bound: int) -> Morphism:
    if bound < 0:
        raise MonoidError("bound must be nonnegative")
    patterns = [""]
    for length in range(1, bound + 1):
        patterns.extend("".join(p) for p in product("[]", repeat=length))
    elements = tuple(
        (flag, pat) for flag in (False, True) for pat in patterns + [None]
    )
    if len(elements) > ELEMENT_CAP:
        raise MonoidError(
            f"bound {bound} needs {len(elements)} elements, cap is {ELEMENT_CAP}"
        )

    def mult(x, y):
        flag = x[0] or y[0]
        if x[1] is None or y[1] is None:
            return (flag, None)
        pat = x[1] + y[1]
        return (flag, pat if len(pat) <= bound else None)

    spec = monoid_from_labels(elements, (False, ""), mult)
    letter_map = {
        "[": (False, "[" if bound >= 1 else None),
        "]": (False, "]" if bound >= 1 else None),
        "*": (False, ""),
        "#": (True, ""),
    }
    return morphism_from_labels(spec, letter_map)


# JSON round-trip.  Labels made of lists come back as tuples so that the
# pattern morphism's pair elements survive.


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def monoid_to_json(spec: MonoidSpec) -> dict:
    return {
        "elements": list(spec.elements),
        "identity": spec.identity,
        "table": [list(row) for row in spec.table],
    }


def monoid_from_json(data: dict) -> MonoidSpec:
    return MonoidSpec(
        tuple(_freeze(e) for e in data["elements"]),
        data["identity"],
        tuple(tuple(row) for row in data["table"]),
    )


def morphism_to_json(morphism: Morphism) -> dict:
    return {
        "monoid": monoid_to_json(morphism.monoid),
        "letters": {letter: idx for letter, idx in morphism.letters},
    }


def morphism_from_json(data: dict) -> Morphism:
    return Morphism(
        monoid_from_json(data["monoid"]),
        tuple(sorted(data["letters"].items())),
    )
