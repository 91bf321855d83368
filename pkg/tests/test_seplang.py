"""The star count, the membership oracle, and the collapse machine agree."""

import pytest
from hypothesis import given, strategies as st

from hopda.automata import run_word
from hopda.seplang import build_u_automaton, stars, u_member


def stars_oracle(word: str) -> int:
    """Independent right-to-left matcher used to pin down `stars`."""
    depth = 0
    for ch in word:
        depth += {"[": 1, "]": -1, "*": 0}[ch]
        if depth < 0:
            return 0
    unmatched = 0
    for i in range(len(word) - 1, -1, -1):
        if word[i] == "]":
            unmatched += 1
        elif word[i] == "[":
            if unmatched == 0:
                return word[:i].count("*")
            unmatched -= 1
    return 0


def words_over(alphabet, max_len):
    frontier = [""]
    for w in frontier:
        yield w
        if len(w) < max_len:
            frontier.extend(w + ch for ch in alphabet)


def test_stars_frozen_examples():
    assert stars("") == 0
    assert stars("*[*") == 1
    assert stars("**[*]*[**") == 4
    assert stars("]*[") == 0
    assert stars("[]") == 0
    assert stars("*" * 9) == 0
    with pytest.raises(ValueError):
        stars("[#")


def test_stars_agrees_with_oracle_exhaustively():
    for w in words_over("[]*", 8):
        assert stars(w) == stars_oracle(w), w


def test_star_insertion_before_last_unmatched_open():
    # inserting j stars right before the surviving '[' raises stars by j,
    # unless an over-closing prefix already pins the count at zero
    for w in words_over("[]*", 6):
        depths = [0]
        for ch in w:
            depths.append(depths[-1] + {"[": 1, "]": -1, "*": 0}[ch])
        if min(depths) < 0:
            continue
        base = stars(w)
        unmatched = 0
        pos = None
        for i in range(len(w) - 1, -1, -1):
            if w[i] == "]":
                unmatched += 1
            elif w[i] == "[":
                if unmatched == 0:
                    pos = i
                    break
                unmatched -= 1
        if pos is None:
            continue
        for j in (1, 3):
            grown = w[:pos] + "*" * j + w[pos:]
            assert stars(grown) == base + j, (w, j)


def test_u_member_frozen_examples():
    assert u_member("[#")
    assert u_member("*[*##")
    assert u_member("[]#")
    assert not u_member("[]##")
    assert u_member("#")
    assert not u_member("")
    assert not u_member("[")
    assert not u_member("[#*")
    assert not u_member("x#")
    assert u_member("]#")
    assert not u_member("]##")
    assert u_member("**[*]*[**#####")


def test_u_member_matches_direct_definition():
    for w in words_over("[]*#", 6):
        expected = any(
            w == v + "#" * (stars(v) + 1)
            for v in [w[:i] for i in range(len(w) + 1)]
            if "#" not in v
        )
        assert u_member(w) == expected, w


def test_automaton_agrees_with_oracle_exhaustively():
    a = build_u_automaton()
    for w in words_over("[]*#", 7):
        res = run_word(a, w)
        assert res.accepted == u_member(w), w
        assert not res.budget_exceeded


def test_automaton_on_long_members():
    a = build_u_automaton()
    w = "**[*]*[**"
    assert run_word(a, w + "#" * 5).accepted
    assert not run_word(a, w + "#" * 4).accepted
    assert not run_word(a, w + "#" * 6).accepted
    deep = "[" * 30 + "*" * 7 + "["
    assert run_word(a, deep + "#" * 8).accepted


@given(st.text(alphabet="[]*", max_size=20), st.integers(min_value=0, max_value=4))
def test_automaton_accepts_exactly_one_sharp_count(body, extra):
    a = build_u_automaton()
    right = stars(body) + 1
    assert run_word(a, body + "#" * right).accepted
    wrong = right + 1 + extra
    assert not run_word(a, body + "#" * wrong).accepted
