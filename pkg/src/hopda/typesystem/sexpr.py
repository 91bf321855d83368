"""Textual syntax for descriptors and derivation trees.

Rendering lives on the objects themselves (``to_sexpr``); this module
parses the same forms back, round-tripping through the interning
tables:

    (rd STATE ORDER FLAG (ass I (ELEM RD)*)*)
    (empty SYMBOL STATE)
    (read STATE TREE)
    (pop SYMBOL STATE RD)
    (push SYMBOL STATE TREE (others TREE*))

Assumption slots come highest order first and must cover a contiguous
range down to ORDER + 1. Atoms are any characters except whitespace
and parentheses.
"""

from __future__ import annotations

import re

from .descriptors import RunDescriptor, descriptor
from .trees import (DerivationTree, empty_tree, pop_tree, push_tree,
                    read_tree)

__all__ = ["SexprError", "parse_descriptor", "parse_tree",
           "render_descriptor", "render_tree"]


class SexprError(ValueError):
    pass


_TOKEN = re.compile(r"[()]|[^()\s]+")


def _read(text: str):
    tokens = _TOKEN.findall(text)
    pos = 0

    def walk():
        nonlocal pos
        if pos >= len(tokens):
            raise SexprError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            out = []
            while pos < len(tokens) and tokens[pos] != ")":
                out.append(walk())
            if pos >= len(tokens):
                raise SexprError("missing closing parenthesis")
            pos += 1
            return out
        if tok == ")":
            raise SexprError("unexpected closing parenthesis")
        return tok

    form = walk()
    if pos != len(tokens):
        raise SexprError(f"trailing input after the first form: "
                         f"{' '.join(tokens[pos:])!r}")
    return form


def _descriptor_from(form) -> RunDescriptor:
    if not (isinstance(form, list) and form and form[0] == "rd"):
        raise SexprError(f"expected an (rd ...) form, got {form!r}")
    if len(form) < 4:
        raise SexprError("an rd form needs a state, an order and a flag")
    state, order_text, flag = form[1], form[2], form[3]
    if not re.fullmatch(r"\d+", order_text or ""):
        raise SexprError(f"descriptor order must be a number, got "
                         f"{order_text!r}")
    order = int(order_text)
    if flag not in ("np", "pr"):
        raise SexprError(f"flag must be np or pr, got {flag!r}")
    slot_forms = form[4:]
    top = order + len(slot_forms)
    slots = []
    for j, sf in enumerate(slot_forms):
        if not (isinstance(sf, list) and len(sf) >= 2 and sf[0] == "ass"):
            raise SexprError(f"expected an (ass ...) slot, got {sf!r}")
        want = top - j
        if sf[1] != str(want):
            raise SexprError(
                f"assumption slots must descend from {top}; expected "
                f"order {want}, got {sf[1]!r}")
        pairs = []
        for pf in sf[2:]:
            if not (isinstance(pf, list) and len(pf) == 2
                    and isinstance(pf[0], str)):
                raise SexprError(f"expected an (element rd) pair, got {pf!r}")
            pairs.append((pf[0], _descriptor_from(pf[1])))
        slots.append(pairs)
    try:
        return descriptor(state, order, slots, flag == "pr")
    except ValueError as err:
        raise SexprError(str(err)) from err


def _tree_from(form) -> DerivationTree:
    if not (isinstance(form, list) and form and isinstance(form[0], str)):
        raise SexprError(f"expected a tree form, got {form!r}")
    head = form[0]
    if head == "empty":
        if len(form) != 3:
            raise SexprError("(empty SYMBOL STATE) takes two atoms")
        return empty_tree(form[1], form[2])
    if head == "read":
        if len(form) != 3:
            raise SexprError("(read STATE TREE) takes an atom and a tree")
        return read_tree(form[1], _tree_from(form[2]))
    if head == "pop":
        if len(form) != 4:
            raise SexprError("(pop SYMBOL STATE RD) takes two atoms and a "
                             "descriptor")
        return pop_tree(form[1], form[2], _descriptor_from(form[3]))
    if head == "push":
        if len(form) != 5 or not (isinstance(form[4], list)
                                  and form[4] and form[4][0] == "others"):
            raise SexprError("(push SYMBOL STATE TREE (others TREE*)) "
                             "malformed")
        others = [_tree_from(f) for f in form[4][1:]]
        return push_tree(form[1], form[2], _tree_from(form[3]), others)
    raise SexprError(f"unknown tree head {head!r}")


def parse_descriptor(text: str) -> RunDescriptor:
    return _descriptor_from(_read(text))


def parse_tree(text: str) -> DerivationTree:
    return _tree_from(_read(text))


def render_descriptor(d: RunDescriptor) -> str:
    return d.to_sexpr()


def render_tree(t: DerivationTree) -> str:
    return t.to_sexpr()
