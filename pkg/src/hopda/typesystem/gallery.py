"""Worked annotated-stack fixtures for the bundled order-2 automata.

Two galleries, one per automaton:

* the chain machine ("a1") loops push1, push2, pop1, read, pop2; its
  gallery carries a full family of derivation trees plus five stacks:
  "main" and "stepped" are well-formed and one successor step apart,
  while "spare", "duplicate" and "missing" each break well-formedness
  in a different way.
* the loop machine ("a2") reads a sharp every fourth step; its gallery
  shows a well-formed order-1 column whose low measure counts one
  productive tree twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from ..automata import Automaton
from ..fixtures import load_automaton
from ..monoids import Morphism, nonempty_morphism, trivial_morphism
from .annotated import Annotated, TypeContext
from .descriptors import RunDescriptor, descriptor, red
from .trees import DerivationTree, empty_tree, pop_tree, push_tree, read_tree

__all__ = ["Gallery", "chain_gallery", "loop_gallery", "gallery",
           "gallery_names"]


@dataclass(frozen=True)
class Gallery:
    name: str
    automaton: Automaton
    morphism: Morphism
    ctx: TypeContext
    trees: Mapping[str, DerivationTree]
    descriptors: Mapping[str, RunDescriptor]
    stacks: Mapping[str, Annotated]


@lru_cache(maxsize=None)
def chain_gallery() -> Gallery:
    a = load_automaton("a1")
    m = nonempty_morphism("ab#")
    ctx = TypeContext(a, m)

    # the order-2 promise every branch ends on: land in q3, productively
    stop2 = descriptor("q3", 2, (), True)
    t: dict = {}
    for state in ("q5", "q6", "q7"):
        t[f"pop_{state}"] = pop_tree("g", state, stop2)
    t["read_a"] = read_tree("q4", t["pop_q5"])
    t["read_b"] = read_tree("q4", t["pop_q6"])
    t["read_sharp"] = read_tree("q4", t["pop_q7"])

    read1 = {}
    for flag, witness in (("np", "read_a"), ("pr", "read_sharp")):
        read1[flag] = red(1, ctx.rd(t[witness]))
        t[f"pop_q3_{flag}"] = pop_tree("g", "q3", read1[flag])
    for f1 in ("np", "pr"):
        for f2 in ("np", "pr"):
            t[f"push2_{f1}_{f2}"] = push_tree(
                "g", "q2", t[f"pop_q3_{f1}"], [t[f"pop_q3_{f2}"]])
    by_letter = {"a": ("np", "read_a"), "b": ("np", "read_b"),
                 "sharp": ("pr", "read_sharp")}
    for x, (fx, tx) in by_letter.items():
        for y, (fy, ty) in by_letter.items():
            others = {t[tx], t[ty]}
            if fx == fy and tx != ty:
                continue  # both annotations would certify one descriptor
            t[f"push1_{x}_{y}"] = push_tree(
                "g", "q1", t[f"push2_{fx}_{fy}"], others)

    t["empty_q7"] = empty_tree("g", "q7")
    t["empty_q1"] = empty_tree("g", "q1")
    t["read_sharp_then_stop"] = read_tree("q4", t["empty_q7"])
    t["pop_then_read_sharp"] = pop_tree(
        "g", "q3", red(1, ctx.rd(t["read_sharp_then_stop"])))

    c = ctx.cell
    first_column = ctx.stack(1, [c("g", [t["read_sharp_then_stop"]]),
                                 c("g", [t["pop_then_read_sharp"]])])
    stacks = {
        "main": ctx.stack(2, [
            first_column,
            ctx.stack(1, [c("g"), c("g", [t["push1_sharp_a"]])])]),
        "stepped": ctx.stack(2, [
            first_column,
            ctx.stack(1, [c("g"), c("g", [t["read_sharp"], t["read_a"]]),
                          c("g", [t["push2_pr_np"]])])]),
        "spare": ctx.stack(2, [
            first_column,
            ctx.stack(1, [c("g", [t["empty_q1"]]),
                          c("g", [t["push1_sharp_a"]])])]),
        "duplicate": ctx.stack(2, [
            first_column,
            ctx.stack(1, [c("g"),
                          c("g", [t["read_sharp"], t["read_a"], t["read_b"]]),
                          c("g", [t["push2_pr_np"]])])]),
        "missing": ctx.stack(2, [
            first_column,
            ctx.stack(1, [c("g"), c("g", [t["read_sharp"]]),
                          c("g", [t["push2_pr_np"]])])]),
    }
    descriptors = {
        "stop2": stop2,
        "read1_np": read1["np"],
        "read1_pr": read1["pr"],
    }
    return Gallery("chain", a, m, ctx, t, descriptors, stacks)


@lru_cache(maxsize=None)
def loop_gallery() -> Gallery:
    a = load_automaton("a2")
    m = trivial_morphism("#")
    ctx = TypeContext(a, m)
    one = m.monoid.identity_element

    stop2 = descriptor("q6", 2, (), True)

    def side1(state: str) -> RunDescriptor:
        return descriptor(state, 1, [[(one, stop2)]], True)

    t = {
        "read_sharp_then_pop": read_tree("q4", pop_tree("g", "q5", stop2)),
        "pop_q3": pop_tree("g", "q3", side1("q4")),
        "pop_q7": pop_tree("g", "q7", side1("q4")),
        "push2_loop": push_tree("g", "q1", pop_tree("g", "q2", side1("q3")),
                                [pop_tree("g", "q6", side1("q7"))]),
    }
    c = ctx.cell
    stacks = {
        "column": ctx.stack(1, [
            c("g", [t["read_sharp_then_pop"]]),
            c("g", [t["pop_q3"], t["pop_q7"]]),
            c("g", [t["push2_loop"]])]),
    }
    descriptors = {"stop2": stop2, "side1_q4": side1("q4")}
    return Gallery("loop", a, m, ctx, t, descriptors, stacks)


def gallery_names():
    return ("chain", "loop")


def gallery(name: str) -> Gallery:
    if name == "chain":
        return chain_gallery()
    if name == "loop":
        return loop_gallery()
    raise KeyError(f"no gallery named {name!r}; pick from "
                   f"{', '.join(gallery_names())}")
