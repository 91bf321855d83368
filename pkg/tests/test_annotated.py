import pytest

from hopda.fixtures import load_automaton
from hopda.typesystem import (
    CapExceeded,
    EmptyTree,
    TypesysError,
    annotated_run,
    chain_gallery,
    conf,
    is_singular,
    loop_gallery,
    merge,
    red,
    restrict,
    restrict_loose,
    st,
    stack_to_json,
    successor,
    top_cell,
    type_of,
    well_formed,
    well_formed_report,
)

G = chain_gallery()
L = loop_gallery()


def sexprs(descriptors):
    return sorted(d.to_sexpr() for d in descriptors)


def two_tree_cell():
    # distinct conclusions, so legal in one cell
    return G.ctx.cell("g", [G.trees["read_sharp"], G.trees["read_a"]])


def test_gallery_stacks_are_well_formed_and_singular():
    for name in ("main", "stepped"):
        s = G.stacks[name]
        assert well_formed(s)
        assert is_singular(s)
    assert well_formed(L.stacks["column"])


def test_type_sets():
    assert sexprs(type_of(G.stacks["main"])) == ["(rd q1 2 pr)"]
    assert sexprs(type_of(G.stacks["stepped"])) == ["(rd q2 2 pr)"]
    assert sexprs(type_of(G.stacks["main"].items[0])) == \
        ["(rd q3 1 pr (ass 2))"]
    cell = G.ctx.cell("g", [G.trees["read_sharp_then_stop"]])
    assert sexprs(type_of(cell)) == ["(rd q4 0 pr (ass 2) (ass 1))"]


def test_conf_of_singular_stack():
    c = conf(G.stacks["main"])
    assert c.state == "q1"
    from hopda.stacks import positionless
    assert positionless(c.stack) == (("g", "g"), ("g", "g"))
    with pytest.raises(TypesysError):
        conf(G.ctx.stack(1, [two_tree_cell()]))


def test_rejection_reasons_are_distinguishable():
    reports = {name: well_formed_report(G.stacks[name])
               for name in ("spare", "duplicate", "missing")}
    assert not any(r.ok for r in reports.values())
    assert reports["spare"].reason.startswith("spare-annotations:")
    assert reports["duplicate"].reason.startswith("duplicate-descriptor:")
    assert reports["missing"].reason.startswith("missing-annotations:")
    assert reports["duplicate"].where == "top / item 2 / prefix / item 2"


def test_reduction_collapse_is_reported():
    col0 = G.stacks["main"].items[0]
    bad = G.ctx.stack(2, [col0, G.ctx.stack(1, [two_tree_cell()])])
    r = well_formed_report(bad)
    assert not r.ok
    assert r.reason.startswith("reduction-collapse:")


def test_restrict_identity_and_empty():
    for s in (G.stacks["main"], L.stacks["column"]):
        assert restrict(s, type_of(s)) == s
        stripped = restrict(s, frozenset())
        assert st(stripped) == st(s)
        assert type_of(stripped) == frozenset()


def test_restrict_rejects_descriptors_outside_the_type():
    stop2 = next(iter(type_of(G.stacks["main"])))
    with pytest.raises(TypesysError):
        restrict(G.stacks["main"].items[0], frozenset([stop2]))
    loose = restrict_loose(G.stacks["main"].items[0], frozenset([stop2]))
    assert type_of(loose) == frozenset()


def test_restrict_splits_a_two_typed_cell_and_merge_reassembles():
    u = G.ctx.stack(1, [two_tree_cell()])
    assert well_formed(u) and not is_singular(u)
    pr = red(1, G.ctx.rd(G.trees["read_sharp"]))
    np = red(1, G.ctx.rd(G.trees["read_a"]))
    upr = restrict(u, frozenset([pr]))
    unp = restrict(u, frozenset([np]))
    assert [len(c.trees) for c in upr.items] == [1]
    assert type_of(upr) == frozenset([pr])
    assert merge(upr, unp) == u
    assert merge(unp, upr) == u


def test_merge_laws():
    s = G.stacks["main"]
    assert merge(s, s) == s
    assert merge(s, restrict(s, frozenset())) == s
    t = L.stacks["column"]
    assert merge(t, t) == t
    with pytest.raises(TypesysError):
        merge(s, G.stacks["stepped"])  # different underlying stacks


def test_segmentwise_restriction_of_the_top_descriptor():
    s = G.stacks["main"]
    sigma = G.ctx.rd(G.trees["push1_sharp_a"])
    assert restrict(s, frozenset([red(2, sigma)])) == s
    order2_prefix = G.ctx.stack(2, s.items[:-1])
    want2 = frozenset(d for _, d in sigma.ass(2))
    assert restrict(order2_prefix, want2) == order2_prefix
    assert type_of(order2_prefix) == want2


def test_annotated_run_replays_the_machine_and_halts():
    run = annotated_run(G.automaton, G.morphism, G.stacks["main"])
    assert len(run) == 10
    assert run.run.word == "#a#"
    assert run.stacks[1] == G.stacks["stepped"]
    shapes = [st(s) for s in run.stacks]
    assert shapes == [
        (("g", "g"), ("g", "g")),
        (("g", "g"), ("g", "g", "g")),
        (("g", "g"), ("g", "g", "g"), ("g", "g", "g")),
        (("g", "g"), ("g", "g", "g"), ("g", "g")),
        (("g", "g"), ("g", "g", "g"), ("g", "g")),
        (("g", "g"), ("g", "g", "g")),
        (("g", "g"), ("g", "g")),
        (("g", "g"), ("g", "g")),
        (("g", "g"),),
        (("g",),),
        (("g",),),
    ]
    for s in run.stacks:
        assert well_formed(s)
        assert is_singular(s)
    last = run.stacks[-1]
    assert successor(G.automaton, G.morphism, last) is None
    assert isinstance(last.items[-1].items[-1].trees[0], EmptyTree)


def test_annotated_run_cap():
    with pytest.raises(CapExceeded):
        annotated_run(G.automaton, G.morphism, G.stacks["main"], cap=3)


def test_successor_rejects_foreign_machines_and_wide_tops():
    other = load_automaton("a2")
    with pytest.raises(TypesysError):
        successor(other, G.morphism, G.stacks["main"])
    wide = G.ctx.stack(2, [G.ctx.stack(1, [two_tree_cell()])])
    with pytest.raises(TypesysError):
        successor(G.automaton, G.morphism, wide)


def test_json_export_shares_trees_by_id():
    out = stack_to_json(G.stacks["main"])
    assert out["order"] == 2
    assert out["stack"] == [[["g", [0]], ["g", [1]]], [["g", []], ["g", [2]]]]
    assert [t["id"] for t in out["trees"]] == [0, 1, 2]
    assert all(t["tree"].startswith("(") for t in out["trees"])


def test_restriction_splits_along_segments():
    from hopda.typesystem import stack_from_segments

    main = G.stacks["main"]
    sigma = G.ctx.rd(G.trees["push1_sharp_a"])
    s2 = G.ctx.stack(2, main.items[:-1])
    s1 = G.ctx.stack(1, main.items[-1].items[:-1])
    cell = main.items[-1].items[-1]
    lhs = restrict(main, {red(2, sigma)})
    rhs = stack_from_segments([
        restrict(s2, frozenset(d for _, d in sigma.ass(2))),
        restrict(s1, frozenset(d for _, d in sigma.ass(1))),
        restrict(cell, frozenset([sigma])),
    ])
    assert lhs == rhs == main


def test_merge_of_disjointly_typed_annotations_of_one_literal():
    t = G.trees
    a = G.ctx.stack(2, [G.ctx.stack(1, [G.ctx.cell("g", [t["empty_q7"]])])])
    b = G.ctx.stack(2, [G.ctx.stack(1, [G.ctx.cell(
        "g", [t["read_sharp_then_stop"]])])])
    assert not (type_of(a) & type_of(b))
    got = merge(a, b)
    assert got == G.ctx.stack(2, [G.ctx.stack(1, [G.ctx.cell(
        "g", [t["empty_q7"], t["read_sharp_then_stop"]])])])
    assert well_formed(got)
    assert type_of(got) == type_of(a) | type_of(b)


def test_run_from_an_empty_topped_stack_has_length_zero():
    s = G.ctx.stack(2, [G.ctx.stack(1, [G.ctx.cell(
        "g", [G.trees["empty_q7"]])])])
    assert well_formed(s) and is_singular(s)
    r = annotated_run(G.automaton, G.morphism, s)
    assert len(r) == 0
    assert r.stacks == (s,)
    assert r.run.word == ""


def test_return_prefix_predicted_by_an_assumption():
    # the order-2 assumption of the top descriptor of "main" promises a
    # 2-return reading a word with the stated image, after which the
    # leftover stack carries exactly the assumed descriptor
    from hopda.history import is_return

    run = annotated_run(G.automaton, G.morphism, G.stacks["main"])
    sigma = G.ctx.rd(G.trees["push1_sharp_a"])
    ((label, target),) = sigma.ass(2)
    prefix = run.run.subrun(0, 8)
    assert is_return(prefix, 2)
    assert G.morphism.eval(prefix.word) == label
    assert type_of(run.stacks[8]) == frozenset([target])


def test_successor_soundness_on_randomized_fixtures(annotated_run_batch):
    from hopda.stacks import positionless

    for fx in annotated_run_batch:
        stacks = fx.run.stacks
        run = fx.run.run
        assert len(stacks) == len(run.steps) + 1
        for i, s in enumerate(stacks):
            assert well_formed(s)
            assert is_singular(s)
            ref = run.at(i)
            assert conf(s).state == ref.state
            assert st(s) == positionless(ref.stack)
        for s in stacks[:-1]:
            (tree,) = top_cell(s).trees
            assert not isinstance(tree, EmptyTree)
        (last,) = top_cell(stacks[-1]).trees
        assert isinstance(last, EmptyTree)
        assert successor(fx.automaton, fx.morphism, stacks[-1]) is None
