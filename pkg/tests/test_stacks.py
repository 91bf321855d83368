import pytest
from hypothesis import given, settings, strategies as st

from hopda.stacks import (
    BlockedPop,
    Cell,
    Collapse,
    Pop,
    Push,
    Stack,
    StackError,
    apply,
    collapse,
    from_symbols,
    initial_stack,
    parse_literal,
    parse_stack,
    pop,
    positionless,
    push,
    render,
    top,
    top_symbol,
    validate,
)


def test_initial_stack_order2():
    s = initial_stack(2, "g")
    assert s == Stack(2, (Stack(1, (Cell("g", (1, 1)),)),))
    validate(s)
    assert positionless(s) == (("g",),)


def test_initial_stack_order3_positions():
    s = initial_stack(3, "a")
    cell = top(0, s)
    assert cell.pos == (1, 1, 1)
    validate(s)


def test_push1_appends_cell_with_bumped_coordinate():
    s = initial_stack(2, "a")
    s = push(s, 1, "b")
    assert positionless(s) == (("a", "b"),)
    assert top(0, s).pos == (1, 2)
    validate(s)


def test_push2_copies_top_1stack_and_rewrites_top():
    s = initial_stack(2, "a")
    s = push(s, 1, "b")
    s = push(s, 2, "c")
    assert positionless(s) == (("a", "b"), ("a", "c"))
    # the copy gets its first coordinate bumped in every cell
    assert [c.pos for c in top(1, s).items] == [(2, 1), (2, 2)]
    validate(s)


def test_push_rewrites_top_symbol_at_every_order():
    s = from_symbols(2, [["a", "b"], ["c", "d"]])
    assert positionless(push(s, 2, "e")) == (("a", "b"), ("c", "d"), ("c", "e"))
    assert positionless(push(s, 1, "e")) == (("a", "b"), ("c", "d", "e"))


def test_pop_requires_two_substacks():
    s = initial_stack(2, "a")
    with pytest.raises(BlockedPop):
        pop(s, 1)
    with pytest.raises(BlockedPop):
        pop(s, 2)
    s = push(s, 2, "b")
    assert positionless(pop(s, 2)) == (("a",),)


def test_pop1_acts_inside_topmost_1stack_only():
    s = from_symbols(2, [["a", "b"], ["c", "d"]])
    assert positionless(pop(s, 1)) == (("a", "b"), ("c",))


def test_table_style_op_sequence():
    s = from_symbols(2, [["a", "b"], ["c", "d"]])
    validate(s)
    seq = [Push(2, "e"), Pop(1), Pop(2), Pop(1), Push(1, "d"), Pop(1)]
    shapes = [positionless(s)]
    for op in seq:
        s = apply(op, s)
        validate(s)
        shapes.append(positionless(s))
    assert shapes == [
        (("a", "b"), ("c", "d")),
        (("a", "b"), ("c", "d"), ("c", "e")),
        (("a", "b"), ("c", "d"), ("c",)),
        (("a", "b"), ("c", "d")),
        (("a", "b"), ("c",)),
        (("a", "b"), ("c", "d")),
        (("a", "b"), ("c",)),
    ]


def test_push1_records_current_2stack_size_as_link():
    s = initial_stack(2, "X")
    s = push(s, 1, "Y")
    assert top(0, s).link == 1
    s = push(s, 2, "X")
    s = push(s, 2, "X")
    s = push(s, 1, "Z")
    assert top(0, s).link == 3


def test_push2_copies_links_verbatim():
    s = initial_stack(2, "X")
    s = push(s, 2, "X")
    s = push(s, 1, "Y")
    link = top(0, s).link
    assert link == 2
    s2 = push(s, 2, "W")
    copied = top(1, s2).items[-1]
    assert copied.link == link


def test_collapse_keeps_prefix_below_link():
    s = initial_stack(2, "X")
    s = push(s, 2, "X")
    s = push(s, 2, "X")    # three 1-stacks
    s = push(s, 1, "Y")    # link = 3
    s = push(s, 2, "X")    # four 1-stacks, top cell still linked at 3
    t = collapse(s)
    assert positionless(t) == (("X",), ("X",))
    validate(t)


def test_collapse_blocked_when_it_would_empty():
    s = initial_stack(2, "X")
    s = push(s, 1, "Y")    # link = 1
    with pytest.raises(BlockedPop):
        collapse(s)


def test_collapse_only_on_order2():
    s = initial_stack(3, "a")
    with pytest.raises(StackError):
        collapse(s)


def test_from_symbols_and_render_round_trip():
    lit = [["a", "b"], ["c", ("d", 2)]]
    s = from_symbols(2, lit)
    assert render(s) == "[[a,b],[c,d^2]]"
    assert parse_literal(render(s)) == [["a", "b"], ["c", ("d", 2)]]
    assert parse_stack(2, render(s)) == s


def test_parse_literal_rejects_garbage():
    for bad in ["", "[", "[]", "[a,]", "[a]b", "[a^]"]:
        with pytest.raises(StackError):
            parse_literal(bad)


def test_top_orders():
    s = from_symbols(3, [[["a"], ["b", "c"]], [["d"]]])
    assert positionless(top(3, s)) == positionless(s)
    assert positionless(top(2, s)) == (("d",),)
    assert positionless(top(1, s)) == ("d",)
    assert top_symbol(s) == "d"
    with pytest.raises(StackError):
        top(4, s)


def test_validate_rejects_bad_positions():
    s = Stack(2, (Stack(1, (Cell("a", (1, 2)),)),))
    with pytest.raises(StackError):
        validate(s)


@st.composite
def op_walks(draw):
    order = draw(st.integers(min_value=1, max_value=3))
    steps = draw(st.lists(st.tuples(st.integers(0, order), st.sampled_from("abcd")), max_size=30))
    return order, steps


@given(op_walks())
@settings(max_examples=200, deadline=None)
def test_positions_track_paths_under_random_ops(walk):
    order, steps = walk
    s = initial_stack(order, "a")
    for k, sym in steps:
        try:
            s = push(s, k, sym) if k >= 1 else pop(s, min(order, 1 + (ord(sym) % order)))
        except (BlockedPop, StackError):
            continue
        validate(s)


@given(op_walks())
@settings(max_examples=100, deadline=None)
def test_pop_undoes_push_of_same_order(walk):
    order, steps = walk
    s = initial_stack(order, "a")
    for k, sym in steps:
        if k < 1:
            continue
        s2 = push(s, k, sym)
        assert positionless(pop(s2, k)) == positionless(s)
        s = s2
