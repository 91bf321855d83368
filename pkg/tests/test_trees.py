import pytest

from hopda.seplang import build_u_automaton
from hopda.monoids import nonempty_morphism
from hopda.typesystem import (
    TreeError,
    chain_gallery,
    check_tree,
    check_tree_full,
    descriptor,
    empty_tree,
    loop_gallery,
    parse_tree,
    pop_tree,
    push_tree,
    read_tree,
    render_tree,
    tree_depth,
    tree_symbol,
)

G = chain_gallery()
L = loop_gallery()

STOP2 = "(rd q3 2 pr)"
SIGMA4 = "(rd q4 0 {f} (ass 2 (nonempty (rd q3 2 pr))) (ass 1))"


def rd_sexpr(gallery, name):
    return gallery.ctx.rd(gallery.trees[name]).to_sexpr()


def test_pop_trees_borrow_the_order2_promise():
    assert rd_sexpr(G, "pop_q5") == \
        "(rd q5 0 np (ass 2 (empty (rd q3 2 pr))) (ass 1))"
    assert G.ctx.rd(G.trees["pop_q5"]).ass(2)[0][1].to_sexpr() == STOP2


def test_read_trees_mark_productive_letter_only():
    assert rd_sexpr(G, "read_a") == SIGMA4.format(f="np")
    assert rd_sexpr(G, "read_b") == SIGMA4.format(f="np")
    assert rd_sexpr(G, "read_sharp") == SIGMA4.format(f="pr")
    # a and b land on the same conclusion through different branches
    assert G.trees["read_a"] is not G.trees["read_b"]
    assert G.ctx.rd(G.trees["read_a"]) is G.ctx.rd(G.trees["read_b"])


def test_push_tree_conclusions():
    assert rd_sexpr(G, "push1_sharp_a") == \
        "(rd q1 0 pr (ass 2 (nonempty (rd q3 2 pr))) (ass 1))"
    assert rd_sexpr(G, "push2_pr_np") == (
        "(rd q2 0 np (ass 2 (nonempty (rd q3 2 pr)))"
        " (ass 1 (empty (rd q4 1 pr (ass 2 (nonempty (rd q3 2 pr)))))"
        " (nonempty (rd q4 1 np (ass 2 (nonempty (rd q3 2 pr)))))))")


def test_leaf_conclusions():
    assert rd_sexpr(G, "empty_q7") == "(rd q7 0 np (ass 2) (ass 1))"
    assert rd_sexpr(G, "read_sharp_then_stop") == "(rd q4 0 pr (ass 2) (ass 1))"
    assert rd_sexpr(G, "pop_then_read_sharp") == \
        "(rd q3 0 np (ass 2) (ass 1 (empty (rd q4 1 pr (ass 2)))))"


def test_loop_gallery_conclusions():
    assert L.ctx.rd(L.trees["push2_loop"]).flag == "np"
    assert L.ctx.rd(L.trees["read_sharp_then_pop"]).flag == "pr"
    assert rd_sexpr(L, "read_sharp_then_pop") == \
        "(rd q4 0 pr (ass 2 (1 (rd q6 2 pr))) (ass 1))"


def test_depths():
    assert tree_depth(G.trees["pop_q5"]) == 0
    assert tree_depth(G.trees["empty_q7"]) == 0
    assert tree_depth(G.trees["read_sharp"]) == 1
    assert tree_depth(G.trees["push2_pr_np"]) == 1
    assert tree_depth(G.trees["push1_sharp_a"]) == 2


def test_tree_symbol_descends_read_chains():
    assert tree_symbol(G.trees["read_sharp_then_stop"]) == "g"
    assert tree_symbol(G.trees["push1_sharp_a"]) == "g"


def test_push_with_two_trees_for_one_descriptor_is_rejected():
    # read_a and read_b are distinct trees with the same conclusion, so
    # together they cannot annotate one pushed cell
    t = push_tree("g", "q1", G.trees["push2_np_np"],
                  [G.trees["read_a"], G.trees["read_b"]])
    with pytest.raises(TreeError, match="same descriptor"):
        check_tree(G.automaton, G.morphism, t)


def test_push_child_must_match_the_rewritten_state():
    t = push_tree("g", "q1", G.trees["read_a"], [G.trees["read_a"]])
    with pytest.raises(TreeError):
        check_tree(G.automaton, G.morphism, t)


def test_transition_shape_mismatches_are_rejected():
    stop2 = descriptor("q3", 2, (), True)
    # q1 pushes, it does not pop
    with pytest.raises(TreeError):
        check_tree(G.automaton, G.morphism, pop_tree("g", "q1", stop2))
    # q5 has no read transition
    with pytest.raises(TreeError):
        check_tree(G.automaton, G.morphism,
                   read_tree("q5", G.trees["pop_q5"]))
    with pytest.raises(TreeError):
        check_tree(G.automaton, G.morphism, empty_tree("g", "nostate"))
    with pytest.raises(TreeError):
        check_tree(G.automaton, G.morphism, empty_tree("h", "q1"))


def test_pop_may_borrow_an_unfulfillable_assumption():
    # nothing in the machine ever fulfils this promise, the rule only
    # checks state and order
    wild = descriptor(
        "q4", 1, ((("empty", descriptor("q1", 2, (), True)),),), True)
    sym, rd = check_tree(G.automaton, G.morphism, pop_tree("g", "q3", wild))
    assert sym == "g"
    assert rd.ass(1) == (("empty", wild),)


def test_pop_assumptions_sit_at_order_one_or_higher():
    with pytest.raises(ValueError):
        pop_tree("g", "q3", descriptor("q4", 0, ((), ())))


def test_push_info_exposes_the_interface_composer():
    checked = check_tree_full(G.automaton, G.morphism,
                              G.trees["push1_sharp_a"])
    info = checked.push
    assert info.k == 1
    assert info.new_symbol == "g"
    assert info.composer.low == 0 and info.composer.high == 1
    assert info.composer.flag == "np"


def test_interning_and_sexpr_round_trip():
    again = push_tree("g", "q1", G.trees["push2_pr_np"],
                      [G.trees["read_sharp"], G.trees["read_a"]])
    assert again is G.trees["push1_sharp_a"]
    for name in ("pop_q5", "read_sharp", "push1_sharp_a", "empty_q7"):
        t = G.trees[name]
        assert parse_tree(render_tree(t)) is t


def test_plain_automata_only():
    u = build_u_automaton()
    m = nonempty_morphism("".join(u.input_alphabet))
    with pytest.raises(TreeError):
        check_tree(u, m, empty_tree(u.stack_alphabet[0], u.init_state))
