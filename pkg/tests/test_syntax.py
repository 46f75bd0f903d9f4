from hypothesis import given, strategies as st

from multirole.checker import LogicMode
from multirole.roles import RoleUniverse
from multirole.surface import fmt_formula, parse_formula
from multirole.syntax import (
    App,
    Atom,
    Conj,
    Forall,
    IFormula,
    Impl,
    Neg,
    Sequent,
    Var,
    forall,
    free_vars,
    fresh_name,
    instantiate,
    measure,
    substitute,
    tensor,
)

U2 = RoleUniverse(2)
U0 = U2.ultrafilter(0)


def fml(text: str):
    return parse_formula(text, U2, LogicMode.LMRL)


def test_substitute_base():
    f = fml("(atom p (var x))")
    assert substitute(f, "x", App("c")) == fml("(atom p (cst c))")


def test_substitute_under_binder():
    f = fml("(forall 0 x (atom p (var x) (var y)))")
    got = substitute(f, "y", App("c"))
    assert got == fml("(forall 0 x (atom p (var x) (cst c)))")


def test_substitute_shadowed():
    f = fml("(forall 0 x (atom p (var x)))")
    assert substitute(f, "x", App("c")) == f


def test_substitute_noop_when_not_free():
    f = fml("(atom p (var x))")
    assert substitute(f, "z", App("c")) == f


def test_measure_examples():
    assert measure(fml("(atom p (cst c))")) == 0
    q = fml("(forall 0 x (atom p (var x)))")
    assert measure(q) == 1
    assert measure(instantiate(q.body, App("t"))) == 0
    assert measure(fml("(neg [1,0] (conj 0 (atom a) (atom b)))")) == 2


def test_measure_invariant_under_substitution():
    f = fml("(conj 0 (atom p (var x)) (neg [0,1] (atom q (var x))))")
    assert measure(substitute(f, "x", App("f", (Var("y"),)))) == measure(f)


def test_tensor_is_identity_implication():
    a, b = Atom("a"), Atom("b")
    t = tensor(U0, a, b)
    assert t == Impl(U2.identity(), U0, a, b)
    assert t != Impl(U2.endo([1, 0]), U0, a, b)


def test_free_vars():
    assert free_vars(fml("(atom p (var x) (var y))")) == {"x", "y"}
    assert free_vars(fml("(forall 0 x (atom p (var x) (var y)))")) == {"y"}
    assert free_vars(Sequent()) == set()


def test_alpha_equivalence_is_structural():
    f = parse_formula("(forall 0 x (atom p (var x)))", U2, LogicMode.MRL)
    g = parse_formula("(forall 0 z (atom p (var z)))", U2, LogicMode.MRL)
    assert f == g
    assert hash(f) == hash(g)


def test_forall_constructor_binds():
    body = Atom("p", (Var("x"), Var("y")))
    q = forall(U0, "x", body)
    assert free_vars(q) == {"y"}
    assert instantiate(q.body, App("c")) == Atom("p", (App("c"), Var("y")))


def test_sequent_multiset_equality():
    a = IFormula(U2.subset([0]), Atom("a"))
    b = IFormula(U2.subset([1]), Atom("a"))
    assert Sequent((a, b)) == Sequent((b, a))
    assert Sequent((a, a, b)) != Sequent((a, b))
    assert hash(Sequent((a, b))) == hash(Sequent((b, a)))


def test_fresh_name_avoids():
    assert fresh_name(set()) == "v0"
    assert fresh_name({"v0", "v1", "x"}) == "v2"


formulas = st.deferred(
    lambda: st.one_of(
        st.sampled_from([Atom("a"), Atom("b"), Atom("p", (Var("x"),))]),
        st.builds(Neg, st.sampled_from([U2.identity(), U2.endo([1, 0])]), formulas),
        st.builds(Conj, st.sampled_from([U0, U2.ultrafilter(1)]), formulas, formulas),
        st.builds(lambda b: forall(U0, "x", b), formulas),
    )
)


@given(formulas)
def test_print_parse_roundtrip(f):
    printed = fmt_formula(f)
    assert parse_formula(printed, U2, LogicMode.LMRL) == f


@given(formulas)
def test_substitution_congruence(f):
    got = substitute(f, "x", App("c"))
    assert measure(got) == measure(f)
    if "x" not in free_vars(f):
        assert got == f
    else:
        assert "x" not in free_vars(got)
