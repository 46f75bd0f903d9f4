import pytest

from multirole.checker import FilterRestriction, LogicMode, check
from multirole.errors import QuantifierInGoal
from multirole.roles import RoleUniverse
from multirole.search import (
    EnumSpace,
    SearchConfig,
    completeness_depth,
    default_space,
    enumerate_formulas,
    enumerate_goals,
    prove,
    verify_construct,
)
from multirole.surface import parse_session
from multirole.syntax import Atom, IFormula, Sequent

U2 = RoleUniverse(2)
MRL_CFG = SearchConfig(max_depth=8, mode=LogicMode.MRL)


def goal(text: str) -> Sequent:
    doc = parse_session(f"(session 2 mrl){text}")
    return doc.objects[0][1]


def lgoal(text: str) -> Sequent:
    doc = parse_session(f"(session 2 lmrl){text}")
    return doc.objects[0][1]


def test_prove_axiom_instance():
    d = prove(goal("(seq (ifm [0] (atom a)) (ifm [1] (atom a)))"), MRL_CFG)
    assert d is not None
    from multirole.checker import height

    assert height(d) == 1


def test_prove_underivable_single_part():
    g = goal("(seq (ifm [0] (atom a)))")
    depth = completeness_depth(g, MRL_CFG.contraction_budget, 1)
    assert prove(g, SearchConfig(max_depth=depth, mode=LogicMode.MRL)) is None


def test_prove_positive_conjunction():
    d = prove(goal("(seq (ifm [0,1] (conj 0 (atom a) (atom a))))"), MRL_CFG)
    assert d is not None


def test_prove_soundness_on_samples():
    for text, mode in [
        ("(seq (ifm [1] (imp [1,0] 0 (atom a) (atom a))))", LogicMode.MRL),
        ("(seq (ifm [0,1] (neg [1,0] (neg [1,0] (atom a)))))", LogicMode.MRL),
    ]:
        d = prove(goal(text), SearchConfig(max_depth=8, mode=mode))
        assert d is not None
        assert check(d, mode).accepted


def test_prove_exponential_goal():
    g = lgoal("(seq (ifm [1] (bang 0 (atom a))) (ifm [0] (bang 0 (atom a))))")
    d = prove(g, SearchConfig(max_depth=8, mode=LogicMode.LMRL))
    assert d is not None


def test_prove_rejects_quantifiers():
    with pytest.raises(QuantifierInGoal):
        prove(goal("(seq (ifm [0,1] (forall 0 x (atom p (var x)))))"), MRL_CFG)


def test_prove_deterministic():
    g = goal("(seq (ifm [0,1] (conj 0 (atom a) (atom a))) (ifm [0] (atom a)))")
    d1 = prove(g, MRL_CFG)
    d2 = prove(g, MRL_CFG)
    assert d1 is not None and d2 is not None
    from multirole.surface import fmt_derivation

    assert fmt_derivation(d1) == fmt_derivation(d2)


def test_prove_monotone_in_depth():
    g = goal("(seq (ifm [0,1] (conj 0 (atom a) (atom a))))")
    found_at = None
    for depth in range(1, 9):
        d = prove(g, SearchConfig(max_depth=depth, mode=LogicMode.MRL))
        if d is not None and found_at is None:
            found_at = depth
        if found_at is not None:
            assert d is not None
    assert found_at is not None


def test_enumerate_goals_counts():
    space = EnumSpace(
        universe=U2, atoms=("a",), max_measure=0, endos=(), witnesses=(), max_items=1
    )
    singles = list(enumerate_goals(space, LogicMode.MRL))
    assert len(singles) == 4

    space2 = EnumSpace(
        universe=U2, atoms=("a",), max_measure=0, endos=(), witnesses=(), max_items=2
    )
    goals = list(enumerate_goals(space2, LogicMode.MRL))
    assert len(goals) == 4 + 10  # pairs with repetition over 4 i-formulas


def test_enumerate_formulas_cover_endomorphisms():
    space = EnumSpace(
        universe=U2,
        atoms=("a",),
        max_measure=1,
        endos=(U2.identity(), U2.endo([1, 0])),
        witnesses=(0,),
        include_imp=False,
        include_bang=False,
    )
    fs = enumerate_formulas(space, LogicMode.MRL)
    from multirole.syntax import Neg

    negs = [f for f in fs if isinstance(f, Neg)]
    assert {n.endo for n in negs} == {U2.identity(), U2.endo([1, 0])}


def test_verify_construct_conclusion_side_passes():
    space = default_space(2)
    rep = verify_construct(space, U2.filter([0]))
    assert rep.ok


def test_verify_construct_literal_generalization_fails():
    # contraction at a hypothesis-side interpretation derives an
    # excluded-middle shape whose disjuncts are underivable, refuting the
    # unrestricted reading of the decomposition property
    space = default_space(2)
    rep = verify_construct(space, U2.filter([0]), conclusion_side=False)
    assert not rep.ok
    g = lambda t: goal(t)  # noqa: E731
    bad = Sequent((IFormula(U2.subset([1]),
                            parse_session("(session 2 mrl)(conj 0 (atom a) (neg [1,0] (atom a)))").objects[0][1]),))
    restriction = FilterRestriction(U2.filter([0]))
    cfg = SearchConfig(max_depth=10, mode=LogicMode.MRL, restriction=restriction)
    assert prove(bad, cfg) is not None
    assert prove(Sequent((IFormula(U2.subset([1]), Atom("a")),)), cfg) is None


def test_trivial_filter_restriction_accepts_golden_corpus():
    from pathlib import Path

    trivial = FilterRestriction(U2.filter([0, 1]))
    doc = parse_session((Path(__file__).parent / "corpus" / "golden_mrl2.sexp").read_text())
    from multirole.checker import Derivation

    for name, obj in doc.objects:
        if isinstance(obj, Derivation):
            assert check(obj, LogicMode.MRL, trivial).accepted, name
