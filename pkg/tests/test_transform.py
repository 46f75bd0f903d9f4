"""Per-operation checks.

The independent oracle for each construction is the checker itself: every
example builds real inputs, runs the operation, asserts the output checks and
that its conclusion is the stated multiset.  Structure is asserted where the
operation pins it down (axiom surgery cases).
"""

from pathlib import Path

import pytest

from multirole.checker import Derivation, LogicMode, RuleApp, RuleTag, check, height
from multirole.errors import (
    ComplementsOverlap,
    CutFormulaMismatch,
    LMRLMode,
    LMRLNonEmptyContext,
    NoEmptyInterpretation,
    NotDisjoint,
    PartitionInvalid,
    RoleSetMismatch,
)
from multirole.roles import RoleUniverse, complement
from multirole.surface import parse_session
from multirole.syntax import Atom, Bang, IFormula, Sequent, Var
from multirole.transform import (
    Tracer,
    admit_weakening,
    derive_full,
    identity_expand,
    mp_cut,
    one_cut,
    role_split,
    two_cut_spill,
)

U2 = RoleUniverse(2)
U3 = RoleUniverse(3)
CORPUS = Path(__file__).parent / "corpus"

MRL = LogicMode.MRL
LMRL = LogicMode.LMRL


def load(name: str):
    return parse_session((CORPUS / name).read_text())


def session(text: str):
    return parse_session(text)


def ok(d: Derivation, mode) -> Derivation:
    report = check(d, mode)
    assert report.accepted, report
    return d


def ifm(u, members, f):
    return IFormula(u.subset(members), f)


# ---------------------------------------------------------------------------
# admit_weakening

def test_weaken_extends_axiom_context():
    d = load("golden_mrl2.sexp").lookup("id_basic")
    extra = ifm(U2, [0, 1], Atom("b"))
    out = ok(admit_weakening(d, extra, MRL), MRL)
    assert out.conclusion == Sequent(d.conclusion.items + (extra,))
    # realized by extending the axiom context directly
    assert out.rule.tag is RuleTag.ID


def test_weaken_then_contract_roundtrip():
    d = load("golden_mrl2.sexp").lookup("id_basic")
    extra = ifm(U2, [0, 1], Atom("b"))
    once = admit_weakening(d, extra, MRL)
    twice = admit_weakening(once, extra, MRL)
    merged = Derivation(once.conclusion, RuleApp(RuleTag.CONTRACT, (2,)), (twice,))
    assert check(merged, MRL).accepted
    assert merged.conclusion == once.conclusion


def test_weaken_lmrl_exponential_routes_through_weaken_rule():
    d = load("golden_lmrl2.sexp").lookup("id_basic")
    extra = IFormula(U2.subset([1]), Bang(U2.ultrafilter(0), Atom("b")))
    out = ok(admit_weakening(d, extra, LMRL), LMRL)
    assert out.rule.tag is RuleTag.BANG_NEG_WEAKEN
    assert out.conclusion == Sequent(d.conclusion.items + (extra,))


def test_weaken_lmrl_general_rejected():
    d = load("golden_lmrl2.sexp").lookup("id_basic")
    with pytest.raises(LMRLMode):
        admit_weakening(d, ifm(U2, [0, 1], Atom("b")), LMRL)


def test_weaken_through_quantifier_freshens_eigenvariable():
    d = load("golden_mrl2.sexp").lookup("forall_pos")
    extra = IFormula(U2.empty, Atom("q", (Var("y"),)))
    out = ok(admit_weakening(d, extra, MRL), MRL)
    assert out.rule.eigen != "y"


# ---------------------------------------------------------------------------
# derive_full

def test_derive_full_atom_is_single_axiom():
    out = ok(derive_full(Atom("a"), Sequent(), MRL, U2), MRL)
    assert out.rule.tag is RuleTag.ID
    assert out.conclusion == Sequent((ifm(U2, [0, 1], Atom("a")),))


def test_derive_full_conjunction():
    doc = session("(session 2 mrl)(conj 0 (atom a) (atom a))")
    f = doc.objects[0][1]
    out = ok(derive_full(f, Sequent(), MRL, U2), MRL)
    assert out.rule.tag is RuleTag.CONJ_POS
    assert [p.rule.tag for p in out.premises] == [RuleTag.ID, RuleTag.ID]


def test_derive_full_negation_uses_full_preimage():
    doc = session("(session 2 mrl)(neg [1,0] (atom a))")
    f = doc.objects[0][1]
    out = ok(derive_full(f, Sequent(), MRL, U2), MRL)
    assert out.rule.tag is RuleTag.NEG
    assert out.premises[0].conclusion == Sequent((ifm(U2, [0, 1], Atom("a")),))


def test_derive_full_with_context_mrl():
    ctx = Sequent((ifm(U2, [0], Atom("b")),))
    out = ok(derive_full(Atom("a"), ctx, MRL, U2), MRL)
    assert out.conclusion == Sequent(ctx.items + (ifm(U2, [0, 1], Atom("a")),))


def test_derive_full_lmrl_rejects_context():
    with pytest.raises(LMRLNonEmptyContext):
        derive_full(Atom("a"), Sequent((ifm(U2, [0], Atom("b")),)), LMRL, U2)


# ---------------------------------------------------------------------------
# identity_expand

def test_identity_expand_atom_is_partition_surgery():
    out = ok(identity_expand(U2.subset([0]), Atom("a"), Sequent(), MRL), MRL)
    assert out.rule.tag is RuleTag.ID
    assert out.conclusion == Sequent((ifm(U2, [0], Atom("a")), ifm(U2, [1], Atom("a"))))


def test_identity_expand_negation_two_neg_nodes():
    doc = session("(session 2 mrl)(neg [1,0] (atom a))")
    f = doc.objects[0][1]
    out = ok(identity_expand(U2.subset([0]), f, Sequent(), MRL), MRL)
    tags = {out.rule.tag, out.premises[0].rule.tag}
    assert tags == {RuleTag.NEG}
    leaf = out.premises[0].premises[0]
    assert leaf.rule.tag is RuleTag.ID
    assert leaf.conclusion == Sequent((ifm(U2, [1], Atom("a")), ifm(U2, [0], Atom("a"))))


def test_identity_expand_empty_part():
    out = ok(identity_expand(U3.empty, Atom("a"), Sequent(), MRL), MRL)
    assert out.conclusion == Sequent((ifm(U3, [], Atom("a")), ifm(U3, [0, 1, 2], Atom("a"))))


# ---------------------------------------------------------------------------
# one_cut

def test_one_cut_axiom_summand():
    doc = session(
        "(session 2 mrl)"
        "(def d (d (seq (ifm [] (atom a)) (ifm [0,1] (atom a))) (rule id (at 0 1))))"
    )
    d = doc.lookup("d")
    out = ok(one_cut(d, 0, MRL), MRL)
    assert out.conclusion == Sequent((ifm(U2, [0, 1], Atom("a")),))
    assert height(out) == 1


def test_one_cut_recurses_through_negative_principal():
    doc = session(
        "(session 2 mrl)"
        "(def d (d (seq (ifm [0,1] (atom a)) (ifm [] (conj 0 (atom a) (atom a))))"
        "  (rule conj-neg-l (at 1))"
        "  (d (seq (ifm [0,1] (atom a)) (ifm [] (atom a)))"
        "     (rule id (at 0 1)))))"
    )
    d = doc.lookup("d")
    out = ok(one_cut(d, 1, MRL), MRL)
    assert out.conclusion == Sequent((ifm(U2, [0, 1], Atom("a")),))
    assert height(out) <= height(d)


def test_one_cut_context_deletion():
    doc = session(
        "(session 2 mrl)"
        "(def d (d (seq (ifm [] (atom b)) (ifm [0] (neg [1,0] (atom a))) (ifm [0] (atom a)))"
        "  (rule neg (at 1))"
        "  (d (seq (ifm [] (atom b)) (ifm [1] (atom a)) (ifm [0] (atom a)))"
        "     (rule id (at 1 2)))))"
    )
    d = doc.lookup("d")
    out = ok(one_cut(d, 0, MRL), MRL)
    assert out.conclusion == Sequent(d.conclusion.without((0,)))
    # same tree with the item deleted at every node
    assert out.rule.tag is RuleTag.NEG
    assert out.premises[0].rule.tag is RuleTag.ID


def test_one_cut_requires_empty_interpretation():
    d = load("golden_mrl2.sexp").lookup("id_basic")
    with pytest.raises(NoEmptyInterpretation):
        one_cut(d, 0, MRL)


def test_one_cut_lmrl_height_bound():
    doc = session(
        "(session 2 lmrl)"
        "(def d (d (seq (ifm [0,1] (atom a)) (ifm [] (bang 0 (atom a))))"
        "  (rule bang-neg-weaken (at 1))"
        "  (d (seq (ifm [0,1] (atom a))) (rule id (at 0)))))"
    )
    d = doc.lookup("d")
    out = ok(one_cut(d, 1, LMRL), LMRL)
    assert height(out) <= height(d)
    assert out.conclusion == Sequent((ifm(U2, [0, 1], Atom("a")),))


# ---------------------------------------------------------------------------
# role_split

def test_role_split_axiom_partition():
    doc = session("(session 2 mrl)(def d (d (seq (ifm [0,1] (atom a))) (rule id (at 0))))")
    d = doc.lookup("d")
    out = ok(role_split(d, 0, U2.subset([0]), U2.subset([1]), MRL), MRL)
    assert out.rule.tag is RuleTag.ID
    assert out.conclusion == Sequent((ifm(U2, [0], Atom("a")), ifm(U2, [1], Atom("a"))))


def test_role_split_empty_part_then_one_cut_roundtrip():
    doc = session("(session 2 mrl)(def d (d (seq (ifm [0,1] (atom a))) (rule id (at 0))))")
    d = doc.lookup("d")
    out = ok(role_split(d, 0, U2.subset([0, 1]), U2.empty, MRL), MRL)
    empty_pos = out.conclusion.items.index(ifm(U2, [], Atom("a")))
    back = ok(one_cut(out, empty_pos, MRL), MRL)
    assert back.conclusion == d.conclusion


def test_role_split_conj_pos_polarity():
    doc = session(
        "(session 3 mrl)"
        "(def d (d (seq (ifm [0,1,2] (conj 0 (atom a) (atom b))))"
        "  (rule conj-pos (at 0))"
        "  (d (seq (ifm [0,1,2] (atom a))) (rule id (at 0)))"
        "  (d (seq (ifm [0,1,2] (atom b))) (rule id (at 0)))))"
    )
    d = doc.lookup("d")
    f = d.conclusion[0].formula
    out = ok(role_split(d, 0, U3.subset([0, 2]), U3.subset([1]), MRL), MRL)
    assert out.conclusion == Sequent((IFormula(U3.subset([0, 2]), f), IFormula(U3.subset([1]), f)))
    # the witness-bearing part keeps the positive rule at the root
    assert out.rule.tag is RuleTag.CONJ_POS


def test_role_split_validates_arguments():
    doc = session("(session 2 mrl)(def d (d (seq (ifm [0,1] (atom a))) (rule id (at 0))))")
    d = doc.lookup("d")
    with pytest.raises(NotDisjoint):
        role_split(d, 0, U2.subset([0, 1]), U2.subset([1]), MRL)
    with pytest.raises(RoleSetMismatch):
        role_split(d, 0, U2.subset([0]), U2.empty, MRL)


# ---------------------------------------------------------------------------
# two_cut_spill

def test_two_cut_spill_axioms_merge():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [1] (atom a)) (ifm [0] (atom a))) (rule id (at 0 1))))"
        "(def d2 (d (seq (ifm [0] (atom a)) (ifm [1] (atom a))) (rule id (at 0 1))))"
    )
    d1, d2 = doc.lookup("d1"), doc.lookup("d2")
    out = ok(two_cut_spill(d1, 1, d2, 1, MRL), MRL)
    assert out.conclusion == Sequent(
        (ifm(U2, [1], Atom("a")), ifm(U2, [0], Atom("a")), ifm(U2, [], Atom("a")))
    )
    empty_pos = out.conclusion.items.index(ifm(U2, [], Atom("a")))
    final = ok(one_cut(out, empty_pos, MRL), MRL)
    assert final.conclusion == Sequent((ifm(U2, [1], Atom("a")), ifm(U2, [0], Atom("a"))))


def test_two_cut_spill_full_set_side():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [0] (atom b)) (ifm [0,1] (atom a))) (rule id (at 1))))"
        "(def d2 (d (seq (ifm [0] (atom a)) (ifm [1] (atom a))) (rule id (at 0 1))))"
    )
    d1, d2 = doc.lookup("d1"), doc.lookup("d2")
    out = ok(two_cut_spill(d1, 1, d2, 1, MRL), MRL)
    assert out.conclusion == Sequent(
        (ifm(U2, [0], Atom("b")), ifm(U2, [0], Atom("a")), ifm(U2, [1], Atom("a")))
    )


def test_two_cut_spill_principal_conjunction():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [1] (conj 0 (atom a) (atom b))) (ifm [0] (conj 0 (atom a) (atom b))))"
        "  (rule conj-pos (at 1))"
        "  (d (seq (ifm [1] (conj 0 (atom a) (atom b))) (ifm [0] (atom a)))"
        "     (rule conj-neg-l (at 0))"
        "     (d (seq (ifm [1] (atom a)) (ifm [0] (atom a))) (rule id (at 0 1))))"
        "  (d (seq (ifm [1] (conj 0 (atom a) (atom b))) (ifm [0] (atom b)))"
        "     (rule conj-neg-r (at 0))"
        "     (d (seq (ifm [1] (atom b)) (ifm [0] (atom b))) (rule id (at 0 1))))))"
        "(def d2 (d (seq (ifm [0] (atom a)) (ifm [1] (conj 0 (atom a) (atom b))))"
        "  (rule conj-neg-l (at 1))"
        "  (d (seq (ifm [0] (atom a)) (ifm [1] (atom a))) (rule id (at 0 1)))))"
    )
    d1, d2 = doc.lookup("d1"), doc.lookup("d2")
    f = d1.conclusion[1].formula
    out = ok(two_cut_spill(d1, 1, d2, 1, MRL), MRL)
    want = Sequent((IFormula(U2.subset([1]), f), ifm(U2, [0], Atom("a")), IFormula(U2.empty, f)))
    assert out.conclusion == want


def test_two_cut_spill_validates():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [0] (atom a)) (ifm [1] (atom a))) (rule id (at 0 1))))"
        "(def d2 (d (seq (ifm [0] (atom b)) (ifm [1] (atom b))) (rule id (at 0 1))))"
    )
    d1, d2 = doc.lookup("d1"), doc.lookup("d2")
    with pytest.raises(CutFormulaMismatch):
        two_cut_spill(d1, 0, d2, 0, MRL)
    with pytest.raises(ComplementsOverlap):
        two_cut_spill(d1, 0, d1, 0, MRL)


# ---------------------------------------------------------------------------
# mp_cut

def test_mp_cut_single_party_is_one_cut():
    doc = session(
        "(session 2 mrl)"
        "(def d (d (seq (ifm [] (atom a)) (ifm [0,1] (atom a))) (rule id (at 0 1))))"
    )
    d = doc.lookup("d")
    out = ok(mp_cut([d], [0], MRL), MRL)
    assert out.conclusion == Sequent((ifm(U2, [0, 1], Atom("a")),))


def test_mp_cut_binary_reproduces_cut():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [1] (atom b)) (ifm [0] (atom b))) (rule id (at 0 1))))"
        "(def d2 (d (seq (ifm [0] (atom b)) (ifm [1] (atom b))) (rule id (at 0 1))))"
    )
    d1, d2 = doc.lookup("d1"), doc.lookup("d2")
    out = ok(mp_cut([d1, d2], [1, 1], MRL), MRL)
    assert out.conclusion == Sequent((ifm(U2, [1], Atom("b")), ifm(U2, [0], Atom("b"))))


def test_mp_cut_three_parties():
    doc = session(
        "(session 3 mrl)"
        "(def d1 (d (seq (ifm [0] (atom a)) (ifm [1,2] (atom a))) (rule id (at 0 1))))"
        "(def d2 (d (seq (ifm [1] (atom a)) (ifm [0,2] (atom a))) (rule id (at 0 1))))"
        "(def d3 (d (seq (ifm [2] (atom a)) (ifm [0,1] (atom a))) (rule id (at 0 1))))"
    )
    ds = [doc.lookup(n) for n in ("d1", "d2", "d3")]
    out = ok(mp_cut(ds, [1, 1, 1], MRL), MRL)
    assert out.conclusion == Sequent(
        (ifm(U3, [0], Atom("a")), ifm(U3, [1], Atom("a")), ifm(U3, [2], Atom("a")))
    )


def test_mp_cut_validates_partition():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [1] (atom b)) (ifm [0] (atom b))) (rule id (at 0 1))))"
    )
    d1 = doc.lookup("d1")
    with pytest.raises(PartitionInvalid):
        mp_cut([d1, d1], [1, 1], MRL)


# ---------------------------------------------------------------------------
# instrumentation

def test_tracer_records_decreasing_metrics():
    doc = session(
        "(session 2 mrl)"
        "(def d1 (d (seq (ifm [1] (conj 0 (atom a) (atom b))) (ifm [0] (conj 0 (atom a) (atom b))))"
        "  (rule conj-pos (at 1))"
        "  (d (seq (ifm [1] (conj 0 (atom a) (atom b))) (ifm [0] (atom a)))"
        "     (rule conj-neg-l (at 0))"
        "     (d (seq (ifm [1] (atom a)) (ifm [0] (atom a))) (rule id (at 0 1))))"
        "  (d (seq (ifm [1] (conj 0 (atom a) (atom b))) (ifm [0] (atom b)))"
        "     (rule conj-neg-r (at 0))"
        "     (d (seq (ifm [1] (atom b)) (ifm [0] (atom b))) (rule id (at 0 1))))))"
        "(def d2 (d (seq (ifm [0] (atom a)) (ifm [1] (conj 0 (atom a) (atom b))))"
        "  (rule conj-neg-l (at 1))"
        "  (d (seq (ifm [0] (atom a)) (ifm [1] (atom a))) (rule id (at 0 1)))))"
    )
    tracer = Tracer()
    ok(two_cut_spill(doc.lookup("d1"), 1, doc.lookup("d2"), 1, MRL, trace=tracer), MRL)
    assert tracer.steps
    for _, _, metric, parent in tracer.steps:
        if parent is not None:
            assert metric < parent
    assert all(isinstance(line, str) for line in tracer.lines())
