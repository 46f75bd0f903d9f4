from pathlib import Path

import pytest

from multirole.checker import Derivation, LogicMode
from multirole.errors import SurfaceError
from multirole.surface import fmt_session, parse_session
from multirole.syntax import Sequent

CORPUS = Path(__file__).parent / "corpus"


def test_parse_basic_session():
    doc = parse_session("(session 2 mrl)(seq (ifm [0] (atom a)) (ifm [1] (atom a)))")
    assert doc.universe.n == 2
    assert doc.mode is LogicMode.MRL
    (name, obj), = doc.objects
    assert name == "_1"
    assert isinstance(obj, Sequent) and len(obj) == 2


def test_parse_universe_mismatch():
    with pytest.raises(SurfaceError) as e:
        parse_session("(session 2 mrl)(ifm [0,2] (atom a))")
    assert e.value.code == "universe"


def test_parse_bang_in_mrl():
    with pytest.raises(SurfaceError) as e:
        parse_session("(session 2 mrl)(bang 0 (atom a))")
    assert e.value.code == "bang-in-mrl"


def test_parse_bang_in_lmrl_ok():
    doc = parse_session("(session 2 lmrl)(bang 0 (atom a))")
    assert doc.objects


def test_parse_error_position():
    with pytest.raises(SurfaceError) as e:
        parse_session("(session 2 mrl)\n(seq (ifm [0] (oops a)))")
    assert e.value.line == 2
    assert e.value.col > 1


def test_parse_unbalanced():
    with pytest.raises(SurfaceError):
        parse_session("(session 2 mrl)(seq (ifm [0] (atom a))")


def test_filter_header():
    doc = parse_session("(session 2 mrl (filter [0]))")
    assert doc.restriction.active
    assert doc.restriction.filt.core == doc.universe.subset([0])


def test_comments_and_commas():
    doc = parse_session("; header\n(session 2 mrl)\n(seq (ifm [0,1] (atom a))) ; trailing\n")
    assert len(doc.objects) == 1


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.sexp")))
def test_fmt_idempotent_on_corpus(path):
    doc = parse_session(path.read_text())
    once = fmt_session(doc)
    again = fmt_session(parse_session(once))
    assert once == again


def test_fmt_preserves_objects():
    doc = parse_session((CORPUS / "golden_mrl2.sexp").read_text())
    reparsed = parse_session(fmt_session(doc))
    assert [n for n, _ in doc.objects] == [n for n, _ in reparsed.objects]
    for (_, a), (_, b) in zip(doc.objects, reparsed.objects):
        if isinstance(a, Derivation):
            assert a.conclusion == b.conclusion
        else:
            assert a == b


def test_binder_printing_avoids_capture():
    doc = parse_session("(session 2 mrl)(forall 0 x (atom p (var x) (var y)))")
    _, f = doc.objects[0]
    text = fmt_session(doc)
    reparsed = parse_session(text)
    assert reparsed.objects[0][1] == f
