"""Terms, formulas, i-formulas, and sequents.

Binders use de Bruijn indices internally, so alpha-equivalent formulas are
structurally equal and substitution is capture-avoiding by construction.
Named variables only appear free; the surface syntax regenerates bound names
when printing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .roles import Endomorphism, PrincipalUltrafilter, RoleSubset


@dataclass(frozen=True)
class Var:
    """Free first-order variable."""

    name: str


@dataclass(frozen=True)
class Bound:
    """Bound variable occurrence: distance in binders to its quantifier."""

    index: int


@dataclass(frozen=True)
class App:
    """Function application; constants are 0-ary applications."""

    sym: str
    args: tuple[Term, ...] = ()


Term = Union[Var, Bound, App]


@dataclass(frozen=True)
class Atom:
    sym: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Neg:
    endo: Endomorphism
    body: Formula


@dataclass(frozen=True)
class Conj:
    uf: PrincipalUltrafilter
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Impl:
    endo: Endomorphism
    uf: PrincipalUltrafilter
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Bang:
    uf: PrincipalUltrafilter
    body: Formula


@dataclass(frozen=True)
class Forall:
    """Universal quantifier; the body binds de Bruijn index 0."""

    uf: PrincipalUltrafilter
    body: Formula


Formula = Union[Atom, Neg, Conj, Impl, Bang, Forall]


@dataclass(frozen=True)
class IFormula:
    """Interpretation of a formula at a role subset."""

    roles: RoleSubset
    formula: Formula


class Sequent:
    """Multiset of i-formulas.

    The item tuple is kept in presentation order (rule applications address
    items positionally) but equality and hashing are multiset-based.
    """

    __slots__ = ("items", "_mkey")

    def __init__(self, items: Iterable[IFormula] = ()):
        self.items: tuple[IFormula, ...] = tuple(items)
        self._mkey: tuple[str, ...] | None = None

    def mkey(self) -> tuple[str, ...]:
        if self._mkey is None:
            self._mkey = tuple(sorted(map(repr, self.items)))
        return self._mkey

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Sequent) and self.mkey() == other.mkey()

    def __hash__(self) -> int:
        return hash(self.mkey())

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> IFormula:
        return self.items[i]

    def __repr__(self) -> str:
        return f"Sequent({list(self.items)!r})"

    def count(self, item: IFormula) -> int:
        return self.items.count(item)

    def without(self, positions: Iterable[int]) -> tuple[IFormula, ...]:
        drop = set(positions)
        return tuple(x for i, x in enumerate(self.items) if i not in drop)


def measure(f: Formula) -> int:
    """Count of logical constructors; terms contribute nothing.

    Instantiating a quantified body never changes the count, so instances are
    strictly smaller than the quantified formula.
    """
    if isinstance(f, Atom):
        return 0
    if isinstance(f, (Neg, Bang, Forall)):
        return 1 + measure(f.body)
    if isinstance(f, (Conj, Impl)):
        return 1 + measure(f.left) + measure(f.right)
    raise TypeError(f"not a formula: {f!r}")


def seq_measure(s: Sequent) -> int:
    return sum(measure(x.formula) for x in s)


def _term_subst(t: Term, name: str, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.name == name else t
    if isinstance(t, Bound):
        return t
    return App(t.sym, tuple(_term_subst(a, name, repl) for a in t.args))


def substitute(f: Formula, name: str, t: Term) -> Formula:
    """Capture-avoiding substitution of `t` for the free variable `name`."""
    if isinstance(f, Atom):
        return Atom(f.sym, tuple(_term_subst(a, name, t) for a in f.args))
    if isinstance(f, Neg):
        return Neg(f.endo, substitute(f.body, name, t))
    if isinstance(f, Conj):
        return Conj(f.uf, substitute(f.left, name, t), substitute(f.right, name, t))
    if isinstance(f, Impl):
        return Impl(f.endo, f.uf, substitute(f.left, name, t), substitute(f.right, name, t))
    if isinstance(f, Bang):
        return Bang(f.uf, substitute(f.body, name, t))
    if isinstance(f, Forall):
        return Forall(f.uf, substitute(f.body, name, t))
    raise TypeError(f"not a formula: {f!r}")


def _term_open(t: Term, depth: int, repl: Term) -> Term:
    if isinstance(t, Bound):
        if t.index == depth:
            return repl
        if t.index > depth:
            return Bound(t.index - 1)
        return t
    if isinstance(t, App):
        return App(t.sym, tuple(_term_open(a, depth, repl) for a in t.args))
    return t


def _open(f: Formula, depth: int, repl: Term) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.sym, tuple(_term_open(a, depth, repl) for a in f.args))
    if isinstance(f, Neg):
        return Neg(f.endo, _open(f.body, depth, repl))
    if isinstance(f, Conj):
        return Conj(f.uf, _open(f.left, depth, repl), _open(f.right, depth, repl))
    if isinstance(f, Impl):
        return Impl(f.endo, f.uf, _open(f.left, depth, repl), _open(f.right, depth, repl))
    if isinstance(f, Bang):
        return Bang(f.uf, _open(f.body, depth, repl))
    if isinstance(f, Forall):
        return Forall(f.uf, _open(f.body, depth + 1, repl))
    raise TypeError(f"not a formula: {f!r}")


def instantiate(body: Formula, t: Term) -> Formula:
    """Open one binder level: the body of Forall(U, body) at witness `t`.

    `t` must be locally closed (no Bound occurrences), which holds for every
    term built from the public constructors.
    """
    return _open(body, 0, t)


def _term_abstract(t: Term, depth: int, name: str) -> Term:
    if isinstance(t, Var):
        return Bound(depth) if t.name == name else t
    if isinstance(t, Bound):
        # a pre-existing index at or above this binder shifts out of its way
        return Bound(t.index + 1) if t.index >= depth else t
    return App(t.sym, tuple(_term_abstract(a, depth, name) for a in t.args))


def _abstract(f: Formula, depth: int, name: str) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.sym, tuple(_term_abstract(a, depth, name) for a in f.args))
    if isinstance(f, Neg):
        return Neg(f.endo, _abstract(f.body, depth, name))
    if isinstance(f, Conj):
        return Conj(f.uf, _abstract(f.left, depth, name), _abstract(f.right, depth, name))
    if isinstance(f, Impl):
        return Impl(f.endo, f.uf, _abstract(f.left, depth, name), _abstract(f.right, depth, name))
    if isinstance(f, Bang):
        return Bang(f.uf, _abstract(f.body, depth, name))
    if isinstance(f, Forall):
        return Forall(f.uf, _abstract(f.body, depth + 1, name))
    raise TypeError(f"not a formula: {f!r}")


def forall(uf: PrincipalUltrafilter, name: str, body: Formula) -> Forall:
    """Bind the free variable `name` in `body` under a universal quantifier."""
    return Forall(uf, _abstract(body, 0, name))


def tensor(uf: PrincipalUltrafilter, left: Formula, right: Formula) -> Impl:
    """Multiplicative shorthand: implication at the identity endomorphism."""
    return Impl(Endomorphism(tuple(range(uf.n))), uf, left, right)


def _term_free_vars(t: Term, acc: set[str]) -> None:
    if isinstance(t, Var):
        acc.add(t.name)
    elif isinstance(t, App):
        for a in t.args:
            _term_free_vars(a, acc)


def free_vars(x: Formula | Term | IFormula | Sequent) -> set[str]:
    acc: set[str] = set()
    _collect_free(x, acc)
    return acc


def _collect_free(x, acc: set[str]) -> None:
    if isinstance(x, Sequent):
        for item in x:
            _collect_free(item, acc)
    elif isinstance(x, IFormula):
        _collect_free(x.formula, acc)
    elif isinstance(x, (Var, Bound, App)):
        _term_free_vars(x, acc)
    elif isinstance(x, Atom):
        for a in x.args:
            _term_free_vars(a, acc)
    elif isinstance(x, (Neg, Bang, Forall)):
        _collect_free(x.body, acc)
    elif isinstance(x, (Conj, Impl)):
        _collect_free(x.left, acc)
        _collect_free(x.right, acc)
    else:
        raise TypeError(f"no free variables defined for {x!r}")


def contains_bang(f: Formula) -> bool:
    if isinstance(f, Bang):
        return True
    if isinstance(f, Atom):
        return False
    if isinstance(f, (Neg, Forall)):
        return contains_bang(f.body)
    return contains_bang(f.left) or contains_bang(f.right)


def contains_forall(f: Formula) -> bool:
    if isinstance(f, Forall):
        return True
    if isinstance(f, Atom):
        return False
    if isinstance(f, (Neg, Bang)):
        return contains_forall(f.body)
    return contains_forall(f.left) or contains_forall(f.right)


_FRESH_RE = re.compile(r"^v(\d+)$")


def fresh_name(avoid: set[str]) -> str:
    """Smallest v<k> not in `avoid`; deterministic for reproducible output."""
    k = 0
    for name in avoid:
        m = _FRESH_RE.match(name)
        if m:
            k = max(k, int(m.group(1)) + 1)
    return f"v{k}"
