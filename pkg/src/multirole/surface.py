"""S-expression surface syntax: parsing and canonical printing.

A session file is a header followed by named or bare objects:

    (session 2 mrl)
    (def d1 (d (seq (ifm [0] (atom a)) (ifm [1] (atom a)))
               (rule id (at 0 1))))

Grammar:  terms   (var x) | (cst c) | (app f t...)
          formulas (atom p t...) | (neg [F] A) | (conj r A B)
                   (imp [F] r A B) | (bang r A) | (forall r x A)
          (ifm [roles] A), (seq ifm...), (d <seq> (rule <tag> <params>) <d...>)
          rule params: (at p...) (left p...) (witness t) (eigen x)
Commas count as whitespace; ';' starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .checker import Derivation, FilterRestriction, LogicMode, RuleApp, RuleTag, UNRESTRICTED
from .errors import SurfaceError, UniverseMismatch
from .roles import Endomorphism, PrincipalFilter, PrincipalUltrafilter, RoleSubset, RoleUniverse
from .syntax import (
    App,
    Atom,
    Bang,
    Bound,
    Conj,
    Forall,
    Formula,
    IFormula,
    Impl,
    Neg,
    Sequent,
    Term,
    Var,
)

# ---------------------------------------------------------------------------
# tokenizing / generic s-expressions

_PUNCT = "()[]"


@dataclass(frozen=True)
class _Tok:
    kind: str  # "(" ")" "[" "]" "sym" "int"
    value: object
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r,":
            i += 1
            col += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in _PUNCT:
            toks.append(_Tok(c, c, line, col))
            i += 1
            col += 1
            continue
        j = i
        while j < n and text[j] not in " \t\r\n,;" + _PUNCT:
            j += 1
        word = text[i:j]
        if word.lstrip("-").isdigit():
            toks.append(_Tok("int", int(word), line, col))
        else:
            toks.append(_Tok("sym", word, line, col))
        col += j - i
        i = j
    return toks


@dataclass
class _Node:
    """Parsed node: a bracket/paren list or an atom token."""

    kind: str  # "list" "vec" "sym" "int"
    items: list = field(default_factory=list)
    value: object = None
    line: int = 0
    col: int = 0

    def err(self, message: str, code: str = "syntax") -> SurfaceError:
        return SurfaceError(message, code=code, line=self.line, col=self.col)


def _read_nodes(text: str) -> list[_Node]:
    toks = _tokenize(text)
    top: list[_Node] = []
    stack: list[_Node] = []
    for t in toks:
        if t.kind in "([":
            node = _Node("list" if t.kind == "(" else "vec", [], None, t.line, t.col)
            (stack[-1].items if stack else top).append(node)
            stack.append(node)
        elif t.kind in ")]":
            if not stack:
                raise SurfaceError("unbalanced closer", line=t.line, col=t.col)
            expect = ")" if stack[-1].kind == "list" else "]"
            if t.kind != expect:
                raise SurfaceError(f"expected {expect}", line=t.line, col=t.col)
            stack.pop()
        else:
            node = _Node(t.kind, [], t.value, t.line, t.col)
            (stack[-1].items if stack else top).append(node)
    if stack:
        open_node = stack[-1]
        raise SurfaceError("unclosed bracket", line=open_node.line, col=open_node.col)
    return top


# ---------------------------------------------------------------------------
# readers

@dataclass
class SessionDoc:
    universe: RoleUniverse
    mode: LogicMode
    restriction: FilterRestriction
    objects: list[tuple[str, object]]

    def lookup(self, name: str):
        for k, v in self.objects:
            if k == name:
                return v
        raise KeyError(name)

    def of_type(self, cls) -> list[tuple[str, object]]:
        return [(k, v) for k, v in self.objects if isinstance(v, cls)]


class _Reader:
    def __init__(self, universe: RoleUniverse, mode: LogicMode):
        self.universe = universe
        self.mode = mode

    def _sym(self, node: _Node, what: str) -> str:
        if node.kind != "sym":
            raise node.err(f"expected {what}")
        return str(node.value)

    def _int(self, node: _Node, what: str) -> int:
        if node.kind != "int":
            raise node.err(f"expected {what}")
        return int(node.value)

    def _head(self, node: _Node) -> str:
        if node.kind != "list" or not node.items or node.items[0].kind != "sym":
            raise node.err("expected a (head ...) form")
        return str(node.items[0].value)

    def roleset(self, node: _Node) -> RoleSubset:
        if node.kind != "vec":
            raise node.err("expected a role list like [0,2]")
        try:
            return self.universe.subset(self._int(x, "role index") for x in node.items)
        except UniverseMismatch as e:
            raise node.err(str(e), code="universe")

    def endo(self, node: _Node) -> Endomorphism:
        if node.kind != "vec":
            raise node.err("expected an endomorphism image like [1,0]")
        try:
            return self.universe.endo([self._int(x, "role index") for x in node.items])
        except UniverseMismatch as e:
            raise node.err(str(e), code="universe")

    def uf(self, node: _Node) -> PrincipalUltrafilter:
        w = self._int(node, "ultrafilter witness")
        try:
            return self.universe.ultrafilter(w)
        except UniverseMismatch as e:
            raise node.err(str(e), code="universe")

    def term(self, node: _Node, bound: tuple[str, ...]) -> Term:
        head = self._head(node)
        args = node.items[1:]
        if head == "var":
            if len(args) != 1:
                raise node.err("(var x) takes one name")
            name = self._sym(args[0], "variable name")
            if name in bound:
                return Bound(bound.index(name))
            return Var(name)
        if head == "cst":
            if len(args) != 1:
                raise node.err("(cst c) takes one name")
            return App(self._sym(args[0], "constant name"), ())
        if head == "app":
            if not args:
                raise node.err("(app f t...) needs a function symbol")
            return App(self._sym(args[0], "function symbol"), tuple(self.term(a, bound) for a in args[1:]))
        raise node.err(f"unknown term form ({head} ...)")

    def formula(self, node: _Node, bound: tuple[str, ...] = ()) -> Formula:
        head = self._head(node)
        args = node.items[1:]
        if head == "atom":
            if not args:
                raise node.err("(atom p t...) needs a predicate symbol")
            return Atom(self._sym(args[0], "predicate symbol"), tuple(self.term(a, bound) for a in args[1:]))
        if head == "neg":
            if len(args) != 2:
                raise node.err("(neg [F] A) takes an endomorphism and a formula")
            return Neg(self.endo(args[0]), self.formula(args[1], bound))
        if head == "conj":
            if len(args) != 3:
                raise node.err("(conj r A B) takes a witness and two formulas")
            return Conj(self.uf(args[0]), self.formula(args[1], bound), self.formula(args[2], bound))
        if head == "imp":
            if len(args) != 4:
                raise node.err("(imp [F] r A B) takes an endomorphism, a witness, and two formulas")
            return Impl(self.endo(args[0]), self.uf(args[1]), self.formula(args[2], bound), self.formula(args[3], bound))
        if head == "bang":
            if self.mode is LogicMode.MRL:
                raise node.err("exponential formula in an MRL session", code="bang-in-mrl")
            if len(args) != 2:
                raise node.err("(bang r A) takes a witness and a formula")
            return Bang(self.uf(args[0]), self.formula(args[1], bound))
        if head == "forall":
            if len(args) != 3:
                raise node.err("(forall r x A) takes a witness, a variable, and a formula")
            name = self._sym(args[1], "bound variable")
            return Forall(self.uf(args[0]), self.formula(args[2], (name,) + bound))
        raise node.err(f"unknown formula form ({head} ...)")

    def iformula(self, node: _Node) -> IFormula:
        if self._head(node) != "ifm" or len(node.items) != 3:
            raise node.err("expected (ifm [roles] A)")
        return IFormula(self.roleset(node.items[1]), self.formula(node.items[2]))

    def sequent(self, node: _Node) -> Sequent:
        if self._head(node) != "seq":
            raise node.err("expected (seq ifm...)")
        return Sequent(self.iformula(x) for x in node.items[1:])

    def rule(self, node: _Node) -> RuleApp:
        if self._head(node) != "rule" or len(node.items) < 2:
            raise node.err("expected (rule <tag> <params...>)")
        tag_name = self._sym(node.items[1], "rule tag")
        try:
            tag = RuleTag(tag_name)
        except ValueError:
            raise node.err(f"unknown rule tag {tag_name}")
        at: tuple[int, ...] = ()
        left: tuple[int, ...] | None = None
        witness: Term | None = None
        eigen: str | None = None
        for param in node.items[2:]:
            phead = self._head(param)
            pargs = param.items[1:]
            if phead == "at":
                at = tuple(self._int(x, "position") for x in pargs)
            elif phead == "left":
                left = tuple(self._int(x, "position") for x in pargs)
            elif phead == "witness":
                if len(pargs) != 1:
                    raise param.err("(witness t) takes one term")
                witness = self.term(pargs[0], ())
            elif phead == "eigen":
                if len(pargs) != 1:
                    raise param.err("(eigen x) takes one name")
                eigen = self._sym(pargs[0], "eigenvariable")
            else:
                raise param.err(f"unknown rule parameter ({phead} ...)")
        return RuleApp(tag, at, left, witness, eigen)

    def derivation(self, node: _Node) -> Derivation:
        # iterative: a derivation file may nest to heights of 10^4 and beyond
        made: dict[int, Derivation] = {}
        stack: list[tuple[_Node, bool]] = [(node, False)]
        while stack:
            nd, expanded = stack.pop()
            if self._head(nd) != "d" or len(nd.items) < 3:
                raise nd.err("expected (d <seq> (rule ...) <subderivations...>)")
            subs = nd.items[3:]
            if not expanded:
                stack.append((nd, True))
                for s in reversed(subs):
                    stack.append((s, False))
                continue
            made[id(nd)] = Derivation(
                self.sequent(nd.items[1]),
                self.rule(nd.items[2]),
                tuple(made[id(s)] for s in subs),
            )
        return made[id(node)]

    def object(self, node: _Node):
        head = self._head(node)
        if head == "seq":
            return self.sequent(node)
        if head == "ifm":
            return self.iformula(node)
        if head == "d":
            return self.derivation(node)
        return self.formula(node)


def parse_session(text: str) -> SessionDoc:
    nodes = _read_nodes(text)
    if not nodes or nodes[0].kind != "list" or not nodes[0].items or nodes[0].items[0].value != "session":
        raise SurfaceError("file must start with (session <n> <mrl|lmrl> ...)", line=1, col=1)
    header = nodes[0]
    args = header.items[1:]
    if len(args) < 2 or args[0].kind != "int" or args[1].kind != "sym":
        raise header.err("expected (session <n> <mrl|lmrl> ...)")
    try:
        universe = RoleUniverse(int(args[0].value))
    except UniverseMismatch as e:
        raise header.err(str(e), code="universe")
    try:
        mode = LogicMode(str(args[1].value))
    except ValueError:
        raise args[1].err(f"unknown mode {args[1].value}")
    reader = _Reader(universe, mode)
    restriction = UNRESTRICTED
    if len(args) > 3:
        raise header.err("too many session header fields")
    if len(args) == 3:
        filt = args[2]
        if reader._head(filt) != "filter" or len(filt.items) != 2:
            raise filt.err("expected (filter [cores])")
        restriction = FilterRestriction(PrincipalFilter(reader.roleset(filt.items[1])))

    objects: list[tuple[str, object]] = []
    auto = 0
    for node in nodes[1:]:
        if node.kind == "list" and node.items and node.items[0].value == "def":
            if len(node.items) != 3:
                raise node.err("expected (def <name> <object>)")
            name = reader._sym(node.items[1], "object name")
            objects.append((name, reader.object(node.items[2])))
        else:
            auto += 1
            objects.append((f"_{auto}", reader.object(node)))
    return SessionDoc(universe, mode, restriction, objects)


def parse_formula(text: str, universe: RoleUniverse, mode: LogicMode) -> Formula:
    nodes = _read_nodes(text)
    if len(nodes) != 1:
        raise SurfaceError("expected a single formula", line=1, col=1)
    return _Reader(universe, mode).formula(nodes[0])


def parse_iformula(text: str, universe: RoleUniverse, mode: LogicMode) -> IFormula:
    nodes = _read_nodes(text)
    if len(nodes) != 1:
        raise SurfaceError("expected a single i-formula", line=1, col=1)
    return _Reader(universe, mode).iformula(nodes[0])


def parse_roleset(text: str, universe: RoleUniverse) -> RoleSubset:
    nodes = _read_nodes(text)
    if len(nodes) != 1:
        raise SurfaceError("expected a single role list", line=1, col=1)
    return _Reader(universe, LogicMode.MRL).roleset(nodes[0])


# ---------------------------------------------------------------------------
# canonical printing

_BINDER_CANDIDATES = ("x", "y", "z", "u", "w")


def _pick_binder(avoid: set[str]) -> str:
    for c in _BINDER_CANDIDATES:
        if c not in avoid:
            return c
    k = 0
    while f"x{k}" in avoid:
        k += 1
    return f"x{k}"


def fmt_roles(r: RoleSubset) -> str:
    return "[" + ",".join(str(i) for i in r.members()) + "]"


def fmt_endo(f: Endomorphism) -> str:
    return "[" + ",".join(str(v) for v in f.image) + "]"


def fmt_term(t: Term, env: tuple[str, ...] = ()) -> str:
    if isinstance(t, Var):
        return f"(var {t.name})"
    if isinstance(t, Bound):
        return f"(var {env[t.index]})"
    if not t.args:
        return f"(cst {t.sym})"
    return f"(app {t.sym} " + " ".join(fmt_term(a, env) for a in t.args) + ")"


def fmt_formula(f: Formula, env: tuple[str, ...] = ()) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f"(atom {f.sym})"
        return f"(atom {f.sym} " + " ".join(fmt_term(a, env) for a in f.args) + ")"
    if isinstance(f, Neg):
        return f"(neg {fmt_endo(f.endo)} {fmt_formula(f.body, env)})"
    if isinstance(f, Conj):
        return f"(conj {f.uf.witness} {fmt_formula(f.left, env)} {fmt_formula(f.right, env)})"
    if isinstance(f, Impl):
        return f"(imp {fmt_endo(f.endo)} {f.uf.witness} {fmt_formula(f.left, env)} {fmt_formula(f.right, env)})"
    if isinstance(f, Bang):
        return f"(bang {f.uf.witness} {fmt_formula(f.body, env)})"
    if isinstance(f, Forall):
        from .syntax import free_vars

        name = _pick_binder(free_vars(f.body) | set(env))
        return f"(forall {f.uf.witness} {name} {fmt_formula(f.body, (name,) + env)})"
    raise TypeError(f"not a formula: {f!r}")


def fmt_iformula(x: IFormula) -> str:
    return f"(ifm {fmt_roles(x.roles)} {fmt_formula(x.formula)})"


def fmt_sequent(s: Sequent) -> str:
    if not s.items:
        return "(seq)"
    return "(seq " + " ".join(fmt_iformula(x) for x in s.items) + ")"


def fmt_rule(r: RuleApp) -> str:
    parts = [f"(at {' '.join(map(str, r.at))})" if r.at else "(at)"]
    if r.tag is RuleTag.IMP_POS:
        left = r.left or ()
        parts.append(f"(left {' '.join(map(str, left))})" if left else "(left)")
    if r.witness is not None:
        parts.append(f"(witness {fmt_term(r.witness)})")
    if r.eigen is not None:
        parts.append(f"(eigen {r.eigen})")
    return f"(rule {r.tag.value} " + " ".join(parts) + ")"


def fmt_derivation(d: Derivation) -> str:
    # iterative pre-order emission: linear in output size, safe for chains of
    # height 10^4 and for shared subtrees; indentation saturates so deep
    # chains stay linear in total text
    lines: list[str] = []
    stack: list[tuple[Derivation, int, bool]] = [(d, 0, False)]
    while stack:
        node, depth, closing = stack.pop()
        if closing:
            lines[-1] += ")"
            continue
        pad = "  " * min(depth, 60)
        lines.append(f"{pad}(d {fmt_sequent(node.conclusion)}")
        lines.append(f"{pad}   {fmt_rule(node.rule)}")
        stack.append((node, depth, True))
        for p in reversed(node.premises):
            stack.append((p, depth + 1, False))
    return "\n".join(lines)


def fmt_object(obj) -> str:
    if isinstance(obj, Derivation):
        return fmt_derivation(obj)
    if isinstance(obj, Sequent):
        return fmt_sequent(obj)
    if isinstance(obj, IFormula):
        return fmt_iformula(obj)
    return fmt_formula(obj)


def fmt_session(doc: SessionDoc) -> str:
    header = f"(session {doc.universe.n} {doc.mode.value}"
    if doc.restriction.active:
        header += f" (filter {fmt_roles(doc.restriction.filt.core)})"
    header += ")"
    chunks = [header]
    for name, obj in doc.objects:
        body = fmt_object(obj)
        if name.startswith("_"):
            chunks.append(body)
        elif isinstance(obj, Derivation):
            chunks.append(f"(def {name}\n{body})")
        else:
            chunks.append(f"(def {name} {body})")
    return "\n\n".join(chunks) + "\n"
