"""Constructive admissible rules: weakening, full-set interpretation, identity
expansion, one-sequent cut, role splitting, binary cut with spill, and the
n-ary multiparty cut.

Every operation consumes checked derivations and produces a derivation of the
admissible rule's conclusion; outputs always re-check.  The two lexicographic
inductions (role splitting and binary cut, both ordered by cut-formula
measure and then input height) are instrumented: every recursive step asserts
strict metric decrease, so a case analysis bug surfaces as a hard
MetricRegression instead of divergence.

Designated occurrences are tracked as (item value, count) rather than by
position.  Equal i-formulas are interchangeable under multiset semantics, and
contraction rules grow the count: splitting or cutting through a contraction
handles all merged copies simultaneously, which is what keeps the height
component of the metric honest.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import replace

from .checker import (
    Derivation,
    LogicMode,
    RuleApp,
    RuleTag,
    check,
    height,
    iter_nodes,
)
from .deep import maybe_deep
from .errors import (
    ComplementsOverlap,
    CutFormulaMismatch,
    LMRLMode,
    LMRLNonEmptyContext,
    MetricRegression,
    NoEmptyInterpretation,
    NotDisjoint,
    PartitionInvalid,
    RoleSetMismatch,
    TransformError,
)
from .roles import RoleSubset, RoleUniverse, complement, is_partition, preimage, uf_contains
from .syntax import (
    Atom,
    Bang,
    Conj,
    Forall,
    Formula,
    IFormula,
    Impl,
    Neg,
    Sequent,
    Term,
    Var,
    free_vars,
    fresh_name,
    instantiate,
    measure,
    substitute,
)
from .syntax import _term_subst  # noqa: F401  (shared term-level substitution)


class Tracer:
    """Records one line per induction step: (operation, case, metric)."""

    def __init__(self):
        self.steps: list[tuple[str, str, tuple, tuple | None]] = []

    def record(self, op: str, case: str, metric: tuple, parent: tuple | None):
        self.steps.append((op, case, metric, parent))

    def lines(self):
        for op, case, metric, parent in self.steps:
            yield f"{op} case={case} metric={metric}" + (f" parent={parent}" if parent else "")


def _metric_step(tracer: Tracer | None, op: str, case: str, metric: tuple, parent: tuple | None):
    if parent is not None and not metric < parent:
        raise MetricRegression(f"{op}/{case}: metric {metric} does not decrease below {parent}")
    if tracer is not None:
        tracer.record(op, case, metric, parent)


# ---------------------------------------------------------------------------
# multiset and node-building helpers

def _ms(items) -> Counter:
    return Counter(items)


def _count(items, item) -> int:
    return sum(1 for x in items if x == item)


def _remove(items: tuple, item: IFormula, k: int) -> tuple:
    if k == 0:
        return tuple(items)
    out = []
    left = k
    for x in items:
        if left and x == item:
            left -= 1
        else:
            out.append(x)
    if left:
        raise TransformError(f"cannot remove {k} copies of designated item; {k - left} present")
    return tuple(out)


def _remove_ms(items: tuple, sub: Counter) -> tuple:
    need = Counter(sub)
    out = []
    for x in items:
        if need.get(x, 0):
            need[x] -= 1
        else:
            out.append(x)
    if +need:
        raise TransformError("premise does not contain the expected sub-items")
    return tuple(out)


def _mk_id(parts, ctx) -> Derivation:
    ctx = tuple(ctx)
    parts = tuple(parts)
    concl = Sequent(ctx + parts)
    at = tuple(range(len(ctx), len(ctx) + len(parts)))
    return Derivation(concl, RuleApp(RuleTag.ID, at), ())


def _mk1(tag, premise, ctx, principal, *, witness=None, eigen=None) -> Derivation:
    ctx = tuple(ctx)
    concl = Sequent(ctx + (principal,))
    return Derivation(concl, RuleApp(tag, (len(ctx),), witness=witness, eigen=eigen), (premise,))


def _mk_conj_pos(prem_l, prem_r, ctx, principal) -> Derivation:
    ctx = tuple(ctx)
    concl = Sequent(ctx + (principal,))
    return Derivation(concl, RuleApp(RuleTag.CONJ_POS, (len(ctx),)), (prem_l, prem_r))


def _mk_imp_pos(prem1, prem2, ctx1, ctx2, principal) -> Derivation:
    ctx1 = tuple(ctx1)
    ctx2 = tuple(ctx2)
    concl = Sequent(ctx1 + ctx2 + (principal,))
    rule = RuleApp(RuleTag.IMP_POS, (len(ctx1) + len(ctx2),), left=tuple(range(len(ctx1))))
    return Derivation(concl, rule, (prem1, prem2))


def _neg_exponential(item: IFormula) -> bool:
    return isinstance(item.formula, Bang) and not uf_contains(item.formula.uf, item.roles)


def _contract_down(d: Derivation, target: Counter, mode: LogicMode) -> Derivation:
    """Merge surplus copies until the conclusion equals `target`.

    In linear mode only negatively-interpreted exponentials may be merged;
    anything else here is a bug in the case analysis, reported hard.
    """
    cur = _ms(d.conclusion.items)
    if cur == target:
        return d
    surplus = cur - target
    if +(target - cur):
        raise TransformError("conclusion is missing items required by the target")
    for item, extra in surplus.items():
        if target.get(item, 0) == 0:
            raise TransformError("surplus item does not occur in the contraction target")
        for _ in range(extra):
            if mode is LogicMode.LMRL:
                if not _neg_exponential(item):
                    raise TransformError("linear mode cannot merge a non-exponential duplicate")
                tag = RuleTag.BANG_NEG_CONTRACT
            else:
                tag = RuleTag.CONTRACT
            ctx = _remove(d.conclusion.items, item, 2)
            d = _mk1(tag, d, ctx, item)
    return d


def _weaken_exponentials(d: Derivation, extras) -> Derivation:
    for item in extras:
        if not _neg_exponential(item):
            raise TransformError("linear weakening requires negatively-interpreted exponentials")
        d = _mk1(RuleTag.BANG_NEG_WEAKEN, d, d.conclusion.items, item)
    return d


# ---------------------------------------------------------------------------
# derivation-level substitution (used for eigenvariable management)

def _names_of(d: Derivation) -> set[str]:
    names: set[str] = set()
    for node in iter_nodes(d):
        for item in node.conclusion:
            names |= free_vars(item)
        if node.rule.witness is not None:
            names |= free_vars(node.rule.witness)
        if node.rule.eigen is not None:
            names.add(node.rule.eigen)
    return names


def subst_derivation(d: Derivation, name: str, term: Term) -> Derivation:
    """Substitute a term for a free variable throughout a derivation.

    Structure and height are preserved; eigenvariables that would capture the
    substituted term are renamed on the fly.
    """
    rule = d.rule
    premises = d.premises
    if rule.tag is RuleTag.FORALL_POS:
        if rule.eigen == name:
            # the eigenvariable condition guarantees `name` is not free here
            return d
        if rule.eigen in free_vars(term):
            z = fresh_name(_names_of(d) | free_vars(term) | {name})
            premises = (subst_derivation(premises[0], rule.eigen, Var(z)),)
            rule = replace(rule, eigen=z)
    new_premises = tuple(subst_derivation(p, name, term) for p in premises)
    if rule.witness is not None:
        rule = replace(rule, witness=_term_subst(rule.witness, name, term))
    concl = Sequent(tuple(IFormula(x.roles, substitute(x.formula, name, term)) for x in d.conclusion))
    return Derivation(concl, rule, new_premises)


def _freshen_eigen(d: Derivation, avoid: set[str]) -> Derivation:
    """Rename the root eigenvariable of a ForallPos node away from `avoid`."""
    assert d.rule.tag is RuleTag.FORALL_POS
    if d.rule.eigen not in avoid:
        return d
    z = fresh_name(avoid | _names_of(d))
    prem = subst_derivation(d.premises[0], d.rule.eigen, Var(z))
    return Derivation(d.conclusion, replace(d.rule, eigen=z), (prem,))


# ---------------------------------------------------------------------------
# rule views and generic rebuilding

def _principal(d: Derivation) -> IFormula:
    return d.conclusion[d.rule.at[0]]


def _ctx_items(d: Derivation) -> tuple[IFormula, ...]:
    return d.conclusion.without(d.rule.at)


def _sub_items(d: Derivation) -> list[list[IFormula]]:
    """The fixed per-premise items the last rule adds beyond the context."""
    p = _principal(d)
    f = p.formula
    roles = p.roles
    tag = d.rule.tag
    if tag is RuleTag.CONTRACT:
        return [[p, p]]
    if tag is RuleTag.NEG:
        return [[IFormula(preimage(f.endo, roles), f.body)]]
    if tag is RuleTag.CONJ_NEG_L:
        return [[IFormula(roles, f.left)]]
    if tag is RuleTag.CONJ_NEG_R:
        return [[IFormula(roles, f.right)]]
    if tag is RuleTag.CONJ_POS:
        return [[IFormula(roles, f.left)], [IFormula(roles, f.right)]]
    if tag is RuleTag.IMP_NEG:
        return [[IFormula(preimage(f.endo, roles), f.left), IFormula(roles, f.right)]]
    if tag is RuleTag.IMP_POS:
        return [[IFormula(preimage(f.endo, roles), f.left)], [IFormula(roles, f.right)]]
    if tag is RuleTag.BANG_POS or tag is RuleTag.BANG_NEG_DERELICT:
        return [[IFormula(roles, f.body)]]
    if tag is RuleTag.BANG_NEG_WEAKEN:
        return [[]]
    if tag is RuleTag.BANG_NEG_CONTRACT:
        return [[p, p]]
    if tag is RuleTag.FORALL_NEG:
        return [[IFormula(roles, instantiate(f.body, d.rule.witness))]]
    if tag is RuleTag.FORALL_POS:
        return [[IFormula(roles, instantiate(f.body, Var(d.rule.eigen)))]]
    raise AssertionError(f"unhandled tag {tag}")


def _rebuild(d: Derivation, new_premises: tuple[Derivation, ...], *, eigen: str | None = None) -> Derivation:
    """Reapply d's last rule over transformed premises.

    Contexts are read off the new premises by multiset difference with the
    rule's fixed sub-items, so any context rewriting done by the recursion is
    inherited automatically.
    """
    tag = d.rule.tag
    p = _principal(d)
    subs = _sub_items(d)
    if tag is RuleTag.FORALL_POS and eigen is not None and eigen != d.rule.eigen:
        subs = [[IFormula(p.roles, instantiate(p.formula.body, Var(eigen)))]]
    ctxs = [
        _remove_ms(prem.conclusion.items, _ms(sub))
        for prem, sub in zip(new_premises, subs)
    ]
    if tag is RuleTag.IMP_POS:
        return _mk_imp_pos(new_premises[0], new_premises[1], ctxs[0], ctxs[1], p)
    if tag is RuleTag.CONJ_POS:
        return _mk_conj_pos(new_premises[0], new_premises[1], ctxs[0], p)
    return _mk1(
        tag,
        new_premises[0],
        ctxs[0],
        p,
        witness=d.rule.witness,
        eigen=eigen if eigen is not None else d.rule.eigen,
    )


# ---------------------------------------------------------------------------
# admissible weakening

def _weaken(d: Derivation, extra: IFormula) -> Derivation:
    tag = d.rule.tag
    items = d.conclusion.items
    if tag is RuleTag.ID:
        return Derivation(Sequent(items + (extra,)), d.rule, ())
    if tag is RuleTag.CONJ_POS:
        prem = tuple(_weaken(p, extra) for p in d.premises)
        return Derivation(Sequent(items + (extra,)), d.rule, prem)
    if tag is RuleTag.IMP_POS:
        prem = (_weaken(d.premises[0], extra), d.premises[1])
        rule = replace(d.rule, left=tuple(d.rule.left or ()) + (len(items),))
        return Derivation(Sequent(items + (extra,)), rule, prem)
    if tag is RuleTag.FORALL_POS:
        d = _freshen_eigen(d, free_vars(extra))
        prem = (_weaken(d.premises[0], extra),)
        return Derivation(Sequent(items + (extra,)), d.rule, prem)
    prem = (_weaken(d.premises[0], extra),)
    return Derivation(Sequent(items + (extra,)), d.rule, prem)


def admit_weakening(d: Derivation, extra: IFormula, mode: LogicMode, *, trace: Tracer | None = None) -> Derivation:
    """Add an i-formula to a derived sequent.

    General weakening is an MRL lemma; in linear mode only negatively
    interpreted exponentials may be added (through the exponential weakening
    rule).
    """
    _ensure_checked(d, mode)
    if mode is LogicMode.LMRL:
        if _neg_exponential(extra):
            return _mk1(RuleTag.BANG_NEG_WEAKEN, d, d.conclusion.items, extra)
        raise LMRLMode("general weakening is not admissible in linear mode")
    return maybe_deep(height(d), _weaken, d, extra)


# ---------------------------------------------------------------------------
# full-set interpretation and identity expansion

def _full(f: Formula, ctx: tuple[IFormula, ...], mode: LogicMode, u: RoleUniverse) -> Derivation:
    principal = IFormula(u.full, f)
    if isinstance(f, Atom):
        return _mk_id((principal,), ctx)
    if isinstance(f, Neg):
        # the preimage of the full set is the full set for every total map
        return _mk1(RuleTag.NEG, _full(f.body, ctx, mode, u), ctx, principal)
    if isinstance(f, Conj):
        return _mk_conj_pos(_full(f.left, ctx, mode, u), _full(f.right, ctx, mode, u), ctx, principal)
    if isinstance(f, Impl):
        return _mk_imp_pos(_full(f.left, ctx, mode, u), _full(f.right, (), mode, u), ctx, (), principal)
    if isinstance(f, Bang):
        if mode is not LogicMode.LMRL:
            raise LMRLMode("exponential formulas require linear mode")
        return _mk1(RuleTag.BANG_POS, _full(f.body, ctx, mode, u), ctx, principal)
    if isinstance(f, Forall):
        z = fresh_name(free_vars(Sequent(ctx)) | free_vars(f))
        prem = _full(instantiate(f.body, Var(z)), ctx, mode, u)
        return _mk1(RuleTag.FORALL_POS, prem, ctx, principal, eigen=z)
    raise TypeError(f"not a formula: {f!r}")


def derive_full(f: Formula, ctx: Sequent, mode: LogicMode, universe: RoleUniverse,
                *, trace: Tracer | None = None) -> Derivation:
    """Derive the full-set interpretation of any formula over a context.

    The full set belongs to every ultrafilter and is its own preimage under
    every endomorphism, so only the axiom and positively-conditioned rules
    (plus the polarity-free negation rule) appear.
    """
    if mode is LogicMode.LMRL and len(ctx):
        raise LMRLNonEmptyContext("the linear full-set lemma has an empty context")
    return maybe_deep(measure(f), _full, f, tuple(ctx.items), mode, universe)


def identity_expand(r: RoleSubset, f: Formula, ctx: Sequent, mode: LogicMode,
                    *, trace: Tracer | None = None) -> Derivation:
    """Derive ctx, [R]A, [complement(R)]A by splitting the full-set lemma."""
    u = RoleUniverse(r.n)
    d = derive_full(f, ctx, mode, u, trace=trace)
    pos = d.conclusion.items.index(IFormula(u.full, f))
    return role_split(d, pos, r, complement(r), mode, trace=trace)


# ---------------------------------------------------------------------------
# one-sequent cut (empty interpretation elimination)

def _one_cut(d: Derivation, item: IFormula, mode: LogicMode, tracer: Tracer | None,
             parent: tuple | None) -> Derivation:
    h = height(d)
    metric = (h,)
    tag = d.rule.tag
    items = d.conclusion.items

    if tag is RuleTag.ID:
        _metric_step(tracer, "one_cut", "id", metric, parent)
        at_set = set(d.rule.at)
        ctx = [items[i] for i in range(len(items)) if i not in at_set]
        parts = [items[i] for i in d.rule.at]
        if _count(ctx, item):
            return _mk_id(parts, _remove(tuple(ctx), item, 1))
        # an empty summand leaves the partition intact when dropped
        return _mk_id(_remove(tuple(parts), item, 1), ctx)

    principal = _principal(d)
    c = _count(items, item)

    if principal == item and c == 1:
        f = item.formula
        roles = item.roles
        _metric_step(tracer, "one_cut", f"principal-{tag.value}", metric, parent)
        prem = d.premises[0]
        if tag is RuleTag.NEG:
            return _one_cut(prem, IFormula(preimage(f.endo, roles), f.body), mode, tracer, metric)
        if tag is RuleTag.CONJ_NEG_L:
            return _one_cut(prem, IFormula(roles, f.left), mode, tracer, metric)
        if tag is RuleTag.CONJ_NEG_R:
            return _one_cut(prem, IFormula(roles, f.right), mode, tracer, metric)
        if tag is RuleTag.IMP_NEG:
            e = _one_cut(prem, IFormula(preimage(f.endo, roles), f.left), mode, tracer, metric)
            return _one_cut(e, IFormula(roles, f.right), mode, tracer, metric)
        if tag is RuleTag.FORALL_NEG:
            return _one_cut(prem, IFormula(roles, instantiate(f.body, d.rule.witness)), mode, tracer, metric)
        if tag is RuleTag.BANG_NEG_WEAKEN:
            return prem
        if tag is RuleTag.BANG_NEG_DERELICT:
            return _one_cut(prem, IFormula(roles, f.body), mode, tracer, metric)
        if tag in (RuleTag.BANG_NEG_CONTRACT, RuleTag.CONTRACT):
            e = _one_cut(prem, item, mode, tracer, metric)
            return _one_cut(e, item, mode, tracer, metric)
        # positive rules cannot introduce an item interpreted at the empty
        # set: no ultrafilter contains it
        raise TransformError(f"unexpected principal rule {tag.value} on an empty interpretation")

    _metric_step(tracer, "one_cut", f"commute-{tag.value}", metric, parent)
    if tag is RuleTag.IMP_POS:
        left = tuple(d.rule.left or ())
        in_left = _count([items[i] for i in left], item) > 0
        if in_left:
            prems = (_one_cut(d.premises[0], item, mode, tracer, metric), d.premises[1])
        else:
            prems = (d.premises[0], _one_cut(d.premises[1], item, mode, tracer, metric))
        out = _rebuild(d, prems)
    elif tag is RuleTag.CONJ_POS:
        prems = tuple(_one_cut(p, item, mode, tracer, metric) for p in d.premises)
        out = _rebuild(d, prems)
    else:
        out = _rebuild(d, (_one_cut(d.premises[0], item, mode, tracer, metric),))
    if height(out) > h:
        raise MetricRegression("one-sequent cut increased derivation height")
    return out


def one_cut(d: Derivation, at: int, mode: LogicMode, *, trace: Tracer | None = None) -> Derivation:
    """Remove a designated empty-interpretation item; never increases height."""
    _ensure_checked(d, mode)
    item = _item_at(d, at)
    if not item.roles.is_empty:
        raise NoEmptyInterpretation(f"item at position {at} is interpreted at {item.roles.members()}")
    out = maybe_deep(height(d), _one_cut, d, item, mode, trace, None)
    if height(out) > height(d):
        raise MetricRegression("one-sequent cut increased derivation height")
    return out


# ---------------------------------------------------------------------------
# role splitting

def _imp_passive_counts(d: Derivation, item: IFormula, k: int) -> tuple[int, int]:
    """Distribution of the k-1 passive designated copies across the two
    premises of an implication node principal on the k-th copy."""
    items = d.conclusion.items
    left = tuple(d.rule.left or ())
    k_l = _count([items[i] for i in left], item)
    return k_l, (k - 1) - k_l


def _positive_part(uf, r1: RoleSubset, r2: RoleSubset) -> tuple[RoleSubset, RoleSubset]:
    """Order a disjoint pair so the first member contains the witness.

    Only callable when the union does contain it; the witness lies in exactly
    one part.
    """
    if uf_contains(uf, r1):
        return r1, r2
    return r2, r1


def _split(d: Derivation, item: IFormula, k: int, r1: RoleSubset, r2: RoleSubset,
           mode: LogicMode, tracer: Tracer | None, parent: tuple | None) -> Derivation:
    a = item.formula
    metric = (measure(a), height(d))
    i1, i2 = IFormula(r1, a), IFormula(r2, a)
    tag = d.rule.tag
    items = d.conclusion.items

    def clean(prem: Derivation, n: int) -> Derivation:
        return _split(prem, item, n, r1, r2, mode, tracer, metric) if n else prem

    if tag is RuleTag.ID:
        _metric_step(tracer, "role_split", "id", metric, parent)
        at_set = set(d.rule.at)
        ctx = tuple(items[i] for i in range(len(items)) if i not in at_set)
        parts = tuple(items[i] for i in d.rule.at)
        ctx_des = min(k, _count(ctx, item))
        sum_des = k - ctx_des
        new_ctx = _remove(ctx, item, ctx_des) + (i1, i2) * ctx_des
        new_parts = _remove(parts, item, sum_des) + (i1, i2) * sum_des
        return _mk_id(new_parts, new_ctx)

    principal = _principal(d)
    c = _count(items, item)

    if not (principal == item and c == k):
        _metric_step(tracer, "role_split", f"commute-{tag.value}", metric, parent)
        if tag is RuleTag.CONJ_POS:
            prems = tuple(_split(p, item, k, r1, r2, mode, tracer, metric) for p in d.premises)
            return _rebuild(d, prems)
        if tag is RuleTag.IMP_POS:
            left = tuple(d.rule.left or ())
            k_l = min(k, _count([items[i] for i in left], item))
            k_r = k - k_l
            prems = (clean(d.premises[0], k_l), clean(d.premises[1], k_r))
            return _rebuild(d, prems)
        return _rebuild(d, (_split(d.premises[0], item, k, r1, r2, mode, tracer, metric),))

    _metric_step(tracer, "role_split", f"principal-{tag.value}", metric, parent)
    f = item.formula
    roles = item.roles
    prem = d.premises[0]

    if tag in (RuleTag.CONTRACT, RuleTag.BANG_NEG_CONTRACT):
        e = _split(prem, item, k + 1, r1, r2, mode, tracer, metric)
        target = _ms(_remove(items, item, k)) + Counter({i1: k, i2: k})
        return _contract_down(e, target, mode)

    if tag is RuleTag.NEG:
        e = clean(prem, k - 1)
        sub = IFormula(preimage(f.endo, roles), f.body)
        g = _split(e, sub, 1, preimage(f.endo, r1), preimage(f.endo, r2), mode, tracer, metric)
        s1 = IFormula(preimage(f.endo, r1), f.body)
        s2 = IFormula(preimage(f.endo, r2), f.body)
        n1 = _mk1(RuleTag.NEG, g, _remove(g.conclusion.items, s1, 1), i1)
        return _mk1(RuleTag.NEG, n1, _remove(n1.conclusion.items, s2, 1), i2)

    if tag in (RuleTag.CONJ_NEG_L, RuleTag.CONJ_NEG_R):
        side = f.left if tag is RuleTag.CONJ_NEG_L else f.right
        e = clean(prem, k - 1)
        g = _split(e, IFormula(roles, side), 1, r1, r2, mode, tracer, metric)
        n1 = _mk1(tag, g, _remove(g.conclusion.items, IFormula(r1, side), 1), i1)
        return _mk1(tag, n1, _remove(n1.conclusion.items, IFormula(r2, side), 1), i2)

    if tag is RuleTag.CONJ_POS:
        rp, rn = _positive_part(f.uf, r1, r2)
        ip, i_n = IFormula(rp, f), IFormula(rn, f)
        ea = clean(d.premises[0], k - 1)
        eb = clean(d.premises[1], k - 1)
        ga = _split(ea, IFormula(roles, f.left), 1, r1, r2, mode, tracer, metric)
        gb = _split(eb, IFormula(roles, f.right), 1, r1, r2, mode, tracer, metric)
        na = _mk1(RuleTag.CONJ_NEG_L, ga, _remove(ga.conclusion.items, IFormula(rn, f.left), 1), i_n)
        nb = _mk1(RuleTag.CONJ_NEG_R, gb, _remove(gb.conclusion.items, IFormula(rn, f.right), 1), i_n)
        ctx = _remove(na.conclusion.items, IFormula(rp, f.left), 1)
        return _mk_conj_pos(na, nb, ctx, ip)

    if tag is RuleTag.IMP_NEG:
        e = clean(prem, k - 1)
        arg = IFormula(preimage(f.endo, roles), f.left)
        g1 = _split(e, arg, 1, preimage(f.endo, r1), preimage(f.endo, r2), mode, tracer, metric)
        g2 = _split(g1, IFormula(roles, f.right), 1, r1, r2, mode, tracer, metric)
        a1 = IFormula(preimage(f.endo, r1), f.left)
        a2 = IFormula(preimage(f.endo, r2), f.left)
        b1, b2 = IFormula(r1, f.right), IFormula(r2, f.right)
        ctx1 = _remove_ms(g2.conclusion.items, _ms([a1, b1]))
        n1 = _mk1(RuleTag.IMP_NEG, g2, ctx1, i1)
        ctx2 = _remove_ms(n1.conclusion.items, _ms([a2, b2]))
        return _mk1(RuleTag.IMP_NEG, n1, ctx2, i2)

    if tag is RuleTag.IMP_POS:
        rp, rn = _positive_part(f.uf, r1, r2)
        k_l, k_r = _imp_passive_counts(d, item, k)
        e1 = clean(d.premises[0], k_l)
        e2 = clean(d.premises[1], k_r)
        arg = IFormula(preimage(f.endo, roles), f.left)
        g1 = _split(e1, arg, 1, preimage(f.endo, rp), preimage(f.endo, rn), mode, tracer, metric)
        g2 = _split(e2, IFormula(roles, f.right), 1, rp, rn, mode, tracer, metric)
        ap, an = IFormula(preimage(f.endo, rp), f.left), IFormula(preimage(f.endo, rn), f.left)
        bp, bn = IFormula(rp, f.right), IFormula(rn, f.right)
        pos = _mk_imp_pos(
            g1, g2,
            _remove(g1.conclusion.items, ap, 1),
            _remove(g2.conclusion.items, bp, 1),
            IFormula(rp, f),
        )
        ctx = _remove_ms(pos.conclusion.items, _ms([an, bn]))
        return _mk1(RuleTag.IMP_NEG, pos, ctx, IFormula(rn, f))

    if tag is RuleTag.FORALL_NEG:
        e = clean(prem, k - 1)
        inst = IFormula(roles, instantiate(f.body, d.rule.witness))
        g = _split(e, inst, 1, r1, r2, mode, tracer, metric)
        s1 = IFormula(r1, inst.formula)
        s2 = IFormula(r2, inst.formula)
        n1 = _mk1(RuleTag.FORALL_NEG, g, _remove(g.conclusion.items, s1, 1), i1, witness=d.rule.witness)
        return _mk1(RuleTag.FORALL_NEG, n1, _remove(n1.conclusion.items, s2, 1), i2, witness=d.rule.witness)

    if tag is RuleTag.FORALL_POS:
        rp, rn = _positive_part(f.uf, r1, r2)
        y = d.rule.eigen
        e = clean(prem, k - 1)
        inst = IFormula(roles, instantiate(f.body, Var(y)))
        g = _split(e, inst, 1, rp, rn, mode, tracer, metric)
        # the witness at the negative part is the eigenvariable itself
        n = _mk1(
            RuleTag.FORALL_NEG, g,
            _remove(g.conclusion.items, IFormula(rn, inst.formula), 1),
            IFormula(rn, f), witness=Var(y),
        )
        ctx = _remove(n.conclusion.items, IFormula(rp, inst.formula), 1)
        return _mk1(RuleTag.FORALL_POS, n, ctx, IFormula(rp, f), eigen=y)

    if tag is RuleTag.BANG_POS:
        # a positively-interpreted exponential never sits in the promotion
        # context, so all designated copies coincide with the principal item
        assert k == 1
        rp, rn = _positive_part(f.uf, r1, r2)
        g = _split(prem, IFormula(roles, f.body), 1, rp, rn, mode, tracer, metric)
        der = _mk1(
            RuleTag.BANG_NEG_DERELICT, g,
            _remove(g.conclusion.items, IFormula(rn, f.body), 1),
            IFormula(rn, f),
        )
        ctx = _remove(der.conclusion.items, IFormula(rp, f.body), 1)
        return _mk1(RuleTag.BANG_POS, der, ctx, IFormula(rp, f))

    if tag is RuleTag.BANG_NEG_DERELICT:
        e = clean(prem, k - 1)
        g = _split(e, IFormula(roles, f.body), 1, r1, r2, mode, tracer, metric)
        n1 = _mk1(RuleTag.BANG_NEG_DERELICT, g, _remove(g.conclusion.items, IFormula(r1, f.body), 1), i1)
        return _mk1(RuleTag.BANG_NEG_DERELICT, n1, _remove(n1.conclusion.items, IFormula(r2, f.body), 1), i2)

    if tag is RuleTag.BANG_NEG_WEAKEN:
        e = clean(prem, k - 1)
        w1 = _mk1(RuleTag.BANG_NEG_WEAKEN, e, e.conclusion.items, i1)
        return _mk1(RuleTag.BANG_NEG_WEAKEN, w1, w1.conclusion.items, i2)

    raise TransformError(f"role splitting has no case for principal rule {tag.value}")


def role_split(d: Derivation, at: int, r1: RoleSubset, r2: RoleSubset, mode: LogicMode,
               *, trace: Tracer | None = None) -> Derivation:
    """Split a designated item's role set across two disjoint parts."""
    _ensure_checked(d, mode)
    item = _item_at(d, at)
    if not r1.disjoint(r2):
        raise NotDisjoint(f"{r1.members()} and {r2.members()} overlap")
    if (r1 | r2) != item.roles:
        raise RoleSetMismatch(
            f"{r1.members()} and {r2.members()} do not recompose {item.roles.members()}"
        )
    est = height(d) * (measure(item.formula) + 1)
    return maybe_deep(est, _split, d, item, 1, r1, r2, mode, trace, None)


# ---------------------------------------------------------------------------
# binary cut with spill

_ID_CTX = "id-ctx"
_ID_SUMMAND = "id-summand"
_PRINCIPAL = "principal"
_BLOCKED = "blocked"
_COMMUTE = "commute"


def _cut_state(d: Derivation, item: IFormula, k: int) -> str:
    tag = d.rule.tag
    if tag is RuleTag.ID:
        ctx = d.conclusion.without(d.rule.at)
        return _ID_CTX if _count(ctx, item) >= k else _ID_SUMMAND
    if _principal(d) == item and d.conclusion.count(item) == k:
        return _PRINCIPAL
    if tag is RuleTag.BANG_POS:
        # passive copies live in the promotion context; commuting would leak
        # non-exponential material into it
        return _BLOCKED
    return _COMMUTE


def _cut(d1: Derivation, item1: IFormula, k1: int, d2: Derivation, item2: IFormula, k2: int,
         mode: LogicMode, tracer: Tracer | None, parent: tuple | None) -> Derivation:
    a = item1.formula
    r1, r2 = item1.roles, item2.roles
    spill = IFormula(r1 & r2, a)
    metric = (measure(a), height(d1) + height(d2))
    target = (
        _ms(_remove(d1.conclusion.items, item1, k1))
        + _ms(_remove(d2.conclusion.items, item2, k2))
        + Counter({spill: 1})
    )

    assert (r1 | r2).is_full, "designated role sets must jointly cover the universe"
    s1 = _cut_state(d1, item1, k1)
    s2 = _cut_state(d2, item2, k2)

    if s1 is _ID_CTX or s2 is _ID_CTX:
        _metric_step(tracer, "two_cut_spill", "id-context", metric, parent)
        d = d1 if s1 is _ID_CTX else d2
        parts = tuple(d.conclusion[i] for i in d.rule.at)
        return _mk_id(parts, tuple((target - _ms(parts)).elements()))

    if s1 is _COMMUTE:
        _metric_step(tracer, "two_cut_spill", f"commute-left-{d1.rule.tag.value}", metric, parent)
        return _cut_commute(d1, item1, k1, d2, item2, k2, mode, tracer, metric, target, flipped=False)
    if s2 is _COMMUTE:
        _metric_step(tracer, "two_cut_spill", f"commute-right-{d2.rule.tag.value}", metric, parent)
        return _cut_commute(d2, item2, k2, d1, item1, k1, mode, tracer, metric, target, flipped=True)

    # both sides stuck
    if s1 is _PRINCIPAL and d1.rule.tag is RuleTag.CONTRACT:
        _metric_step(tracer, "two_cut_spill", "contract-left", metric, parent)
        return _cut(d1.premises[0], item1, k1 + 1, d2, item2, k2, mode, tracer, metric)
    if s2 is _PRINCIPAL and d2.rule.tag is RuleTag.CONTRACT:
        _metric_step(tracer, "two_cut_spill", "contract-right", metric, parent)
        return _cut(d2.premises[0], item2, k2 + 1, d1, item1, k1, mode, tracer, metric)

    if isinstance(a, Atom):
        _metric_step(tracer, "two_cut_spill", "id-merge", metric, parent)
        return _merge_id(d1, item1, k1, d2, item2, k2, spill)

    if isinstance(a, Bang):
        pos1 = uf_contains(a.uf, r1)
        pos2 = uf_contains(a.uf, r2)
        if pos1 and pos2:
            # two promotions: cut the bodies and re-promote; both contexts
            # are exponential, so the merged context still admits promotion
            if k1 != 1 or k2 != 1 or d1.rule.tag is not RuleTag.BANG_POS or d2.rule.tag is not RuleTag.BANG_POS:
                raise TransformError("positively-interpreted exponential stuck on a non-promotion rule")
            _metric_step(tracer, "two_cut_spill", "promotion/promotion", metric, parent)
            g = _cut(d1.premises[0], IFormula(r1, a.body), 1,
                     d2.premises[0], IFormula(r2, a.body), 1, mode, tracer, metric)
            sub = IFormula(spill.roles, a.body)
            return _mk1(RuleTag.BANG_POS, g, _remove(g.conclusion.items, sub, 1), spill)
        if pos2:
            dn, item_n, kn, dp, item_p, kp = d1, item1, k1, d2, item2, k2
        else:
            dn, item_n, kn, dp, item_p, kp = d2, item2, k2, d1, item1, k1
        if kp != 1 or dp.rule.tag is not RuleTag.BANG_POS or _cut_state(dp, item_p, 1) is not _PRINCIPAL:
            raise TransformError("positively-interpreted exponential stuck on a non-promotion rule")
        _metric_step(tracer, "two_cut_spill", "promotion", metric, parent)
        out = _cut_bang(dn, item_n, kn, dp, mode, tracer, None)
        return _contract_down(out, target, mode)

    _metric_step(tracer, "two_cut_spill", f"principal-{d1.rule.tag.value}/{d2.rule.tag.value}", metric, parent)
    out = _cut_principal(d1, item1, k1, d2, item2, k2, spill, mode, tracer, metric)
    return _contract_down(out, target, mode)


def _cut_commute(d: Derivation, item: IFormula, k: int, other: Derivation, other_item: IFormula,
                 other_k: int, mode: LogicMode, tracer: Tracer | None, metric: tuple,
                 target: Counter, *, flipped: bool) -> Derivation:
    def rec(prem: Derivation, n: int) -> Derivation:
        if flipped:
            return _cut(other, other_item, other_k, prem, item, n, mode, tracer, metric)
        return _cut(prem, item, n, other, other_item, other_k, mode, tracer, metric)

    tag = d.rule.tag
    if tag is RuleTag.CONJ_POS:
        out = _rebuild(d, tuple(rec(p, k) for p in d.premises))
    elif tag is RuleTag.IMP_POS:
        items = d.conclusion.items
        left = tuple(d.rule.left or ())
        k_l = min(k, _count([items[i] for i in left], item))
        k_r = k - k_l
        p1 = rec(d.premises[0], k_l) if k_l else d.premises[0]
        p2 = rec(d.premises[1], k_r) if k_r else d.premises[1]
        out = _rebuild(d, (p1, p2))
    elif tag is RuleTag.FORALL_POS:
        additions = free_vars(other.conclusion) | free_vars(other_item)
        d = _freshen_eigen(d, additions)
        out = _rebuild(d, (rec(d.premises[0], k),), eigen=d.rule.eigen)
    else:
        out = _rebuild(d, (rec(d.premises[0], k),))
    return _contract_down(out, target, mode)


def _merge_id(d1: Derivation, item1: IFormula, k1: int, d2: Derivation, item2: IFormula,
              k2: int, spill: IFormula) -> Derivation:
    def split_out(d, item, k):
        at_set = set(d.rule.at)
        ctx = tuple(d.conclusion[i] for i in range(len(d.conclusion)) if i not in at_set)
        parts = tuple(d.conclusion[i] for i in d.rule.at)
        ctx_des = min(k, _count(ctx, item))
        return _remove(ctx, item, ctx_des), _remove(parts, item, k - ctx_des)

    ctx1, parts1 = split_out(d1, item1, k1)
    ctx2, parts2 = split_out(d2, item2, k2)
    return _mk_id(parts1 + parts2 + (spill,), ctx1 + ctx2)


def _cut_principal(d1: Derivation, item1: IFormula, k1: int, d2: Derivation, item2: IFormula,
                   k2: int, spill: IFormula, mode: LogicMode, tracer: Tracer | None,
                   metric: tuple) -> Derivation:
    a = item1.formula
    r1, r2 = item1.roles, item2.roles
    sp = spill.roles
    tag1, tag2 = d1.rule.tag, d2.rule.tag

    def clean1(prem: Derivation, n: int) -> Derivation:
        if n == 0:
            return prem
        return _cut(prem, item1, n, d2, item2, k2, mode, tracer, metric)

    def clean2(prem: Derivation, n: int) -> Derivation:
        if n == 0:
            return prem
        return _cut(prem, item2, n, d1, item1, k1, mode, tracer, metric)

    def subcut(e1: Derivation, s1: IFormula, e2: Derivation, s2: IFormula) -> Derivation:
        return _cut(e1, s1, 1, e2, s2, 1, mode, tracer, metric)

    if isinstance(a, Neg):
        s1 = IFormula(preimage(a.endo, r1), a.body)
        s2 = IFormula(preimage(a.endo, r2), a.body)
        g = subcut(clean1(d1.premises[0], k1 - 1), s1, clean2(d2.premises[0], k2 - 1), s2)
        sub = IFormula(preimage(a.endo, sp), a.body)
        return _mk1(RuleTag.NEG, g, _remove(g.conclusion.items, sub, 1), spill)

    if isinstance(a, Conj):
        # a conjunction node shares its context between premises, so each
        # premise carries all k-1 passive designated copies
        pos1 = tag1 is RuleTag.CONJ_POS
        pos2 = tag2 is RuleTag.CONJ_POS
        if pos1 and pos2:
            ga = subcut(clean1(d1.premises[0], k1 - 1), IFormula(r1, a.left),
                        clean2(d2.premises[0], k2 - 1), IFormula(r2, a.left))
            gb = subcut(clean1(d1.premises[1], k1 - 1), IFormula(r1, a.right),
                        clean2(d2.premises[1], k2 - 1), IFormula(r2, a.right))
            ctx = _remove(ga.conclusion.items, IFormula(sp, a.left), 1)
            ctx_b = _remove(gb.conclusion.items, IFormula(sp, a.right), 1)
            if _ms(ctx) != _ms(ctx_b):
                raise TransformError("conjunction premises lost context agreement")
            return _mk_conj_pos(ga, gb, ctx, spill)
        if pos1:
            ntag = tag2
            side = a.left if ntag is RuleTag.CONJ_NEG_L else a.right
            pidx = 0 if ntag is RuleTag.CONJ_NEG_L else 1
            g = subcut(clean1(d1.premises[pidx], k1 - 1), IFormula(r1, side),
                       clean2(d2.premises[0], k2 - 1), IFormula(r2, side))
        else:
            ntag = tag1
            side = a.left if ntag is RuleTag.CONJ_NEG_L else a.right
            pidx = 0 if ntag is RuleTag.CONJ_NEG_L else 1
            g = subcut(clean1(d1.premises[0], k1 - 1), IFormula(r1, side),
                       clean2(d2.premises[pidx], k2 - 1), IFormula(r2, side))
        return _mk1(ntag, g, _remove(g.conclusion.items, IFormula(sp, side), 1), spill)

    if isinstance(a, Impl):
        arg1 = IFormula(preimage(a.endo, r1), a.left)
        arg2 = IFormula(preimage(a.endo, r2), a.left)
        res1, res2 = IFormula(r1, a.right), IFormula(r2, a.right)
        arg_sp = IFormula(preimage(a.endo, sp), a.left)
        res_sp = IFormula(sp, a.right)
        if tag1 is RuleTag.IMP_POS and tag2 is RuleTag.IMP_POS:
            k1a, k1b = _imp_passive_counts(d1, item1, k1)
            k2a, k2b = _imp_passive_counts(d2, item2, k2)
            ga = subcut(clean1(d1.premises[0], k1a), arg1, clean2(d2.premises[0], k2a), arg2)
            gb = subcut(clean1(d1.premises[1], k1b), res1, clean2(d2.premises[1], k2b), res2)
            return _mk_imp_pos(
                ga, gb,
                _remove(ga.conclusion.items, arg_sp, 1),
                _remove(gb.conclusion.items, res_sp, 1),
                spill,
            )
        if tag1 is RuleTag.IMP_POS:  # right side negative
            k1a, k1b = _imp_passive_counts(d1, item1, k1)
            e2 = clean2(d2.premises[0], k2 - 1)
            g1 = subcut(clean1(d1.premises[0], k1a), arg1, e2, arg2)
            g2 = subcut(clean1(d1.premises[1], k1b), res1, g1, res2)
        else:  # left side negative
            k2a, k2b = _imp_passive_counts(d2, item2, k2)
            e1 = clean1(d1.premises[0], k1 - 1)
            g1 = subcut(e1, arg1, clean2(d2.premises[0], k2a), arg2)
            g2 = subcut(g1, res1, clean2(d2.premises[1], k2b), res2)
        ctx = _remove_ms(g2.conclusion.items, _ms([arg_sp, res_sp]))
        return _mk1(RuleTag.IMP_NEG, g2, ctx, spill)

    if isinstance(a, Forall):
        pos1 = tag1 is RuleTag.FORALL_POS
        pos2 = tag2 is RuleTag.FORALL_POS
        if pos1 and pos2:
            z = fresh_name(_names_of(d1) | _names_of(d2))
            p1 = subst_derivation(d1.premises[0], d1.rule.eigen, Var(z))
            p2 = subst_derivation(d2.premises[0], d2.rule.eigen, Var(z))
            bz = instantiate(a.body, Var(z))
            g = subcut(clean1(p1, k1 - 1), IFormula(r1, bz), clean2(p2, k2 - 1), IFormula(r2, bz))
            ctx = _remove(g.conclusion.items, IFormula(sp, bz), 1)
            return _mk1(RuleTag.FORALL_POS, g, ctx, spill, eigen=z)
        if pos1:
            t = d2.rule.witness
            p1 = subst_derivation(d1.premises[0], d1.rule.eigen, t)
            p2 = d2.premises[0]
        else:
            t = d1.rule.witness
            p1 = d1.premises[0]
            p2 = subst_derivation(d2.premises[0], d2.rule.eigen, t)
        bt = instantiate(a.body, t)
        g = subcut(clean1(p1, k1 - 1), IFormula(r1, bt), clean2(p2, k2 - 1), IFormula(r2, bt))
        ctx = _remove(g.conclusion.items, IFormula(sp, bt), 1)
        return _mk1(RuleTag.FORALL_NEG, g, ctx, spill, witness=t)

    raise TransformError(f"binary cut has no principal case for {tag1.value}/{tag2.value}")


def _cut_bang(dn: Derivation, item_n: IFormula, kn: int, dp: Derivation, mode: LogicMode,
              tracer: Tracer | None, parent: tuple | None) -> Derivation:
    """Cut k negative-exponential copies against a fixed promotion.

    Induction on the negative side alone; everything this pass adds to a
    context (the promotion context and the spill) is exponential-negative, so
    it commutes through inner promotions and duplicates contract away.
    """
    a = item_n.formula
    item_p = _principal(dp)
    rn, rp = item_n.roles, item_p.roles
    spill = IFormula(rn & rp, a)
    q_ctx = _ctx_items(dp)
    metric = (measure(a), height(dn) + height(dp))
    target = _ms(_remove(dn.conclusion.items, item_n, kn)) + _ms(q_ctx) + Counter({spill: 1})

    tag = dn.rule.tag
    state = _cut_state(dn, item_n, kn)

    if state is _PRINCIPAL:
        _metric_step(tracer, "two_cut_spill", f"bang-{tag.value}", metric, parent)
        prem = dn.premises[0]
        if tag is RuleTag.BANG_NEG_WEAKEN:
            if kn > 1:
                return _cut_bang(prem, item_n, kn - 1, dp, mode, tracer, metric)
            return _weaken_exponentials(prem, q_ctx + (spill,))
        if tag is RuleTag.BANG_NEG_DERELICT:
            e = _cut_bang(prem, item_n, kn - 1, dp, mode, tracer, metric) if kn > 1 else prem
            g = _cut(e, IFormula(rn, a.body), 1, dp.premises[0], IFormula(rp, a.body), 1, mode, tracer, metric)
            sub = IFormula(rn & rp, a.body)
            out = _mk1(RuleTag.BANG_NEG_DERELICT, g, _remove(g.conclusion.items, sub, 1), spill)
            return _contract_down(out, target, mode)
        if tag is RuleTag.BANG_NEG_CONTRACT:
            return _cut_bang(prem, item_n, kn + 1, dp, mode, tracer, metric)
        raise TransformError(f"negative exponential introduced by {tag.value}")

    _metric_step(tracer, "two_cut_spill", f"bang-commute-{tag.value}", metric, parent)
    if tag is RuleTag.BANG_POS:
        # safe here: the additions are all negatively-interpreted exponentials
        e = _cut_bang(dn.premises[0], item_n, kn, dp, mode, tracer, metric)
        return _rebuild(dn, (e,))
    if tag is RuleTag.CONJ_POS:
        prems = tuple(_cut_bang(p, item_n, kn, dp, mode, tracer, metric) for p in dn.premises)
        return _contract_down(_rebuild(dn, prems), target, mode)
    if tag is RuleTag.IMP_POS:
        items = dn.conclusion.items
        left = tuple(dn.rule.left or ())
        k_l = min(kn, _count([items[i] for i in left], item_n))
        k_r = kn - k_l
        p1 = _cut_bang(dn.premises[0], item_n, k_l, dp, mode, tracer, metric) if k_l else dn.premises[0]
        p2 = _cut_bang(dn.premises[1], item_n, k_r, dp, mode, tracer, metric) if k_r else dn.premises[1]
        return _contract_down(_rebuild(dn, (p1, p2)), target, mode)
    if tag is RuleTag.FORALL_POS:
        additions = free_vars(Sequent(q_ctx)) | free_vars(spill)
        dn = _freshen_eigen(dn, additions)
        e = _cut_bang(dn.premises[0], item_n, kn, dp, mode, tracer, metric)
        return _rebuild(dn, (e,), eigen=dn.rule.eigen)
    if tag is RuleTag.ID:
        raise TransformError("an exponential cannot occur in an identity conclusion in linear mode")
    e = _cut_bang(dn.premises[0], item_n, kn, dp, mode, tracer, metric)
    return _rebuild(dn, (e,))


def two_cut_spill(d1: Derivation, at1: int, d2: Derivation, at2: int, mode: LogicMode,
                  *, trace: Tracer | None = None) -> Derivation:
    """Cut two derivations whose designated role sets jointly cover the
    universe; the residual interpretation at the intersection remains."""
    _ensure_checked(d1, mode)
    _ensure_checked(d2, mode)
    item1 = _item_at(d1, at1)
    item2 = _item_at(d2, at2)
    if item1.formula != item2.formula:
        raise CutFormulaMismatch("designated items do not share a cut formula")
    if not complement(item1.roles).disjoint(complement(item2.roles)):
        raise ComplementsOverlap(
            f"complements of {item1.roles.members()} and {item2.roles.members()} overlap"
        )
    est = (height(d1) + height(d2)) * (measure(item1.formula) + 1)
    return maybe_deep(est, _cut, d1, item1, 1, d2, item2, 1, mode, trace, None)


def mp_cut(ds, ats, mode: LogicMode, *, trace: Tracer | None = None) -> Derivation:
    """n-ary multiparty cut: all designated items vanish when the complements
    of their role sets partition the universe.

    Built exactly as the induction suggests: fold binary cuts with spill over
    the parties, then eliminate the final empty-interpretation residue.
    """
    ds = list(ds)
    ats = list(ats)
    if not ds or len(ds) != len(ats):
        raise TransformError("need one designated position per derivation")
    for d in ds:
        _ensure_checked(d, mode)
    items = [_item_at(d, at) for d, at in zip(ds, ats)]
    f = items[0].formula
    if any(item.formula != f for item in items):
        raise CutFormulaMismatch("designated items do not share a cut formula")
    n = items[0].roles.n
    universe = RoleUniverse(n)
    if not is_partition([complement(item.roles) for item in items], universe.full):
        raise PartitionInvalid("complements of the designated role sets do not partition the universe")

    def run() -> Derivation:
        cur = ds[0]
        cur_item = items[0]
        for d, item in zip(ds[1:], items[1:]):
            cur = _cut(cur, cur_item, 1, d, item, 1, mode, trace, None)
            cur_item = IFormula(cur_item.roles & item.roles, f)
        # the partition condition forces the fold to end at the empty set
        assert cur_item.roles.is_empty
        return _one_cut(cur, cur_item, mode, trace, None)

    est = sum(height(d) for d in ds) * (measure(f) + 1)
    return maybe_deep(est, run)


# ---------------------------------------------------------------------------

def _item_at(d: Derivation, at: int) -> IFormula:
    if not 0 <= at < len(d.conclusion):
        raise TransformError(f"position {at} out of range for a {len(d.conclusion)}-item sequent")
    return d.conclusion[at]


def _ensure_checked(d: Derivation, mode: LogicMode) -> None:
    report = check(d, mode)
    if not report.accepted:
        raise TransformError(
            f"input derivation does not check: {report.reason.value} at {list(report.node_path)}: {report.detail}"
        )
