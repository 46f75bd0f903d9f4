"""Derivation checking against the MRL and LMRL rule systems.

Every rule application carries its parameters explicitly (principal
positions, context split, witness term, eigenvariable), so checking is
syntax-directed: each node is validated locally against its premises'
conclusions.  The optional filter restriction additionally requires every
node's conclusion to contain at most one i-formula whose role set belongs to
the filter.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from .roles import (
    PrincipalFilter,
    RoleSubset,
    filter_contains,
    is_partition,
    preimage,
    uf_contains,
)
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
    contains_bang,
    free_vars,
    instantiate,
)


class LogicMode(enum.Enum):
    MRL = "mrl"
    LMRL = "lmrl"


class RuleTag(enum.Enum):
    ID = "id"
    CONTRACT = "contract"
    NEG = "neg"
    CONJ_NEG_L = "conj-neg-l"
    CONJ_NEG_R = "conj-neg-r"
    CONJ_POS = "conj-pos"
    IMP_NEG = "imp-neg"
    IMP_POS = "imp-pos"
    BANG_POS = "bang-pos"
    BANG_NEG_WEAKEN = "bang-neg-weaken"
    BANG_NEG_DERELICT = "bang-neg-derelict"
    BANG_NEG_CONTRACT = "bang-neg-contract"
    FORALL_NEG = "forall-neg"
    FORALL_POS = "forall-pos"


_PREMISE_COUNT = {
    RuleTag.ID: 0,
    RuleTag.CONTRACT: 1,
    RuleTag.NEG: 1,
    RuleTag.CONJ_NEG_L: 1,
    RuleTag.CONJ_NEG_R: 1,
    RuleTag.CONJ_POS: 2,
    RuleTag.IMP_NEG: 1,
    RuleTag.IMP_POS: 2,
    RuleTag.BANG_POS: 1,
    RuleTag.BANG_NEG_WEAKEN: 1,
    RuleTag.BANG_NEG_DERELICT: 1,
    RuleTag.BANG_NEG_CONTRACT: 1,
    RuleTag.FORALL_NEG: 1,
    RuleTag.FORALL_POS: 1,
}

# Rules whose side condition is R ∈ U ("positive") / R ∉ U ("negative").
POSITIVE_TAGS = frozenset({RuleTag.CONJ_POS, RuleTag.IMP_POS, RuleTag.BANG_POS, RuleTag.FORALL_POS})
NEGATIVE_TAGS = frozenset(
    {
        RuleTag.CONJ_NEG_L,
        RuleTag.CONJ_NEG_R,
        RuleTag.IMP_NEG,
        RuleTag.BANG_NEG_WEAKEN,
        RuleTag.BANG_NEG_DERELICT,
        RuleTag.BANG_NEG_CONTRACT,
        RuleTag.FORALL_NEG,
    }
)


@dataclass(frozen=True)
class RuleApp:
    """One rule application; `at` holds principal positions in the conclusion.

    `left` is the ImpPos context split (conclusion positions routed to the
    first premise); `witness` instantiates ForallNeg; `eigen` names the
    ForallPos eigenvariable.
    """

    tag: RuleTag
    at: tuple[int, ...] = ()
    left: tuple[int, ...] | None = None
    witness: Term | None = None
    eigen: str | None = None


@dataclass(frozen=True, eq=False)
class Derivation:
    """Tree of rule applications; compared by identity, never structurally."""

    conclusion: Sequent
    rule: RuleApp
    premises: tuple[Derivation, ...] = ()


@dataclass(frozen=True)
class FilterRestriction:
    """Optional intuitionistic restriction; absent filter means unrestricted."""

    filt: PrincipalFilter | None = None

    @property
    def active(self) -> bool:
        return self.filt is not None


UNRESTRICTED = FilterRestriction(None)


class Reason(enum.Enum):
    WRONG_PREMISE_COUNT = "WrongPremiseCount"
    SIDE_CONDITION_FAILED = "SideConditionFailed"
    PRINCIPAL_MISMATCH = "PrincipalMismatch"
    PARTITION_INVALID = "PartitionInvalid"
    EIGENVARIABLE_CAPTURED = "EigenvariableCaptured"
    Q_CONTEXT_VIOLATED = "QContextViolated"
    INTUITIONISTIC_VIOLATED = "IntuitionisticViolated"
    BANG_IN_MRL = "BangInMRL"


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    node_path: tuple[int, ...] = ()
    reason: Reason | None = None
    detail: str = ""

    def to_json(self) -> dict:
        if self.accepted:
            return {"status": "accepted"}
        return {
            "status": "rejected",
            "node_path": list(self.node_path),
            "reason": self.reason.value if self.reason else None,
            "detail": self.detail,
        }


ACCEPTED = CheckReport(True)


def is_q_context(gamma: Sequent | tuple[IFormula, ...]) -> bool:
    """Promotion context: every item a negatively-interpreted exponential."""
    items = gamma.items if isinstance(gamma, Sequent) else gamma
    for item in items:
        if not isinstance(item.formula, Bang):
            return False
        if uf_contains(item.formula.uf, item.roles):
            return False
    return True


def _reject(path, reason, detail=""):
    return CheckReport(False, tuple(path), reason, detail)


def _counts(items) -> Counter:
    return Counter(items)


def _check_node(d: Derivation, mode: LogicMode, restriction: FilterRestriction, path) -> CheckReport | None:
    tag = d.rule.tag
    concl = d.conclusion
    items = concl.items

    if mode is LogicMode.MRL:
        for item in items:
            if contains_bang(item.formula):
                return _reject(path, Reason.BANG_IN_MRL, "exponential formula in MRL derivation")
        if tag in (RuleTag.BANG_POS, RuleTag.BANG_NEG_WEAKEN, RuleTag.BANG_NEG_DERELICT, RuleTag.BANG_NEG_CONTRACT):
            return _reject(path, Reason.BANG_IN_MRL, f"rule {tag.value} is not an MRL rule")
    else:
        if tag is RuleTag.CONTRACT:
            return _reject(path, Reason.SIDE_CONDITION_FAILED, "contraction is not an LMRL rule")

    if restriction.active:
        hits = sum(1 for item in items if filter_contains(restriction.filt, item.roles))
        if hits > 1:
            return _reject(path, Reason.INTUITIONISTIC_VIOLATED, f"{hits} i-formulas interpreted inside the filter")

    if len(d.premises) != _PREMISE_COUNT[tag]:
        return _reject(
            path,
            Reason.WRONG_PREMISE_COUNT,
            f"{tag.value} takes {_PREMISE_COUNT[tag]} premises, got {len(d.premises)}",
        )

    at = d.rule.at
    if len(set(at)) != len(at) or any(not 0 <= p < len(items) for p in at):
        return _reject(path, Reason.PRINCIPAL_MISMATCH, f"invalid principal positions {at}")

    if tag is RuleTag.ID:
        parts = [items[p] for p in at]
        if not parts or any(not isinstance(x.formula, Atom) for x in parts):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "identity needs atomic principal items")
        if any(x.formula != parts[0].formula for x in parts[1:]):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "identity items must share one atom")
        if mode is LogicMode.LMRL and len(at) != len(items):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "identity admits no side context in LMRL")
        universe = RoleSubset(items[at[0]].roles.n, (1 << items[at[0]].roles.n) - 1)
        if not is_partition([x.roles for x in parts], universe):
            return _reject(path, Reason.PARTITION_INVALID, "role sets do not partition the universe")
        return None

    if len(at) != 1:
        return _reject(path, Reason.PRINCIPAL_MISMATCH, f"{tag.value} has one principal item, got {len(at)}")
    pos = at[0]
    principal = items[pos]
    ctx = concl.without((pos,))
    roles = principal.roles
    f = principal.formula

    def premise_is(idx: int, extra: list[IFormula], base=ctx) -> CheckReport | None:
        want = _counts(base) + _counts(extra)
        got = _counts(d.premises[idx].conclusion.items)
        if want != got:
            return _reject(path, Reason.PRINCIPAL_MISMATCH, f"premise {idx} does not match the rule shape")
        return None

    if tag is RuleTag.CONTRACT:
        return premise_is(0, [principal, principal], base=ctx)

    if tag is RuleTag.NEG:
        if not isinstance(f, Neg):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "principal item is not a negation")
        return premise_is(0, [IFormula(preimage(f.endo, roles), f.body)])

    if tag in (RuleTag.CONJ_NEG_L, RuleTag.CONJ_NEG_R, RuleTag.CONJ_POS):
        if not isinstance(f, Conj):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "principal item is not a conjunction")
        member = uf_contains(f.uf, roles)
        if tag is RuleTag.CONJ_POS:
            if not member:
                return _reject(path, Reason.SIDE_CONDITION_FAILED, "R not in U")
            return premise_is(0, [IFormula(roles, f.left)]) or premise_is(1, [IFormula(roles, f.right)])
        if member:
            return _reject(path, Reason.SIDE_CONDITION_FAILED, "R in U")
        side = f.left if tag is RuleTag.CONJ_NEG_L else f.right
        return premise_is(0, [IFormula(roles, side)])

    if tag in (RuleTag.IMP_NEG, RuleTag.IMP_POS):
        if not isinstance(f, Impl):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "principal item is not an implication")
        member = uf_contains(f.uf, roles)
        arg = IFormula(preimage(f.endo, roles), f.left)
        res = IFormula(roles, f.right)
        if tag is RuleTag.IMP_NEG:
            if member:
                return _reject(path, Reason.SIDE_CONDITION_FAILED, "R in U")
            return premise_is(0, [arg, res])
        if not member:
            return _reject(path, Reason.SIDE_CONDITION_FAILED, "R not in U")
        left = d.rule.left
        if left is None:
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "implication rule is missing its context split")
        ctx_positions = [i for i in range(len(items)) if i != pos]
        if len(set(left)) != len(left) or not set(left) <= set(ctx_positions):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, f"invalid context split {left}")
        gamma1 = tuple(items[i] for i in left)
        gamma2 = tuple(items[i] for i in ctx_positions if i not in set(left))
        return premise_is(0, [arg], base=gamma1) or premise_is(1, [res], base=gamma2)

    if tag in (RuleTag.BANG_POS, RuleTag.BANG_NEG_WEAKEN, RuleTag.BANG_NEG_DERELICT, RuleTag.BANG_NEG_CONTRACT):
        if not isinstance(f, Bang):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "principal item is not an exponential")
        member = uf_contains(f.uf, roles)
        if tag is RuleTag.BANG_POS:
            if not member:
                return _reject(path, Reason.SIDE_CONDITION_FAILED, "R not in U")
            if not is_q_context(ctx):
                return _reject(path, Reason.Q_CONTEXT_VIOLATED, "promotion context must be negatively-interpreted exponentials")
            return premise_is(0, [IFormula(roles, f.body)])
        if member:
            return _reject(path, Reason.SIDE_CONDITION_FAILED, "R in U")
        if tag is RuleTag.BANG_NEG_WEAKEN:
            return premise_is(0, [])
        if tag is RuleTag.BANG_NEG_DERELICT:
            return premise_is(0, [IFormula(roles, f.body)])
        return premise_is(0, [principal, principal])

    if tag in (RuleTag.FORALL_NEG, RuleTag.FORALL_POS):
        if not isinstance(f, Forall):
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "principal item is not a quantifier")
        member = uf_contains(f.uf, roles)
        if tag is RuleTag.FORALL_NEG:
            if member:
                return _reject(path, Reason.SIDE_CONDITION_FAILED, "R in U")
            if d.rule.witness is None:
                return _reject(path, Reason.PRINCIPAL_MISMATCH, "missing witness term")
            return premise_is(0, [IFormula(roles, instantiate(f.body, d.rule.witness))])
        if not member:
            return _reject(path, Reason.SIDE_CONDITION_FAILED, "R not in U")
        eigen = d.rule.eigen
        if eigen is None:
            return _reject(path, Reason.PRINCIPAL_MISMATCH, "missing eigenvariable")
        scope = free_vars(Sequent(ctx)) | free_vars(f)
        if eigen in scope:
            return _reject(path, Reason.EIGENVARIABLE_CAPTURED, f"eigenvariable {eigen} occurs free in the conclusion")
        return premise_is(0, [IFormula(roles, instantiate(f.body, Var(eigen)))])

    raise AssertionError(f"unhandled tag {tag}")


def check(d: Derivation, mode: LogicMode, restriction: FilterRestriction = UNRESTRICTED) -> CheckReport:
    """Validate a derivation; accepted iff every node instantiates its rule.

    Iterative so that derivations of height 10^4 or more check without
    recursion-limit tuning; shared subtrees are validated once.
    """
    seen: set[int] = set()
    stack: list[tuple[Derivation, tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        rej = _check_node(node, mode, restriction, path)
        if rej is not None:
            return rej
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], path + (i,)))
    return ACCEPTED


def height(d: Derivation) -> int:
    """Tree height with leaves (axiom nodes) at height 1.

    Iterative with per-node caching; shared subtrees count once.
    """
    cached = getattr(d, "_height", None)
    if cached is not None:
        return cached
    stack = [d]
    while stack:
        node = stack[-1]
        if getattr(node, "_height", None) is not None:
            stack.pop()
            continue
        missing = [p for p in node.premises if getattr(p, "_height", None) is None]
        if missing:
            stack.extend(missing)
            continue
        h = 1 + max((p._height for p in node.premises), default=0)
        object.__setattr__(node, "_height", h)
        stack.pop()
    return d._height


def node_count(d: Derivation) -> int:
    seen: set[int] = set()
    stack = [d]
    total = 0
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        total += 1
        stack.extend(node.premises)
    return total


def iter_nodes(d: Derivation):
    """Yield each distinct node once, root first."""
    seen: set[int] = set()
    stack = [d]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(node.premises))
