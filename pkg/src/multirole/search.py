"""Bounded-depth backward proof search for the propositional fragment.

This is the independent oracle used to validate the admissible-rule
constructions: premises are found by exhaustive search, the constructions are
run on them, and their outputs are re-checked and re-proved.

Completeness: every backward step except contraction strictly decreases the
total formula measure of the goal, and one contraction re-adds at most the
measure of a single item plus the step itself.  So with contraction budget b
over a space whose items measure at most M, a goal of total measure m that is
derivable at all has a proof of depth at most

    m + b*(M + 1) + 1

NotFound at that depth is therefore genuine non-derivability (within budget).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .checker import (
    Derivation,
    FilterRestriction,
    LogicMode,
    RuleApp,
    RuleTag,
    UNRESTRICTED,
    check,
    height,
    iter_nodes,
)
from .errors import QuantifierInGoal, SearchError, SpaceTooLarge
from .roles import (
    Endomorphism,
    PrincipalFilter,
    RoleSubset,
    RoleUniverse,
    complement,
    filter_contains,
    is_partition,
    preimage,
    uf_contains,
)
from .syntax import (
    Atom,
    Bang,
    Conj,
    Formula,
    IFormula,
    Impl,
    Neg,
    Sequent,
    contains_forall,
    measure,
    seq_measure,
)


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int
    mode: LogicMode
    restriction: FilterRestriction = UNRESTRICTED
    contraction_budget: int = 2
    max_split_context: int = 8


@dataclass(frozen=True)
class EnumSpace:
    """Finite instance space: which formulas and sequents exist."""

    universe: RoleUniverse
    atoms: tuple[str, ...] = ("a",)
    max_measure: int = 1
    endos: tuple[Endomorphism, ...] = ()
    witnesses: tuple[int, ...] = ()
    max_items: int = 2
    include_imp: bool = True
    include_bang: bool = True

    def summary(self) -> str:
        return (
            f"n={self.universe.n} atoms={len(self.atoms)} measure<={self.max_measure} "
            f"endos={len(self.endos)} witnesses={list(self.witnesses)} items<={self.max_items}"
        )


def default_space(n: int, max_measure: int = 1, max_items: int = 2) -> EnumSpace:
    """Selftest defaults: id+rotation endomorphisms, all witnesses; larger
    universes drop the implicative and exponential connectives to keep the
    instance space tractable."""
    u = RoleUniverse(n)
    endos = [u.identity(), u.rotation(1)]
    if n >= 3:
        endos.append(u.constant(0))
    small = n <= 2
    return EnumSpace(
        universe=u,
        atoms=("a",),
        max_measure=max_measure,
        endos=tuple(endos),
        witnesses=tuple(range(n)),
        max_items=max_items,
        include_imp=small,
        include_bang=small,
    )


def completeness_depth(goal: Sequent, budget: int, max_item_measure: int) -> int:
    return seq_measure(goal) + budget * (max_item_measure + 1) + 1


class _Prover:
    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.success: dict = {}  # mkey -> (derivation, contractions used)
        self.failure: dict = {}  # (mkey, budget) -> deepest depth that failed

    def _f_ok(self, seq: Sequent) -> bool:
        r = self.cfg.restriction
        if not r.active:
            return True
        return sum(1 for item in seq if filter_contains(r.filt, item.roles)) <= 1

    def prove(self, goal: Sequent, depth: int, budget: int) -> Derivation | None:
        if not self._f_ok(goal):
            return None
        key = goal.mkey()
        hit = self.success.get(key)
        if hit is not None and hit[1] <= budget:
            return hit[0]
        if depth <= 0:
            return None
        failed_at = self.failure.get((key, budget))
        if failed_at is not None and failed_at >= depth:
            return None

        found = self._attempt(goal, depth, budget)
        if found is not None:
            used = sum(
                1
                for node in iter_nodes(found)
                if node.rule.tag in (RuleTag.CONTRACT, RuleTag.BANG_NEG_CONTRACT)
            )
            prev = self.success.get(key)
            if prev is None or used < prev[1]:
                self.success[key] = (found, used)
            return found
        old = self.failure.get((key, budget), 0)
        if depth > old:
            self.failure[(key, budget)] = depth
        return None

    def _attempt(self, goal: Sequent, depth: int, budget: int) -> Derivation | None:
        mode = self.cfg.mode
        items = goal.items

        # axiom first: group positions by their atomic formula
        groups: dict = {}
        for i, item in enumerate(items):
            if isinstance(item.formula, Atom):
                groups.setdefault(item.formula, []).append(i)
        n = items[0].roles.n if items else 0
        for atom_formula, positions in groups.items():
            universe_full = (1 << n) - 1
            if mode is LogicMode.LMRL:
                if len(positions) != len(items):
                    continue
                choices = [tuple(positions)]
            else:
                choices = [
                    tuple(positions[j] for j in range(len(positions)) if bits >> j & 1)
                    for bits in range(1, 1 << len(positions))
                ]
            for at in choices:
                union = 0
                ok = True
                for p in at:
                    m = items[p].roles.mask
                    if union & m:
                        ok = False
                        break
                    union |= m
                if ok and union == universe_full:
                    return Derivation(goal, RuleApp(RuleTag.ID, at))

        for i, item in enumerate(items):
            d = self._backward_at(goal, i, depth, budget)
            if d is not None:
                return d

        if mode is LogicMode.MRL and budget > 0:
            for i, item in enumerate(items):
                premise = Sequent(items + (item,))
                sub = self.prove(premise, depth - 1, budget - 1)
                if sub is not None:
                    return Derivation(goal, RuleApp(RuleTag.CONTRACT, (i,)), (sub,))
        return None

    def _backward_at(self, goal: Sequent, i: int, depth: int, budget: int) -> Derivation | None:
        item = goal.items[i]
        f = item.formula
        roles = item.roles
        ctx = goal.without((i,))
        mode = self.cfg.mode

        def node(tag, premises, **kw):
            return Derivation(goal, RuleApp(tag, (i,), **kw), tuple(premises))

        if isinstance(f, Neg):
            sub = self.prove(Sequent(ctx + (IFormula(preimage(f.endo, roles), f.body),)), depth - 1, budget)
            if sub is not None:
                return node(RuleTag.NEG, [sub])
            return None

        if isinstance(f, Conj):
            if uf_contains(f.uf, roles):
                left = self.prove(Sequent(ctx + (IFormula(roles, f.left),)), depth - 1, budget)
                if left is None:
                    return None
                right = self.prove(Sequent(ctx + (IFormula(roles, f.right),)), depth - 1, budget)
                if right is None:
                    return None
                return node(RuleTag.CONJ_POS, [left, right])
            for tag, side in ((RuleTag.CONJ_NEG_L, f.left), (RuleTag.CONJ_NEG_R, f.right)):
                sub = self.prove(Sequent(ctx + (IFormula(roles, side),)), depth - 1, budget)
                if sub is not None:
                    return node(tag, [sub])
            return None

        if isinstance(f, Impl):
            arg = IFormula(preimage(f.endo, roles), f.left)
            res = IFormula(roles, f.right)
            if uf_contains(f.uf, roles):
                ctx_positions = [p for p in range(len(goal)) if p != i]
                if len(ctx_positions) > self.cfg.max_split_context:
                    raise SearchError(
                        f"context of {len(ctx_positions)} items exceeds the implication split cap"
                    )
                for bits in range(1 << len(ctx_positions)):
                    left_pos = tuple(ctx_positions[j] for j in range(len(ctx_positions)) if bits >> j & 1)
                    rest = tuple(p for p in ctx_positions if p not in set(left_pos))
                    g1 = Sequent(tuple(goal.items[p] for p in left_pos) + (arg,))
                    p1 = self.prove(g1, depth - 1, budget)
                    if p1 is None:
                        continue
                    g2 = Sequent(tuple(goal.items[p] for p in rest) + (res,))
                    p2 = self.prove(g2, depth - 1, budget)
                    if p2 is not None:
                        return node(RuleTag.IMP_POS, [p1, p2], left=left_pos)
                return None
            sub = self.prove(Sequent(ctx + (arg, res)), depth - 1, budget)
            if sub is not None:
                return node(RuleTag.IMP_NEG, [sub])
            return None

        if isinstance(f, Bang):
            if mode is not LogicMode.LMRL:
                return None
            if uf_contains(f.uf, roles):
                from .checker import is_q_context

                if not is_q_context(ctx):
                    return None
                sub = self.prove(Sequent(ctx + (IFormula(roles, f.body),)), depth - 1, budget)
                if sub is not None:
                    return node(RuleTag.BANG_POS, [sub])
                return None
            sub = self.prove(Sequent(ctx + (IFormula(roles, f.body),)), depth - 1, budget)
            if sub is not None:
                return node(RuleTag.BANG_NEG_DERELICT, [sub])
            sub = self.prove(Sequent(ctx), depth - 1, budget)
            if sub is not None:
                return node(RuleTag.BANG_NEG_WEAKEN, [sub])
            if budget > 0:
                sub = self.prove(Sequent(ctx + (item, item)), depth - 1, budget - 1)
                if sub is not None:
                    return node(RuleTag.BANG_NEG_CONTRACT, [sub])
            return None

        return None  # atoms are handled by the axiom attempt


def prove(goal: Sequent, cfg: SearchConfig) -> Derivation | None:
    """Backward search; a returned derivation always passes `check`.

    NotFound (None) within `cfg.max_depth` is definitive non-derivability
    only at the documented completeness depth for the fragment.
    """
    for item in goal:
        if contains_forall(item.formula):
            raise QuantifierInGoal("search goals must be propositional")
    d = _Prover(cfg).prove(goal, cfg.max_depth, cfg.contraction_budget)
    if d is not None:
        report = check(d, cfg.mode, cfg.restriction)
        assert report.accepted, f"search produced an invalid derivation: {report}"
    return d


# ---------------------------------------------------------------------------
# enumeration

def enumerate_formulas(space: EnumSpace, mode: LogicMode) -> list[Formula]:
    by_measure: list[list[Formula]] = [[Atom(sym) for sym in space.atoms]]
    u = space.universe
    ufs = [u.ultrafilter(w) for w in space.witnesses]
    for m in range(1, space.max_measure + 1):
        level: list[Formula] = []
        for f in space.endos:
            level.extend(Neg(f, body) for body in by_measure[m - 1])
        for uf in ufs:
            for ma in range(m):
                for a in by_measure[ma]:
                    for b in by_measure[m - 1 - ma]:
                        level.append(Conj(uf, a, b))
        if space.include_imp:
            for f in space.endos:
                for uf in ufs:
                    for ma in range(m):
                        for a in by_measure[ma]:
                            for b in by_measure[m - 1 - ma]:
                                level.append(Impl(f, uf, a, b))
        if space.include_bang and mode is LogicMode.LMRL:
            for uf in ufs:
                level.extend(Bang(uf, body) for body in by_measure[m - 1])
        by_measure.append(level)
    return [f for level in by_measure for f in level]


def enumerate_iformulas(space: EnumSpace, mode: LogicMode) -> list[IFormula]:
    formulas = enumerate_formulas(space, mode)
    return [IFormula(r, f) for f in formulas for r in space.universe.subsets()]


def enumerate_goals(space: EnumSpace, mode: LogicMode):
    """Deterministic stream of all sequents with 1..max_items items,
    duplicates removed up to multiset equality."""
    ifs = enumerate_iformulas(space, mode)
    for size in range(1, space.max_items + 1):
        for combo in itertools.combinations_with_replacement(ifs, size):
            yield Sequent(combo)


# ---------------------------------------------------------------------------
# verification harness

@dataclass
class VerificationReport:
    rule: str
    mode: str
    space: str
    instances_tested: int = 0
    skipped: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)  # (instance, stage)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} FAILURES"
        return (
            f"{self.rule}[{self.mode}] {self.space}: tested={self.instances_tested} "
            f"skipped={self.skipped} {status}"
        )

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "mode": self.mode,
            "space": self.space,
            "instances_tested": self.instances_tested,
            "skipped": self.skipped,
            "failures": [{"instance": i, "stage": s} for i, s in self.failures],
        }


VERIFIABLE_RULES = (
    "one_cut",
    "role_split",
    "two_cut_spill",
    "mp_cut_1",
    "mp_cut_2",
    "mp_cut_3",
    "weaken",
    "derive_full",
    "identity_expand",
)


class _Bank:
    """Shared proof bank: one memoized prover serves the whole space, every
    goal proved once at the completeness depth."""

    def __init__(self, space: EnumSpace, cfg: SearchConfig):
        self.space = space
        self.cfg = cfg
        self.prover = _Prover(cfg)
        self._reprove_cache: dict = {}
        self.derivable: list[tuple[Sequent, Derivation]] = []
        for goal in enumerate_goals(space, cfg.mode):
            d = self.prove_goal(goal)
            if d is not None:
                self.derivable.append((goal, d))

    def prove_goal(self, goal: Sequent) -> Derivation | None:
        depth = completeness_depth(goal, self.cfg.contraction_budget, self.space.max_measure)
        d = self.prover.prove(goal, depth, self.cfg.contraction_budget)
        if d is not None:
            report = check(d, self.cfg.mode, self.cfg.restriction)
            assert report.accepted, f"search produced an invalid derivation: {report}"
        return d

    def reprove(self, goal: Sequent, output: Derivation) -> bool:
        used = sum(
            1
            for node in iter_nodes(output)
            if node.rule.tag in (RuleTag.CONTRACT, RuleTag.BANG_NEG_CONTRACT)
        )
        base = self.cfg.contraction_budget
        # escalate a little if the construction contracted more than search
        # would; unbounded budgets would blow up backward search
        ceiling = max(base, min(used, base + 2))
        m = max(space_measure_bound(goal), self.space.max_measure)
        for budget in range(base, ceiling + 1):
            key = (goal.mkey(), budget)
            hit = self._reprove_cache.get(key)
            if hit is None:
                depth = completeness_depth(goal, budget, m)
                hit = self.prover.prove(goal, depth, budget) is not None
                self._reprove_cache[key] = hit
            if hit:
                return True
        return False


def space_measure_bound(goal: Sequent) -> int:
    return max((measure(item.formula) for item in goal), default=0)


_BANKS: dict = {}


def _bank(space: EnumSpace, cfg: SearchConfig) -> _Bank:
    key = (space, cfg)
    if key not in _BANKS:
        _BANKS[key] = _Bank(space, cfg)
    return _BANKS[key]


def _fmt_instance(*parts) -> str:
    from .surface import fmt_object

    out = []
    for p in parts:
        if isinstance(p, (Sequent, IFormula)):
            out.append(fmt_object(p))
        elif isinstance(p, RoleSubset):
            from .surface import fmt_roles

            out.append(fmt_roles(p))
        else:
            out.append(str(p))
    return " ".join(out)


def _f_ok(restriction: FilterRestriction, seq: Sequent) -> bool:
    if not restriction.active:
        return True
    return sum(1 for item in seq if filter_contains(restriction.filt, item.roles)) <= 1


def verify_admissible(rule: str, space: EnumSpace, cfg: SearchConfig, cap: int = 200_000) -> VerificationReport:
    """Exhaustively validate one admissible rule over the space.

    For every premise instance derivable within the space: the construction
    must succeed, its output must check, the output conclusion must equal the
    lemma's stated conclusion as a multiset, and the conclusion must re-prove
    by independent search.  LMRL one-cut additionally must not increase
    height.
    """
    from . import transform

    report = VerificationReport(rule, cfg.mode.value, space.summary())
    bank = _bank(space, cfg)
    universe = space.universe

    def run(instance_desc, expected: Sequent, thunk, input_height: int | None = None):
        if not _f_ok(cfg.restriction, expected):
            report.skipped += 1
            return
        report.instances_tested += 1
        if report.instances_tested > cap:
            raise SpaceTooLarge(f"{rule}: more than {cap} instances")
        try:
            out = thunk()
        except Exception as e:  # noqa: BLE001 - every construction failure is a finding
            report.failures.append((_fmt_instance(instance_desc, repr(e)), "transform"))
            return
        if not check(out, cfg.mode, cfg.restriction).accepted:
            report.failures.append((_fmt_instance(instance_desc), "check"))
            return
        if out.conclusion != expected:
            report.failures.append((_fmt_instance(instance_desc), "conclusion"))
            return
        if rule == "one_cut" and cfg.mode is LogicMode.LMRL and input_height is not None:
            if height(out) > input_height:
                report.failures.append((_fmt_instance(instance_desc), "height"))
                return
        if not bank.reprove(out.conclusion, out):
            report.failures.append((_fmt_instance(instance_desc), "reprove"))

    if rule in ("one_cut", "mp_cut_1"):
        for goal, d in bank.derivable:
            for pos in _distinct_positions(goal):
                item = goal[pos]
                if not item.roles.is_empty:
                    continue
                expected = Sequent(goal.without((pos,)))
                if rule == "one_cut":
                    run(_fmt_instance("cut", goal, "@", pos), expected,
                        lambda d=d, pos=pos: transform.one_cut(d, pos, cfg.mode),
                        input_height=height(d))
                else:
                    run(_fmt_instance("mp1", goal, "@", pos), expected,
                        lambda d=d, pos=pos: transform.mp_cut([d], [pos], cfg.mode))

    elif rule == "role_split":
        for goal, d in bank.derivable:
            for pos in _distinct_positions(goal):
                item = goal[pos]
                sub = item.roles.mask
                s = sub
                while True:  # all submasks of the item's role set, descending
                    r1 = RoleSubset(universe.n, s)
                    r2 = item.roles - r1
                    expected = Sequent(goal.without((pos,)) + (IFormula(r1, item.formula), IFormula(r2, item.formula)))
                    run(_fmt_instance("split", goal, "@", pos, r1), expected,
                        lambda d=d, pos=pos, r1=r1, r2=r2: transform.role_split(d, pos, r1, r2, cfg.mode))
                    if s == 0:
                        break
                    s = (s - 1) & sub

    elif rule in ("two_cut_spill", "mp_cut_2"):
        index = _designated_index(bank)
        for formula, entries in index.items():
            for (g1, d1, p1), (g2, d2, p2) in itertools.product(entries, entries):
                r1, r2 = g1[p1].roles, g2[p2].roles
                if rule == "mp_cut_2":
                    if r2 != complement(r1):
                        continue
                    expected = Sequent(g1.without((p1,)) + g2.without((p2,)))
                    run(_fmt_instance("mp2", g1, "&", g2), expected,
                        lambda d1=d1, p1=p1, d2=d2, p2=p2: transform.mp_cut([d1, d2], [p1, p2], cfg.mode))
                else:
                    if not complement(r1).disjoint(complement(r2)):
                        continue
                    spill = IFormula(r1 & r2, formula)
                    expected = Sequent(g1.without((p1,)) + g2.without((p2,)) + (spill,))
                    run(_fmt_instance("cut2", g1, "&", g2), expected,
                        lambda d1=d1, p1=p1, d2=d2, p2=p2: transform.two_cut_spill(d1, p1, d2, p2, cfg.mode))

    elif rule == "mp_cut_3":
        # three-party instances: the first party keeps its context, the other
        # two are bare designated items, which keeps the triple space cubic in
        # role sets rather than in whole sequents
        index = _designated_index(bank)
        triples = [
            (ra, rb, rc)
            for ra in universe.subsets()
            for rb in universe.subsets()
            for rc in universe.subsets()
            if is_partition([complement(ra), complement(rb), complement(rc)], universe.full)
        ]
        for formula, entries in index.items():
            by_roles: dict = {}
            singles: dict = {}
            for g, d, p in entries:
                by_roles.setdefault(g[p].roles, []).append((g, d, p))
                if len(g) == 1:
                    singles.setdefault(g[p].roles, []).append((g, d, p))
            for ra, rb, rc in triples:
                for (g1, d1, p1) in by_roles.get(ra, ()):
                    for (g2, d2, p2) in singles.get(rb, ()):
                        for (g3, d3, p3) in singles.get(rc, ()):
                            expected = Sequent(g1.without((p1,)) + g2.without((p2,)) + g3.without((p3,)))
                            run(_fmt_instance("mp3", g1, "&", g2, "&", g3), expected,
                                lambda d1=d1, p1=p1, d2=d2, p2=p2, d3=d3, p3=p3:
                                    transform.mp_cut([d1, d2, d3], [p1, p2, p3], cfg.mode))

    elif rule == "weaken":
        extras = enumerate_iformulas(space, cfg.mode)
        if cfg.mode is LogicMode.LMRL:
            extras = [x for x in extras if isinstance(x.formula, Bang) and not uf_contains(x.formula.uf, x.roles)]
        for goal, d in bank.derivable:
            for extra in extras:
                expected = Sequent(goal.items + (extra,))
                run(_fmt_instance("weaken", goal, "+", extra), expected,
                    lambda d=d, extra=extra: transform.admit_weakening(d, extra, cfg.mode))

    elif rule == "derive_full":
        contexts = _contexts(space, cfg)
        for formula in enumerate_formulas(space, cfg.mode):
            for ctx in contexts:
                expected = Sequent(ctx.items + (IFormula(universe.full, formula),))
                run(_fmt_instance("full", expected), expected,
                    lambda formula=formula, ctx=ctx: transform.derive_full(formula, ctx, cfg.mode, universe))

    elif rule == "identity_expand":
        contexts = _contexts(space, cfg)
        for formula in enumerate_formulas(space, cfg.mode):
            for r in universe.subsets():
                for ctx in contexts:
                    expected = Sequent(
                        ctx.items + (IFormula(r, formula), IFormula(complement(r), formula))
                    )
                    run(_fmt_instance("idexp", expected), expected,
                        lambda r=r, formula=formula, ctx=ctx:
                            transform.identity_expand(r, formula, ctx, cfg.mode))

    else:
        raise SearchError(f"unknown verifiable rule {rule!r}; choose from {VERIFIABLE_RULES}")

    return report


def _distinct_positions(goal: Sequent) -> list[int]:
    seen = set()
    out = []
    for i, item in enumerate(goal.items):
        if item not in seen:
            seen.add(item)
            out.append(i)
    return out


def _designated_index(bank: _Bank) -> dict:
    index: dict = {}
    for goal, d in bank.derivable:
        for pos in _distinct_positions(goal):
            index.setdefault(goal[pos].formula, []).append((goal, d, pos))
    return index


def _contexts(space: EnumSpace, cfg: SearchConfig) -> list[Sequent]:
    if cfg.mode is LogicMode.LMRL:
        return [Sequent()]
    singles = [Sequent((x,)) for x in enumerate_iformulas(space, cfg.mode)]
    return [Sequent()] + singles


def verify_construct(space: EnumSpace, filt: PrincipalFilter, cfg: SearchConfig | None = None,
                     cap: int = 200_000, conclusion_side: bool = True) -> VerificationReport:
    """Negative-conjunction decomposition under the intuitionistic restriction:
    whenever ⊢ [R](A1 ∧_U A2) is derivable with R ∉ U, one of ⊢ [R]A1,
    ⊢ [R]A2 must be derivable as well.

    By default only conclusion-side interpretations (R in the filter) are
    tested: there the single-slot discipline blocks contraction on the
    designated item and the property holds.  With `conclusion_side=False`
    every R ∉ U is tested; that literal generalization is refutable (a
    contraction at a hypothesis-side interpretation derives excluded-middle
    shapes whose disjuncts are underivable), and the resulting failure
    entries are the refutation.
    """
    restriction = FilterRestriction(filt)
    if cfg is None:
        cfg = SearchConfig(max_depth=8, mode=LogicMode.MRL, restriction=restriction)
    else:
        cfg = replace(cfg, restriction=restriction)
    report = VerificationReport("construct", cfg.mode.value, space.summary())
    universe = space.universe
    ufs = [universe.ultrafilter(w) for w in space.witnesses]

    def provable(goal: Sequent) -> bool:
        depth = completeness_depth(goal, cfg.contraction_budget, space.max_measure + 1)
        return prove(goal, replace(cfg, max_depth=depth)) is not None

    formulas = enumerate_formulas(space, cfg.mode)
    for uf in ufs:
        for r in universe.subsets():
            if uf_contains(uf, r):
                continue
            if conclusion_side and not filter_contains(filt, r):
                continue
            for a1 in formulas:
                for a2 in formulas:
                    report.instances_tested += 1
                    if report.instances_tested > cap:
                        raise SpaceTooLarge(f"construct: more than {cap} instances")
                    goal = Sequent((IFormula(r, Conj(uf, a1, a2)),))
                    if not provable(goal):
                        report.skipped += 1  # vacuous instance
                        continue
                    if not (provable(Sequent((IFormula(r, a1),))) or provable(Sequent((IFormula(r, a2),)))):
                        report.failures.append((_fmt_instance("construct", goal), "decompose"))
    return report
