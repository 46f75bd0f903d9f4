"""Verifying kernel for multirole logic.

Checks derivations against the classical (MRL) and linear (LMRL) rule
systems, constructs every admissible transformation up to n-ary multiparty
cut-elimination, and validates the constructions against a bounded
backward-search oracle.
"""

from .checker import (
    CheckReport,
    Derivation,
    FilterRestriction,
    LogicMode,
    Reason,
    RuleApp,
    RuleTag,
    UNRESTRICTED,
    check,
    height,
    is_q_context,
)
from .roles import (
    Endomorphism,
    PrincipalFilter,
    PrincipalUltrafilter,
    RoleSubset,
    RoleUniverse,
    complement,
    filter_contains,
    is_partition,
    preimage,
    uf_contains,
)
from .search import (
    EnumSpace,
    SearchConfig,
    VerificationReport,
    completeness_depth,
    default_space,
    enumerate_goals,
    prove,
    verify_admissible,
    verify_construct,
)
from .surface import SessionDoc, fmt_object, fmt_session, parse_session
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
    forall,
    free_vars,
    instantiate,
    measure,
    substitute,
    tensor,
)
from .transform import (
    Tracer,
    admit_weakening,
    derive_full,
    identity_expand,
    mp_cut,
    one_cut,
    role_split,
    subst_derivation,
    two_cut_spill,
)

__version__ = "0.1.0"
