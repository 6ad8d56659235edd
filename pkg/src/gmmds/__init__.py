"""Support-constrained generalized Reed-Solomon (GM-MDS) code toolkit.

Feasibility checking, T-matrix construction and identity testing, problem
reductions with a minimality audit, exhaustive small-parameter verification,
and explicit MDS generator construction over prime fields.
"""

from .construct import CodeArtifact, construct_code, cutset_distance_bound, mds_check
from .field import (
    FieldElement,
    FieldMatrix,
    PrimeField,
    UniPoly,
    det,
    eval_poly,
    left_nullspace,
    next_prime,
    poly_from_roots,
)
from .reduce import (
    AuditReport,
    ReductionStep,
    audit,
    merge_disjoint,
    merge_multiset,
    reduce_to_irreducible,
    split_tight,
    strip_common,
)
from .support import (
    ConditionVerdict,
    FamilyError,
    MultisetFamily,
    QDual,
    SupportFamily,
    check_condition,
    normalize,
    q_dual,
    ungroup,
)
from .tmatrix import (
    Certificate,
    IdentityVerdict,
    TInstance,
    build_GRS,
    build_T,
    build_generator,
    decide_identity,
    exact_identity_test,
    extract_certificate,
    identity_test,
)
from .verify import (
    CanonicalFamily,
    VerificationReport,
    enumerate_families,
    necessity_fuzz,
    reduction_cross_check,
    verify_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
