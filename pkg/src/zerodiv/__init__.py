"""Compressed zero-divisor graphs of finite commutative rings.

Rings are dense addition and multiplication tables over element ids
0..N-1; relations are partitions of the ids; ζ(A, R) is the graph on the
classes with an edge when representatives multiply to zero.
"""
from .errors import (
    BudgetExceeded,
    NotAnIdealError,
    NotFunctorial,
    NotZeroDivisorRelation,
    PreconditionError,
    RingAxiomError,
    SpecError,
    VerificationError,
    ZeroDivError,
)
from .relations import (
    ASSOCIATED,
    BLEND_NILPOTENTS,
    BLEND_UNITS,
    EQUALITY,
    EQUIANNIHILATED,
    STRONGLY_ASSOCIATED,
    EqRelation,
    RelationKind,
    check_functorial,
    is_finer,
    is_zero_divisor_relation,
    parse_kind,
    relation_partition,
)
from .ring import (
    FiniteRing,
    IdealSet,
    RingHom,
    build_presented,
    build_product,
    build_table,
    build_zn,
    validate_ring,
)
from .zdgraph import Graph, GraphMap, are_isomorphic, kronecker_product, zeta, zeta_star

__version__ = "0.1.0"
