"""Numerical root systems and limit roots of finite-rank Coxeter groups."""

from .datum import (
    CoxeterDatum,
    bilinear,
    coxeter_datum,
    graph_components,
    is_connected,
    load_datum,
    parse_datum,
)
from .dominance import (
    DominanceVerdict,
    DominancePartition,
    DominatedSet,
    Relation,
    dominance_between,
    dominated_set,
    partition_Dn,
)
from .errors import (
    CanonicalBudgetError,
    ComputationError,
    CoxeterLimitsError,
    DatumError,
    RankCapError,
    ReductionError,
    SliceLimitError,
    SpectrumError,
)
from .limits import (
    Classification,
    Cluster,
    LimitKind,
    LimitPoint,
    PosCount,
    affine_limit_root,
    afftype_convex_sequence,
    approx_limit_roots,
    chebyshev_coeff,
    classify_limit_root,
    dihedral_limit_roots,
    dot_act,
    in_K,
    normalize,
    pos_count,
    reduce_to_K,
)
from .roots import (
    InversionSet,
    Root,
    RootSlice,
    Word,
    act,
    full_support_root,
    generate_roots,
    inversion_set,
    reflect,
    support,
)
from .subgroups import (
    CanonicalSet,
    ParabolicType,
    affine_standard_parabolics,
    canonicalize,
    classify_parabolic,
    dihedral_canonical_pair,
    find_nonaffine_dihedral,
    host_parabolic,
    is_affine_dihedral,
    is_canonical_value,
)

__version__ = "0.1.0"
