"""Restricted sumsets, regularity structures, arithmetic-progression recovery,
exhaustive bound verification at desk scale, and exact interval arithmetic for
the one-dimensional triple correlation."""

__version__ = "0.1.0"

from .core import (
    ArithProgression,
    IntSet,
    NormalizationMap,
    denormalize_ap,
    normalize_pair,
    progression_coverage,
    rep_function,
)
from .relation import PairRelation
from .sumset import (
    SumsetStats,
    complete_sumset,
    pollard_partial_sum,
    popular_support,
    rep_histogram,
    restricted_difference,
    restricted_sumset,
    sumset_stats,
    triple_count,
)
from .regularity import (
    ModularScene,
    RegularityParams,
    augment_relation,
    check_regular,
    extract_dense_core,
    reduce_mod,
    stabilizer,
)
from .recovery import (
    RecoveryReport,
    bad_pair_count,
    gamma_from_pollard,
    gamma_from_popular,
    recover_additive,
    recover_centred,
    recover_difference,
    recover_positive_part,
)
from .lab import (
    BoundResult,
    InstanceSpec,
    enumerate_and_verify,
    extremal_search,
    run_verification,
    sample_regular_relation,
)
from .continuous import (
    DiscretizationResult,
    IntervalUnion,
    discretize,
    measure,
    recover_interval,
    triple_correlation,
    triple_correlation_quadrature,
)
from . import bounds, errors
