"""Exact selection lemmas and kinetic weak epsilon-nets.

Modules: ``poly`` (integer polynomials, root isolation), ``lp`` and
``geometry`` (exact LP, hull membership, lexicographic minima),
``selection`` (Radon/Tverberg partitions, selection certificates, depth),
``kinetic`` and ``sweep`` (kinetic interval hypergraphs and strong nets),
``weaknet`` (planar kinetic weak nets), ``io`` and ``cli`` (files, commands).
"""
from .errors import KinetsError
from .geometry import (
    HullMembership,
    PointSet,
    affine_solve,
    hull_membership,
    lex_min_intersection,
    orientation,
    static_general_position,
)
from .kinetic import (
    MovingScalarSet,
    enumerate_hyperedges,
    hyperedge_bound_ok,
    shatter_function,
    special_events,
    strong_interval_net,
    vc_dimension,
    verify_strong_net,
)
from .poly import (
    IDENTICAL,
    IsolatingInterval,
    Poly,
    RationalFunction,
    cross_difference_roots,
    eval_ratfun,
    isolate_real_roots,
    signs_near_event,
)
from .selection import (
    first_selection_point,
    radon_partition,
    rich_simplex,
    selection_pair,
    simplex_depth,
    tverberg_partitions,
)
from .weaknet import (
    MovingPointSet2D,
    build_weak_net,
    chord_height,
    kinetic_general_position,
    project_axis,
    sample_schedule,
    split_diagnostic,
    verify_weak_net,
)

__all__ = [
    "KinetsError",
    "HullMembership",
    "PointSet",
    "affine_solve",
    "hull_membership",
    "lex_min_intersection",
    "orientation",
    "static_general_position",
    "MovingScalarSet",
    "enumerate_hyperedges",
    "hyperedge_bound_ok",
    "shatter_function",
    "special_events",
    "strong_interval_net",
    "vc_dimension",
    "verify_strong_net",
    "IDENTICAL",
    "IsolatingInterval",
    "Poly",
    "RationalFunction",
    "cross_difference_roots",
    "eval_ratfun",
    "isolate_real_roots",
    "signs_near_event",
    "first_selection_point",
    "radon_partition",
    "rich_simplex",
    "selection_pair",
    "simplex_depth",
    "tverberg_partitions",
    "MovingPointSet2D",
    "build_weak_net",
    "chord_height",
    "kinetic_general_position",
    "project_axis",
    "sample_schedule",
    "split_diagnostic",
    "verify_weak_net",
]

__version__ = "0.1.0"
