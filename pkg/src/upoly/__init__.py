"""Exact U-, W- and rooted U-polynomials of graphs and trees.

The package computes partition-indexed graph polynomials with exact integer
arithmetic, builds the twin tree families whose truncated polynomials
collide, reconstructs rooted trees from their rooted polynomial, and runs
exhaustive collision searches at small sizes.
"""

from .constructions import (
    PairReport,
    build_ab,
    build_yz,
    d_transform,
    delta0,
    p_cumulative,
    phi_upper_bound,
    verify_identities,
    verify_pair,
)
from .errors import (
    CapExceeded,
    LoopContraction,
    MalformedPolynomial,
    NotATree,
    PolyParseError,
    ReconstructionFailed,
    TreeParseError,
    UPolyError,
    VerificationFailed,
)
from .graphmodel import (
    Graph,
    RootedTree,
    WeightedGraph,
    canonical_form,
    concat,
    contract,
    join,
    subset_stats,
    tree_from_json_dict,
    tree_from_text,
    tree_to_json_dict,
    tree_to_text,
)
from .invariants import chromatic_symmetric, u_polynomial, u_rooted, w_polynomial
from .polycore import (
    Partition,
    UMonomial,
    UPolynomial,
    exact_divide,
    make_partition,
    partition_union,
    poly_from_json_dict,
    poly_from_text,
    poly_to_json_dict,
    poly_to_text,
    restrict_part_size,
    ring_combine,
    star_specialize,
    truncate_length,
    x_var,
    y_var,
    z_var,
)
from .reconstruction import enumerate_rooted, read_invariants, reconstruct
from .search import CollisionRecord, collision_scan, enumerate_free, phi_restricted

__version__ = "0.1.0"
