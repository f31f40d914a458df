"""Combinatorics of untwisted automorphisms of right-angled Artin groups:
normal forms, Whitehead partitions and automorphisms, relative constraint
tests, peak-reduction minimization over conjugacy-class tuples, and a
desk-scale cube-complex laboratory.
"""

from .errors import (
    BoundaryClipped,
    CapExceeded,
    DescriptorError,
    GraphError,
    INAPPLICABLE,
    InvariantBreach,
    PartitionError,
    RaagError,
    UNDECIDED,
    UNKNOWN,
    WordParseError,
)
from .graph_core import (
    DefiningGraph,
    StandardSubgroup,
    center_vertices,
    is_nontrivial_join,
    link,
    load_graph,
    parse_graph_text,
)
from .words import (
    CyclicClass,
    Word,
    are_conjugate,
    classes_up_to,
    conjugacy_canonical,
    cyclic_reduce,
    reduce,
    support,
    translation_length,
)
from .automorphisms import (
    Automorphism,
    GeneratorDescriptor,
    compose,
    identity_automorphism,
    is_graph_perm_equivalent,
    is_inner,
    is_simple,
    make_graph_permutation,
    make_inversion,
    make_partial_conjugation,
    make_raw,
    make_transvection,
    outer_equal,
    preserves_standard_family,
)
from .partitions import (
    BasedPartition,
    WhiteheadPartition,
    adjacent,
    classify,
    compatible,
    crossing_count,
    enumerate_based_partitions,
    enumerate_partitions,
    quadrant_partitions,
    relative_condition,
    validate_based,
    whitehead_automorphism,
)
from .mccool import (
    ConstraintFamily,
    EquivalenceReport,
    NormView,
    SalvettiState,
    build_auter_embedding,
    equivalent,
    expand_fixed_subgroup,
    minimize,
    neighbor_moves,
    norm,
    reductive_moves,
)
from .cubes import (
    CubeBall,
    VertexSet,
    bounded_displacement_witness,
    build_ball,
    displacement_bound,
    geodesic_through_projection_check,
    hull_neighborhood_check,
    is_convex,
    median,
    minset,
    minset_distance_check,
    projection_to,
)
from .spine import (
    BlowupSimplex,
    MoveGraph,
    MoveGraphNode,
    enumerate_simplices,
    move_graph,
    verify_changenorm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
