"""Ordinal patterns of random walks: step matrices, edge diagrams, flips and pattern classes."""

from __future__ import annotations

from .diagram import (
    ActionResult,
    CylindricalBlock,
    Edge,
    EdgeDiagram,
    Outcome,
    apply_level_action,
    bordered_cylindrical_blocks,
    edge_diagram,
    flip_block,
    flip_interval,
    has_cycle,
    image_edges,
    valid_intervals,
)
from .equivalence import (
    EquivalenceClass,
    FlipWitness,
    class_of,
    enumerate_classes,
    equivalence_oracle,
    flip_witness,
    oracle_class,
)
from .errors import (
    DimensionMismatch,
    InternalError,
    InvalidFlip,
    LengthMismatch,
    NoValidDecomposition,
    NotABlock,
    RepeatedValue,
    SingularMatrix,
    SizeTooLarge,
    WalkPatternsError,
)
from .matrix import (
    StepMatrix,
    determinant,
    determinant_sign,
    matrix_equivalence_witness,
    matrix_multiply,
    permutation_matrix,
    step_matrix,
)
from .perm import (
    Permutation,
    SignedPermutation,
    compose,
    inflate,
    inverse,
    pattern_of_steps,
    pattern_of_walk,
    reverse_complement,
    signed_reverse_complement,
)
from .structure import (
    BlockAction,
    IntervalPartition,
    apply_block_action,
    cohesive_intervals,
    decompose_block_action,
    irreducible_partition_bruteforce,
    irreducible_partition_fast,
    is_cohesive,
    valid_block_actions,
)
from .walk import (
    ClassReport,
    DiscriminationReport,
    FrequencyTable,
    StepDistribution,
    class_report,
    cross_distribution_discrimination,
    estimate_frequencies,
    sample_pattern,
)

__version__ = "0.1.0"
