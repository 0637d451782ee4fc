"""Finite-truncation diagnostics for weighted multishift operators.

Checks, at explicit degree truncation and with explicit verdict
semantics, whether the coordinate-multiplication tuple on a weighted
space of power series stays similar to itself under every rotation of
C^d: per-level norm diagnostics, composition-operator norms, the
rotation-averaged renormalization producing a similar level-radial
family, and the spherically-balanced / sphere-measure refinements.
"""

from .combinatorics import (
    DEGREE_CAP,
    DIMENSION_CAP,
    DegreeCapError,
    MultiIndex,
    enumerate_level,
    level_dimension,
    multinomial,
    unit,
)
from .weights import WeightFamily, fock_norm, shift_bound
from .unitary import (
    UnitaryMatrix,
    fourier,
    haar_batch,
    haar_sample,
    identity,
    permutation,
    rotation,
    torus,
)
from .polyspace import (
    CompositionMatrix,
    HomPoly,
    beta_norm,
    compose_linear,
    composition_chain,
    composition_matrix,
    multiplication_matrix,
)
from .criteria import (
    BOUNDED,
    DIVERGENT,
    INCONCLUSIVE,
    BoundednessVerdict,
    HomogeneityResult,
    LevelDiagnostic,
    RatioBounds,
    Thresholds,
    cu_restricted_norm,
    is_Ud_homogeneous,
    kernel_diagonal_ratio,
    level_b,
    similarity_ratio_bounds,
    weak_homogeneity_diagnosis,
)
from .renorm import (
    AveragedGram,
    HomogenizedWeights,
    averaged_gram,
    homogenize,
    schur_constant,
    similarity_norms,
)
from .balanced import (
    BalancedResult,
    HaarAverageReport,
    RadialWeights,
    ReinhardtMeasure,
    SliceRepresentation,
    SzegoReport,
    compose_slice,
    density_moment,
    haar_average_density,
    is_spherically_balanced,
    rn_bound_sample,
    sigma_moment,
    szego_similarity_check,
    verify_slice,
)

__version__ = "0.1.0"
