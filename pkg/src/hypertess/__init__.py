"""Random hyperplane tessellations and binary embeddings into the Hamming cube.

The library draws seeded Gaussian hyperplane arrangements, embeds points as
packed sign codes, measures hard and soft Hamming distances, and empirically
audits how uniformly the arrangement tessellates a point set: distance
preservation, cell diameters, the cell adjacency graph, l1-embedding defects,
and affine tessellations of bounded clouds via lifting.
"""

from .affine import (
    AffineArrangement,
    affine_separation_fraction,
    affine_words,
    audit_affine,
    build_affine_arrangement,
    lift_point,
    lift_points,
    normalize_diameter,
)
from .audit import (
    AuditReport,
    CellReport,
    L1Stat,
    MidpointDiagnostic,
    PairSample,
    TessellationGraph,
    all_pairs,
    audit_uniformity,
    build_tessellation_graph,
    cell_analysis,
    l1_continuity_check,
    l1_embedding_stat,
    midpoint_diagnostic,
    select_pairs,
    tail_stat,
)
from .bitcode import BitCode, hamming, hamming_bits
from .embedding import (
    SoftParams,
    batch_embed,
    embed_words,
    separation_fraction,
    sign_embed,
    soft_hamming,
)
from .estimators import AffineSignRandomProjection, SignRandomProjection, hamming_distances
from .exceptions import (
    ContinuityPreconditionError,
    DegenerateInputError,
    DimensionMismatchError,
    EmptyInputError,
    FileFormatError,
    HypertessError,
    InsufficientTrialsError,
    InvalidDimensionError,
    NormalizationRequiredError,
    NotCoveredError,
)
from .geometry import (
    EpsilonNet,
    build_epsilon_net,
    decompose,
    euclidean,
    geodesic,
    spherical_project,
)
from .rng import GaussianMatrix, Seed, gaussian_matrix, gaussian_vector
from .sets import FiniteSet, MeanWidthEstimate, SetModel, SparseSphere, Sphere, mean_width, parse_model

__version__ = "0.1.0"

__all__ = [
    "AffineArrangement",
    "AffineSignRandomProjection",
    "AuditReport",
    "BitCode",
    "CellReport",
    "ContinuityPreconditionError",
    "DegenerateInputError",
    "DimensionMismatchError",
    "EmptyInputError",
    "EpsilonNet",
    "FileFormatError",
    "FiniteSet",
    "GaussianMatrix",
    "HypertessError",
    "InsufficientTrialsError",
    "InvalidDimensionError",
    "L1Stat",
    "MeanWidthEstimate",
    "MidpointDiagnostic",
    "NormalizationRequiredError",
    "NotCoveredError",
    "PairSample",
    "Seed",
    "SetModel",
    "SignRandomProjection",
    "SoftParams",
    "SparseSphere",
    "Sphere",
    "TessellationGraph",
    "affine_separation_fraction",
    "affine_words",
    "all_pairs",
    "audit_affine",
    "audit_uniformity",
    "batch_embed",
    "build_affine_arrangement",
    "build_epsilon_net",
    "build_tessellation_graph",
    "cell_analysis",
    "decompose",
    "embed_words",
    "euclidean",
    "gaussian_matrix",
    "gaussian_vector",
    "geodesic",
    "hamming",
    "hamming_bits",
    "hamming_distances",
    "l1_continuity_check",
    "l1_embedding_stat",
    "lift_point",
    "lift_points",
    "mean_width",
    "midpoint_diagnostic",
    "normalize_diameter",
    "parse_model",
    "select_pairs",
    "separation_fraction",
    "sign_embed",
    "soft_hamming",
    "spherical_project",
    "tail_stat",
]
