"""Local projections for high-dimensional outlier detection (LocOut)."""

from locout.data import (
    DataMatrix,
    DistanceMatrix,
    TiesPolicy,
    load_csv,
    pairwise_distances,
    validate,
)
from locout.errors import (
    DegenerateCoreError,
    LocOutError,
    ParameterError,
    ParseError,
    ValidationError,
)
from locout.evaluation import (
    AucResult,
    BenchmarkRow,
    RuntimeProfile,
    auc,
    knn_baseline,
    profile,
    run_benchmark,
)
from locout.neighborhood import Core, NeighborhoodParams, knn_set, select_core
from locout.projection import (
    CdVariant,
    LocalProjection,
    ProjectedPoint,
    core_distance,
    fit_projection,
    orthogonal_distance,
    project,
    project_point,
)
from locout.scoring import (
    LowDimensionWarning,
    ProjectionEnsemble,
    ScoreReport,
    build_ensemble,
    locout_scores,
    weight_matrix,
    weights,
)
from locout.simulation import (
    LabeledDataset,
    SimulationConfig,
    generate,
    group_covariance,
    group_means,
    random_rotation,
)

__version__ = "0.1.0"
