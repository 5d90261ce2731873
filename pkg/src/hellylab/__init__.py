"""Proper PAC learning on finite concept classes.

Helly-type parameters of finite classes, the recursive projection learners,
stable sample compression (including the hard-margin SVM) and exact-error
Monte Carlo experiments.
"""

__version__ = "0.1.0"

from .compression import (
    BlockFamily,
    ClosureCompression,
    CompressionScheme,
    SingletonCompression,
    block_family,
    check_stability,
    check_validity,
    generalization_bound,
)
from .concept_class import (
    ConceptClass,
    DomainPoint,
    Hypothesis,
    LabeledSample,
    consistent_subclass,
    generate_class,
    intersection_closure,
    is_intersection_closed,
    is_realizable,
    neighbors,
)
from .exceptions import (
    CapExceeded,
    HellyLabError,
    NoProjection,
    NotSeparable,
    Unrealizable,
    Unrepresentable,
    ValidationError,
)
from .learners import (
    ABSTAIN,
    ConsistentProjectionLearner,
    ERMClassifier,
    ProjectionLearner,
    agreement_region,
    algorithm_A,
    algorithm_A_erm,
    erm,
    majority_label,
    majority_vote,
    project,
)
from .parameters import (
    ParameterReport,
    compute_parameters,
    dual_helly_number,
    hollow_star_number,
    projection_check,
    star_number,
    vc_dimension,
)
from .svm import (
    HalfspaceHypothesis,
    HardMarginSVC,
    SupportVectorCompression,
    SvmSolution,
    brute_force_hard_margin,
    hard_margin_svm,
    separable,
)
