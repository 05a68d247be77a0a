"""Uncertain shapelet transform classification."""

from .classify import (
    GaussianNBModel,
    flatten,
    gnb_fit,
    gnb_predict_proba,
    ugnb_fit,
    ugnb_predict_proba,
)
from .data import RawDataset, inject_uncertainty, load_ucr_tsv
from .dissimilarity import DustFlavor, Measure, dust, dust_point, ed_sq, ued, ued_subseq
from .experiment import ExperimentResult, ModelSpec, ShapeletModel, accuracy, run_experiment
from .ordering import (
    Ordering3,
    OrderingKind,
    OrderingStrategy,
    cmp_interval,
    cmp_simple,
    cmp_stochastic,
    gaussian_cdf,
    interval_geq_prob,
)
from .shapelet import (
    SelectionConfig,
    Shapelet,
    UncertainFeatureMatrix,
    best_split,
    gen_candidates,
    select_shapelets,
    transform_apply,
    transform_fit,
)
from .uncertain import UncertainDataset, UncertainSeries, UncertainValue, uadd, upow, usub

__version__ = "0.1.0"
