"""Experiment orchestration: model specs, the UST pipeline and result rows."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import itertools
import logging
import math
import os
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import classify
from .data import RawDataset, inject_uncertainty, load_ucr_tsv
from .dissimilarity import Measure
from .ordering import OrderingKind, OrderingStrategy
from .shapelet import (
    SearchStats,
    SelectionConfig,
    UncertainFeatureMatrix,
    select_shapelets,
    transform_apply,
    transform_fit,
)
from .uncertain import UncertainDataset

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Inconsistent model specification."""


class Classifier(str, enum.Enum):
    GNB = "gnb"
    UGNB = "ugnb"


VALID_COMBINATIONS = (
    "measure=ed|dust-uniform|dust-normal with ordering=natural and classifier=gnb; "
    "measure=ued with ordering=simple|stochastic|interval and classifier=gnb|ugnb"
)


@dataclass(frozen=True)
class ModelSpec:
    measure: Measure = Measure.UED
    ordering: Optional[OrderingKind] = None
    classifier: Classifier = Classifier.GNB
    cdf_k: int = 100

    def __post_init__(self):
        try:
            measure = Measure(self.measure)
            classifier = Classifier(self.classifier)
            ordering = None if self.ordering is None else OrderingKind(self.ordering)
        except ValueError as exc:
            raise ConfigError(f"{exc}; valid combinations: {VALID_COMBINATIONS}") from None
        if ordering is None:
            ordering = OrderingKind.INTERVAL if measure.uncertain else OrderingKind.NATURAL
        if measure.uncertain and ordering is OrderingKind.NATURAL:
            raise ConfigError(
                f"natural ordering only applies to certain measures; valid combinations: {VALID_COMBINATIONS}"
            )
        if not measure.uncertain and ordering is not OrderingKind.NATURAL:
            raise ConfigError(
                f"measure {measure.value} outputs certain distances and needs the natural ordering; "
                f"valid combinations: {VALID_COMBINATIONS}"
            )
        if classifier is Classifier.UGNB and not measure.uncertain:
            raise ConfigError(
                f"ugnb needs uncertain features but {measure.value} outputs plain reals; "
                f"valid combinations: {VALID_COMBINATIONS}"
            )
        object.__setattr__(self, "measure", measure)
        object.__setattr__(self, "classifier", classifier)
        object.__setattr__(self, "ordering", ordering)

    @property
    def strategy(self) -> OrderingStrategy:
        return OrderingStrategy(self.ordering, self.cdf_k)

    @property
    def name(self) -> str:
        if self.measure is Measure.ED:
            return "ST"
        if self.measure.uncertain:
            return f"UST(UED,{self.classifier.value.upper()})"
        return f"UST({self.measure.value.upper().replace('-', '_')})"

    @classmethod
    def from_name(cls, name: str, ordering=None, cdf_k=100) -> "ModelSpec":
        table = {
            "ST": (Measure.ED, Classifier.GNB),
            "UST(DUST_NORMAL)": (Measure.DUST_NORMAL, Classifier.GNB),
            "UST(DUST_UNIFORM)": (Measure.DUST_UNIFORM, Classifier.GNB),
            "UST(UED,GNB)": (Measure.UED, Classifier.GNB),
            "UST(UED,UGNB)": (Measure.UED, Classifier.UGNB),
        }
        key = name.strip().upper().replace(" ", "")
        if key not in table:
            raise ConfigError(f"unknown model {name!r}; known models: {', '.join(table)}")
        measure, classifier = table[key]
        return cls(measure, ordering if measure.uncertain else None, classifier, cdf_k)


MODEL_NAMES = ("ST", "UST(DUST_NORMAL)", "UST(DUST_UNIFORM)", "UST(UED,GNB)", "UST(UED,UGNB)")


def classifier_inputs(features: UncertainFeatureMatrix, spec: ModelSpec):
    if spec.classifier is Classifier.UGNB:
        return features.best, features.delta
    if spec.measure.uncertain:
        return features.flattened()
    return features.best


class ShapeletModel:
    """Select shapelets, transform, then fit a naive Bayes classifier."""

    def __init__(self, spec: ModelSpec, selection: SelectionConfig):
        self.spec = spec
        self.selection = dataclasses.replace(
            selection, measure=spec.measure, ordering=spec.strategy
        )
        self.shapelets = None
        self.features = None
        self.model = None
        self.stats = SearchStats()

    def fit(self, D: UncertainDataset, shapelets=None, features=None):
        """Fit on ``D``; precomputed shapelets and features may be passed in."""
        if shapelets is None:
            shapelets = select_shapelets(D, self.selection, self.stats)
        if features is None:
            features = transform_fit(D, shapelets, self.spec.measure, self.spec.strategy)
        self.shapelets, self.features = shapelets, features
        X = classifier_inputs(features, self.spec)
        if self.spec.classifier is Classifier.UGNB:
            self.model = classify.ugnb_fit(X, D.labels)
        else:
            self.model = classify.gnb_fit(X, D.labels)
        return self

    def transform(self, D: UncertainDataset) -> UncertainFeatureMatrix:
        return transform_apply(D, self.shapelets, self.features, self.spec.measure, self.spec.strategy)

    def predict_proba(self, D: UncertainDataset, features=None):
        features = self.transform(D) if features is None else features
        X = classifier_inputs(features, self.spec)
        if self.spec.classifier is Classifier.UGNB:
            return classify.ugnb_predict_proba(self.model, X)
        return classify.gnb_predict_proba(self.model, X)

    def predict(self, D: UncertainDataset, features=None):
        return self.model.predict(self.predict_proba(D, features))


def accuracy(predictions, labels) -> float:
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape:
        raise ValueError(f"{predictions.size} predictions but {labels.size} labels")
    if labels.size < 1:
        raise ValueError("accuracy of an empty set is undefined")
    return float(np.mean(predictions == labels))


@dataclass(frozen=True)
class ExperimentResult:
    dataset: str
    model: str
    ordering: str
    measure: str
    classifier: str
    c: float
    seed: int
    accuracy: float
    train_seconds: float
    test_seconds: float
    shapelets_evaluated: int

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy out of range: {self.accuracy}")
        if self.train_seconds < 0 or self.test_seconds < 0:
            raise ValueError("durations must be non-negative")


CSV_FIELDS = tuple(f.name for f in dataclasses.fields(ExperimentResult))
_FIELD_TYPES = {"c": float, "seed": int, "accuracy": float, "train_seconds": float,
                "test_seconds": float, "shapelets_evaluated": int}


def result_row(result: ExperimentResult) -> dict:
    row = dataclasses.asdict(result)
    return {k: repr(v) if isinstance(v, float) else str(v) for k, v in row.items()}


def write_results(results: Iterable[ExperimentResult], fh, header=True):
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    if header:
        writer.writeheader()
    for r in results:
        writer.writerow(result_row(r))


def append_results(results: Iterable[ExperimentResult], path):
    """Append rows to ``path``, writing the header if the file is new or empty."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        write_results(results, fh, header=fresh)


def parse_results(fh) -> list:
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [
        ExperimentResult(**{k: _FIELD_TYPES.get(k, str)(v) for k, v in row.items()})
        for row in reader
    ]


def read_results(path) -> list:
    with open(path, newline="") as fh:
        return parse_results(fh)


def results_csv(results) -> str:
    buf = io.StringIO()
    write_results(results, buf)
    return buf.getvalue()


def evaluate(
    train: RawDataset,
    test: RawDataset,
    specs: Sequence[ModelSpec],
    c: float,
    seed: int,
    selection: SelectionConfig,
    stats: Optional[SearchStats] = None,
) -> list:
    """Run several models on one (dataset, c, seed) cell.

    Train and test are injected independently with seeds ``seed`` and
    ``seed + 1``. Models sharing measure and ordering share the shapelet
    search and transform; each reports that shared time plus its own
    classifier time. If ``stats`` is given it receives the bookkeeping of
    the last search.
    """
    try:
        D_train = inject_uncertainty(train, c, seed)
        D_test = inject_uncertainty(test, c, seed + 1)
    except Exception as exc:
        raise RuntimeError(f"injection stage failed: {exc}") from exc

    results = []
    for (measure, ordering), group in itertools.groupby(
        sorted(specs, key=lambda s: (s.measure.value, s.ordering.value)),
        key=lambda s: (s.measure, s.ordering),
    ):
        group = list(group)
        shared = ShapeletModel(group[0], selection)
        if stats is not None:
            shared.stats = stats
        t0 = time.perf_counter()
        try:
            shapelets = select_shapelets(D_train, shared.selection, shared.stats)
        except Exception as exc:
            raise RuntimeError(f"selection stage failed: {exc}") from exc
        try:
            features = transform_fit(D_train, shapelets, measure, group[0].strategy)
            shared_train = time.perf_counter() - t0
            t0 = time.perf_counter()
            test_features = transform_apply(D_test, shapelets, features, measure, group[0].strategy)
            shared_test = time.perf_counter() - t0
        except Exception as exc:
            raise RuntimeError(f"transform stage failed: {exc}") from exc
        log.info(
            "%s %s c=%s seed=%s: %d/%d candidates in %.2fs",
            train.name, measure.value, c, seed,
            shared.stats.evaluated, shared.stats.total_candidates, shared.stats.elapsed,
        )
        for spec in group:
            model = ShapeletModel(spec, selection)
            model.stats = shared.stats
            t0 = time.perf_counter()
            try:
                model.fit(D_train, shapelets, features)
            except Exception as exc:
                raise RuntimeError(f"classifier fit stage failed for {spec.name}: {exc}") from exc
            train_seconds = shared_train + time.perf_counter() - t0
            t0 = time.perf_counter()
            try:
                predictions = model.predict(D_test, test_features)
            except Exception as exc:
                raise RuntimeError(f"prediction stage failed for {spec.name}: {exc}") from exc
            test_seconds = shared_test + time.perf_counter() - t0
            results.append(
                ExperimentResult(
                    dataset=train.name,
                    model=spec.name,
                    ordering=spec.ordering.value,
                    measure=spec.measure.value,
                    classifier=spec.classifier.value,
                    c=float(c),
                    seed=int(seed),
                    accuracy=accuracy(predictions, D_test.labels),
                    train_seconds=train_seconds,
                    test_seconds=test_seconds,
                    shapelets_evaluated=shared.stats.evaluated,
                )
            )
    order = {id(s): i for i, s in enumerate(specs)}
    by_name = {(r.model, r.ordering): r for r in results}
    return [by_name[(s.name, s.ordering.value)] for s in sorted(specs, key=lambda s: order[id(s)])]


def _load_pair(train_path, test_path):
    try:
        train = load_ucr_tsv(train_path)
        test = load_ucr_tsv(test_path, name=train.name)
    except Exception as exc:
        raise RuntimeError(f"loading stage failed: {exc}") from exc
    if train.m != test.m:
        raise RuntimeError(f"loading stage failed: train length {train.m} != test length {test.m}")
    return train, test


def run_experiment(
    train_path, test_path, spec: ModelSpec, c: float, seed: int, selection: SelectionConfig, stats=None
) -> ExperimentResult:
    """Load both splits, inject uncertainty, train on one and score on the other."""
    train, test = _load_pair(train_path, test_path)
    return evaluate(train, test, [spec], c, seed, selection, stats)[0]


def bench(
    train_path,
    test_path,
    specs: Sequence[ModelSpec],
    levels: Sequence[float],
    seeds: Sequence[int],
    selection: SelectionConfig,
) -> list:
    """Cross product of models, uncertainty levels and seeds on one dataset."""
    train, test = _load_pair(train_path, test_path)
    results = []
    for c in levels:
        for seed in seeds:
            results.extend(evaluate(train, test, specs, c, seed, selection))
    return results


def median_accuracy(results, model, c=None) -> float:
    values = [r.accuracy for r in results if r.model == model and (c is None or math.isclose(r.c, c))]
    if not values:
        raise KeyError(f"no results for model {model} at c={c}")
    return float(np.median(values))
