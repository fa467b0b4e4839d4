"""Bee-colony search over feature subsets.

Food sources are feature subsets scored by cross-validated regression error
plus a per-feature penalty. Employed bees perturb their own subset, onlookers
favor low-cost subsets, and stale sources are abandoned to scouts. All random
decisions draw from streams keyed by (seed, iteration, phase, index), and
proposals are merged in index order, so runs are bit-identical for any degree
of evaluation parallelism.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from beewrap.dataset import Dataset, FoldAssignment, standardize
from beewrap.metrics import CvSummary, fold_metrics, summarize_folds

__all__ = [
    "FeatureSubset",
    "ObjectiveValue",
    "FoodSource",
    "CardinalityMode",
    "AbcConfig",
    "TraceRecord",
    "ObjectiveError",
    "cv_objective",
    "init_population",
    "neighbor",
    "selection_probabilities",
    "abc_run",
]


class ObjectiveError(RuntimeError):
    """Objective evaluation failed; message carries fold / phase context."""


@dataclass(frozen=True)
class FeatureSubset:
    """Sorted, duplicate-free, nonempty feature indices into a Dataset."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise ValueError("feature subset must be nonempty")
        if any(i < 0 for i in idx):
            raise ValueError("feature indices must be nonnegative")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("feature indices must be strictly increasing")

    @classmethod
    def of(cls, indices, p: int | None = None) -> "FeatureSubset":
        subset = cls(tuple(sorted(set(int(i) for i in indices))))
        if p is not None and subset.indices[-1] >= p:
            raise ValueError(f"feature index {subset.indices[-1]} out of range for p={p}")
        return subset

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class ObjectiveValue:
    """Cross-validated score of one subset; cost is what the search minimizes."""

    cv: CvSummary
    n_features: int
    cost: float  # mean_rmse + feature_penalty * n_features


@dataclass
class FoodSource:
    """A candidate subset, its score, and its abandonment counter."""

    subset: FeatureSubset
    objective: ObjectiveValue
    trials: int = 0

    @property
    def cost(self) -> float:
        return self.objective.cost

    @property
    def fitness(self) -> float:
        return 1.0 / (1.0 + self.cost)


@dataclass(frozen=True)
class CardinalityMode:
    """Subset-size policy: 'fixed' pins |subset| = k, 'free' allows 1..max_k."""

    kind: str
    k: int | None = None
    max_k: int | None = None

    def __post_init__(self):
        if self.kind == "fixed":
            if not self.k or self.k < 1:
                raise ValueError("fixed mode needs k >= 1")
        elif self.kind == "free":
            if not self.max_k or self.max_k < 1:
                raise ValueError("free mode needs max_k >= 1")
        else:
            raise ValueError(f"unknown cardinality kind {self.kind!r}")

    @classmethod
    def fixed(cls, k: int) -> "CardinalityMode":
        return cls("fixed", k=k)

    @classmethod
    def free(cls, max_k: int = 16) -> "CardinalityMode":
        return cls("free", max_k=max_k)


@dataclass(frozen=True)
class AbcConfig:
    population: int = 50
    iterations: int = 25
    limit: int | None = None  # abandonment threshold; defaults to population
    feature_penalty: float = 25.0  # Da added to the cost per selected feature
    cardinality: CardinalityMode = field(default_factory=CardinalityMode.free)
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.limit is not None and self.limit < 1:
            raise ValueError("limit must be >= 1")
        if self.feature_penalty < 0:
            raise ValueError("feature_penalty must be >= 0")

    @property
    def effective_limit(self) -> int:
        return self.population if self.limit is None else self.limit


@dataclass(frozen=True)
class TraceRecord:
    """One per iteration: global best so far and cumulative objective evaluations."""

    iteration: int
    best_cost: float
    best_subset: tuple[int, ...]
    evaluations: int


def _derived_seed(base: int, *key: int) -> int:
    return int(np.random.SeedSequence(entropy=base, spawn_key=key).generate_state(1)[0])


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def cv_objective(
    subset: FeatureSubset,
    dataset: Dataset,
    regressor,
    folds: FoldAssignment,
    feature_penalty: float,
) -> ObjectiveValue:
    """Leakage-free k-fold score of a subset under the given regressor.

    Per fold: fit the scaler on training rows of the subset columns, train on
    the transformed training rows, predict the held-out rows. Deterministic
    given (subset, folds, regressor seed).
    """
    if subset.indices[-1] >= dataset.n_features:
        raise ValueError(f"subset index {subset.indices[-1]} out of range for p={dataset.n_features}")
    cols = np.asarray(subset.indices, dtype=np.int64)
    per_fold = []
    for f in range(folds.k):
        train = folds.train_rows(f)
        test = folds.test_rows(f)
        try:
            _, Xs = standardize(train, dataset.X[:, cols])
            model = regressor.fit(
                Xs[train], dataset.y[train], seed=_derived_seed(regressor.seed, f)
            )
            predicted = model.predict(Xs[test])
            per_fold.append(fold_metrics(dataset.y[test], predicted))
        except Exception as exc:
            raise ObjectiveError(f"objective failed in fold {f}: {exc}") from exc
    cv = summarize_folds(per_fold)
    return ObjectiveValue(cv, len(subset), cv.mean_rmse + feature_penalty * len(subset))


def _random_subset(mode: CardinalityMode, p: int, rng: np.random.Generator) -> FeatureSubset:
    if mode.kind == "fixed":
        size = mode.k
    else:
        size = int(rng.integers(1, min(mode.max_k, p) + 1))
    picked = rng.choice(p, size=size, replace=False)
    return FeatureSubset(tuple(sorted(int(i) for i in picked)))


def _generate_subsets(cfg: AbcConfig, p: int, rng: np.random.Generator) -> list[FeatureSubset]:
    if p < 1:
        raise ValueError("need at least one feature")
    if cfg.cardinality.kind == "fixed" and cfg.cardinality.k > p:
        raise ValueError(f"fixed cardinality k={cfg.cardinality.k} exceeds p={p}")
    subsets: list[FeatureSubset] = []
    seen: set[tuple[int, ...]] = set()
    for _ in range(cfg.population):
        subset = _random_subset(cfg.cardinality, p, rng)
        for _attempt in range(100):
            if subset.indices not in seen:
                break
            subset = _random_subset(cfg.cardinality, p, rng)
        seen.add(subset.indices)
        subsets.append(subset)
    return subsets


def init_population(cfg: AbcConfig, p: int, rng: np.random.Generator, objective) -> list[FoodSource]:
    """Random subsets per the cardinality mode, distinct where possible."""
    subsets = _generate_subsets(cfg, p, rng)
    return [FoodSource(s, objective(s), trials=0) for s in subsets]


def neighbor(
    subset: FeatureSubset,
    partner: FeatureSubset,
    p: int,
    mode: CardinalityMode,
    rng: np.random.Generator,
) -> FeatureSubset:
    """One neighborhood move biased toward the partner subset.

    Fixed mode swaps one member for a non-member (the replacement comes from
    partner-minus-subset half the time). Free mode flips one position where
    the subsets disagree, then repairs size bounds. The result is always valid
    and differs from the input whenever p > |subset|.
    """
    members = subset.indices
    if mode.kind == "fixed":
        if len(members) == p:
            return subset  # only one subset of this size exists
        removed = members[int(rng.integers(len(members)))]
        use_partner = rng.random() < 0.5
        partner_pool = tuple(sorted(set(partner.indices) - set(members)))
        if use_partner and partner_pool:
            added = partner_pool[int(rng.integers(len(partner_pool)))]
        else:
            complement = tuple(i for i in range(p) if i not in set(members))
            added = complement[int(rng.integers(len(complement)))]
        result = set(members)
        result.discard(removed)
        result.add(added)
        return FeatureSubset(tuple(sorted(result)))

    # free mode
    current = set(members)
    disagree = tuple(sorted(current.symmetric_difference(partner.indices)))
    if disagree:
        flip = disagree[int(rng.integers(len(disagree)))]
    else:
        flip = int(rng.integers(p))
    if flip in current:
        current.discard(flip)
        if not current:
            pool = [i for i in range(p) if i != flip] or [flip]
            current.add(pool[int(rng.integers(len(pool)))])
    else:
        current.add(flip)
        max_k = min(mode.max_k, p)
        if len(current) > max_k:
            pool = sorted(current - {flip})
            current.discard(pool[int(rng.integers(len(pool)))])
    return FeatureSubset(tuple(sorted(current)))


def selection_probabilities(sources: list[FoodSource]) -> np.ndarray:
    """Fitness-proportional probabilities; uniform if all fitness is zero."""
    if not sources:
        raise ValueError("no food sources")
    fitness = np.array([s.fitness for s in sources], dtype=float)
    total = fitness.sum()
    if total == 0.0:
        return np.full(len(sources), 1.0 / len(sources))
    return fitness / total


def _roulette(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    edges = np.cumsum(probabilities)
    idx = int(np.searchsorted(edges, rng.random(), side="right"))
    return min(idx, len(probabilities) - 1)


class _Evaluator:
    """Caches objective values per subset; batches run on up to n_jobs threads."""

    def __init__(self, objective, n_jobs: int = 1):
        self._objective = objective
        self._n_jobs = max(1, int(n_jobs))
        self.cache: dict[tuple[int, ...], ObjectiveValue] = {}
        self.evaluations = 0
        self.best: tuple[FeatureSubset, ObjectiveValue] | None = None

    def __call__(self, subset: FeatureSubset) -> ObjectiveValue:
        self.evaluate_all([subset])
        return self.cache[subset.indices]

    def evaluate_all(self, subsets) -> None:
        pending: list[FeatureSubset] = []
        seen: set[tuple[int, ...]] = set()
        for s in subsets:
            if s.indices not in self.cache and s.indices not in seen:
                seen.add(s.indices)
                pending.append(s)
        if not pending:
            return
        if self._n_jobs == 1 or len(pending) == 1:
            results = [self._objective(s) for s in pending]
        else:
            with ThreadPoolExecutor(max_workers=self._n_jobs) as pool:
                results = list(pool.map(self._objective, pending))
        # merge in submission order so bookkeeping is independent of scheduling
        for s, value in zip(pending, results):
            self.cache[s.indices] = value
            self.evaluations += 1
            if self.best is None or value.cost < self.best[1].cost:
                self.best = (s, value)


def _partner(i: int, population: int, rng: np.random.Generator) -> int:
    j = int(rng.integers(population - 1))
    return j + 1 if j >= i else j


def _merge_greedy(sources, proposals, evaluator) -> None:
    """Accept strictly cheaper candidates per source; count failed trials."""
    for i, candidate in proposals:
        value = evaluator.cache[candidate.indices]
        if value.cost < sources[i].cost:
            sources[i] = FoodSource(candidate, value, trials=0)
        else:
            sources[i].trials += 1


def _employed_phase(cfg, sources, evaluator, iteration, p) -> None:
    proposals = []
    for i in range(cfg.population):
        rng = _stream(cfg.seed, iteration, 1, i)
        j = _partner(i, cfg.population, rng)
        proposals.append((i, neighbor(sources[i].subset, sources[j].subset, p, cfg.cardinality, rng)))
    evaluator.evaluate_all([c for _, c in proposals])
    _merge_greedy(sources, proposals, evaluator)


def _onlooker_phase(cfg, sources, evaluator, iteration, p) -> None:
    probabilities = selection_probabilities(sources)
    proposals = []
    for o in range(cfg.population):
        rng = _stream(cfg.seed, iteration, 2, o)
        i = _roulette(probabilities, rng)
        j = _partner(i, cfg.population, rng)
        proposals.append((i, neighbor(sources[i].subset, sources[j].subset, p, cfg.cardinality, rng)))
    evaluator.evaluate_all([c for _, c in proposals])
    _merge_greedy(sources, proposals, evaluator)


def _scout_phase(cfg, sources, evaluator, iteration, p) -> None:
    replacements = []
    for i in range(cfg.population):
        if sources[i].trials > cfg.effective_limit:
            rng = _stream(cfg.seed, iteration, 3, i)
            replacements.append((i, _random_subset(cfg.cardinality, p, rng)))
    evaluator.evaluate_all([c for _, c in replacements])
    for i, fresh in replacements:
        sources[i] = FoodSource(fresh, evaluator.cache[fresh.indices], trials=0)


_PHASES = (("employed", _employed_phase), ("onlooker", _onlooker_phase), ("scout", _scout_phase))


def abc_run(
    cfg: AbcConfig,
    dataset: Dataset,
    regressor,
    folds: FoldAssignment,
    progress=None,
    n_jobs: int = 1,
) -> tuple[FoodSource, list[TraceRecord]]:
    """Run the employed / onlooker / scout loop and return (best, trace).

    The global best over every evaluated subset is tracked and never lost;
    the trace records it once per iteration. `progress`, when given, is called
    with each TraceRecord.
    """
    p = dataset.n_features
    evaluator = _Evaluator(
        lambda s: cv_objective(s, dataset, regressor, folds, cfg.feature_penalty),
        n_jobs=n_jobs,
    )

    subsets = _generate_subsets(cfg, p, _stream(cfg.seed, 0, 0, 0))
    evaluator.evaluate_all(subsets)
    sources = [FoodSource(s, evaluator.cache[s.indices], trials=0) for s in subsets]

    trace: list[TraceRecord] = []
    for iteration in range(1, cfg.iterations + 1):
        for phase_name, phase in _PHASES:
            try:
                phase(cfg, sources, evaluator, iteration, p)
            except ObjectiveError as exc:
                raise ObjectiveError(f"iteration {iteration}, {phase_name} phase: {exc}") from exc

        best_subset, best_value = evaluator.best
        record = TraceRecord(iteration, best_value.cost, best_subset.indices, evaluator.evaluations)
        trace.append(record)
        if progress is not None:
            progress(record)

    best_subset, best_value = evaluator.best
    return FoodSource(best_subset, best_value, trials=0), trace
