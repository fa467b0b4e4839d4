import itertools

import numpy as np
import pytest

from beewrap.colony import (
    AbcConfig,
    CardinalityMode,
    FeatureSubset,
    FoodSource,
    ObjectiveError,
    ObjectiveValue,
    TraceRecord,
    _employed_phase,
    _Evaluator,
    _scout_phase,
    _stream,
    abc_run,
    cv_objective,
    init_population,
    neighbor,
    selection_probabilities,
)
from beewrap.dataset import kfold_split
from beewrap.metrics import CvSummary, FoldMetrics


def make_objective(cost_fn):
    """Objective stub: wraps a cost function of the index tuple."""

    def objective(subset):
        cost = float(cost_fn(subset.indices))
        fm = FoldMetrics(cost, 0.0, np.array([cost, -cost]))
        cv = CvSummary((fm,), cost, 0.0, cost)
        return ObjectiveValue(cv, len(subset), cost)

    return objective


# ---------------------------------------------------------------------------
# FeatureSubset


def test_subset_invariants():
    with pytest.raises(ValueError, match="nonempty"):
        FeatureSubset(())
    with pytest.raises(ValueError, match="strictly increasing"):
        FeatureSubset((3, 3))
    with pytest.raises(ValueError, match="strictly increasing"):
        FeatureSubset((5, 2))
    with pytest.raises(ValueError, match="nonnegative"):
        FeatureSubset((-1, 2))


def test_subset_of_normalizes_and_bound_checks():
    s = FeatureSubset.of([7, 1, 7, 3], p=10)
    assert s.indices == (1, 3, 7)
    with pytest.raises(ValueError, match="out of range"):
        FeatureSubset.of([1, 10], p=10)


def test_food_source_fitness_rule():
    objective = make_objective(lambda idx: 3.0)
    src = FoodSource(FeatureSubset((0,)), objective(FeatureSubset((0,))))
    assert src.fitness == 1.0 / (1.0 + 3.0)


def test_fitness_strictly_decreasing_in_cost():
    costs = np.linspace(0.0, 50.0, 40)
    objective = make_objective(lambda idx: costs[idx[0]])
    fits = [FoodSource(FeatureSubset((i,)), objective(FeatureSubset((i,)))).fitness for i in range(40)]
    assert all(a > b for a, b in zip(fits, fits[1:]))


def test_equal_rmse_smaller_subset_costs_less():
    objective = make_objective(lambda idx: 7.5)  # identical model error for any subset
    penalty = 25.0
    small = objective(FeatureSubset((0, 1)))
    big = objective(FeatureSubset((0, 1, 2)))
    cost = lambda v: v.cv.mean_rmse + penalty * v.n_features
    assert cost(small) < cost(big)


# ---------------------------------------------------------------------------
# cv_objective


def test_cv_objective_zero_penalty_is_mean_rmse(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    subset = FeatureSubset((1, 7))
    value = cv_objective(subset, planted_ds, fast_anfis_regressor, folds, feature_penalty=0.0)
    assert value.cost == value.cv.mean_rmse
    assert value.n_features == 2


def test_cv_objective_deterministic(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    subset = FeatureSubset((0, 3, 9))
    a = cv_objective(subset, planted_ds, fast_anfis_regressor, folds, feature_penalty=25.0)
    b = cv_objective(subset, planted_ds, fast_anfis_regressor, folds, feature_penalty=25.0)
    assert a.cost == b.cost
    assert a.cv.mean_rmse == b.cv.mean_rmse


def test_cv_objective_planted_pair_beats_every_other_pair(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    costs = {}
    for combo in itertools.combinations(range(planted_ds.n_features), 2):
        value = cv_objective(
            FeatureSubset(combo), planted_ds, fast_anfis_regressor, folds, feature_penalty=25.0
        )
        costs[combo] = value.cost
    best = min(costs, key=costs.get)
    assert best == (1, 7)
    others = [v for k, v in costs.items() if k != (1, 7)]
    assert costs[(1, 7)] < min(others)


def test_cv_objective_propagates_fold_index(planted_ds):
    class Exploding:
        seed = 0

        def fit(self, X, y, seed):
            raise RuntimeError("boom")

    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    with pytest.raises(ObjectiveError, match="fold 0: boom"):
        cv_objective(FeatureSubset((0,)), planted_ds, Exploding(), folds, 0.0)


def test_cv_objective_rejects_out_of_range_subset(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    with pytest.raises(ValueError, match="out of range"):
        cv_objective(FeatureSubset((99,)), planted_ds, fast_anfis_regressor, folds, 0.0)


# ---------------------------------------------------------------------------
# init_population


def test_init_population_fixed_sizes():
    cfg = AbcConfig(population=50, cardinality=CardinalityMode.fixed(2), seed=0)
    sources = init_population(cfg, 20, _stream(0, 0, 0, 0), make_objective(lambda idx: 1.0))
    assert len(sources) == 50
    assert all(len(s.subset) == 2 for s in sources)
    assert all(s.trials == 0 for s in sources)
    assert len({s.subset.indices for s in sources}) == 50  # plenty of room: all distinct


def test_init_population_free_sizes_bounded():
    cfg = AbcConfig(population=30, cardinality=CardinalityMode.free(16), seed=1)
    sources = init_population(cfg, 512, _stream(1, 0, 0, 0), make_objective(lambda idx: 1.0))
    sizes = {len(s.subset) for s in sources}
    assert min(sizes) >= 1 and max(sizes) <= 16


def test_init_population_seeded_repeat_identical():
    cfg = AbcConfig(population=12, cardinality=CardinalityMode.free(5), seed=3)
    objective = make_objective(lambda idx: sum(idx))
    a = init_population(cfg, 30, _stream(3, 0, 0, 0), objective)
    b = init_population(cfg, 30, _stream(3, 0, 0, 0), objective)
    assert [s.subset.indices for s in a] == [s.subset.indices for s in b]


def test_init_population_fixed_k_too_large():
    cfg = AbcConfig(population=5, cardinality=CardinalityMode.fixed(9), seed=0)
    with pytest.raises(ValueError, match="exceeds p"):
        init_population(cfg, 4, _stream(0, 0, 0, 0), make_objective(lambda idx: 1.0))


def test_init_population_small_space_accepts_duplicates():
    cfg = AbcConfig(population=5, cardinality=CardinalityMode.fixed(1), seed=0)
    sources = init_population(cfg, 3, _stream(0, 0, 0, 0), make_objective(lambda idx: 1.0))
    assert len(sources) == 5  # only 3 distinct subsets exist; duplicates allowed


# ---------------------------------------------------------------------------
# neighbor


def test_neighbor_fixed_prefers_partner():
    rng = _stream(0, 1, 1, 0)
    hits = 0
    trials = 4000
    for _ in range(trials):
        result = neighbor(FeatureSubset((3,)), FeatureSubset((9,)), 10, CardinalityMode.fixed(1), rng)
        assert len(result) == 1
        assert result.indices != (3,)
        hits += result.indices == (9,)
    # partner draw happens with probability 1/2 plus 1/18 from the uniform branch
    assert 0.45 < hits / trials < 0.65


def test_neighbor_fixed_full_space_is_identity():
    rng = _stream(0, 1, 1, 1)
    s = FeatureSubset((0, 1, 2))
    assert neighbor(s, s, 3, CardinalityMode.fixed(3), rng) is s


def test_neighbor_free_equal_subsets_degenerate_flip():
    rng = _stream(0, 1, 1, 2)
    s = FeatureSubset((2, 5))
    for _ in range(200):
        result = neighbor(s, s, 8, CardinalityMode.free(4), rng)
        assert result.indices != s.indices
        assert 1 <= len(result) <= 4


def test_neighbor_stress_invariants():
    rng = _stream(7, 0, 0, 0)
    modes = [CardinalityMode.fixed(3), CardinalityMode.free(6)]
    p = 15
    for _ in range(100_000):
        mode = modes[int(rng.integers(2))]
        if mode.kind == "fixed":
            size_a = 3
            size_b = 3
        else:
            size_a = int(rng.integers(1, 7))
            size_b = int(rng.integers(1, 7))
        a = FeatureSubset(tuple(sorted(rng.choice(p, size_a, replace=False).tolist())))
        b = FeatureSubset(tuple(sorted(rng.choice(p, size_b, replace=False).tolist())))
        result = neighbor(a, b, p, mode, rng)
        idx = result.indices
        assert idx == tuple(sorted(set(idx)))  # sorted, unique
        assert idx[0] >= 0 and idx[-1] < p
        if mode.kind == "fixed":
            assert len(idx) == 3
        else:
            assert 1 <= len(idx) <= 6
        if p > len(a):
            assert idx != a.indices


# ---------------------------------------------------------------------------
# selection probabilities


def test_selection_probabilities_hand_example():
    objective = make_objective(lambda idx: {(0,): 1.0, (1,): 3.0}[idx])
    sources = [
        FoodSource(FeatureSubset((0,)), objective(FeatureSubset((0,)))),
        FoodSource(FeatureSubset((1,)), objective(FeatureSubset((1,)))),
    ]
    probs = selection_probabilities(sources)
    np.testing.assert_allclose(probs, [2.0 / 3.0, 1.0 / 3.0])


def test_selection_probabilities_single_and_uniform():
    objective = make_objective(lambda idx: 2.0)
    single = [FoodSource(FeatureSubset((0,)), objective(FeatureSubset((0,))))]
    np.testing.assert_array_equal(selection_probabilities(single), [1.0])
    equal = [
        FoodSource(FeatureSubset((i,)), objective(FeatureSubset((i,)))) for i in range(4)
    ]
    np.testing.assert_allclose(selection_probabilities(equal), np.full(4, 0.25))


# ---------------------------------------------------------------------------
# phases (unit level)


def test_employed_phase_greedy_and_trials():
    # deterministic objective: cost = sum of indices, so lower indices win
    objective = make_objective(lambda idx: sum(idx))
    cfg = AbcConfig(population=6, iterations=1, cardinality=CardinalityMode.fixed(2), seed=5)
    evaluator = _Evaluator(objective)
    sources = init_population(cfg, 12, _stream(5, 0, 0, 0), evaluator)
    before = [(s.subset.indices, s.cost, s.trials) for s in sources]
    _employed_phase(cfg, sources, evaluator, iteration=1, p=12)
    for (old_subset, old_cost, old_trials), src in zip(before, sources):
        assert src.cost <= old_cost  # greedy acceptance never raises a source's cost
        if src.subset.indices == old_subset:
            assert src.trials == old_trials + 1
        else:
            assert src.trials == 0


def test_scout_phase_replaces_exhausted_sources():
    objective = make_objective(lambda idx: sum(idx))
    cfg = AbcConfig(population=3, iterations=1, limit=2, cardinality=CardinalityMode.fixed(2), seed=9)
    evaluator = _Evaluator(objective)
    sources = init_population(cfg, 10, _stream(9, 0, 0, 0), evaluator)
    sources[1].trials = 3  # over the limit
    sources[2].trials = 2  # exactly at the limit: kept
    kept = sources[2].subset.indices
    _scout_phase(cfg, sources, evaluator, iteration=1, p=10)
    assert sources[1].trials == 0
    assert sources[2].subset.indices == kept and sources[2].trials == 2


# ---------------------------------------------------------------------------
# abc_run


def test_abc_recovers_planted_pair(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    cfg = AbcConfig(
        population=50, iterations=25, feature_penalty=25.0,
        cardinality=CardinalityMode.fixed(2), seed=0,
    )
    best, trace = abc_run(cfg, planted_ds, fast_anfis_regressor, folds)
    assert best.subset.indices == (1, 7)
    assert len(trace) == 25


def test_abc_trace_non_increasing_and_deterministic(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    cfg = AbcConfig(
        population=10, iterations=6, feature_penalty=25.0,
        cardinality=CardinalityMode.free(4), seed=3,
    )
    best1, trace1 = abc_run(cfg, planted_ds, fast_anfis_regressor, folds)
    costs = [r.best_cost for r in trace1]
    assert costs == sorted(costs, reverse=True)
    assert best1.cost == costs[-1]

    best2, trace2 = abc_run(cfg, planted_ds, fast_anfis_regressor, folds, n_jobs=4)
    assert best2.subset.indices == best1.subset.indices
    assert trace2 == trace1


def test_abc_single_possible_subset(planted_ds, fast_anfis_regressor):
    small = planted_ds
    folds = kfold_split(small.n_samples, 5, seed=1)
    cfg = AbcConfig(
        population=4, iterations=2, cardinality=CardinalityMode.fixed(small.n_features), seed=0
    )
    best, trace = abc_run(cfg, small, fast_anfis_regressor, folds)
    assert best.subset.indices == tuple(range(small.n_features))
    assert trace[0].best_subset == best.subset.indices


def test_abc_progress_sink_sees_every_iteration(planted_ds, fast_anfis_regressor):
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    cfg = AbcConfig(population=6, iterations=4, cardinality=CardinalityMode.fixed(2), seed=2)
    records = []
    abc_run(cfg, planted_ds, fast_anfis_regressor, folds, progress=records.append)
    assert [r.iteration for r in records] == [1, 2, 3, 4]
    assert all(isinstance(r, TraceRecord) for r in records)


def test_abc_smaller_subset_wins_ties(planted_ds, fast_anfis_regressor):
    # with a positive penalty, equal-RMSE subsets are ordered by size
    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    sub = FeatureSubset((1, 7))
    small = cv_objective(sub, planted_ds, fast_anfis_regressor, folds, feature_penalty=25.0)
    bigger = cv_objective(
        FeatureSubset((1, 5, 7)), planted_ds, fast_anfis_regressor, folds, feature_penalty=25.0
    )
    # the pair fits essentially perfectly; adding a feature costs 25 Da more
    assert small.cost < bigger.cost


def test_abc_error_carries_phase_context(planted_ds):
    class ExplodesLater:
        seed = 0

        def __init__(self):
            self.calls = 0

        def fit(self, X, y, seed):
            self.calls += 1
            if self.calls > 60:  # survive init, fail during iteration 1
                raise RuntimeError("boom")

            class Mean:
                def __init__(self, mu):
                    self.mu = mu

                def predict(self, X):
                    return np.full(len(X), self.mu)

            return Mean(float(np.mean(y)))

    folds = kfold_split(planted_ds.n_samples, 5, seed=1)
    cfg = AbcConfig(population=10, iterations=3, cardinality=CardinalityMode.fixed(2), seed=0)
    with pytest.raises(ObjectiveError, match=r"iteration \d+, \w+ phase"):
        abc_run(cfg, planted_ds, ExplodesLater(), folds)
