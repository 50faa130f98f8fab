import numpy as np
import pytest
from hypothesis import given, strategies as st

from molbridge.errors import (
    EmptyMatrixError,
    EmptySubsetError,
    IndexOutOfRangeError,
    NoMatchingSamplesError,
)
from molbridge.metrics import (
    ConfusionMatrix,
    accumulate,
    format_metrics,
    macro_metrics,
    stratified_metrics,
)


class TestAccumulate:
    def test_perfect_predictions_diagonal(self):
        cm = accumulate([0, 1, 2, 1], [0, 1, 2, 1], 3)
        assert np.array_equal(cm.counts, np.diag([1, 2, 1]))

    def test_empty_zero_matrix(self):
        cm = accumulate([], [], 2)
        assert cm.counts.tolist() == [[0, 0], [0, 0]]

    def test_hand_tally(self):
        cm = accumulate([0, 1, 1], [0, 0, 1], 2)
        assert cm.counts.tolist() == [[1, 1], [0, 1]]

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            accumulate([2], [0], 2)
        with pytest.raises(IndexOutOfRangeError):
            accumulate([0], [-1], 2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            accumulate([0, 1], [0], 2)


class TestMacroMetrics:
    def test_diagonal_all_ones(self):
        values = macro_metrics(ConfusionMatrix(np.diag([3, 2, 5])))
        assert values == {"accuracy": 1.0, "macro_precision": 1.0,
                          "macro_recall": 1.0, "macro_f1": 1.0}

    def test_hand_computed_two_class(self):
        values = macro_metrics(ConfusionMatrix(np.array([[1, 1], [0, 1]])))
        assert abs(values["accuracy"] - 2 / 3) < 1e-9
        # class 0: P=1, R=1/2, F1=2/3; class 1: P=1/2, R=1, F1=2/3
        assert abs(values["macro_f1"] - 2 / 3) < 1e-9
        assert abs(values["macro_precision"] - 3 / 4) < 1e-9
        assert abs(values["macro_recall"] - 3 / 4) < 1e-9

    def test_absent_class_counts_as_zero(self):
        # all samples class 0 and correct, but C = 2
        values = macro_metrics(ConfusionMatrix(np.array([[4, 0], [0, 0]])))
        assert values["accuracy"] == 1.0
        assert values["macro_recall"] == 0.5
        assert values["macro_precision"] == 0.5
        assert values["macro_f1"] == 0.5

    def test_empty_matrix(self):
        with pytest.raises(EmptyMatrixError):
            macro_metrics(ConfusionMatrix(np.zeros((2, 2), dtype=np.int64)))

    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                    min_size=1, max_size=60))
    def test_values_in_unit_interval_and_permutation_invariant(self, pairs):
        preds = [p for p, _ in pairs]
        labels = [t for _, t in pairs]
        values = macro_metrics(accumulate(preds, labels, 3))
        for v in values.values():
            assert 0.0 <= v <= 1.0
        rev = macro_metrics(accumulate(preds[::-1], labels[::-1], 3))
        assert values == rev


def brute_force_subset(preds, labels, n_classes, subset):
    """Filter samples, recompute per-class ratios, average over subset."""
    keep = [(p, t) for p, t in zip(preds, labels) if t in subset]
    correct = sum(1 for p, t in keep if p == t)
    per_class = {}
    for c in subset:
        tp = sum(1 for p, t in keep if p == c and t == c)
        pred_c = sum(1 for p, _ in keep if p == c)
        true_c = sum(1 for _, t in keep if t == c)
        precision = tp / pred_c if pred_c else 0.0
        recall = tp / true_c if true_c else 0.0
        f1 = 2 * precision * recall / (precision + recall) \
            if precision + recall else 0.0
        per_class[c] = (precision, recall, f1)
    k = len(subset)
    return {
        "accuracy": correct / len(keep),
        "macro_precision": sum(v[0] for v in per_class.values()) / k,
        "macro_recall": sum(v[1] for v in per_class.values()) / k,
        "macro_f1": sum(v[2] for v in per_class.values()) / k,
    }


class TestStratified:
    def test_full_subset_equals_macro(self):
        preds = [0, 1, 2, 2, 0, 1, 0]
        labels = [0, 1, 1, 2, 2, 1, 0]
        full = macro_metrics(accumulate(preds, labels, 3))
        strat = stratified_metrics(preds, labels, 3, [0, 1, 2])
        for key in full:
            assert abs(full[key] - strat[key]) < 1e-12

    def test_matches_brute_force(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            n = int(rng.integers(5, 40))
            preds = rng.integers(0, 3, n).tolist()
            labels = rng.integers(0, 3, n).tolist()
            subset = [0, 1]
            if not any(t in subset for t in labels):
                continue
            mine = stratified_metrics(preds, labels, 3, subset)
            oracle = brute_force_subset(preds, labels, 3, subset)
            for key in oracle:
                assert abs(mine[key] - oracle[key]) < 1e-12

    def test_empty_subset(self):
        with pytest.raises(EmptySubsetError):
            stratified_metrics([0], [0], 2, [])

    def test_no_matching_samples(self):
        with pytest.raises(NoMatchingSamplesError):
            stratified_metrics([0, 0], [0, 0], 2, [1])

    def test_subset_class_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            stratified_metrics([0], [0], 2, [5])


class TestFormat:
    def test_key_value_lines(self):
        text = format_metrics({"accuracy": 0.5, "macro_precision": 0.25,
                               "macro_recall": 1.0, "macro_f1": 0.4})
        lines = text.splitlines()
        assert lines[0] == "accuracy=0.500000"
        assert len(lines) == 4
