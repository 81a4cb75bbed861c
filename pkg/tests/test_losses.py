"""
Tests for the contrastive losses and the combined client objective.
"""

import numpy as np
import pytest

from core.errors import InsufficientClassesError, NoPositivesError, NoUsableAnchorsError
from losses import (
    combined_objective,
    decoupled_prototype_loss,
    decoupled_sample_loss,
    supcon_decomposed,
    supcon_loss,
)
from models.embeddings import EmbeddingBatch, PrototypeSet
from numerics import GradientTape, ParameterVector, Tensor, finite_diff_gradient, l2_normalize

from conftest import random_batch, random_prototypes, random_unit_rows

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])
DIAG = np.array([1.0, 1.0]) / np.sqrt(2.0)


def _batch(rows, labels, n_classes=None):
    return EmbeddingBatch.from_array(np.array(rows), labels, n_classes)


def _brute_supcon(z: np.ndarray, labels: np.ndarray, tau: float) -> float:
    """Triple loop over anchors, positives and denominators."""
    per_anchor = []
    for i in range(len(labels)):
        positives = [j for j in range(len(labels)) if j != i and labels[j] == labels[i]]
        if not positives:
            continue
        denominator = sum(np.exp(z[i] @ z[k] / tau) for k in range(len(labels)) if k != i)
        per_anchor.append(-sum(np.log(np.exp(z[i] @ z[j] / tau) / denominator) for j in positives))
    return float(np.mean(per_anchor))


def _brute_decoupled_sample(z: np.ndarray, labels: np.ndarray, tau: float, lambda_a: float, lambda_u: float) -> float:
    per_anchor = []
    for i in range(len(labels)):
        positives = [j for j in range(len(labels)) if j != i and labels[j] == labels[i]]
        negatives = [k for k in range(len(labels)) if labels[k] != labels[i]]
        if not positives:
            continue
        attraction = sum(z[i] @ z[p] / tau for p in positives)
        repulsion = np.log(sum(np.exp(z[i] @ z[n] / tau) for n in negatives)) if negatives else 0.0
        per_anchor.append(-lambda_a * attraction + lambda_u * len(positives) * repulsion)
    return float(np.mean(per_anchor))


class TestSupCon:

    def test_identical_pair_is_zero(self):
        batch = _batch([E1, E1], [0, 0])
        assert supcon_loss(batch, 0.5).item() == pytest.approx(0.0, abs=1e-15)
        assert supcon_decomposed(batch, 0.5).item() == pytest.approx(0.0, abs=1e-15)

    def test_one_positive_one_negative(self):
        tau = 0.5
        batch = _batch([E1, E1, DIAG], [0, 0, 1])
        s_pos, s_neg = 1.0 / tau, (E1 @ DIAG) / tau
        expected = -s_pos + np.log(np.exp(s_pos) + np.exp(s_neg))
        assert supcon_loss(batch, tau).item() == pytest.approx(expected, rel=1e-12)

    def test_four_samples_against_brute_force(self):
        angles = np.array([0.1, 0.7, 2.0, 2.9])
        z = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        labels = np.array([0, 0, 1, 1])
        batch = EmbeddingBatch.from_array(z, labels)
        assert supcon_loss(batch, 0.5).item() == pytest.approx(_brute_supcon(z, labels, 0.5), rel=1e-12)

    def test_equals_decomposed_form(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            size = int(rng.integers(2, 65))
            n_classes = int(rng.integers(2, 11))
            batch = random_batch(rng, size, n_classes, int(rng.integers(2, 129)))
            if not batch.positive_mask().any():
                continue
            tau = float(rng.uniform(0.05, 2.0))
            assert abs(supcon_loss(batch, tau).item() - supcon_decomposed(batch, tau).item()) < 1e-10

    def test_no_positives(self):
        batch = _batch([E1, E2], [0, 1])
        with pytest.raises(NoPositivesError):
            supcon_loss(batch, 0.5)
        with pytest.raises(NoPositivesError):
            supcon_decomposed(batch, 0.5)

    def test_non_positive_temperature(self):
        with pytest.raises(ValueError):
            supcon_loss(_batch([E1, E1], [0, 0]), 0.0)

    def test_permutation_invariant(self, rng):
        batch = random_batch(rng, 16, 3, 6)
        order = rng.permutation(16)
        assert supcon_loss(batch.permuted(order), 0.5).item() == pytest.approx(supcon_loss(batch, 0.5).item(), rel=1e-12)


class TestDecoupledSampleLoss:

    def test_hand_value(self):
        tau, lambda_a, lambda_u = 0.5, 0.9, 0.1
        breakdown = decoupled_sample_loss(_batch([E1, E1, DIAG], [0, 0, 1]), tau, lambda_a, lambda_u)
        s_neg = (E1 @ DIAG) / tau
        assert breakdown.anchors_used == 2
        assert breakdown.alignment_term == pytest.approx(2.0)
        assert breakdown.uniformity_term == pytest.approx(s_neg)
        assert breakdown.value == pytest.approx(-lambda_a * 2.0 + lambda_u * s_neg, rel=1e-12)

    def test_against_brute_force(self, rng):
        for _ in range(20):
            batch = random_batch(rng, 12, 3, 5)
            if not batch.positive_mask().any():
                continue
            z, labels = batch.embeddings.values, batch.labels
            expected = _brute_decoupled_sample(z, labels, 0.5, 0.9, 0.1)
            assert decoupled_sample_loss(batch, 0.5, 0.9, 0.1).value == pytest.approx(expected, rel=1e-10)

    def test_single_class_has_no_uniformity(self, rng):
        batch = EmbeddingBatch.from_array(random_unit_rows(rng, 5, 3), np.zeros(5, dtype=int))
        breakdown = decoupled_sample_loss(batch, 0.5, 0.9, 0.1)
        assert breakdown.uniformity_term == 0.0
        assert breakdown.value == pytest.approx(-0.9 * breakdown.alignment_term, rel=1e-12)

    def test_no_usable_anchors(self):
        with pytest.raises(NoUsableAnchorsError):
            decoupled_sample_loss(_batch([E1, E2], [0, 1]), 0.5, 0.9, 0.1)

    def test_linear_in_lambdas(self, rng):
        batch = random_batch(rng, 10, 2, 4)
        a = decoupled_sample_loss(batch, 0.5, 1.0, 0.0)
        b = decoupled_sample_loss(batch, 0.5, 0.0, 1.0)
        mixed = decoupled_sample_loss(batch, 0.5, 0.3, 0.7)
        assert mixed.value == pytest.approx(0.3 * a.value + 0.7 * b.value, rel=1e-12, abs=1e-12)

    def test_gradient_matches_finite_differences(self, rng):
        raw = rng.standard_normal((8, 4))
        labels = np.array([0, 0, 1, 1, 2, 2, 0, 1])
        params = ParameterVector.from_layers([("z", (8, 4))], [raw])

        def loss(values: Tensor) -> Tensor:
            batch = EmbeddingBatch(l2_normalize(values, axis=1), labels)
            return decoupled_sample_loss(batch, 0.5, 0.9, 0.1).total

        tape = GradientTape()
        leaf = tape.watch(raw)
        (analytic,) = tape.gradient(loss(leaf), [leaf])
        numeric = finite_diff_gradient(lambda p: loss(Tensor(p.layer("z"))).item(), params)
        np.testing.assert_allclose(analytic.reshape(-1), numeric.values, rtol=1e-4, atol=1e-8)


class TestDecoupledPrototypeLoss:

    def test_embeddings_at_orthogonal_prototypes(self):
        eye = np.eye(4)
        protos = PrototypeSet(eye, np.ones(4, dtype=int), np.zeros(4, dtype=bool))
        batch = EmbeddingBatch.from_array(eye[[0, 1, 2]], [0, 1, 2], 4)
        breakdown = decoupled_prototype_loss(batch, protos, 0.5, 0.9, 0.1)
        assert breakdown.anchors_used == 3
        assert -0.9 * breakdown.alignment_term == pytest.approx(-1.8)
        assert 0.1 * breakdown.uniformity_term == pytest.approx(0.1 * np.log(3.0))
        assert breakdown.value == pytest.approx(-1.8 + 0.1 * np.log(3.0), rel=1e-12)

    def test_alignment_grows_as_embedding_turns_to_its_prototype(self):
        protos = PrototypeSet(np.eye(4)[:3], np.ones(3, dtype=int), np.zeros(3, dtype=bool))
        # rotate from e4, orthogonal to every prototype, onto the class-1 prototype
        angles = np.linspace(0.0, np.pi / 2, 7)
        breakdowns = [
            decoupled_prototype_loss(_batch([np.cos(t) * np.eye(4)[3] + np.sin(t) * np.eye(4)[1]], [1]),
                                     protos, 0.5, 0.9, 0.1)
            for t in angles
        ]
        alignment = [b.alignment_term for b in breakdowns]
        assert all(a < b for a, b in zip(alignment, alignment[1:]))
        assert alignment[-1] == pytest.approx(2.0)
        values = [b.value for b in breakdowns]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_equal_prototypes_are_finite(self):
        protos = PrototypeSet(np.stack([E1, E1]), [1, 1], [False, False])
        breakdown = decoupled_prototype_loss(_batch([E1, E2], [0, 1]), protos, 0.5, 0.9, 0.1)
        assert np.isfinite(breakdown.value)
        assert breakdown.alignment_term == pytest.approx(breakdown.uniformity_term)

    def test_matches_sample_loss_on_duplicated_prototypes(self, rng):
        """
        With each class represented by two batch members sitting on its
        prototype, the sample-wise positives are the prototype itself and every
        negative prototype appears twice, adding exactly log 2 to the repulsion.
        """
        protos = random_prototypes(rng, 4, 6)
        labels = np.repeat(np.arange(4), 2)
        batch = EmbeddingBatch.from_array(protos.prototypes[labels], labels, 4)
        sample = decoupled_sample_loss(batch, 0.5, 0.9, 0.1)
        proto = decoupled_prototype_loss(batch, protos, 0.5, 0.9, 0.1)
        assert sample.alignment_term == pytest.approx(proto.alignment_term, rel=1e-12)
        assert sample.uniformity_term == pytest.approx(proto.uniformity_term + np.log(2.0), rel=1e-12)
        assert sample.value == pytest.approx(proto.value + 0.1 * np.log(2.0), rel=1e-12)

    def test_needs_two_classes(self):
        protos = PrototypeSet(np.array([E1]), [1], [False])
        with pytest.raises(InsufficientClassesError):
            decoupled_prototype_loss(_batch([E1, E1], [0, 0]), protos, 0.5, 0.9, 0.1)

    def test_gradient_matches_finite_differences(self, rng):
        raw = rng.standard_normal((6, 5))
        labels = np.array([0, 1, 2, 0, 1, 2])
        protos = random_prototypes(rng, 3, 5)
        params = ParameterVector.from_layers([("z", (6, 5))], [raw])

        def loss(values: Tensor) -> Tensor:
            batch = EmbeddingBatch(l2_normalize(values, axis=1), labels)
            return decoupled_prototype_loss(batch, protos, 0.5, 0.9, 0.1).total

        tape = GradientTape()
        leaf = tape.watch(raw)
        (analytic,) = tape.gradient(loss(leaf), [leaf])
        numeric = finite_diff_gradient(lambda p: loss(Tensor(p.layer("z"))).item(), params)
        np.testing.assert_allclose(analytic.reshape(-1), numeric.values, rtol=1e-4, atol=1e-8)


class TestCombinedObjective:

    def test_hand_arithmetic(self):
        assert combined_objective(Tensor(1.0), Tensor(0.5), 10.0).item() == pytest.approx(6.0)

    def test_zero_mu_returns_cross_entropy(self):
        ce = Tensor(1.25)
        assert combined_objective(ce, Tensor(99.0), 0.0) is ce

    @pytest.mark.parametrize("mu", [0.001, 0.01, 0.1, 1, 5, 10])
    def test_accepts_tuned_grid(self, mu):
        assert combined_objective(Tensor(1.0), Tensor(2.0), mu).item() == pytest.approx(1.0 + 2.0 * mu)

    def test_negative_mu(self):
        with pytest.raises(ValueError):
            combined_objective(Tensor(1.0), Tensor(1.0), -0.1)


@pytest.mark.slow
def test_decomposition_identity_over_many_batches():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 1000:
        batch = random_batch(rng, int(rng.integers(2, 65)), int(rng.integers(2, 11)), int(rng.integers(2, 129)))
        if not batch.positive_mask().any():
            continue
        assert abs(supcon_loss(batch, 0.5).item() - supcon_decomposed(batch, 0.5).item()) < 1e-10
        checked += 1
