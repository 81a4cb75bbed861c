"""
Tests for synthetic data, the CIFAR-10 binary reader, batching and CSV export.
"""

import csv

import numpy as np
import pytest

from core.errors import DataFormatError, DataGenerationError, InsufficientDataError
from data import (
    batch_iterator,
    export_dataset_csv,
    load_cifar10_binary,
    load_cifar10_pair,
    synthetic_blobs,
)
from data.cifar import RECORD_BYTES
from models.dataset import Dataset


def _write_records(path, labels, pixel_value=None, rng=None):
    records = []
    for label in labels:
        if pixel_value is not None:
            pixels = np.full(RECORD_BYTES - 1, pixel_value, dtype=np.uint8)
        else:
            pixels = rng.integers(0, 256, size=RECORD_BYTES - 1, dtype=np.uint8)
        records.append(np.concatenate(([label], pixels)).astype(np.uint8))
    path.write_bytes(np.concatenate(records).tobytes())
    return path


class TestSyntheticBlobs:

    def test_class_balance(self):
        train, test = synthetic_blobs(4, 6, 50, 0.5, seed=0)
        assert train.class_counts().tolist() == [40] * 4
        assert test.class_counts().tolist() == [10] * 4
        assert train.split == 'train' and test.split == 'test'

    def test_same_seed_is_byte_identical(self):
        a, _ = synthetic_blobs(3, 5, 20, 0.5, seed=3)
        b, _ = synthetic_blobs(3, 5, 20, 0.5, seed=3)
        assert a.inputs.tobytes() == b.inputs.tobytes()
        assert a.labels.tobytes() == b.labels.tobytes()

    def test_small_spread_is_linearly_separable(self):
        train, test = synthetic_blobs(5, 8, 40, 1e-3, seed=1)
        centroids = np.stack([train.inputs[train.labels == c].mean(axis=0) for c in range(5)])
        # nearest-centroid is a linear classifier
        distances = ((test.inputs[:, None, :] - centroids[None]) ** 2).sum(axis=2)
        assert np.array_equal(distances.argmin(axis=1), test.labels)

    def test_means_cannot_be_placed(self):
        with pytest.raises(DataGenerationError):
            synthetic_blobs(50, 2, 5, 1.0, seed=0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            synthetic_blobs(1, 4, 10, 1.0, seed=0)
        with pytest.raises(ValueError):
            synthetic_blobs(3, 4, 10, 0.0, seed=0)


class TestCifarReader:

    def test_single_white_record(self, tmp_path):
        path = _write_records(tmp_path / "one.bin", [3], pixel_value=255)
        dataset = load_cifar10_binary(path, normalize=False)
        assert dataset.n_samples == 1
        assert dataset.labels.tolist() == [3]
        assert dataset.input_dim == 3072
        np.testing.assert_array_equal(dataset.inputs, 1.0)

    def test_constant_channel_normalizes_to_zero(self, tmp_path):
        path = _write_records(tmp_path / "one.bin", [3], pixel_value=255)
        np.testing.assert_array_equal(load_cifar10_binary(path).inputs, 0.0)

    def test_record_count(self, tmp_path):
        rng = np.random.default_rng(0)
        path = _write_records(tmp_path / "many.bin", rng.integers(0, 10, size=25), rng=rng)
        assert load_cifar10_binary(path).n_samples == 25

    def test_normalized_channels(self, tmp_path):
        rng = np.random.default_rng(1)
        path = _write_records(tmp_path / "many.bin", rng.integers(0, 10, size=12), rng=rng)
        channels = load_cifar10_binary(path).inputs.reshape(-1, 3, 1024)
        np.testing.assert_allclose(channels.mean(axis=(0, 2)), 0.0, atol=1e-10)
        np.testing.assert_allclose(channels.std(axis=(0, 2)), 1.0, atol=1e-10)

    def test_truncated_file(self, tmp_path):
        path = _write_records(tmp_path / "cut.bin", [1, 2], pixel_value=0)
        path.write_bytes(path.read_bytes()[:-5])
        with pytest.raises(DataFormatError) as info:
            load_cifar10_binary(path)
        assert info.value.offset == RECORD_BYTES

    def test_label_out_of_range(self, tmp_path):
        path = _write_records(tmp_path / "bad.bin", [1, 10], pixel_value=0)
        with pytest.raises(DataFormatError) as info:
            load_cifar10_binary(path)
        assert info.value.offset == RECORD_BYTES

    def test_directory_of_batches(self, tmp_path):
        rng = np.random.default_rng(2)
        _write_records(tmp_path / "data_batch_1.bin", [0, 1], rng=rng)
        _write_records(tmp_path / "data_batch_2.bin", [2, 3, 4], rng=rng)
        assert load_cifar10_binary(tmp_path).n_samples == 5

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_cifar10_binary(tmp_path / "absent.bin")

    def test_pair_uses_training_statistics(self, tmp_path):
        rng = np.random.default_rng(3)
        train_path = _write_records(tmp_path / "train.bin", [0, 1, 2, 3], rng=rng)
        test_path = _write_records(tmp_path / "test.bin", [5], pixel_value=255)
        train, test = load_cifar10_pair(train_path, test_path)
        assert test.split == 'test'
        # a constant white image normalized with the training statistics is not all zeros
        assert np.all(test.inputs > 0)
        assert train.n_samples == 4


class TestBatchIterator:

    @staticmethod
    def _view(n: int):
        return Dataset(np.arange(n, dtype=float).reshape(n, 1), np.arange(n) % 2, 2).view()

    def test_full_batches(self):
        assert len(list(batch_iterator(self._view(128), 64, 0))) == 2

    def test_remainder_dropped(self):
        batches = list(batch_iterator(self._view(130), 64, 0))
        assert len(batches) == 2
        emitted = np.concatenate([b.indices for b in batches])
        assert emitted.size == 128
        assert np.unique(emitted).size == 128

    def test_same_seed_same_sequence(self):
        view = self._view(40)
        a = [b.indices.tolist() for b in batch_iterator(view, 8, 17)]
        b = [b.indices.tolist() for b in batch_iterator(view, 8, 17)]
        c = [b.indices.tolist() for b in batch_iterator(view, 8, 18)]
        assert a == b
        assert a != c

    def test_batch_contents_follow_indices(self):
        view = self._view(20).dataset.view(np.arange(5, 15))
        for batch in batch_iterator(view, 4, 0):
            np.testing.assert_array_equal(batch.inputs[:, 0], batch.indices.astype(float))
            assert set(batch.indices.tolist()) <= set(range(5, 15))

    def test_too_few_samples(self):
        with pytest.raises(InsufficientDataError):
            list(batch_iterator(self._view(5), 8, 0))

    def test_batch_size_one_rejected(self):
        with pytest.raises(ValueError):
            list(batch_iterator(self._view(5), 1, 0))


class TestExport:

    def test_csv_round_trips_floats(self, tmp_path, tiny_data):
        train, _ = tiny_data
        path = export_dataset_csv(train, tmp_path / "train.csv")
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
        assert rows[0] == ['x0', 'x1', 'x2', 'x3', 'label']
        assert len(rows) == train.n_samples + 1
        values = np.array([[float(v) for v in row[:-1]] for row in rows[1:]])
        assert values.tobytes() == train.inputs.tobytes()
        assert [int(row[-1]) for row in rows[1:]] == train.labels.tolist()
