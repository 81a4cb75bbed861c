"""
CIFAR-10 binary-format reader.

Each record is 3073 bytes: one label byte followed by 1024 red, 1024 green
and 1024 blue pixel bytes of a 32×32 image.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from silantui import ModernLogger

from core.errors import DataFormatError
from models.dataset import Dataset

RECORD_BYTES = 3073
PIXELS_PER_CHANNEL = 1024
N_CHANNELS = 3
N_CLASSES = 10

ChannelStats = Tuple[np.ndarray, np.ndarray]
PathLike = Union[str, Path]


class CifarBinaryReader(ModernLogger):
    """Reads one or more CIFAR-10 .bin batch files into a Dataset."""

    def __init__(self):
        super().__init__("CifarBinaryReader")

    @staticmethod
    def resolve(path: PathLike) -> List[Path]:
        """A single file, or every ``data_batch_*.bin`` inside a directory."""
        path = Path(path)
        if path.is_dir():
            files = sorted(path.glob("data_batch_*.bin"))
            if not files:
                raise DataFormatError(f"No data_batch_*.bin files in {path}")
            return files
        if not path.exists():
            raise DataFormatError(f"CIFAR file not found: {path}")
        return [path]

    def read_records(self, path: Path) -> Tuple[np.ndarray, np.ndarray]:
        """Raw uint8 pixels (n×3072) and labels of one file."""
        raw = np.fromfile(path, dtype=np.uint8)
        if raw.size == 0 or raw.size % RECORD_BYTES:
            truncated_at = raw.size - raw.size % RECORD_BYTES
            raise DataFormatError(
                f"{path.name}: {raw.size} bytes is not a whole number of {RECORD_BYTES}-byte records",
                offset=truncated_at,
            )
        records = raw.reshape(-1, RECORD_BYTES)
        labels = records[:, 0].astype(np.int64)
        bad = np.flatnonzero(labels >= N_CLASSES)
        if bad.size:
            record = int(bad[0])
            raise DataFormatError(
                f"{path.name}: record {record} has label {labels[record]}", offset=record * RECORD_BYTES
            )
        self.debug(f"[CifarBinaryReader] {path.name}: {records.shape[0]} records")
        return records[:, 1:], labels

    def load(
        self,
        paths: Sequence[PathLike],
        normalize: bool = True,
        channel_stats: Optional[ChannelStats] = None,
        split: str = 'train',
    ) -> Tuple[Dataset, Optional[ChannelStats]]:
        pixel_blocks, label_blocks = [], []
        for path in paths:
            pixels, labels = self.read_records(Path(path))
            pixel_blocks.append(pixels)
            label_blocks.append(labels)
        pixels = np.concatenate(pixel_blocks).astype(np.float64) / 255.0
        labels = np.concatenate(label_blocks)

        stats = None
        if normalize:
            stats = channel_stats if channel_stats is not None else channel_statistics(pixels)
            pixels = apply_channel_normalization(pixels, stats)
        self.info(f"[CifarBinaryReader] Loaded {labels.size} {split} samples from {len(paths)} file(s)")
        return Dataset(pixels, labels, N_CLASSES, split), stats


def channel_statistics(pixels: np.ndarray) -> ChannelStats:
    """Per-channel mean and std of [0, 1] pixels; a zero std is replaced by 1."""
    channels = pixels.reshape(-1, N_CHANNELS, PIXELS_PER_CHANNEL)
    means = channels.mean(axis=(0, 2))
    stds = channels.std(axis=(0, 2))
    stds = np.where(stds > 0, stds, 1.0)
    return means, stds


def apply_channel_normalization(pixels: np.ndarray, stats: ChannelStats) -> np.ndarray:
    means, stds = stats
    channels = pixels.reshape(-1, N_CHANNELS, PIXELS_PER_CHANNEL)
    return ((channels - means[None, :, None]) / stds[None, :, None]).reshape(pixels.shape)


def load_cifar10_binary(
    path: PathLike,
    normalize: bool = True,
    channel_stats: Optional[ChannelStats] = None,
    split: str = 'train',
) -> Dataset:
    """
    Load a CIFAR-10 binary file (or a directory of training batches).

    Pixels are scaled to [0, 1]; with ``normalize`` they are then standardized
    per channel, using ``channel_stats`` when given or the file's own statistics.

    Raises:
        DataFormatError: truncated file or label >= 10, with the byte offset
    """
    reader = CifarBinaryReader()
    dataset, _ = reader.load(reader.resolve(path), normalize, channel_stats, split)
    return dataset


def load_cifar10_pair(train_path: PathLike, test_path: PathLike) -> Tuple[Dataset, Dataset]:
    """Train and test sets, both normalized with the training statistics."""
    reader = CifarBinaryReader()
    train, stats = reader.load(reader.resolve(train_path), True, None, 'train')
    test, _ = reader.load(reader.resolve(test_path), True, stats, 'test')
    return train, test
