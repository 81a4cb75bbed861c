"""
Dataset ingestion: synthetic blobs, CIFAR-10 binary files, mini-batching.
"""

from .synthetic import synthetic_blobs
from .cifar import CifarBinaryReader, load_cifar10_binary, load_cifar10_pair, RECORD_BYTES
from .batching import batch_iterator, n_full_batches
from .export import export_dataset_csv

__all__ = [
    'synthetic_blobs',
    'CifarBinaryReader',
    'load_cifar10_binary',
    'load_cifar10_pair',
    'RECORD_BYTES',
    'batch_iterator',
    'n_full_batches',
    'export_dataset_csv',
]
