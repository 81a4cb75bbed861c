"""
CSV export of datasets for inspection.
"""

import csv
from pathlib import Path
from typing import Union

from models.dataset import Dataset


def export_dataset_csv(dataset: Dataset, path: Union[str, Path]) -> Path:
    """One row per sample: ``x0 … x{d-1}, label``; floats written round-trip exact."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = [f"x{i}" for i in range(dataset.input_dim)] + ['label']
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row, label in zip(dataset.inputs, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])
    return path
