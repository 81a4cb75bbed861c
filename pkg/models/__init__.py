"""
Data models shared across the simulator.
"""

from .dataset import Dataset, DatasetView, LabeledBatch
from .embeddings import EmbeddingBatch, PrototypeSet, LossBreakdown, UNIT_NORM_TOL
from .partition_plan import PartitionPlan, IID_MARKER
from .federation import TrainingConfig, ServerState, ClientUpdate
from .records import RoundRecord, SimilarityHistogram, AsymptoticsReport, ROUND_CSV_HEADER
from .experiment import (
    ExperimentConfig,
    DataConfig,
    PartitionConfig,
    ModelConfig,
    MetricsConfig,
    AsymptoticsConfig,
)

__all__ = [
    'Dataset',
    'DatasetView',
    'LabeledBatch',
    'EmbeddingBatch',
    'PrototypeSet',
    'LossBreakdown',
    'UNIT_NORM_TOL',
    'PartitionPlan',
    'IID_MARKER',
    'TrainingConfig',
    'ServerState',
    'ClientUpdate',
    'RoundRecord',
    'SimilarityHistogram',
    'AsymptoticsReport',
    'ROUND_CSV_HEADER',
    'ExperimentConfig',
    'DataConfig',
    'PartitionConfig',
    'ModelConfig',
    'MetricsConfig',
    'AsymptoticsConfig',
]
