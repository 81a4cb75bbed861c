"""
Federated orchestration: sampling, local updates, aggregation, the round loop, checkpoints.
"""

from .sampling import sample_clients, participants_per_round
from .client import local_update, batch_gradients, class_embedding_sums
from .aggregation import aggregate, aggregate_uniform, aggregate_weighted, aggregate_prototypes
from .server import FederatedServer, TrainingResult, run_training
from .checkpoint import Checkpoint, save_checkpoint, load_checkpoint, MAGIC, FORMAT_VERSION

__all__ = [
    'sample_clients',
    'participants_per_round',
    'local_update',
    'batch_gradients',
    'class_embedding_sums',
    'aggregate',
    'aggregate_uniform',
    'aggregate_weighted',
    'aggregate_prototypes',
    'FederatedServer',
    'TrainingResult',
    'run_training',
    'Checkpoint',
    'save_checkpoint',
    'load_checkpoint',
    'MAGIC',
    'FORMAT_VERSION',
]
