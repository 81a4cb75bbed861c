"""
Versioned binary checkpoints.

Layout: 8-byte magic, uint16 format version, uint32 length of a JSON
manifest, the manifest itself, then the parameters as little-endian float64.
"""

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from core.errors import CheckpointError
from models.embeddings import PrototypeSet
from numerics.model import MLPArchitecture
from numerics.parameters import ParameterVector

MAGIC = b"FCCKPT\x00\x01"
FORMAT_VERSION = 1
_HEADER = struct.Struct('<8sHI')


@dataclass(eq=False)
class Checkpoint:
    params: ParameterVector
    architecture: MLPArchitecture
    round: int = 0
    lr: float = 0.0
    prototypes: Optional[PrototypeSet] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


def save_checkpoint(path: Union[str, Path], checkpoint: Checkpoint) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    manifest: Dict[str, Any] = {
        'layers': checkpoint.params.manifest_as_list(),
        'architecture': checkpoint.architecture.to_dict(),
        'round': int(checkpoint.round),
        'lr': float(checkpoint.lr),
        'metadata': checkpoint.metadata,
    }
    if checkpoint.prototypes is not None:
        manifest['prototypes'] = {
            'vectors': checkpoint.prototypes.prototypes.tolist(),
            'counts': checkpoint.prototypes.counts.tolist(),
            'stale': checkpoint.prototypes.stale.tolist(),
        }
    encoded = json.dumps(manifest, sort_keys=True).encode('utf-8')
    with open(path, 'wb') as f:
        f.write(_HEADER.pack(MAGIC, FORMAT_VERSION, len(encoded)))
        f.write(encoded)
        f.write(checkpoint.params.values.astype('<f8').tobytes())
    return path


def load_checkpoint(path: Union[str, Path], expected: Optional[MLPArchitecture] = None) -> Checkpoint:
    """
    Read a checkpoint; with ``expected`` the stored architecture must match it.

    Raises:
        CheckpointError: missing file, bad magic or version, truncated payload, architecture mismatch
    """
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise CheckpointError(f"Cannot read checkpoint {path}: {exc}") from exc
    if len(blob) < _HEADER.size:
        raise CheckpointError(f"{path}: file too short for a checkpoint header")

    magic, version, manifest_len = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint file (bad magic)")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    body_start = _HEADER.size + manifest_len
    try:
        manifest = json.loads(blob[_HEADER.size:body_start].decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: corrupt manifest: {exc}") from exc

    architecture = MLPArchitecture.from_dict(manifest['architecture'])
    if expected is not None and architecture != expected:
        raise CheckpointError(f"{path}: stored architecture {architecture} does not match {expected}")
    layers = tuple((name, tuple(shape)) for name, shape in manifest['layers'])
    if layers != architecture.manifest():
        raise CheckpointError(f"{path}: layer manifest does not match the stored architecture")

    payload = blob[body_start:]
    expected_bytes = 8 * sum(int(np.prod(shape)) for _, shape in layers)
    if len(payload) != expected_bytes:
        raise CheckpointError(f"{path}: expected {expected_bytes} parameter bytes, found {len(payload)}")
    params = ParameterVector(np.frombuffer(payload, dtype='<f8').astype(np.float64), layers)

    prototypes = None
    if 'prototypes' in manifest:
        stored = manifest['prototypes']
        prototypes = PrototypeSet(np.array(stored['vectors']), stored['counts'], stored['stale'])
    return Checkpoint(
        params=params,
        architecture=architecture,
        round=int(manifest.get('round', 0)),
        lr=float(manifest.get('lr', 0.0)),
        prototypes=prototypes,
        metadata=manifest.get('metadata', {}),
    )
