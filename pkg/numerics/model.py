"""
MLP encoder with a linear projection head and a linear classifier.

    x → [Linear → ReLU] × L → Linear (features)
    features → Linear                 (projection)
    features → Linear                 (class logits)

The unit-norm embeddings z = l2_normalize(projection) are built on first
access, so cross-entropy training and prediction never normalize.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.errors import DimensionError

from . import ops
from .parameters import ParameterVector
from .tensor import GradientTape, Tensor

ENCODER_BIAS_INIT = 0.01


@dataclass(frozen=True)
class MLPArchitecture:
    """Layer sizes of the encoder, projection head and classifier."""

    input_dim: int
    n_classes: int
    hidden_dims: Tuple[int, ...] = (128,)
    feature_dim: int = 64
    embedding_dim: int = 64

    def __post_init__(self):
        object.__setattr__(self, 'hidden_dims', tuple(int(d) for d in self.hidden_dims))
        for name in ('input_dim', 'n_classes', 'feature_dim', 'embedding_dim'):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")
        if self.n_classes < 2:
            raise ValueError("Need at least two classes")

    @property
    def encoder_dims(self) -> Tuple[int, ...]:
        return (self.input_dim, *self.hidden_dims, self.feature_dim)

    def manifest(self) -> Tuple[Tuple[str, Tuple[int, ...]], ...]:
        entries = []
        dims = self.encoder_dims
        for i in range(len(dims) - 1):
            entries.append((f"encoder.{i}.weight", (dims[i], dims[i + 1])))
            entries.append((f"encoder.{i}.bias", (dims[i + 1],)))
        entries.append(("head.weight", (self.feature_dim, self.embedding_dim)))
        entries.append(("head.bias", (self.embedding_dim,)))
        entries.append(("classifier.weight", (self.feature_dim, self.n_classes)))
        entries.append(("classifier.bias", (self.n_classes,)))
        return tuple(entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'input_dim': self.input_dim,
            'n_classes': self.n_classes,
            'hidden_dims': list(self.hidden_dims),
            'feature_dim': self.feature_dim,
            'embedding_dim': self.embedding_dim,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MLPArchitecture':
        return cls(
            input_dim=int(data['input_dim']),
            n_classes=int(data['n_classes']),
            hidden_dims=tuple(data.get('hidden_dims', (128,))),
            feature_dim=int(data.get('feature_dim', 64)),
            embedding_dim=int(data.get('embedding_dim', 64)),
        )


@dataclass
class ModelOutput:
    features: Tensor
    logits: Tensor
    projected: Tensor
    leaves: Dict[str, Tensor] = field(default_factory=dict)

    @cached_property
    def embeddings(self) -> Tensor:
        """Row-normalized projection; raises DegenerateInputError on a zero row."""
        return ops.l2_normalize(self.projected, axis=1)


class MLPModel:
    """Stateless forward pass over a ParameterVector."""

    def __init__(self, architecture: MLPArchitecture):
        self.architecture = architecture
        self.manifest = architecture.manifest()
        self._n_encoder_layers = len(architecture.encoder_dims) - 1

    def init_params(self, rng: np.random.Generator) -> ParameterVector:
        """He-normal encoder weights, scaled-normal head weights.

        Encoder biases start slightly positive so an input that switches off
        every hidden unit still maps to nonzero features.
        """
        layers = []
        for name, shape in self.manifest:
            if name.endswith('.bias'):
                fill = ENCODER_BIAS_INIT if name.startswith('encoder.') else 0.0
                layers.append(np.full(shape, fill))
                continue
            fan_in = shape[0]
            gain = 2.0 if name.startswith('encoder.') else 1.0
            layers.append(rng.standard_normal(shape) * np.sqrt(gain / fan_in))
        return ParameterVector.from_layers(self.manifest, layers)

    def check_params(self, params: ParameterVector) -> None:
        if params.manifest != self.manifest:
            raise DimensionError("Parameter manifest does not match the model architecture")

    def forward(self, params: ParameterVector, inputs: np.ndarray, tape: Optional[GradientTape] = None) -> ModelOutput:
        """Run the network; with a tape, every layer becomes a watched leaf."""
        self.check_params(params)
        if tape is not None:
            leaves = {name: tape.watch(array, name=name) for name, array in params.layers()}
        else:
            leaves = {name: Tensor(array, name=name) for name, array in params.layers()}

        hidden = Tensor(np.asarray(inputs, dtype=np.float64))
        for i in range(self._n_encoder_layers):
            hidden = ops.add(ops.matmul(hidden, leaves[f"encoder.{i}.weight"]), leaves[f"encoder.{i}.bias"])
            if i < self._n_encoder_layers - 1:
                hidden = ops.relu(hidden)
        features = hidden

        projected = ops.add(ops.matmul(features, leaves["head.weight"]), leaves["head.bias"])
        logits = ops.add(ops.matmul(features, leaves["classifier.weight"]), leaves["classifier.bias"])
        return ModelOutput(features=features, logits=logits, projected=projected,
                           leaves=leaves if tape is not None else {})

    def gradients(self, tape: GradientTape, output: ModelOutput, loss: Tensor) -> ParameterVector:
        """Backpropagate ``loss`` and pack the layer adjoints into a ParameterVector."""
        tape.backward(loss)
        return ParameterVector.from_layers(
            self.manifest, [tape.adjoint(output.leaves[name]) for name, _ in self.manifest]
        )

    def embed(self, params: ParameterVector, inputs: np.ndarray) -> np.ndarray:
        return self.forward(params, inputs).embeddings.values

    def predict_logits(self, params: ParameterVector, inputs: np.ndarray) -> np.ndarray:
        return self.forward(params, inputs).logits.values
