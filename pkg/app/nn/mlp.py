"""
Multilayer Perceptron Module

Fully connected network over a flat parameter vector with exact reverse-mode
gradients. Every layer computes z = a @ W + b; hidden layers apply ReLU or
CReLU, the last layer is affine. With CReLU a hidden layer of nominal width n
emits 2n values, and the next layer's fan-in accounts for it.
"""

from functools import cached_property
from typing import Self

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, model_validator

from app.core.exceptions import DimensionMismatchError, ErrorMessages
from app.core.types import ParamVector
from app.nn.config import Activation


class LayerSlice(BaseModel):
    """Where one layer's weight matrix and bias live in the flat vector."""

    fan_in: int
    fan_out: int
    weight_start: int
    bias_start: int

    @property
    def weight_stop(self) -> int:
        return self.weight_start + self.fan_in * self.fan_out

    @property
    def bias_stop(self) -> int:
        return self.bias_start + self.fan_out


class MlpSpec(BaseModel):
    """Architecture of one network."""

    layer_sizes: list[int] = Field(
        min_length=2, description="Input, hidden..., output (nominal widths)"
    )
    activation: Activation = Activation.RELU

    @model_validator(mode="after")
    def validate_sizes(self) -> Self:
        """Every width must be positive"""
        if any(size <= 0 for size in self.layer_sizes):
            raise ValueError(f"Layer sizes must be positive, got {self.layer_sizes}")
        return self

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]

    @property
    def width_factor(self) -> int:
        return 2 if self.activation is Activation.CRELU else 1

    @cached_property
    def layout(self) -> list[LayerSlice]:
        """Flat-vector layout, layer by layer: weights then bias."""
        slices = []
        offset = 0
        fan_in = self.layer_sizes[0]
        for fan_out in self.layer_sizes[1:]:
            weight_start = offset
            bias_start = weight_start + fan_in * fan_out
            slices.append(
                LayerSlice(
                    fan_in=fan_in,
                    fan_out=fan_out,
                    weight_start=weight_start,
                    bias_start=bias_start,
                )
            )
            offset = bias_start + fan_out
            fan_in = fan_out * self.width_factor
        return slices

    @property
    def param_count(self) -> int:
        return self.layout[-1].bias_stop


def unpack(spec: MlpSpec, params: ParamVector) -> list[tuple[np.ndarray, np.ndarray]]:
    """Views (W, b) per layer into the flat vector."""
    if params.shape != (spec.param_count,):
        raise DimensionMismatchError(
            ErrorMessages.dim_mismatch("params", (spec.param_count,), params.shape)
        )
    return [
        (
            params[layer.weight_start : layer.weight_stop].reshape(layer.fan_in, layer.fan_out),
            params[layer.bias_start : layer.bias_stop],
        )
        for layer in spec.layout
    ]


def pack(spec: MlpSpec, layers: list[tuple[np.ndarray, np.ndarray]]) -> ParamVector:
    """Inverse of unpack."""
    params = np.concatenate([np.concatenate([w.ravel(), b.ravel()]) for w, b in layers])
    if params.shape != (spec.param_count,):
        raise DimensionMismatchError(
            ErrorMessages.dim_mismatch("packed params", (spec.param_count,), params.shape)
        )
    return params.astype(np.float64)


def init_params(spec: MlpSpec, rng: np.random.Generator) -> ParamVector:
    """Xavier-uniform weights, zero biases."""
    layers = []
    for layer in spec.layout:
        limit = np.sqrt(6.0 / (layer.fan_in + layer.fan_out))
        weight = rng.uniform(-limit, limit, size=(layer.fan_in, layer.fan_out))
        layers.append((weight, np.zeros(layer.fan_out)))
    return pack(spec, layers)


def _activate(z: np.ndarray, activation: Activation) -> np.ndarray:
    if activation is Activation.CRELU:
        return np.concatenate([np.maximum(z, 0.0), np.maximum(-z, 0.0)], axis=-1)
    return np.maximum(z, 0.0)


def _activate_backward(z: np.ndarray, da: np.ndarray, activation: Activation) -> np.ndarray:
    # Subgradient at 0 is 0
    if activation is Activation.CRELU:
        n = z.shape[-1]
        return da[..., :n] * (z > 0) - da[..., n:] * (z < 0)
    return da * (z > 0)


def _as_batch(spec: MlpSpec, x: npt.ArrayLike) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2 or batch.shape[1] != spec.input_dim:
        raise DimensionMismatchError(
            ErrorMessages.dim_mismatch("input", (spec.input_dim,), x.shape)
        )
    return batch, single


def forward_cache(
    spec: MlpSpec, params: ParamVector, x: npt.ArrayLike
) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    """Forward pass that keeps every layer's input and pre-activation.

    Returns:
        (output batch, layer inputs a_0..a_{L-1}, pre-activations z_1..z_L)
    """
    a, _ = _as_batch(spec, x)
    inputs, pre = [], []
    layers = unpack(spec, params)
    for index, (weight, bias) in enumerate(layers):
        inputs.append(a)
        z = a @ weight + bias
        pre.append(z)
        a = z if index == len(layers) - 1 else _activate(z, spec.activation)
    return a, inputs, pre


def forward(spec: MlpSpec, params: ParamVector, x: npt.ArrayLike) -> np.ndarray:
    """Network output for one observation (1-D) or a batch (2-D).

    Raises:
        DimensionMismatchError: If x does not match the input width
    """
    output, _, _ = forward_cache(spec, params, x)
    return output[0] if np.asarray(x).ndim == 1 else output


def backward(
    spec: MlpSpec, params: ParamVector, x: npt.ArrayLike, upstream_grad: npt.ArrayLike
) -> ParamVector:
    """Gradient of sum(<output, upstream_grad>) over the batch with respect to params.

    Raises:
        DimensionMismatchError: If upstream_grad does not match the output shape
    """
    output, inputs, pre = forward_cache(spec, params, x)
    delta = np.asarray(upstream_grad, dtype=np.float64).reshape(output.shape[0], -1)
    if delta.shape != output.shape:
        raise DimensionMismatchError(
            ErrorMessages.dim_mismatch("upstream_grad", output.shape, delta.shape)
        )

    layers = unpack(spec, params)
    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(layers)  # type: ignore[list-item]
    for index in reversed(range(len(layers))):
        weight, _ = layers[index]
        grads[index] = (inputs[index].T @ delta, delta.sum(axis=0))
        if index > 0:
            delta = _activate_backward(pre[index - 1], delta @ weight.T, spec.activation)
    return pack(spec, grads)
