"""
Forward and backward passes of the direction CNN in numpy.

Activations are NHWC. Convolutions use im2col with HWIO kernels, so the kernel
of layer i reshapes to a (9 * C_in, C_out) matrix.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from wtl.shared.errors import InvalidArgumentError, NumericFailureError

from .architecture import CONV_LAYERS, KERNEL, POOLED_LAYERS, UNPADDED_LAYERS
from .weights import WeightsBundle

DEFAULT_BN_MOMENTUM = 0.1
DEFAULT_BN_EPSILON = 1e-5


class Mode(str, Enum):
    """BatchNorm behaviour of a forward pass."""

    TRAIN = "train"
    INFER = "infer"


@dataclass
class ForwardTrace:
    """Per-layer caches of a forward pass, consumed by the backward pass."""

    caches: list[dict[str, Any]] = field(default_factory=list)
    activation_shapes: list[tuple[int, ...]] = field(default_factory=list)
    features: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _check_finite(values: np.ndarray, layer: str) -> None:
    if not np.all(np.isfinite(values)):
        raise NumericFailureError(f"non-finite activations in {layer}", layer=layer)


def conv_forward(
    x: np.ndarray, kernel: np.ndarray, bias: np.ndarray, pad: int
) -> tuple[np.ndarray, np.ndarray]:
    """3x3 stride-1 convolution; returns the output and the im2col matrix."""
    n, _, _, c_in = x.shape
    c_out = kernel.shape[3]
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad), (0, 0))) if pad else x
    windows = sliding_window_view(xp, (KERNEL, KERNEL), axis=(1, 2))
    h_out, w_out = windows.shape[1], windows.shape[2]
    cols = windows.transpose(0, 1, 2, 4, 5, 3).reshape(n * h_out * w_out, KERNEL * KERNEL * c_in)
    out = cols @ kernel.reshape(KERNEL * KERNEL * c_in, c_out) + bias
    return out.reshape(n, h_out, w_out, c_out), cols


def conv_backward(
    dout: np.ndarray, cols: np.ndarray, x_shape: tuple[int, ...], kernel: np.ndarray, pad: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n, h, w, c_in = x_shape
    _, h_out, w_out, c_out = dout.shape
    dflat = dout.reshape(-1, c_out)
    dkernel = (cols.T @ dflat).reshape(kernel.shape)
    dbias = dflat.sum(axis=0)
    dcols = (dflat @ kernel.reshape(-1, c_out).T).reshape(n, h_out, w_out, KERNEL, KERNEL, c_in)

    dxp = np.zeros((n, h + 2 * pad, w + 2 * pad, c_in), dtype=dout.dtype)
    for i in range(KERNEL):
        for j in range(KERNEL):
            dxp[:, i : i + h_out, j : j + w_out, :] += dcols[:, :, :, i, j, :]
    dx = dxp[:, pad : pad + h, pad : pad + w, :] if pad else dxp
    return dx, dkernel, dbias


def batchnorm_forward(
    x: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    mode: Mode,
    momentum: float,
    eps: float,
    update_running: bool,
) -> tuple[np.ndarray, dict[str, Any]]:
    if mode is Mode.TRAIN:
        count = x.shape[0] * x.shape[1] * x.shape[2]
        mean = x.mean(axis=(0, 1, 2))
        var = x.var(axis=(0, 1, 2))
        inv_std = 1.0 / np.sqrt(var + eps)
        if update_running:
            running_mean *= 1.0 - momentum
            running_mean += momentum * mean
            running_var *= 1.0 - momentum
            running_var += momentum * var * (count / (count - 1))
    else:
        mean, inv_std = running_mean, 1.0 / np.sqrt(running_var + eps)

    xhat = (x - mean) * inv_std
    return gamma * xhat + beta, {"xhat": xhat, "inv_std": inv_std}


def batchnorm_backward(
    dy: np.ndarray, cache: dict[str, Any], gamma: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xhat, inv_std = cache["xhat"], cache["inv_std"]
    count = dy.shape[0] * dy.shape[1] * dy.shape[2]
    dgamma = (dy * xhat).sum(axis=(0, 1, 2))
    dbeta = dy.sum(axis=(0, 1, 2))
    dxhat = dy * gamma
    dx = (inv_std / count) * (
        count * dxhat - dxhat.sum(axis=(0, 1, 2)) - xhat * (dxhat * xhat).sum(axis=(0, 1, 2))
    )
    return dx, dgamma, dbeta


def maxpool_forward(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2x2 stride-2 max pooling with floor semantics (13 -> 6)."""
    n, h, w, c = x.shape
    ho, wo = h // 2, w // 2
    blocks = (
        x[:, : 2 * ho, : 2 * wo, :]
        .reshape(n, ho, 2, wo, 2, c)
        .transpose(0, 1, 3, 5, 2, 4)
        .reshape(n, ho, wo, c, 4)
    )
    argmax = blocks.argmax(axis=-1)
    out = np.take_along_axis(blocks, argmax[..., None], axis=-1)[..., 0]
    return out, argmax


def maxpool_backward(dout: np.ndarray, argmax: np.ndarray, x_shape: tuple[int, ...]) -> np.ndarray:
    n, h, w, c = x_shape
    ho, wo = dout.shape[1], dout.shape[2]
    dblocks = np.zeros((n, ho, wo, c, 4), dtype=dout.dtype)
    np.put_along_axis(dblocks, argmax[..., None], dout[..., None], axis=-1)
    dx = np.zeros(x_shape, dtype=dout.dtype)
    dx[:, : 2 * ho, : 2 * wo, :] = (
        dblocks.reshape(n, ho, wo, c, 2, 2).transpose(0, 1, 4, 2, 5, 3).reshape(n, 2 * ho, 2 * wo, c)
    )
    return dx


def forward(
    patches: np.ndarray,
    weights: WeightsBundle,
    mode: Mode = Mode.INFER,
    bn_momentum: float = DEFAULT_BN_MOMENTUM,
    bn_epsilon: float = DEFAULT_BN_EPSILON,
    update_running: bool = True,
) -> tuple[np.ndarray, ForwardTrace]:
    """
    Run the network and keep the caches needed for backpropagation.

    Returns:
        (outputs of shape (N,), trace)
    """
    patches = np.asarray(patches)
    if patches.ndim != 4 or patches.shape[1:] != (13, 13, 4):
        raise InvalidArgumentError(f"patch batch must have shape (N, 13, 13, 4), got {patches.shape}")
    n = patches.shape[0]
    if n == 0:
        raise InvalidArgumentError("empty patch batch")
    if mode is Mode.TRAIN and n < 2:
        raise InvalidArgumentError("train mode needs at least 2 patches for batch statistics")

    x = patches.astype(weights.dtype, copy=False)
    trace = ForwardTrace()
    for i in range(1, CONV_LAYERS + 1):
        pad = 0 if i in UNPADDED_LAYERS else 1
        cache: dict[str, Any] = {"pad": pad, "x_shape": x.shape}
        x, cache["cols"] = conv_forward(x, weights[f"conv{i}.weight"], weights[f"conv{i}.bias"], pad)
        _check_finite(x, f"conv{i}")

        x, cache["bn"] = batchnorm_forward(
            x,
            weights[f"bn{i}.gamma"],
            weights[f"bn{i}.beta"],
            weights[f"bn{i}.running_mean"],
            weights[f"bn{i}.running_var"],
            mode,
            bn_momentum,
            bn_epsilon,
            update_running,
        )
        _check_finite(x, f"bn{i}")

        cache["relu_mask"] = x > 0
        x = np.where(cache["relu_mask"], x, 0.0).astype(x.dtype, copy=False)

        if i in POOLED_LAYERS:
            cache["pool_shape"] = x.shape
            x, cache["argmax"] = maxpool_forward(x)

        trace.caches.append(cache)
        trace.activation_shapes.append(x.shape[1:])

    trace.features = x.reshape(n, -1)
    out = trace.features @ weights["fc.weight"] + weights["fc.bias"][0]
    _check_finite(out, "fc")
    trace.activation_shapes.append((1,))
    return out, trace


def cnn_forward(
    patches: np.ndarray,
    weights: WeightsBundle,
    mode: Mode = Mode.INFER,
    bn_momentum: float = DEFAULT_BN_MOMENTUM,
    bn_epsilon: float = DEFAULT_BN_EPSILON,
) -> np.ndarray:
    """
    Scalar network output per patch, in scaled label units.
    Train mode uses batch statistics and updates the running statistics in place.
    """
    out, _ = forward(patches, weights, Mode(mode), bn_momentum, bn_epsilon)
    return out


def backward(
    dout: np.ndarray, trace: ForwardTrace, weights: WeightsBundle
) -> dict[str, np.ndarray]:
    """Gradients of every learnable tensor given dL/doutput."""
    grads: dict[str, np.ndarray] = {
        "fc.weight": trace.features.T @ dout,
        "fc.bias": np.array([dout.sum()], dtype=dout.dtype),
    }
    n = trace.features.shape[0]
    dx = np.outer(dout, weights["fc.weight"]).reshape((n,) + trace.activation_shapes[-2])

    for i in range(CONV_LAYERS, 0, -1):
        cache = trace.caches[i - 1]
        if i in POOLED_LAYERS:
            dx = maxpool_backward(dx, cache["argmax"], cache["pool_shape"])
        dx = dx * cache["relu_mask"]
        dx, grads[f"bn{i}.gamma"], grads[f"bn{i}.beta"] = batchnorm_backward(
            dx, cache["bn"], weights[f"bn{i}.gamma"]
        )
        dx, grads[f"conv{i}.weight"], grads[f"conv{i}.bias"] = conv_backward(
            dx, cache["cols"], cache["x_shape"], weights[f"conv{i}.weight"], cache["pad"]
        )
        _check_finite(dx, f"conv{i}")

    return grads


def cnn_backward(
    patches: np.ndarray,
    labels: np.ndarray,
    weights: WeightsBundle,
    bn_momentum: float = DEFAULT_BN_MOMENTUM,
    bn_epsilon: float = DEFAULT_BN_EPSILON,
    update_running: bool = True,
) -> tuple[float, WeightsBundle]:
    """
    Mean squared error of a train-mode pass and its gradients.

    Args:
        patches: (N, 13, 13, 4) batch
        labels: (N,) targets already scaled to [-1, 1]
        weights: Network parameters (running statistics updated in place)

    Returns:
        (loss, gradients shaped like the weights; running statistics get zeros)

    Raises:
        NumericFailureError: On non-finite activations, naming the layer
    """
    labels = np.asarray(labels, dtype=weights.dtype)
    out, trace = forward(patches, weights, Mode.TRAIN, bn_momentum, bn_epsilon, update_running)
    if labels.shape != out.shape:
        raise InvalidArgumentError(f"labels shape {labels.shape} does not match batch {out.shape}")

    residual = out - labels
    loss = float(np.mean(residual**2))
    if not np.isfinite(loss):
        raise NumericFailureError("non-finite loss", layer="fc")
    dout = (2.0 / len(residual)) * residual

    gradients = weights.zeros_like()
    for name, grad in backward(dout, trace, weights).items():
        gradients.tensors[name] = grad.astype(weights.dtype, copy=False)
    return loss, gradients
