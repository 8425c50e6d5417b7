"""MPNN layers and networks, plus the block-matrix combinators.

A layer (W1, W2, b, sigma) maps a feature map to sigma(W1*x(v) + W2*sum of
x(u) over neighbors u + b) per node.  The combinators build concatenations
and parallel compositions out of stacked and block-diagonal matrices, pad
networks with identity-weight ReLU layers (sound because post-ReLU features
are nonnegative and ReLU is idempotent), and rewrite an interior id-layer
into a ReLU pair via x = relu(x) - relu(-x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activations import (
    ID,
    RELU,
    Activation,
    activation_from_json,
    activation_to_json,
    apply_vec,
)
from .errors import ArityError
from .graphs import FeatureMap, Graph

__all__ = [
    "Layer",
    "Mpnn",
    "layer",
    "identity_layer",
    "eval_layer",
    "eval_mpnn",
    "concat_layers",
    "parallel_layers",
    "pad_relu",
    "concat_mpnns",
    "eliminate_id_layer",
    "is_sigma_mpnn",
    "is_relu_mpnn",
    "mpnn_to_json",
    "mpnn_from_json",
]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Layer:
    w_self: np.ndarray   # (r, d): transforms the node's own feature vector
    w_neigh: np.ndarray  # (r, d): transforms the neighbor sum
    bias: np.ndarray     # (r,)
    activation: Activation

    def __post_init__(self):
        w1 = _frozen(self.w_self)
        w2 = _frozen(self.w_neigh)
        b = _frozen(self.bias)
        if w1.ndim != 2 or w2.ndim != 2 or b.ndim != 1:
            raise ValueError("expected 2-d weight matrices and a 1-d bias")
        if w1.shape != w2.shape:
            raise ValueError(f"weight shapes differ: {w1.shape} vs {w2.shape}")
        if b.shape[0] != w1.shape[0]:
            raise ValueError(f"bias length {b.shape[0]} != row count {w1.shape[0]}")
        object.__setattr__(self, "w_self", w1)
        object.__setattr__(self, "w_neigh", w2)
        object.__setattr__(self, "bias", b)

    @property
    def input_arity(self) -> int:
        return self.w_self.shape[1]

    @property
    def output_arity(self) -> int:
        return self.w_self.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Layer)
            and np.array_equal(self.w_self, other.w_self)
            and np.array_equal(self.w_neigh, other.w_neigh)
            and np.array_equal(self.bias, other.bias)
            and self.activation == other.activation
        )


def layer(w_self, w_neigh, bias, activation: Activation) -> Layer:
    """Layer from scalars/lists/arrays, e.g. layer(0, 1, 0, ID)."""
    return Layer(
        np.atleast_2d(np.asarray(w_self, dtype=float)),
        np.atleast_2d(np.asarray(w_neigh, dtype=float)),
        np.atleast_1d(np.asarray(bias, dtype=float)),
        activation,
    )


def identity_layer(r: int, activation: Activation) -> Layer:
    return Layer(np.eye(r), np.zeros((r, r)), np.zeros(r), activation)


@dataclass(frozen=True, eq=False)
class Mpnn:
    layers: tuple[Layer, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValueError("an MPNN needs at least one layer")
        for prev, cur in zip(self.layers, self.layers[1:]):
            if cur.input_arity != prev.output_arity:
                raise ArityError(
                    f"layer expects arity {cur.input_arity}, "
                    f"previous layer outputs {prev.output_arity}"
                )

    @property
    def input_arity(self) -> int:
        return self.layers[0].input_arity

    @property
    def output_arity(self) -> int:
        return self.layers[-1].output_arity

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mpnn)
            and len(self.layers) == len(other.layers)
            and all(a == b for a, b in zip(self.layers, other.layers))
        )


# -- evaluation ----------------------------------------------------------------

def eval_layer(lyr: Layer, g: Graph, chi: FeatureMap) -> FeatureMap:
    if chi.dimension != lyr.input_arity:
        raise ArityError(
            f"layer expects {lyr.input_arity}-dim features, got {chi.dimension}"
        )
    x = chi.values
    z = x @ lyr.w_self.T + g.neighbor_sum(x) @ lyr.w_neigh.T + lyr.bias
    return FeatureMap(apply_vec(lyr.activation, z))


def eval_mpnn(net: Mpnn, g: Graph, chi: FeatureMap) -> FeatureMap:
    out = chi
    for lyr in net.layers:
        out = eval_layer(lyr, g, out)
    return out


# -- combinators ----------------------------------------------------------------

def concat_layers(a: Layer, b: Layer) -> Layer:
    """Stack outputs of two layers over the same input: (a | b)."""
    if a.input_arity != b.input_arity:
        raise ArityError(
            f"input arities differ: {a.input_arity} vs {b.input_arity}"
        )
    if a.activation != b.activation:
        raise ValueError("layer concatenation needs a shared activation")
    return Layer(
        np.vstack([a.w_self, b.w_self]),
        np.vstack([a.w_neigh, b.w_neigh]),
        np.concatenate([a.bias, b.bias]),
        a.activation,
    )


def parallel_layers(a: Layer, b: Layer) -> Layer:
    """Run two layers side by side on split inputs: (a || b), block-diagonal."""
    if a.activation != b.activation:
        raise ValueError("parallel composition needs a shared activation")

    def block(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
        out = np.zeros((m1.shape[0] + m2.shape[0], m1.shape[1] + m2.shape[1]))
        out[: m1.shape[0], : m1.shape[1]] = m1
        out[m1.shape[0]:, m1.shape[1]:] = m2
        return out

    return Layer(
        block(a.w_self, b.w_self),
        block(a.w_neigh, b.w_neigh),
        np.concatenate([a.bias, b.bias]),
        a.activation,
    )


def eliminate_id_layer(a: Layer, b: Layer) -> tuple[Layer, Layer]:
    """Rewrite id-layer a followed by b into a ReLU layer and an adjusted b.

    The first output doubles up as (z, -z) through ReLU; the successor
    recombines via A' = (A | -A), so a';b' computes exactly a;b.
    """
    if a.activation != ID:
        raise ValueError("first layer must use the identity activation")
    relu_part = Layer(
        np.vstack([a.w_self, -a.w_self]),
        np.vstack([a.w_neigh, -a.w_neigh]),
        np.concatenate([a.bias, -a.bias]),
        RELU,
    )
    adjusted = Layer(
        np.hstack([b.w_self, -b.w_self]),
        np.hstack([b.w_neigh, -b.w_neigh]),
        b.bias,
        b.activation,
    )
    return relu_part, adjusted


def is_sigma_mpnn(net: Mpnn, sigma: Activation) -> bool:
    """All layers use sigma, except that the last may use the identity."""
    return all(lyr.activation == sigma for lyr in net.layers[:-1]) and (
        net.layers[-1].activation in (sigma, ID)
    )


def is_relu_mpnn(net: Mpnn) -> bool:
    return is_sigma_mpnn(net, RELU)


def pad_relu(net: Mpnn, target: int) -> Mpnn:
    """Equivalent ReLU-MPNN with exactly `target` layers.

    Identity-weight ReLU layers go right after the first layer, where inputs
    are already nonnegative.  A lone id-layer network is first rewritten into
    a (relu, id) pair.
    """
    if not is_relu_mpnn(net):
        raise ValueError("padding is defined for ReLU-MPNNs only")
    if target < len(net.layers):
        raise ValueError("target length below current length")
    if target == len(net.layers):
        return net
    layers = list(net.layers)
    if len(layers) == 1 and layers[0].activation == ID:
        first, second = eliminate_id_layer(
            layers[0], identity_layer(layers[0].output_arity, ID)
        )
        layers = [first, second]
    width = layers[0].output_arity
    while len(layers) < target:
        layers.insert(1, identity_layer(width, RELU))
    return Mpnn(tuple(layers))


def concat_mpnns(a: Mpnn, b: Mpnn) -> Mpnn:
    """ReLU-MPNN computing the concatenation of the two networks' outputs."""
    if not (is_relu_mpnn(a) and is_relu_mpnn(b)):
        raise ValueError("concatenation is defined for ReLU-MPNNs only")
    if a.input_arity != b.input_arity:
        raise ArityError(
            f"input arities differ: {a.input_arity} vs {b.input_arity}"
        )
    # Align final activations so the layerwise zip sees equal ones throughout.
    a_ends_id = a.layers[-1].activation == ID
    b_ends_id = b.layers[-1].activation == ID
    if a_ends_id and not b_ends_id:
        b = Mpnn(b.layers + (identity_layer(b.output_arity, ID),))
    elif b_ends_id and not a_ends_id:
        a = Mpnn(a.layers + (identity_layer(a.output_arity, ID),))
    n = max(len(a.layers), len(b.layers))
    a = pad_relu(a, n)
    b = pad_relu(b, n)
    combined = [concat_layers(a.layers[0], b.layers[0])]
    for la, lb in zip(a.layers[1:], b.layers[1:]):
        combined.append(parallel_layers(la, lb))
    return Mpnn(tuple(combined))


# -- JSON interchange ------------------------------------------------------------

def mpnn_to_json(net: Mpnn) -> dict:
    return {
        "layers": [
            {
                "W1": lyr.w_self.tolist(),
                "W2": lyr.w_neigh.tolist(),
                "b": lyr.bias.tolist(),
                "sigma": activation_to_json(lyr.activation),
            }
            for lyr in net.layers
        ]
    }


def mpnn_from_json(obj: dict) -> Mpnn:
    return Mpnn(
        tuple(
            Layer(
                np.asarray(spec["W1"], dtype=float),
                np.asarray(spec["W2"], dtype=float),
                np.asarray(spec["b"], dtype=float),
                activation_from_json(spec["sigma"]),
            )
            for spec in obj["layers"]
        )
    )
