"""Feed-forward value network with hand-rolled backprop and optimizers.

Parameters live in one flat vector with per-layer views, so the
optimizer update is a single vectorized pass.  Hidden layers use the
rectifier; the output layer is linear, one value per action slot.
"""

from __future__ import annotations

import math
import struct

import numpy as np

NEG_INF = -1e30  # mask fill; avoids inf-inf when whole rows are invalid


class MLP:
    """Fully connected network over a flat parameter vector."""

    def __init__(self, layer_sizes, rng: np.random.Generator | None = None,
                 dtype=np.float64, params: np.ndarray | None = None):
        self.layer_sizes = tuple(int(s) for s in layer_sizes)
        if len(self.layer_sizes) < 2:
            raise ValueError("need at least input and output sizes")
        self.dtype = np.dtype(dtype)
        self.n_params = sum(
            n_in * n_out + n_out
            for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:])
        )
        if params is not None:
            if params.shape != (self.n_params,):
                raise ValueError("parameter vector has the wrong length")
            self.params = params.astype(self.dtype)
        else:
            self.params = np.zeros(self.n_params, dtype=self.dtype)
            if rng is not None:
                self._init_params(rng)
        self._build_views()

    def _init_params(self, rng: np.random.Generator) -> None:
        # He-style scaling for rectifier hidden layers, applied uniformly.
        offset = 0
        for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            scale = np.sqrt(2.0 / n_in)
            w = rng.normal(0.0, scale, size=n_in * n_out)
            self.params[offset:offset + n_in * n_out] = w
            offset += n_in * n_out + n_out  # biases stay zero

    def _build_views(self) -> None:
        self.weights = []
        self.biases = []
        offset = 0
        for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            self.weights.append(self.params[offset:offset + n_in * n_out].reshape(n_in, n_out))
            offset += n_in * n_out
            self.biases.append(self.params[offset:offset + n_out])
            offset += n_out

    def clone(self) -> "MLP":
        return MLP(self.layer_sizes, dtype=self.dtype, params=self.params.copy())

    def copy_from(self, other: "MLP") -> None:
        self.params[:] = other.params

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Action values for a batch of observations, shape (B, n_actions)."""
        h = np.asarray(x, dtype=self.dtype)
        squeeze = h.ndim == 1
        if squeeze:
            h = h[None, :]
        if h.shape[1] != self.layer_sizes[0]:
            raise ValueError(
                f"observation width {h.shape[1]} != network input {self.layer_sizes[0]}")
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i != last:
                np.maximum(h, 0.0, out=h)
        return h[0] if squeeze else h

    def forward_cached(self, x: np.ndarray):
        """Forward pass that keeps the activations needed for backprop."""
        h = np.asarray(x, dtype=self.dtype)
        if h.ndim != 2 or h.shape[1] != self.layer_sizes[0]:
            raise ValueError("forward_cached expects a (B, input) batch")
        activations = [h]
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i != last:
                np.maximum(h, 0.0, out=h)
            activations.append(h)
        return activations[-1], activations

    def backward(self, activations, dout: np.ndarray) -> np.ndarray:
        """Gradient of a scalar loss wrt the flat parameters.

        ``dout`` is dLoss/dOutput for the batch; reverse-mode
        accumulation walks the cached activations back to the input.
        """
        grad = np.zeros_like(self.params)
        g_weights = []
        g_biases = []
        offset = 0
        for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            g_weights.append(grad[offset:offset + n_in * n_out].reshape(n_in, n_out))
            offset += n_in * n_out
            g_biases.append(grad[offset:offset + n_out])
            offset += n_out

        delta = np.asarray(dout, dtype=self.dtype)
        for i in range(len(self.weights) - 1, -1, -1):
            g_weights[i][:] = activations[i].T @ delta
            g_biases[i][:] = delta.sum(axis=0)
            if i > 0:
                delta = delta @ self.weights[i].T
                delta *= activations[i] > 0  # rectifier gate
        return grad


def masked_argmax(q: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Row-wise argmax over valid action slots (lowest index wins ties)."""
    filled = np.where(mask, q, NEG_INF)
    return np.argmax(filled, axis=-1)


def masked_max(q: np.ndarray, mask: np.ndarray) -> np.ndarray:
    filled = np.where(mask, q, NEG_INF)
    out = np.max(filled, axis=-1)
    # Rows with no valid action contribute zero bootstrap value.
    return np.where(np.any(mask, axis=-1), out, 0.0)


class Sgd:
    """Plain gradient descent, the literal update rule."""

    def __init__(self, lr: float):
        self.lr = lr

    def step(self, params: np.ndarray, grad: np.ndarray) -> None:
        params -= self.lr * grad

    def state_arrays(self):
        return {}


class Adam:
    """Adaptive-moment estimation with standard defaults.

    The update folds the bias corrections into the step size
    (lr_t = lr*sqrt(1-b2^t)/(1-b1^t), eps_t = eps*sqrt(1-b2^t)), which
    is algebraically identical to the textbook m_hat/v_hat form but
    runs without temporaries or dtype promotion.
    """

    def __init__(self, lr: float, n_params: int, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8, dtype=np.float64):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = np.zeros(n_params, dtype=dtype)
        self.v = np.zeros(n_params, dtype=dtype)
        self._scratch = np.empty(n_params, dtype=dtype)
        self._grad2 = np.empty(n_params, dtype=dtype)

    def step(self, params: np.ndarray, grad: np.ndarray) -> None:
        self.t += 1
        dt = self.m.dtype.type
        b1, b2 = self.m.dtype.type(self.beta1), self.m.dtype.type(self.beta2)
        self.m *= b1
        np.multiply(grad, dt(1.0 - self.beta1), out=self._scratch)
        self.m += self._scratch
        self.v *= b2
        np.multiply(grad, grad, out=self._grad2)
        self._grad2 *= dt(1.0 - self.beta2)
        self.v += self._grad2
        c2 = math.sqrt(1.0 - self.beta2 ** self.t)
        lr_t = dt(self.lr * c2 / (1.0 - self.beta1 ** self.t))
        eps_t = dt(self.eps * c2)
        np.sqrt(self.v, out=self._scratch)
        self._scratch += eps_t
        np.divide(self.m, self._scratch, out=self._scratch)
        self._scratch *= lr_t
        params -= self._scratch

    def state_arrays(self):
        return {"m": self.m, "v": self.v}


def soft_update(target: MLP, online: MLP, mu: float) -> None:
    """Blend the online parameters into the target: mu*online + (1-mu)*target."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mu must lie in [0, 1]")
    target.params *= 1.0 - mu
    target.params += mu * online.params


CHECKPOINT_MAGIC = b"LAINNET1"


def save_checkpoint(path, net: MLP, optimizer: Adam | Sgd | None = None) -> None:
    """Write a network (and optional Adam state) as versioned flat binary.

    Layout, all little-endian:
      magic            8 bytes  b"LAINNET1"
      version          uint32   (1)
      n_sizes          uint32
      layer sizes      n_sizes * uint32
      has_adam         uint32   (0 or 1)
      adam_t           uint64
      params           n_params * float64
      adam m, v        2 * n_params * float64 (only when has_adam = 1)
    """
    has_adam = isinstance(optimizer, Adam)
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<II", 1, len(net.layer_sizes)))
        fh.write(struct.pack(f"<{len(net.layer_sizes)}I", *net.layer_sizes))
        fh.write(struct.pack("<IQ", int(has_adam), optimizer.t if has_adam else 0))
        fh.write(net.params.astype("<f8").tobytes())
        if has_adam:
            fh.write(optimizer.m.astype("<f8").tobytes())
            fh.write(optimizer.v.astype("<f8").tobytes())


def load_checkpoint(path, lr: float = 0.005, dtype=np.float64):
    """Read a checkpoint back into (net, optimizer-or-None)."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"not a checkpoint file: bad magic {magic!r}")
        version, n_sizes = struct.unpack("<II", fh.read(8))
        if version != 1:
            raise ValueError(f"unsupported checkpoint version {version}")
        sizes = struct.unpack(f"<{n_sizes}I", fh.read(4 * n_sizes))
        has_adam, adam_t = struct.unpack("<IQ", fh.read(12))
        net = MLP(sizes, dtype=dtype)
        n = net.n_params
        net.params[:] = np.frombuffer(fh.read(8 * n), dtype="<f8").astype(dtype)
        optimizer = None
        if has_adam:
            optimizer = Adam(lr, n, dtype=dtype)
            optimizer.t = adam_t
            optimizer.m[:] = np.frombuffer(fh.read(8 * n), dtype="<f8").astype(dtype)
            optimizer.v[:] = np.frombuffer(fh.read(8 * n), dtype="<f8").astype(dtype)
    return net, optimizer
