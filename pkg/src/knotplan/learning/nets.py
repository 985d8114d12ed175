"""Small policy and value networks with hand-written backpropagation.

Both networks share one encoder shape: a two-layer MLP per point stream,
one round of scaled dot-product mixing across the three stream embeddings,
then a tanh trunk over the mixed features and the action tag. The policy
head outputs a diagonal Gaussian over the six motion parameters (std dev
bounded by a scaled sigmoid and equal to ``sigma_init`` exactly at
initialization); the value head squashes to a success probability in (0,1).
Everything is float64 numpy; gradients are computed explicitly so the
update rule is fully visible.
"""

from __future__ import annotations

import numpy as np

from .features import STREAM_DIM, TAG_DIM

HIDDEN = 64
ACTION_DIM = 6
_STREAMS = ("o", "u", "c")
_SQRT_D = np.sqrt(float(HIDDEN))


def _xavier(rng: np.random.Generator, fan_out: int, fan_in: int) -> np.ndarray:
    lim = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-lim, lim, (fan_out, fan_in))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _encoder_params(rng: np.random.Generator, trunk_in: int) -> dict[str, np.ndarray]:
    p: dict[str, np.ndarray] = {}
    for s in _STREAMS:
        p[f"{s}.W1"] = _xavier(rng, HIDDEN, STREAM_DIM)
        p[f"{s}.b1"] = np.zeros(HIDDEN)
        p[f"{s}.W2"] = _xavier(rng, HIDDEN, HIDDEN)
        p[f"{s}.b2"] = np.zeros(HIDDEN)
    p["Wt"] = _xavier(rng, HIDDEN, trunk_in)
    p["bt"] = np.zeros(HIDDEN)
    return p


def _encoder_forward(p: dict, streams: np.ndarray, tags: np.ndarray):
    """streams (B,3,3K), tags (B,TAG_DIM) -> trunk activations (B,HIDDEN) and cache."""
    hs = []
    mlp_cache = []
    for k, s in enumerate(_STREAMS):
        x = streams[:, k, :]
        a1 = x @ p[f"{s}.W1"].T + p[f"{s}.b1"]
        h1 = np.tanh(a1)
        a2 = h1 @ p[f"{s}.W2"].T + p[f"{s}.b2"]
        h2 = np.tanh(a2)
        hs.append(h2)
        mlp_cache.append((x, h1, h2))
    H = np.stack(hs, axis=1)  # (B,3,HIDDEN)
    S = np.einsum("bik,bjk->bij", H, H) / _SQRT_D
    S = S - S.max(axis=2, keepdims=True)
    E = np.exp(S)
    A = E / E.sum(axis=2, keepdims=True)
    M = np.einsum("bij,bjk->bik", A, H)  # (B,3,HIDDEN)
    z = np.concatenate([M.reshape(M.shape[0], -1), tags], axis=1)
    t = np.tanh(z @ p["Wt"].T + p["bt"])
    return t, (mlp_cache, H, A, z, t)


def _encoder_backward(p: dict, cache, dt: np.ndarray) -> dict[str, np.ndarray]:
    mlp_cache, H, A, z, t = cache
    g: dict[str, np.ndarray] = {}
    da = dt * (1.0 - t * t)
    g["Wt"] = da.T @ z
    g["bt"] = da.sum(axis=0)
    dz = da @ p["Wt"]
    b = H.shape[0]
    dM = dz[:, : 3 * HIDDEN].reshape(b, 3, HIDDEN)
    # attention: M = A H, A = softmax(H H^T / sqrt(d))
    dA = np.einsum("bij,bkj->bik", dM, H)
    dH = np.einsum("bji,bjk->bik", A, dM)
    dS = A * (dA - (dA * A).sum(axis=2, keepdims=True))
    dH += np.einsum("bij,bjk->bik", dS + dS.transpose(0, 2, 1), H) / _SQRT_D
    for k, s in enumerate(_STREAMS):
        x, h1, h2 = mlp_cache[k]
        d2 = dH[:, k, :] * (1.0 - h2 * h2)
        g[f"{s}.W2"] = d2.T @ h1
        g[f"{s}.b2"] = d2.sum(axis=0)
        d1 = (d2 @ p[f"{s}.W2"]) * (1.0 - h1 * h1)
        g[f"{s}.W1"] = d1.T @ x
        g[f"{s}.b1"] = d1.sum(axis=0)
    return g


class ActorNet:
    """Diagonal Gaussian policy over normalized motion parameters."""

    def __init__(
        self,
        rng: np.random.Generator,
        sigma_init: float = 0.10,
        sigma_min: float = 0.01,
        sigma_max: float = 0.60,
    ):
        self.sigma_min = sigma_min
        self.sigma_max = sigma_max
        self.sigma_init = sigma_init
        self.params = _encoder_params(rng, 3 * HIDDEN + TAG_DIM)
        self.params["Wmu"] = _xavier(rng, ACTION_DIM, HIDDEN)
        self.params["bmu"] = np.zeros(ACTION_DIM)
        self.params["Wsg"] = np.zeros((ACTION_DIM, HIDDEN))
        frac = (sigma_init - sigma_min) / (sigma_max - sigma_min)
        self.params["bsg"] = np.full(ACTION_DIM, np.log(frac / (1.0 - frac)))

    def forward(self, streams: np.ndarray, tags: np.ndarray):
        """-> mu (B,6), sigma (B,6), cache."""
        t, enc_cache = _encoder_forward(self.params, streams, tags)
        mu = t @ self.params["Wmu"].T + self.params["bmu"]
        sraw = t @ self.params["Wsg"].T + self.params["bsg"]
        gate = _sigmoid(sraw)
        sigma = self.sigma_min + (self.sigma_max - self.sigma_min) * gate
        return mu, sigma, (enc_cache, t, gate)

    def backward(self, cache, dmu: np.ndarray, dsigma: np.ndarray) -> dict[str, np.ndarray]:
        enc_cache, t, gate = cache
        g: dict[str, np.ndarray] = {}
        g["Wmu"] = dmu.T @ t
        g["bmu"] = dmu.sum(axis=0)
        dsraw = dsigma * (self.sigma_max - self.sigma_min) * gate * (1.0 - gate)
        g["Wsg"] = dsraw.T @ t
        g["bsg"] = dsraw.sum(axis=0)
        dt = dmu @ self.params["Wmu"] + dsraw @ self.params["Wsg"]
        g.update(_encoder_backward(self.params, enc_cache, dt))
        return g

    def save(self, path: str) -> None:
        np.savez(
            path,
            __meta__=np.array([self.sigma_init, self.sigma_min, self.sigma_max]),
            **self.params,
        )

    @classmethod
    def load(cls, path: str) -> "ActorNet":
        data = np.load(path)
        si, smin, smax = data["__meta__"]
        net = cls.__new__(cls)
        net.sigma_init, net.sigma_min, net.sigma_max = float(si), float(smin), float(smax)
        net.params = {k: data[k] for k in data.files if k != "__meta__"}
        return net


class CriticNet:
    """Success-probability estimate q(features, motion) in (0, 1)."""

    def __init__(self, rng: np.random.Generator):
        self.params = _encoder_params(rng, 3 * HIDDEN + TAG_DIM)
        self.params["Wq1"] = _xavier(rng, HIDDEN, HIDDEN + ACTION_DIM)
        self.params["bq1"] = np.zeros(HIDDEN)
        self.params["wq2"] = _xavier(rng, 1, HIDDEN)[0]
        self.params["bq2"] = np.zeros(1)

    def forward(self, streams: np.ndarray, tags: np.ndarray, act: np.ndarray):
        """-> q (B,), cache."""
        t, enc_cache = _encoder_forward(self.params, streams, tags)
        y = np.concatenate([t, act], axis=1)
        aq = y @ self.params["Wq1"].T + self.params["bq1"]
        hq = np.tanh(aq)
        qraw = hq @ self.params["wq2"] + self.params["bq2"][0]
        q = _sigmoid(qraw)
        return q, (enc_cache, y, hq)

    def value(self, streams: np.ndarray, tags: np.ndarray, act: np.ndarray) -> np.ndarray:
        return self.forward(streams, tags, act)[0]

    def backward(self, cache, dqraw: np.ndarray) -> dict[str, np.ndarray]:
        """dqraw is the gradient at the pre-sigmoid output (B,)."""
        enc_cache, y, hq = cache
        g: dict[str, np.ndarray] = {}
        g["wq2"] = dqraw @ hq
        g["bq2"] = np.array([dqraw.sum()])
        dhq = np.outer(dqraw, self.params["wq2"]) * (1.0 - hq * hq)
        g["Wq1"] = dhq.T @ y
        g["bq1"] = dhq.sum(axis=0)
        dy = dhq @ self.params["Wq1"]
        dt = dy[:, :HIDDEN]
        g.update(_encoder_backward(self.params, enc_cache, dt))
        return g

    def save(self, path: str) -> None:
        np.savez(path, **self.params)

    @classmethod
    def load(cls, path: str) -> "CriticNet":
        data = np.load(path)
        net = cls.__new__(cls)
        net.params = {k: data[k] for k in data.files}
        return net


class SGDMomentum:
    """Plain momentum SGD over a parameter dict."""

    def __init__(self, params: dict[str, np.ndarray], lr: float, momentum: float = 0.9):
        self.params = params
        self.lr = lr
        self.momentum = momentum
        self.vel = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, grads: dict[str, np.ndarray]) -> None:
        for k, gk in grads.items():
            v = self.vel[k]
            v *= self.momentum
            v -= self.lr * gk
            self.params[k] += v
