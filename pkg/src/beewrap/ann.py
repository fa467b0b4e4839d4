"""Single-hidden-layer tanh network trained by full-batch momentum descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from beewrap.dataset import Scaler
from beewrap.serialization import ModelFormatError, dump_document, get_field, parse_document

__all__ = [
    "AnnModel",
    "AnnTrainConfig",
    "AnnGradient",
    "AnnTrainingError",
    "ann_init",
    "ann_predict",
    "ann_gradient",
    "ann_train",
    "ann_serialize",
    "ann_deserialize",
]

ANN_FORMAT = "ann-model"
ANN_VERSION = 1


class AnnTrainingError(RuntimeError):
    """Training loss became non-finite."""


def _readonly(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AnnModel:
    """output = W2 . tanh(W1 x + b1) + b2, output units Da."""

    W1: np.ndarray  # (h, d)
    b1: np.ndarray  # (h,)
    W2: np.ndarray  # (h,)
    b2: float
    scaler: Scaler | None = None

    def __post_init__(self):
        W1 = _readonly(self.W1)
        b1 = _readonly(self.b1)
        W2 = _readonly(self.W2)
        object.__setattr__(self, "W1", W1)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "W2", W2)
        object.__setattr__(self, "b2", float(self.b2))
        if W1.ndim != 2:
            raise ValueError("W1 must be (hidden, input_dim)")
        h = W1.shape[0]
        if b1.shape != (h,) or W2.shape != (h,):
            raise ValueError("b1 and W2 must have one entry per hidden unit")
        if not (np.isfinite(W1).all() and np.isfinite(b1).all() and np.isfinite(W2).all() and np.isfinite(self.b2)):
            raise ValueError("parameters must be finite")

    @property
    def input_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def hidden_count(self) -> int:
        return self.W1.shape[0]

    def predict(self, X) -> np.ndarray:
        X = _as_batch(X, self.input_dim)
        return np.tanh(X @ self.W1.T + self.b1) @ self.W2 + self.b2


@dataclass(frozen=True)
class AnnTrainConfig:
    epochs: int = 2000
    learning_rate: float = 0.01
    momentum: float = 0.9
    plateau_patience: int = 200  # stop after this many epochs without rel. improvement
    plateau_rtol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")


@dataclass(frozen=True)
class AnnGradient:
    """Parameter-shaped gradient of the batch MSE."""

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: float


def _as_batch(X, input_dim):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != input_dim:
        raise ValueError(f"input shape {X.shape}, expected (n, {input_dim})")
    return X


def ann_init(d: int, h: int, seed: int) -> AnnModel:
    """Weights uniform in +-1/sqrt(fan_in), biases zero; deterministic per seed."""
    if d < 1 or h < 1:
        raise ValueError("need d >= 1 and h >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    W1 = rng.uniform(-1.0, 1.0, size=(h, d)) / np.sqrt(d)
    W2 = rng.uniform(-1.0, 1.0, size=h) / np.sqrt(h)
    return AnnModel(W1, np.zeros(h), W2, 0.0)


def ann_predict(model: AnnModel, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.input_dim,):
        raise ValueError(f"input shape {x.shape}, expected ({model.input_dim},)")
    return float(model.predict(x[None, :])[0])


def ann_gradient(model: AnnModel, X, y) -> AnnGradient:
    """Exact gradient of mean((predict(X) - y)^2) over the batch."""
    X = _as_batch(X, model.input_dim)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if n == 0 or y.shape != (n,):
        raise ValueError("need a nonempty batch with matching y")
    A = np.tanh(X @ model.W1.T + model.b1)  # (n, h)
    yhat = A @ model.W2 + model.b2
    delta = 2.0 * (yhat - y) / n  # (n,)
    gW2 = delta @ A
    gb2 = float(delta.sum())
    dz = (delta[:, None] * model.W2[None, :]) * (1.0 - A * A)  # (n, h)
    gW1 = dz.T @ X
    gb1 = dz.sum(axis=0)
    return AnnGradient(gW1, gb1, gW2, gb2)


def _mse(model, X, y):
    e = model.predict(X) - y
    return float(np.mean(e * e))


def ann_train(X, y, h: int, cfg: AnnTrainConfig) -> AnnModel:
    """Full-batch momentum descent; returns the lowest-MSE parameters observed.

    Stops at cfg.epochs or once the best MSE has not improved by a relative
    cfg.plateau_rtol within cfg.plateau_patience epochs. Raises
    AnnTrainingError if the loss turns non-finite.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    model = ann_init(X.shape[1], h, cfg.seed)
    if cfg.epochs == 0:
        return model

    W1, b1, W2, b2 = model.W1.copy(), model.b1.copy(), model.W2.copy(), model.b2
    vW1 = np.zeros_like(W1)
    vb1 = np.zeros_like(b1)
    vW2 = np.zeros_like(W2)
    vb2 = 0.0

    best = (W1.copy(), b1.copy(), W2.copy(), b2)
    best_mse = _mse(model, X, y)
    since_improvement = 0
    mu, lr = cfg.momentum, cfg.learning_rate

    # overflow on a diverging run is expected: it surfaces as the non-finite
    # loss check below rather than a RuntimeWarning
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(cfg.epochs):
            if not (np.isfinite(W1).all() and np.isfinite(b1).all() and np.isfinite(W2).all() and np.isfinite(b2)):
                raise AnnTrainingError(f"training diverged: non-finite parameters at epoch {epoch}")
            g = ann_gradient(AnnModel(W1, b1, W2, b2), X, y)
            vW1 = mu * vW1 - lr * g.W1
            vb1 = mu * vb1 - lr * g.b1
            vW2 = mu * vW2 - lr * g.W2
            vb2 = mu * vb2 - lr * g.b2
            W1 = W1 + vW1
            b1 = b1 + vb1
            W2 = W2 + vW2
            b2 = b2 + vb2

            e = np.tanh(X @ W1.T + b1) @ W2 + b2 - y
            current = float(np.mean(e * e))
            if not np.isfinite(current):
                raise AnnTrainingError(f"training diverged: non-finite loss at epoch {epoch}")
            if current < best_mse * (1.0 - cfg.plateau_rtol):
                since_improvement = 0
            else:
                since_improvement += 1
            if current < best_mse:
                best = (W1.copy(), b1.copy(), W2.copy(), b2)
                best_mse = current
            if since_improvement >= cfg.plateau_patience:
                break

    return AnnModel(*best)


# ---------------------------------------------------------------------------
# serialization


def ann_serialize(model: AnnModel) -> str:
    doc = {
        "format": ANN_FORMAT,
        "version": ANN_VERSION,
        "input_dim": model.input_dim,
        "hidden": model.hidden_count,
        "W1": model.W1.tolist(),
        "b1": model.b1.tolist(),
        "W2": model.W2.tolist(),
        "b2": model.b2,
        "scaler": model.scaler.to_dict() if model.scaler is not None else None,
    }
    return dump_document(doc)


def ann_deserialize(text: str) -> AnnModel:
    doc = parse_document(text, ANN_FORMAT, ANN_VERSION)
    d = get_field(doc, "input_dim", "document")
    h = get_field(doc, "hidden", "document")
    W1 = np.asarray(get_field(doc, "W1", "document"), dtype=float)
    b1 = np.asarray(get_field(doc, "b1", "document"), dtype=float)
    W2 = np.asarray(get_field(doc, "W2", "document"), dtype=float)
    b2 = get_field(doc, "b2", "document")
    if W1.shape != (h, d):
        raise ModelFormatError(f"W1 shape {W1.shape} does not match hidden={h}, input_dim={d}")
    raw_scaler = get_field(doc, "scaler", "document")
    scaler = None
    if raw_scaler is not None:
        for key in ("means", "stds", "constant"):
            get_field(raw_scaler, key, "scaler")
        scaler = Scaler.from_dict(raw_scaler)
    try:
        return AnnModel(W1, b1, W2, float(b2), scaler)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
