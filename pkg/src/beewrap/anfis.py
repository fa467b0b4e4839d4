"""Takagi-Sugeno fuzzy regressor with Gaussian premises.

Training is the classic hybrid: fuzzy c-means places one rule per cluster,
consequents are solved by ridge least squares in the normalized firing
strengths, and an optional gradient pass refines the premise Gaussians.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from beewrap.dataset import Scaler
from beewrap.serialization import ModelFormatError, dump_document, get_field, parse_document

__all__ = [
    "SIGMA_FLOOR",
    "ClusteringError",
    "GaussianMf",
    "ConsequentParams",
    "FuzzyRule",
    "AnfisModel",
    "AnfisTrainConfig",
    "fcm_cluster",
    "normalized_firing_strengths",
    "anfis_predict",
    "anfis_fit_consequents",
    "premise_gradient",
    "anfis_refine_premise",
    "anfis_train",
    "anfis_serialize",
    "anfis_deserialize",
]

SIGMA_FLOOR = 1e-6
CONSEQUENT_KINDS = ("constant", "linear")

ANFIS_FORMAT = "anfis-model"
ANFIS_VERSION = 1


class ClusteringError(ValueError):
    """Raised when the data cannot support the requested clustering."""


@dataclass(frozen=True)
class GaussianMf:
    """Gaussian membership curve exp(-(x - center)^2 / (2 sigma^2))."""

    center: float
    sigma: float

    def __post_init__(self):
        if not self.sigma >= SIGMA_FLOOR:
            raise ValueError(f"sigma {self.sigma} below floor {SIGMA_FLOOR}")


@dataclass(frozen=True)
class ConsequentParams:
    """Rule output: a bias, plus one slope per input when kind is 'linear'."""

    kind: str
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in CONSEQUENT_KINDS:
            raise ValueError(f"unknown consequent kind {self.kind!r}")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if self.kind == "constant" and len(self.coefficients) != 1:
            raise ValueError("constant consequent takes exactly 1 coefficient")


@dataclass(frozen=True)
class FuzzyRule:
    premise: tuple[GaussianMf, ...]
    consequent: ConsequentParams

    def __post_init__(self):
        object.__setattr__(self, "premise", tuple(self.premise))
        d = len(self.premise)
        if self.consequent.kind == "linear" and len(self.consequent.coefficients) != d + 1:
            raise ValueError(
                f"linear consequent needs {d + 1} coefficients, got {len(self.consequent.coefficients)}"
            )


def _readonly(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AnfisModel:
    """Trained rule bank. Arrays are read-only; prediction is thread-safe.

    centers, sigmas: (r, d) premise Gaussians, one per rule and input.
    coefficients: (r, 1) for constant consequents, (r, d+1) bias-first for linear.
    Inputs are expected in the standardized space the model was trained in.
    """

    centers: np.ndarray
    sigmas: np.ndarray
    consequent: str
    coefficients: np.ndarray
    scaler: Scaler | None = None

    def __post_init__(self):
        centers = _readonly(self.centers)
        sigmas = _readonly(self.sigmas)
        coeffs = _readonly(self.coefficients)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "coefficients", coeffs)
        if centers.ndim != 2 or centers.shape[0] < 1:
            raise ValueError("centers must be (n_rules, input_dim) with at least one rule")
        if sigmas.shape != centers.shape:
            raise ValueError("sigmas shape must match centers")
        if not (sigmas >= SIGMA_FLOOR).all():
            raise ValueError(f"all sigmas must be >= {SIGMA_FLOOR}")
        if self.consequent not in CONSEQUENT_KINDS:
            raise ValueError(f"unknown consequent kind {self.consequent!r}")
        r, d = centers.shape
        width = 1 if self.consequent == "constant" else d + 1
        if coeffs.shape != (r, width):
            raise ValueError(f"coefficients shape {coeffs.shape}, expected ({r}, {width})")
        if not (np.isfinite(centers).all() and np.isfinite(sigmas).all() and np.isfinite(coeffs).all()):
            raise ValueError("model parameters must be finite")

    @property
    def n_rules(self) -> int:
        return self.centers.shape[0]

    @property
    def input_dim(self) -> int:
        return self.centers.shape[1]

    @property
    def rules(self) -> tuple[FuzzyRule, ...]:
        out = []
        for i in range(self.n_rules):
            premise = tuple(
                GaussianMf(float(self.centers[i, j]), float(self.sigmas[i, j]))
                for j in range(self.input_dim)
            )
            consequent = ConsequentParams(self.consequent, tuple(self.coefficients[i]))
            out.append(FuzzyRule(premise, consequent))
        return tuple(out)

    @classmethod
    def from_rules(cls, rules, scaler: Scaler | None = None) -> "AnfisModel":
        rules = tuple(rules)
        if not rules:
            raise ValueError("need at least one rule")
        d = len(rules[0].premise)
        kind = rules[0].consequent.kind
        for rule in rules:
            if len(rule.premise) != d or rule.consequent.kind != kind:
                raise ValueError("all rules must share input_dim and consequent kind")
        centers = np.array([[mf.center for mf in rule.premise] for rule in rules])
        sigmas = np.array([[mf.sigma for mf in rule.premise] for rule in rules])
        coeffs = np.array([rule.consequent.coefficients for rule in rules])
        return cls(centers, sigmas, kind, coeffs, scaler)

    def predict(self, X) -> np.ndarray:
        """Predict a batch of standardized input rows; returns (n,) in Da."""
        X = _as_batch(X, self.input_dim)
        norm = _normalized_strengths(self.centers, self.sigmas, X)
        return np.sum(norm * _consequent_outputs(self, X), axis=1)


@dataclass(frozen=True)
class AnfisTrainConfig:
    """Structure and training knobs; n_rules and consequent define the model class."""

    n_rules: int
    consequent: str = "linear"
    fuzzifier: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300
    ridge: float = 1e-4
    premise_epochs: int = 50
    premise_lr: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.n_rules < 1:
            raise ValueError("n_rules must be >= 1")
        if self.consequent not in CONSEQUENT_KINDS:
            raise ValueError(f"unknown consequent kind {self.consequent!r}")
        if self.fuzzifier <= 1.0:
            raise ValueError("fuzzifier must be > 1")
        if self.ridge < 0:
            raise ValueError("ridge must be >= 0")
        if self.premise_epochs < 0:
            raise ValueError("premise_epochs must be >= 0")


# ---------------------------------------------------------------------------
# fuzzy c-means


def _fcm_memberships(X, centers, m):
    """Membership matrix (n, c): inverse-distance weights with exponent 1/(m-1)."""
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    n, c = d2.shape
    u = np.zeros((n, c))
    # points coinciding with a center get membership concentrated there
    zero = d2 <= 1e-24
    zrows = zero.any(axis=1)
    if zrows.any():
        z = zero[zrows].astype(float)
        u[zrows] = z / z.sum(axis=1, keepdims=True)
    rest = ~zrows
    if rest.any():
        inv = d2[rest] ** (-1.0 / (m - 1.0))
        u[rest] = inv / inv.sum(axis=1, keepdims=True)
    return u


def fcm_cluster(X, c: int, m: float = 2.0, tol: float = 1e-6, max_iter: int = 300, seed: int = 0):
    """Fuzzy c-means; returns (centers (c, d), memberships (n, c)).

    Centers start on c distinct seeded data rows; iteration stops when the
    largest center shift drops below tol. Membership rows always sum to 1.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    n = X.shape[0]
    if not 1 <= c <= n:
        raise ValueError(f"cluster count {c} outside [1, {n}]")
    if m <= 1.0:
        raise ValueError("fuzzifier m must be > 1")
    if c > 1 and bool(np.all(X == X[0])):
        raise ClusteringError(f"all {n} rows identical: cannot form {c} clusters")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    centers = X[np.sort(rng.choice(n, size=c, replace=False))].copy()
    u = _fcm_memberships(X, centers, m)
    for _ in range(max_iter):
        um = u**m
        weights = um.sum(axis=0)
        new_centers = (um.T @ X) / np.maximum(weights, 1e-300)[:, None]
        shift = float(np.max(np.abs(new_centers - centers)))
        centers = new_centers
        u = _fcm_memberships(X, centers, m)
        if shift < tol:
            break
    return centers, u


# ---------------------------------------------------------------------------
# forward pass


def _as_batch(X, input_dim):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != input_dim:
        raise ValueError(f"input shape {X.shape}, expected (n, {input_dim})")
    if not np.isfinite(X).all():
        raise ValueError("inputs must be finite")
    return X


def _firing_strengths(centers, sigmas, X):
    z = (X[:, None, :] - centers[None, :, :]) / sigmas[None, :, :]
    return np.exp(-0.5 * z * z).prod(axis=2)


def _normalized_strengths(centers, sigmas, X):
    w = _firing_strengths(centers, sigmas, X)
    total = w.sum(axis=1)
    out = np.empty_like(w)
    dead = total == 0.0
    if dead.any():
        # every rule underflowed: fall back to uniform weights
        out[dead] = 1.0 / w.shape[1]
    alive = ~dead
    if alive.any():
        out[alive] = w[alive] / total[alive, None]
    return out


def normalized_firing_strengths(model: AnfisModel, X) -> np.ndarray:
    """Per-row normalized rule activations; each row sums to 1."""
    X = _as_batch(X, model.input_dim)
    return _normalized_strengths(model.centers, model.sigmas, X)


def _consequent_outputs(model: AnfisModel, X):
    B = model.coefficients
    if model.consequent == "constant":
        return np.broadcast_to(B[:, 0], (X.shape[0], model.n_rules))
    return B[:, 0][None, :] + X @ B[:, 1:].T


def anfis_predict(model: AnfisModel, x) -> float:
    """Predict one standardized input vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.input_dim,):
        raise ValueError(f"input shape {x.shape}, expected ({model.input_dim},)")
    return float(model.predict(x[None, :])[0])


# ---------------------------------------------------------------------------
# training


def _design_matrix(norm, X, kind):
    if kind == "constant":
        return norm
    n = X.shape[0]
    ones_x = np.concatenate([np.ones((n, 1)), X], axis=1)
    return (norm[:, :, None] * ones_x[:, None, :]).reshape(n, -1)


def _solve_ridge(A, y, ridge):
    if not np.isfinite(A).all():
        raise ValueError("non-finite design matrix")
    if ridge > 0.0:
        k = A.shape[1]
        A = np.vstack([A, np.sqrt(ridge) * np.eye(k)])
        y = np.concatenate([y, np.zeros(k)])
    theta, *_ = np.linalg.lstsq(A, y, rcond=None)
    return theta


def anfis_fit_consequents(model: AnfisModel, X, y, ridge: float = 0.0) -> AnfisModel:
    """Solve the consequents by (ridge) least squares with premises fixed.

    Minimizes sum((y - yhat)^2) + ridge * ||coefficients||^2 in the design
    matrix of normalized firing strengths.
    """
    X = _as_batch(X, model.input_dim)
    y = np.asarray(y, dtype=float)
    if y.shape != (X.shape[0],):
        raise ValueError("y length must match X rows")
    norm = _normalized_strengths(model.centers, model.sigmas, X)
    A = _design_matrix(norm, X, model.consequent)
    theta = _solve_ridge(A, y, ridge)
    width = 1 if model.consequent == "constant" else model.input_dim + 1
    return replace(model, coefficients=theta.reshape(model.n_rules, width))


def _training_mse(model, X, y):
    e = model.predict(X) - y
    return float(np.mean(e * e))


def premise_gradient(model: AnfisModel, X, y):
    """Gradient of training MSE w.r.t. centers and sigmas, consequents fixed.

    Returns (d_centers, d_sigmas), both shaped (n_rules, input_dim). Rows whose
    firing underflowed to zero are on the uniform-fallback branch and contribute
    no gradient.
    """
    X = _as_batch(X, model.input_dim)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    w = _firing_strengths(model.centers, model.sigmas, X)
    total = w.sum(axis=1)
    alive = total > 0.0
    norm = np.empty_like(w)
    norm[alive] = w[alive] / total[alive, None]
    if (~alive).any():
        norm[~alive] = 1.0 / model.n_rules
    F = _consequent_outputs(model, X)
    yhat = np.sum(norm * F, axis=1)
    err = yhat - y

    g = np.zeros_like(w)
    g[alive] = err[alive, None] * (F[alive] - yhat[alive, None]) * norm[alive]
    diff = X[:, None, :] - model.centers[None, :, :]
    d_centers = (2.0 / n) * np.einsum("tr,trd->rd", g, diff) / model.sigmas**2
    d_sigmas = (2.0 / n) * np.einsum("tr,trd->rd", g, diff**2) / model.sigmas**3
    return d_centers, d_sigmas


def anfis_refine_premise(
    model: AnfisModel, X, y, epochs: int, lr: float, ridge: float = 0.0
) -> AnfisModel:
    """Full-batch gradient descent on the premise Gaussians.

    Consequents are re-solved after every step. A step that would raise the
    training MSE is retried at half the rate, up to 10 halvings per epoch,
    then skipped, so the reported MSE never increases.
    """
    if epochs == 0:
        return model
    X = _as_batch(X, model.input_dim)
    y = np.asarray(y, dtype=float)
    current = model
    current_mse = _training_mse(current, X, y)
    for _ in range(epochs):
        d_centers, d_sigmas = premise_gradient(current, X, y)
        step = lr
        for _attempt in range(11):
            candidate = replace(
                current,
                centers=current.centers - step * d_centers,
                sigmas=np.maximum(current.sigmas - step * d_sigmas, SIGMA_FLOOR),
            )
            candidate = anfis_fit_consequents(candidate, X, y, ridge)
            candidate_mse = _training_mse(candidate, X, y)
            if candidate_mse <= current_mse:
                current, current_mse = candidate, candidate_mse
                break
            step *= 0.5
    return current


def anfis_train(X, y, cfg: AnfisTrainConfig, scaler: Scaler | None = None) -> AnfisModel:
    """Cluster -> premise init -> ridge consequents -> optional premise refinement.

    Deterministic for a fixed (X, y, cfg).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    n, d = X.shape
    if cfg.n_rules > n:
        raise ValueError(f"n_rules={cfg.n_rules} exceeds sample count {n}")

    centers, u = fcm_cluster(
        X, cfg.n_rules, m=cfg.fuzzifier, tol=cfg.fcm_tol, max_iter=cfg.fcm_max_iter, seed=cfg.seed
    )
    # sigma per rule and dimension: membership-weighted spread around the center
    weight = np.maximum(u.sum(axis=0), 1e-300)
    var = np.einsum("tr,trd->rd", u, (X[:, None, :] - centers[None, :, :]) ** 2) / weight[:, None]
    sigmas = np.maximum(np.sqrt(var), SIGMA_FLOOR)

    width = 1 if cfg.consequent == "constant" else d + 1
    model = AnfisModel(centers, sigmas, cfg.consequent, np.zeros((cfg.n_rules, width)), scaler)
    model = anfis_fit_consequents(model, X, y, cfg.ridge)
    return anfis_refine_premise(model, X, y, cfg.premise_epochs, cfg.premise_lr, cfg.ridge)


# ---------------------------------------------------------------------------
# serialization


def anfis_serialize(model: AnfisModel) -> str:
    """Lossless JSON round trip: deserialized models predict bit-identically."""
    doc = {
        "format": ANFIS_FORMAT,
        "version": ANFIS_VERSION,
        "input_dim": model.input_dim,
        "rules": [
            {
                "premise": [{"center": mf.center, "sigma": mf.sigma} for mf in rule.premise],
                "consequent": {
                    "kind": rule.consequent.kind,
                    "coefficients": list(rule.consequent.coefficients),
                },
            }
            for rule in model.rules
        ],
        "scaler": model.scaler.to_dict() if model.scaler is not None else None,
    }
    return dump_document(doc)


def anfis_deserialize(text: str) -> AnfisModel:
    doc = parse_document(text, ANFIS_FORMAT, ANFIS_VERSION)
    input_dim = get_field(doc, "input_dim", "document")
    raw_rules = get_field(doc, "rules", "document")
    if not isinstance(raw_rules, list) or not raw_rules:
        raise ModelFormatError("field 'rules' must be a nonempty list")
    rules = []
    for i, raw in enumerate(raw_rules):
        where = f"rules[{i}]"
        premise = get_field(raw, "premise", where)
        if len(premise) != input_dim:
            raise ModelFormatError(f"{where}: premise length {len(premise)} != input_dim {input_dim}")
        mfs = tuple(
            GaussianMf(
                float(get_field(mf, "center", f"{where}.premise[{j}]")),
                float(get_field(mf, "sigma", f"{where}.premise[{j}]")),
            )
            for j, mf in enumerate(premise)
        )
        raw_consequent = get_field(raw, "consequent", where)
        consequent = ConsequentParams(
            get_field(raw_consequent, "kind", f"{where}.consequent"),
            tuple(get_field(raw_consequent, "coefficients", f"{where}.consequent")),
        )
        rules.append(FuzzyRule(mfs, consequent))
    raw_scaler = get_field(doc, "scaler", "document")
    scaler = None
    if raw_scaler is not None:
        for key in ("means", "stds", "constant"):
            get_field(raw_scaler, key, "scaler")
        scaler = Scaler.from_dict(raw_scaler)
    try:
        return AnfisModel.from_rules(rules, scaler)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
