"""Datasets: the synthetic clouds, CSV ingestion, scaling, PCA and splits."""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidDataError, InvalidStateError, ParseError

MISSING_TOKENS = frozenset({"", "na", "n/a", "nan", "null", "none", "?"})


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: list = None
    dropped_rows: int = 0

    def __post_init__(self):
        self.features = np.atleast_2d(np.asarray(self.features, dtype=np.float64))
        self.labels = np.asarray(self.labels, dtype=np.float64).reshape(-1)
        if self.features.shape[0] < 1:
            raise InvalidDataError("dataset is empty")
        if self.features.shape[0] != self.labels.shape[0]:
            raise InvalidDataError("features and labels differ in length")
        if not (np.all(np.isfinite(self.features)) and np.all(np.isfinite(self.labels))):
            raise InvalidDataError("dataset contains non-finite values")

    def __len__(self):
        return self.features.shape[0]

    def take(self, idx):
        return Dataset(self.features[idx], self.labels[idx], self.feature_names)

    def with_features(self, features):
        return Dataset(features, self.labels, None, self.dropped_rows)


def to_pm1(labels):
    """{0,1} (or any two values) to {-1,+1}, the larger value mapping to +1."""
    labels = np.asarray(labels)
    return np.where(labels > 0, 1.0, -1.0)


def to_01(labels):
    return (np.asarray(labels) > 0).astype(np.float64)


def box_muller(rng, size):
    """Standard normal draws from uniform doubles via the Box-Muller transform."""
    m = (size + 1) // 2
    u1 = 1.0 - rng.random(m)  # (0, 1], keeps log finite
    u2 = rng.random(m)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:size]


def gen_clouds(seed, n_per_cloud=200, sigma=1.0, offsets=(0.0, 2.0, 4.0, 6.0),
               tilt_deg=60.0, positive_offsets=(2.0, 6.0)):
    """Four tilted Gaussian clouds in 3-d with interleaved binary labels.

    Each cloud draws (x, y) from N(0, sigma^2 I) and sets
    z = a + x cos(tilt). Clouds whose offset ``a`` is in ``positive_offsets``
    get label +1, the others -1.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    xs, labels = [], []
    c = math.cos(math.radians(tilt_deg))
    for a in offsets:
        xy = sigma * box_muller(rng, 2 * n_per_cloud).reshape(n_per_cloud, 2)
        z = a + xy[:, 0] * c
        xs.append(np.column_stack([xy, z]))
        labels.append(np.full(n_per_cloud, 1.0 if a in positive_offsets else -1.0))
    return Dataset(np.vstack(xs), np.concatenate(labels), ["x", "y", "z"])


def gen_regression(seed, n=400, n_features=6, noise=0.05):
    """Smooth nonlinear regression target on uniform inputs in [0, 1]^d."""
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.random((n, n_features))
    w = np.linspace(1.0, 0.2, n_features)
    y = np.sin(2.0 * x @ w) + 0.5 * (x[:, 0] - 0.5) ** 2 + noise * box_muller(rng, n)
    return Dataset(x, y, [f"x{i}" for i in range(n_features)])


# -- CSV ingestion ------------------------------------------------------------


def load_csv(path, label_column, schema=None):
    """Parse a headered CSV into a Dataset.

    ``schema`` may hold ``categorical`` (column -> list of levels, or None to
    take the sorted levels present) and ``drop`` (columns to ignore). Rows with
    any missing cell are dropped and counted in ``dropped_rows``.
    """
    schema = schema or {}
    categorical = dict(schema.get("categorical", {}))
    drop = set(schema.get("drop", ()))
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidDataError(f"{path}: missing header row") from None
        rows = [r for r in reader if r]
    if label_column not in header:
        raise InvalidArgumentError(f"{path}: no label column {label_column!r}")
    for col in list(categorical) + list(drop):
        if col not in header:
            raise InvalidArgumentError(f"{path}: schema names unknown column {col!r}")

    kept, dropped = [], 0
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise ParseError(f"{path}:{lineno}: expected {len(header)} cells", row=lineno)
        cells = dict(zip(header, (c.strip() for c in row)))
        if any(cells[h].lower() in MISSING_TOKENS for h in header if h not in drop):
            dropped += 1
            continue
        kept.append((lineno, cells))
    if not kept:
        raise InvalidDataError(f"{path}: no complete rows")

    levels = {}
    for col, declared in categorical.items():
        levels[col] = list(declared) if declared else sorted({c[col] for _, c in kept})

    names = []
    for h in header:
        if h == label_column or h in drop:
            continue
        if h in categorical:
            names.extend(f"{h}={lv}" for lv in levels[h])
        else:
            names.append(h)

    feats = np.empty((len(kept), len(names)))
    labels = np.empty(len(kept))
    for i, (lineno, cells) in enumerate(kept):
        j = 0
        for col, h in enumerate(header):
            if h in drop:
                continue
            v = cells[h]
            if h == label_column:
                labels[i] = _parse_float(v, path, lineno, col + 1)
            elif h in categorical:
                if v not in levels[h]:
                    raise ParseError(
                        f"{path}:{lineno}: unknown level {v!r} in column {h!r}",
                        row=lineno, col=col + 1,
                    )
                onehot = np.zeros(len(levels[h]))
                onehot[levels[h].index(v)] = 1.0
                feats[i, j : j + len(onehot)] = onehot
                j += len(onehot)
            else:
                feats[i, j] = _parse_float(v, path, lineno, col + 1)
                j += 1
    return Dataset(feats, labels, names, dropped)


def _parse_float(v, path, row, col):
    try:
        x = float(v)
    except ValueError:
        raise ParseError(f"{path}: cannot parse {v!r} at row {row}, column {col}",
                         row=row, col=col) from None
    if not math.isfinite(x):
        raise ParseError(f"{path}: non-finite value at row {row}, column {col}", row=row, col=col)
    return x


# -- preprocessing ------------------------------------------------------------


class MinMaxScaler:
    """Per-feature (x - min) / (max - min) with train statistics; no clamping."""

    def __init__(self):
        self.min_ = None
        self.max_ = None

    def fit(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        self.min_ = x.min(axis=0)
        self.max_ = x.max(axis=0)
        return self

    def transform(self, x):
        if self.min_ is None:
            raise InvalidStateError("MinMaxScaler.transform called before fit")
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        span = self.max_ - self.min_
        const = span == 0
        out = (x - self.min_) / np.where(const, 1.0, span)
        out[:, const] = 0.0
        return out

    def fit_transform(self, x):
        return self.fit(x).transform(x)


def minmax_fit_transform(train):
    scaler = MinMaxScaler()
    return scaler.fit_transform(train), scaler


def minmax_transform(scaler, other):
    return scaler.transform(other)


class PCA:
    """Principal components from the eigendecomposition of the train covariance.

    Components are sorted by decreasing eigenvalue; each is signed so that its
    largest-magnitude loading is positive.
    """

    def __init__(self, k):
        self.k = int(k)
        self.mean_ = None
        self.components_ = None
        self.explained_variance_ = None

    def fit(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        n, d = x.shape
        if self.k > d or self.k < 1:
            raise InvalidArgumentError(f"cannot keep {self.k} components of {d} features")
        if n < 2:
            raise InvalidArgumentError("PCA needs at least two rows")
        self.mean_ = x.mean(axis=0)
        cov = np.cov(x - self.mean_, rowvar=False, ddof=1).reshape(d, d)
        evals, evecs = np.linalg.eigh(cov)
        order = np.argsort(evals)[::-1]
        evals = np.clip(evals[order], 0.0, None)
        evecs = evecs[:, order]
        pivot = evecs[np.argmax(np.abs(evecs), axis=0), np.arange(d)]
        evecs = evecs * np.where(pivot < 0, -1.0, 1.0)
        self.explained_variance_ = evals
        self.components_ = evecs[:, : self.k]
        return self

    def transform(self, x):
        if self.components_ is None:
            raise InvalidStateError("PCA.transform called before fit")
        return (np.atleast_2d(np.asarray(x, dtype=np.float64)) - self.mean_) @ self.components_

    def fit_transform(self, x):
        return self.fit(x).transform(x)


def pca_fit_transform(train, k):
    p = PCA(k)
    return p.fit_transform(train), p


def pca_transform(p, other):
    return p.transform(other)


@dataclass
class PreprocessPipeline:
    """Ordered steps, each ``"minmax"`` or ``("pca", k)``, fitted on train only."""

    steps: list = field(default_factory=list)
    fitted: list = field(default_factory=list, init=False)

    def fit(self, x):
        self.fitted = []
        for step in self.steps:
            t = MinMaxScaler() if step == "minmax" else PCA(step[1])
            x = t.fit_transform(x)
            self.fitted.append(t)
        return self

    def transform(self, x):
        if len(self.fitted) != len(self.steps):
            raise InvalidStateError("pipeline used before fit")
        for t in self.fitted:
            x = t.transform(x)
        return x

    def fit_transform(self, x):
        return self.fit(x).transform(x)


def split(dataset, fractions, seed):
    """Seeded shuffle then contiguous slices; returns one Dataset per fraction."""
    fr = np.asarray(fractions, dtype=np.float64)
    if fr.ndim != 1 or fr.size < 2 or np.any(fr <= 0) or not math.isclose(fr.sum(), 1.0):
        raise InvalidArgumentError("fractions must be positive and sum to 1")
    n = len(dataset)
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    bounds = np.rint(np.cumsum(fr) * n).astype(int)
    bounds[-1] = n
    parts, start = [], 0
    for end in bounds:
        if end <= start:
            raise InvalidArgumentError("a split would receive no rows")
        parts.append(dataset.take(perm[start:end]))
        start = end
    return tuple(parts)
