"""The epoch loop with compression-gnostic feedback.

Once per epoch the feedback probe is evaluated on the full training set; its
information on the data sets the gradient multiplier 1 + alpha * L_comp used
for every minibatch of the next epoch.
"""
import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from ..data import Dataset
from ..errors import InvalidArgumentError
from ..infoplane import (
    BinningConfig,
    InfoPlaneTrace,
    ProbeKind,
    bin_array,
    entropy,
    has_duplicates,
    mi_data,
    mi_joint,
    probe_symbols,
    symbol_codes,
)
from ..models.dense import DenseNet, dense_backward, dense_forward
from ..models.hybrid import HybridModel, hybrid_backward, vqc_expect_y
from ..models.hybrid import get_flat as hybrid_get_flat
from ..models.hybrid import set_flat as hybrid_set_flat
from ..models.pqc import PqcModel, pqc_forward_batch, pqc_jacobian
from ..qsim.core import run_circuit_batch
from ..qsim.info import expect_z_states
from .feedback import AlphaSchedule, FeedbackMode, alpha_value, feedback_step
from .losses import (
    BCE_CLAMP,
    bce_loss,
    comp_loss_classification,
    comp_loss_regression,
    mse_loss,
)
from .metrics import Task, metrics
from .optim import AdamState, adam_step, sgd_step

READOUT = "READOUT"


class Optimizer(enum.Enum):
    SGD = "sgd"
    ADAM = "adam"


@dataclass
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 100
    batch_size: int = 32
    optimizer: Optimizer = Optimizer.SGD
    alpha: AlphaSchedule = field(default_factory=AlphaSchedule)
    feedback_mode: FeedbackMode = FeedbackMode.SCHEDULER
    task: Task = Task.CLASSIFICATION
    early_stop_patience: Optional[int] = None
    seed: int = 0
    # metric reported as train/test metric: accuracy, auc or r2
    metric: Optional[str] = None
    # probes recorded each epoch (PQC only); the feedback always uses the read-out
    probes: tuple = (ProbeKind.T_1_Z,)
    # target information for the classification feedback term; None -> H(Y) of train
    i_star: Optional[float] = None

    def __post_init__(self):
        self.optimizer = Optimizer(self.optimizer)
        self.feedback_mode = FeedbackMode(self.feedback_mode)
        self.task = Task(self.task)
        self.probes = tuple(ProbeKind(p) for p in self.probes)
        if self.learning_rate <= 0:
            raise InvalidArgumentError("learning_rate must be positive")
        if self.batch_size < 1:
            raise InvalidArgumentError("batch_size must be at least 1")
        if self.early_stop_patience is not None and self.early_stop_patience < 1:
            raise InvalidArgumentError("early_stop_patience must be at least 1")
        if self.metric is None:
            self.metric = "r2" if self.task is Task.REGRESSION else "accuracy"


@dataclass
class EpochRecord:
    epoch: int
    alpha: float
    train_loss: float
    comp_loss: float
    train_metric: float
    test_metric: float
    val_metric: Optional[float] = None
    mi: dict = field(default_factory=dict)


class Splits(NamedTuple):
    train: Dataset
    test: Dataset
    val: Optional[Dataset] = None


@dataclass
class FitResult:
    model: object
    records: list
    trace: InfoPlaneTrace
    optimizer_steps_per_epoch: int


# -- per-family adapters -----------------------------------------------------


class _PqcAdapter:
    threshold = 0.0

    def __init__(self, model, cfg):
        self.model = model
        self.cfg = cfg

    def get(self):
        return self.model.params.copy()

    def set(self, p):
        self.model.params = p

    def loss_grad(self, x, y, rng):
        f, jac = pqc_jacobian(self.model, x)
        resid = f - y
        grad = (2.0 / len(y)) * (resid[:, None] * jac).sum(axis=0)
        return mse_loss(y, f), grad

    def evaluate(self, x):
        """Read-out values and final amplitudes for every row."""
        amps = run_circuit_batch(self.model.spec, self.model.params, x)
        scores = expect_z_states(amps, self.model.spec.n_qubits, self.model.readout_qubit)
        return scores, amps

    def scores(self, x):
        return pqc_forward_batch(self.model, x)

    def symbols(self, evaluated, binning):
        """(recorded probes, feedback symbols); feedback uses the binned read-out."""
        scores, amps = evaluated
        n = self.model.spec.n_qubits
        out = {k.value: probe_symbols(amps, k, binning, n) for k in self.cfg.probes}
        if self.model.readout_qubit == 1:
            if ProbeKind.T_1_Z.value not in out:
                out[ProbeKind.T_1_Z.value] = probe_symbols(amps, ProbeKind.T_1_Z, binning, n)
            return out, ProbeKind.T_1_Z.value
        out[READOUT] = bin_array(scores, binning.m_scalar, -1.0, 1.0)[:, None]
        return out, READOUT

    def loss(self, y, scores):
        return mse_loss(y, scores)


class _DenseAdapter:
    threshold = 0.5

    def __init__(self, model, cfg):
        self.model = model
        self.cfg = cfg

    def get(self):
        return self.model.get_flat()

    def set(self, p):
        self.model.set_flat(p)

    def loss_grad(self, x, y, rng):
        out, cache = dense_forward(self.model, x, training=True, rng=rng)
        p = out[:, 0]
        if self.model.output_activation == "sigmoid":
            pc = np.clip(p, BCE_CLAMP, 1.0 - BCE_CLAMP)
            g = (pc - y) / (pc * (1.0 - pc)) / len(y)
            loss = bce_loss(y, p)
        else:
            g = 2.0 * (p - y) / len(y)
            loss = mse_loss(y, p)
        return loss, dense_backward(self.model, cache, g[:, None]).flat()

    def evaluate(self, x):
        out, _ = dense_forward(self.model, x)
        return out[:, 0], None

    def scores(self, x):
        return self.evaluate(x)[0]

    def symbols(self, evaluated, binning):
        lo, hi = (0.0, 1.0) if self.model.output_activation == "sigmoid" else (-1.0, 1.0)
        return {READOUT: bin_array(evaluated[0], binning.m_scalar, lo, hi)[:, None]}, READOUT

    def loss(self, y, scores):
        if self.model.output_activation == "sigmoid":
            return bce_loss(y, scores)
        return mse_loss(y, scores)


class _HybridAdapter:
    threshold = 0.0

    def __init__(self, model, cfg):
        self.model = model
        self.cfg = cfg

    def get(self):
        return hybrid_get_flat(self.model)

    def set(self, p):
        hybrid_set_flat(self.model, p)

    def loss_grad(self, x, y, rng):
        yhat, _ = self.evaluate(x)
        g = 2.0 * (yhat - y) / len(y)
        return mse_loss(y, yhat), hybrid_backward(self.model, x, g).flat()

    def evaluate(self, x):
        angles, _ = dense_forward(self.model.front, x)
        ys = vqc_expect_y(angles, self.model.phi, self.model.basis_change)
        out, _ = dense_forward(self.model.head, ys)
        return out[:, 0], ys

    def scores(self, x):
        return self.evaluate(x)[0]

    def symbols(self, evaluated, binning):
        return {READOUT: bin_array(evaluated[1], binning.b_component, -1.0, 1.0)}, READOUT

    def loss(self, y, scores):
        return mse_loss(y, scores)


def _adapter(model, cfg):
    if isinstance(model, PqcModel):
        return _PqcAdapter(model, cfg)
    if isinstance(model, HybridModel):
        return _HybridAdapter(model, cfg)
    if isinstance(model, DenseNet):
        return _DenseAdapter(model, cfg)
    raise TypeError(f"unsupported model type {type(model).__name__}")


# -- gradient of the error term ---------------------------------------------


def grad_pqc(model, batch, task=Task.CLASSIFICATION):
    """Gradient of the MSE over ``batch = (features, targets)`` by parameter shift.

    Both tasks use the squared error on the <sigma_Z> read-out.
    """
    x, y = batch
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if len(y) == 0:
        raise InvalidArgumentError("empty batch")
    Task(task)
    return _PqcAdapter(model, None).loss_grad(np.atleast_2d(x), y, None)[1]


# -- the loop -----------------------------------------------------------------


def _metric(cfg, adapter, y, scores):
    m = metrics(y, scores, cfg.task, adapter.threshold)
    if cfg.metric not in m:
        raise InvalidArgumentError(f"metric {cfg.metric!r} unavailable for this split")
    return m[cfg.metric]


def _batches(n, batch_size, rng):
    perm = rng.permutation(n)
    return [perm[i : i + batch_size] for i in range(0, n, batch_size)]


def fit(model, splits, config, binning=BinningConfig(), on_epoch=None):
    """Train ``model`` in place; returns the model, per-epoch records and MI trace."""
    splits = Splits(*splits)
    train, test, val = splits.train, splits.test, splits.val
    if train is None or test is None or len(train) == 0 or len(test) == 0:
        raise InvalidArgumentError("train and test splits must be nonempty")
    cfg = config
    adapter = _adapter(model, cfg)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    x, y = train.features, train.labels
    distinct = not has_duplicates(x)
    regression = cfg.task is Task.REGRESSION
    if regression:
        i_star = None
    else:
        i_star = cfg.i_star if cfg.i_star is not None else entropy(
            np.bincount(symbol_codes(y))
        )

    trace = InfoPlaneTrace()

    def probe_train():
        ev = adapter.evaluate(x)
        mis = {}
        syms, key = adapter.symbols(ev, binning)
        for name, sym in syms.items():
            md = mi_data(sym, None if distinct else x)
            ml = mi_joint(sym, y) if not regression else float("nan")
            mis[name] = (md, ml)
        return ev[0], mis, key

    def comp(mis, key):
        md = mis[key][0]
        return comp_loss_regression(md) if regression else comp_loss_classification(md, i_star)

    _, mis, key = probe_train()
    for name, (md, ml) in mis.items():
        trace.add(0, name, md, ml)

    params = adapter.get()
    adam = AdamState.zeros(params.shape[0]) if cfg.optimizer is Optimizer.ADAM else None
    steps_per_epoch = -(-len(train) // cfg.batch_size)
    records = []
    best_monitor, since_best = -np.inf, 0

    for s in range(cfg.epochs):
        alpha = alpha_value(cfg.alpha, s)
        l_comp = comp(mis, key)
        for idx in _batches(len(train), cfg.batch_size, rng):
            l_err, g = adapter.loss_grad(x[idx], y[idx], rng)
            g = feedback_step(g, l_err, alpha, l_comp, cfg.feedback_mode)
            if adam is None:
                params = sgd_step(params, g, cfg.learning_rate)
            else:
                adam, params = adam_step(adam, params, g, cfg.learning_rate)
            adapter.set(params)

        train_scores, mis, key = probe_train()
        for name, (md, ml) in mis.items():
            trace.add(s + 1, name, md, ml)
        test_scores = adapter.scores(test.features)
        rec = EpochRecord(
            epoch=s + 1,
            alpha=alpha,
            train_loss=adapter.loss(y, train_scores),
            comp_loss=l_comp,
            train_metric=_metric(cfg, adapter, y, train_scores),
            test_metric=_metric(cfg, adapter, test.labels, test_scores),
            mi=dict(mis),
        )
        if val is not None:
            rec.val_metric = _metric(cfg, adapter, val.labels, adapter.scores(val.features))
        records.append(rec)
        if on_epoch is not None:
            on_epoch(rec)

        if cfg.early_stop_patience is not None:
            monitor = rec.val_metric if val is not None else rec.test_metric
            if monitor > best_monitor:
                best_monitor, since_best = monitor, 0
            else:
                since_best += 1
                if since_best >= cfg.early_stop_patience:
                    break

    return FitResult(model, records, trace, steps_per_epoch)
