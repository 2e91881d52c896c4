"""Binning-based mutual information estimates for circuit read-outs.

All entropies are plug-in estimates in bits. A representation is reduced to
one discrete symbol per data point by binning each real component, and the
information on the data is the entropy of those symbols when every input is
distinct (the encoding is deterministic, so H(Z, X) = H(X)).
"""
import csv
import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidValueError
from .qsim.info import expect_z_states, qubit_marginals, tomo_vec_states

DIAG_RANGE = (0.0, 1.0)
OFFDIAG_RANGE = (-0.5, 0.5)
TRACE_HEADER = ["epoch", "probe", "mi_data_bits", "mi_label_bits"]


class ProbeKind(enum.Enum):
    T_ALL = "T_ALL"
    T_1 = "T_1"
    T_1_Z = "T_1_Z"


@dataclass(frozen=True)
class BinningConfig:
    m_scalar: int = 6
    b_component: int = 6

    def __post_init__(self):
        if self.m_scalar < 2 or self.b_component < 2:
            raise InvalidArgumentError("bin counts must be at least 2")


def bin_array(values, b, lo, hi):
    """Vectorised bin index in 1..b for each entry; out-of-range values clamp."""
    values = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise InvalidValueError("cannot bin non-finite values")
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    idx = 1 + np.floor(b * (values - lo) / (hi - lo))
    return np.clip(idx, 1, b).astype(np.int64)


def bin_scalar(t, m, lo, hi):
    if not lo < hi:
        raise InvalidArgumentError("need lo < hi")
    if m < 2:
        raise InvalidArgumentError("need at least two bins")
    return int(bin_array(np.array([t]), m, lo, hi)[0])


def bin_vector(t, b, ranges):
    t = np.asarray(t, dtype=np.float64).reshape(-1)
    ranges = np.asarray(ranges, dtype=np.float64).reshape(-1, 2)
    if ranges.shape[0] != t.shape[0]:
        raise InvalidArgumentError("one (lo, hi) range per component is required")
    return tuple(int(v) for v in bin_array(t, b, ranges[:, 0], ranges[:, 1]))


def tomo_ranges(d):
    """Per-component (lo, hi) for a tomography vector of a d x d density matrix."""
    lo = np.full(d * d - 1, OFFDIAG_RANGE[0])
    hi = np.full(d * d - 1, OFFDIAG_RANGE[1])
    lo[: d - 1], hi[: d - 1] = DIAG_RANGE
    return lo, hi


def entropy(counts):
    counts = np.asarray(counts, dtype=np.float64).reshape(-1)
    if np.any(counts < 0):
        raise InvalidArgumentError("counts must be nonnegative")
    total = counts.sum()
    if total <= 0:
        raise InvalidArgumentError("counts must not all be zero")
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def symbol_codes(symbols):
    """Map any sequence of hashable symbols (or rows of an array) to int codes."""
    arr = np.asarray(symbols)
    if arr.dtype == object or arr.ndim > 2:
        table = {}
        keys = (tuple(np.ravel(s).tolist()) for s in symbols)
        return np.array([table.setdefault(k, len(table)) for k in keys], dtype=np.int64)
    if arr.ndim == 2:
        _, codes = np.unique(arr, axis=0, return_inverse=True)
    else:
        _, codes = np.unique(arr, return_inverse=True)
    return codes.reshape(-1)


def _entropy_of(codes):
    return entropy(np.bincount(codes))


def mi_deterministic(bin_assignments):
    """I(Z:X) = H(Z) for a deterministic encoding of distinct inputs."""
    if len(bin_assignments) == 0:
        raise InvalidArgumentError("empty dataset")
    return _entropy_of(symbol_codes(bin_assignments))


def mi_joint(z, y):
    """Plug-in H(Z) + H(Y) - H(Z, Y)."""
    if len(z) != len(y):
        raise InvalidArgumentError("z and y must have the same length")
    if len(z) == 0:
        raise InvalidArgumentError("empty dataset")
    zc = symbol_codes(z)
    yc = symbol_codes(y)
    joint = zc * (yc.max() + 1) + yc
    val = _entropy_of(zc) + _entropy_of(yc) - _entropy_of(symbol_codes(joint))
    return max(val, 0.0)


def mi_data(z, x=None):
    """I(Z:X), using the H(Z) shortcut unless ``x`` contains duplicate rows."""
    if x is not None and has_duplicates(x):
        return mi_joint(z, x)
    return mi_deterministic(z)


def has_duplicates(x):
    x = np.asarray(x)
    if x.ndim == 1:
        return np.unique(x).shape[0] < x.shape[0]
    return np.unique(x, axis=0).shape[0] < x.shape[0]


def _stack_states(states):
    if isinstance(states, np.ndarray):
        return np.atleast_2d(states)
    return np.stack([s.amplitudes for s in states])


def probe_symbols(states, kind, cfg=BinningConfig(), n_qubits=None):
    """Binned representation (N, M) of the final states for one probe."""
    amps = _stack_states(states)
    d = amps.shape[1]
    n = n_qubits or d.bit_length() - 1
    kind = ProbeKind(kind)
    if kind is ProbeKind.T_1_Z:
        z = expect_z_states(amps, n, 1)
        return bin_array(z, cfg.m_scalar, -1.0, 1.0)[:, None]
    if kind is ProbeKind.T_1:
        rho = qubit_marginals(amps, n, 1)
        t = np.stack([rho[:, 0, 0].real, rho[:, 0, 1].real, rho[:, 0, 1].imag], axis=1)
        lo, hi = tomo_ranges(2)
        return bin_array(t, cfg.b_component, lo, hi)
    lo, hi = tomo_ranges(d)
    return bin_array(tomo_vec_states(amps), cfg.b_component, lo, hi)


def probe(states, kind, labels, cfg=BinningConfig(), features=None):
    """(I(T:X), I(T:Y)) in bits for the chosen probe over a dataset."""
    symbols = probe_symbols(states, kind, cfg)
    return mi_data(symbols, features), mi_joint(symbols, labels)


@dataclass
class TraceRecord:
    epoch: int
    probe: str
    mi_data: float
    mi_label: float


@dataclass
class InfoPlaneTrace:
    records: list = field(default_factory=list)

    def add(self, epoch, probe, mi_data, mi_label):
        name = probe.value if isinstance(probe, ProbeKind) else str(probe)
        self.records.append(TraceRecord(int(epoch), name, float(mi_data), float(mi_label)))

    def probes(self):
        return list(dict.fromkeys(r.probe for r in self.records))

    def series(self, probe):
        """(epochs, mi_data, mi_label) arrays for one probe, in record order."""
        name = probe.value if isinstance(probe, ProbeKind) else str(probe)
        rows = [r for r in self.records if r.probe == name]
        return (
            np.array([r.epoch for r in rows]),
            np.array([r.mi_data for r in rows]),
            np.array([r.mi_label for r in rows]),
        )

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_HEADER)
            for r in self.records:
                w.writerow([r.epoch, r.probe, repr(r.mi_data), repr(r.mi_label)])

    @classmethod
    def read_csv(cls, path):
        trace = cls()
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != TRACE_HEADER:
                raise InvalidArgumentError(f"{path}: unexpected header {reader.fieldnames}")
            for row in reader:
                trace.add(
                    row["epoch"], row["probe"], float(row["mi_data_bits"]),
                    float(row["mi_label_bits"]),
                )
        return trace
