"""Checkpoint files: a flat list of named float64 arrays.

Binary layout (all little-endian)::

    b"QIPCKPT\\0"  uint32 version  uint32 n_arrays
    per array: uint16 name_len, name (utf-8), uint8 ndim, uint64 * ndim shape,
               float64 * prod(shape) values (C order)

CSV layout: a ``# qinfoplane-checkpoint version=1`` line, the header
``name,shape,values...``, then one row per array with the shape written as
``3x42`` (empty for scalars) followed by the values.
"""
import csv
import struct

import numpy as np

from ..errors import ParseError
from ..qsim.core import CircuitSpec
from .dense import DenseNet
from .hybrid import HybridModel
from .pqc import PqcModel

MAGIC = b"QIPCKPT\0"
VERSION = 1
CSV_BANNER = f"# qinfoplane-checkpoint version={VERSION}"


def save_checkpoint(path, arrays, fmt="binary"):
    if fmt == "binary":
        _write_binary(path, arrays)
    elif fmt == "csv":
        _write_csv(path, arrays)
    else:
        raise ValueError(f"unknown checkpoint format {fmt!r}")


def load_checkpoint(path):
    """Read either format; the file's first bytes decide which."""
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return _read_binary(path)
    return _read_csv(path)


def _write_binary(path, arrays):
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, len(arrays)))
        for name, arr in arrays.items():
            a = np.asarray(arr, dtype="<f8")
            raw = name.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<B", a.ndim))
            fh.write(struct.pack(f"<{a.ndim}Q", *a.shape))
            fh.write(np.ascontiguousarray(a).tobytes())


def _read_binary(path):
    with open(path, "rb") as fh:
        data = fh.read()
    off = len(MAGIC)
    version, count = struct.unpack_from("<II", data, off)
    off += 8
    if version != VERSION:
        raise ParseError(f"{path}: unsupported checkpoint version {version}")
    out = {}
    for _ in range(count):
        (nlen,) = struct.unpack_from("<H", data, off)
        off += 2
        name = data[off : off + nlen].decode("utf-8")
        off += nlen
        (ndim,) = struct.unpack_from("<B", data, off)
        off += 1
        shape = struct.unpack_from(f"<{ndim}Q", data, off)
        off += 8 * ndim
        size = int(np.prod(shape)) if ndim else 1
        arr = np.frombuffer(data, dtype="<f8", count=size, offset=off)
        off += 8 * size
        out[name] = arr.astype(np.float64).reshape(shape)
    return out


def _write_csv(path, arrays):
    with open(path, "w", newline="") as fh:
        fh.write(CSV_BANNER + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "shape", "values..."])
        for name, arr in arrays.items():
            a = np.asarray(arr, dtype=np.float64)
            shape = "x".join(str(s) for s in a.shape)
            w.writerow([name, shape] + [repr(float(v)) for v in a.ravel()])


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        banner = fh.readline().strip()
        if not banner.startswith("# qinfoplane-checkpoint"):
            raise ParseError(f"{path}: not a checkpoint file", row=1)
        if banner != CSV_BANNER:
            raise ParseError(f"{path}: unsupported checkpoint header {banner!r}", row=1)
        reader = csv.reader(fh)
        next(reader)
        out = {}
        for rowno, row in enumerate(reader, start=3):
            if not row:
                continue
            name, shape_s, *vals = row
            shape = tuple(int(s) for s in shape_s.split("x")) if shape_s else ()
            try:
                values = np.array([float(v) for v in vals], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"{path}: bad value in row {rowno}", row=rowno) from exc
            out[name] = values.reshape(shape)
    return out


# -- model <-> named arrays ---------------------------------------------------


def _dense_arrays(net, prefix=""):
    out = {
        f"{prefix}layer_dims": np.array(net.layer_dims, dtype=np.float64),
        f"{prefix}dropout_rate": np.array(net.dropout_rate),
    }
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        out[f"{prefix}W{i}"] = w
        out[f"{prefix}b{i}"] = b
    return out


def _dense_from(arrays, prefix, activation):
    dims = [int(d) for d in arrays[f"{prefix}layer_dims"]]
    n = len(dims) - 1
    return DenseNet(
        dims,
        [arrays[f"{prefix}W{i}"].copy() for i in range(n)],
        [arrays[f"{prefix}b{i}"].copy() for i in range(n)],
        float(arrays[f"{prefix}dropout_rate"]),
        activation,
    )


_ACT_CODES = {"sigmoid": 0.0, "identity": 1.0, "relu": 2.0}
_ACT_NAMES = {v: k for k, v in _ACT_CODES.items()}


def model_arrays(model):
    """Named parameter arrays for any of the three model families."""
    if isinstance(model, PqcModel):
        s = model.spec
        return {
            "pqc.circuit": np.array(
                [s.n_qubits, s.n_reupload_layers, s.n_variational_layers, model.readout_qubit],
                dtype=np.float64,
            ),
            "pqc.feature_assignment": np.array(s.feature_assignment, dtype=np.float64),
            "pqc.theta": model.params,
        }
    if isinstance(model, HybridModel):
        out = _dense_arrays(model.front, "front.")
        out["vqc.phi"] = model.phi
        out["vqc.basis_change"] = np.array(float(model.basis_change))
        out.update(_dense_arrays(model.head, "head."))
        return out
    if isinstance(model, DenseNet):
        out = _dense_arrays(model, "dense.")
        out["dense.output_activation"] = np.array(_ACT_CODES[model.output_activation])
        return out
    raise TypeError(f"unsupported model type {type(model).__name__}")


def model_from_arrays(arrays):
    if "pqc.theta" in arrays:
        n, r, v, ro = (int(c) for c in arrays["pqc.circuit"])
        spec = CircuitSpec(n, r, v, [int(q) for q in arrays["pqc.feature_assignment"]])
        return PqcModel(spec, arrays["pqc.theta"].copy(), ro)
    if "vqc.phi" in arrays:
        return HybridModel(
            _dense_from(arrays, "front.", "relu"),
            arrays["vqc.phi"].copy(),
            _dense_from(arrays, "head.", "identity"),
            bool(arrays["vqc.basis_change"]),
        )
    if "dense.layer_dims" in arrays:
        act = _ACT_NAMES[float(arrays["dense.output_activation"])]
        return _dense_from(arrays, "dense.", act)
    raise ParseError("checkpoint holds no known model")
