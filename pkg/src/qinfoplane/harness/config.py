"""Experiment configuration files.

A config is an INI-style text file: ``[section]`` headers, ``key = value``
lines, ``#`` or ``;`` comments. Lists are comma separated; integer lists also
accept inclusive ranges such as ``0-9``. See ``configs/GRAMMAR.md`` for every
key.
"""
import configparser
import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from ..errors import InvalidArgumentError, ParseError
from ..infoplane import BinningConfig, ProbeKind
from ..train import AlphaMode, Task, TrainConfig

ALPHA_WARN = 20.0


class Experiment(enum.Enum):
    SYNTHETIC_CLASSIFICATION = "synthetic_classification"
    TABULAR_CLASSIFICATION = "tabular_classification"
    HYBRID_REGRESSION = "hybrid_regression"
    CLASSICAL_NN = "classical_nn"


MODEL_KIND = {
    Experiment.SYNTHETIC_CLASSIFICATION: "pqc",
    Experiment.TABULAR_CLASSIFICATION: "pqc",
    Experiment.HYBRID_REGRESSION: "hybrid",
    Experiment.CLASSICAL_NN: "dense",
}


@dataclass
class DataConfig:
    source: str = "clouds"  # clouds | regression | csv
    path: Optional[str] = None
    label_column: str = "label"
    categorical: dict = field(default_factory=dict)
    drop: list = field(default_factory=list)
    seed: int = 0
    fractions: tuple = (0.8, 0.2)
    preprocess: list = field(default_factory=lambda: ["minmax"])
    feature_scale: float = math.pi
    n_per_cloud: int = 200
    sigma: float = 1.0
    positive_offsets: tuple = (2.0, 6.0)
    n_samples: int = 400
    n_features: int = 6
    noise: float = 0.05


@dataclass
class ModelConfig:
    n_qubits: int = 4
    reupload_layers: int = 3
    variational_layers: int = 2
    feature_assignment: Optional[list] = None
    readout_qubit: int = 1
    init_low: float = 0.0
    init_high: float = 1.0
    hidden: tuple = (36, 36)
    dropout: float = 0.5
    vqc_layers: int = 3
    basis_change: bool = True


@dataclass
class ExperimentConfig:
    experiment: Experiment
    name: str
    data: DataConfig
    model: ModelConfig
    train: TrainConfig
    alphas: list
    seeds: list
    alpha_mode: AlphaMode = AlphaMode.STATIC
    s_max: int = 30
    binning: BinningConfig = field(default_factory=BinningConfig)
    outdir: str = "runs/out"
    source_path: Optional[str] = None

    @property
    def model_kind(self):
        return MODEL_KIND[self.experiment]

    def with_seeds(self, seeds):
        return replace(self, seeds=list(seeds))

    def with_outdir(self, outdir):
        return replace(self, outdir=str(outdir))


# -- value parsers ------------------------------------------------------------


def _floats(text):
    return [_float(t) for t in text.split(",") if t.strip()]


def _float(text):
    t = text.strip().lower()
    if t in ("pi", "π"):
        return math.pi
    if t.endswith("*pi"):
        return float(t[:-3]) * math.pi
    return float(t)


def _ints(text):
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if "-" in tok:
            lo, hi = tok.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(tok))
    return out


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _preprocess(text):
    steps = []
    for tok in (t.strip().lower() for t in text.split(",")):
        if not tok:
            continue
        if tok == "minmax":
            steps.append("minmax")
        elif tok.startswith("pca:"):
            steps.append(("pca", int(tok[4:])))
        else:
            raise ValueError(f"unknown preprocessing step {tok!r}")
    return steps


def _categorical(text):
    """``col`` or ``col:A|B|C`` entries, comma separated."""
    out = {}
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        col, _, levels = tok.partition(":")
        out[col.strip()] = [lv.strip() for lv in levels.split("|")] if levels else None
    return out


_DATA_KEYS = {
    "source": str, "path": str, "label_column": str, "categorical": _categorical,
    "drop": lambda t: [c.strip() for c in t.split(",") if c.strip()],
    "seed": int, "fractions": lambda t: tuple(_floats(t)), "preprocess": _preprocess,
    "feature_scale": _float, "n_per_cloud": int, "sigma": _float,
    "positive_offsets": lambda t: tuple(_floats(t)), "n_samples": int,
    "n_features": int, "noise": _float,
}
_MODEL_KEYS = {
    "n_qubits": int, "reupload_layers": int, "variational_layers": int,
    "feature_assignment": _ints, "readout_qubit": int, "init_low": _float,
    "init_high": _float, "hidden": lambda t: tuple(_ints(t)), "dropout": _float,
    "vqc_layers": int, "basis_change": _bool,
}
_TRAIN_KEYS = {
    "learning_rate": _float, "epochs": int, "batch_size": int, "optimizer": str,
    "feedback_mode": str, "task": str, "metric": str,
    "early_stop_patience": lambda t: None if t.strip().lower() in ("", "none") else int(t),
    "probes": lambda t: tuple(p.strip().upper() for p in t.split(",") if p.strip()),
    "i_star": lambda t: None if t.strip().lower() in ("", "auto") else _float(t),
}


def _section(cp, name, keys, path):
    if not cp.has_section(name):
        return {}
    out = {}
    for key, raw in cp.items(name):
        if key not in keys:
            raise ParseError(f"{path}: unknown key [{name}] {key}")
        try:
            out[key] = keys[key](raw)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{path}: bad value for [{name}] {key}: {exc}") from None
    return out


def parse_config(text, path="<string>"):
    cp = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), empty_lines_in_values=False
    )
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ParseError(f"{path}: {exc}") from None
    known = {"experiment", "data", "model", "train", "sweep", "binning"}
    extra = set(cp.sections()) - known
    if extra:
        raise ParseError(f"{path}: unknown section(s) {sorted(extra)}")
    if not cp.has_section("experiment") or "kind" not in cp["experiment"]:
        raise ParseError(f"{path}: [experiment] kind is required")
    exp = cp["experiment"]
    try:
        kind = Experiment(exp["kind"].strip().lower())
    except ValueError:
        raise ParseError(f"{path}: unknown experiment kind {exp['kind']!r}") from None
    for key in exp:
        if key not in ("kind", "name", "outdir"):
            raise ParseError(f"{path}: unknown key [experiment] {key}")

    data = DataConfig(**_section(cp, "data", _DATA_KEYS, path))
    model = ModelConfig(**_section(cp, "model", _MODEL_KEYS, path))
    tkw = _section(cp, "train", _TRAIN_KEYS, path)
    tkw.setdefault("task", "regression" if kind is Experiment.HYBRID_REGRESSION else "classification")
    try:
        train = TrainConfig(**tkw)
    except ValueError as exc:
        raise ParseError(f"{path}: [train] {exc}") from None

    sweep = _section(cp, "sweep", {
        "alphas": _floats, "seeds": _ints, "alpha_mode": str, "s_max": int,
    }, path)
    binning = BinningConfig(**_section(cp, "binning", {"m_scalar": int, "b_component": int}, path))
    cfg = ExperimentConfig(
        experiment=kind,
        name=exp.get("name", kind.value).strip(),
        data=data,
        model=model,
        train=train,
        alphas=sweep.get("alphas", [0.0]),
        seeds=sweep.get("seeds", [0]),
        alpha_mode=AlphaMode(sweep.get("alpha_mode", "static").strip().lower()),
        s_max=sweep.get("s_max", 30),
        binning=binning,
        outdir=exp.get("outdir", f"runs/{kind.value}").strip(),
        source_path=str(path),
    )
    validate(cfg)
    return cfg


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from None
    cfg = parse_config(text, path)
    # relative dataset paths resolve against the config file
    if cfg.data.path and not Path(cfg.data.path).is_absolute():
        cfg.data.path = str((path.parent / cfg.data.path).resolve())
    return cfg


def validate(cfg):
    if not cfg.alphas:
        raise InvalidArgumentError("at least one alpha value is required")
    if not cfg.seeds:
        raise InvalidArgumentError("at least one seed is required")
    if any(a < 0 for a in cfg.alphas):
        raise InvalidArgumentError("alpha values must be nonnegative")
    d, m, kind = cfg.data, cfg.model, cfg.model_kind
    if d.source not in ("clouds", "regression", "csv"):
        raise InvalidArgumentError(f"unknown data source {d.source!r}")
    if d.source == "csv" and not d.path:
        raise InvalidArgumentError("csv data needs a path")
    if len(d.fractions) not in (2, 3):
        raise InvalidArgumentError("fractions are train,test or train,val,test")
    regression = cfg.train.task is Task.REGRESSION
    if (cfg.experiment is Experiment.HYBRID_REGRESSION) != regression:
        raise InvalidArgumentError("only the hybrid regression experiment uses the regression task")
    if cfg.experiment is Experiment.SYNTHETIC_CLASSIFICATION and d.source != "clouds":
        raise InvalidArgumentError("the synthetic experiment uses the clouds source")
    if kind == "pqc" and m.feature_assignment is not None:
        if any(not 1 <= q <= m.n_qubits for q in m.feature_assignment):
            raise InvalidArgumentError("feature_assignment names a qubit outside the register")
    if kind != "pqc" and cfg.train.probes != (ProbeKind.T_1_Z,):
        raise InvalidArgumentError("state probes are only available for the PQC model")
    return cfg
