"""Experiment configuration: defaults, INI files and model strings.

Config files are INI files read with :mod:`configparser`.  Keys in a
``[run]`` section apply to every experiment; keys in a section named after
the experiment (``[table1]``, ``[table2]``, ...) override them, and command
line flags override both.  Keys use the flag names with ``-`` replaced by
``_``.  Lists are comma separated::

    [run]
    seed = 42
    workers = 4

    [table1]
    replicates = 300
    n = 500, 1000
    ranges = 0.3

Model strings name a family and its parameters, variance first:

* ``gc:sigma2,delta,lam,gamma``
* ``mt:sigma2,nu,alpha``
* ``gw:sigma2,mu,kappa,beta`` (``beta`` may be ``auto`` in ``equiv`` to
  solve for the compatible support)
* ``sqexp:sigma2,alpha``
"""

import configparser
from dataclasses import dataclass, field, fields, replace
import os
from typing import Optional, Tuple

from ..covmodels import (Family, generalized_cauchy, generalized_wendland,
                         matern, squared_exponential)
from ..errors import ValidationError

EXPERIMENTS = ("table1", "table2", "equiv", "simulate", "fit", "predict")
WORKERS_ENV = "GENCAUCHY_WORKERS"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = 20240607
    replicates: int = 500
    n: Tuple[int, ...] = (500, 1000, 2000)
    ranges: Tuple[float, ...] = (0.3, 0.6, 0.9)
    pool_size: int = 4000
    dim: int = 1
    delta: float = 0.75
    lam: float = 1.5
    sigma2: float = 1.0
    deltas: Tuple[float, ...] = (1.2, 1.8)
    supports: Tuple[float, ...] = (0.5, 1.0, 2.0)
    site: Tuple[float, ...] = (0.26, 0.48)
    interval_eps: float = 1e-12
    interval_factor: float = 10.0
    level: float = 0.95
    interval: Tuple[float, ...] = ()
    true: Optional[str] = None
    working: Optional[str] = None
    model: Optional[str] = None
    paired: Optional[str] = None
    data: Optional[str] = None
    out: Optional[str] = None
    workers: int = 1
    extra: dict = field(default_factory=dict, compare=False)


TABLE1_DEFAULTS = dict(replicates=500, n=(500, 1000, 2000), ranges=(0.3, 0.6, 0.9),
                       pool_size=4000, dim=1, delta=0.75, lam=1.5)
TABLE2_DEFAULTS = dict(replicates=100, n=(50, 100, 500, 1000), ranges=(0.3, 0.6, 0.9),
                       pool_size=5000, dim=2, lam=5.0)
SIMULATE_DEFAULTS = dict(n=(100,), pool_size=4000, dim=1)
DEFAULTS = {"table1": TABLE1_DEFAULTS, "table2": TABLE2_DEFAULTS, "simulate": SIMULATE_DEFAULTS}

_TUPLE_INT = {"n"}
_TUPLE_FLOAT = {"ranges", "deltas", "supports", "site", "interval"}
_INT = {"seed", "replicates", "pool_size", "dim", "workers"}
_FLOAT = {"delta", "lam", "sigma2", "interval_eps", "interval_factor", "level"}


def _coerce(key, value):
    if value is None:
        return None
    try:
        if key in _TUPLE_INT:
            return tuple(int(v) for v in str(value).replace(" ", "").split(",") if v) \
                if not isinstance(value, (tuple, list)) else tuple(int(v) for v in value)
        if key in _TUPLE_FLOAT:
            return tuple(float(v) for v in str(value).replace(" ", "").split(",") if v) \
                if not isinstance(value, (tuple, list)) else tuple(float(v) for v in value)
        if key in _INT:
            return int(value)
        if key in _FLOAT:
            return float(value)
    except ValueError as exc:
        raise ValidationError(f"bad value for {key}: {value!r}") from exc
    return value


def default_workers():
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ValidationError(f"{WORKERS_ENV} must be an integer") from exc


def read_config_file(path, experiment):
    """Settings from an INI file: ``[run]`` merged with ``[<experiment>]``."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc.strerror}") from exc
    except configparser.Error as exc:
        raise ValidationError(f"malformed config file {path}: {exc}") from exc
    known = {f.name for f in fields(ExperimentConfig)} - {"extra", "experiment"}
    out = {}
    for section in ("run", experiment):
        if parser.has_section(section):
            for key, value in parser.items(section):
                key = key.replace("-", "_")
                if key not in known:
                    raise ValidationError(f"unknown config key {key!r} in [{section}]")
                out[key] = value
    return out


def build_config(experiment, file_settings=None, cli_settings=None):
    """Merge defaults, config-file settings and flags (flags win), then validate."""
    if experiment not in EXPERIMENTS:
        raise ValidationError(f"unknown experiment {experiment!r}")
    merged = dict(DEFAULTS.get(experiment, {}))
    merged["workers"] = default_workers()
    for source in (file_settings or {}, cli_settings or {}):
        for key, value in source.items():
            if value is not None:
                merged[key] = _coerce(key, value)
    cfg = replace(ExperimentConfig(experiment), **merged)
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if cfg.replicates < 1:
        raise ValidationError("replicates must be at least 1")
    if not cfg.n or min(cfg.n) < 1:
        raise ValidationError("sample sizes must be at least 1")
    if cfg.experiment in ("table1", "table2", "simulate") and max(cfg.n) > cfg.pool_size:
        raise ValidationError("sample sizes cannot exceed the pool size")
    if not cfg.ranges or min(cfg.ranges) <= 0:
        raise ValidationError("practical ranges must be positive")
    if cfg.dim not in (1, 2, 3):
        raise ValidationError("dim must be 1, 2 or 3")
    if cfg.workers < 1:
        raise ValidationError("workers must be at least 1")
    if not 0 < cfg.level < 1:
        raise ValidationError("level must be in (0, 1)")
    if cfg.experiment == "table1":
        generalized_cauchy(cfg.delta, cfg.lam, 1.0, cfg.sigma2, dim=cfg.dim)
    if cfg.experiment == "table2":
        for delta in cfg.deltas:
            kappa = (delta - 1) / 2
            if kappa < 0:
                raise ValidationError("table2 needs delta >= 1")
            generalized_cauchy(delta, cfg.lam, 1.0, cfg.sigma2, dim=cfg.dim)
            generalized_wendland(2 + kappa, kappa, 1.0, dim=cfg.dim)
        if len(cfg.site) != cfg.dim:
            raise ValidationError("prediction site dimension must match dim")
    if cfg.interval and not (len(cfg.interval) == 2 and 0 < cfg.interval[0] <= cfg.interval[1]):
        raise ValidationError("interval must be lower,upper with 0 < lower <= upper")
    if cfg.experiment == "equiv" and (cfg.true is None or cfg.working is None):
        raise ValidationError("equiv needs --true and --working models")
    if cfg.experiment == "simulate" and cfg.model is None:
        raise ValidationError("simulate needs --model")
    if cfg.experiment in ("fit", "predict") and cfg.data is None:
        raise ValidationError(f"{cfg.experiment} needs --data")
    if cfg.experiment == "predict" and (cfg.true is None or cfg.working is None):
        raise ValidationError("predict needs --true and --working models")


_ARITY = {"gc": 4, "mt": 3, "gw": 4, "sqexp": 2}


def parse_model(text, dim=1, allow_auto=False, label="model"):
    """Parse a model string; returns ``(model, auto_support)``.

    With ``allow_auto`` a GW string may give ``auto`` as its support, in
    which case the model is returned as None and ``auto_support`` holds
    ``(sigma2, mu, kappa)``.
    """
    try:
        fam, _, body = text.partition(":")
        fam = fam.strip().lower()
        parts = [p.strip() for p in body.split(",")]
        if fam not in _ARITY or len(parts) != _ARITY[fam]:
            raise ValueError
        if allow_auto and fam == "gw" and parts[3].lower() == "auto":
            s2, mu, kappa = (float(p) for p in parts[:3])
            return None, (s2, mu, kappa)
        vals = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"{label}: cannot parse {text!r}; expected e.g. gc:sigma2,delta,lam,gamma") from None
    try:
        if fam == "gc":
            s2, delta, lam, gamma = vals
            return generalized_cauchy(delta, lam, gamma, s2, dim=dim), None
        if fam == "mt":
            s2, nu, alpha = vals
            return matern(nu, alpha, s2, dim=dim), None
        if fam == "gw":
            s2, mu, kappa, beta = vals
            return generalized_wendland(mu, kappa, beta, s2, dim=dim), None
        s2, alpha = vals
        return squared_exponential(alpha, s2, dim=dim), None
    except ValidationError as exc:
        raise ValidationError(f"{label}: {exc}") from None


def format_model(model):
    """Inverse of :func:`parse_model`."""
    f = model.family
    if f is Family.GC:
        vals = (model.variance, model.shape1, model.shape2, model.scale)
    elif f is Family.MT:
        vals = (model.variance, model.shape1, model.scale)
    elif f is Family.GW:
        vals = (model.variance, model.shape2, model.shape1, model.scale)
    else:
        vals = (model.variance, model.scale)
    return f.value.lower() + ":" + ",".join(repr(float(v)) for v in vals)
