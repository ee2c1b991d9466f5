"""Experiment registry, claim rows, configuration and result files."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import tomli

from .. import __version__

FIXED_COLUMNS = ("experiment", "version", "seed", "claim", "measured", "target",
                 "tolerance", "margin", "passed")
KINDS = ("le", "ge", "gt", "abs", "rel", "true", "info")
MAX_SEED = 2**64


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    """Canonical text for a CSV cell."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if hasattr(x, "item"):
        return fmt(x.item())
    if isinstance(x, (list, tuple)):
        return " ".join(fmt(v) for v in x)
    return "" if x is None else str(x)


def evaluate(kind: str, measured: float, target: float, tol: float) -> tuple[bool, float]:
    """Pass flag and signed margin (positive means slack) for a claim kind."""
    m, t = float(measured), float(target)
    if kind == "info":
        return True, math.nan
    if math.isnan(m):
        return False, math.nan
    if kind == "le":
        margin = t + tol - m
        return margin >= 0, margin
    if kind == "ge":
        margin = m - (t - tol)
        return margin >= 0, margin
    if kind == "gt":
        margin = m - t
        return margin > 0, margin
    if kind == "abs":
        margin = tol - abs(m - t)
        return margin >= 0, margin
    if kind == "rel":
        margin = tol - abs(m / t - 1)
        return margin >= 0, margin
    if kind == "true":
        return m == t, 0.0 if m == t else -1.0
    raise ValueError(f"unknown claim kind {kind!r}")


@dataclass
class Recorder:
    """Collects claim rows for one experiment run."""

    experiment: "Experiment"
    seed: int
    rows: list = field(default_factory=list)

    def claim(self, claim: str, measured, target, tol: float = 0.0, kind: str = "le", **extra):
        if claim not in self.experiment.claims:
            raise KeyError(f"{claim!r} is not a declared claim of {self.experiment.id}")
        unknown = set(extra) - set(self.experiment.columns)
        if unknown:
            raise KeyError(f"undeclared columns {sorted(unknown)}")
        if kind == "true":
            measured, target = float(bool(measured)), float(bool(target))
        passed, margin = evaluate(kind, measured, target, tol)
        row = {"experiment": self.experiment.id, "version": __version__, "seed": self.seed,
               "claim": claim, "measured": float(measured), "target": float(target),
               "tolerance": float(tol), "margin": margin, "passed": bool(passed)}
        for c in self.experiment.columns:
            row[c] = extra.get(c)
        self.rows.append(row)
        return passed

    def info(self, claim: str, measured, **extra):
        return self.claim(claim, measured, math.nan, 0.0, "info", **extra)


@dataclass(frozen=True)
class Experiment:
    id: str
    module: str
    anchor: str
    claims: tuple[str, ...]
    defaults: dict
    columns: tuple[str, ...]
    fn: Callable
    description: str = ""
    validate: Callable | None = None

    @property
    def header(self) -> tuple[str, ...]:
        return FIXED_COLUMNS + self.columns


REGISTRY: dict[str, Experiment] = {}


def experiment(id: str, module: str, anchor: str, claims, columns=(), validate=None, **defaults):
    """Decorator registering ``fn(params, rec)`` under ``id``."""
    defaults.setdefault("seed", 0)

    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate experiment id {id!r}")
        doc = (fn.__doc__ or "").strip().splitlines()
        REGISTRY[id] = Experiment(id, module, anchor, tuple(claims), dict(defaults),
                                  tuple(columns), fn, doc[0] if doc else "", validate)
        return fn

    return deco


def _type_ok(default, value) -> bool:
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, int):
        return isinstance(value, int) and not isinstance(value, bool)
    if isinstance(default, float):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if isinstance(default, str):
        return isinstance(value, str)
    if isinstance(default, list):
        if not isinstance(value, list) or not value:
            return False
        proto = default[0] if default else 0.0
        return all(_type_ok(proto, v) for v in value)
    return False


def _coerce(default, value):
    if isinstance(default, float) and not isinstance(value, bool):
        return float(value)
    if isinstance(default, list) and default and isinstance(default[0], float):
        return [float(v) for v in value]
    return value


def resolve_params(exp: Experiment, overrides: dict | None = None, seed: int | None = None) -> dict:
    """Merge overrides into the defaults after checking them against the schema."""
    params = dict(exp.defaults)
    for key, value in (overrides or {}).items():
        if key not in exp.defaults:
            raise ConfigError(f"{exp.id}: unknown parameter {key!r}")
        if not _type_ok(exp.defaults[key], value):
            raise ConfigError(f"{exp.id}: parameter {key!r} expects "
                              f"{type(exp.defaults[key]).__name__}, got {value!r}")
        params[key] = _coerce(exp.defaults[key], value)
    if seed is not None:
        params["seed"] = seed
    for key in ("tol", "tolerance"):
        if key in params and not params[key] >= 0:
            raise ConfigError(f"{exp.id}: {key} must be non-negative")
    if not 0 <= params["seed"] < MAX_SEED:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    if exp.validate is not None:
        msg = exp.validate(params)
        if msg:
            raise ConfigError(f"{exp.id}: {msg}")
    return params


def load_config(path: str) -> dict:
    """Flat TOML key/value file; nested tables are rejected."""
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except (OSError, tomli.TOMLDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    for k, v in data.items():
        if isinstance(v, dict):
            raise ConfigError(f"config must be flat; {k!r} is a table")
    return data


@dataclass
class RunResult:
    experiment: Experiment
    params: dict
    rows: list
    runtime: float

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.experiment.header)
        for r in self.rows:
            w.writerow([fmt(r[c]) for c in self.experiment.header])
        return buf.getvalue()

    def summary(self) -> dict:
        claims = {}
        for r in self.rows:
            c = claims.setdefault(r["claim"], {"rows": 0, "passed": 0, "worst_margin": None})
            c["rows"] += 1
            c["passed"] += int(r["passed"])
            m = r["margin"]
            if not math.isnan(m) and (c["worst_margin"] is None or m < c["worst_margin"]):
                c["worst_margin"] = m
        return {"experiment": self.experiment.id, "version": __version__,
                "seed": self.params["seed"], "params": self.params,
                "anchor": self.experiment.anchor, "rows": len(self.rows),
                "passed": self.passed, "claims": claims,
                "runtime_seconds": round(self.runtime, 3)}

    def summary_json(self) -> str:
        return json.dumps(_finite(self.summary()), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def write(self, out_dir: str) -> tuple[str, str]:
        os.makedirs(out_dir, exist_ok=True)
        base = os.path.join(out_dir, self.experiment.id)
        with open(base + ".csv", "w", newline="") as fh:
            fh.write(self.csv_text())
        with open(base + ".json", "w") as fh:
            fh.write(self.summary_json())
        return base + ".csv", base + ".json"


def _finite(obj):
    """JSON-safe copy: non-finite floats become strings."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return fmt(obj)
    return obj


def run_experiment(exp_id: str, overrides: dict | None = None, seed: int | None = None) -> RunResult:
    if exp_id not in REGISTRY:
        raise ConfigError(f"unknown experiment {exp_id!r}")
    exp = REGISTRY[exp_id]
    params = resolve_params(exp, overrides, seed)
    rec = Recorder(exp, params["seed"])
    t0 = time.perf_counter()
    exp.fn(params, rec)
    return RunResult(exp, params, rec.rows, time.perf_counter() - t0)
