"""JSON formats for networks and verification problems, plus random networks.

Network file::

    {"layers": [{"weights": [[row0...], [row1...]], "bias": [...]}, ...]}

``weights`` of layer ``k`` is row-major with shape ``(h_{k+1}, h_k)``.

Problem file: see ``README.md``; every numeric field has a default that
matches the shallow Cauchy benchmark (cutoff 50, 10001 grid points, ``h = 0.05``,
``M = 5000``, 10^4 Monte-Carlo samples).
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cf import FrequencyGrid, cf_from_spec
from .errors import (
    CFVerifyError,
    ConfigError,
    DimensionChainError,
    ParseError,
    RangeError,
    SchemaError,
    StructureError,
)
from .hilbert import HilbertParams
from .oracle import make_rng
from .propagation import AffineLayer, Network
from .verification import HalfSpace, VerificationProblem

__all__ = [
    "DEFAULT_NUMERICS",
    "ProblemConfig",
    "network_from_dict",
    "network_to_dict",
    "load_network",
    "save_network",
    "random_network",
    "load_config",
    "config_from_dict",
    "load_problem",
]

DEFAULT_NUMERICS = {
    "t_max": 50.0,
    "n_grid": 10001,
    "ht_step": 0.05,
    "ht_terms": 5000,
}
DEFAULT_MC_SAMPLES = 10_000


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _matrix(value, what):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{what} must be numeric") from exc
    return arr


def network_from_dict(data) -> Network:
    if not isinstance(data, dict) or not isinstance(data.get("layers"), list):
        raise SchemaError("network needs a 'layers' list")
    if not data["layers"]:
        raise SchemaError("network needs at least one layer")
    layers = []
    for k, rec in enumerate(data["layers"]):
        if not isinstance(rec, dict) or "weights" not in rec or "bias" not in rec:
            raise SchemaError(f"layer {k} needs 'weights' and 'bias'")
        w = _matrix(rec["weights"], f"layer {k} weights")
        b = _matrix(rec["bias"], f"layer {k} bias")
        if w.ndim != 2 or b.ndim != 1:
            raise DimensionChainError(k, "weights must be 2-D and bias 1-D")
        try:
            layers.append(AffineLayer(w, b))
        except StructureError as exc:
            raise DimensionChainError(k, str(exc)) from exc
    return Network(tuple(layers))


def network_to_dict(net: Network) -> dict:
    return {
        "layers": [
            {"weights": l.weights.tolist(), "bias": l.bias.tolist()} for l in net.layers
        ]
    }


def load_network(path) -> Network:
    """Read and validate a network file.

    Raises
    ------
    ParseError, SchemaError, DimensionChainError
    """
    return network_from_dict(_read_json(path))


def save_network(net: Network, path):
    """Write the canonical form (2-space indent, trailing newline)."""
    with open(path, "w") as fh:
        json.dump(network_to_dict(net), fh, indent=2)
        fh.write("\n")


def random_network(widths, seed) -> Network:
    """Weights and biases i.i.d. ``U[-1, 1]`` from a seeded Philox stream."""
    widths = [int(w) for w in widths]
    if len(widths) < 2 or min(widths) < 1:
        raise StructureError(f"need at least two positive widths, got {widths}")
    rng = make_rng(seed)
    layers = []
    for h_in, h_out in zip(widths[:-1], widths[1:]):
        w = rng.uniform(-1.0, 1.0, size=(h_out, h_in))
        b = rng.uniform(-1.0, 1.0, size=h_out)
        layers.append(AffineLayer(w, b))
    return Network(tuple(layers))


@dataclass(frozen=True)
class ProblemConfig:
    """Parsed problem file; :meth:`to_problem` builds the verification problem."""

    network: Network
    inputs: tuple
    safety: tuple
    risk: float
    numerics: dict = field(default_factory=lambda: dict(DEFAULT_NUMERICS))
    seed: int = 0
    mc_samples: int = DEFAULT_MC_SAMPLES
    network_source: dict = field(default_factory=dict)

    @property
    def grid(self) -> FrequencyGrid:
        return FrequencyGrid(self.numerics["t_max"], self.numerics["n_grid"])

    @property
    def hilbert(self) -> HilbertParams:
        return HilbertParams(self.numerics["ht_step"], self.numerics["ht_terms"])

    def to_problem(self) -> VerificationProblem:
        return VerificationProblem(
            self.network, self.inputs, self.safety, self.risk, self.grid, self.hilbert
        )

    def with_overrides(self, **overrides) -> "ProblemConfig":
        """Replace numerics/risk/seed/mc_samples; ``None`` values are ignored."""
        numerics = dict(self.numerics)
        top = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key in numerics:
                numerics[key] = value
            elif key in ("risk", "seed", "mc_samples"):
                top[key] = value
            else:
                raise KeyError(key)
        cfg = dataclasses.replace(self, numerics=numerics, **top)
        _validate_ranges(cfg)
        return cfg

    def echo(self) -> dict:
        return {
            **self.numerics,
            "risk": self.risk,
            "seed": self.seed,
            "mc_samples": self.mc_samples,
        }


def _require(data, key, where="config"):
    if key not in data:
        raise SchemaError(f"{where} is missing required field '{key}'")
    return data[key]


def _number(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what} must be a number, got {value!r}")
    return value


def _validate_ranges(cfg: ProblemConfig):
    if not 0.0 < cfg.risk <= 1.0:
        raise RangeError(f"risk must lie in (0, 1], got {cfg.risk}")
    for key, value in cfg.numerics.items():
        if not value > 0:
            raise RangeError(f"numerics.{key} must be positive, got {value}")
    for key in ("n_grid", "ht_terms"):
        if int(cfg.numerics[key]) != cfg.numerics[key]:
            raise RangeError(f"numerics.{key} must be an integer")
    if int(cfg.mc_samples) != cfg.mc_samples or cfg.mc_samples < 1:
        raise RangeError(f"mc_samples must be a positive integer, got {cfg.mc_samples}")


def _network_entry(entry, base_dir):
    if isinstance(entry, str):
        path = Path(entry)
        if not path.is_absolute() and base_dir is not None:
            path = Path(base_dir) / path
        return load_network(path), {"file": str(entry)}
    if isinstance(entry, dict) and "random" in entry:
        spec = entry["random"]
        if not isinstance(spec, dict):
            raise SchemaError("network.random must be an object")
        widths = _require(spec, "widths", "network.random")
        seed = _require(spec, "seed", "network.random")
        if not isinstance(widths, list) or not all(isinstance(w, int) and w > 0 for w in widths):
            raise SchemaError("network.random.widths must be a list of positive integers")
        if len(widths) < 2:
            raise RangeError("network.random.widths needs at least two entries")
        return random_network(widths, int(seed)), {"random": {"widths": widths, "seed": seed}}
    if isinstance(entry, dict) and "file" in entry:
        return _network_entry(entry["file"], base_dir)
    return network_from_dict(entry), {"inline": True}


def config_from_dict(data, base_dir=None) -> ProblemConfig:
    """Validate a parsed problem record.

    Every violation raises a specific :class:`~cfverify.errors.ConfigError`
    subclass: :class:`SchemaError` for missing or mistyped fields,
    :class:`RangeError` for out-of-range values, and
    :class:`DimensionChainError` for inconsistent shapes.
    """
    if not isinstance(data, dict):
        raise SchemaError("problem config must be a JSON object")
    net, source = _network_entry(_require(data, "network"), base_dir)

    inputs_raw = _require(data, "inputs")
    if not isinstance(inputs_raw, list):
        raise SchemaError("inputs must be a list of distribution records")
    try:
        inputs = tuple(cf_from_spec(s) for s in inputs_raw)
    except CFVerifyError as exc:
        raise SchemaError(f"inputs: {exc}") from exc
    if len(inputs) != net.in_width:
        raise DimensionChainError(
            0, f"{len(inputs)} input distributions for {net.in_width} network inputs"
        )

    safety_raw = _require(data, "safety")
    if isinstance(safety_raw, dict):
        safety_raw = [safety_raw]
    if not isinstance(safety_raw, list) or not safety_raw:
        raise SchemaError("safety must be a non-empty list of half-spaces")
    safety = []
    for i, rec in enumerate(safety_raw):
        if not isinstance(rec, dict):
            raise SchemaError(f"safety[{i}] must be an object")
        c = _require(rec, "c", f"safety[{i}]")
        d = _number(rec.get("d", 0.0), f"safety[{i}].d")
        direction = rec.get("direction", "LE")
        if direction not in ("LE", "GE"):
            raise SchemaError(f"safety[{i}].direction must be 'LE' or 'GE'")
        if not isinstance(c, list) or len(c) != net.out_width:
            raise DimensionChainError(
                len(net.layers) - 1,
                f"safety[{i}].c must list {net.out_width} coefficients",
            )
        try:
            safety.append(HalfSpace(_matrix(c, f"safety[{i}].c"), d, direction))
        except CFVerifyError as exc:
            raise RangeError(f"safety[{i}]: {exc}") from exc

    risk = _number(_require(data, "risk"), "risk")

    numerics = dict(DEFAULT_NUMERICS)
    extra = data.get("numerics", {})
    if not isinstance(extra, dict):
        raise SchemaError("numerics must be an object")
    for key, value in extra.items():
        if key not in DEFAULT_NUMERICS:
            raise SchemaError(f"unknown numerics field '{key}'")
        numerics[key] = _number(value, f"numerics.{key}")

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise SchemaError("seed must be an integer")
    mc = _number(data.get("mc_samples", DEFAULT_MC_SAMPLES), "mc_samples")

    cfg = ProblemConfig(net, inputs, tuple(safety), float(risk), numerics, seed, mc, source)
    _validate_ranges(cfg)
    return cfg


def load_config(path) -> ProblemConfig:
    """Read a problem file; relative network paths resolve next to it."""
    return config_from_dict(_read_json(path), base_dir=os.path.dirname(os.path.abspath(path)))


def load_problem(path) -> VerificationProblem:
    return load_config(path).to_problem()
