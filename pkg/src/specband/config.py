"""Run configuration: JSON document, published schema, defaults.

``load_config`` parses a file, validates the raw document against
``config_schema.json`` (unknown keys are rejected) and deep-merges it over
``DEFAULTS``. The merged dict is the effective config echoed in reports.

Precedence, lowest to highest: built-in defaults, config file, CLI flags.
The ``output`` block (directory, format) steers where files go and is not
part of the echoed experiment config, so relocating output never changes
report contents or file names.
"""

from __future__ import annotations

import copy
import json
from importlib import resources
from pathlib import Path

import jsonschema

SCHEMA_VERSION = 1
MAX_P_2D = 64

DEFAULTS: dict = {
    "schema_version": SCHEMA_VERSION,
    "potential": {"kind": "hermite"},
    "grid": {"n": 1, "L": 12.0, "P": 1024, "order": 4},
    "dyadic": {
        "j_min": 0,
        "j_max": 8,
        "k_max": 4,
        "sharpness": 1.0,
        "alt_sharpness": 2.0,
        "sample_density": 4096,
        "sum_floor": 1e-2,
        "validate_range": None,
    },
    "corpus": {"kind": "band", "count": 50, "seed": 0, "band": [0.5, 100.0]},
    "experiments": {
        "decay": {"N_list": [1, 2, 4], "alpha_list": [0, 1], "ceiling": 50.0},
        "mehler": {"t_list": [0.1, 0.5, 1.0], "window": 4.0, "tol": 1e-6, "grad_tol": 1e-4},
        "gaussian_bound": {
            "t_min": 0.05,
            "t_max": 4.0,
            "t_count": 40,
            "window": 6.0,
            "points": 121,
            "t0_min": 1.0,
            "c_max": 10.0,
        },
        "hebisch": {"beta_list": [0, 2], "s_H": 3.5, "j_min": 0, "j_max": 8, "ceiling": 10.0, "g": "phi"},
        "equivalence": {
            "p_list": [1.5, 2, 3, 4],
            "ceiling": 10.0,
            "parseval_tol": 1e-8,
            "independence_p_list": [1.5, 2, 4],
            "independence_ceiling": 10.0,
        },
        "maximal": {
            "r_list": [1, 2],
            "p_list": [1.5, 2, 3, 4],
            "s_bernstein": 2.0,
            "q": 2.0,
            "corpus_count": 10,
            "ceiling_R1": 25.0,
            "ceiling_R2": 25.0,
            "ceiling_C_p": 10.0,
            "ceiling_C_pq": 10.0,
            "pq_list": [[2, 2], [4, 2]],
            "s_offset": 1.0,
            "char_ceiling": 50.0,
            "resolution_P": [1024, 512],
            "stability_tol": 0.2,
        },
        "sobolev": {"s": 1.0, "p": 2.0, "ceiling": 16.0},
    },
    "negative_control": False,
}

OUTPUT_DEFAULTS = {"dir": "reports", "format": "json"}


class ConfigError(ValueError):
    """Unreadable, malformed or invalid run configuration."""


def schema() -> dict:
    text = resources.files("specband").joinpath("config_schema.json").read_text()
    return json.loads(text)


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _where(err: jsonschema.ValidationError) -> str:
    parts = []
    for p in err.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else (f".{p}" if parts else str(p)))
    return "".join(parts) or "<root>"


def validate(raw: dict) -> None:
    """Schema-check a raw (not yet defaulted) document."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise ConfigError(f"config error at {_where(err)}: {err.message}")


def _check_semantics(cfg: dict) -> None:
    pot = cfg["potential"]
    g = cfg["grid"]
    d = cfg["dyadic"]
    if d["j_min"] > d["j_max"]:
        raise ConfigError("config error at dyadic: j_min must not exceed j_max")
    h = cfg["experiments"]["hebisch"]
    if h["j_min"] > h["j_max"]:
        raise ConfigError("config error at experiments.hebisch: j_min must not exceed j_max")
    gb = cfg["experiments"]["gaussian_bound"]
    if gb["t_min"] >= gb["t_max"]:
        raise ConfigError("config error at experiments.gaussian_bound: t_min must be below t_max")
    lo, hi = cfg["corpus"]["band"]
    if not 0 <= lo < hi:
        raise ConfigError("config error at corpus.band: need 0 <= lo < hi")
    if g["n"] == 2 and g["P"] > MAX_P_2D:
        raise ConfigError(f"config error at grid.P: n=2 is capped at P <= {MAX_P_2D} (dense eigensolver)")
    if pot["kind"] == "poschl_teller":
        if "nu" not in pot:
            raise ConfigError("config error at potential: poschl_teller needs nu")
        if g["n"] != 1:
            raise ConfigError("config error at grid.n: poschl_teller is one-dimensional")
    if pot["kind"] == "tabulated" and "path" not in pot:
        raise ConfigError("config error at potential: tabulated needs path")
    vr = d["validate_range"]
    if vr is not None and not 0 < vr[0] < vr[1]:
        raise ConfigError("config error at dyadic.validate_range: need 0 < lo < hi")


def resolve(raw: dict) -> tuple[dict, dict]:
    """(effective config, output settings) from a raw document."""
    validate(raw)
    raw = dict(raw)
    output = _merge(OUTPUT_DEFAULTS, raw.pop("output", {}))
    if isinstance(raw.get("potential"), str):
        raw["potential"] = {"kind": raw["potential"]}
    cfg = _merge(DEFAULTS, raw)
    # a potential given by kind alone must not inherit keys from the default
    cfg["potential"] = dict(raw.get("potential", DEFAULTS["potential"]))
    _check_semantics(cfg)
    return cfg, output


def parse(text: str, source: str = "<config>") -> dict:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    return raw


def load_config(path: str | Path) -> tuple[dict, dict]:
    """Read, validate and default a config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return resolve(parse(text, str(path)))
