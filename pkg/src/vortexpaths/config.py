"""Run configuration: JSON document -> validated :class:`RunConfig`."""

from __future__ import annotations

import json
import dataclasses
import re
from dataclasses import dataclass

import jsonschema

from .errors import SchemaError, ValidationError
from .trajectory import DEFAULT_N_SCAN, MethodRequest, default_z_hi
from .wave_model import Linearization, RootSign, VelocityCoefficients, WaveParameters, coefficients

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["g", "h0", "k", "epsilon"],
    "additionalProperties": False,
    "properties": {
        "g": _NUM,
        "h0": _NUM,
        "k": _NUM,
        "epsilon": _NUM,
        "omega0": _NUM,
        "alpha": _NUM,
        "c_bg": _NUM,
        "p0": _NUM,
        "linearization": {"enum": ["still", "shear"]},
        "root_sign": {"enum": ["+", "-"]},
        "beta": _NUM,
        "initial": {
            "type": "object",
            "required": ["x0", "z0"],
            "additionalProperties": False,
            "properties": {"x0": _NUM, "z0": _POS, "sign": {"enum": [-1, 0, 1]}},
        },
        "t_end": _NUM,
        "n_samples": {"type": "integer"},
        "method": {"enum": [m.value for m in MethodRequest]},
        "output": {"type": "string", "minLength": 1},
        "svg": {"type": "boolean"},
        "tol": _POS,
        "z_hi": _POS,
        "n_scan": {"type": "integer", "minimum": 256},
        "coefficients": {
            "type": "object",
            "required": ["A", "B", "C", "c"],
            "additionalProperties": False,
            "properties": {"A": _NUM, "B": _NUM, "C": _NUM, "c": _NUM},
        },
        "field": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "nx": {"type": "integer", "minimum": 2},
                "nz": {"type": "integer", "minimum": 2},
                "t": _NUM,
                "x_min": _NUM,
                "x_max": _NUM,
                "z_max": _POS,
            },
        },
        "peakon": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"const1": _NUM, "const2": _NUM},
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)

# methods whose closed forms need C == c; a missing c_bg is solved for that
_NEEDS_C_EQUAL_c = {MethodRequest.AUTO, MethodRequest.ELLIPTIC, MethodRequest.PEAKON}


@dataclass
class FieldGrid:
    nx: int = 65
    nz: int = 33
    t: float = 0.0
    x_min: float | None = None
    x_max: float | None = None
    z_max: float | None = None


@dataclass
class RunConfig:
    params: WaveParameters
    beta: float | None = None
    initial: tuple[float, float, int | None] | None = None
    t_end: float = 10.0
    n_samples: int = 1000
    method: MethodRequest = MethodRequest.AUTO
    output: str = "vortexpaths"
    emit_svg: bool = False
    tol: float = 1e-11
    z_hi: float | None = None
    n_scan: int = DEFAULT_N_SCAN
    coefficient_override: VelocityCoefficients | None = None
    field: FieldGrid = dataclasses.field(default_factory=FieldGrid)
    peakon: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_samples < 2:
            raise ValidationError(f"n_samples must be at least 2, got {self.n_samples}")
        if not self.t_end > 0:
            raise ValidationError(f"t_end must be positive, got {self.t_end}")
        if not (1e-12 <= self.tol <= 1e-6):
            raise ValidationError(f"tol must lie in [1e-12, 1e-6], got {self.tol}")

    @property
    def coeffs(self) -> VelocityCoefficients:
        if self.coefficient_override is not None:
            return self.coefficient_override
        return coefficients(self.params)

    @property
    def scan_top(self) -> float:
        return self.z_hi if self.z_hi is not None else default_z_hi(self.params)


def _path(error) -> str:
    parts = list(error.absolute_path)
    if error.validator == "required":
        m = re.match(r"'(.+)' is a required property", error.message)
        if m:
            parts.append(m.group(1))
    elif error.validator == "additionalProperties":
        extra = sorted(set(error.instance) - set(error.schema.get("properties", {})))
        parts.extend(extra[:1])
    return ".".join(str(p) for p in parts)


def _order(error):
    # missing keys in the order the schema lists them
    rank = 0
    m = re.match(r"'(.+)' is a required property", error.message)
    if error.validator == "required" and m and m.group(1) in error.validator_value:
        rank = list(error.validator_value).index(m.group(1))
    return ([str(p) for p in error.absolute_path], rank, error.message)


def validate_document(doc) -> None:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=_order)
    if errors:
        err = errors[0]
        raise SchemaError(_path(err), err.message)


def config_from_dict(doc: dict) -> RunConfig:
    validate_document(doc)
    method = MethodRequest(doc.get("method", "auto"))
    params = WaveParameters(
        g=float(doc["g"]),
        h0=float(doc["h0"]),
        k=float(doc["k"]),
        epsilon=float(doc["epsilon"]),
        omega0=float(doc.get("omega0", 0.0)),
        alpha=float(doc.get("alpha", 0.0)),
        c_bg=float(doc.get("c_bg", 0.0)),
        p0=float(doc.get("p0", 101325.0)),
        linearization=Linearization(doc.get("linearization", "shear")),
        root_sign=RootSign.PLUS if doc.get("root_sign", "+") == "+" else RootSign.MINUS,
    )
    if "c_bg" not in doc and method in _NEEDS_C_EQUAL_c:
        params = params.with_C_equal_c()
    override = None
    if "coefficients" in doc:
        c = doc["coefficients"]
        override = VelocityCoefficients(float(c["A"]), float(c["B"]), float(c["C"]), float(c["c"]), params.k)
    initial = None
    if "initial" in doc:
        i = doc["initial"]
        initial = (float(i["x0"]), float(i["z0"]), i.get("sign"))
    grid = FieldGrid(**doc.get("field", {}))
    return RunConfig(
        params=params,
        beta=float(doc["beta"]) if "beta" in doc else None,
        initial=initial,
        t_end=float(doc.get("t_end", 10.0)),
        n_samples=int(doc.get("n_samples", 1000)),
        method=method,
        output=doc.get("output", "vortexpaths"),
        emit_svg=bool(doc.get("svg", False)),
        tol=float(doc.get("tol", 1e-11)),
        z_hi=float(doc["z_hi"]) if "z_hi" in doc else None,
        n_scan=int(doc.get("n_scan", DEFAULT_N_SCAN)),
        coefficient_override=override,
        field=grid,
        peakon=dict(doc.get("peakon", {})),
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a UTF-8 JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("", "top level must be a JSON object")
    return config_from_dict(doc)
