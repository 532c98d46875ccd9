"""Built-in models and JSON model configurations.

Two ways to obtain a :class:`ModelBundle` (a named model plus its optional
real-structure data):

* :func:`build_builtin` instantiates one of the shipped models by name at a
  chosen truncation.  Seeded builtins (``a2_generic_k``, ``rand2d``)
  regenerate identically from the same seed.
* :func:`build_from_spec` builds from a validated configuration dict, as
  loaded from JSON by :func:`load_spec_file`.

Configuration files carry the model's mathematical content only (pairing,
prepotential, grading data, real structure, optional potential / CV data)
plus suggested truncation defaults; run parameters such as the scalar mode,
tolerance, and seed are command-line concerns.  All numbers are exact
rationals written as ``"p/q"`` strings (plain integers are accepted on
input).  A polynomial in the level-0 coordinates is a term list

    [{"coeff": "1/6", "exps": [3]}, ...]

with one exponent per flavor; entries of the real structure (and potential /
CV data) may also carry ``"bar_exps"`` for the conjugate coordinates.  When
the real-structure entries are truncations of non-polynomial series,
``real_structure.valid_degree`` records the degree through which they are
trusted; omit it for exact polynomial entries.

:func:`canonical_json` renders a spec in a normalized form (fixed key order,
``p/q`` coefficient strings, graded-lexicographic term order) that
round-trips bit-exactly through :func:`load_spec_file`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import jsonschema

from .frobenius import EulerData, FrobeniusModel
from .hermitian import HermitianStructure
from .linalg import (
    SeriesMatrix,
    mat_conjugate,
    mat_from_rows,
    mat_identity,
    mat_inverse,
    mat_mul,
)
from .scalars import ComplexRational, format_rational
from .series import ANTIHOL, HOL, SeriesRing, TruncatedSeries

__all__ = [
    "BUILTIN_MODELS",
    "CONFIG_SCHEMA",
    "ConfigError",
    "FALLBACK_D_MAX",
    "FALLBACK_N_MAX",
    "ModelBundle",
    "build_builtin",
    "build_from_spec",
    "builtin_names",
    "builtin_spec",
    "bundle_spec",
    "canonical_json",
    "load_spec_file",
    "validate_spec",
]

#: Truncation used for configs that supply no defaults of their own.
FALLBACK_N_MAX = 3
FALLBACK_D_MAX = 4


class ConfigError(ValueError):
    """A model configuration is invalid.

    ``pointer`` locates the offending element as a JSON pointer ("" for the
    document root).
    """

    def __init__(self, message: str, pointer: str = ""):
        self.message = message
        self.pointer = pointer
        super().__init__(f"at {pointer}: {message}" if pointer else message)


@dataclass(frozen=True)
class ModelBundle:
    """A named model together with its optional real-structure data."""

    name: str
    model: FrobeniusModel
    herm: Optional[HermitianStructure]
    description: str = ""


# ---------------------------------------------------------------------------
# configuration schema
# ---------------------------------------------------------------------------

_RATIONAL = {
    "type": ["string", "integer"],
    "pattern": "^-?[0-9]+(/[0-9]+)?$",
}
_EXPONENTS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_TERM = {
    "type": "object",
    "additionalProperties": False,
    "required": ["coeff", "exps"],
    "properties": {
        "coeff": _RATIONAL,
        "exps": _EXPONENTS,
        "bar_exps": _EXPONENTS,
    },
}
_TERM_LIST = {"type": "array", "items": _TERM}
_RATIONAL_MATRIX = {"type": "array", "items": {"type": "array", "items": _RATIONAL}}
_SERIES_MATRIX = {"type": "array", "items": {"type": "array", "items": _TERM_LIST}}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "n", "eta", "prepotential"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "unit_flavor": {"type": "integer", "minimum": 1},
        "eta": _RATIONAL_MATRIX,
        "prepotential": _TERM_LIST,
        "euler": {
            "type": "object",
            "additionalProperties": False,
            "required": ["q", "r"],
            "properties": {"q": _RATIONAL_MATRIX, "r": {"type": "array", "items": _RATIONAL}},
        },
        "weight": _RATIONAL,
        "real_structure": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "k"],
            "properties": {
                "kind": {"const": "matrix"},
                "k": _SERIES_MATRIX,
                "valid_degree": {"type": "integer", "minimum": 0},
            },
        },
        "theta_constants": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["flavor", "rank", "value"],
                "properties": {
                    "flavor": {"type": "integer", "minimum": 1},
                    "rank": {"type": "integer", "minimum": 1},
                    "value": _RATIONAL,
                },
            },
        },
        "potential": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a"],
            "properties": {"a": _SERIES_MATRIX},
        },
        "cv": {
            "type": "object",
            "additionalProperties": False,
            "required": ["u", "q"],
            "properties": {"u": _SERIES_MATRIX, "q": _SERIES_MATRIX},
        },
        "defaults": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_max": {"type": "integer", "minimum": 1},
                "d_max": {"type": "integer", "minimum": 0},
                "i_max": {"type": "integer", "minimum": 1},
            },
        },
    },
}


# ---------------------------------------------------------------------------
# validation and parsing
# ---------------------------------------------------------------------------


def _fraction(value, pointer: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid rational {value!r}: {exc}", pointer) from exc


def _check_matrix_shape(rows, n: int, pointer: str) -> None:
    if len(rows) != n:
        raise ConfigError(f"expected {n} rows, found {len(rows)}", pointer)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ConfigError(
                f"expected {n} columns, found {len(row)}", f"{pointer}/{i}"
            )


def _check_term_list(terms, n: int, pointer: str, *, allow_bars: bool) -> None:
    for i, term in enumerate(terms):
        if len(term["exps"]) != n:
            raise ConfigError(
                f"expected {n} exponents, found {len(term['exps'])}",
                f"{pointer}/{i}/exps",
            )
        bars = term.get("bar_exps")
        if bars is None:
            continue
        if len(bars) != n:
            raise ConfigError(
                f"expected {n} exponents, found {len(bars)}",
                f"{pointer}/{i}/bar_exps",
            )
        if any(bars) and not allow_bars:
            raise ConfigError(
                "conjugate exponents are not allowed here",
                f"{pointer}/{i}/bar_exps",
            )


def _check_series_matrix(rows, n: int, pointer: str) -> None:
    _check_matrix_shape(rows, n, pointer)
    for i, row in enumerate(rows):
        for j, terms in enumerate(row):
            _check_term_list(terms, n, f"{pointer}/{i}/{j}", allow_bars=True)


def validate_spec(spec: Mapping) -> None:
    """Validate a configuration dict; raise :class:`ConfigError` if invalid."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(spec))
    if error is not None:
        pointer = "/" + "/".join(str(part) for part in error.absolute_path)
        raise ConfigError(error.message, pointer if pointer != "/" else "")

    n = spec["n"]
    if spec.get("unit_flavor", 1) > n:
        raise ConfigError(f"unit_flavor exceeds the flavor count {n}", "/unit_flavor")
    _check_matrix_shape(spec["eta"], n, "/eta")
    _check_term_list(spec["prepotential"], n, "/prepotential", allow_bars=False)
    euler = spec.get("euler")
    if euler is not None:
        _check_matrix_shape(euler["q"], n, "/euler/q")
        if len(euler["r"]) != n:
            raise ConfigError(
                f"expected {n} entries, found {len(euler['r'])}", "/euler/r"
            )
    real = spec.get("real_structure")
    if real is not None:
        _check_series_matrix(real["k"], n, "/real_structure/k")
    for key in ("potential", "cv"):
        if key in spec and real is None:
            raise ConfigError(f"{key} data requires a real_structure", f"/{key}")
    if "potential" in spec:
        _check_series_matrix(spec["potential"]["a"], n, "/potential/a")
    if "cv" in spec:
        _check_series_matrix(spec["cv"]["u"], n, "/cv/u")
        _check_series_matrix(spec["cv"]["q"], n, "/cv/q")
    for i, entry in enumerate(spec.get("theta_constants", ())):
        if entry["flavor"] > n:
            raise ConfigError(
                f"flavor exceeds the flavor count {n}", f"/theta_constants/{i}/flavor"
            )
    defaults = spec.get("defaults", {})
    if "i_max" in defaults and "n_max" in defaults:
        if defaults["i_max"] < defaults["n_max"]:
            raise ConfigError("i_max must be at least n_max", "/defaults/i_max")


def load_spec_file(path) -> dict:
    """Read, parse, and validate a JSON model configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise ConfigError("the top-level value must be an object")
    validate_spec(spec)
    return spec


def _series_from_terms(
    ring: SeriesRing,
    payload: Sequence[Mapping],
    pointer: str,
    *,
    valid_degree: Optional[int] = None,
) -> TruncatedSeries:
    terms: Dict = {}
    for i, entry in enumerate(payload):
        coeff = _fraction(entry["coeff"], f"{pointer}/{i}/coeff")
        mono: List[Tuple[int, int]] = []
        for flavor, exp in enumerate(entry["exps"], start=1):
            if exp:
                mono.append((ring.var_index(HOL, 0, flavor), exp))
        for flavor, exp in enumerate(entry.get("bar_exps") or (), start=1):
            if exp:
                mono.append((ring.var_index(ANTIHOL, 0, flavor), exp))
        key = tuple(sorted(mono))
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return ring.series(
        terms, exact=valid_degree is None, valid_degree=valid_degree
    )


def _series_matrix_from_payload(
    ring: SeriesRing,
    rows,
    pointer: str,
    *,
    valid_degree: Optional[int] = None,
) -> SeriesMatrix:
    return mat_from_rows(
        [
            [
                _series_from_terms(
                    ring, terms, f"{pointer}/{i}/{j}", valid_degree=valid_degree
                )
                for j, terms in enumerate(row)
            ]
            for i, row in enumerate(rows)
        ]
    )


def build_from_spec(
    spec: Mapping,
    *,
    n_max: Optional[int] = None,
    d_max: Optional[int] = None,
    mode: str = "rational",
) -> ModelBundle:
    """Instantiate a validated configuration at the requested truncation.

    Truncation falls back to the spec's ``defaults`` and then to the module
    fallbacks.  Model-gate violations surface as
    :class:`~bigphase.frobenius.ModelError`.
    """
    validate_spec(spec)
    defaults = spec.get("defaults", {})
    if n_max is None:
        n_max = defaults.get("n_max", FALLBACK_N_MAX)
    if d_max is None:
        d_max = defaults.get("d_max", FALLBACK_D_MAX)
    n = spec["n"]
    ring = SeriesRing(n, n_max, d_max, mode=mode)

    eta = [
        [_fraction(x, f"/eta/{i}/{j}") for j, x in enumerate(row)]
        for i, row in enumerate(spec["eta"])
    ]
    prepotential = _series_from_terms(ring, spec["prepotential"], "/prepotential")
    euler = None
    if "euler" in spec:
        euler = EulerData(
            [
                [_fraction(x, f"/euler/q/{i}/{j}") for j, x in enumerate(row)]
                for i, row in enumerate(spec["euler"]["q"])
            ],
            [_fraction(x, f"/euler/r/{i}") for i, x in enumerate(spec["euler"]["r"])],
        )
    weight = (
        _fraction(spec["weight"], "/weight") if "weight" in spec else None
    )
    theta = {
        (entry["flavor"], entry["rank"]): _fraction(
            entry["value"], f"/theta_constants/{i}/value"
        )
        for i, entry in enumerate(spec.get("theta_constants", ()))
    }
    model = FrobeniusModel(
        ring,
        eta,
        prepotential,
        unit_flavor=spec.get("unit_flavor", 1),
        euler=euler,
        weight=weight,
        theta_constants=theta or None,
    )

    herm = None
    real = spec.get("real_structure")
    if real is not None:
        k_matrix = _series_matrix_from_payload(
            ring, real["k"], "/real_structure/k",
            valid_degree=real.get("valid_degree"),
        )
        extras = {}
        if "potential" in spec:
            extras["potential_a"] = _series_matrix_from_payload(
                ring, spec["potential"]["a"], "/potential/a"
            )
        if "cv" in spec:
            extras["cv_u"] = _series_matrix_from_payload(
                ring, spec["cv"]["u"], "/cv/u"
            )
            extras["cv_q"] = _series_matrix_from_payload(
                ring, spec["cv"]["q"], "/cv/q"
            )
        herm = HermitianStructure(model, k_matrix, **extras)
    return ModelBundle(spec["name"], model, herm, spec.get("description", ""))


# ---------------------------------------------------------------------------
# canonical serialization
# ---------------------------------------------------------------------------


def _config_rational(value, pointer: str) -> str:
    if isinstance(value, ComplexRational):
        if value.im != 0:
            raise ConfigError("complex values cannot be serialized", pointer)
        return format_rational(value.re)
    if isinstance(value, (int, Fraction)):
        return format_rational(Fraction(value))
    raise ConfigError(
        f"cannot serialize a {type(value).__name__} coefficient", pointer
    )


def _term_sort_key(term: Mapping):
    exps = term["exps"]
    bars = term.get("bar_exps") or [0] * len(exps)
    degree = sum(exps) + sum(bars)
    return (degree, tuple(-e for e in exps), tuple(-e for e in bars))


def _canonical_terms(payload: Sequence[Mapping], n: int, pointer: str) -> list:
    merged: Dict[Tuple, Fraction] = {}
    for i, term in enumerate(payload):
        coeff = _fraction(term["coeff"], f"{pointer}/{i}/coeff")
        key = (tuple(term["exps"]), tuple(term.get("bar_exps") or [0] * n))
        merged[key] = merged.get(key, Fraction(0)) + coeff
    out = []
    for (exps, bars), coeff in merged.items():
        if coeff == 0:
            continue
        item = {"coeff": format_rational(coeff), "exps": list(exps)}
        if any(bars):
            item["bar_exps"] = list(bars)
        out.append(item)
    out.sort(key=_term_sort_key)
    return out


def _canonical_series_matrix(rows, n: int, pointer: str) -> list:
    return [
        [_canonical_terms(terms, n, f"{pointer}/{i}/{j}") for j, terms in enumerate(row)]
        for i, row in enumerate(rows)
    ]


def _canonical_spec(spec: Mapping) -> dict:
    validate_spec(spec)
    n = spec["n"]
    out: dict = {"name": spec["name"]}
    if spec.get("description"):
        out["description"] = spec["description"]
    out["n"] = n
    out["unit_flavor"] = spec.get("unit_flavor", 1)
    out["eta"] = [
        [_config_rational(_fraction(x, ""), f"/eta/{i}/{j}") for j, x in enumerate(row)]
        for i, row in enumerate(spec["eta"])
    ]
    out["prepotential"] = _canonical_terms(spec["prepotential"], n, "/prepotential")
    if "euler" in spec:
        out["euler"] = {
            "q": [
                [_config_rational(_fraction(x, ""), "") for x in row]
                for row in spec["euler"]["q"]
            ],
            "r": [_config_rational(_fraction(x, ""), "") for x in spec["euler"]["r"]],
        }
    if "weight" in spec:
        out["weight"] = _config_rational(_fraction(spec["weight"], ""), "/weight")
    if "real_structure" in spec:
        real = {"kind": "matrix"}
        real["k"] = _canonical_series_matrix(
            spec["real_structure"]["k"], n, "/real_structure/k"
        )
        if "valid_degree" in spec["real_structure"]:
            real["valid_degree"] = spec["real_structure"]["valid_degree"]
        out["real_structure"] = real
    if spec.get("theta_constants"):
        out["theta_constants"] = [
            {
                "flavor": entry["flavor"],
                "rank": entry["rank"],
                "value": _config_rational(_fraction(entry["value"], ""), ""),
            }
            for entry in sorted(
                spec["theta_constants"],
                key=lambda e: (e["flavor"], e["rank"]),
            )
        ]
    if "potential" in spec:
        out["potential"] = {
            "a": _canonical_series_matrix(spec["potential"]["a"], n, "/potential/a")
        }
    if "cv" in spec:
        out["cv"] = {
            "u": _canonical_series_matrix(spec["cv"]["u"], n, "/cv/u"),
            "q": _canonical_series_matrix(spec["cv"]["q"], n, "/cv/q"),
        }
    if "defaults" in spec:
        out["defaults"] = {
            key: spec["defaults"][key]
            for key in ("n_max", "d_max", "i_max")
            if key in spec["defaults"]
        }
    return out


def canonical_json(spec: Mapping) -> str:
    """Normalized JSON text for a configuration (stable across round-trips)."""
    return json.dumps(_canonical_spec(spec), indent=2) + "\n"


def _terms_payload(series: TruncatedSeries, pointer: str) -> list:
    ring = series.ring
    n = ring.num_flavors
    out = []
    for mono in sorted(series.terms, key=ring.term_sort_key):
        exps = [0] * n
        bars = [0] * n
        for var, exp in mono:
            sector, level, flavor = ring.var_info(var)
            if level != 0:
                raise ConfigError(
                    "only level-0 series can be serialized", pointer
                )
            (exps if sector == HOL else bars)[flavor - 1] = exp
        item = {
            "coeff": _config_rational(series.terms[mono], pointer),
            "exps": exps,
        }
        if any(bars):
            item["bar_exps"] = bars
        out.append(item)
    return out


def _series_matrix_payload(matrix: SeriesMatrix, pointer: str) -> list:
    return [
        [_terms_payload(entry, f"{pointer}/{i}/{j}") for j, entry in enumerate(row)]
        for i, row in enumerate(matrix)
    ]


def bundle_spec(
    bundle: ModelBundle, *, defaults: Optional[Mapping[str, int]] = None
) -> dict:
    """Serialize a bundle back into a configuration dict.

    Only level-0 rational data can be represented; the real-structure window
    is recorded via ``valid_degree`` when its entries are inexact.
    """
    model = bundle.model
    n = model.n
    spec: dict = {"name": bundle.name}
    if bundle.description:
        spec["description"] = bundle.description
    spec["n"] = n
    spec["unit_flavor"] = model.unit_flavor
    spec["eta"] = [
        [_config_rational(x, f"/eta/{i}/{j}") for j, x in enumerate(row)]
        for i, row in enumerate(model.eta)
    ]
    spec["prepotential"] = _terms_payload(model.prepotential, "/prepotential")
    if model.euler is not None:
        spec["euler"] = {
            "q": [
                [_config_rational(x, "/euler/q") for x in row]
                for row in model.euler.q
            ],
            "r": [_config_rational(x, "/euler/r") for x in model.euler.r],
        }
    if model.weight is not None:
        spec["weight"] = _config_rational(model.weight, "/weight")
    if bundle.herm is not None:
        herm = bundle.herm
        real: dict = {"kind": "matrix", "k": _series_matrix_payload(herm.k, "/real_structure/k")}
        windows = [
            entry.valid_degree
            for row in herm.k
            for entry in row
            if not entry.exact
        ]
        if windows:
            real["valid_degree"] = min(windows)
        spec["real_structure"] = real
        if herm.potential_a is not None:
            spec["potential"] = {
                "a": _series_matrix_payload(herm.potential_a, "/potential/a")
            }
        if herm.cv_u is not None and herm.cv_q is not None:
            spec["cv"] = {
                "u": _series_matrix_payload(herm.cv_u, "/cv/u"),
                "q": _series_matrix_payload(herm.cv_q, "/cv/q"),
            }
    if model.theta_constants:
        spec["theta_constants"] = [
            {
                "flavor": flavor,
                "rank": rank,
                "value": _config_rational(value, "/theta_constants"),
            }
            for (flavor, rank) in sorted(model.theta_constants)
            for value in [model.theta_constants[(flavor, rank)]]
        ]
    if defaults:
        spec["defaults"] = dict(defaults)
    return spec


# ---------------------------------------------------------------------------
# built-in models
# ---------------------------------------------------------------------------


def _cubic_1d_model(ring: SeriesRing) -> FrobeniusModel:
    i0 = ring.var_index(HOL, 0, 1)
    prepotential = ring.series({((i0, 3),): Fraction(1, 6)})
    return FrobeniusModel(
        ring,
        [[1]],
        prepotential,
        euler=EulerData([[1]], [0]),
        weight=Fraction(-2),
    )


def _gravity1d(ring: SeriesRing, rng: random.Random):
    del rng
    model = _cubic_1d_model(ring)
    a = ring.one() + ring.small_var(1)
    k = a * (a * a.conjugate()).sqrt_unit().inverse()
    return model, HermitianStructure(model, mat_from_rows([[k]]))


def _gravity1d_flatk(ring: SeriesRing, rng: random.Random):
    del rng
    model = _cubic_1d_model(ring)
    # With the identity real structure the metric connection vanishes and
    # the multiplication operator is the identity, so t itself integrates
    # both the potential and the CV grading equations.
    t = ring.small_var(1)
    herm = HermitianStructure(
        model,
        mat_identity(ring, 1),
        potential_a=mat_from_rows([[t]]),
        cv_u=mat_from_rows([[t]]),
        cv_q=mat_from_rows([[ring.zero()]]),
    )
    return model, herm


def _a2_model(ring: SeriesRing) -> FrobeniusModel:
    i1 = ring.var_index(HOL, 0, 1)
    i2 = ring.var_index(HOL, 0, 2)
    prepotential = ring.series(
        {((i1, 2), (i2, 1)): Fraction(1, 2), ((i2, 4),): Fraction(1, 72)}
    )
    return FrobeniusModel(
        ring,
        [[0, 1], [1, 0]],
        prepotential,
        euler=EulerData([[1, 0], [0, Fraction(2, 3)]], [0, 0]),
        weight=Fraction(-5, 3),
    )


def _a2(ring: SeriesRing, rng: random.Random):
    del rng
    return _a2_model(ring), None


def _seeded_real_structure(ring: SeriesRing, rng: random.Random) -> SeriesMatrix:
    """K = B conj(B)^{-1} for a seeded B = Id + (linear terms).

    Any such K is an exact involution; for generic coefficients it is far
    from harmonic, so the flatness-type residuals it feeds are nonzero.
    """
    n = ring.num_flavors
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = ring.one() if i == j else ring.zero()
            for flavor in range(1, n + 1):
                coeff = Fraction(
                    rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([2, 3, 5, 7])
                )
                entry = entry + ring.const(coeff) * ring.small_var(flavor)
            row.append(entry)
        rows.append(row)
    b = mat_from_rows(rows)
    return mat_mul(b, mat_inverse(mat_conjugate(b)))


def _a2_generic_k(ring: SeriesRing, rng: random.Random):
    model = _a2_model(ring)
    return model, HermitianStructure(model, _seeded_real_structure(ring, rng))


def _rand2d(ring: SeriesRing, rng: random.Random):
    i1 = ring.var_index(HOL, 0, 1)
    i2 = ring.var_index(HOL, 0, 2)
    cubic = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([2, 3, 4, 6]))
    quartic = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([4, 6, 8, 12]))
    prepotential = ring.series(
        {
            ((i1, 2), (i2, 1)): Fraction(1, 2),
            ((i2, 3),): cubic,
            ((i2, 4),): quartic,
        }
    )
    charge = Fraction(rng.choice([1, 2, 3]), rng.choice([2, 3]))
    model = FrobeniusModel(
        ring,
        [[0, 1], [1, 0]],
        prepotential,
        euler=EulerData([[1, 0], [0, charge]], [0, 0]),
    )
    return model, HermitianStructure(model, _seeded_real_structure(ring, rng))


@dataclass(frozen=True)
class BuiltinEntry:
    factory: Callable[[SeriesRing, random.Random], tuple]
    n: int
    defaults: Tuple[int, int]  # (n_max, d_max); i_max defaults to n_max
    description: str
    seeded: bool = False


BUILTIN_MODELS: Dict[str, BuiltinEntry] = {
    "gravity1d": BuiltinEntry(
        _gravity1d,
        1,
        (4, 6),
        "One-flavor model: pairing 1, prepotential t^3/6, Euler field t d/dt, "
        "and the harmonic real structure generated by a(t) = 1 + t.",
    ),
    "gravity1d_flatk": BuiltinEntry(
        _gravity1d_flatk,
        1,
        (4, 6),
        "One-flavor cubic model with the identity real structure, shipped "
        "with matching potential and CV-structure data.",
    ),
    "a2": BuiltinEntry(
        _a2,
        2,
        (3, 5),
        "Two-flavor model: antidiagonal pairing, prepotential "
        "t1^2 t2/2 + t2^4/72, diagonal Euler charges (1, 2/3); no real "
        "structure.",
    ),
    "a2_generic_k": BuiltinEntry(
        _a2_generic_k,
        2,
        (3, 5),
        "The a2 model equipped with a seeded generic real structure "
        "B conj(B)^-1 (deliberately not harmonic).",
        seeded=True,
    ),
    "rand2d": BuiltinEntry(
        _rand2d,
        2,
        (3, 4),
        "Two-flavor model with a seed-determined cubic+quartic prepotential "
        "and a seeded generic real structure; regenerates identically from "
        "its seed.",
        seeded=True,
    ),
}


def builtin_names() -> List[str]:
    return list(BUILTIN_MODELS)


def build_builtin(
    name: str,
    *,
    n_max: Optional[int] = None,
    d_max: Optional[int] = None,
    mode: str = "rational",
    seed: int = 0,
) -> ModelBundle:
    """Instantiate a shipped model at the requested truncation."""
    entry = BUILTIN_MODELS.get(name)
    if entry is None:
        raise ConfigError(f"unknown built-in model: {name!r}")
    if n_max is None:
        n_max = entry.defaults[0]
    if d_max is None:
        d_max = entry.defaults[1]
    ring = SeriesRing(entry.n, n_max, d_max, mode=mode)
    rng = random.Random(f"{seed}:model:{name}")
    model, herm = entry.factory(ring, rng)
    return ModelBundle(name, model, herm, entry.description)


def builtin_spec(
    name: str,
    *,
    n_max: Optional[int] = None,
    d_max: Optional[int] = None,
    seed: int = 0,
) -> dict:
    """Configuration dict for a built-in (a snapshot for seeded builtins)."""
    entry = BUILTIN_MODELS.get(name)
    if entry is None:
        raise ConfigError(f"unknown built-in model: {name!r}")
    if n_max is None:
        n_max = entry.defaults[0]
    if d_max is None:
        d_max = entry.defaults[1]
    bundle = build_builtin(name, n_max=n_max, d_max=d_max, seed=seed)
    return bundle_spec(
        bundle, defaults={"n_max": n_max, "d_max": d_max, "i_max": n_max}
    )
