"""JSON encoding of curves, points and run reports.

Exact values travel as strings ("7", "-3/4"); polynomials in t as lists of such
strings from t^0 upwards.  Reals are written as decimal strings next to the
precision they were computed at.
"""
import json
from fractions import Fraction

import mpmath

from curve import CurveModel
from errors import InputError
from fields import QT, Base, as_fraction, parse_rational
from jacobian import make_point
from kummer import KummerCoords
from local_nonarch import FiberHint, MuHints
from redgraph import parse_rationality

VERSION = "1.0.0"


# ==============================
# DECODING
# ==============================
def _rational(value, what):
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: {value!r} is not an exact rational") from exc


def _entry(value, base, what):
    if base == Base.QT:
        if isinstance(value, list):
            return [_rational(c, what) for c in value]
        return [_rational(value, what)]
    if isinstance(value, list):
        raise InputError(f"{what}: polynomial coefficients need base Q(t)")
    return _rational(value, what)


def _list(data, key, required=True):
    value = data.get(key)
    if value is None:
        if required:
            raise InputError(f"missing field {key!r}")
        return None
    if not isinstance(value, list):
        raise InputError(f"field {key!r} must be a list")
    return value


def decode_curve(data):
    """CurveModel from {"f": [...], "h": [...], "base": "Q" | "Q(t)"}."""
    if not isinstance(data, dict):
        raise InputError("a curve is a JSON object")
    try:
        base = Base(data.get("base", "Q"))
    except ValueError as exc:
        raise InputError(f"unknown base {data.get('base')!r}") from exc
    if base == Base.FP:
        raise InputError("curves over finite fields are not read from JSON")
    f = [_entry(c, base, "f") for c in _list(data, "f")]
    if len(f) > 7:
        raise InputError("f has at most seven coefficients")
    h = _list(data, "h", required=False)
    if h is not None:
        if len(h) > 4:
            raise InputError("h has at most four coefficients")
        h = [_entry(c, base, "h") for c in h]
    model = CurveModel.from_coefficients(f, h, base)
    if all(c == 0 for c in model.f):
        raise InputError("F vanishes identically")
    return model


def decode_hints(data):
    """Reduction-type hints keyed by prime, e.g. {"3": "I0-IV-0"}."""
    hints = data.get("reduction_hints") or {}
    try:
        return {int(p): str(text) for p, text in hints.items()}
    except ValueError as exc:
        raise InputError("reduction_hints must be keyed by primes") from exc


def decode_rationality(data):
    out = {}
    for p, desc in (data.get("rationality") or {}).items():
        try:
            out[int(p)] = parse_rationality(desc)
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad rationality description at {p}") from exc
    return out


def decode_mu_hints(data):
    """MuHints keyed by place label ("5", "t-1", "inf")."""
    out = {}
    for label, desc in (data.get("mu_hints") or {}).items():
        try:
            out[str(label)] = MuHints(
                B=desc.get("B"), M=desc.get("M"),
                fiber=FiberHint(desc.get("fiber", FiberHint.GENERIC.value)),
                group_exponent=desc.get("group_exponent"),
                minimal=bool(desc.get("minimal", False)),
            )
        except (AttributeError, ValueError) as exc:
            raise InputError(f"bad mu hint for place {label}") from exc
    return out


def decode_point(data, model):
    """A Mumford point {"a": [...], "b": [...]} on ``model``."""
    if not isinstance(data, dict):
        raise InputError("a point is a JSON object")
    a = [_entry(c, model.base, "a") for c in _list(data, "a")]
    b = [_entry(c, model.base, "b") for c in _list(data, "b")]
    weights = tuple(data.get("inf_weights", (0, 0)))
    if len(weights) != 2:
        raise InputError("inf_weights has two entries")
    return make_point(model, a, b, weights)


def decode_points(data, model):
    items = data.get("points") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise InputError("expected a list of points")
    return [decode_point(item, model) for item in items]


def decode_kummer(data, model):
    values = _list(data, "kummer")
    entries = [_entry(c, model.base, "kummer") for c in values]
    return KummerCoords.of(entries, model.domain)


# ==============================
# ENCODING
# ==============================
def exact(value):
    """String form of an exact base-field element."""
    if value is None:
        return None
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "numer") and hasattr(value, "denom"):
        return str(QT.to_sympy(value)).replace("**", "^")
    return str(as_fraction(value))


def real(value, digits):
    if value is None:
        return None
    return mpmath.nstr(value, digits)


def encode_point(P):
    return {"a": [exact(c) for c in P.a], "b": [exact(c) for c in P.b],
            "inf_weights": list(P.inf_weights)}


def encode_kummer(x):
    return [exact(c) for c in x]


def run_report(command, inputs, results, warnings=(), digits=None, seed=None, timing=None):
    return {
        "version": VERSION,
        "command": command,
        "inputs": inputs,
        "digits": digits,
        "seed": seed,
        "results": results,
        "warnings": list(warnings),
        "timing": timing,
    }


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=1)
