"""Canonical JSON report documents.

Exact numbers are written as ``"p/q"`` strings (integers as ``"n"``).  Complex
floating-point values appear only under :data:`UNHATTED_KEY`, written as
``[re, im]`` pairs.  Output is key-sorted and newline-terminated, so equal
inputs give byte-identical files.
"""

from __future__ import annotations

import datetime
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .laurent import CircleRational, LaurentPoly, YLaurent, YRationalFunction
from .series import FormalLaurentSeries, TruncatedQSeries
from .verify import Status, VerificationReport

UNHATTED_KEY = "unhatted_transcendental_rendering"
SCHEMA_KEYS = {"tool", "version", "timestamp", "command", "config", "results", "reports", "flags", "status"}


class ReportSchemaError(ValueError):
    pass


def rational_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    if not isinstance(s, str) or "." in s or "e" in s.lower():
        raise ReportSchemaError(f"not an exact rational string: {s!r}")
    return Fraction(s)


def complex_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_coefficient(c):
    """Exact coefficient to JSON-ready structure."""
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, (int, Fraction)):
        return rational_str(c)
    if isinstance(c, YLaurent):
        return {rational_str(e): rational_str(a) for e, a in c.as_dict().items()}
    if isinstance(c, YRationalFunction):
        return {"numerator": encode_coefficient(c.numerator), "denominator": encode_coefficient(c.denominator)}
    if isinstance(c, LaurentPoly):
        return {"variables": list(c.variables),
                "terms": [[[rational_str(Fraction(k, 2)) for k in key], rational_str(a)]
                          for key, a in sorted(c.items())]}
    if isinstance(c, CircleRational):
        return {"numerator": encode_coefficient(c.numerator), "denominator": encode_coefficient(c.denominator)}
    if isinstance(c, TruncatedQSeries):
        return encode_qseries(c)
    raise TypeError(f"cannot encode {type(c).__name__}")


def encode_qseries(s: TruncatedQSeries) -> dict:
    """``{"truncation": first unknown q-exponent or null, "terms": [[exponent, coefficient], ...]}``."""
    trunc = s.truncation_order
    return {
        "truncation": None if trunc is None else rational_str(Fraction(trunc, 24)),
        "terms": [[rational_str(e), encode_coefficient(c)] for e, c in s.terms().items()],
    }


def encode_laurent_series(s: FormalLaurentSeries) -> dict:
    return {
        "v_truncation": s.v_truncation,
        "terms": [[e, encode_coefficient(c)] for e, c in s.terms().items()],
    }


def _encode_value(v):
    if isinstance(v, Status):
        return v.value
    if isinstance(v, (Fraction,)):
        return rational_str(v)
    if isinstance(v, complex):
        return complex_pair(v)
    if isinstance(v, float) and v in (float("inf"), float("-inf")):
        return None
    if isinstance(v, TruncatedQSeries):
        return encode_qseries(v)
    if isinstance(v, (YLaurent, YRationalFunction, CircleRational, LaurentPoly)):
        return encode_coefficient(v)
    if isinstance(v, dict):
        return {str(k): _encode_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_encode_value(x) for x in v]
    return v


def encode_report(rep: VerificationReport) -> dict:
    return {
        "check_name": rep.check_name,
        "parameters": _encode_value(rep.parameters),
        "status": rep.status.value,
        "tolerance": rep.tolerance,
        "max_deviation": rep.max_deviation,
        "mismatches": _encode_value(rep.mismatches),
        "notes": list(rep.notes),
        "values": _encode_value(rep.values),
    }


def overall_status(reports) -> Status:
    statuses = {r.status for r in reports}
    if Status.FAIL in statuses:
        return Status.FAIL
    if Status.FLAGGED in statuses:
        return Status.FLAGGED
    return Status.PASS


def deterministic_timestamp():
    """``SOURCE_DATE_EPOCH`` as ISO-8601 UTC, or ``None`` so reruns stay byte-identical."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is None:
        return None
    return datetime.datetime.fromtimestamp(int(epoch), datetime.timezone.utc).isoformat()


def build_document(command: str, config: dict, results: dict, reports: list) -> dict:
    flags = [{"check_name": r.check_name, "notes": list(r.notes)} for r in reports if r.status is Status.FLAGGED]
    return {
        "tool": "alegenus",
        "version": __version__,
        "timestamp": deterministic_timestamp(),
        "command": command,
        "config": _encode_value(config),
        "results": _encode_value(results),
        "reports": [encode_report(r) for r in reports],
        "flags": flags,
        "status": overall_status(reports).value,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit_report(doc: dict, path=None) -> None:
    """Write ``doc`` to ``path``, or to standard output when ``path`` is ``None`` or ``"-"``."""
    text = dumps(doc)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def _check_floats_outside_unhatted(node, inside: bool, where: str):
    if isinstance(node, float) and not inside:
        raise ReportSchemaError(f"floating-point value outside '{UNHATTED_KEY}' at {where}")
    if isinstance(node, dict):
        for k, v in node.items():
            _check_floats_outside_unhatted(v, inside or k == UNHATTED_KEY, f"{where}.{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _check_floats_outside_unhatted(v, inside, f"{where}[{i}]")


def validate_document(doc: dict) -> dict:
    """Check the document shape; results may carry floats only under the unhatted key."""
    missing = SCHEMA_KEYS - set(doc)
    if missing:
        raise ReportSchemaError(f"missing keys: {sorted(missing)}")
    if doc["status"] not in {s.value for s in Status}:
        raise ReportSchemaError(f"bad status {doc['status']!r}")
    for rep in doc["reports"]:
        if rep["status"] not in {s.value for s in Status}:
            raise ReportSchemaError(f"bad report status {rep['status']!r}")
    _check_floats_outside_unhatted(doc["results"], False, "results")
    return doc


def loads(text: str) -> dict:
    return validate_document(json.loads(text))
