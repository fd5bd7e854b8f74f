"""JSON structure-constant files and report serialisation.

File format (indices are 1-based, coefficients are strings)::

    {"dim": 3, "name": "h3",
     "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}],
     "splitting": [[1, 2, 3], [4]]}

A bracket may also be written as a list ``[i, j, k, "c"]``.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .brackets import BracketTensor, validate_jacobi
from .errors import JacobiError, ParseError
from .exact import Subspace

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class AlgebraFile:
    mu: BracketTensor
    splitting: tuple[tuple[int, ...], tuple[int, ...]] | None = None  # zero-based


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError("coefficients must be integers or rational strings such as \"2/3\"", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip().replace("−", "-"))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {value!r}", where) from None
    raise ParseError(f"unsupported coefficient {value!r}", where)


def _index(value, n: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"index must be an integer, got {value!r}", where)
    if not 1 <= value <= n:
        raise ParseError(f"index {value} outside 1..{n}", where)
    return value - 1


def parse_algebra(obj) -> AlgebraFile:
    """Build an AlgebraFile from decoded JSON; Jacobi is not checked here."""
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    if "dim" not in obj:
        raise ParseError("missing field", "dim")
    n = obj["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError(f"dim must be a nonnegative integer, got {n!r}", "dim")
    recs = obj.get("brackets", [])
    if not isinstance(recs, list):
        raise ParseError("must be a list", "brackets")
    coeffs: dict[tuple[int, int, int], Fraction] = {}
    for pos, rec in enumerate(recs):
        where = f"brackets[{pos}]"
        if isinstance(rec, dict):
            missing = [key for key in "ijkc" if key not in rec]
            if missing:
                raise ParseError(f"missing keys {missing}", where)
            i, j, k, c = rec["i"], rec["j"], rec["k"], rec["c"]
        elif isinstance(rec, list) and len(rec) == 4:
            i, j, k, c = rec
        else:
            raise ParseError("expected {i, j, k, c} or [i, j, k, c]", where)
        i, j, k = (_index(v, n, where) for v in (i, j, k))
        if i >= j:
            raise ParseError("need i < j", where)
        if (i, j, k) in coeffs:
            raise ParseError(f"duplicate bracket ({i + 1}, {j + 1}, {k + 1})", where)
        coeffs[(i, j, k)] = _rational(c, where + ".c")
    split = obj.get("splitting")
    parts = None
    if split is not None:
        if not (isinstance(split, list) and len(split) == 2 and all(isinstance(p, list) for p in split)):
            raise ParseError("must be two index lists", "splitting")
        parts = tuple(tuple(_index(v, n, "splitting") for v in p) for p in split)
    name = obj.get("name")
    return AlgebraFile(BracketTensor(n, coeffs, name if isinstance(name, str) else None), parts)


def read_algebra(path) -> AlgebraFile:
    """Parse and validate a file; JacobiError lists the failing triples."""
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    af = parse_algebra(obj)
    bad = validate_jacobi(af.mu)
    if bad:
        raise JacobiError(bad)
    return AlgebraFile(af.mu.checked(), af.splitting)


def ingest(path) -> BracketTensor:
    return read_algebra(path).mu


def emit(mu: BracketTensor, splitting=None) -> dict:
    out: dict = {"dim": mu.dim}
    if mu.name:
        out["name"] = mu.name
    out["brackets"] = [
        {"i": i + 1, "j": j + 1, "k": k + 1, "c": fraction_str(c)} for (i, j, k), c in sorted(mu.coeffs.items())
    ]
    if splitting is not None:
        out["splitting"] = [[v + 1 for v in part] for part in splitting]
    return out


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_jsonable(value):
    """Exact values become strings; floats stay floats."""
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, (bool, str, int)) or value is None:
        return value
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, BracketTensor):
        return emit(value)
    if isinstance(value, Subspace):
        return {"dim": value.dim, "basis": [[fraction_str(v) for v in b] for b in value.basis]}
    if isinstance(value, np.ndarray):
        if value.dtype == object:
            return to_jsonable(value.tolist())
        if np.iscomplexobj(value):
            return {"real": value.real.tolist(), "imag": value.imag.tolist()}
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "as_dict"):
        return to_jsonable(value.as_dict())
    return repr(value)


def parse_fraction_matrix(rows) -> np.ndarray:
    """Inverse of the string serialisation for exact matrices."""
    return np.array([[Fraction(v) for v in row] for row in rows], dtype=object)


def verdict_to_dict(v) -> dict:
    wit = {k: to_jsonable(val) for k, val in v.witnesses.items() if k != "metric_construction"}
    mc = v.witnesses.get("metric_construction")
    if mc is not None:
        wit["metric_construction"] = to_jsonable({k: mc[k] for k in ("kind", "c", "residual", "T") if k in mc})
    return {
        "question": v.question,
        "answer": v.answer,
        "label": v.label,
        "certification": v.certification,
        "failed_step": v.failed_step,
        "verified": v.verified,
        "witnesses": wit,
        "numeric_evidence": to_jsonable(v.numeric_evidence),
        "notes": list(v.notes),
    }


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_algebra(path, mu: BracketTensor, splitting=None) -> None:
    write_atomic(path, json.dumps(emit(mu, splitting), indent=2) + "\n")


__all__ = [
    "AlgebraFile",
    "SCHEMA_VERSION",
    "emit",
    "fraction_str",
    "ingest",
    "parse_algebra",
    "parse_fraction_matrix",
    "read_algebra",
    "to_jsonable",
    "verdict_to_dict",
    "write_algebra",
    "write_atomic",
]
