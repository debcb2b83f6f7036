"""Problem files (JSON) and machine-readable reports.

Matrices are lists of rows; a complex entry is written ``[re, im]``. Reports
print every float with 17 significant digits, so echoed inputs re-parse to
bit-identical arrays and hash to the same digest.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SchemaError

__all__ = [
    "PROBLEM_SCHEMA",
    "REPORT_SCHEMA",
    "Problem",
    "digest",
    "dumps",
    "encode",
    "load_problem",
    "parse_problem",
]

PROBLEM_SCHEMA = "gaussqef.problem/1"
REPORT_SCHEMA = "gaussqef.report/1"

_TOP_KEYS = {"schema", "theta", "P", "Pi", "weights", "sweep", "A", "B", "factors"}
_SWEEP_PARAMETERS = {"risk_theta"}


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _entry(x, path, complex_ok):
    if _is_number(x):
        return complex(x) if complex_ok else float(x)
    if complex_ok and isinstance(x, list) and len(x) == 2 and all(_is_number(v) for v in x):
        return complex(x[0], x[1])
    kind = "a number or [re, im] pair" if complex_ok else "a finite real number"
    raise SchemaError(path, f"expected {kind}, got {x!r}")


def _matrix(obj, path, complex_ok=False, square=True):
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError(path, "expected a non-empty list of rows")
    width = len(obj[0])
    rows = []
    for i, row in enumerate(obj):
        if len(row) != width or width == 0:
            raise SchemaError(f"{path}[{i}]", f"row has {len(row)} entries, expected {width}")
        rows.append([_entry(x, f"{path}[{i}][{j}]", complex_ok) for j, x in enumerate(row)])
    M = np.array(rows, dtype=complex if complex_ok else float)
    if complex_ok and not np.any(M.imag):
        M = M.real.copy()
    if square and M.shape[0] != M.shape[1]:
        raise SchemaError(path, f"expected a square matrix, got {M.shape[0]}x{M.shape[1]}")
    return M


def _shape(M, shape, path):
    if M.shape != shape:
        raise SchemaError(path, f"expected shape {shape[0]}x{shape[1]}, got {M.shape[0]}x{M.shape[1]}")


@dataclass(frozen=True, eq=False)
class Problem:
    """Parsed problem file; absent optional fields are ``None``."""

    theta: np.ndarray
    P: np.ndarray | None = None
    Pi: np.ndarray | None = None
    weights: list | None = None
    sweep: dict | None = None
    A: np.ndarray | None = None
    B: np.ndarray | None = None
    factors: list | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.theta.shape[0]

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise SchemaError(name, "required field is missing")

    def echo(self):
        """JSON-ready normalized form; parses back to an identical problem."""
        out = {"schema": PROBLEM_SCHEMA, "theta": encode(self.theta)}
        for name in ("P", "Pi", "A", "B"):
            value = getattr(self, name)
            if value is not None:
                out[name] = encode(value)
        if self.factors is not None:
            out["factors"] = [encode(F) for F in self.factors]
        if self.weights is not None:
            out["weights"] = [{k: encode(v) for k, v in w.items()} for w in self.weights]
        if self.sweep is not None:
            out["sweep"] = {"parameter": self.sweep["parameter"], "grid": [float(g) for g in self.sweep["grid"]]}
        return out


def _parse_weights(raw, n):
    if not isinstance(raw, list) or not raw:
        raise SchemaError("weights", "expected a non-empty list")
    out = []
    for k, w in enumerate(raw):
        path = f"weights[{k}]"
        if not isinstance(w, dict):
            raise SchemaError(path, "expected an object")
        unknown = set(w) - {"C", "D", "sigma", "theta_block"}
        if unknown:
            raise SchemaError(f"{path}.{sorted(unknown)[0]}", "unknown field")
        if ("C" in w) == ("D" in w):
            raise SchemaError(path, "exactly one of C or D is required")
        entry = {}
        if "C" in w:
            entry["C"] = _matrix(w["C"], f"{path}.C")
            _shape(entry["C"], ((k + 1) * n, (k + 1) * n), f"{path}.C")
        else:
            entry["D"] = _matrix(w["D"], f"{path}.D")
            _shape(entry["D"], (n, n), f"{path}.D")
        if k == 0:
            extra = {"sigma", "theta_block"} & set(w)
            if extra:
                raise SchemaError(f"{path}.{sorted(extra)[0]}", "the initial weight takes no coupling")
        else:
            for key in ("sigma", "theta_block"):
                if key not in w:
                    raise SchemaError(f"{path}.{key}", "required field is missing")
            entry["sigma"] = _matrix(w["sigma"], f"{path}.sigma", square=False)
            _shape(entry["sigma"], (n, k * n), f"{path}.sigma")
            entry["theta_block"] = _matrix(w["theta_block"], f"{path}.theta_block")
            _shape(entry["theta_block"], (n, n), f"{path}.theta_block")
        out.append(entry)
    return out


def _parse_sweep(raw):
    if not isinstance(raw, dict):
        raise SchemaError("sweep", "expected an object")
    if raw.get("parameter") not in _SWEEP_PARAMETERS:
        raise SchemaError("sweep.parameter", f"expected one of {sorted(_SWEEP_PARAMETERS)}")
    grid = raw.get("grid")
    if not isinstance(grid, list) or not grid:
        raise SchemaError("sweep.grid", "expected a non-empty list of numbers")
    for i, g in enumerate(grid):
        if not _is_number(g) or g <= 0:
            raise SchemaError(f"sweep.grid[{i}]", "expected a positive number")
    return {"parameter": raw["parameter"], "grid": [float(g) for g in grid]}


def parse_problem(raw):
    """Validate a decoded JSON object and build a :class:`Problem`.

    Raises:
        SchemaError: with the dotted path of the first offending field
    """
    if not isinstance(raw, dict):
        raise SchemaError("$", "problem must be a JSON object")
    schema = raw.get("schema", PROBLEM_SCHEMA)
    if schema != PROBLEM_SCHEMA:
        raise SchemaError("schema", f"unsupported schema {schema!r}")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown field")
    if "theta" not in raw:
        raise SchemaError("theta", "required field is missing")
    theta = _matrix(raw["theta"], "theta")
    n = theta.shape[0]
    fields = {"theta": theta}
    for name in ("P", "Pi"):
        if name in raw:
            fields[name] = _matrix(raw[name], name)
            _shape(fields[name], (n, n), name)
    for name in ("A", "B"):
        if name in raw:
            fields[name] = _matrix(raw[name], name, complex_ok=True)
            _shape(fields[name], (n, n), name)
    if "factors" in raw:
        if not isinstance(raw["factors"], list) or not raw["factors"]:
            raise SchemaError("factors", "expected a non-empty list of matrices")
        fields["factors"] = [_matrix(F, f"factors[{k}]", complex_ok=True) for k, F in enumerate(raw["factors"])]
        for k, F in enumerate(fields["factors"]):
            _shape(F, (n, n), f"factors[{k}]")
    if "weights" in raw:
        fields["weights"] = _parse_weights(raw["weights"], n)
    if "sweep" in raw:
        fields["sweep"] = _parse_sweep(raw["sweep"])
    return Problem(**fields)


def load_problem(path):
    """Read and parse a problem file.

    Raises:
        SchemaError: unreadable file, invalid JSON (path ``line N``) or schema violation
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError("$", f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}", f"invalid JSON: {exc.msg} (column {exc.colno})") from None
    return parse_problem(raw)


def encode(x):
    """Convert numpy data into JSON-ready lists; complex numbers become ``[re, im]``."""
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x) and not np.any(x.imag):
            x = x.real
        return [encode(v) for v in x] if x.ndim else encode(x.item())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    return x


def _float(x):
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _dump(x, indent, level, sort_keys):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    colon = ":" if indent is None else ": "
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        return _float(x)
    if isinstance(x, (int, str)):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, dict):
        if not x:
            return "{}"
        keys = sorted(x) if sort_keys else list(x)
        items = [pad + json.dumps(str(k)) + colon + _dump(x[k], indent, level + 1, sort_keys) for k in keys]
        return "{" + ",".join(items) + end + "}"
    if isinstance(x, list):
        if not x:
            return "[]"
        # numeric rows stay on one line
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
            joiner = "," if indent is None else ", "
            return "[" + joiner.join(_float(v) if isinstance(v, float) else str(v) for v in x) + "]"
        items = [pad + _dump(v, indent, level + 1, sort_keys) for v in x]
        return "[" + ",".join(items) + end + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj, indent=2, sort_keys=False):
    """JSON text with floats at 17 significant digits (non-finite floats become null)."""
    return _dump(encode(obj), indent, 0, sort_keys)


def digest(obj):
    """SHA-256 of the compact, key-sorted serialization."""
    return hashlib.sha256(dumps(obj, indent=None, sort_keys=True).encode("utf-8")).hexdigest()
