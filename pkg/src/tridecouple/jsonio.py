"""JSON documents for tensors, maps and scalars.

A tensor document is either

    {"n": 3, "entries": [{"idx": [1, 1, 1], "val": "2"}, ...]}

with 1-based indices (any order; missing entries are zero), or

    {"n": 3, "cubic": {"3,0,0": 2, "1,1,1": "-12"}}

keyed by exponent tuples.  Values that are strings (``"p/q"``) make the
whole document exact; JSON floats make it float; mixing the two is an
error.  Integer-only documents are exact.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources

import numpy as np

from .errors import DimensionMismatch, MalformedInput, MalformedPolynomial
from .tensor import OrthogonalMap, SymTensor3, sorted_triples, tensor_from_cubic

__all__ = ["digest", "dump_tensor", "load_schema", "load_tensor", "map_to_json", "parse_tensor", "scalar_to_json"]


def _kind(v):
    if isinstance(v, bool) or v is None:
        raise MalformedInput(f"invalid tensor value {v!r}")
    if isinstance(v, str):
        return "rational"
    if isinstance(v, int):
        return "int"
    if isinstance(v, float):
        return "float"
    raise MalformedInput(f"invalid tensor value {v!r}")


def _convert(v, exact):
    if exact:
        try:
            return Fraction(v) if not isinstance(v, float) else Fraction(repr(v))
        except (ValueError, ZeroDivisionError):
            raise MalformedInput(f"not a rational number: {v!r}") from None
    return float(v)


def _mode(values, force_exact):
    kinds = {_kind(v) for v in values}
    if "rational" in kinds and "float" in kinds:
        raise MalformedInput("document mixes rational strings and floats")
    if force_exact:
        return True
    return "float" not in kinds


def parse_tensor(doc, force_exact=False) -> SymTensor3:
    """Build a tensor from a decoded JSON document.

    ``force_exact`` reads floats through their decimal representation, so
    0.1 becomes 1/10.
    """
    if not isinstance(doc, dict):
        raise MalformedInput("tensor document must be a JSON object")
    if "cubic" in doc:
        cubic = doc["cubic"]
        if not isinstance(cubic, dict):
            raise MalformedInput("'cubic' must map monomials to coefficients")
        n = doc.get("n")
        if n is None:
            if not cubic:
                raise MalformedInput("empty cubic needs an explicit 'n'")
            n = len(str(next(iter(cubic))).split(","))
        _check_n(n)
        exact = _mode(cubic.values(), force_exact)
        try:
            return tensor_from_cubic({k: _convert(v, exact) for k, v in cubic.items()}, n, exact)
        except (MalformedPolynomial, DimensionMismatch) as exc:
            raise MalformedInput(str(exc)) from None
    if "entries" not in doc or "n" not in doc:
        raise MalformedInput("tensor document needs 'n' and 'entries' (or 'cubic')")
    n = doc["n"]
    _check_n(n)
    entries = doc["entries"]
    if not isinstance(entries, list):
        raise MalformedInput("'entries' must be a list")
    vals = []
    for e in entries:
        if not isinstance(e, dict) or "idx" not in e or "val" not in e:
            raise MalformedInput(f"bad entry {e!r}")
        vals.append(e["val"])
    exact = _mode(vals, force_exact)
    out = {}
    for e in entries:
        idx = e["idx"]
        if not (isinstance(idx, list) and len(idx) == 3 and all(isinstance(i, int) and not isinstance(i, bool) for i in idx)):
            raise MalformedInput(f"bad index {idx!r}")
        if any(i < 1 or i > n for i in idx):
            raise MalformedInput(f"index {idx} out of range 1..{n}")
        key = tuple(sorted(i - 1 for i in idx))
        if key in out:
            raise MalformedInput(f"duplicate entry for index {idx}")
        out[key] = _convert(e["val"], exact)
    return SymTensor3.from_entries(n, out, exact)


def _check_n(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise MalformedInput(f"'n' must be an integer >= 2, got {n!r}")


def load_tensor(path, force_exact=False) -> SymTensor3:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from None
    return parse_tensor(doc, force_exact)


def scalar_to_json(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return float(x)


def dump_tensor(gamma: SymTensor3):
    """Tensor document with every stored entry, 1-based."""
    return {
        "n": gamma.n,
        "entries": [
            {"idx": [i + 1 for i in t], "val": scalar_to_json(v)}
            for t, v in zip(sorted_triples(gamma.n), gamma.values)
        ],
    }


def map_to_json(sigma: OrthogonalMap):
    return {
        "matrix": [[scalar_to_json(x) for x in row] for row in sigma.matrix],
        "det": sigma.det_sign,
    }


def digest(doc):
    """sha256 of the canonical JSON encoding of a document."""
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def load_schema(name):
    """One of the bundled JSON schemas: ``"tensor"`` or ``"report"``."""
    text = resources.files("tridecouple").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
