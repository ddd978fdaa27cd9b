"""Reading and writing tensors and vector sets.

Tensor text format (indices 1-based)::

    tensor v1
    modes <d>
    dims <m1> ... <md>
    nnz <N>
    <i1> ... <id> <value>        # N lines, value > 0

Vector sets (targets, scaling vectors, certificates) use a header line
``targets v1`` / ``scaling v1`` / ``certificate v1`` followed by one line of
values per mode. Lines starting with ``#`` and blank lines are ignored.

Files whose name ends in ``.json`` use the JSON mirror instead:
``{"dims": [...], "entries": [[[i1, ..., id], value], ...]}`` for tensors and
``{"targets": [[...], ...]}`` (or ``"scaling"`` / ``"certificate"``) for
vector sets.
"""
from __future__ import annotations

import json
import os

import numpy as np

from .exceptions import FormatError
from .tensor import SparseTensor, TargetSums

VECTOR_KINDS = ("targets", "scaling", "certificate")


def fmt(x) -> str:
    return f"{float(x):.17g}"


def _is_json(path) -> bool:
    return str(path).lower().endswith(".json")


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def _int(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected integer {what}, got {tok!r}", lineno) from None


def _float(tok, lineno, what):
    try:
        v = float(tok)
    except ValueError:
        raise FormatError(f"expected number {what}, got {tok!r}", lineno) from None
    if not np.isfinite(v):
        raise FormatError(f"non-finite {what} {tok!r}", lineno)
    return v


def _keyword(lines, key, lineno_hint):
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise FormatError(f"missing '{key}' line", lineno_hint) from None
    if toks[0] != key:
        raise FormatError(f"expected '{key}' line, got {toks[0]!r}", lineno)
    return lineno, toks[1:]


def parse_tensor(text: str, min_value: float = 0.0) -> SparseTensor:
    """Parse the tensor text format. Values ``<= min_value`` are rejected."""
    lines = _content_lines(text)
    lineno, head = _keyword(lines, "tensor", 1)
    if head != ["v1"]:
        raise FormatError("unsupported tensor header, expected 'tensor v1'", lineno)

    lineno, toks = _keyword(lines, "modes", lineno)
    if len(toks) != 1:
        raise FormatError("'modes' takes exactly one integer", lineno)
    d = _int(toks[0], lineno, "mode count")
    if d < 1:
        raise FormatError("mode count must be positive", lineno)

    lineno, toks = _keyword(lines, "dims", lineno)
    if len(toks) != d:
        raise FormatError(f"'dims' needs {d} sizes, got {len(toks)}", lineno)
    dims = tuple(_int(t, lineno, "dimension") for t in toks)
    if any(m < 1 for m in dims):
        raise FormatError("dimensions must be positive", lineno)

    lineno, toks = _keyword(lines, "nnz", lineno)
    if len(toks) != 1:
        raise FormatError("'nnz' takes exactly one integer", lineno)
    nnz = _int(toks[0], lineno, "entry count")
    if nnz < 0:
        raise FormatError("entry count must be nonnegative", lineno)

    idx = np.zeros((nnz, d), dtype=np.int64)
    vals = np.zeros(nnz)
    seen = {}
    for e in range(nnz):
        try:
            lineno, toks = next(lines)
        except StopIteration:
            raise FormatError(f"expected {nnz} entries, found {e}", lineno) from None
        if len(toks) != d + 1:
            raise FormatError(f"entry needs {d} indices and a value", lineno)
        tup = tuple(_int(t, lineno, "index") for t in toks[:d])
        for k, (i, m) in enumerate(zip(tup, dims)):
            if not 1 <= i <= m:
                raise FormatError(f"index {i} out of range 1..{m} in mode {k + 1}", lineno)
        v = _float(toks[d], lineno, "value")
        if v <= min_value:
            raise FormatError(
                f"value {toks[d]} must exceed {min_value:g}; zeros are written by omission",
                lineno,
            )
        if tup in seen:
            raise FormatError(f"duplicate entry {tup} (first on line {seen[tup]})", lineno)
        seen[tup] = lineno
        idx[e] = np.array(tup) - 1
        vals[e] = v
    for lineno, _ in lines:
        raise FormatError(f"trailing content after {nnz} entries", lineno)
    return SparseTensor(dims, idx, vals)


def format_tensor(T: SparseTensor) -> str:
    out = [
        "tensor v1",
        f"modes {T.ndim}",
        "dims " + " ".join(str(m) for m in T.dims),
        f"nnz {T.nnz}",
    ]
    for row, v in zip(T.indices, T.values):
        out.append(" ".join(str(int(i) + 1) for i in row) + " " + fmt(v))
    return "\n".join(out) + "\n"


def parse_vectors(text: str, kind: str = "targets", modes: int | None = None) -> list:
    """Parse a ``<kind> v1`` vector-set file into a list of arrays."""
    if kind not in VECTOR_KINDS:
        raise ValueError(f"kind must be one of {VECTOR_KINDS}")
    lines = _content_lines(text)
    lineno, head = _keyword(lines, kind, 1)
    if head != ["v1"]:
        raise FormatError(f"unsupported header, expected '{kind} v1'", lineno)
    vectors = []
    for lineno, toks in lines:
        vectors.append(np.array([_float(t, lineno, "component") for t in toks]))
    if not vectors:
        raise FormatError("no vectors given", lineno)
    if modes is not None and len(vectors) != modes:
        raise FormatError(f"expected {modes} vectors, got {len(vectors)}", lineno)
    return vectors


def format_vectors(vectors, kind: str = "targets") -> str:
    if kind not in VECTOR_KINDS:
        raise ValueError(f"kind must be one of {VECTOR_KINDS}")
    vecs = vectors.vectors if hasattr(vectors, "vectors") else vectors
    return f"{kind} v1\n" + "".join(" ".join(fmt(x) for x in v) + "\n" for v in vecs)


def parse_targets(text: str) -> TargetSums:
    vecs = parse_vectors(text, "targets")
    try:
        return TargetSums(tuple(vecs))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# JSON mirror


def tensor_to_json(T: SparseTensor) -> dict:
    return {
        "dims": list(T.dims),
        "entries": [[[int(i) + 1 for i in row], float(v)] for row, v in zip(T.indices, T.values)],
    }


def tensor_from_json(obj, min_value: float = 0.0) -> SparseTensor:
    try:
        dims = tuple(int(m) for m in obj["dims"])
        entries = obj["entries"]
        tuples = [tuple(int(i) for i in e[0]) for e in entries]
        vals = [float(e[1]) for e in entries]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"malformed tensor JSON: {exc}") from None
    if len(set(tuples)) != len(tuples):
        raise FormatError("duplicate entry in tensor JSON")
    for n, (tup, v) in enumerate(zip(tuples, vals)):
        if len(tup) != len(dims) or any(not 1 <= i <= m for i, m in zip(tup, dims)):
            raise FormatError(f"entry {n}: index {list(tup)} out of range")
        if not np.isfinite(v) or v <= min_value:
            raise FormatError(f"entry {n}: value {v!r} must exceed {min_value:g}")
    idx = np.array(tuples, dtype=np.int64).reshape(-1, len(dims)) - 1
    return SparseTensor(dims, idx, np.array(vals))


def vectors_from_json(obj, kind="targets") -> list:
    try:
        return [np.array([float(x) for x in v]) for v in obj[kind]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed {kind} JSON: {exc}") from None


# file helpers


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def read_tensor(path, min_value: float = 0.0) -> SparseTensor:
    text = _read(path)
    try:
        if _is_json(path):
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
            return tensor_from_json(obj, min_value)
        return parse_tensor(text, min_value)
    except FormatError as exc:
        raise FormatError(exc.message, exc.lineno, path) from None


def read_vectors(path, kind="targets") -> list:
    text = _read(path)
    try:
        if _is_json(path):
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
            return vectors_from_json(obj, kind)
        return parse_vectors(text, kind)
    except FormatError as exc:
        raise FormatError(exc.message, exc.lineno, path) from None


def read_targets(path) -> TargetSums:
    vecs = read_vectors(path, "targets")
    try:
        return TargetSums(tuple(vecs))
    except ValueError as exc:
        raise FormatError(str(exc), path=path) from None


def write_tensor(path, T: SparseTensor):
    _write(path, json.dumps(tensor_to_json(T)) + "\n" if _is_json(path) else format_tensor(T))


def write_vectors(path, vectors, kind="targets"):
    vecs = vectors.vectors if hasattr(vectors, "vectors") else vectors
    if _is_json(path):
        text = json.dumps({kind: [np.asarray(v).tolist() for v in vecs]}) + "\n"
    else:
        text = format_vectors(vecs, kind)
    _write(path, text)


def _write(path, text):
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
