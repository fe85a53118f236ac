"""Reading, writing, and generating vote-profile files.

Two formats are supported.  Dense CSV holds a single matrix: the first line
is the agent count, followed by that many comma-separated rows.  JSON holds a
matrix ({"n": ..., "weights": [[...]]} or {"n": ..., "triplets": [[i, j, w],
...]} with 1-based labels) or a per-job tuple ({"n": ..., "m": ...,
"matrices": [...]}), plus an optional default "k".
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .errors import InstanceFormatError
from .matrices import InstanceTuple, Weight, WeightMatrix
from .oracle import tightness_instance

GENERATOR_KINDS = ("uniform-int", "unweighted-bernoulli", "tightness")


def _parse_number(text: str, where: str) -> Weight:
    raw = text.strip()
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        value = float(raw)
    except ValueError:
        raise InstanceFormatError(f"{where}: {raw!r} is not a number")
    return value


def parse_csv(text: str) -> WeightMatrix:
    """Dense CSV: one header line with n, then n rows of n weights."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise InstanceFormatError("line 1: expected the agent count, got empty input")
    try:
        n = int(lines[0])
    except ValueError:
        raise InstanceFormatError(f"line 1: expected the agent count, got {lines[0]!r}")
    if len(lines) - 1 != n:
        raise InstanceFormatError(f"expected {n} matrix rows, got {len(lines) - 1}")
    rows = []
    for offset, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != n:
            raise InstanceFormatError(
                f"line {offset}: expected {n} fields, got {len(fields)}"
            )
        rows.append(
            tuple(
                _parse_number(fieldtext, f"line {offset}, field {column}")
                for column, fieldtext in enumerate(fields, start=1)
            )
        )
    return WeightMatrix(tuple(rows))


def serialize_csv(A: WeightMatrix) -> str:
    lines = [str(A.n)]
    lines.extend(",".join(str(w) for w in row) for row in A.rows)
    return "\n".join(lines) + "\n"


def _matrix_from_json(obj: dict, n: int, where: str) -> WeightMatrix:
    if "weights" in obj:
        rows = obj["weights"]
        if len(rows) != n:
            raise InstanceFormatError(f"{where}: expected {n} weight rows, got {len(rows)}")
        return WeightMatrix(tuple(tuple(row) for row in rows))
    if "triplets" in obj:
        votes = []
        for raw in obj["triplets"]:
            if len(raw) != 3:
                raise InstanceFormatError(f"{where}: triplet {raw!r} needs exactly (i, j, w)")
            i, j, w = raw
            if i == j:
                raise InstanceFormatError(
                    f"{where}: triplet ({i}, {j}, {w!r}): diagonal votes are not allowed"
                )
            votes.append((int(i), int(j), w))
        return WeightMatrix.from_votes(n, votes)
    raise InstanceFormatError(f"{where}: needs either 'weights' or 'triplets'")


def parse_json_document(doc: dict) -> tuple[WeightMatrix | InstanceTuple, int | None]:
    """Decode a JSON instance document; returns the instance and optional k."""
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError):
        raise InstanceFormatError("instance document needs an integer field 'n'")
    default_k = doc.get("k")
    if default_k is not None:
        default_k = int(default_k)
    if "matrices" in doc:
        raw = doc["matrices"]
        declared = doc.get("m")
        if declared is not None and int(declared) != len(raw):
            raise InstanceFormatError(
                f"declared m={declared} but {len(raw)} matrices are present"
            )
        matrices = tuple(
            _matrix_from_json(entry, n, f"matrix {index}")
            for index, entry in enumerate(raw, start=1)
        )
        return InstanceTuple(matrices), default_k
    return _matrix_from_json(doc, n, "matrix"), default_k


def instance_to_json_dict(
    instance: WeightMatrix | InstanceTuple, k: int | None = None
) -> dict:
    if isinstance(instance, WeightMatrix):
        doc: dict = {"n": instance.n, "weights": [list(row) for row in instance.rows]}
    else:
        doc = {
            "n": instance.n,
            "m": instance.m,
            "matrices": [
                {"weights": [list(row) for row in mat.rows]} for mat in instance.matrices
            ],
        }
    if k is not None:
        doc["k"] = k
    return doc


def parse_instance(text: str) -> WeightMatrix | InstanceTuple:
    """Decode instance content, sniffing JSON versus CSV."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON: {exc}")
        return parse_json_document(doc)[0]
    return parse_csv(text)


def load_instance(path) -> tuple[WeightMatrix | InstanceTuple, int | None]:
    """Read an instance file; returns the instance and its optional default k."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFormatError(f"{path}: {exc}")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"{path}: invalid JSON: {exc}")
        return parse_json_document(doc)
    return parse_csv(text), None


def _random_rows(rng: random.Random, n: int, values, weights=None) -> WeightMatrix:
    rows = []
    for i in range(n):
        row = rng.choices(values, weights=weights, k=n)
        row[i] = 0
        rows.append(tuple(row))
    return WeightMatrix(tuple(rows))


def generate(
    kind: str,
    *,
    n: int,
    seed: int = 0,
    m: int = 1,
    k: int | None = None,
    max_weight: int = 10,
    p: float = 0.5,
) -> WeightMatrix | InstanceTuple:
    """Deterministically generate an instance from (kind, parameters, seed)."""
    if kind not in GENERATOR_KINDS:
        raise InstanceFormatError(
            f"unknown generator kind {kind!r}; pick one of {', '.join(GENERATOR_KINDS)}"
        )
    if m < 1:
        raise InstanceFormatError(f"job count m must be positive, got {m}")
    if kind == "tightness":
        if k is None:
            raise InstanceFormatError("the tightness generator needs k")
        if m != 1:
            raise InstanceFormatError("the tightness generator produces a single profile")
        return tightness_instance(n, k)
    rng = random.Random(seed)
    if kind == "uniform-int":
        make = lambda: _random_rows(rng, n, range(max_weight + 1))
    else:  # unweighted-bernoulli
        if not 0 <= p <= 1:
            raise InstanceFormatError(f"vote probability p must lie in [0, 1], got {p}")
        make = lambda: _random_rows(rng, n, (1, 0), weights=(p, 1 - p))
    matrices = tuple(make() for _ in range(m))
    return matrices[0] if m == 1 else InstanceTuple(matrices)
