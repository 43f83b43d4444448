"""Entry documents (JSON) and the built-in catalog.

Document layout, indices 1-based::

    {
      "name": "e11",
      "dim": 3,
      "brackets": [{"i": 1, "j": 2, "coeffs": [[3, -2.0]]}, ...],   # only i < j
      "metric": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
      "h_indices": [],           # optional isotropy subalgebra
      "labels": ["E1", ...],     # optional
      "provenance": "..."        # optional
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from homgeo.algebra import LieAlgebra, MetricTensor, validate
from homgeo.errors import MetricError, ParseError, ValidationError
from homgeo.geodesics import ReductiveDecomposition

BUILTIN_PREFIX = "builtin:"


@dataclass(eq=False)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    metric: MetricTensor
    h_indices: Optional[tuple] = None  # 0-based
    provenance: str = ""

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def decomposition(self) -> Optional[ReductiveDecomposition]:
        if self.h_indices is None:
            return None
        m = [i for i in range(self.dim) if i not in self.h_indices]
        return ReductiveDecomposition(
            self.algebra, self.h_indices, MetricTensor(self.metric.g[np.ix_(m, m)]), m
        )

    def __eq__(self, other):
        if not isinstance(other, CatalogEntry):
            return NotImplemented
        return (
            self.name == other.name
            and self.algebra == other.algebra
            and self.algebra.labels == other.algebra.labels
            and self.metric == other.metric
            and self.h_indices == other.h_indices
            and self.provenance == other.provenance
        )

    def same_geometry(self, other: "CatalogEntry") -> bool:
        return self.algebra == other.algebra and self.metric == other.metric


def _field_error(path: str, msg: str) -> ParseError:
    return ParseError(f"{path}: {msg}")


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _field_error(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise _field_error(path, "must be finite")
    return float(value)


def _index(value, dim: int, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _field_error(path, f"expected an integer index, got {value!r}")
    if not 1 <= value <= dim:
        raise _field_error(path, f"index {value} outside 1..{dim}")
    return value - 1


def parse_entry(document) -> CatalogEntry:
    """Build a validated entry from a JSON string (or an already-decoded dict)."""
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    else:
        data = document
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")

    dim = data.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise _field_error("dim", f"expected a positive integer, got {dim!r}")

    brackets = data.get("brackets", [])
    if not isinstance(brackets, list):
        raise _field_error("brackets", "expected a list")
    c = np.zeros((dim, dim, dim))
    seen = set()
    for n, item in enumerate(brackets):
        path = f"brackets[{n}]"
        if not isinstance(item, dict):
            raise _field_error(path, "expected an object with i, j, coeffs")
        i = _index(item.get("i"), dim, path + ".i")
        j = _index(item.get("j"), dim, path + ".j")
        if not i < j:
            raise _field_error(path, f"only i < j entries are allowed, got ({i + 1}, {j + 1})")
        if (i, j) in seen:
            raise _field_error(path, f"duplicate bracket ({i + 1}, {j + 1})")
        seen.add((i, j))
        coeffs = item.get("coeffs")
        if not isinstance(coeffs, list):
            raise _field_error(path + ".coeffs", "expected a list of [k, value] pairs")
        for m, pair in enumerate(coeffs):
            cpath = f"{path}.coeffs[{m}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise _field_error(cpath, "expected a [k, value] pair")
            k = _index(pair[0], dim, cpath + "[0]")
            value = _number(pair[1], cpath + "[1]")
            c[i, j, k] += value
            c[j, i, k] -= value

    metric = data.get("metric")
    if not isinstance(metric, list) or len(metric) != dim:
        raise _field_error("metric", f"expected {dim} rows")
    rows = []
    for r, row in enumerate(metric):
        if not isinstance(row, list) or len(row) != dim:
            raise _field_error(f"metric[{r}]", f"expected {dim} entries")
        rows.append([_number(v, f"metric[{r}][{s}]") for s, v in enumerate(row)])
    g = np.array(rows)
    if not np.array_equal(g, g.T):
        raise MetricError("metric is not symmetric")

    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
        raise _field_error("labels", f"expected {dim} strings")

    h = data.get("h_indices")
    if h is not None:
        if not isinstance(h, list):
            raise _field_error("h_indices", "expected a list")
        h = tuple(sorted({_index(v, dim, f"h_indices[{n}]") for n, v in enumerate(h)}))

    algebra = LieAlgebra(c, labels)
    report = validate(algebra)
    if not report.passed:
        raise ValidationError(
            f"Jacobi identity fails: defect {report.jacobi_defect:.3g} at (i, j, k, m) = {report.worst_jacobi}"
        )
    entry = CatalogEntry(
        name=str(data.get("name", "unnamed")),
        algebra=algebra,
        metric=MetricTensor(g),
        h_indices=h,
        provenance=str(data.get("provenance", "")),
    )
    if h is not None:
        entry.decomposition  # validates the splitting
    return entry


def entry_to_dict(entry: CatalogEntry) -> dict:
    c = entry.algebra.structure
    n = entry.dim
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = [[k + 1, float(c[i, j, k])] for k in range(n) if c[i, j, k] != 0.0]
            if coeffs:
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    doc = {
        "name": entry.name,
        "dim": n,
        "brackets": brackets,
        "metric": entry.metric.g.tolist(),
    }
    if entry.h_indices is not None:
        doc["h_indices"] = [i + 1 for i in entry.h_indices]
    if entry.algebra.labels is not None:
        doc["labels"] = list(entry.algebra.labels)
    if entry.provenance:
        doc["provenance"] = entry.provenance
    return doc


def dump_entry(entry: CatalogEntry) -> str:
    return json.dumps(entry_to_dict(entry), indent=2)


def _minkowski(n: int) -> dict:
    return {
        "name": f"minkowski{n}",
        "dim": n,
        "brackets": [],
        "metric": np.diag([1.0] * (n - 1) + [-1.0]).tolist(),
        "provenance": "abelian algebra with a Lorentzian scalar product",
    }


_BUILTIN_DOCS = {
    "e11": {
        "name": "e11",
        "dim": 3,
        # [E2, E1] = 2 E3, [E2, E3] = E1 / 2, [E1, E3] = 0
        "brackets": [
            {"i": 1, "j": 2, "coeffs": [[3, -2.0]]},
            {"i": 2, "j": 3, "coeffs": [[1, 0.5]]},
        ],
        "metric": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]],
        "labels": ["E1", "E2", "E3"],
        "provenance": "E(1,1) with the left-invariant Lorentzian metric making {E1, E2, E3} pseudo-orthonormal",
    },
    "e11_plus_r": {
        "name": "e11_plus_r",
        "dim": 4,
        # [F2, F1] = 2 F4, [F2, F4] = F1 / 2, F3 central
        "brackets": [
            {"i": 1, "j": 2, "coeffs": [[4, -2.0]]},
            {"i": 2, "j": 4, "coeffs": [[1, 0.5]]},
        ],
        "metric": np.diag([1.0, 1.0, 1.0, -1.0]).tolist(),
        "labels": ["F1", "F2", "F3", "F4"],
        "provenance": "E(1,1) x R, product metric",
    },
    "heisenberg3": {
        "name": "heisenberg3",
        "dim": 3,
        "brackets": [{"i": 1, "j": 2, "coeffs": [[3, 1.0]]}],
        "metric": np.diag([1.0, 1.0, -1.0]).tolist(),
        "provenance": "Heisenberg algebra, standard basis, diag(1, 1, -1)",
    },
    "minkowski2": _minkowski(2),
    "minkowski4": _minkowski(4),
    "minkowski6": _minkowski(6),
}


def builtin_names() -> list:
    return sorted(_BUILTIN_DOCS)


def builtin(name: str) -> CatalogEntry:
    try:
        return parse_entry(_BUILTIN_DOCS[name])
    except KeyError:
        raise ParseError(f"unknown built-in entry {name!r}; available: {', '.join(builtin_names())}") from None


def load_entry(source: str) -> CatalogEntry:
    """``builtin:NAME`` or a path to a JSON document."""
    if source.startswith(BUILTIN_PREFIX):
        return builtin(source[len(BUILTIN_PREFIX):])
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc.strerror}") from exc
    return parse_entry(text)


def is_e11(entry: CatalogEntry) -> bool:
    return entry.same_geometry(builtin("e11"))

