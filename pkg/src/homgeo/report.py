"""Solver report: JSON (schema-versioned, round-trippable) and a text summary."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

SCHEMA_VERSION = "homgeo.report/1"
FORMATS = ("json", "text")
NONEXISTENCE_LINE = "no light-like homogeneous geodesic"

EXIT_ZERO_FOUND = 0
EXIT_CERTIFIED = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3


@dataclass
class Report:
    entry: dict
    mode: str
    config: dict
    validation: dict
    frame: Optional[dict] = None
    connection: Optional[dict] = None
    null_scan: Optional[dict] = None
    certificate: Optional[dict] = None
    candidates: list = field(default_factory=list)
    candidates_plateau: bool = False
    winding_number: Optional[int] = None
    verifier: Optional[dict] = None
    warnings: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
        return cls(**data)

    @property
    def exit_code(self) -> int:
        if self.errors:
            return EXIT_ERROR
        if self.certificate is None:
            return EXIT_ZERO_FOUND if self.candidates else EXIT_INCONCLUSIVE
        return {
            "zero-found": EXIT_ZERO_FOUND,
            "nonexistence-certified": EXIT_CERTIFIED,
        }.get(self.certificate["kind"], EXIT_INCONCLUSIVE)


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse_report(text: str) -> Report:
    return Report.from_dict(json.loads(text))


def determinism_digest(report: Report) -> str:
    """SHA-256 of the JSON report with timing fields removed."""
    data = report.to_dict()
    data.pop("timings", None)
    blob = json.dumps(data, indent=2, sort_keys=True, allow_nan=False)
    return hashlib.sha256(blob.encode()).hexdigest()


def _vec(v) -> str:
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


def to_text(report: Report) -> str:
    lines = [f"entry: {report.entry['name']} (dim {report.entry['dim']})", f"mode: {report.mode}"]
    v = report.validation
    lines.append(
        f"validation: {'pass' if v['passed'] else 'FAIL'} "
        f"(antisymmetry {v['antisymmetry_defect']:.3g}, jacobi {v['jacobi_defect']:.3g})"
    )
    if report.frame:
        p, q = report.frame["signature"]
        lines.append(f"signature: ({p}, {q})")
    if report.connection:
        lines.append("connection (nabla_{E_i} E_j = sum_k gamma_ij^k E_k, frame basis):")
        nz = report.connection["nonzero"]
        if not nz:
            lines.append("  all coefficients vanish")
        for item in nz:
            lines.append(f"  gamma[{item['i']}][{item['j']}][{item['k']}] = {item['value']:.12g}")
    if report.null_scan is not None:
        ns = report.null_scan
        lines.append(f"null directions: {len(ns['zeros'])} zero(s) of the tangent field, grid min {ns['grid_min']:.6g}"
                     + (" [plateau]" if ns["plateau"] else ""))
        for z in ns["zeros"]:
            lines.append(f"  x = {_vec(z['x_frame'])}  k = {z['k']:.6g}  residual {z['residual']:.3g}")
    if report.winding_number is not None:
        lines.append(f"winding number of the null tangent field: {report.winding_number}")
    cert = report.certificate
    if cert is not None:
        if cert["kind"] == "nonexistence-certified":
            lines.append(
                f"certificate: nonexistence certified (min |t| = {cert['min_norm']:.9g} > "
                f"L*h = {cert['lipschitz_bound'] * cert['grid_step']:.6g})"
            )
            lines.append(NONEXISTENCE_LINE)
        elif cert["kind"] == "zero-found":
            lines.append(f"certificate: light-like homogeneous geodesic found at x = {_vec(cert['witness_x'])}, "
                         f"k = {cert['witness_k']:.6g}")
        else:
            lines.append(f"certificate: inconclusive (min |t| = {cert['min_norm']:.6g}, "
                         f"L*h = {cert['lipschitz_bound'] * cert['grid_step']:.6g})")
    if report.mode != "null-only":
        lines.append(f"geodesic vectors: {len(report.candidates)}" + (" [plateau]" if report.candidates_plateau else ""))
        for c in report.candidates:
            lines.append(
                f"  x = {_vec(c['x_frame'])}  {c['causal']}  k = {c['k']:.6g}  "
                f"residuals {c['residual_nabla']:.3g} / {c['residual_lemma']:.3g}"
                + (f"  [{', '.join(c['flags'])}]" if c["flags"] else "")
            )
    if report.verifier is not None:
        ver = report.verifier
        lines.append(f"coordinate verification: {'pass' if ver['passed'] else 'FAIL'}")
        for name, item in ver["suite"]["frame_vectors"].items():
            lines.append(f"  {name}: orbit vs geodesic deviation {item['deviation']:.3g}")
        nul = ver["suite"]["null_e1_plus_e3"]
        lines.append(f"  E1+E3: min deviation over k in [{nul['k_min']:g}, {nul['k_max']:g}] = {nul['min_deviation']:.3g}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    for e in report.errors:
        lines.append(f"error: {e}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
