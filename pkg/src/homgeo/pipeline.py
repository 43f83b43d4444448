"""validate -> frame -> connection -> null scan / certificate / geodesic vectors -> E(1,1) checks."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager

import numpy as np

from homgeo import e11
from homgeo.algebra import MetricTensor, pseudo_orthonormalize, signature, validate
from homgeo.catalog import CatalogEntry, is_e11
from homgeo.config import SolverConfig
from homgeo.connection import koszul_coefficients
from homgeo.errors import HomGeoError
from homgeo.geodesics import ReductiveDecomposition, geodesic_search, reductive_residual
from homgeo.nullcone import certify_nonexistence, null_scan, winding_number
from homgeo.report import Report

log = logging.getLogger(__name__)


def _floats(v) -> list:
    return [float(x) + 0.0 for x in v]


@contextmanager
def _timed(timings: dict, key: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        timings[key] = time.perf_counter() - t0


def connection_table(gamma) -> dict:
    nz = [
        {"i": int(i) + 1, "j": int(j) + 1, "k": int(k) + 1, "value": float(gamma.gamma[i, j, k])}
        for i, j, k in zip(*np.nonzero(np.abs(gamma.gamma) > 1e-15))
    ]
    return {
        "nonzero": nz,
        "torsion_defect": gamma.torsion_defect(),
        "compatibility_defect": gamma.compatibility_defect(),
    }


def run_pipeline(entry: CatalogEntry, config: SolverConfig) -> Report:
    timings: dict = {}
    val = validate(entry.algebra)
    report = Report(
        entry={"name": entry.name, "dim": entry.dim, "provenance": entry.provenance},
        mode=config.mode,
        config=config.as_dict(),
        validation={
            "passed": val.passed,
            "antisymmetry_defect": val.antisymmetry_defect,
            "jacobi_defect": val.jacobi_defect,
            "worst_jacobi": list(val.worst_jacobi) if val.worst_jacobi else None,
        },
        timings=timings,
    )
    if not val.passed:
        report.errors.append(f"Jacobi identity fails at (i, j, k, m) = {val.worst_jacobi}")
        return report
    try:
        with _timed(timings, "frame"):
            sig = signature(entry.metric)
            frame = pseudo_orthonormalize(entry.metric, lorentzian=sig[1] == 1)
        report.frame = {"signature": list(frame.signature), "P": [_floats(r) for r in frame.P]}
        with _timed(timings, "connection"):
            gamma = koszul_coefficients(entry.algebra, frame)
        report.connection = connection_table(gamma)

        if frame.is_lorentzian:
            with _timed(timings, "null_scan"):
                scan = null_scan(gamma, config)
            report.null_scan = {
                "zeros": [
                    {
                        "tilde_x": _floats(z.direction.tilde_x),
                        "x_frame": _floats(z.direction.x),
                        "x_user": _floats(frame.from_frame(z.direction.x)),
                        "residual": float(z.residual),
                        "k": float(z.k) + 0.0,
                    }
                    for z in scan.zeros
                ],
                "grid_min": scan.grid_min,
                "plateau": scan.plateau,
                "truncated": scan.truncated,
            }
            if scan.plateau:
                report.warnings.append("null tangent field vanishes on a continuum; representatives only")
            if entry.dim % 2 == 0 and not scan.zeros:
                report.warnings.append("even-dimensional Lorentzian entry without a null zero found")
            with _timed(timings, "certificate"):
                cert = certify_nonexistence(gamma, config)
            report.certificate = {
                "kind": cert.kind,
                "min_norm": cert.min_norm,
                "grid_step": cert.grid_step,
                "lipschitz_bound": cert.lipschitz_bound,
                "witness_tilde_x": _floats(cert.witness.tilde_x) if cert.witness else None,
                "witness_x": _floats(cert.witness.x) if cert.witness else None,
                "witness_residual": cert.witness_residual,
                "witness_k": None if cert.witness_k is None else float(cert.witness_k) + 0.0,
            }
            if entry.dim == 3 and cert.kind == "nonexistence-certified":
                report.winding_number = winding_number(gamma, config)
        else:
            report.warnings.append(f"signature {frame.signature} is not Lorentzian; null-cone analysis skipped")

        if config.mode != "null-only":
            with _timed(timings, "geodesic_vectors"):
                search = geodesic_search(gamma, config)
            dec = entry.decomposition or ReductiveDecomposition(entry.algebra, [], MetricTensor(entry.metric.g))
            for cand in search.candidates:
                x_user = frame.from_frame(cand.x)
                rec = {
                    "x_frame": _floats(cand.x),
                    "x_user": _floats(x_user),
                    "k": float(cand.k) + 0.0,
                    "k_lemma": -float(cand.k) + 0.0,
                    "causal": cand.causal,
                    "residual_nabla": cand.residual_nabla,
                    "residual_lemma": cand.residual_lemma,
                    "reductive_residual": reductive_residual(dec, x_user, -cand.k),
                    "flags": list(cand.flags),
                }
                if dec.h_indices:
                    xh = np.linalg.norm(x_user[list(dec.h_indices)])
                    xm = np.linalg.norm(x_user[list(dec.m_indices)])
                    if xh > xm:
                        rec["flags"].append("h-dominant-unverified")
                report.candidates.append(rec)
            report.candidates_plateau = search.plateau
            if not search.candidates:
                report.warnings.append("no geodesic vector found")
            if search.plateau:
                report.warnings.append("geodesic vectors form a continuum; representatives only")

        if is_e11(entry) and config.mode == "verify":
            with _timed(timings, "verifier"):
                suite = e11.run_suite()
                checks = []
                for rec in report.candidates:
                    rep = e11.verify_homogeneous_geodesic(rec["x_user"], rec["k_lemma"])
                    checks.append({"x_frame": rec["x_frame"], "k_lemma": rec["k_lemma"],
                                   "branch": rep.branch, "deviation": rep.deviation, "passed": rep.passed})
            passed = (
                all(v["passed"] for v in suite["frame_vectors"].values())
                and not suite["null_e1_plus_e3"]["passed_any"]
                and all(c["passed"] for c in checks)
            )
            report.verifier = {"suite": suite, "candidates": checks, "passed": passed}
            if not passed:
                report.errors.append("E(1,1) coordinate verification failed")
    except HomGeoError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
    return report
