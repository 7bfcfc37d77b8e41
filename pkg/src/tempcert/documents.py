"""JSON document formats for states, channels, processes, ensembles, tables, reports.

Complex numbers are encoded as two-element ``[re, im]`` arrays and matrices as
row-major nested arrays; dimensions are always explicit.  Unknown fields are
rejected so that a document either parses exactly or fails loudly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .channels import CptpReport, Process, SuperOp
from .ensembles import ProductEnsemble
from .operators import validate_density
from .sot import CorrelationTable
from .temporal import CertificationResult, CompatibilityReport

__all__ = [
    "SCHEMA_VERSION",
    "encode_matrix",
    "decode_matrix",
    "state_document",
    "parse_state_document",
    "channel_document",
    "parse_channel_document",
    "process_document",
    "parse_process_document",
    "ensemble_document",
    "parse_ensemble_document",
    "correlations_document",
    "parse_correlations_document",
    "report_document",
    "load_document",
    "dump_document",
]

SCHEMA_VERSION = "1"

_KIND_FIELDS: dict[str, tuple[set[str], set[str]]] = {
    "state": ({"dim_a", "dim_b", "matrix"}, set()),
    "channel": ({"dim_in", "dim_out", "choi"}, {"diagnostics"}),
    "process": ({"dim_in", "dim_out", "choi", "input_state"}, set()),
    "ensemble": ({"dim_a", "dim_b", "weights", "states_a", "states_b"}, set()),
    "correlations": ({"qubits", "table"}, set()),
    "report": ({"tolerance", "ppt", "ppt_min_eigenvalue", "sides"}, set()),
}


def _check_fields(doc: dict[str, Any], kind: str) -> None:
    required, optional = _KIND_FIELDS[kind]
    required = required | {"schema_version", "kind"}
    unknown = set(doc) - required - optional
    if unknown:
        raise ValueError(f"unknown fields in {kind} document: {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise ValueError(f"missing fields in {kind} document: {sorted(missing)}")


def _check_header(doc: Any, kind: str | None) -> str:
    if not isinstance(doc, dict):
        raise ValueError("document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    actual = doc.get("kind")
    if actual not in _KIND_FIELDS:
        raise ValueError(f"unknown document kind {actual!r}")
    if kind is not None and actual != kind:
        raise ValueError(f"expected a {kind} document, got kind {actual!r}")
    _check_fields(doc, actual)
    return actual


def encode_matrix(m: np.ndarray) -> list[list[list[float]]]:
    a = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(obj: Any, dim: int, what: str = "matrix") -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ValueError(f"{what} must be a {dim}x{dim} nested array")
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise ValueError(f"{what} row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ValueError(f"{what}[{i}][{j}] must be a [re, im] pair")
            out[i, j] = complex(entry[0], entry[1])
    if not np.all(np.isfinite(out.view(float))):
        raise ValueError(f"{what} contains non-finite entries")
    return out


def _positive_dim(doc: dict[str, Any], key: str) -> int:
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{key} must be a positive integer")
    return value


def state_document(tau: np.ndarray, dims: tuple[int, int]) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "state",
        "dim_a": dims[0],
        "dim_b": dims[1],
        "matrix": encode_matrix(tau),
    }


def parse_state_document(doc: dict[str, Any]) -> tuple[np.ndarray, tuple[int, int]]:
    _check_header(doc, "state")
    da = _positive_dim(doc, "dim_a")
    db = _positive_dim(doc, "dim_b")
    return decode_matrix(doc["matrix"], da * db), (da, db)


def _diagnostics_payload(report: CptpReport) -> dict[str, Any]:
    return {
        "cp": report.cp,
        "tp": report.tp,
        "choi_min_eigenvalue": report.choi_min_eigenvalue,
        "trace_residual": report.trace_residual,
    }


def channel_document(e: SuperOp, diagnostics: CptpReport | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "channel",
        "dim_in": e.dim_in,
        "dim_out": e.dim_out,
        "choi": encode_matrix(e.choi),
    }
    if diagnostics is not None:
        doc["diagnostics"] = _diagnostics_payload(diagnostics)
    return doc


def parse_channel_document(doc: dict[str, Any]) -> SuperOp:
    _check_header(doc, "channel")
    din = _positive_dim(doc, "dim_in")
    dout = _positive_dim(doc, "dim_out")
    return SuperOp(din, dout, decode_matrix(doc["choi"], din * dout, "choi"))


def process_document(process: Process) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "process",
        "dim_in": process.channel.dim_in,
        "dim_out": process.channel.dim_out,
        "choi": encode_matrix(process.channel.choi),
        "input_state": encode_matrix(process.input_state),
    }


def parse_process_document(doc: dict[str, Any]) -> Process:
    _check_header(doc, "process")
    din = _positive_dim(doc, "dim_in")
    dout = _positive_dim(doc, "dim_out")
    channel = SuperOp(din, dout, decode_matrix(doc["choi"], din * dout, "choi"))
    state = validate_density(decode_matrix(doc["input_state"], din, "input_state"))
    return Process(channel=channel, input_state=state)


def ensemble_document(ensemble: ProductEnsemble) -> dict[str, Any]:
    da, db = ensemble.dims
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "ensemble",
        "dim_a": da,
        "dim_b": db,
        "weights": [float(w) for w in ensemble.weights],
        "states_a": [encode_matrix(s) for s in ensemble.states_a],
        "states_b": [encode_matrix(s) for s in ensemble.states_b],
    }


def parse_ensemble_document(doc: dict[str, Any]) -> ProductEnsemble:
    _check_header(doc, "ensemble")
    da = _positive_dim(doc, "dim_a")
    db = _positive_dim(doc, "dim_b")
    weights = doc["weights"]
    if not isinstance(weights, list) or not all(isinstance(w, (int, float)) for w in weights):
        raise ValueError("weights must be an array of numbers")
    for key in ("states_a", "states_b"):
        if not isinstance(doc[key], list) or len(doc[key]) != len(weights):
            raise ValueError(f"{key} must list one matrix per weight")
    states_a = tuple(decode_matrix(s, da, f"states_a[{i}]") for i, s in enumerate(doc["states_a"]))
    states_b = tuple(decode_matrix(s, db, f"states_b[{i}]") for i, s in enumerate(doc["states_b"]))
    return ProductEnsemble(weights=np.asarray(weights, dtype=float), states_a=states_a, states_b=states_b)


def correlations_document(corr: CorrelationTable) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "correlations",
        "qubits": corr.qubits,
        "table": [[float(x) for x in row] for row in corr.table],
    }


def parse_correlations_document(doc: dict[str, Any]) -> CorrelationTable:
    _check_header(doc, "correlations")
    qubits = _positive_dim(doc, "qubits")
    size = 4**qubits
    table = doc["table"]
    if not isinstance(table, list) or len(table) != size:
        raise ValueError(f"incomplete table: expected {size} rows")
    rows = []
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != size or not all(isinstance(x, (int, float)) for x in row):
            raise ValueError(f"incomplete table: row {i} must hold {size} numbers")
        rows.append([float(x) for x in row])
    return CorrelationTable(qubits=qubits, table=np.asarray(rows))


def _side_payload(report: CompatibilityReport) -> dict[str, Any]:
    return {
        "compatible": report.compatible,
        "test_min_eigenvalue": report.test_min_eigenvalue,
        "choi_min_eigenvalue": report.cptp.choi_min_eigenvalue,
        "trace_residual": report.cptp.trace_residual,
        "reconstruction_residual": report.reconstruction_residual,
        "faithful_marginal": report.faithful_marginal,
        "boundary": report.boundary,
    }


def report_document(result: CertificationResult) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "report",
        "tolerance": result.side_a.tolerance,
        "ppt": result.ppt,
        "ppt_min_eigenvalue": result.ppt_min_eigenvalue,
        "sides": {"a": _side_payload(result.side_a), "b": _side_payload(result.side_b)},
    }


def load_document(path: str | Path, kind: str | None = None) -> dict[str, Any]:
    """Read and header-validate a JSON document from disk."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    _check_header(doc, kind)
    return doc


def dump_document(doc: dict[str, Any], path: str | Path | None = None) -> str:
    """Serialize a document; write it to ``path`` when given, always return the text."""
    text = json.dumps(doc, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text
