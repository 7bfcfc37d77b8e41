"""Command-line front end for temporal-compatibility certification.

Commands
--------
certify   decide temporal compatibility of a bipartite state (exit 0 when
          compatible in both directions, 2 otherwise, 1 on input errors)
channel   reconstruct the temporal channel of a state in one direction
pdm       build the pseudo-density matrix of a Pauli correlation table
expect    tabulate Pauli-pair two-time expectation values of a process
bloch     export Bloch-sphere point clouds of a two-qubit state's stages
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import documents
from .channels import is_cptp
from .ensembles import assemble_state
from .operators import partial_trace, validate_density
from .sot import PAULIS, correlations_from_process, pdm_from_correlations
from .temporal import certify, dephasing_channel, temporal_channel

__all__ = ["main"]


def _load_state(path: str) -> tuple[np.ndarray, tuple[int, int]]:
    """Load a bipartite state from a state document or by assembling an ensemble."""
    doc = documents.load_document(path)
    if doc["kind"] == "ensemble":
        ensemble = documents.parse_ensemble_document(doc)
        return assemble_state(ensemble), ensemble.dims
    tau, dims = documents.parse_state_document(doc)
    return tau, dims


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _side_line(label: str, payload: dict) -> str:
    verdict = "compatible" if payload["compatible"] else "incompatible"
    note = "  [boundary]" if payload["boundary"] else ""
    return (
        f"side {label}: {verdict}{note}\n"
        f"  test min eigenvalue      {payload['test_min_eigenvalue']: .6e}\n"
        f"  choi min eigenvalue      {payload['choi_min_eigenvalue']: .6e}\n"
        f"  reconstruction residual  {payload['reconstruction_residual']: .6e}\n"
        f"  faithful marginal        {payload['faithful_marginal']}\n"
    )


def _cmd_certify(args: argparse.Namespace) -> int:
    tau, dims = _load_state(args.input)
    result = certify(tau, dims, tol=args.tol)
    doc = documents.report_document(result)
    if args.json:
        _write_text(documents.dump_document(doc) + "\n", args.out)
    else:
        lines = [
            _side_line("A", doc["sides"]["a"]),
            _side_line("B", doc["sides"]["b"]),
            f"PPT: {'yes' if result.ppt else 'no'} (partial transpose min eigenvalue "
            f"{result.ppt_min_eigenvalue: .6e})\n",
            "verdict: temporally compatible in both directions\n"
            if result.compatible_both
            else "verdict: temporally incompatible in at least one direction\n",
        ]
        _write_text("".join(lines), args.out)
    return 0 if result.compatible_both else 2


def _cmd_channel(args: argparse.Namespace) -> int:
    tau, dims = _load_state(args.input)
    channel = temporal_channel(tau, dims, args.side.lower())
    doc = documents.channel_document(channel, is_cptp(channel, args.tol))
    _write_text(documents.dump_document(doc) + "\n", args.out)
    return 0


def _cmd_pdm(args: argparse.Namespace) -> int:
    corr = documents.parse_correlations_document(documents.load_document(args.input))
    r = pdm_from_correlations(corr)
    d = 2**corr.qubits
    doc = documents.state_document(r, (d, d))
    _write_text(documents.dump_document(doc) + "\n", args.out)
    return 0


def _cmd_expect(args: argparse.Namespace) -> int:
    process = documents.parse_process_document(documents.load_document(args.input))
    corr = correlations_from_process(process, args.m)
    doc = documents.correlations_document(corr)
    _write_text(documents.dump_document(doc) + "\n", args.out)
    return 0


def _bloch_points(tau: np.ndarray, dims: tuple[int, int], stage: str, samples: int, seed: int) -> np.ndarray:
    if dims != (2, 2):
        raise ValueError(f"bloch export needs two qubit factors, got dims {dims}")
    if stage == "input":
        push = None
    elif stage == "dephased":
        push = dephasing_channel(validate_density(partial_trace(tau, dims, "b")))
    elif stage == "output":
        push = temporal_channel(tau, dims, "a")
    else:
        raise ValueError(f"stage must be input, dephased or output, got {stage!r}")
    rng = np.random.default_rng(seed)
    points = np.empty((samples, 3))
    for k in range(samples):
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
        rho = (np.eye(2) + v[0] * PAULIS[1] + v[1] * PAULIS[2] + v[2] * PAULIS[3]) / 2
        out = rho if push is None else push(rho)
        points[k] = [float(np.trace(out @ PAULIS[i]).real) for i in (1, 2, 3)]
    return points


def _cmd_bloch(args: argparse.Namespace) -> int:
    tau, dims = _load_state(args.input)
    points = _bloch_points(tau, dims, args.stage, args.samples, args.seed)
    if args.samples == 0:
        text = ""
    elif args.json:
        text = json.dumps([[float(x), float(y), float(z)] for x, y, z in points]) + "\n"
    else:
        text = "".join(f"{float(x)!r},{float(y)!r},{float(z)!r}\n" for x, y, z in points)
    _write_text(text, args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempcert",
        description="Certify whether bipartite quantum statistics admit a direct-cause explanation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="certification tolerance (default 1e-9)")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    p_certify = sub.add_parser("certify", parents=[common], help="certify temporal compatibility")
    p_certify.add_argument("input", help="state or ensemble document")
    fmt = p_certify.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit the report as a JSON document")
    fmt.add_argument("--text", dest="json", action="store_false", help="emit a plain-text report (default)")
    p_certify.set_defaults(func=_cmd_certify, json=False)

    p_channel = sub.add_parser("channel", parents=[common], help="reconstruct the temporal channel")
    p_channel.add_argument("input", help="state or ensemble document")
    p_channel.add_argument("--side", choices=["A", "B", "a", "b"], default="A", help="causal direction")
    p_channel.set_defaults(func=_cmd_channel)

    p_pdm = sub.add_parser("pdm", parents=[common], help="pseudo-density matrix from correlations")
    p_pdm.add_argument("input", help="correlations document")
    p_pdm.set_defaults(func=_cmd_pdm)

    p_expect = sub.add_parser("expect", parents=[common], help="Pauli correlation table of a process")
    p_expect.add_argument("input", help="process document")
    p_expect.add_argument("--m", type=int, required=True, help="number of qubits per side")
    p_expect.set_defaults(func=_cmd_expect)

    p_bloch = sub.add_parser("bloch", parents=[common], help="Bloch point clouds of a two-qubit state")
    p_bloch.add_argument("input", help="state or ensemble document")
    p_bloch.add_argument("--stage", choices=["input", "dephased", "output"], default="output")
    p_bloch.add_argument("--samples", type=int, default=500)
    p_bloch.add_argument("--seed", type=int, default=0)
    p_bloch.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_bloch.set_defaults(func=_cmd_bloch)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
