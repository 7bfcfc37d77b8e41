"""States over time: two-time expectation values and pseudo-density matrices.

The central object is the canonical state over time of a process
``(E, rho)``,

    E * rho = 1/2 { rho (x) 1, J[E] },

the unique bipartite Hermitian operator that represents two-time expectation
values of light-touch observables (observables whose spectrum is ``{lam}`` or
``{+lam, -lam}``, which includes every Pauli string).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channels import Process, SuperOp, apply, jamiolkowski
from .operators import (
    DEFAULT_TOLS,
    SpectralDecomposition,
    eig_hermitian,
    require_hermitian,
    swap_factors,
    tensor,
)

__all__ = [
    "PAULIS",
    "Observable",
    "observable",
    "pauli_string",
    "pauli_index",
    "star_product",
    "reverse_star",
    "is_light_touch",
    "two_time_expectation",
    "representability_check",
    "CorrelationTable",
    "correlations_from_process",
    "pdm_from_correlations",
]

PAULIS: tuple[np.ndarray, ...] = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


@dataclass(frozen=True)
class Observable:
    """A Hermitian observable with its clustered spectral decomposition cached."""

    matrix: np.ndarray
    spectral: SpectralDecomposition


def observable(m: np.ndarray, cluster_tol: float | None = None) -> Observable:
    a = require_hermitian(m)
    return Observable(matrix=a, spectral=eig_hermitian(a, cluster_tol))


def pauli_string(alpha: tuple[int, ...]) -> Observable:
    """The multi-qubit Pauli observable ``sigma_a1 (x) ... (x) sigma_am``."""
    if not alpha or any(a not in (0, 1, 2, 3) for a in alpha):
        raise ValueError(f"Pauli indices must be in 0..3, got {alpha!r}")
    mat = PAULIS[alpha[0]]
    for a in alpha[1:]:
        mat = np.kron(mat, PAULIS[a])
    return observable(mat)


def pauli_index(alpha: tuple[int, ...]) -> int:
    """Base-4 row index of a Pauli string in a correlation table."""
    idx = 0
    for a in alpha:
        idx = 4 * idx + a
    return idx


def star_product(e: SuperOp, rho: np.ndarray) -> np.ndarray:
    """Canonical state over time ``1/2 { rho (x) 1, J[E] }`` of the process (E, rho).

    Hermitian with unit trace; its marginals are ``rho`` and ``E(rho)``.
    """
    r = require_hermitian(rho)
    if r.shape[0] != e.dim_in:
        raise ValueError(f"state dim {r.shape[0]} does not match channel input dim {e.dim_in}")
    j = jamiolkowski(e)
    r1 = tensor(r, np.eye(e.dim_out))
    return (r1 @ j + j @ r1) / 2


def reverse_star(f: SuperOp, rho_b: np.ndarray) -> np.ndarray:
    """State over time of a process running against the factor order.

    For ``F`` from the second factor to the first, returns the operator on
    ``A (x) B`` obtained by swapping the factors of ``F * rho_b``; it equals
    ``1/2 { 1 (x) rho_b, J[F*] }`` whenever ``F`` is Hermitian-preserving.
    """
    return swap_factors(star_product(f, rho_b), (f.dim_in, f.dim_out))


def is_light_touch(obs: Observable, tol: float | None = None) -> bool:
    """True iff the clustered spectrum is ``{lam}`` or ``{lam, -lam}`` with ``lam >= 0``."""
    vals = obs.spectral.eigenvalues
    if tol is None:
        tol = DEFAULT_TOLS.cluster
    scale = tol * max(1.0, float(np.max(np.abs(vals))))
    if len(vals) == 1:
        return vals[0] >= -scale
    if len(vals) == 2:
        return abs(vals[0] + vals[1]) <= scale
    return False


def two_time_expectation(
    m_obs: Observable,
    n_obs: Observable,
    process: Process,
    imag_tol: float = DEFAULT_TOLS.imag,
) -> float:
    """Expectation of measuring ``M`` first, evolving, then measuring ``N``.

    Computed as ``sum_i lambda_i Tr[E(P_i rho P_i) N]`` over the eigenspace
    projectors ``P_i`` of ``M``; the result is asserted real before the
    imaginary part is discarded.
    """
    e, rho = process.channel, process.input_state
    if m_obs.matrix.shape[0] != e.dim_in:
        raise ValueError("first observable does not match the channel input dimension")
    if n_obs.matrix.shape[0] != e.dim_out:
        raise ValueError("second observable does not match the channel output dimension")
    value = 0.0 + 0.0j
    for lam, proj in zip(m_obs.spectral.eigenvalues, m_obs.spectral.projectors):
        value += lam * np.trace(apply(e, proj @ rho @ proj) @ n_obs.matrix)
    if abs(value.imag) > imag_tol:
        raise ValueError(f"two-time expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def representability_check(
    r: np.ndarray,
    m_obs: Observable,
    n_obs: Observable,
    process: Process,
    tol: float = DEFAULT_TOLS.psd,
) -> tuple[bool, float]:
    """Compare ``Tr[R (M (x) N)]`` with the two-time expectation of (M, N).

    Returns the verdict and the absolute residual.
    """
    lhs = np.trace(r @ tensor(m_obs.matrix, n_obs.matrix))
    rhs = two_time_expectation(m_obs, n_obs, process)
    residual = abs(complex(lhs) - rhs)
    return residual <= tol, float(residual)


@dataclass(frozen=True)
class CorrelationTable:
    """Complete table of Pauli-pair expectation values for ``m`` qubits per side.

    ``table[pauli_index(alpha), pauli_index(beta)]`` holds the real
    expectation value of the pair ``(sigma_alpha, sigma_beta)``.
    """

    qubits: int
    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=float)
        size = 4**self.qubits
        if t.shape != (size, size):
            raise ValueError(f"incomplete table: expected shape {(size, size)}, got {t.shape}")
        if abs(t[0, 0] - 1.0) > 1e-9:
            raise ValueError(f"identity-pair entry must be 1, got {t[0, 0]!r}")
        if np.max(np.abs(t)) > 1.0 + 1e-9:
            raise ValueError("expectation values must lie in [-1, 1]")
        object.__setattr__(self, "table", t)

    def entry(self, alpha: tuple[int, ...], beta: tuple[int, ...]) -> float:
        return float(self.table[pauli_index(alpha), pauli_index(beta)])


def _all_pauli_observables(qubits: int) -> list[Observable]:
    return [pauli_string(alpha) for alpha in itertools.product(range(4), repeat=qubits)]


def correlations_from_process(process: Process, qubits: int) -> CorrelationTable:
    """Tabulate two-time expectation values over all Pauli pairs of ``m`` qubits."""
    d = 2**qubits
    if process.channel.dim_in != d or process.channel.dim_out != d:
        raise ValueError(
            f"process dims ({process.channel.dim_in}, {process.channel.dim_out}) "
            f"are not {qubits}-qubit algebras"
        )
    paulis = _all_pauli_observables(qubits)
    size = 4**qubits
    table = np.empty((size, size))
    for i, m_obs in enumerate(paulis):
        for j, n_obs in enumerate(paulis):
            table[i, j] = two_time_expectation(m_obs, n_obs, process)
    return CorrelationTable(qubits=qubits, table=table)


def pdm_from_correlations(corr: CorrelationTable) -> np.ndarray:
    """Pseudo-density matrix reproducing a Pauli correlation table.

    Returns ``4^-m sum <s_a, s_b> s_a (x) s_b``: Hermitian with unit trace,
    but not positive semidefinite in general.
    """
    paulis = _all_pauli_observables(corr.qubits)
    d = 2**corr.qubits
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for i, m_obs in enumerate(paulis):
        for j, n_obs in enumerate(paulis):
            out += corr.table[i, j] * tensor(m_obs.matrix, n_obs.matrix)
    return out / 4**corr.qubits
