"""Linear maps between matrix algebras, stored canonically as Choi matrices.

A map ``E`` from a ``dim_in``-dimensional system to a ``dim_out``-dimensional
one is represented by its Choi matrix

    C[E] = sum_ij |i><j| (x) E(|i><j|)

in the computational basis, a bipartite operator with factor dims
``(dim_in, dim_out)``.  The Jamiolkowski operator ``J[E] = (id (x) E)(SWAP)``
is a derived view: it differs from the Choi matrix by a partial transpose on
the input factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    DEFAULT_TOLS,
    as_complex_matrix,
    hermiticity_defect,
    max_abs,
    partial_trace,
    partial_transpose,
    swap_factors,
    tensor,
    validate_density,
)

__all__ = [
    "SuperOp",
    "Process",
    "CptpReport",
    "identity_channel",
    "replace_channel",
    "transpose_map",
    "from_kraus",
    "apply",
    "apply_to_factor",
    "jamiolkowski",
    "from_jamiolkowski",
    "superoperator_matrix",
    "is_cptp",
    "is_hptp",
    "compose",
    "hs_adjoint",
]


@dataclass(frozen=True)
class SuperOp:
    """A linear map between operator spaces, stored as its Choi matrix."""

    dim_in: int
    dim_out: int
    choi: np.ndarray

    def __post_init__(self) -> None:
        d = self.dim_in * self.dim_out
        c = as_complex_matrix(self.choi)
        if c.shape != (d, d):
            raise ValueError(
                f"choi matrix of shape {c.shape} does not match dims ({self.dim_in}, {self.dim_out})"
            )
        object.__setattr__(self, "choi", c)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return apply(self, x)


@dataclass(frozen=True)
class Process:
    """A channel together with an input state: the pair describing one experiment."""

    channel: SuperOp
    input_state: np.ndarray

    def __post_init__(self) -> None:
        rho = validate_density(self.input_state)
        if rho.shape[0] != self.channel.dim_in:
            raise ValueError(
                f"input state dim {rho.shape[0]} does not match channel input dim {self.channel.dim_in}"
            )
        object.__setattr__(self, "input_state", rho)


def identity_channel(dim: int) -> SuperOp:
    v = np.eye(dim, dtype=np.complex128).ravel()
    return SuperOp(dim, dim, np.outer(v, v))


def replace_channel(sigma: np.ndarray, dim_in: int | None = None) -> SuperOp:
    """The channel ``A -> Tr[A] sigma`` discarding its input."""
    s = validate_density(sigma)
    if dim_in is None:
        dim_in = s.shape[0]
    return SuperOp(dim_in, s.shape[0], tensor(np.eye(dim_in), s))


def transpose_map(dim: int) -> SuperOp:
    """The (positive but not completely positive) transpose map; its Choi is SWAP."""
    ident = identity_channel(dim)
    return SuperOp(dim, dim, partial_transpose(ident.choi, (dim, dim), "a"))


def from_kraus(ops: list[np.ndarray]) -> SuperOp:
    """Build the map ``X -> sum_k K_k X K_k^dag`` from operators of shape (dim_out, dim_in)."""
    if not ops:
        raise ValueError("need at least one Kraus operator")
    mats = [np.asarray(k, dtype=np.complex128) for k in ops]
    dim_out, dim_in = mats[0].shape
    choi = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=np.complex128)
    for k in mats:
        if k.shape != (dim_out, dim_in):
            raise ValueError(f"Kraus shape mismatch: {k.shape} vs {(dim_out, dim_in)}")
        v = k.T.ravel()
        choi += np.outer(v, v.conj())
    return SuperOp(dim_in, dim_out, choi)


def _sandwich(left: np.ndarray, right: np.ndarray) -> SuperOp:
    """Choi matrix of ``X -> left X right^dag``."""
    left = np.asarray(left, dtype=np.complex128)
    right = np.asarray(right, dtype=np.complex128)
    dim_out, dim_in = left.shape
    return SuperOp(dim_in, dim_out, np.outer(left.T.ravel(), right.T.ravel().conj()))


def apply(e: SuperOp, x: np.ndarray) -> np.ndarray:
    """Evaluate ``E(X)`` by contracting ``X`` against the Choi matrix."""
    a = as_complex_matrix(x)
    if a.shape[0] != e.dim_in:
        raise ValueError(f"operator dim {a.shape[0]} does not match channel input dim {e.dim_in}")
    c4 = e.choi.reshape(e.dim_in, e.dim_out, e.dim_in, e.dim_out)
    return np.einsum("iajb,ij->ab", c4, a)


def apply_to_factor(e: SuperOp, t: np.ndarray, dims: tuple[int, int], side: str = "a") -> np.ndarray:
    """Evaluate ``(E (x) id)`` or ``(id (x) E)`` on a bipartite operator."""
    da, db = dims
    if side == "a":
        if e.dim_in != da:
            raise ValueError(f"channel input dim {e.dim_in} does not match factor dim {da}")
        r = as_complex_matrix(t).reshape(da, db, da, db)
        c4 = e.choi.reshape(da, e.dim_out, da, e.dim_out)
        out = np.einsum("iajb,ixjy->axby", c4, r)
        return out.reshape(e.dim_out * db, e.dim_out * db)
    if side == "b":
        swapped = apply_to_factor(e, swap_factors(t, dims), (db, da), "a")
        return swap_factors(swapped, (e.dim_out, da))
    raise ValueError(f"side must be 'a' or 'b', got {side!r}")


def jamiolkowski(e: SuperOp) -> np.ndarray:
    """The Jamiolkowski operator ``(id (x) E)(SWAP)``."""
    return partial_transpose(e.choi, (e.dim_in, e.dim_out), "a")


def from_jamiolkowski(j: np.ndarray, dims: tuple[int, int]) -> SuperOp:
    """Inverse of :func:`jamiolkowski`; round-trips exactly (both are re-indexings)."""
    return SuperOp(dims[0], dims[1], partial_transpose(j, dims, "a"))


def superoperator_matrix(e: SuperOp) -> np.ndarray:
    """Dense matrix acting on row-major vectorizations: ``vec(E(X)) = S vec(X)``."""
    c4 = e.choi.reshape(e.dim_in, e.dim_out, e.dim_in, e.dim_out)
    return c4.transpose(1, 3, 0, 2).reshape(e.dim_out**2, e.dim_in**2)


@dataclass(frozen=True)
class CptpReport:
    """Diagnostics of a complete-positivity / trace-preservation check."""

    cp: bool
    tp: bool
    choi_min_eigenvalue: float
    trace_residual: float
    hermiticity_defect: float

    @property
    def ok(self) -> bool:
        return self.cp and self.tp


def is_cptp(e: SuperOp, tol: float = DEFAULT_TOLS.psd) -> CptpReport:
    """Check Choi positivity and trace preservation, returning full diagnostics."""
    herm = hermiticity_defect(e.choi)
    sym = (e.choi + e.choi.conj().T) / 2
    w = np.linalg.eigvalsh(sym)
    lam_min, lam_max = float(w[0]), float(w[-1])
    cp = herm <= tol and lam_min >= -tol * max(1.0, lam_max)
    marg = partial_trace(e.choi, (e.dim_in, e.dim_out), "b")
    trace_residual = max_abs(marg - np.eye(e.dim_in))
    return CptpReport(
        cp=cp,
        tp=trace_residual <= tol,
        choi_min_eigenvalue=lam_min,
        trace_residual=trace_residual,
        hermiticity_defect=herm,
    )


def is_hptp(e: SuperOp, tol: float = DEFAULT_TOLS.psd) -> bool:
    """True iff the map is Hermitian-preserving and trace-preserving."""
    if hermiticity_defect(e.choi) > tol:
        return False
    marg = partial_trace(e.choi, (e.dim_in, e.dim_out), "b")
    return max_abs(marg - np.eye(e.dim_in)) <= tol


def compose(f: SuperOp, e: SuperOp) -> SuperOp:
    """The composite ``F o E`` (apply ``E`` first)."""
    if e.dim_out != f.dim_in:
        raise ValueError(f"cannot compose: inner dims {e.dim_out} vs {f.dim_in}")
    ce = e.choi.reshape(e.dim_in, e.dim_out, e.dim_in, e.dim_out)
    cf = f.choi.reshape(f.dim_in, f.dim_out, f.dim_in, f.dim_out)
    out = np.einsum("ikjl,kalb->iajb", ce, cf)
    d = e.dim_in * f.dim_out
    return SuperOp(e.dim_in, f.dim_out, out.reshape(d, d))


def hs_adjoint(e: SuperOp) -> SuperOp:
    """Hilbert-Schmidt adjoint: the unique map with ``Tr[E(A)^dag B] = Tr[A^dag E*(B)]``."""
    choi = swap_factors(e.choi, (e.dim_in, e.dim_out)).conj()
    return SuperOp(e.dim_out, e.dim_in, choi)
