"""Product ensembles, random instance generators, and state discrimination.

All generators take an explicit seed (an integer or a ``numpy.random.Generator``)
and are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import SuperOp, from_kraus
from .operators import DEFAULT_TOLS, max_abs, sqrt_pinv, tensor, validate_density
from .sot import Observable, observable

__all__ = [
    "ProductEnsemble",
    "DiscriminationInstance",
    "assemble_state",
    "random_unitary",
    "random_density",
    "random_cptp",
    "random_separable",
    "random_light_touch",
    "random_povm",
    "is_orthogonal_ensemble",
    "discrimination_povm",
    "perfect_distinguishability_check",
]

Seed = int | np.random.Generator | None


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class ProductEnsemble:
    """Weighted collection of product states ``sum_t w_t rho_{a;t} (x) rho_{b;t}``.

    Weights must sum to one; negative weights are allowed and flag the
    ensemble as a quasiprobability decomposition.
    """

    weights: np.ndarray
    states_a: tuple[np.ndarray, ...]
    states_b: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.size == 0 or w.size != len(self.states_a) or w.size != len(self.states_b):
            raise ValueError("weights and the two state lists must be nonempty and of equal length")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states_a", tuple(validate_density(s) for s in self.states_a))
        object.__setattr__(self, "states_b", tuple(validate_density(s) for s in self.states_b))

    @property
    def dims(self) -> tuple[int, int]:
        return self.states_a[0].shape[0], self.states_b[0].shape[0]

    @property
    def quasi(self) -> bool:
        return bool(np.any(self.weights < 0))


def assemble_state(ensemble: ProductEnsemble) -> np.ndarray:
    """The bipartite operator of an ensemble: Hermitian and trace one, PSD iff
    the weights can be taken nonnegative."""
    da, db = ensemble.dims
    out = np.zeros((da * db, da * db), dtype=np.complex128)
    for w, a, b in zip(ensemble.weights, ensemble.states_a, ensemble.states_b):
        out += w * tensor(a, b)
    return out


def random_unitary(dim: int, seed: Seed = None) -> np.ndarray:
    """Haar-random unitary via phase-fixed QR of a Ginibre matrix."""
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_density(dim: int, rank: int | None = None, seed: Seed = None) -> np.ndarray:
    """Random density matrix of the given rank (full rank by default)."""
    rng = _rng(seed)
    if rank is None:
        rank = dim
    if rank < 1 or rank > dim:
        raise ValueError(f"rank must be in 1..{dim}, got {rank}")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_cptp(dim_in: int, dim_out: int, kraus_count: int, seed: Seed = None) -> SuperOp:
    """Random CPTP map from a Haar-random isometry cut into Kraus blocks."""
    if kraus_count * dim_out < dim_in:
        raise ValueError(f"need kraus_count * dim_out >= dim_in, got {kraus_count} * {dim_out} < {dim_in}")
    rng = _rng(seed)
    g = rng.standard_normal((kraus_count * dim_out, dim_in)) + 1j * rng.standard_normal(
        (kraus_count * dim_out, dim_in)
    )
    q, _ = np.linalg.qr(g)
    kraus = [q[k * dim_out : (k + 1) * dim_out, :] for k in range(kraus_count)]
    return from_kraus(kraus)


def random_separable(dim_a: int, dim_b: int, n_terms: int, seed: Seed = None) -> ProductEnsemble:
    """Random separable ensemble: Dirichlet-uniform weights, random-rank factors."""
    if n_terms < 1:
        raise ValueError("need at least one product term")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    states_a = tuple(random_density(dim_a, int(rng.integers(1, dim_a + 1)), rng) for _ in range(n_terms))
    states_b = tuple(random_density(dim_b, int(rng.integers(1, dim_b + 1)), rng) for _ in range(n_terms))
    return ProductEnsemble(weights=weights, states_a=states_a, states_b=states_b)


def random_light_touch(dim: int, seed: Seed = None) -> Observable:
    """Random observable with spectrum ``{lam}`` or ``{+lam, -lam}``.

    Samples a Haar-random projector of rank 1..dim and a scale in (0, 1],
    emitting ``lam (2P - 1)``; rank ``dim`` yields the constant spectrum.
    """
    rng = _rng(seed)
    rank = int(rng.integers(1, dim + 1))
    u = random_unitary(dim, rng)
    cols = u[:, :rank]
    proj = cols @ cols.conj().T
    lam = 1.0 - float(rng.uniform(0.0, 1.0))
    return observable(lam * (2 * proj - np.eye(dim)))


def random_povm(dim: int, outcomes: int, seed: Seed = None) -> list[np.ndarray]:
    """Random POVM from normalizing random positive operators."""
    rng = _rng(seed)
    parts = []
    for _ in range(outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        parts.append(g @ g.conj().T)
    total = sum(parts)
    ps = sqrt_pinv(total)
    return [ps.inv_sqrt @ p @ ps.inv_sqrt for p in parts]


def is_orthogonal_ensemble(states: list[np.ndarray], tol: float = DEFAULT_TOLS.psd) -> bool:
    """True iff all pairwise Hilbert-Schmidt overlaps ``Tr[rho_s rho_t]`` vanish."""
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            if abs(np.trace(states[i] @ states[j])) > tol:
                return False
    return True


@dataclass(frozen=True)
class DiscriminationInstance:
    """An ensemble with a candidate discriminating POVM.

    ``assignment[k]`` is the ensemble index announced on POVM outcome ``k``;
    the assignment must be surjective onto the ensemble.
    """

    weights: np.ndarray
    states: tuple[np.ndarray, ...]
    povm: tuple[np.ndarray, ...]
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).ravel()
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", tuple(np.asarray(s, dtype=np.complex128) for s in self.states))
        object.__setattr__(self, "povm", tuple(np.asarray(e, dtype=np.complex128) for e in self.povm))
        if len(self.assignment) != len(self.povm):
            raise ValueError("assignment must map every POVM outcome to an ensemble index")
        if set(self.assignment) != set(range(len(self.states))):
            raise ValueError("assignment must be surjective onto the ensemble")
        dim = self.states[0].shape[0]
        total = sum(self.povm)
        if max_abs(total - np.eye(dim)) > 1e-9:
            raise ValueError("POVM elements do not sum to the identity")
        for e in self.povm:
            lam_min = float(np.linalg.eigvalsh((e + e.conj().T) / 2)[0])
            if lam_min < -1e-9:
                raise ValueError(f"POVM element has negative eigenvalue {lam_min:.3e}")


def discrimination_povm(
    weights: np.ndarray,
    states: list[np.ndarray],
    tol: float = DEFAULT_TOLS.psd,
) -> DiscriminationInstance:
    """Support-projector POVM that perfectly discriminates an orthogonal ensemble.

    A completion element (assigned to ensemble index 0) is adjoined only when
    the support projectors do not already resolve the identity.
    """
    mats = [validate_density(s) for s in states]
    if not is_orthogonal_ensemble(mats, tol):
        raise ValueError("ensemble is not orthogonal")
    povm = [sqrt_pinv(s).support for s in mats]
    assignment = list(range(len(mats)))
    leftover = np.eye(mats[0].shape[0]) - sum(povm)
    if max_abs(leftover) > tol:
        povm.append(leftover)
        assignment.append(0)
    return DiscriminationInstance(
        weights=np.asarray(weights, dtype=float),
        states=tuple(mats),
        povm=tuple(povm),
        assignment=tuple(assignment),
    )


def perfect_distinguishability_check(
    instance: DiscriminationInstance,
    tol: float = DEFAULT_TOLS.psd,
) -> tuple[bool, float]:
    """Check the Bayes-rule condition for perfect discrimination.

    Verifies ``Tr[rho_t E_k] w_t = delta_{t, assignment[k]} Tr[rho_avg E_k]``
    for every ensemble index ``t`` and outcome ``k``; returns the verdict and
    the largest violation.
    """
    avg = sum(w * s for w, s in zip(instance.weights, instance.states))
    worst = 0.0
    for k, e in enumerate(instance.povm):
        p_k = float(np.trace(avg @ e).real)
        for t, (w, s) in enumerate(zip(instance.weights, instance.states)):
            lhs = float(np.trace(s @ e).real) * w
            rhs = p_k if t == instance.assignment[k] else 0.0
            worst = max(worst, abs(lhs - rhs))
    return worst <= tol, worst
