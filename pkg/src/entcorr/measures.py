"""Entanglement monotones and spectrum-level maximal-entanglement machinery.

Entanglement of formation is computed exactly for two qubits through the
concurrence; higher-dimensional internal systems are covered by the
negativity only. The spectral cap s22 gives the largest entanglement of
formation compatible with a given eigenvalue vector, together with an
explicit state attaining it and an independent unitary-orbit search.
"""

from __future__ import annotations

import math

import numpy as np

from . import bounds
from .qcore import (
    DomainError,
    haar_unitary,
    pad_spectrum,
    split_dims,
    validate_density_matrix,
    validate_spectrum,
    worker_rng,
)

_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
# Y x Y is real in the computational basis.
_YY = np.kron(_PAULI_Y, _PAULI_Y).real

_E = np.eye(4)
_BELL_PLUS = (_E[0] + _E[3]) / math.sqrt(2.0)
_BELL_MINUS = (_E[0] - _E[3]) / math.sqrt(2.0)
# Eigenbasis attaining the spectral concurrence cap, in the order the
# eigenvalues are assigned: two Bell-type vectors carry the largest and
# third eigenvalue, the product vectors |01> and |10> the second and
# fourth. Validated against the unitary-orbit search in the test suite.
MAX_EF_BASIS = np.column_stack([_BELL_PLUS, _E[1], _BELL_MINUS, _E[2]]).astype(complex)


def _concurrence_unchecked(rho: np.ndarray) -> float:
    flipped = _YY @ rho.conj() @ _YY
    ev = np.linalg.eigvals(rho @ flipped)
    mu = np.sqrt(np.clip(ev.real, 0.0, None))
    mu[::-1].sort()
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def concurrence(rho) -> float:
    """Two-qubit concurrence max{0, mu1 - mu2 - mu3 - mu4}.

    The mu_i are the decreasing square roots of the eigenvalues of
    rho (Y x Y) rho* (Y x Y), with the conjugate taken entrywise in the
    computational basis.
    """
    rho = validate_density_matrix(rho)
    if rho.shape != (4, 4):
        raise DomainError(f"concurrence needs a 4x4 state, got {rho.shape}")
    return _concurrence_unchecked(rho)


def entanglement_of_formation(rho) -> float:
    """E_f of a two-qubit state in nats: v(concurrence)."""
    return float(bounds.v(concurrence(rho)))


def negativity(rho, split) -> float:
    """(||rho^T1||_1 - 1) / 2 via the partial transpose on factor 1."""
    d1, d2 = split_dims(split)
    rho = validate_density_matrix(rho)
    if rho.shape[0] != d1 * d2:
        raise DomainError(f"state dimension {rho.shape[0]} does not match split {(d1, d2)}")
    pt = rho.reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3).reshape(d1 * d2, d1 * d2)
    w = np.linalg.eigvalsh(pt)
    return float((np.abs(w).sum() - 1.0) / 2.0)


# ---------------------------------------------------------------------------
# Spectrum-level machinery
# ---------------------------------------------------------------------------

def max_concurrence(p) -> float:
    """Largest concurrence over all two-qubit states with spectrum p."""
    q = pad_spectrum(p, 4)
    return float(max(0.0, q[0] - q[2] - 2.0 * math.sqrt(q[1] * q[3])))


def s22_ef(p) -> float:
    """Spectral entropy ln 2 - v(max concurrence); caps E_f from above."""
    return bounds.LN2 - float(bounds.v(max_concurrence(p)))


def max_ef_state(p) -> np.ndarray:
    """Two-qubit state with spectrum p attaining E_f = ln 2 - s22_ef(p)."""
    q = pad_spectrum(p, 4)
    rho = (MAX_EF_BASIS * q) @ MAX_EF_BASIS.conj().T
    got = np.sort(np.linalg.eigvalsh(rho))[::-1]
    if np.max(np.abs(got - q)) > 1e-9:
        raise RuntimeError("constructed state does not have the requested spectrum")
    return rho


def max_ef_over_spectrum_numeric(
    p,
    restarts: int = 20,
    iters: int = 2000,
    rng: np.random.Generator | None = None,
    step: float = 0.1,
) -> float:
    """Best E_f found over the unitary orbit of diag(p) by local search.

    Random-restart hill climbing on U(4): propose U <- exp(i step H) U with
    H a random Hermitian direction, accept if E_f improves, halve the step
    after 50 consecutive rejections. Independent of the closed-form cap, it
    serves as its oracle.
    """
    q = pad_spectrum(p, 4)
    if rng is None:
        rng = worker_rng(0, 0)

    def ef_of(unitary):
        # The orbit point is a density matrix by construction; skip validation.
        rho = (unitary * q) @ unitary.conj().T
        return float(bounds.v(_concurrence_unchecked(rho)))

    best = 0.0
    for r in range(restarts):
        u_cur = np.eye(4, dtype=complex) if r == 0 else haar_unitary(4, rng)
        cur = ef_of(u_cur)
        s = step
        rejected = 0
        for _ in range(iters):
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            h = (g + g.conj().T) / 2.0
            w, vmat = np.linalg.eigh(s * h)
            u_trial = (vmat * np.exp(1j * w)) @ vmat.conj().T @ u_cur
            val = ef_of(u_trial)
            if val > cur:
                u_cur, cur, rejected = u_trial, val, 0
            else:
                rejected += 1
                if rejected >= 50:
                    s *= 0.5
                    rejected = 0
        best = max(best, cur)
    return best


# ---------------------------------------------------------------------------
# Separability conditions on spectra
# ---------------------------------------------------------------------------

def is_zhsl_separable(p, d: int) -> bool:
    """Purity ball test: every state with purity <= 1/(d-1) is separable."""
    if d < 2:
        raise DomainError("need d >= 2")
    p = validate_spectrum(p)
    if p.size > d:
        raise DomainError(f"spectrum has {p.size} components, at most {d} allowed")
    return bool((p * p).sum() <= 1.0 / (d - 1))


def is_abs_separable_2xd(p, d: int) -> bool:
    """Absolute-separability test for a 2 x d system.

    Every state with spectrum p (padded with zeros to length 2d) is
    separable iff p_1 <= p_{2d-1} + 2 sqrt(p_{2d-2} p_{2d}).
    """
    if d < 2:
        raise DomainError("need d >= 2")
    q = pad_spectrum(p, 2 * d)
    return bool(q[0] <= q[2 * d - 2] + 2.0 * math.sqrt(q[2 * d - 3] * q[2 * d - 1]))
