"""Measurement matrix, its Moore-Penrose pseudoinverse and the realizability test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bloch import PauliObservable, make_observable
from .errors import DimensionMismatch, DomainError

RANK_RTOL = 1e-10
REALIZABLE_TOL = 1e-9


def pinv_svd(M: np.ndarray, rtol: float = RANK_RTOL) -> tuple[np.ndarray, int]:
    """Pseudoinverse of a small matrix through its SVD.

    Singular values at or below ``rtol * sigma_max`` are treated as zero.
    Returns ``(M_plus, rank)``.
    """
    M = np.asarray(M, dtype=float)
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(M.T.shape), 0
    keep = s > rtol * s[0]
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vt.T * s_inv) @ U.T, int(keep.sum())


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """An ordered list of Pauli observables with the derived matrices.

    ``matrix`` is ``M`` (rows are the directions), ``pseudoinverse`` is ``M+``,
    ``coeffs`` is ``(M+)^T M+`` whose entries are the ``m_ij`` coefficients.
    """

    observables: tuple
    matrix: np.ndarray
    pseudoinverse: np.ndarray
    coeffs: np.ndarray
    span_rank: int

    @property
    def n(self) -> int:
        return len(self.observables)

    @property
    def projector(self) -> np.ndarray:
        """``M+ M``, the orthogonal projector onto the span of the directions."""
        return self.pseudoinverse @ self.matrix

    @property
    def range_projector(self) -> np.ndarray:
        """``M M+``, the projector onto the range of ``M`` in expectation space."""
        return self.matrix @ self.pseudoinverse

    def range_basis(self) -> np.ndarray:
        """Orthonormal basis (as columns) of the range of ``M``."""
        U, s, _ = np.linalg.svd(self.matrix, full_matrices=False)
        return U[:, : self.span_rank]

    def expectations(self, states) -> np.ndarray:
        """Expectation vectors ``u = M r`` for one state or an ``(N, 3)`` batch."""
        r = states.bloch if hasattr(states, "bloch") else np.asarray(states, dtype=float)
        return np.clip(r @ self.matrix.T, -1.0, 1.0)


def build_set(observables: Sequence) -> ObservableSet:
    if len(observables) < 1:
        raise DimensionMismatch("an observable set needs at least one observable")
    obs = tuple(o if isinstance(o, PauliObservable) else make_observable(o) for o in observables)
    M = np.array([o.direction for o in obs])
    M_plus, rank = pinv_svd(M)
    coeffs = M_plus.T @ M_plus
    coeffs = 0.5 * (coeffs + coeffs.T)
    for arr in (M, M_plus, coeffs):
        arr.flags.writeable = False
    return ObservableSet(obs, M, M_plus, coeffs, rank)


def project_onto_span(S: ObservableSet, r) -> np.ndarray:
    r = r.bloch if hasattr(r, "bloch") else np.asarray(r, dtype=float)
    return r @ S.projector.T


def reconstruct_state(S: ObservableSet, u) -> np.ndarray:
    """``M+ u``; may have norm above 1 when ``u`` is not attainable."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != S.n:
        raise DimensionMismatch(f"expected {S.n} expectation values, got {u.shape[-1]}")
    return u @ S.pseudoinverse.T


def realizable(S: ObservableSet, u, radius: float = 1.0):
    """Whether some Bloch vector with norm at most ``radius`` has expectations ``u``.

    Works on a single vector or an ``(N, n)`` batch.
    """
    if not 0.0 <= radius <= 1.0:
        raise DomainError(f"radius must lie in [0, 1], got {radius}")
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != S.n:
        raise DimensionMismatch(f"expected {S.n} expectation values, got {u.shape[-1]}")
    consistent = np.max(np.abs(u @ S.range_projector.T - u), axis=-1) <= REALIZABLE_TOL
    inside = np.linalg.norm(reconstruct_state(S, u), axis=-1) <= radius + REALIZABLE_TOL
    ok = consistent & inside
    return bool(ok) if np.ndim(ok) == 0 else ok


def tetrahedron_directions() -> np.ndarray:
    """Unit vectors to the vertices of a regular tetrahedron."""
    return np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / np.sqrt(3.0)
