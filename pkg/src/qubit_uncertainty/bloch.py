"""Bloch-vector states, Pauli observables and the three uncertainty measures.

A Pauli observable ``A = a.sigma`` is stored as its unit direction ``a`` and a
qubit state ``rho = (1 + r.sigma)/2`` as its Bloch vector ``r``.  Every
uncertainty measure used here is a function of the expectation value
``<A> = a.r`` alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotAState, ZeroDirection

UNIT_TOL = 1e-12
STATE_TOL = 1e-12
BISECTION_XTOL = 1e-14


class UncertaintyMeasure(str, enum.Enum):
    EXPECTATION = "expectation"
    STDDEV = "stddev"
    ENTROPY = "entropy"


def _frozen(v) -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(3)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PauliObservable:
    """Unit Bloch direction of a +-1 valued qubit observable."""

    direction: np.ndarray

    def __post_init__(self):
        d = _frozen(self.direction)
        object.__setattr__(self, "direction", d)
        norm = np.linalg.norm(d)
        if norm <= UNIT_TOL:
            raise ZeroDirection("the zero vector is not a direction")
        if abs(norm - 1.0) > UNIT_TOL:
            raise DomainError(f"direction {d.tolist()} is not a unit vector; use make_observable")

    def __eq__(self, other):
        return isinstance(other, PauliObservable) and np.array_equal(self.direction, other.direction)

    def __hash__(self):
        return hash(self.direction.tobytes())

    def __repr__(self):
        return f"PauliObservable({self.direction.tolist()})"


@dataclass(frozen=True, eq=False)
class QubitState:
    """Bloch vector of a qubit state, ``|bloch| <= 1``."""

    bloch: np.ndarray

    def __post_init__(self):
        r = _frozen(self.bloch)
        if np.linalg.norm(r) > 1.0 + STATE_TOL:
            raise NotAState(f"Bloch vector {r} has norm {np.linalg.norm(r)} > 1")
        object.__setattr__(self, "bloch", r)

    @property
    def purity(self) -> float:
        """The Bloch-vector norm ``|r|`` (1 for pure states)."""
        return float(np.linalg.norm(self.bloch))

    def __eq__(self, other):
        return isinstance(other, QubitState) and np.array_equal(self.bloch, other.bloch)

    def __hash__(self):
        return hash(self.bloch.tobytes())

    def __repr__(self):
        return f"QubitState({self.bloch.tolist()})"


def make_observable(v) -> PauliObservable:
    v = np.asarray(v, dtype=float).reshape(3)
    norm = np.linalg.norm(v)
    if norm <= UNIT_TOL:
        raise ZeroDirection(f"cannot normalize direction {v.tolist()}")
    return PauliObservable(v / norm)


def make_state(v) -> QubitState:
    """Build a state, clamping norms in ``(1, 1 + 1e-12]`` back onto the sphere."""
    v = np.asarray(v, dtype=float).reshape(3)
    norm = np.linalg.norm(v)
    if norm > 1.0 + STATE_TOL:
        raise NotAState(f"Bloch vector {v.tolist()} has norm {norm} > 1")
    if norm > 1.0:
        v = v / norm
    return QubitState(v)


def _dir(A) -> np.ndarray:
    return A.direction if isinstance(A, PauliObservable) else np.asarray(A, dtype=float)


def _vec(rho) -> np.ndarray:
    return rho.bloch if isinstance(rho, QubitState) else np.asarray(rho, dtype=float)


def expectation(A, rho):
    """``<A> = a.r``.  Accepts typed values or raw arrays (``rho`` may be ``(N, 3)``)."""
    u = np.clip(_vec(rho) @ _dir(A), -1.0, 1.0)
    return float(u) if np.ndim(u) == 0 else u


def std_from_expectation(u):
    u = np.asarray(u, dtype=float)
    d = np.sqrt(np.clip(1.0 - u * u, 0.0, 1.0))
    return float(d) if d.ndim == 0 else d


def std_dev(A, rho):
    return std_from_expectation(expectation(A, rho))


def binary_entropy(p):
    """``h2(p)`` in bits, with ``0 log 0 = 0``."""
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0.0) | (p_arr > 1.0)) or np.any(np.isnan(p_arr)):
        raise DomainError(f"binary_entropy needs p in [0, 1], got {p}")
    p1 = np.atleast_1d(p_arr)
    h = np.zeros_like(p1)
    inner = (p1 > 0.0) & (p1 < 1.0)
    q = p1[inner]
    h[inner] = -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)
    if p_arr.ndim == 0:
        return float(h[0])
    return h.reshape(p_arr.shape)


def binary_entropy_inverse(y):
    """Inverse of ``h2`` restricted to ``p in [0, 1/2]``, by bisection.

    Bisection rather than Newton: the derivative of ``h2`` diverges at 0.
    """
    y_arr = np.asarray(y, dtype=float)
    if np.any((y_arr < 0.0) | (y_arr > 1.0)) or np.any(np.isnan(y_arr)):
        raise DomainError(f"binary_entropy_inverse needs y in [0, 1], got {y}")
    target = np.atleast_1d(y_arr).ravel()
    lo = np.zeros_like(target)
    hi = np.full_like(target, 0.5)
    while True:
        mid = 0.5 * (lo + hi)
        below = binary_entropy(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= BISECTION_XTOL):
            break
    # finish with the endpoint whose entropy is closer to the target
    p = np.where(np.abs(binary_entropy(lo) - target) <= np.abs(binary_entropy(hi) - target), lo, hi)
    p[target == 0.0] = 0.0
    p[target == 1.0] = 0.5
    if y_arr.ndim == 0:
        return float(p[0])
    return p.reshape(y_arr.shape)


def entropy_from_expectation(u):
    u = np.clip(np.asarray(u, dtype=float), -1.0, 1.0)
    return binary_entropy((1.0 + u) / 2.0)


def shannon_entropy(A, rho):
    """``H(A) = h2((1 + <A>)/2)``."""
    return entropy_from_expectation(expectation(A, rho))


def f_of_entropy(H):
    """``|<A>|`` recovered from the entropy: ``1 - 2 h2^{-1}(H)``."""
    p = binary_entropy_inverse(H)
    out = 1.0 - 2.0 * np.asarray(p)
    return float(out) if out.ndim == 0 else out


def expectation_from_std(delta, sign=1):
    d = np.asarray(delta, dtype=float)
    if np.any((d < 0.0) | (d > 1.0)) or np.any(np.isnan(d)):
        raise DomainError(f"standard deviation must lie in [0, 1], got {delta}")
    if np.any(np.abs(np.asarray(sign)) != 1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    out = np.asarray(sign) * np.sqrt(1.0 - d * d)
    return float(out) if out.ndim == 0 else out


def measure_from_expectation(u, measure: UncertaintyMeasure):
    """Map expectation values onto the chosen uncertainty measure."""
    measure = UncertaintyMeasure(measure)
    if measure is UncertaintyMeasure.EXPECTATION:
        return np.asarray(u, dtype=float)
    if measure is UncertaintyMeasure.STDDEV:
        return np.asarray(std_from_expectation(u))
    return np.asarray(entropy_from_expectation(u))
