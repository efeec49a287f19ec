"""General qubit observables ``alpha 1 + a.sigma`` and two-outcome POVMs.

Both reduce to a Pauli observable along ``a/|a|``: the expectation value is
shifted by ``alpha`` and scaled by ``|a|``, after which the Pauli relations
apply unchanged.  Outcomes of a POVM are labelled +1 and -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import UNIT_TOL, PauliObservable, QubitState, entropy_from_expectation
from .errors import DomainError, TrivialObservable
from .relations import RelationVerdict, _verdict, entropic_pair_relation, expectation_pair_relation

ZERO_TOL = 1e-12
POVM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GeneralObservable:
    offset: float
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float).reshape(3))


@dataclass(frozen=True, eq=False)
class BinaryPovm:
    """Elements ``A_pm = (1 pm (alpha 1 + a.sigma)) / 2`` with ``|alpha| + |a| <= 1``."""

    offset: float
    direction: np.ndarray
    outcomes: tuple = (1, -1)

    def __post_init__(self):
        a = np.asarray(self.direction, dtype=float).reshape(3)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "direction", a)
        if tuple(self.outcomes) != (1, -1):
            raise DomainError("only the outcome labels (+1, -1) are supported")
        if abs(self.offset) + np.linalg.norm(a) > 1.0 + POVM_TOL:
            raise DomainError(f"|alpha| + |a| = {abs(self.offset) + np.linalg.norm(a)} > 1: elements not positive")

    @property
    def is_projective(self) -> bool:
        return abs(self.offset) < POVM_TOL and abs(np.linalg.norm(self.direction) - 1.0) < POVM_TOL


def reduce_to_pauli(G) -> tuple[PauliObservable, float, float]:
    """``(a/|a|, alpha, |a|)``; then ``<A~> = (<A> - alpha)/|a|`` and ``dA~ = dA/|a|``."""
    a = np.asarray(G.direction, dtype=float)
    norm = float(np.linalg.norm(a))
    if norm <= ZERO_TOL:
        raise TrivialObservable("observable is a multiple of the identity; its spread is always zero")
    if abs(norm - 1.0) <= UNIT_TOL:
        # already a Pauli direction: keep it bit-for-bit so the projective case is exact
        return PauliObservable(a), float(G.offset), 1.0
    return PauliObservable(a / norm), float(G.offset), norm


def _bloch(rho):
    return rho.bloch if isinstance(rho, QubitState) else np.asarray(rho, dtype=float)


def outcome_expectation(P: BinaryPovm, rho):
    """``<A> = alpha + a.r`` for the effective operator ``A_+ - A_-``."""
    return P.offset + _bloch(rho) @ P.direction


def povm_distribution(P: BinaryPovm, rho) -> tuple:
    p_plus = np.clip((1.0 + outcome_expectation(P, rho)) / 2.0, 0.0, 1.0)
    p_minus = 1.0 - p_plus
    if np.ndim(p_plus) == 0:
        return float(p_plus), float(p_minus)
    return p_plus, p_minus


def povm_std_dev(P: BinaryPovm, rho):
    """Spread of the +-1 outcomes, ``sqrt(1 - <A>^2)``.

    Not ``sqrt(<A^2> - <A>^2)`` of the effective operator, whose square is not
    the identity for an unsharp measurement.
    """
    u = np.clip(outcome_expectation(P, rho), -1.0, 1.0)
    d = np.sqrt(1.0 - u * u)
    return float(d) if np.ndim(d) == 0 else d


def povm_entropy(P: BinaryPovm, rho):
    return entropy_from_expectation(outcome_expectation(P, rho))


def reduced_expectation(P, u):
    """Expectation of the reduced Pauli observable for outcome expectation ``u``."""
    _, alpha, scale = reduce_to_pauli(P)
    return (np.asarray(u, dtype=float) - alpha) / scale


def _reduced_pair(P, Q, uP, uQ):
    a, _, _ = reduce_to_pauli(P)
    b, _, _ = reduce_to_pauli(Q)
    xP, xQ = reduced_expectation(P, uP), reduced_expectation(Q, uQ)
    # a reduced value beyond [-1, 1] cannot come from any state
    outside = (np.abs(xP) > 1.0 + ZERO_TOL) | (np.abs(xQ) > 1.0 + ZERO_TOL)
    ab = float(np.clip(a.direction @ b.direction, -1.0, 1.0))
    return np.clip(xP, -1.0, 1.0), np.clip(xQ, -1.0, 1.0), ab, outside


def _flag_outside(v: RelationVerdict, outside) -> RelationVerdict:
    if not np.any(outside):
        return v
    return _verdict(v.lhs, v.rhs, v.slack, outside)


def povm_pair_relation(P: BinaryPovm, Q: BinaryPovm, uP, uQ, radius=1.0) -> RelationVerdict:
    """Two-observable ellipse evaluated on the reduced expectations ``(u - alpha)/|a|``."""
    xP, xQ, ab, outside = _reduced_pair(P, Q, uP, uQ)
    return _flag_outside(expectation_pair_relation(xP, xQ, ab, radius), outside)


def povm_entropic_pair_relation(P: BinaryPovm, Q: BinaryPovm, uP, uQ, radius=1.0) -> RelationVerdict:
    """Entropic relation on the entropies of the reduced Pauli observables."""
    xP, xQ, ab, outside = _reduced_pair(P, Q, uP, uQ)
    HP, HQ = entropy_from_expectation(xP), entropy_from_expectation(xQ)
    return _flag_outside(entropic_pair_relation(HP, HQ, ab, radius), outside)
