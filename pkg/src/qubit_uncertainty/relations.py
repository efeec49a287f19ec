"""Tight qubit uncertainty relations, their saturating states and comparison bounds.

Every relation returns a :class:`RelationVerdict`.  The relation functions are
written with numpy broadcasting, so passing arrays of uncertainty values gives
a verdict whose fields are arrays of the same shape.  ``slack`` is always
signed so that a non-negative value means the relation holds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bloch import PauliObservable, QubitState, f_of_entropy, make_state
from .errors import (
    DegenerateTriple,
    DimensionMismatch,
    DomainError,
    NotRealizable,
    ParallelObservables,
    TooManyObservables,
)
from .pseudo import ObservableSet, realizable

TOL = 1e-9
DOMAIN_TOL = 1e-12
PARALLEL_TOL = 1e-12
VOLUME_TOL = 1e-12
MAX_SIGN_ENUMERATION = 20


def _out(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


@dataclass(frozen=True)
class RelationVerdict:
    satisfied: object
    lhs: object
    rhs: object
    slack: object
    saturated: object
    # True where the input cannot occur at the requested purity at all
    unattainable: object = False


def _verdict(lhs, rhs, slack, unattainable=None) -> RelationVerdict:
    slack = np.asarray(slack, dtype=float)
    if unattainable is not None:
        unattainable = np.asarray(unattainable, dtype=bool)
        slack = np.where(unattainable, -np.inf, slack)
    else:
        unattainable = np.zeros(slack.shape, dtype=bool)
    satisfied = slack >= -TOL
    saturated = np.abs(slack) <= TOL
    lhs = np.broadcast_to(np.asarray(lhs, dtype=float), slack.shape)
    rhs = np.broadcast_to(np.asarray(rhs, dtype=float), slack.shape)
    return RelationVerdict(
        _out(satisfied), _out(lhs), _out(rhs), _out(slack), _out(saturated), _out(unattainable)
    )


def _bounded(name, x, lo, hi):
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < lo - DOMAIN_TOL) or np.any(x > hi + DOMAIN_TOL):
        raise DomainError(f"{name} must lie in [{lo}, {hi}], got {x}")
    return np.clip(x, lo, hi)


def _radius(radius):
    return float(_bounded("radius", radius, 0.0, 1.0))


def _inner(ab):
    return float(_bounded("a.b", ab, -1.0, 1.0))


def _root(d):
    return np.sqrt(np.clip(1.0 - d * d, 0.0, 1.0))


# -- expectation values -----------------------------------------------------

def expectation_pair_relation(uA, uB, ab, radius=1.0) -> RelationVerdict:
    """Ellipse ``<A>^2 + <B>^2 - 2(a.b)<A><B> <= (1-(a.b)^2)|r|^2``."""
    uA = _bounded("<A>", uA, -1.0, 1.0)
    uB = _bounded("<B>", uB, -1.0, 1.0)
    ab, radius = _inner(ab), _radius(radius)
    lhs = uA * uA + uB * uB - 2.0 * ab * uA * uB
    rhs = (1.0 - ab * ab) * radius * radius
    return _verdict(lhs, rhs, rhs - lhs)


def ellipsoid_relation(u, S: ObservableSet, radius=1.0) -> RelationVerdict:
    """``sum_ij m_ij <A_i><A_j> <= radius^2`` for any number of observables.

    Without the realizability condition ``M M+ u = u`` this is not tight once
    the observables outnumber the dimension of their span.
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != S.n:
        raise DimensionMismatch(f"{u.shape[-1]} expectation values given for {S.n} observables")
    u = _bounded("<A_i>", u, -1.0, 1.0)
    radius = _radius(radius)
    lhs = np.einsum("...i,ij,...j->...", u, S.coeffs, u)
    rhs = radius * radius
    return _verdict(lhs, rhs, rhs - lhs)


# -- standard deviations ----------------------------------------------------

def stddev_pair_relation(dA, dB, ab, radius=1.0) -> RelationVerdict:
    """Tight two-observable relation on standard deviations.

    ``dA^2 + dB^2 + 2|a.b| sqrt(1-dA^2) sqrt(1-dB^2) >= 2 - (1-(a.b)^2) radius^2``;
    with ``radius=1`` the bound is ``1 + (a.b)^2``.
    """
    dA = _bounded("dA", dA, 0.0, 1.0)
    dB = _bounded("dB", dB, 0.0, 1.0)
    ab, radius = _inner(ab), _radius(radius)
    lhs = dA * dA + dB * dB + 2.0 * abs(ab) * _root(dA) * _root(dB)
    rhs = 2.0 - (1.0 - ab * ab) * radius * radius
    return _verdict(lhs, rhs, lhs - rhs)


def equivalent_product_form(dA, dB, ab) -> RelationVerdict:
    """``dA dB >= | sqrt(1-dA^2) sqrt(1-dB^2) - |a.b| |`` (pure-state bound)."""
    dA = _bounded("dA", dA, 0.0, 1.0)
    dB = _bounded("dB", dB, 0.0, 1.0)
    ab = _inner(ab)
    lhs = dA * dB
    rhs = np.abs(_root(dA) * _root(dB) - abs(ab))
    return _verdict(lhs, rhs, lhs - rhs)


def monotone_closure_relation(dA, dB, ab, radius=1.0) -> RelationVerdict:
    """Monotone closure of the two-observable region.

    At ``radius=1``: ``dA^2 + dB^2 + 2|a.b| dA dB >= 1 - (a.b)^2``.  For a fixed
    purity ``radius < 1`` the products ``dA dB`` become
    ``sqrt(radius^2 - (1-dA^2)) sqrt(radius^2 - (1-dB^2))``; a negative argument
    means that uncertainty cannot occur at that purity, and the verdict is
    flagged ``unattainable`` with slack ``-inf``.
    """
    dA = _bounded("dA", dA, 0.0, 1.0)
    dB = _bounded("dB", dB, 0.0, 1.0)
    ab, radius = _inner(ab), _radius(radius)
    if radius == 1.0:
        lhs = dA * dA + dB * dB + 2.0 * abs(ab) * dA * dB
        rhs = 1.0 - ab * ab
        return _verdict(lhs, rhs, lhs - rhs)
    R2 = radius * radius
    gA = R2 - (1.0 - dA * dA)
    gB = R2 - (1.0 - dB * dB)
    unattainable = (gA < -DOMAIN_TOL) | (gB < -DOMAIN_TOL)
    lhs = dA * dA + dB * dB + 2.0 * abs(ab) * np.sqrt(np.clip(gA, 0.0, None)) * np.sqrt(np.clip(gB, 0.0, None))
    rhs = 2.0 - (1.0 + ab * ab) * R2
    return _verdict(lhs, rhs, lhs - rhs, unattainable)


def disjunctive_closure_relation(dA, dB, ab) -> RelationVerdict:
    """``dA^2 + dB^2 >= 1``  or  ``dA sqrt(1-dB^2) + dB sqrt(1-dA^2) >= sqrt(1-(a.b)^2)``.

    With ``dA = sin(alpha)``, ``dB = sin(beta)`` the second disjunct reads
    ``sin(alpha + beta) >= sin(gamma)``, ``gamma = arccos|a.b|``, i.e.
    ``gamma <= alpha + beta <= pi - gamma``.  It is evaluated in that angle
    form: the sine form touches its bound tangentially at ``a.b = 0``, where a
    fixed slack tolerance would admit a band of width ~sqrt(tol).  The
    reported lhs/rhs are those of whichever disjunct has the larger slack
    (``alpha + beta`` against ``gamma`` for the second).
    """
    dA = _bounded("dA", dA, 0.0, 1.0)
    dB = _bounded("dB", dB, 0.0, 1.0)
    ab = _inner(ab)
    lhs1, rhs1 = dA * dA + dB * dB, 1.0
    angle = np.arctan2(dA, _root(dA)) + np.arctan2(dB, _root(dB))
    gamma = math.acos(abs(ab))
    s1 = lhs1 - rhs1
    s2 = np.minimum(angle - gamma, math.pi - gamma - angle)
    first = s1 >= s2
    return _verdict(np.where(first, lhs1, angle), np.where(first, rhs1, gamma), np.maximum(s1, s2))


# -- n observables ----------------------------------------------------------

@dataclass(frozen=True)
class SignVector:
    """Signs ``tau_i`` turning standard deviations back into expectations."""

    taus: tuple

    def __post_init__(self):
        taus = tuple(int(t) for t in self.taus)
        if any(t not in (1, -1) for t in taus):
            raise DomainError(f"signs must be +1 or -1, got {self.taus}")
        object.__setattr__(self, "taus", taus)

    def __len__(self):
        return len(self.taus)

    def __iter__(self):
        return iter(self.taus)

    def as_array(self) -> np.ndarray:
        return np.array(self.taus, dtype=float)


def _taus(taus, n) -> np.ndarray:
    t = taus.as_array() if isinstance(taus, SignVector) else SignVector(tuple(taus)).as_array()
    if t.size != n:
        raise DimensionMismatch(f"{t.size} signs given for {n} observables")
    return t


def n_observable_relation(ds, taus, S: ObservableSet, radius=1.0) -> RelationVerdict:
    """Relation for ``n`` observables with a fixed sign assignment.

    ``sum_i m_ii dA_i^2 - sum_{i!=j} tau_i tau_j m_ij sqrt(1-dA_i^2) sqrt(1-dA_j^2)``
    equals ``sum_i m_ii - |r|^2`` when the directions span the Bloch sphere, and
    is bounded below by it otherwise; the verdict compares with
    ``sum_i m_ii - radius^2``.  ``ds`` may be a batch of shape ``(N, n)``.
    """
    ds = np.asarray(ds, dtype=float)
    if ds.shape[-1] != S.n:
        raise DimensionMismatch(f"{ds.shape[-1]} uncertainties given for {S.n} observables")
    ds = _bounded("dA_i", ds, 0.0, 1.0)
    t = _taus(taus, S.n)
    radius = _radius(radius)
    m = S.coeffs
    diag = np.diag(m)
    v = t * _root(ds)
    offdiag = m - np.diag(diag)
    cross = np.einsum("...i,ij,...j->...", v, offdiag, v)
    lhs = ds * ds @ diag - cross
    rhs = diag.sum() - radius * radius
    return _verdict(lhs, rhs, lhs - rhs)


def n_observable_abs_relation(ds, S: ObservableSet, radius=1.0) -> RelationVerdict:
    """Sign-free form: ``-tau_i tau_j m_ij`` replaced by ``+|m_ij|``."""
    ds = np.asarray(ds, dtype=float)
    if ds.shape[-1] != S.n:
        raise DimensionMismatch(f"{ds.shape[-1]} uncertainties given for {S.n} observables")
    ds = _bounded("dA_i", ds, 0.0, 1.0)
    radius = _radius(radius)
    m = S.coeffs
    diag = np.diag(m)
    x = _root(ds)
    offdiag = np.abs(m - np.diag(diag))
    lhs = ds * ds @ diag + np.einsum("...i,ij,...j->...", x, offdiag, x)
    rhs = diag.sum() - radius * radius
    return _verdict(lhs, rhs, lhs - rhs)


def _sign_patterns(n: int):
    # tau_1 = +1 without loss of generality: u -> -u preserves realizability
    for rest in itertools.product((1, -1), repeat=n - 1):
        yield (1,) + rest


def exists_sign_assignment(ds, S: ObservableSet, radius=1.0) -> Optional[SignVector]:
    """First sign vector (lexicographic, +1 before -1) making the point realizable."""
    ds = np.asarray(ds, dtype=float).ravel()
    if ds.size > MAX_SIGN_ENUMERATION:
        raise TooManyObservables(f"sign enumeration limited to {MAX_SIGN_ENUMERATION} observables")
    if ds.size != S.n:
        raise DimensionMismatch(f"{ds.size} uncertainties given for {S.n} observables")
    x = _root(_bounded("dA_i", ds, 0.0, 1.0))
    for taus in _sign_patterns(S.n):
        if realizable(S, np.array(taus) * x, radius):
            return SignVector(taus)
    return None


def sign_assignment_mask(ds, S: ObservableSet, radius=1.0) -> np.ndarray:
    """Batch version of :func:`exists_sign_assignment`: whether any signs work."""
    ds = np.asarray(ds, dtype=float)
    if S.n > MAX_SIGN_ENUMERATION:
        raise TooManyObservables(f"sign enumeration limited to {MAX_SIGN_ENUMERATION} observables")
    x = _root(_bounded("dA_i", ds, 0.0, 1.0))
    found = np.zeros(ds.shape[:-1], dtype=bool)
    for taus in _sign_patterns(S.n):
        found |= realizable(S, np.array(taus) * x, radius)
    return found


# -- three observables ------------------------------------------------------

@dataclass(frozen=True)
class TripleGeometry:
    volume_sq: float
    cross_norms: tuple  # |b x c|^2, |a x c|^2, |a x b|^2
    cross_dots: tuple  # (bxc).(cxa), (bxc).(axb), (cxa).(axb)
    crosses: tuple  # b x c, c x a, a x b


def _direction(x) -> np.ndarray:
    return x.direction if isinstance(x, PauliObservable) else np.asarray(x, dtype=float)


def triple_geometry(a, b, c) -> TripleGeometry:
    a, b, c = _direction(a), _direction(b), _direction(c)
    bc, ca, ab = np.cross(b, c), np.cross(c, a), np.cross(a, b)
    return TripleGeometry(
        volume_sq=float(np.dot(a, bc) ** 2),
        cross_norms=(float(bc @ bc), float(ca @ ca), float(ab @ ab)),
        cross_dots=(float(bc @ ca), float(bc @ ab), float(ca @ ab)),
        crosses=(bc, ca, ab),
    )


def _nondegenerate(a, b, c) -> TripleGeometry:
    g = triple_geometry(a, b, c)
    if g.volume_sq <= VOLUME_TOL:
        raise DegenerateTriple(f"directions are (nearly) coplanar: V^2 = {g.volume_sq:.3g}")
    return g


def triple_relation(dA, dB, dC, taus, a, b, c, radius=1.0) -> RelationVerdict:
    """Explicit three-observable relation (already multiplied through by ``V^2``)."""
    g = _nondegenerate(a, b, c)
    d = [_bounded(n, x, 0.0, 1.0) for n, x in (("dA", dA), ("dB", dB), ("dC", dC))]
    tA, tB, tC = _taus(taus, 3)
    radius = _radius(radius)
    xA, xB, xC = (_root(di) for di in d)
    nbc, nac, nab = g.cross_norms
    dot_ab, dot_ac, dot_bc = g.cross_dots
    lhs = (
        nbc * d[0] ** 2 + nac * d[1] ** 2 + nab * d[2] ** 2
        - 2.0 * tA * tB * dot_ab * xA * xB
        - 2.0 * tA * tC * dot_ac * xA * xC
        - 2.0 * tB * tC * dot_bc * xB * xC
    )
    rhs = nbc + nac + nab - g.volume_sq * radius * radius
    return _verdict(lhs, rhs, lhs - rhs)


def expectation_triple_relation(uA, uB, uC, a, b, c, radius=1.0) -> RelationVerdict:
    """``|(b x c)<A> + (c x a)<B> + (a x b)<C>|^2 = V^2 |r|^2 <= V^2 radius^2``."""
    g = _nondegenerate(a, b, c)
    u = [_bounded(n, x, -1.0, 1.0) for n, x in (("<A>", uA), ("<B>", uB), ("<C>", uC))]
    radius = _radius(radius)
    bc, ca, ab = g.crosses
    w = u[0][..., None] * bc + u[1][..., None] * ca + u[2][..., None] * ab
    lhs = np.sum(w * w, axis=-1)
    rhs = g.volume_sq * radius * radius
    return _verdict(lhs, rhs, rhs - lhs)


# -- entropies --------------------------------------------------------------

def entropic_pair_relation(HA, HB, ab, radius=1.0) -> RelationVerdict:
    """``f(H(A))^2 + f(H(B))^2 - 2|a.b| f(H(A)) f(H(B)) <= (1-(a.b)^2)|r|^2``."""
    HA = _bounded("H(A)", HA, 0.0, 1.0)
    HB = _bounded("H(B)", HB, 0.0, 1.0)
    ab, radius = _inner(ab), _radius(radius)
    fA, fB = np.asarray(f_of_entropy(HA)), np.asarray(f_of_entropy(HB))
    lhs = fA * fA + fB * fB - 2.0 * abs(ab) * fA * fB
    rhs = (1.0 - ab * ab) * radius * radius
    return _verdict(lhs, rhs, rhs - lhs)


# -- saturating states ------------------------------------------------------

def _pair_inner(a, b) -> tuple[np.ndarray, np.ndarray, float]:
    a, b = _direction(a), _direction(b)
    c = float(np.clip(a @ b, -1.0, 1.0))
    if abs(c) >= 1.0 - PARALLEL_TOL:
        raise ParallelObservables(f"a.b = {c}: observables are (anti)parallel")
    return a, b, c


def _onto_sphere(r: np.ndarray) -> QubitState:
    norm = np.linalg.norm(r)
    return make_state(r / norm if norm > 1.0 else r)


def _in_plane_state(uA, uB, a, b, c) -> np.ndarray:
    return (uA * (a - c * b) + uB * (b - c * a)) / (1.0 - c * c)


def saturating_state_expectations(uA, uB, a, b) -> QubitState:
    """State in the ab-plane with expectations ``(uA, uB)``."""
    a, b, c = _pair_inner(a, b)
    if not expectation_pair_relation(uA, uB, c, 1.0).satisfied:
        raise NotRealizable(f"({uA}, {uB}) lies outside the ellipse for a.b = {c}")
    return _onto_sphere(_in_plane_state(uA, uB, a, b, c))


def _tau(c: float) -> int:
    # sgn(a.b) with the convention +1 at a.b = 0
    return -1 if c < 0 else 1


def saturating_state_stddev(dA, dB, a, b) -> QubitState:
    """State attaining ``(dA, dB)`` via ``<A> = sqrt(1-dA^2)``, ``<B> = tau sqrt(1-dB^2)``."""
    a, b, c = _pair_inner(a, b)
    if not stddev_pair_relation(dA, dB, c, 1.0).satisfied:
        raise NotRealizable(f"({dA}, {dB}) is outside the uncertainty region for a.b = {c}")
    uA, uB = math.sqrt(1.0 - dA * dA), _tau(c) * math.sqrt(1.0 - dB * dB)
    return _onto_sphere(_in_plane_state(uA, uB, a, b, c))


def boundary_states_stddev(dA, a, b) -> tuple[QubitState, QubitState]:
    """The pure states ``r_+`` and ``r_-`` in the ab-plane with ``Delta A = dA``.

    ``r_+`` always lies on the lower boundary of the standard-deviation region;
    ``r_-`` only when ``dA <= |a.b|``, ``dA = 1`` or ``a.b = 0``.
    """
    dA = float(_bounded("dA", dA, 0.0, 1.0))
    a, b, c = _pair_inner(a, b)
    along = math.sqrt(1.0 - dA * dA) * a
    across = _tau(c) * dA / math.sqrt(1.0 - c * c) * (b - c * a)
    return _onto_sphere(along + across), _onto_sphere(along - across)


# -- comparison bounds ------------------------------------------------------

def robertson_bound(a, b, rho) -> float:
    """State-dependent Robertson bound ``|<[A,B]/2i>| = |(a x b).r|``."""
    r = rho.bloch if isinstance(rho, QubitState) else np.asarray(rho, dtype=float)
    val = np.abs(r @ np.cross(_direction(a), _direction(b)))
    return float(val) if np.ndim(val) == 0 else val


def busch_bounds(dA, dB, ab) -> tuple[RelationVerdict, RelationVerdict]:
    """``dA + dB >= |a x b|`` and ``dA^2 + dB^2 >= 1 - |a.b|`` (comparison only)."""
    dA = _bounded("dA", dA, 0.0, 1.0)
    dB = _bounded("dB", dB, 0.0, 1.0)
    ab = _inner(ab)
    lhs1, rhs1 = dA + dB, math.sqrt(1.0 - ab * ab)
    lhs2, rhs2 = dA * dA + dB * dB, 1.0 - abs(ab)
    return _verdict(lhs1, rhs1, lhs1 - rhs1), _verdict(lhs2, rhs2, lhs2 - rhs2)


def maassen_uffink_bound(ab) -> float:
    """``-2 log2 c`` with maximal overlap ``c = sqrt((1+|a.b|)/2)``."""
    ab = _inner(ab)
    return -2.0 * math.log2(math.sqrt((1.0 + abs(ab)) / 2.0))


def maassen_uffink_relation(HA, HB, ab) -> RelationVerdict:
    HA = _bounded("H(A)", HA, 0.0, 1.0)
    HB = _bounded("H(B)", HB, 0.0, 1.0)
    lhs, rhs = HA + HB, maassen_uffink_bound(ab)
    return _verdict(lhs, rhs, lhs - rhs)


def check_all_pair(values: Sequence[float], ab: float, measure: str, radius=1.0) -> dict:
    """Evaluate every relation applicable to a pair of uncertainty values."""
    x, y = values
    if measure == "expectation":
        return {"expectation_pair": expectation_pair_relation(x, y, ab, radius)}
    if measure == "entropy":
        return {
            "entropic_pair": entropic_pair_relation(x, y, ab, radius),
            "maassen_uffink": maassen_uffink_relation(x, y, ab),
        }
    busch_sum, busch_sq = busch_bounds(x, y, ab)
    return {
        "stddev_pair": stddev_pair_relation(x, y, ab, radius),
        "product_form": equivalent_product_form(x, y, ab),
        "monotone_closure": monotone_closure_relation(x, y, ab, radius),
        "disjunctive_closure": disjunctive_closure_relation(x, y, ab),
        "busch_sum": busch_sum,
        "busch_squares": busch_sq,
    }
