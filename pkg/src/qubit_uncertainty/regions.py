"""Plot-ready boundary curves of the uncertainty regions and comparison bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import UncertaintyMeasure, binary_entropy, f_of_entropy, measure_from_expectation
from .oracle import fibonacci_sphere, planar_states
from .pseudo import ObservableSet
from .relations import PARALLEL_TOL, boundary_states_stddev, maassen_uffink_bound


@dataclass
class Curve:
    label: str
    kind: str  # "boundary" (saturating), "segment" (member edge) or "comparison"
    radius: float
    points: np.ndarray  # (N, n)


def _pair_inner(S: ObservableSet) -> float:
    return float(np.clip(S.matrix[0] @ S.matrix[1], -1.0, 1.0))


def _plane(S: ObservableSet):
    return S.matrix[0], S.matrix[1]


def _pure_boundary_states(S: ObservableSet, points: int) -> tuple[np.ndarray, np.ndarray]:
    """``r_+`` for every ``dA`` and the saturating part of ``r_-``, each ordered by ``dA``."""
    a, b = S.matrix
    c = _pair_inner(S)
    dA = np.linspace(0.0, 1.0, points)
    plus, minus = zip(*(boundary_states_stddev(d, a, b) for d in dA))
    plus = np.array([s.bloch for s in plus])
    minus = np.array([s.bloch for s in minus])
    keep = (dA <= abs(c)) | (dA == 1.0) | (c == 0.0)
    return plus, minus[keep]


def _saturating_arc(S: ObservableSet, radius: float, points: int) -> np.ndarray:
    """In-plane states of norm ``radius`` with ``<A> >= 0`` and ``(a.b)<A><B> >= 0``.

    The other saturating arc is its mirror image ``r -> -r`` and has the same
    uncertainties, so one arc traces the whole curve.
    """
    c = _pair_inner(S)
    states = planar_states(_plane(S), points, radius)
    u = S.expectations(states)
    keep = (u[:, 0] >= 0.0) & (c * u[:, 0] * u[:, 1] >= 0.0)
    arc = states[keep]
    # the arc lies in the half-plane r.a >= 0, so the angle from a orders it
    a, b = S.matrix
    perp = b - c * a
    theta = np.arctan2(arc @ perp, (arc @ a) * np.linalg.norm(perp))
    return arc[np.argsort(theta, kind="stable")]


def _segments(S: ObservableSet, radius: float, measure: UncertaintyMeasure, points: int) -> list[Curve]:
    # edges where one observable is maximally uncertain: <B> = 0, |<A>| <= radius |a x b|
    c = _pair_inner(S)
    top = radius * math.sqrt(max(0.0, 1.0 - c * c))
    u = np.linspace(0.0, top, points)
    zero = np.zeros_like(u)
    first = measure_from_expectation(np.column_stack([u, zero]), measure)
    second = measure_from_expectation(np.column_stack([zero, u]), measure)
    return [Curve("segment_B_max", "segment", radius, first[::-1]), Curve("segment_A_max", "segment", radius, second[::-1])]


def _std_to_entropy(d):
    return binary_entropy((1.0 + np.sqrt(np.clip(1.0 - np.asarray(d) ** 2, 0.0, 1.0))) / 2.0)


def _entropy_to_std(h):
    f = np.asarray(f_of_entropy(h))
    return np.sqrt(np.clip(1.0 - f * f, 0.0, 1.0))


def comparison_curves(ab: float, measure: UncertaintyMeasure, points: int) -> list[Curve]:
    """Busch and Maassen-Uffink bounds in the coordinates of ``measure``."""
    if measure is UncertaintyMeasure.EXPECTATION:
        return []
    cross = math.sqrt(max(0.0, 1.0 - ab * ab))
    t = np.linspace(0.0, 1.0, points)
    busch_sum = np.column_stack([cross * t, cross * (1.0 - t)])
    rho = math.sqrt(1.0 - abs(ab))
    theta = t * math.pi / 2.0
    busch_sq = np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
    mu = maassen_uffink_bound(ab)
    lo, hi = max(0.0, mu - 1.0), min(1.0, mu)
    hA = lo + (hi - lo) * t
    mu_line = np.column_stack([hA, np.clip(mu - hA, 0.0, 1.0)])
    if measure is UncertaintyMeasure.STDDEV:
        mu_line = np.column_stack([_entropy_to_std(mu_line[:, 0]), _entropy_to_std(mu_line[:, 1])])
    else:
        busch_sum = np.column_stack([_std_to_entropy(busch_sum[:, 0]), _std_to_entropy(busch_sum[:, 1])])
        busch_sq = np.column_stack([_std_to_entropy(busch_sq[:, 0]), _std_to_entropy(busch_sq[:, 1])])
    return [
        Curve("busch_sum", "comparison", 1.0, busch_sum),
        Curve("busch_squares", "comparison", 1.0, busch_sq),
        Curve("maassen_uffink", "comparison", 1.0, mu_line),
    ]


def pair_region(S: ObservableSet, measure, radii=(1.0,), points: int = 2000, comparisons: bool = True) -> list[Curve]:
    """Boundary curves of a two-observable region, one block per radius."""
    measure = UncertaintyMeasure(measure)
    c = _pair_inner(S)
    curves = []
    for radius in radii:
        if measure is UncertaintyMeasure.EXPECTATION:
            branches = [("boundary", planar_states(_plane(S), points, radius))]
        elif radius == 1.0 and abs(c) < 1.0 - PARALLEL_TOL:
            plus, minus = _pure_boundary_states(S, points)
            branches = [("boundary_plus", plus), ("boundary_minus", minus)]
        else:
            branches = [("boundary", _saturating_arc(S, radius, 4 * points))]
        for label, states in branches:
            values = measure_from_expectation(S.expectations(states), measure)
            curves.append(Curve(label, "boundary", float(radius), values))
        if measure is not UncertaintyMeasure.EXPECTATION:
            curves.extend(_segments(S, radius, measure, max(2, points // 10)))
    if comparisons:
        curves.extend(comparison_curves(c, measure, points))
    return curves


def triple_region(S: ObservableSet, measure, radii=(1.0,), points: int = 2000) -> list[Curve]:
    """Saturating surface of a three-observable region, sampled on a sphere lattice."""
    measure = UncertaintyMeasure(measure)
    sphere = fibonacci_sphere(points)
    return [
        Curve("boundary", "boundary", float(R), measure_from_expectation(S.expectations(R * sphere), measure))
        for R in radii
    ]
