"""Brute-force certification of the uncertainty relations.

States are sampled (randomly and on deterministic sweeps), pushed through the
forward map ``r -> (a_i . r)`` and then through the uncertainty measure.  The
resulting point cloud is the attained region.  A relation is *sound* if no
attained point violates it and *complete* if every grid point satisfying it
lies within ``epsilon`` of an attained point (or, for monotone-closure
relations, of the monotone closure of the attained points).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.spatial import cKDTree

from . import relations as rel
from .bloch import UncertaintyMeasure, measure_from_expectation
from .errors import DomainError, UnknownRelation, UnsupportedSetSize
from .pseudo import ObservableSet, realizable

GENERATOR = f"numpy.random.PCG64 via SeedSequence spawn (numpy {np.__version__})"
CHUNK = 1 << 16
SOUNDNESS_TOL = 1e-9
MAX_GRID_POINTS = 50_000_000


class SamplerMode(str, enum.Enum):
    PURE_UNIFORM = "pure_uniform"
    BALL_UNIFORM = "ball_uniform"
    PLANAR_GRID = "planar_grid"


@dataclass(frozen=True)
class Sampler:
    """Replayable description of a batch of states.

    Random modes draw chunk ``k`` from ``SeedSequence(seed, spawn_key=(k,))``
    so every index range can be regenerated on its own.  ``plane`` (two
    spanning vectors) and ``radius`` only matter for ``PLANAR_GRID``.
    """

    seed: int = 0
    mode: SamplerMode = SamplerMode.PURE_UNIFORM
    count: int = 1000
    plane: Optional[tuple] = None
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", SamplerMode(self.mode))
        if self.count < 1:
            raise DomainError(f"sample count must be positive, got {self.count}")

    def describe(self) -> dict:
        return {"seed": int(self.seed), "mode": self.mode.value, "count": int(self.count), "generator": GENERATOR}


def _chunk_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k,))))


def _unit_rows(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _plane_basis(plane) -> tuple[np.ndarray, np.ndarray]:
    if plane is None:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    p, q = (np.asarray(v, dtype=float) for v in plane)
    e1 = p / np.linalg.norm(p)
    q = q - (q @ e1) * e1
    if np.linalg.norm(q) < 1e-12:
        # any unit vector perpendicular to e1
        trial = np.eye(3)[np.argmin(np.abs(e1))]
        q = trial - (trial @ e1) * e1
    return e1, q / np.linalg.norm(q)


def planar_states(plane, count: int, radius: float = 1.0) -> np.ndarray:
    """``count`` Bloch vectors of norm ``radius`` at equally spaced angles in a plane."""
    e1, e2 = _plane_basis(plane)
    t = 2.0 * np.pi * np.arange(count) / count
    return radius * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2)


def sample_states(s: Sampler) -> np.ndarray:
    """Bloch vectors as an ``(count, 3)`` array."""
    if s.mode is SamplerMode.PLANAR_GRID:
        return planar_states(s.plane, s.count, s.radius)
    out = np.empty((s.count, 3))
    for k, start in enumerate(range(0, s.count, CHUNK)):
        stop = min(start + CHUNK, s.count)
        rng = _chunk_rng(s.seed, k)
        v = _unit_rows(rng.standard_normal((stop - start, 3)))
        if s.mode is SamplerMode.BALL_UNIFORM:
            v *= np.cbrt(rng.random(stop - start))[:, None]
        out[start:stop] = v
    return out


def fibonacci_sphere(count: int) -> np.ndarray:
    """Near-uniform deterministic points on the unit sphere."""
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def ball_lattice(spacing: float, clamp: bool = False) -> np.ndarray:
    """Cubic lattice of Bloch vectors inside the unit ball.

    With ``clamp`` the lattice is extended one cell beyond the sphere and the
    outer points are pulled back onto it, so every point of the ball lies
    within ``spacing * sqrt(3) / 2`` of the result.
    """
    reach = 1.0 + (spacing * math.sqrt(3.0) if clamp else 0.0)
    half = math.floor(reach / spacing)
    k = np.arange(-half, half + 1) * spacing
    out = []
    for x in k:
        yz = np.stack(np.meshgrid(k, k, indexing="ij"), axis=-1).reshape(-1, 2)
        g = np.column_stack([np.full(len(yz), x), yz])
        norm = np.sqrt(np.einsum("ij,ij->i", g, g))
        g = g[norm <= reach]
        norm = norm[norm <= reach]
        if clamp:
            g[norm > 1.0] /= norm[norm > 1.0, None]
        out.append(g)
    return np.vstack(out)


def attainable_region(S: ObservableSet, measure, s: Sampler) -> np.ndarray:
    """Uncertainty tuples, one row per sampled state."""
    return measure_from_expectation(S.expectations(sample_states(s)), UncertaintyMeasure(measure))


# -- relation registry ------------------------------------------------------

def _pair_ab(S: ObservableSet) -> float:
    return float(np.clip(S.matrix[0] @ S.matrix[1], -1.0, 1.0))


@dataclass(frozen=True)
class RelationSpec:
    relation_id: str
    measure: UncertaintyMeasure
    n: Optional[int]
    slack: Callable  # (values (N, n), S, radius) -> slack array
    claimed_tight: Callable  # (S) -> bool
    closure: bool = False
    side_condition: bool = False


def _always(S):
    return True


def _never(S):
    return False


def _full_span(S):
    return S.span_rank == S.n


def _triple_slack(v, S, radius):
    best = np.full(v.shape[0], -np.inf)
    a, b, c = S.observables
    for taus in rel._sign_patterns(3):
        verdict = rel.triple_relation(v[:, 0], v[:, 1], v[:, 2], taus, a, b, c, radius)
        best = np.maximum(best, verdict.slack)
    return best


def _n_observable_slack(v, S, radius):
    # signs chosen per point; realizability is part of membership
    found = rel.sign_assignment_mask(v, S, radius)
    best = np.full(v.shape[0], -np.inf)
    for taus in rel._sign_patterns(S.n):
        best = np.maximum(best, rel.n_observable_relation(v, taus, S, radius).slack)
    return np.where(found, np.maximum(best, 0.0), np.minimum(best, -1.0))


def _realizable_slack(v, S, radius):
    base = rel.ellipsoid_relation(v, S, radius).slack
    ok = realizable(S, v, radius)
    return np.where(ok, np.maximum(base, 0.0), np.minimum(base, -1.0))


_E, _S, _H = UncertaintyMeasure.EXPECTATION, UncertaintyMeasure.STDDEV, UncertaintyMeasure.ENTROPY

RELATIONS: dict[str, RelationSpec] = {
    spec.relation_id: spec
    for spec in [
        RelationSpec("expectation_pair", _E, 2,
                     lambda v, S, R: rel.expectation_pair_relation(v[:, 0], v[:, 1], _pair_ab(S), R).slack, _always),
        RelationSpec("ellipsoid", _E, None,
                     lambda v, S, R: rel.ellipsoid_relation(v, S, R).slack, _full_span),
        RelationSpec("ellipsoid_realizable", _E, None, _realizable_slack, _always, side_condition=True),
        RelationSpec("expectation_triple", _E, 3,
                     lambda v, S, R: rel.expectation_triple_relation(v[:, 0], v[:, 1], v[:, 2], *S.observables, R).slack,
                     _always),
        RelationSpec("stddev_pair", _S, 2,
                     lambda v, S, R: rel.stddev_pair_relation(v[:, 0], v[:, 1], _pair_ab(S), R).slack, _always),
        RelationSpec("product_form", _S, 2,
                     lambda v, S, R: rel.equivalent_product_form(v[:, 0], v[:, 1], _pair_ab(S)).slack, _always),
        RelationSpec("monotone_closure", _S, 2,
                     lambda v, S, R: rel.monotone_closure_relation(v[:, 0], v[:, 1], _pair_ab(S), R).slack, _always,
                     closure=True),
        RelationSpec("disjunctive_closure", _S, 2,
                     lambda v, S, R: rel.disjunctive_closure_relation(v[:, 0], v[:, 1], _pair_ab(S)).slack, _always,
                     closure=True),
        RelationSpec("busch_sum", _S, 2,
                     lambda v, S, R: rel.busch_bounds(v[:, 0], v[:, 1], _pair_ab(S))[0].slack, _never),
        RelationSpec("busch_squares", _S, 2,
                     lambda v, S, R: rel.busch_bounds(v[:, 0], v[:, 1], _pair_ab(S))[1].slack, _never),
        RelationSpec("triple", _S, 3, _triple_slack, _always),
        RelationSpec("n_observable", _S, None, _n_observable_slack, _always, side_condition=True),
        RelationSpec("n_observable_abs", _S, None,
                     lambda v, S, R: rel.n_observable_abs_relation(v, S, R).slack, _never),
        RelationSpec("entropic_pair", _H, 2,
                     lambda v, S, R: rel.entropic_pair_relation(v[:, 0], v[:, 1], _pair_ab(S), R).slack, _always),
        RelationSpec("maassen_uffink", _H, 2,
                     lambda v, S, R: rel.maassen_uffink_relation(v[:, 0], v[:, 1], _pair_ab(S)).slack, _never),
    ]
}

# short descriptive names
ALIASES = {
    "ellipse": "expectation_pair",
    "expectation_ellipsoid": "ellipsoid",
    "stddev": "stddev_pair",
    "closure": "monotone_closure",
    "sign_choice": "n_observable",
    "entropic": "entropic_pair",
}


def get_relation(relation_id: str) -> RelationSpec:
    key = ALIASES.get(relation_id, relation_id)
    if key not in RELATIONS:
        raise UnknownRelation(f"unknown relation {relation_id!r}; known: {sorted(RELATIONS)}")
    return RELATIONS[key]


# -- reports ----------------------------------------------------------------

@dataclass
class TightnessReport:
    relation_id: str
    params: dict
    soundness_violations: int
    worst_slack: float
    completeness_gap: float
    epsilon: float
    grid_resolution: float
    samples_used: int
    grid_members: int
    sampler: dict
    claimed_tight: bool
    worst_gap_point: list = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return self.soundness_violations == 0

    @property
    def complete(self) -> bool:
        return self.completeness_gap <= self.epsilon

    @property
    def passed(self) -> bool:
        return self.sound and self.complete

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "params": dict(self.params, grid_resolution=self.grid_resolution, samples_used=self.samples_used,
                           grid_members=self.grid_members, claimed_tight=self.claimed_tight,
                           worst_gap_point=self.worst_gap_point),
            "soundness": {"violations": self.soundness_violations, "worst_slack": self.worst_slack},
            "completeness": {"gap": self.completeness_gap, "epsilon": self.epsilon},
            "sampler": self.sampler,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)


def merge_reports(a: TightnessReport, b: TightnessReport) -> TightnessReport:
    """Combine two reports on the same relation and grid (worst case of each figure)."""
    worse_gap = a if a.completeness_gap >= b.completeness_gap else b
    return TightnessReport(
        relation_id=a.relation_id,
        params=a.params,
        soundness_violations=a.soundness_violations + b.soundness_violations,
        worst_slack=min(a.worst_slack, b.worst_slack),
        completeness_gap=min(a.completeness_gap, b.completeness_gap),
        epsilon=a.epsilon,
        grid_resolution=a.grid_resolution,
        samples_used=a.samples_used + b.samples_used,
        grid_members=a.grid_members,
        sampler=a.sampler,
        claimed_tight=a.claimed_tight,
        worst_gap_point=worse_gap.worst_gap_point,
    )


# -- certification ----------------------------------------------------------

def _axis(measure: UncertaintyMeasure, h: float) -> np.ndarray:
    lo = -1.0 if measure is UncertaintyMeasure.EXPECTATION else 0.0
    steps = int(round((1.0 - lo) / h))
    return lo + (1.0 - lo) * np.arange(steps + 1) / steps


def _slice_basis(S: ObservableSet, spec: RelationSpec) -> Optional[np.ndarray]:
    if spec.side_condition and spec.measure is UncertaintyMeasure.EXPECTATION and S.span_rank < S.n:
        return S.range_basis()
    return None


def _grid_chunks(S: ObservableSet, spec: RelationSpec, h: float):
    """Grid points in measure space, yielded in slabs along the first axis."""
    Q = _slice_basis(S, spec)
    if Q is not None:
        # grid the realizable slice (range of M) in orthonormal coordinates
        half = int(math.ceil(math.sqrt(S.n) / h))
        k = np.arange(-half, half + 1) * h
        rest = np.stack(np.meshgrid(*([k] * (S.span_rank - 1)), indexing="ij"), axis=-1)
        rest = rest.reshape(-1, S.span_rank - 1)
        for x in k:
            coords = np.column_stack([np.full(len(rest), x), rest])
            pts = coords @ Q.T
            yield pts[np.all(np.abs(pts) <= 1.0, axis=1)]
        return
    axis = _axis(spec.measure, h)
    if len(axis) ** S.n > MAX_GRID_POINTS:
        raise DomainError(f"grid of {len(axis)}^{S.n} points is too large; use a coarser resolution")
    if S.n == 1:
        yield axis[:, None]
        return
    rest = np.stack(np.meshgrid(*([axis] * (S.n - 1)), indexing="ij"), axis=-1).reshape(-1, S.n - 1)
    for x in axis:
        yield np.column_stack([np.full(len(rest), x), rest])


def sweep_states(S: ObservableSet, epsilon: float) -> np.ndarray:
    """Deterministic states added to random samples when certifying a region.

    For two observables: pure and concentric circles in the plane of ``a`` and
    ``b`` (boundary attainment has measure zero under random sampling).  For
    more: a ball lattice fine enough for ``epsilon``.
    """
    if S.n == 2:
        plane = (S.matrix[0], S.matrix[1])
        rings = [planar_states(plane, 20000)]
        rings += [planar_states(plane, 4000, rho) for rho in np.linspace(0.0, 1.0, 41)[1:-1]]
        return np.vstack(rings)
    # clamped lattice: every state is within spacing*sqrt(3)/2 of a lattice state,
    # so every attainable tuple is within 0.95 * epsilon of an attained one
    op_norm = np.linalg.norm(S.matrix, 2)
    spacing = min(0.05, 0.95 * epsilon / (op_norm * math.sqrt(3.0) / 2.0))
    return ball_lattice(spacing, clamp=True)


def _pareto_front(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points[:, 1], points[:, 0]))
    p = points[order]
    running = np.minimum.accumulate(p[:, 1])
    keep = np.ones(len(p), dtype=bool)
    keep[1:] = p[1:, 1] < running[:-1]
    return p[keep]


def _closure_gaps(grid_pts: np.ndarray, front: np.ndarray) -> np.ndarray:
    """Distance of each 2D point to the monotone closure of a Pareto front."""
    xs, ys = front[:, 0], front[:, 1]  # xs ascending, ys descending
    idx = np.searchsorted(xs, grid_pts[:, 0], side="right") - 1
    covered = (idx >= 0) & (ys[np.clip(idx, 0, None)] <= grid_pts[:, 1])
    gaps = np.zeros(len(grid_pts))
    todo = np.flatnonzero(~covered)
    for start in range(0, len(todo), 512):
        sel = todo[start:start + 512]
        dx = np.clip(xs[None, :] - grid_pts[sel, 0:1], 0.0, None)
        dy = np.clip(ys[None, :] - grid_pts[sel, 1:2], 0.0, None)
        gaps[sel] = np.sqrt(dx * dx + dy * dy).min(axis=1)
    return gaps


def certify_tightness(
    S: ObservableSet,
    relation_id: str,
    grid_resolution: float = 0.005,
    s: Optional[Sampler] = None,
    epsilon: Optional[float] = None,
    radius: float = 1.0,
    sweeps: bool = True,
) -> TightnessReport:
    """Soundness and completeness of a relation against brute-force sampling."""
    spec = get_relation(relation_id)
    if spec.n is not None and S.n != spec.n:
        raise UnsupportedSetSize(f"{spec.relation_id} needs {spec.n} observables, got {S.n}")
    if not 0.0 < grid_resolution <= 0.1:
        raise DomainError(f"grid_resolution must lie in (0, 0.1], got {grid_resolution}")
    epsilon = 2.0 * grid_resolution if epsilon is None else epsilon
    if epsilon < grid_resolution:
        raise DomainError(f"epsilon {epsilon} is below the grid resolution {grid_resolution}")
    s = s or Sampler(seed=0, mode=SamplerMode.PURE_UNIFORM, count=100_000)

    states = sample_states(s)
    if sweeps:
        states = np.vstack([states, sweep_states(S, epsilon)])
    states = radius * states
    attained = measure_from_expectation(S.expectations(states), spec.measure)

    slack = spec.slack(attained, S, radius)
    violations = int(np.count_nonzero(slack < -SOUNDNESS_TOL))
    worst_slack = float(np.min(slack))

    Q = _slice_basis(S, spec)
    if spec.closure:
        front = _pareto_front(attained)
    else:
        tree = cKDTree(attained @ Q if Q is not None else attained)
    gap, worst, n_members = 0.0, [], 0
    for chunk in _grid_chunks(S, spec, grid_resolution):
        members = chunk[spec.slack(chunk, S, radius) >= -rel.TOL]
        if len(members) == 0:
            continue
        n_members += len(members)
        if spec.closure:
            gaps = _closure_gaps(members, front)
        else:
            gaps, _ = tree.query(members @ Q if Q is not None else members, k=1)
        i = int(np.argmax(gaps))
        if gaps[i] > gap or not worst:
            gap, worst = float(gaps[i]), members[i].tolist()

    params = {"observables": S.matrix.tolist(), "measure": spec.measure.value, "radius": radius}
    if S.n == 2:
        params["ab"] = _pair_ab(S)
    return TightnessReport(
        relation_id=spec.relation_id,
        params=params,
        soundness_violations=violations,
        worst_slack=worst_slack,
        completeness_gap=gap,
        epsilon=float(epsilon),
        grid_resolution=float(grid_resolution),
        samples_used=int(len(states)),
        grid_members=n_members,
        sampler=s.describe(),
        claimed_tight=bool(spec.claimed_tight(S)),
        worst_gap_point=worst,
    )


def soundness_sweep(S: ObservableSet, relation_id: str, s: Sampler, radius: float = 1.0) -> tuple[int, float]:
    """Violation count and worst slack over sampled states only."""
    spec = get_relation(relation_id)
    attained = measure_from_expectation(S.expectations(radius * sample_states(s)), spec.measure)
    slack = spec.slack(attained, S, radius)
    return int(np.count_nonzero(slack < -SOUNDNESS_TOL)), float(np.min(slack))


# -- extremal scans ---------------------------------------------------------

class Objective(str, enum.Enum):
    MIN_SUM = "min_sum"
    MIN_SECOND_GIVEN_FIRST = "min_second_given_first"


@dataclass
class ScanResult:
    objective: Objective
    x: np.ndarray
    y: np.ndarray
    value: Optional[float] = None
    argmin: Optional[tuple] = None


def extremal_scan(S: ObservableSet, measure, objective, resolution: float = 1e-3) -> ScanResult:
    """Minimum sum, or lower envelope, over pure states in the plane of the pair."""
    if S.n != 2:
        raise UnsupportedSetSize(f"extremal_scan needs exactly two observables, got {S.n}")
    if not 0.0 < resolution <= 0.01:
        raise DomainError(f"resolution must lie in (0, 0.01], got {resolution}")
    objective = Objective(objective)
    count = max(int(math.ceil(2.0 * math.pi / resolution)) * 8, 10_000)
    pts = measure_from_expectation(S.expectations(planar_states((S.matrix[0], S.matrix[1]), count)), measure)
    if objective is Objective.MIN_SUM:
        sums = pts.sum(axis=1)
        i = int(np.argmin(sums))
        return ScanResult(objective, pts[:, 0], pts[:, 1], float(sums[i]), tuple(pts[i]))
    bins = np.floor(pts[:, 0] / resolution + 0.5).astype(np.int64)
    order = np.lexsort((pts[:, 1], bins))
    b_sorted = bins[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = b_sorted[1:] != b_sorted[:-1]
    chosen = order[first]
    return ScanResult(objective, bins[chosen] * resolution, pts[chosen, 1])
