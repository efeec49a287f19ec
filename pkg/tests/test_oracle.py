import json

import numpy as np
import pytest

from qubit_uncertainty.errors import DomainError, UnknownRelation, UnsupportedSetSize
from qubit_uncertainty.oracle import (
    CHUNK,
    RELATIONS,
    Objective,
    Sampler,
    SamplerMode,
    attainable_region,
    ball_lattice,
    certify_tightness,
    extremal_scan,
    fibonacci_sphere,
    get_relation,
    merge_reports,
    planar_states,
    sample_states,
    soundness_sweep,
)
from qubit_uncertainty.pseudo import build_set

from conftest import pair_with_inner


def pair(ab):
    return build_set(list(pair_with_inner(ab)))


def test_sampler_is_replayable():
    s = Sampler(seed=3, count=1000)
    assert np.array_equal(sample_states(s), sample_states(s))
    assert not np.array_equal(sample_states(s), sample_states(Sampler(seed=4, count=1000)))


def test_chunks_are_independent():
    # a prefix of a longer run equals the shorter run
    short = sample_states(Sampler(seed=1, count=CHUNK))
    long = sample_states(Sampler(seed=1, count=CHUNK + 500))
    assert np.array_equal(long[:CHUNK], short)


def test_sampler_geometry():
    pure = sample_states(Sampler(seed=0, count=20000))
    assert np.allclose(np.linalg.norm(pure, axis=1), 1.0)
    assert np.abs(pure.mean(axis=0)).max() < 0.03
    ball = sample_states(Sampler(seed=0, count=20000, mode=SamplerMode.BALL_UNIFORM))
    norms = np.linalg.norm(ball, axis=1)
    assert norms.max() <= 1.0
    # uniform in the ball: P(|r| <= 1/2) = 1/8
    assert abs((norms <= 0.5).mean() - 0.125) < 0.01
    grid = sample_states(Sampler(count=8, mode="planar_grid", plane=([1, 0, 0], [0, 1, 0]), radius=0.5))
    assert np.allclose(np.linalg.norm(grid, axis=1), 0.5)
    assert np.allclose(grid[:, 2], 0.0)


def test_sampler_validation():
    with pytest.raises(DomainError):
        Sampler(count=0)
    assert Sampler(seed=5).describe()["seed"] == 5


def test_deterministic_point_sets():
    f = fibonacci_sphere(500)
    assert np.allclose(np.linalg.norm(f, axis=1), 1.0)
    lat = ball_lattice(0.2, clamp=True)
    assert np.linalg.norm(lat, axis=1).max() <= 1.0 + 1e-12
    # covering radius of the clamped lattice
    probe = sample_states(Sampler(seed=9, count=2000, mode="ball_uniform"))
    d = np.min(np.linalg.norm(probe[:, None, :] - lat[None, :, :], axis=2), axis=1)
    assert d.max() <= 0.2 * np.sqrt(3) / 2 + 1e-12
    p = planar_states(([1, 0, 0], [1, 1, 0]), 4)
    assert np.allclose(p[1], [0, 1, 0])


def test_attainable_region_shape():
    S = pair(0.5)
    pts = attainable_region(S, "stddev", Sampler(count=100))
    assert pts.shape == (100, 2)
    assert (pts >= 0).all() and (pts <= 1).all()


def test_registry():
    assert get_relation("stddev").relation_id == "stddev_pair"
    assert get_relation("ellipse").relation_id == "expectation_pair"
    with pytest.raises(UnknownRelation):
        get_relation("no_such_relation")
    assert not RELATIONS["busch_sum"].claimed_tight(pair(0.5))


def test_certify_small_tight_pair():
    S = pair(0.0)
    rep = certify_tightness(S, "expectation_pair", grid_resolution=0.02, s=Sampler(seed=1, count=20000))
    assert rep.sound and rep.passed, rep.to_dict()
    assert rep.verdict == "pass"


def test_certify_detects_non_tight():
    S = pair(0.5)
    rep = certify_tightness(S, "busch_sum", grid_resolution=0.02, s=Sampler(seed=1, count=20000))
    assert rep.sound
    assert rep.completeness_gap > 0.05
    assert not rep.passed and not rep.claimed_tight


def test_certify_detects_unsound(monkeypatch):
    # an ellipse shrunk by 0.1 is violated by states near its boundary
    from qubit_uncertainty.bloch import UncertaintyMeasure
    from qubit_uncertainty.oracle import RelationSpec
    from qubit_uncertainty.relations import expectation_pair_relation

    too_strong = RelationSpec(
        "too_strong", UncertaintyMeasure.EXPECTATION, 2,
        lambda v, S, R: expectation_pair_relation(v[:, 0], v[:, 1], 0.5, R).slack - 0.1, lambda S: True,
    )
    monkeypatch.setitem(RELATIONS, "too_strong", too_strong)
    S = pair(0.5)
    rep = certify_tightness(S, "too_strong", grid_resolution=0.05, s=Sampler(seed=1, count=2000))
    assert rep.soundness_violations > 0 and rep.worst_slack == pytest.approx(-0.1, abs=1e-9)
    assert not rep.passed
    assert soundness_sweep(S, "too_strong", Sampler(seed=2, count=5000))[0] > 0
    assert soundness_sweep(S, "expectation_pair", Sampler(seed=2, count=5000))[0] == 0


def test_certify_preconditions():
    S = pair(0.0)
    with pytest.raises(UnsupportedSetSize):
        certify_tightness(S, "triple")
    with pytest.raises(DomainError):
        certify_tightness(S, "expectation_pair", grid_resolution=0.5)
    with pytest.raises(DomainError):
        certify_tightness(S, "expectation_pair", grid_resolution=0.02, epsilon=0.01)


def test_report_schema():
    S = pair(0.0)
    rep = certify_tightness(S, "entropic_pair", grid_resolution=0.05, s=Sampler(seed=0, count=2000))
    d = json.loads(rep.to_json())
    assert list(d) == ["relation_id", "params", "soundness", "completeness", "sampler", "verdict"]
    assert list(d["soundness"]) == ["violations", "worst_slack"]
    assert list(d["completeness"]) == ["gap", "epsilon"]
    assert list(d["sampler"]) == ["seed", "mode", "count", "generator"]
    assert d["verdict"] in ("pass", "fail")
    merged = merge_reports(rep, rep)
    assert merged.soundness_violations == 2 * rep.soundness_violations
    assert merged.completeness_gap == rep.completeness_gap


def test_extremal_scan():
    r = extremal_scan(pair(0.0), "entropy", Objective.MIN_SUM)
    assert r.value == pytest.approx(1.0, abs=1e-6)
    r = extremal_scan(pair(0.5), "entropy", "min_sum")
    assert r.value > 0.415037 + 0.01
    env = extremal_scan(pair(0.5), "stddev", "min_second_given_first", resolution=0.01)
    # the lower envelope at dA = 0 is |a x b|
    assert env.y[0] == pytest.approx(np.sqrt(0.75), abs=0.02)
    with pytest.raises(UnsupportedSetSize):
        extremal_scan(build_set(np.eye(3)), "entropy", "min_sum")


def test_triple_and_n_observable_certify():
    S = build_set(np.eye(3))
    rep = certify_tightness(S, "triple", grid_resolution=0.05, s=Sampler(seed=0, count=20000))
    assert rep.passed, rep.to_dict()
    rep = certify_tightness(S, "n_observable", grid_resolution=0.05, s=Sampler(seed=0, count=20000))
    assert rep.passed, rep.to_dict()
