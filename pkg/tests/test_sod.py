"""Multiplicity maps, monotone paths and path-independence checks."""

import random

import pytest

from wallcross.fan import build_fan, chamber_of, fixed_point_count, walls
from wallcross.gitproblem import SubspaceKey, new_problem, relevant_subspaces
from wallcross.linalg import rank
from wallcross.sod import (
    BudgetExceeded,
    CrossingPath,
    EmptyChamberError,
    PathError,
    codim1_multiplicity,
    decompose,
    default_path,
    describe_factor,
    freeze_map,
    full_key,
    jh_check,
    minimal_nonempty_chamber,
    monotone_paths,
    validate_path,
)

FLAGSHIP = [(1, 0), (1, 0), (-1, 1), (0, 1), (0, 1), (0, -1)]
LOCAL_P1XP1 = [(1, 0), (1, 0), (0, 1), (0, 1), (-2, -2)]

ZERO2 = SubspaceKey.zero(2)
AXIS = SubspaceKey.from_rows(((0, 1),), 2)
FULL2 = SubspaceKey.full(2)


def rand_problem(rng: random.Random, r: int = 2, max_n: int = 6):
    while True:
        n = rng.randint(r, max_n)
        w = [tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(n)]
        if rank(tuple(w)) == r:
            return new_problem(w)


def test_flagship_maps_frozen():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    expected = {
        0: {FULL2: 1},
        1: {FULL2: 1, AXIS: 1},
        2: {FULL2: 1, AXIS: 1},
        3: {FULL2: 1},
        4: {FULL2: 1, ZERO2: 3},
        5: {FULL2: 1, AXIS: 1, ZERO2: 4},
    }
    for cid, want in expected.items():
        assert decompose(p, fan.chambers[cid]) == want


def test_flagship_paths():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    top = fan.chambers[5]
    paths = monotone_paths(p, top)
    assert sorted(pa.chamber_ids for pa in paths) == [(5, 2, 1, 0), (5, 4, 3, 0)]
    assert default_path(p, top).chamber_ids == (5, 2, 1, 0)
    by_left = decompose(p, top, path=CrossingPath(chamber_ids=(5, 2, 1, 0)))
    by_right = decompose(p, top, path=CrossingPath(chamber_ids=(5, 4, 3, 0)))
    assert by_left == by_right == decompose(p, top)


def test_flagship_path_independence():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    for c in fan.chambers:
        report = jh_check(p, c)
        assert report.status == "PASS"
        assert report.common == decompose(p, c)
        assert report.maps == (freeze_map(decompose(p, c)),)
    assert jh_check(p, fan.chambers[5]).path_count == 2


def test_flagship_codim1_closed_form():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    for c, want in zip(fan.chambers, [0, 1, 1, 0, 0, 1]):
        assert codim1_multiplicity(p, c, AXIS) == want
        assert decompose(p, c).get(AXIS, 0) == want
    with pytest.raises(ValueError):
        codim1_multiplicity(p, fan.chambers[0], ZERO2)


def test_flagship_fixed_point_additivity():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    fps = [fixed_point_count(p, c.interior) for c in fan.chambers]
    assert fps == [1, 2, 2, 1, 4, 6]
    for c in fan.chambers:
        total = sum(mult * describe_factor(p, key).fixed_points
                    for key, mult in decompose(p, c).items())
        assert total == fixed_point_count(p, c.interior)


def test_flagship_factors():
    p = new_problem(FLAGSHIP)
    info = describe_factor(p, AXIS)
    assert info.weights == ((1,), (1,), (-1,))
    assert info.minimal_chamber is not None
    assert info.fixed_points == 1
    assert describe_factor(p, FULL2).fixed_points == 1
    assert describe_factor(p, ZERO2).fixed_points == 1
    assert minimal_nonempty_chamber(p).id == 0


def test_path_validation_errors():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    top = fan.chambers[5]

    def bad(ids):
        with pytest.raises(PathError):
            validate_path(p, top, CrossingPath(chamber_ids=ids))

    bad((4, 3, 0))
    bad((5, 0))
    bad((5, 4))
    bad((5, 4, 5, 4, 3, 0))
    bad((5, 2, 1, 0, 3))
    with pytest.raises(PathError):
        validate_path(p, fan.chambers[0],
                      CrossingPath(chamber_ids=(0, 3)))
    lp = new_problem(LOCAL_P1XP1)
    lfan = build_fan(lp)
    w = walls(lfan)[0]
    with pytest.raises(PathError):
        validate_path(lp, lfan.chambers[w.plus],
                      CrossingPath(chamber_ids=(w.plus, w.minus)))


def test_empty_chamber_rejected():
    p = new_problem([(1,), (1,), (1,)])
    fan = build_fan(p)
    neg = chamber_of(fan, (-1,))
    assert not neg.nonempty
    with pytest.raises(EmptyChamberError):
        decompose(p, neg)
    with pytest.raises(EmptyChamberError):
        jh_check(p, neg)


def test_projective_space_ladder():
    for n in range(1, 6):
        p = new_problem([(1,)] * (n + 1))
        fan = build_fan(p)
        pos = chamber_of(fan, (1,))
        assert decompose(p, pos) == {SubspaceKey.zero(1): n + 1}
        assert default_path(p, pos).chamber_ids == (pos.id, 1 - pos.id)
        assert jh_check(p, pos).status == "PASS"


def test_trivial_anticanonical_shortcut():
    p = new_problem(LOCAL_P1XP1)
    fan = build_fan(p)
    for c in fan.chambers:
        assert decompose(p, c) == {FULL2: 1}
        report = jh_check(p, c)
        assert report.status == "PASS" and report.common == {FULL2: 1}


def test_salient_cones():
    quadrant = new_problem([(1, 0), (0, 1)])
    fan = build_fan(quadrant)
    inside = chamber_of(fan, (1, 1))
    assert decompose(quadrant, inside) == {ZERO2: 1}
    assert jh_check(quadrant, inside).status == "PASS"
    assert minimal_nonempty_chamber(quadrant) is None

    salient = new_problem([(1, 0), (0, 1), (1, 1)])
    sfan = build_fan(salient)
    sin = chamber_of(sfan, (2, 1))
    assert decompose(salient, sin) == {ZERO2: 2}
    assert jh_check(salient, sin).status == "PASS"
    assert minimal_nonempty_chamber(salient) is None


def test_rank_one_closed_form():
    """For a one-parameter group the map is computable by hand: crossing
    the single wall contributes the anticanonical pairing at the origin,
    and the far chamber adds a full factor exactly when it is nonempty."""
    rng = random.Random(91)
    zero1 = SubspaceKey.zero(1)
    full1 = SubspaceKey.full(1)
    for trial in range(60):
        n = rng.randint(2, 6)
        w = [(rng.randint(-4, 4),) for _ in range(n)]
        if all(x == 0 for (x,) in w):
            continue
        p = new_problem(w)
        fan = build_fan(p)
        dv = p.det_v[0]
        if dv == 0:
            for c in fan.chambers:
                if c.nonempty:
                    assert decompose(p, c) == {full1: 1}
            continue
        start = chamber_of(fan, (1,) if dv > 0 else (-1,))
        if not start.nonempty:
            continue
        want = {zero1: abs(dv)}
        far_negative = any(x < 0 for (x,) in w) if dv > 0 else any(x > 0 for (x,) in w)
        if far_negative:
            want[full1] = 1
        assert decompose(p, start) == want
        assert jh_check(p, start).status == "PASS"


def test_budget_limits():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    top = fan.chambers[5]
    assert jh_check(p, top, budget=1).status == "INCONCLUSIVE"
    with pytest.raises(BudgetExceeded):
        monotone_paths(p, top, limit=1)
    assert len(monotone_paths(p, top, limit=2)) == 2


def test_fixed_point_additivity_random():
    """Conservation oracle on random instances: the fixed-point count of
    every nonempty chamber is the multiplicity-weighted sum of the
    fixed-point counts of its factors."""
    rng = random.Random(92)
    for trial in range(40):
        p = rand_problem(rng)
        fan = build_fan(p)
        for c in fan.chambers:
            if not c.nonempty:
                continue
            total = sum(mult * describe_factor(p, key).fixed_points
                        for key, mult in decompose(p, c).items())
            assert total == fixed_point_count(p, c.interior)


def test_maps_supported_on_relevant_subspaces():
    """Every subspace carrying a factor is one of the problem's relevant
    subspaces, and codimension-one multiplicities match the closed form."""
    rng = random.Random(93)
    for trial in range(40):
        p = rand_problem(rng)
        fan = build_fan(p)
        rel = set(relevant_subspaces(p))
        for c in fan.chambers:
            if not c.nonempty:
                continue
            m = decompose(p, c)
            assert all(key in rel for key in m)
            for key in rel:
                if key.subrank == p.rank - 1:
                    assert m.get(key, 0) == codim1_multiplicity(p, c, key)


def test_default_path_is_monotone_and_terminal():
    rng = random.Random(94)
    for trial in range(30):
        p = rand_problem(rng, max_n=5)
        fan = build_fan(p)
        for c in fan.chambers:
            path = default_path(p, c)
            validate_path(p, c, path)
            assert path.chamber_ids[0] == c.id
