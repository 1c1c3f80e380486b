"""Hyperplane arrangements, chambers, walls and fixed-point counts."""

import itertools
import random
from fractions import Fraction

import pytest

from wallcross.fan import (
    NonGenericPointError,
    build_fan,
    chamber_of,
    fixed_point_count,
    phase_count,
    phase_signature,
    walls,
    weight_hyperplanes,
)
from wallcross.gitproblem import GitProblem, new_problem
from wallcross.linalg import dot, primitive, rank

FLAGSHIP = [(1, 0), (1, 0), (-1, 1), (0, 1), (0, 1), (0, -1)]
LOCAL_P1XP1 = [(1, 0), (1, 0), (0, 1), (0, 1), (-2, -2)]
RANK3 = [(1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 1, 0),
         (0, 0, 1), (0, 0, 1), (-2, -2, -2)]


def rand_problem(rng: random.Random, r: int = 2, max_n: int = 6):
    while True:
        n = rng.randint(r, max_n)
        w = [tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(n)]
        if rank(tuple(w)) == r:
            return new_problem(w)


def test_flagship_arrangement_frozen():
    p = new_problem(FLAGSHIP)
    hps = weight_hyperplanes(p)
    assert [h.normal for h in hps] == [(0, 1), (1, 0), (1, 1)]
    fan = build_fan(p)
    table = [(c.id, c.signs, c.interior, c.nonempty, c.minimal)
             for c in fan.chambers]
    assert table == [
        (0, (-1, -1, -1), (-1, -1), True, True),
        (1, (-1, 1, -1), (1, -2), True, False),
        (2, (-1, 1, 1), (2, -1), True, False),
        (3, (1, -1, -1), (-2, 1), True, False),
        (4, (1, -1, 1), (-1, 2), True, False),
        (5, (1, 1, 1), (1, 1), True, False),
    ]
    assert [c.id for c in fan.minimal_chambers] == [0]
    assert fan.chamber_by_signs((1, 1, 1)).id == 5


def test_flagship_walls_frozen():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    got = [(w.hyperplane_index, w.lam, w.kappa, w.plus, w.minus, w.interior)
           for w in walls(fan)]
    assert got == [
        (0, (0, 1), 2, 3, 0, (-1, 0)),
        (0, (0, 1), 2, 5, 2, (1, 0)),
        (1, (1, 0), 1, 1, 0, (0, -1)),
        (1, (1, 0), 1, 5, 4, (0, 1)),
        (2, (1, 1), 3, 2, 1, (1, -1)),
        (2, (1, 1), 3, 4, 3, (-1, 1)),
    ]
    for w in walls(fan):
        assert dot(w.lam, fan.chambers[w.plus].interior) > 0
        assert dot(w.lam, fan.chambers[w.minus].interior) < 0
        assert dot(w.lam, w.interior) == 0
        assert w.kappa == dot(w.lam, p.det_v)
        assert w.kappa >= 0


def test_chamber_count_rank_two():
    """A central line arrangement in the plane with m distinct lines has
    exactly 2m chambers."""
    rng = random.Random(271)
    for trial in range(40):
        p = rand_problem(rng)
        hps = weight_hyperplanes(p)
        fan = build_fan(p)
        assert len(fan.chambers) == 2 * len(hps)


def test_chamber_enumeration_is_complete():
    """Sign vectors of random generic integer points all appear among the
    enumerated chambers, and every enumerated chamber carries a verified
    interior witness."""
    rng = random.Random(272)
    for trial in range(25):
        p = rand_problem(rng, max_n=5)
        hps = weight_hyperplanes(p)
        fan = build_fan(p)
        known = {c.signs for c in fan.chambers}
        for c in fan.chambers:
            for h, s in zip(hps, c.signs):
                v = dot(h.normal, c.interior)
                assert (v > 0) == (s > 0) and v != 0
        hits = 0
        for _ in range(60):
            pt = tuple(rng.randint(-9, 9) for _ in range(p.rank))
            vals = [dot(h.normal, pt) for h in hps]
            if any(v == 0 for v in vals):
                continue
            hits += 1
            signs = tuple(1 if v > 0 else -1 for v in vals)
            assert signs in known
            assert chamber_of(fan, pt).signs == signs
        assert hits > 10


def test_nonempty_agrees_with_phase_signature():
    """A chamber meets the weight cone exactly when some subset of the
    weights positively spans its interior point."""
    rng = random.Random(273)
    for trial in range(25):
        p = rand_problem(rng, max_n=5)
        fan = build_fan(p)
        for c in fan.chambers:
            assert c.nonempty == bool(phase_signature(p, c.interior))


def test_rank_three_chamber_count():
    """The pairwise spans of these seven weights cut out the arrangement
    of the three coordinate hyperplanes and the three difference
    hyperplanes, so a generic point is classified by a linear order on
    the four values (x, y, z, 0) and there are exactly 4! chambers."""
    p = new_problem(RANK3)
    fan = build_fan(p)
    assert len(weight_hyperplanes(p)) == 6
    assert len(fan.chambers) == 24
    sample_hits = set()
    rng = random.Random(7)
    for _ in range(4000):
        pt = tuple(rng.randint(-8, 8) for _ in range(3))
        try:
            sample_hits.add(chamber_of(fan, pt).id)
        except NonGenericPointError:
            continue
    assert sample_hits == set(range(24))


def test_local_surface_fan():
    p = new_problem(LOCAL_P1XP1)
    assert p.is_calabi_yau
    fan = build_fan(p)
    assert [h.normal for h in weight_hyperplanes(p)] == [(0, 1), (1, -1), (1, 0)]
    assert len(fan.chambers) == 6
    assert all(c.minimal for c in fan.chambers)
    assert all(c.nonempty for c in fan.chambers)
    assert all(w.kappa == 0 for w in walls(fan))
    for c in fan.chambers:
        assert fixed_point_count(p, c.interior) == 4


def test_projective_space_fans():
    for n in range(1, 6):
        p = new_problem([(1,)] * (n + 1))
        fan = build_fan(p)
        assert len(fan.chambers) == 2
        pos = chamber_of(fan, (1,))
        neg = chamber_of(fan, (-1,))
        assert pos.nonempty and not pos.minimal
        assert not neg.nonempty and neg.minimal
        assert fixed_point_count(p, (1,)) == n + 1
        assert fixed_point_count(p, (-1,)) == 0
        w, = walls(fan)
        assert w.kappa == n + 1 and w.plus == pos.id and w.minus == neg.id
        assert w.interior == (0,)


def test_rank_zero_fan():
    p = GitProblem(weights=((), ()), rank=0)
    fan = build_fan(p)
    c, = fan.chambers
    assert c.signs == () and c.minimal and c.nonempty
    assert walls(fan) == ()
    assert fixed_point_count(p, ()) == 1


def test_chamber_of_rejects_walls():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    with pytest.raises(NonGenericPointError):
        chamber_of(fan, (0, 1))
    with pytest.raises(NonGenericPointError):
        chamber_of(fan, (1, -1))
    c = chamber_of(fan, (Fraction(1, 3), Fraction(1, 2)))
    assert c.id == 5


def test_fixed_point_count_as_triangulation_volume():
    """Independent oracle: the count equals the sum of |det| over weight
    bases whose open simplicial cone contains the point, re-derived here
    from scratch with rational Cramer solves."""
    from wallcross.linalg import det, solve_rational

    rng = random.Random(274)
    for trial in range(25):
        p = rand_problem(rng, max_n=5)
        fan = build_fan(p)
        for c in fan.chambers:
            total = 0
            bases = set()
            for sub in itertools.combinations(range(p.n), p.rank):
                m = tuple(p.weights[i] for i in sub)
                if det(m) == 0:
                    continue
                coords = solve_rational(m, c.interior)
                if coords is not None and all(x > 0 for x in coords):
                    total += abs(det(m))
                    bases.add(sub)
            assert fixed_point_count(p, c.interior) == total
            assert phase_signature(p, c.interior) == frozenset(bases)


def test_phase_merging():
    p = new_problem(FLAGSHIP)
    fan = build_fan(p)
    assert phase_count(fan) == 4
    sig = {c.id: phase_signature(p, c.interior) for c in fan.chambers}
    assert sig[0] == sig[3]
    assert sig[1] == sig[2]
    assert len({sig[0], sig[1], sig[4], sig[5]}) == 4
    assert sig[0] == frozenset({(2, 5)})
    assert sig[1] == frozenset({(0, 5), (1, 5)})


def test_wall_interiors_are_generic_on_their_hyperplane():
    rng = random.Random(275)
    for trial in range(25):
        p = rand_problem(rng, max_n=5)
        fan = build_fan(p)
        hps = weight_hyperplanes(p)
        for w in walls(fan):
            for j, h in enumerate(hps):
                v = dot(h.normal, w.interior)
                if j == w.hyperplane_index:
                    assert v == 0
                else:
                    assert v != 0
            assert primitive(w.interior) == w.interior
