"""The secondary fan of a toric GIT problem.

The stability space Q^rank is cut by the central hyperplanes spanned by
weight subsets of rank (rank - 1); the open chambers of that arrangement
are the GIT chambers.  Chambers are enumerated exactly by a flip search:
two strictly feasible sign vectors differing in one coordinate are
adjacent across that hyperplane, and every chamber is reachable this way
because a generic segment between interior points crosses one hyperplane
at a time.

The all-plus sign vector is always feasible (canonical normals are
lexicographically positive, and a positive combination of lex-positive
vectors is never zero), which gives the search a deterministic seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .gitproblem import GitProblem, SubspaceKey
from .linalg import (
    GE,
    GT,
    LinearSystem,
    det,
    dot,
    kernel_basis,
    primitive,
    strict_feasible,
)


class NonGenericPointError(ValueError):
    """A stability parameter lying on an arrangement hyperplane."""


@dataclass(frozen=True)
class Hyperplane:
    """An arrangement hyperplane: ``key`` is its span as a subspace and
    ``normal`` the primitive defining covector, sign-normalised so the
    first nonzero entry is positive."""

    normal: tuple[int, ...]
    key: SubspaceKey


def _canonical_normal(v: tuple[int, ...]) -> tuple[int, ...]:
    w = primitive(v)
    for x in w:
        if x > 0:
            return w
        if x < 0:
            return tuple(-y for y in w)
    raise ValueError("zero normal")


@lru_cache(maxsize=None)
def weight_hyperplanes(p: GitProblem) -> tuple[Hyperplane, ...]:
    """Hyperplanes spanned by weight subsets of rank (rank - 1), sorted by
    normal.  In rank 1 the empty subset spans the origin, giving the
    single hyperplane {0} with normal (1,)."""
    r = p.rank
    found: dict[tuple[int, ...], SubspaceKey] = {}
    if r >= 1:
        for sub in itertools.combinations(range(p.n), r - 1):
            rows = tuple(p.weights[i] for i in sub)
            kern = kernel_basis(rows, r)
            if len(kern) != 1:
                continue  # subset of rank below (rank - 1)
            normal = _canonical_normal(kern[0])
            key = SubspaceKey.from_rows(rows, r)
            prev = found.setdefault(normal, key)
            if prev != key:
                raise AssertionError("one normal, two subspaces")
    return tuple(Hyperplane(normal=nm, key=found[nm]) for nm in sorted(found))


@dataclass(frozen=True)
class Chamber:
    """An open chamber of the arrangement.

    ``signs[j]`` is the strict sign (+1 or -1) of ``normal_j . theta`` on
    the chamber and ``interior`` an integer witness.  ``nonempty`` records
    whether the witness lies in the cone spanned by the weights (the
    semistable locus is nonempty exactly then), and ``minimal`` whether
    the negated anticanonical character satisfies every sign condition
    non-strictly.
    """

    id: int
    signs: tuple[int, ...]
    interior: tuple[int, ...]
    nonempty: bool
    minimal: bool


class SecondaryFan:
    def __init__(self, problem: GitProblem, hyperplanes: tuple[Hyperplane, ...],
                 chambers: tuple[Chamber, ...]):
        self.problem = problem
        self.hyperplanes = hyperplanes
        self.chambers = chambers
        self._by_signs = {c.signs: c for c in chambers}

    def chamber_by_signs(self, signs: tuple[int, ...]) -> Chamber | None:
        return self._by_signs.get(signs)

    @property
    def minimal_chambers(self) -> tuple[Chamber, ...]:
        return tuple(c for c in self.chambers if c.minimal)


def _sign_system(hyperplanes, signs) -> LinearSystem:
    r = len(hyperplanes[0].normal) if hyperplanes else 0
    return LinearSystem(
        dim=r,
        gt=tuple(tuple(s * x for x in h.normal) for h, s in zip(hyperplanes, signs)),
    )


def _in_weight_cone(p: GitProblem, point) -> bool:
    """Exact membership of ``point`` in the cone spanned by the weights,
    via a homogenised feasibility problem (variables: one coefficient per
    weight plus a positive scale on the point)."""
    n, r = p.n, p.rank
    eq = tuple(
        tuple(p.weights[i][k] for i in range(n)) + (-point[k],)
        for k in range(r)
    )
    sys = LinearSystem(
        dim=n + 1,
        eq=eq,
        ge=tuple(tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(n)),
        gt=(tuple(0 for _ in range(n)) + (1,),),
    )
    return strict_feasible(sys) is not None


def _is_minimal_signs(p: GitProblem, hyperplanes, signs) -> bool:
    neg_det = tuple(-x for x in p.det_v)
    return all(s * dot(h.normal, neg_det) >= 0 for h, s in zip(hyperplanes, signs))


@lru_cache(maxsize=None)
def build_fan(p: GitProblem) -> SecondaryFan:
    """Enumerate all chambers by flip search from the all-plus chamber."""
    hyperplanes = weight_hyperplanes(p)
    m = len(hyperplanes)
    if m == 0:
        interior = tuple(0 for _ in range(p.rank))
        ch = Chamber(id=0, signs=(), interior=interior,
                     nonempty=_in_weight_cone(p, interior),
                     minimal=True)
        return SecondaryFan(p, hyperplanes, (ch,))

    seed = tuple(1 for _ in range(m))
    witness = strict_feasible(_sign_system(hyperplanes, seed))
    if witness is None:
        raise AssertionError("the all-plus chamber must be feasible")
    found: dict[tuple[int, ...], tuple[int, ...]] = {seed: witness}
    queue = [seed]
    while queue:
        signs = queue.pop(0)
        for j in range(m):
            flipped = signs[:j] + (-signs[j],) + signs[j + 1:]
            if flipped in found:
                continue
            w = strict_feasible(_sign_system(hyperplanes, flipped))
            if w is not None:
                found[flipped] = w
                queue.append(flipped)
    chambers = []
    for cid, signs in enumerate(sorted(found)):
        interior = found[signs]
        chambers.append(Chamber(
            id=cid,
            signs=signs,
            interior=interior,
            nonempty=_in_weight_cone(p, interior),
            minimal=_is_minimal_signs(p, hyperplanes, signs),
        ))
    return SecondaryFan(p, hyperplanes, tuple(chambers))


def chamber_of(fan: SecondaryFan, point) -> Chamber:
    """The chamber containing ``point`` (integer or Fraction coordinates).
    Raises :class:`NonGenericPointError` on a point lying on a hyperplane."""
    signs = []
    for h in fan.hyperplanes:
        s = sum(a * x for a, x in zip(h.normal, point))
        if s == 0:
            raise NonGenericPointError(
                f"point lies on the hyperplane with normal {h.normal}")
        signs.append(1 if s > 0 else -1)
    ch = fan.chamber_by_signs(tuple(signs))
    if ch is None:
        raise AssertionError("every generic point lies in an enumerated chamber")
    return ch


@dataclass(frozen=True)
class Wall:
    """An adjacency of two chambers across one hyperplane.

    ``lam`` is the hyperplane normal oriented so that ``kappa``, its
    pairing with the anticanonical character, is non-negative; ``plus``
    and ``minus`` are the chamber ids on the positive and negative side of
    ``lam``.  ``interior`` is an integer stability parameter interior to
    the wall: on the hyperplane and strictly signed on all others.
    """

    hyperplane_index: int
    lam: tuple[int, ...]
    kappa: int
    plus: int
    minus: int
    interior: tuple[int, ...]


def _wall_point(fan: SecondaryFan, j: int, x: tuple[int, ...], y: tuple[int, ...]):
    """Integer point on hyperplane j strictly between the chambers with
    interior points x and y.  The combination |n.x| y + |n.y| x kills the
    j-th pairing and preserves every strict sign the endpoints share."""
    nrm = fan.hyperplanes[j].normal
    a, b = abs(dot(nrm, x)), abs(dot(nrm, y))
    z = tuple(a * yi + b * xi for xi, yi in zip(x, y))
    if dot(nrm, z) != 0:
        raise AssertionError("wall point misses its hyperplane")
    for k, h in enumerate(fan.hyperplanes):
        if k == j:
            continue
        sx, sz = dot(h.normal, x), dot(h.normal, z)
        if sz == 0 or (sx > 0) != (sz > 0):
            raise AssertionError("wall point is not generic within the wall")
    return primitive(z)


@lru_cache(maxsize=None)
def walls(fan: SecondaryFan) -> tuple[Wall, ...]:
    """All walls of the fan, sorted by (hyperplane, plus id)."""
    p = fan.problem
    dv = p.det_v
    out = []
    for a, b in itertools.combinations(fan.chambers, 2):
        diff = [j for j in range(len(fan.hyperplanes)) if a.signs[j] != b.signs[j]]
        if len(diff) != 1:
            continue
        j = diff[0]
        lam = fan.hyperplanes[j].normal
        if dot(lam, dv) < 0:
            lam = tuple(-x for x in lam)
        kappa = dot(lam, dv)
        if dot(lam, a.interior) > 0:
            plus, minus = a, b
        else:
            plus, minus = b, a
        if dot(lam, plus.interior) <= 0 or dot(lam, minus.interior) >= 0:
            raise AssertionError("wall sides are not separated by lam")
        out.append(Wall(
            hyperplane_index=j,
            lam=lam,
            kappa=kappa,
            plus=plus.id,
            minus=minus.id,
            interior=_wall_point(fan, j, plus.interior, minus.interior),
        ))
    out.sort(key=lambda w: (w.hyperplane_index, w.plus, w.minus))
    return tuple(out)


def positive_bases(p: GitProblem, point) -> frozenset[tuple[int, ...]]:
    """Index sets B of size rank such that ``point`` is an all-positive
    combination of the weights in B (so B is a basis and the point lies
    interior to its simplicial cone)."""
    from .linalg import solve_rational

    out = []
    for sub in itertools.combinations(range(p.n), p.rank):
        rows = tuple(p.weights[i] for i in sub)
        if det(rows) == 0:
            continue
        coeffs = solve_rational(rows, tuple(Fraction(x) for x in point))
        if coeffs is not None and all(c > 0 for c in coeffs):
            out.append(sub)
    return frozenset(out)


def phase_signature(p: GitProblem, point) -> frozenset[tuple[int, ...]]:
    """The set of positive bases determines the semistable locus of the
    chamber around ``point``; chambers with equal signatures present the
    same quotient."""
    return positive_bases(p, point)


def phase_count(fan: SecondaryFan) -> int:
    """Number of distinct nonempty phases among the chambers."""
    sigs = {phase_signature(fan.problem, c.interior) for c in fan.chambers if c.nonempty}
    return len(sigs)


def fixed_point_count(p: GitProblem, point) -> int:
    """Torus fixed points of the quotient at a generic parameter: the sum
    of |det| over the positive bases.  A rank-0 problem is a point."""
    if p.rank == 0:
        return 1
    total = 0
    for sub in positive_bases(p, point):
        total += abs(det(tuple(p.weights[i] for i in sub)))
    return total
