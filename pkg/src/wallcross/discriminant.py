"""Discriminant loci of anticanonically trivial problems.

The discriminant of a rank-k problem admits a rational parametrisation:
the point attached to a covector lam has k-th coordinate
prod_i (q_i . lam) ** Q[i][k], an exact rational number whenever no weight
pairs to zero with lam.  Triviality of the anticanonical character makes
the value invariant under rescaling lam.

Each minimal face of the ray polytope carries a component of the
discriminant; at a wall of the secondary fan, the local intersection
multiplicity of that component is computed in closed form from the face's
relation lattice (supported in ranks one and two), and compared against
the count of wall-quotient factors the wall contributes on the same
subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fan import SecondaryFan, Wall, build_fan, chamber_of, walls
from .gitproblem import (
    GitProblem,
    MinimalFace,
    ProblemError,
    SubspaceKey,
    coulomb_problem,
    higgs_problem,
    minimal_faces,
    push_forward_key,
    rays,
)
from .linalg import primitive, solve_rational, xgcd
from .sod import decompose


class UnsupportedRankError(NotImplementedError):
    """Intersection multiplicities are implemented for faces whose
    relation lattice has rank one or two."""


def horn_eval(p: GitProblem, lam) -> tuple[Fraction, ...]:
    """The discriminant parametrisation at the covector ``lam``.

    Requires an anticanonically trivial problem (otherwise the value is
    not scale-invariant) and a covector pairing nonzero with every weight;
    the error names the first offending weight.
    """
    if not p.is_calabi_yau:
        raise ProblemError("the parametrisation needs a trivial anticanonical character")
    if len(lam) != p.rank:
        raise ValueError("covector length differs from problem rank")
    forms = []
    for i, w in enumerate(p.weights):
        f = sum(Fraction(x) * y for x, y in zip(lam, w))
        if f == 0:
            raise ValueError(f"weight {i} pairs to zero with the covector")
        forms.append(f)
    out = []
    for k in range(p.rank):
        val = Fraction(1)
        for i, w in enumerate(p.weights):
            val *= forms[i] ** w[k]
        out.append(val)
    return tuple(out)


def rank1_point(p: GitProblem) -> Fraction:
    """For a rank-one problem the discriminant is the single point
    prod_i q_i ** q_i."""
    if p.rank != 1:
        raise ProblemError("rank1_point needs a rank-one problem")
    if not p.is_calabi_yau:
        raise ProblemError("the discriminant point needs a trivial anticanonical character")
    val = Fraction(1)
    for i, w in enumerate(p.weights):
        if w[0] == 0:
            raise ProblemError(f"weight {i} is zero")
        val *= Fraction(w[0]) ** w[0]
    return val


def _lift_relation(p: GitProblem, members: tuple[int, ...], rel: tuple[int, ...]
                   ) -> tuple[Fraction, ...]:
    """The covector pairing to ``rel[t]`` with weight ``members[t]`` and to
    zero with every other weight."""
    padded = [0] * p.n
    for t, i in enumerate(members):
        padded[i] = rel[t]
    lam = solve_rational(p.weight_matrix(), tuple(padded))
    if lam is None:
        raise AssertionError("a saturated relation always lifts through the weights")
    return lam


def _multiple_of(vec, direction) -> int | None:
    """The integer t with ``vec == t * direction``, or None if ``vec`` is
    not an integer multiple of the (primitive) direction."""
    j = next((i for i, x in enumerate(direction) if x != 0), None)
    if j is None:
        return None
    t, rem = divmod(vec[j], direction[j])
    if rem != 0:
        return None
    if any(x != t * d for x, d in zip(vec, direction)):
        return None
    return t


def intersection_multiplicity(p: GitProblem, wall: Wall, face: MinimalFace,
                              fan: SecondaryFan | None = None) -> int:
    """Local intersection multiplicity of the discriminant component of
    ``face`` with the wall, in closed form.

    Zero when the face's subspace is not contained in the wall's
    hyperplane.  For a rank-one relation lattice the component meets every
    such wall once.  Rank two splits in two:

    * the whole-polytope component (the face's subspace is zero) is
      parametrised in the character lattice itself, so each weight lying
      on the wall's ray contributes its integer multiple of the primitive
      wall direction, and the multiplicity is the clamped sum.  The
      relation lattice is the wrong home for this count: it is saturated,
      so when the weights span a finite-index sublattice it would undercount
      by exactly that index.
    * a proper face's component lives in the face's own relation lattice;
      the wall's interior parameter is pushed there through rational lifts,
      a unimodular change of coordinates sends its direction to the first
      axis, and the multiplicity is the clamped sum of the first
      coordinates of the relation weights fixed by that direction.
    """
    if not p.is_calabi_yau:
        raise ProblemError("intersection multiplicities need a trivial anticanonical character")
    fan = build_fan(p) if fan is None else fan
    span = fan.hyperplanes[wall.hyperplane_index].key
    if not span.contains_subspace(face.subspace):
        return 0
    if face.coulomb_rank == 1:
        return 1
    if face.coulomb_rank != 2:
        raise UnsupportedRankError(
            f"face relation lattice has unsupported rank {face.coulomb_rank}")
    if face.subspace.subrank == 0:
        m = 0
        for q in p.weights:
            t = _multiple_of(q, wall.interior)
            if t is not None:
                m += t
        return max(m, 0)
    cp = coulomb_problem(p, face.indices)
    members = cp.origin_indices
    rels = tuple(
        tuple(w[j] for w in cp.problem.weights) for j in range(2)
    )
    lifts = [_lift_relation(p, members, rel) for rel in rels]
    proj = tuple(sum(Fraction(x) * y for x, y in zip(wall.interior, lam)) for lam in lifts)
    if all(c == 0 for c in proj):
        raise AssertionError("a wall parameter never projects to zero on a face")
    g = primitive(proj)
    _, x, y = xgcd(g[0], g[1])
    m = 0
    for w in cp.problem.weights:
        fixed = -g[1] * w[0] + g[0] * w[1]
        if fixed == 0:
            m += x * w[0] + y * w[1]
    return max(m, 0)


def n_multiplicity(p: GitProblem, wall: Wall, face: MinimalFace,
                   fan: SecondaryFan | None = None) -> int:
    """Number of wall-quotient factors the wall contributes on the face's
    subspace: the multiplicity of that subspace in the decomposition of
    the wall's restricted problem, pushed forward."""
    fan = build_fan(p) if fan is None else fan
    span = fan.hyperplanes[wall.hyperplane_index].key
    if not span.contains_subspace(face.subspace):
        return 0
    sub = higgs_problem(p, span)
    sub_fan = build_fan(sub.problem)
    coords = span.coordinates_of(wall.interior)
    if coords is None:
        raise AssertionError("wall interior point must lie on its hyperplane")
    sub_ch = chamber_of(sub_fan, coords)
    if not sub_ch.nonempty:
        return 0
    sub_map = decompose(sub.problem, sub_ch)
    total = 0
    for k, mult in sub_map.items():
        if push_forward_key(k, span.basis, p.rank) == face.subspace:
            total += mult
    return total


@dataclass(frozen=True)
class ConjectureRow:
    """One wall/face comparison: closed-form intersection multiplicity
    ``m`` against factor count ``n``.  ``m`` is None when the face's
    relation rank is out of reach, with verdict SKIPPED."""

    wall: Wall
    face: MinimalFace
    m: int | None
    n: int
    verdict: str


def conjecture_check(p: GitProblem) -> tuple[ConjectureRow, ...]:
    """Compare m and n for every wall and every minimal face whose
    subspace lies inside the wall's hyperplane.

    Requires a trivial anticanonical character, pairwise distinct rays and
    no zero weights.  Verdicts: EQUAL, UNEQUAL, or SKIPPED (relation rank
    above two).
    """
    if not p.is_calabi_yau:
        raise ProblemError("the comparison needs a trivial anticanonical character")
    if p.has_zero_weights:
        raise ProblemError("the comparison needs nonzero weights")
    if not rays(p).distinct:
        raise ProblemError("the comparison needs pairwise distinct rays")
    fan = build_fan(p)
    faces = minimal_faces(p)
    rows = []
    for w in walls(fan):
        span = fan.hyperplanes[w.hyperplane_index].key
        for face in faces:
            if not span.contains_subspace(face.subspace):
                continue
            n = n_multiplicity(p, w, face, fan)
            try:
                m = intersection_multiplicity(p, w, face, fan)
            except UnsupportedRankError:
                rows.append(ConjectureRow(wall=w, face=face, m=None, n=n,
                                          verdict="SKIPPED"))
                continue
            rows.append(ConjectureRow(wall=w, face=face, m=m, n=n,
                                      verdict="EQUAL" if m == n else "UNEQUAL"))
    return tuple(rows)
