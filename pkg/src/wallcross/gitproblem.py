"""Toric GIT problems given by an integer weight matrix.

A problem is a torus (C*)^r acting on C^n; we store the weights as n rows
in Z^r (row i is the character through which the torus scales the i-th
coordinate).  The standing assumption is that the weights span Q^r, so the
torus acts with finite generic stabiliser.  The dual lattice of rays is
recovered as the saturated kernel of the weight map.

Subspaces of the character space are always handled through
:class:`SubspaceKey`: a saturated HNF basis, so two keys are equal exactly
when they name the same rational subspace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .linalg import (
    LinearSystem,
    identity,
    kernel_basis,
    mat_mul,
    rank,
    saturate,
    solve_integer,
    solve_rational,
    strict_feasible,
    transpose,
)


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class GitProblem:
    """Weights of a torus action: ``weights[i]`` is the character of the
    i-th coordinate, a row in Z^rank."""

    weights: tuple[tuple[int, ...], ...]
    rank: int

    def __post_init__(self):
        for w in self.weights:
            if len(w) != self.rank:
                raise ProblemError("weight row width differs from rank")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def det_v(self) -> tuple[int, ...]:
        """Coordinatewise sum of the weights (the anticanonical character)."""
        return tuple(sum(w[k] for w in self.weights) for k in range(self.rank))

    @property
    def is_calabi_yau(self) -> bool:
        return all(x == 0 for x in self.det_v)

    @property
    def zero_weight_indices(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if all(x == 0 for x in w))

    @property
    def has_zero_weights(self) -> bool:
        return bool(self.zero_weight_indices)

    def weight_matrix(self) -> tuple[tuple[int, ...], ...]:
        """The weights as a rank x n matrix (characters in columns)."""
        return transpose(self.weights, self.rank) if self.n else ()


def new_problem(weights) -> GitProblem:
    """Validate a list of weight rows and build a problem.

    The rows must be non-empty, of equal width r, and span Q^r; problems
    violating the spanning assumption are rejected.  Zero rows are legal
    (they contribute a trivially-acted coordinate) but are flagged through
    :attr:`GitProblem.has_zero_weights`.
    """
    rows = tuple(tuple(int(x) for x in w) for w in weights)
    if not rows:
        raise ProblemError("a problem needs at least one weight")
    r = len(rows[0])
    if any(len(w) != r for w in rows):
        raise ProblemError("weight rows have mixed widths")
    if rank(rows) != r:
        raise ProblemError(f"weights span a rank-{rank(rows)} sublattice of Z^{r}; they must span")
    return GitProblem(weights=rows, rank=r)


@dataclass(frozen=True)
class RayData:
    """Rays of the ambient toric presentation.

    ``ray_matrix`` holds a_i in row i; it is the transpose of the saturated
    kernel basis of the weight map, so sum_i v_i a_i = 0 exactly for the
    integer relations v lying in the row lattice spanned by the weights'
    transpose kernel.  ``height`` is an integer covector u with u . a_i = 1
    for every i; it exists precisely in the Calabi-Yau case.
    """

    ray_matrix: tuple[tuple[int, ...], ...]
    height: tuple[int, ...] | None

    @property
    def dim(self) -> int:
        return len(self.ray_matrix[0]) if self.ray_matrix else 0

    @property
    def distinct(self) -> bool:
        return len(set(self.ray_matrix)) == len(self.ray_matrix)


@lru_cache(maxsize=None)
def rays(p: GitProblem) -> RayData:
    qmat = p.weight_matrix()  # r x n
    kern = kernel_basis(qmat, p.n)  # (n - r) x n, saturated, HNF
    ray_matrix = transpose(kern, p.n) if kern else tuple(() for _ in range(p.n))
    height = None
    if p.is_calabi_yau and p.n:
        sol = solve_rational(kern, tuple(1 for _ in range(p.n))) if kern else None
        if kern and sol is None:
            raise AssertionError("Calabi-Yau problem without a height covector")
        if sol is not None:
            if any(c.denominator != 1 for c in sol):
                raise AssertionError("height covector must be integral over a saturated kernel")
            height = tuple(int(c) for c in sol)
        else:
            height = ()  # n == rank: every ray is the empty vector
    return RayData(ray_matrix=ray_matrix, height=height)


@dataclass(frozen=True, order=True)
class SubspaceKey:
    """Canonical name of a rational subspace of the character space.

    The basis is the saturated HNF basis of (subspace intersect Z^ambient)
    with zero rows stripped; keys compare equal iff the basis matrices are
    identical.
    """

    ambient: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for b in self.basis:
            if len(b) != self.ambient:
                raise ValueError("basis width differs from ambient dimension")

    @staticmethod
    def from_rows(rows, ambient: int) -> "SubspaceKey":
        sat = saturate(tuple(tuple(r) for r in rows), ambient)
        return SubspaceKey(ambient=ambient, basis=sat)

    @staticmethod
    def zero(ambient: int) -> "SubspaceKey":
        return SubspaceKey(ambient=ambient, basis=())

    @staticmethod
    def full(ambient: int) -> "SubspaceKey":
        return SubspaceKey(ambient=ambient, basis=identity(ambient))

    @property
    def subrank(self) -> int:
        return len(self.basis)

    def coordinates_of(self, vector) -> tuple | None:
        """Coordinates of ``vector`` in the basis, or None when it lies
        outside the subspace.  Exact rationals."""
        if self.subrank == 0:
            return () if all(x == 0 for x in vector) else None
        return solve_rational(self.basis, tuple(vector))

    def contains_vector(self, vector) -> bool:
        return self.coordinates_of(vector) is not None

    def contains_subspace(self, other: "SubspaceKey") -> bool:
        return all(self.contains_vector(b) for b in other.basis)

    def label(self) -> str:
        if self.subrank == 0:
            return "0"
        if self.subrank == self.ambient:
            return "full"
        rows = ",".join("(" + ",".join(str(x) for x in b) + ")" for b in self.basis)
        return f"span[{rows}]"


@dataclass(frozen=True)
class SubProblem:
    """A GIT problem derived from a parent.

    For Higgs restrictions ``embedding`` holds the saturated basis of the
    target subspace (rows in parent coordinates), so that
    sub-weight @ embedding = parent weight.  Coulomb problems have no
    embedding into the parent character space; ``embedding`` is None and
    the weights live in the dual of the relation lattice instead.
    ``origin_indices`` records the surviving parent weight indices.
    """

    problem: GitProblem
    embedding: tuple[tuple[int, ...], ...] | None
    origin_indices: tuple[int, ...]


def relevant_subspaces(p: GitProblem) -> tuple[SubspaceKey, ...]:
    """All subspaces spanned by weights that carry a strictly positive
    vanishing relation.

    Candidates are the spans of weight subsets of size <= rank (larger
    subsets span nothing new).  A candidate H qualifies when the weights
    lying in H admit k_i > 0 with sum k_i q_i = 0; the zero weights lie in
    every subspace and never obstruct.  H = 0 always qualifies.  Sorted by
    (rank, basis).
    """
    n, r = p.n, p.rank
    candidates: dict[SubspaceKey, None] = {SubspaceKey.zero(r): None}
    for size in range(1, r + 1):
        for sub in itertools.combinations(range(n), size):
            rows = tuple(p.weights[i] for i in sub)
            key = SubspaceKey.from_rows(rows, r)
            candidates.setdefault(key, None)
    result = []
    for key in candidates:
        members = [i for i in range(n) if key.contains_vector(p.weights[i])]
        # the span of all member weights must be H itself; for spans of
        # weight subsets this holds by construction, so only assert
        if members and rank(tuple(p.weights[i] for i in members)) != key.subrank:
            raise AssertionError("candidate subspace not spanned by its member weights")
        if not members and key.subrank > 0:
            continue
        # strictly positive relation among the member weights
        system = LinearSystem(
            dim=len(members),
            eq=tuple(tuple(p.weights[i][k] for i in members) for k in range(r)),
            gt=tuple(tuple(1 if j == t else 0 for j in range(len(members))) for t in range(len(members))),
        )
        if strict_feasible(system) is not None:
            result.append(key)
    result.sort(key=lambda k: (k.subrank, k.basis))
    return tuple(result)


def higgs_problem(p: GitProblem, h: SubspaceKey) -> SubProblem:
    """Restrict the problem to the weights lying in the subspace ``h``,
    rewritten in the coordinates of its saturated basis."""
    if h.ambient != p.rank:
        raise ProblemError("subspace lives in a different character space")
    members = tuple(i for i in range(p.n) if h.contains_vector(p.weights[i]))
    sub_weights = []
    for i in members:
        if h.subrank == 0:
            sub_weights.append(())
            continue
        c = solve_integer(h.basis, p.weights[i])
        if c is None:
            raise AssertionError("weight in a saturated subspace must have integer coordinates")
        sub_weights.append(c)
    sub = GitProblem(weights=tuple(sub_weights), rank=h.subrank)
    if rank(sub.weights) != h.subrank:
        raise AssertionError("restricted weights fail to span the subspace")
    # push-forward consistency: sub-weight @ basis == parent weight
    if h.subrank:
        back = mat_mul(sub.weights, h.basis, p.rank)
        if back != tuple(p.weights[i] for i in members):
            raise AssertionError("embedding does not reproduce the parent weights")
    return SubProblem(problem=sub, embedding=h.basis, origin_indices=members)


def coulomb_problem(p: GitProblem, indices) -> SubProblem:
    """The problem attached to the relation lattice of a set of rays.

    The relations supported on ``indices`` form a saturated lattice with
    HNF basis rows l^(1), ..., l^(k); the Coulomb weight of member i is the
    column (l^(1)_i, ..., l^(k)_i).
    """
    s = tuple(sorted(set(int(i) for i in indices)))
    if not s:
        raise ProblemError("coulomb_problem needs a non-empty index set")
    if any(i < 0 or i >= p.n for i in s):
        raise ProblemError("index out of range")
    rd = rays(p)
    a_cols = tuple(tuple(rd.ray_matrix[i][j] for i in s) for j in range(rd.dim))
    relations = kernel_basis(a_cols, len(s))  # k x |s|, saturated HNF
    k = len(relations)
    sub_weights = tuple(tuple(relations[j][t] for j in range(k)) for t in range(len(s)))
    sub = GitProblem(weights=sub_weights, rank=k)
    return SubProblem(problem=sub, embedding=None, origin_indices=s)


@dataclass(frozen=True)
class MinimalFace:
    """A minimal face of the ray polytope: the index set ``indices`` spans
    the face, ``subspace`` is the span of the complementary weights, and
    ``coulomb_rank`` the rank of the relation lattice on the face."""

    indices: tuple[int, ...]
    subspace: SubspaceKey
    coulomb_rank: int


def push_forward_key(key: SubspaceKey, embedding, parent_ambient: int) -> SubspaceKey:
    """Image of a sub-problem subspace under the Higgs embedding,
    re-saturated in the parent character space."""
    if key.subrank == 0:
        return SubspaceKey.zero(parent_ambient)
    rows = mat_mul(key.basis, embedding, parent_ambient)
    return SubspaceKey.from_rows(rows, parent_ambient)


def minimal_faces(p: GitProblem) -> tuple[MinimalFace, ...]:
    """Minimal faces of the polytope of rays, one per relevant subspace.

    Requires a Calabi-Yau problem with pairwise distinct rays.  The face
    attached to a relevant subspace H is Gamma = {i : q_i not in H}.  Both
    face-ness (a covector vanishing on Gamma and strictly positive off it)
    and minimality (every face ray is dependent on the others) are
    re-verified directly.
    """
    if not p.is_calabi_yau:
        raise ProblemError("minimal faces are defined for Calabi-Yau problems only")
    rd = rays(p)
    if not rd.distinct:
        raise ProblemError("minimal faces require pairwise distinct rays")
    faces = []
    for h in relevant_subspaces(p):
        gamma = tuple(i for i in range(p.n) if not h.contains_vector(p.weights[i]))
        off = tuple(i for i in range(p.n) if i not in gamma)
        sys = LinearSystem(
            dim=rd.dim,
            eq=tuple(rd.ray_matrix[i] for i in gamma),
            gt=tuple(rd.ray_matrix[i] for i in off),
        )
        if strict_feasible(sys) is None:
            raise AssertionError(f"face witness covector missing for {h.label()}")
        gamma_rays = tuple(rd.ray_matrix[i] for i in gamma)
        for t, i in enumerate(gamma):
            others = gamma_rays[:t] + gamma_rays[t + 1:]
            if rank(others) != rank(gamma_rays):
                raise AssertionError(f"face {gamma} is not minimal: ray {i} is extremal")
        crank = len(gamma) - rank(gamma_rays) if gamma else 0
        if crank != p.rank - h.subrank:
            raise AssertionError("coulomb rank disagrees with subspace codimension")
        faces.append(MinimalFace(indices=gamma, subspace=h, coulomb_rank=crank))
    faces.sort(key=lambda f: (f.subspace.subrank, f.subspace.basis))
    return tuple(faces)
