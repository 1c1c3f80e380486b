"""Wall-crossing decompositions of derived categories of toric quotients.

Crossing a wall with pairing kappa > 0 against the anticanonical character
splits off kappa copies of the derived category of the wall's fixed-locus
quotient; the latter lives over the hyperplane subspace and is decomposed
recursively.  Following a monotone path (kappa > 0 walls crossed only away
from the anticanonical character, kappa = 0 walls freely) down to a
minimal chamber, and adding one copy of the terminal quotient when it is
nonempty, yields the multiplicity map of the starting chamber: how many
derived-category factors are supported on each subspace.

Paths terminate at the first chamber that is minimal or has empty
semistable locus; an empty terminal contributes no factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fan import (
    Chamber,
    SecondaryFan,
    Wall,
    build_fan,
    chamber_of,
    fixed_point_count,
    walls,
)
from .gitproblem import GitProblem, SubspaceKey, higgs_problem, push_forward_key
from .linalg import dot, kernel_basis

DEFAULT_BUDGET = 20_000


class PathError(ValueError):
    pass


class EmptyChamberError(ValueError):
    """Raised when asked to decompose a chamber with empty semistable locus."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CrossingPath:
    """A monotone path, recorded as the visited chamber ids."""

    chamber_ids: tuple[int, ...]


def full_key(p: GitProblem) -> SubspaceKey:
    return SubspaceKey.full(p.rank)


def map_key_order(key: SubspaceKey):
    return (key.subrank, key.basis)


def freeze_map(m: dict[SubspaceKey, int]):
    return tuple(sorted(m.items(), key=lambda kv: map_key_order(kv[0])))


def is_terminal(ch: Chamber) -> bool:
    return ch.minimal or not ch.nonempty


@lru_cache(maxsize=None)
def _directed_walls(fan: SecondaryFan) -> dict[tuple[int, int], Wall]:
    out: dict[tuple[int, int], Wall] = {}
    for w in walls(fan):
        out[(w.plus, w.minus)] = w
        out[(w.minus, w.plus)] = w
    return out


def monotone_moves(fan: SecondaryFan, cid: int) -> tuple[tuple[int, Wall], ...]:
    """Chambers reachable from ``cid`` in one monotone crossing, with the
    wall crossed, sorted by target id."""
    out = []
    for w in walls(fan):
        if w.plus == cid:
            out.append((w.minus, w))
        elif w.minus == cid and w.kappa == 0:
            out.append((w.plus, w))
    out.sort(key=lambda t: t[0])
    return tuple(out)


def _check_owned(fan: SecondaryFan, chamber: Chamber) -> Chamber:
    if not (0 <= chamber.id < len(fan.chambers)) or fan.chambers[chamber.id] != chamber:
        raise PathError("chamber does not belong to this problem's fan")
    return chamber


def monotone_paths(p: GitProblem, chamber: Chamber, *, limit: int | None = None
                   ) -> tuple[CrossingPath, ...]:
    """All monotone paths from ``chamber`` to a terminal chamber, in
    depth-first order with moves sorted by target id.  Raises
    :class:`BudgetExceeded` when more than ``limit`` paths exist."""
    fan = build_fan(p)
    _check_owned(fan, chamber)
    found: list[CrossingPath] = []

    def extend(trail: tuple[int, ...]):
        cur = fan.chambers[trail[-1]]
        if is_terminal(cur):
            if limit is not None and len(found) >= limit:
                raise BudgetExceeded(f"more than {limit} monotone paths")
            found.append(CrossingPath(chamber_ids=trail))
            return
        for nid, _ in monotone_moves(fan, cur.id):
            if nid not in trail:
                extend(trail + (nid,))

    extend((chamber.id,))
    return tuple(found)


def default_path(p: GitProblem, chamber: Chamber) -> CrossingPath:
    """Shortest monotone path to a terminal chamber; ties broken by the
    lexicographically smallest chamber-id sequence."""
    fan = build_fan(p)
    _check_owned(fan, chamber)
    frontier = [(chamber.id,)]
    seen = {chamber.id}
    while frontier:
        for trail in frontier:
            if is_terminal(fan.chambers[trail[-1]]):
                return CrossingPath(chamber_ids=trail)
        nxt = []
        for trail in frontier:
            if is_terminal(fan.chambers[trail[-1]]):
                continue
            for nid, _ in monotone_moves(fan, trail[-1]):
                if nid not in seen and nid not in trail:
                    nxt.append(trail + (nid,))
        fresh = []
        for trail in sorted(nxt):
            if trail[-1] not in seen:
                seen.add(trail[-1])
                fresh.append(trail)
        frontier = fresh
    raise AssertionError("every chamber admits a monotone path to a terminal one")


def validate_path(p: GitProblem, chamber: Chamber, path: CrossingPath) -> None:
    fan = build_fan(p)
    _check_owned(fan, chamber)
    ids = path.chamber_ids
    if not ids or ids[0] != chamber.id:
        raise PathError("path must start at the given chamber")
    if len(set(ids)) != len(ids):
        raise PathError("path revisits a chamber")
    dw = _directed_walls(fan)
    for a, b in zip(ids, ids[1:]):
        w = dw.get((a, b))
        if w is None:
            raise PathError(f"chambers {a} and {b} are not adjacent")
        if w.kappa > 0 and w.plus != a:
            raise PathError(
                f"wall between {a} and {b} may only be crossed from its positive side")
    for cid in ids[:-1]:
        if is_terminal(fan.chambers[cid]):
            raise PathError(f"path continues past terminal chamber {cid}")
    if not is_terminal(fan.chambers[ids[-1]]):
        raise PathError("path does not end at a minimal or empty chamber")


def _wall_subquotient(p: GitProblem, fan: SecondaryFan, w: Wall):
    """The restricted problem supported on the wall's hyperplane, its fan,
    and the chamber of the wall's interior stability parameter."""
    key = fan.hyperplanes[w.hyperplane_index].key
    sub = higgs_problem(p, key)
    sub_fan = build_fan(sub.problem)
    coords = key.coordinates_of(w.interior)
    if coords is None:
        raise AssertionError("wall interior point must lie on its hyperplane")
    sub_ch = chamber_of(sub_fan, coords)
    return key, sub, sub_ch


def _push_map(sub_map: dict[SubspaceKey, int], embedding, parent_rank: int,
              factor: int) -> dict[SubspaceKey, int]:
    out: dict[SubspaceKey, int] = {}
    for k, mult in sub_map.items():
        pk = push_forward_key(k, embedding, parent_rank)
        out[pk] = out.get(pk, 0) + factor * mult
    return out


def _merge_into(target: dict[SubspaceKey, int], extra: dict[SubspaceKey, int]) -> None:
    for k, mult in extra.items():
        target[k] = target.get(k, 0) + mult


def decompose(p: GitProblem, chamber: Chamber, *, path: CrossingPath | None = None
              ) -> dict[SubspaceKey, int]:
    """Multiplicity map of the quotient at ``chamber``: for each subspace
    key, the number of derived-category factors supported on it.

    The anticanonically trivial case is a single full factor.  Otherwise
    the map is accumulated along ``path`` (default: shortest monotone
    path): each kappa > 0 crossing contributes kappa copies of the wall
    quotient's own map, pushed forward; an empty wall quotient contributes
    nothing; a nonempty terminal chamber contributes one full factor.
    """
    fan = build_fan(p)
    _check_owned(fan, chamber)
    if not chamber.nonempty:
        raise EmptyChamberError(f"chamber {chamber.id} has empty semistable locus")
    if path is not None:
        validate_path(p, chamber, path)
    if p.is_calabi_yau:
        return {full_key(p): 1}
    if path is None:
        return dict(_decompose_default(p, chamber.id))
    return _decompose_along(p, fan, path.chamber_ids)


@lru_cache(maxsize=None)
def _decompose_default(p: GitProblem, cid: int):
    fan = build_fan(p)
    path = default_path(p, fan.chambers[cid])
    return tuple(sorted(
        _decompose_along(p, fan, path.chamber_ids).items(),
        key=lambda kv: map_key_order(kv[0]),
    ))


def _decompose_along(p: GitProblem, fan: SecondaryFan, ids: tuple[int, ...]
                     ) -> dict[SubspaceKey, int]:
    dw = _directed_walls(fan)
    out: dict[SubspaceKey, int] = {}
    for a, b in zip(ids, ids[1:]):
        w = dw[(a, b)]
        if w.kappa == 0:
            continue
        key, sub, sub_ch = _wall_subquotient(p, fan, w)
        if not sub_ch.nonempty:
            continue
        sub_map = decompose(sub.problem, sub_ch)
        _merge_into(out, _push_map(sub_map, key.basis, p.rank, w.kappa))
    terminal = fan.chambers[ids[-1]]
    if terminal.nonempty:
        fk = full_key(p)
        out[fk] = out.get(fk, 0) + 1
    return out


@dataclass(frozen=True)
class JhReport:
    """Outcome of a path-independence check.

    ``status`` is PASS when every monotone path, with every admissible
    recursive decomposition of every wall quotient, produces one and the
    same multiplicity map; FAIL when two differ; INCONCLUSIVE when the
    enumeration budget ran out.  ``maps`` lists the distinct maps found.
    """

    status: str
    path_count: int
    maps: tuple
    common: dict | None


class _Budget:
    def __init__(self, n: int):
        self.left = n

    def spend(self, k: int = 1):
        self.left -= k
        if self.left < 0:
            raise BudgetExceeded("path-independence enumeration budget exhausted")


def _all_maps(p: GitProblem, cid: int, memo: dict, budget: _Budget,
              count_paths: bool = False):
    """Every multiplicity map attainable from chamber ``cid`` over all
    monotone paths and all recursive choices at the walls.  Returns the
    set of frozen maps, and the number of complete paths when counting."""
    mkey = (p, cid)
    if not count_paths and mkey in memo:
        return memo[mkey], 0
    fan = build_fan(p)
    if p.is_calabi_yau:
        result = frozenset({freeze_map({full_key(p): 1})})
        memo[mkey] = result
        return result, 1

    def factor_sets(w: Wall):
        key, sub, sub_ch = _wall_subquotient(p, fan, w)
        if not sub_ch.nonempty:
            return ({},)
        sub_maps, _ = _all_maps(sub.problem, sub_ch.id, memo, budget)
        out = []
        for fm in sub_maps:
            out.append(_push_map(dict(fm), key.basis, p.rank, w.kappa))
        return tuple(out)

    def explore(cur: int, trail: tuple[int, ...]):
        budget.spend()
        ch = fan.chambers[cur]
        if is_terminal(ch):
            base: dict[SubspaceKey, int] = {}
            if ch.nonempty:
                base[full_key(p)] = 1
            return {freeze_map(base)}, 1
        maps = set()
        npaths = 0
        for nid, w in monotone_moves(fan, cur):
            if nid in trail:
                continue
            tails, tn = explore(nid, trail + (nid,))
            if not tails:
                continue
            npaths += tn
            if w.kappa > 0:
                factors = factor_sets(w)
            else:
                factors = ({},)
            for f in factors:
                for t in tails:
                    merged = dict(f)
                    _merge_into(merged, dict(t))
                    maps.add(freeze_map(merged))
                    budget.spend()
        return maps, npaths

    result, npaths = explore(cid, (cid,))
    result = frozenset(result)
    memo[mkey] = result
    return result, npaths


def jh_check(p: GitProblem, chamber: Chamber, *, budget: int = DEFAULT_BUDGET
             ) -> JhReport:
    """Check that the multiplicity map of ``chamber`` does not depend on
    the monotone path or on any recursive choice made at the walls."""
    fan = build_fan(p)
    _check_owned(fan, chamber)
    if not chamber.nonempty:
        raise EmptyChamberError(f"chamber {chamber.id} has empty semistable locus")
    b = _Budget(budget)
    try:
        maps, npaths = _all_maps(p, chamber.id, {}, b, count_paths=True)
    except BudgetExceeded:
        return JhReport(status="INCONCLUSIVE", path_count=0, maps=(), common=None)
    if not maps:
        raise AssertionError("a nonempty chamber always has a monotone path")
    ordered = tuple(sorted(maps))
    if len(ordered) == 1:
        return JhReport(status="PASS", path_count=npaths, maps=ordered,
                        common=dict(ordered[0]))
    return JhReport(status="FAIL", path_count=npaths, maps=ordered, common=None)


def codim1_multiplicity(p: GitProblem, chamber: Chamber, key: SubspaceKey) -> int:
    """Closed form for the multiplicity of a codimension-one subspace in
    the map of ``chamber``: the pairing of the anticanonical character
    with the hyperplane's normal oriented toward the chamber, clamped at
    zero."""
    if key.ambient != p.rank or key.subrank != p.rank - 1:
        raise ValueError("key must be a hyperplane of the character space")
    kern = kernel_basis(key.basis, p.rank)
    if len(kern) != 1:
        raise AssertionError("a hyperplane has a one-dimensional normal space")
    lam = kern[0]
    s = dot(lam, chamber.interior)
    if s == 0:
        raise AssertionError("chamber interior may not lie on a weight hyperplane")
    if s < 0:
        lam = tuple(-x for x in lam)
    return max(dot(lam, p.det_v), 0)


def minimal_nonempty_chamber(p: GitProblem) -> Chamber | None:
    """The lowest-id minimal chamber with nonempty semistable locus."""
    fan = build_fan(p)
    for c in fan.chambers:
        if c.minimal and c.nonempty:
            return c
    return None


@dataclass(frozen=True)
class FactorInfo:
    """The wall quotient supported on a subspace: its restricted weights,
    the chamber at which it is taken minimal, and its fixed-point count."""

    key: SubspaceKey
    weights: tuple[tuple[int, ...], ...]
    minimal_chamber: Chamber | None
    fixed_points: int


def describe_factor(p: GitProblem, key: SubspaceKey) -> FactorInfo:
    sub = higgs_problem(p, key)
    ch = minimal_nonempty_chamber(sub.problem)
    fp = fixed_point_count(sub.problem, ch.interior) if ch is not None else 0
    return FactorInfo(key=key, weights=sub.problem.weights,
                      minimal_chamber=ch, fixed_points=fp)
