"""Command-line interface.

Problems are read from JSON files of the form::

    {"name": "local-p1xp1", "weights": [[1, 0], [1, 0], [0, 1], [0, 1], [-2, -2]]}

Subcommands: ``analyze`` (fan, chambers, walls, faces), ``decompose`` and
``jh`` (multiplicity maps at a chamber picked by ``--point`` or
``--chamber``), ``conjecture`` (intersection-multiplicity comparison) and
``horn`` (discriminant parametrisation at a covector).

Exit status: 0 on success (including PASS and EQUAL verdicts), 1 on usage,
parse or precondition errors and on an inconclusive check, 2 when a check
is falsified (FAIL or UNEQUAL).

Output is deterministic; with ``--json`` the rendering is byte-stable for
identical invocations.  Rationals are printed as integers when integral
and as ``p/q`` otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .discriminant import conjecture_check, horn_eval, rank1_point
from .fan import (
    Chamber,
    SecondaryFan,
    build_fan,
    chamber_of,
    fixed_point_count,
    phase_signature,
    walls,
)
from .gitproblem import (
    GitProblem,
    ProblemError,
    minimal_faces,
    new_problem,
    rays,
    relevant_subspaces,
)
from .sod import (
    DEFAULT_BUDGET,
    decompose,
    default_path,
    describe_factor,
    jh_check,
    map_key_order,
)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rat(x) -> int | str:
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _rat_str(x) -> str:
    return str(_rat(x))


def _vec(v) -> list:
    return [_rat(x) for x in v]


def _parse_vector(text: str, dim: int, what: str) -> tuple[Fraction, ...]:
    parts = [t.strip() for t in text.strip().lstrip("(").rstrip(")").split(",") if t.strip()]
    try:
        vec = tuple(Fraction(t) for t in parts)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"cannot parse {what} {text!r}: {e}") from None
    if len(vec) != dim:
        raise UsageError(f"{what} has {len(vec)} coordinates, expected {dim}")
    return vec


def _load_problem(path: str) -> tuple[str, GitProblem]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None
    if not isinstance(data, dict) or "weights" not in data:
        raise UsageError(f"{path} must be a JSON object with a 'weights' key")
    weights = data["weights"]
    if (not isinstance(weights, list)
            or not all(isinstance(w, list) and all(isinstance(x, int) for x in w)
                       for w in weights)):
        raise UsageError(f"{path}: 'weights' must be a list of integer rows")
    name = data.get("name", path)
    if not isinstance(name, str):
        raise UsageError(f"{path}: 'name' must be a string")
    return name, new_problem(weights)


def _pick_chamber(fan: SecondaryFan, args) -> Chamber:
    if (args.point is None) == (args.chamber is None):
        raise UsageError("pick a chamber with exactly one of --point or --chamber")
    if args.point is not None:
        pt = _parse_vector(args.point, fan.problem.rank, "--point")
        return chamber_of(fan, pt)
    ids = {c.id: c for c in fan.chambers}
    if args.chamber not in ids:
        raise UsageError(f"no chamber {args.chamber}; ids run 0..{len(fan.chambers) - 1}")
    return ids[args.chamber]


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        for line in human:
            print(line)


def _map_json(m) -> dict:
    return {k.label(): v for k, v in sorted(m.items(), key=lambda kv: map_key_order(kv[0]))}


def _map_str(m) -> str:
    items = sorted(m.items(), key=lambda kv: map_key_order(kv[0]))
    return "{" + ", ".join(f"{k.label()}: {v}" for k, v in items) + "}"


def _phase_groups(fan: SecondaryFan) -> list[list[int]]:
    groups: dict = {}
    for c in fan.chambers:
        if not c.nonempty:
            continue
        sig = phase_signature(fan.problem, c.interior)
        groups.setdefault(sig, []).append(c.id)
    return sorted(groups.values())


def _cmd_analyze(args) -> int:
    name, p = _load_problem(args.input)
    fan = build_fan(p)
    rd = rays(p)
    ws = walls(fan)
    phases = _phase_groups(fan)
    payload = {
        "name": name,
        "seed": args.seed,
        "rank": p.rank,
        "weights": [list(w) for w in p.weights],
        "anticanonical": list(p.det_v),
        "calabi_yau": p.is_calabi_yau,
        "rays": [list(a) for a in rd.ray_matrix],
        "distinct_rays": rd.distinct,
        "height": list(rd.height) if rd.height is not None else None,
        "hyperplanes": [{"normal": list(h.normal), "span": h.key.label()}
                        for h in fan.hyperplanes],
        "chambers": [
            {
                "id": c.id,
                "signs": list(c.signs),
                "interior": list(c.interior),
                "nonempty": c.nonempty,
                "minimal": c.minimal,
                "fixed_points": fixed_point_count(p, c.interior) if c.nonempty else 0,
            }
            for c in fan.chambers
        ],
        "phase_count": len(phases),
        "phases": phases,
        "walls": [
            {
                "hyperplane": w.hyperplane_index,
                "lam": list(w.lam),
                "kappa": w.kappa,
                "plus": w.plus,
                "minus": w.minus,
                "interior": list(w.interior),
            }
            for w in ws
        ],
        "relevant_subspaces": [k.label() for k in relevant_subspaces(p)],
    }
    human = [
        f"problem {name}: rank {p.rank}, {p.n} weights",
        f"  weights: {', '.join(str(tuple(w)) for w in p.weights)}",
        f"  anticanonical character: {tuple(p.det_v)}"
        + ("  (trivial)" if p.is_calabi_yau else ""),
        f"  distinct rays: {'yes' if rd.distinct else 'no'}",
        f"  hyperplanes ({len(fan.hyperplanes)}):",
    ]
    for i, h in enumerate(fan.hyperplanes):
        human.append(f"    h{i}: normal {tuple(h.normal)}, span {h.key.label()}")
    human.append(f"  chambers ({len(fan.chambers)}), phases ({len(phases)}):")
    for c in fan.chambers:
        tags = []
        tags.append("nonempty" if c.nonempty else "empty")
        if c.minimal:
            tags.append("minimal")
        fp = fixed_point_count(p, c.interior) if c.nonempty else 0
        human.append(
            f"    chamber {c.id}: interior {tuple(c.interior)}, "
            f"{' '.join(tags)}, fixed points {fp}")
    human.append(f"  walls ({len(ws)}):")
    for w in ws:
        human.append(
            f"    {w.plus} -> {w.minus}: lam {tuple(w.lam)}, kappa {w.kappa}, "
            f"through {tuple(w.interior)}")
    human.append(
        "  relevant subspaces: "
        + ", ".join(k.label() for k in relevant_subspaces(p)))
    if p.is_calabi_yau and rd.distinct:
        faces = minimal_faces(p)
        payload["minimal_faces"] = [
            {
                "indices": list(f.indices),
                "subspace": f.subspace.label(),
                "relation_rank": f.coulomb_rank,
            }
            for f in faces
        ]
        human.append(f"  minimal faces ({len(faces)}):")
        for f in faces:
            human.append(
                f"    rays {list(f.indices)}: subspace {f.subspace.label()}, "
                f"relation rank {f.coulomb_rank}")
    _emit(args, payload, human)
    return 0


def _cmd_decompose(args) -> int:
    name, p = _load_problem(args.input)
    fan = build_fan(p)
    ch = _pick_chamber(fan, args)
    path = default_path(p, ch)
    m = decompose(p, ch)
    factors = []
    for k, mult in sorted(m.items(), key=lambda kv: map_key_order(kv[0])):
        fi = describe_factor(p, k)
        factors.append({
            "subspace": k.label(),
            "multiplicity": mult,
            "weights": [list(w) for w in fi.weights],
            "fixed_points": fi.fixed_points,
        })
    payload = {
        "name": name,
        "seed": args.seed,
        "chamber": ch.id,
        "interior": list(ch.interior),
        "path": list(path.chamber_ids),
        "map": _map_json(m),
        "factors": factors,
        "fixed_points": fixed_point_count(p, ch.interior),
    }
    human = [
        f"problem {name}: chamber {ch.id} (interior {tuple(ch.interior)})",
        f"  path: {' -> '.join(str(i) for i in path.chamber_ids)}",
        f"  multiplicity map: {_map_str(m)}",
    ]
    for f in factors:
        human.append(
            f"    {f['subspace']}: multiplicity {f['multiplicity']}, "
            f"fixed points {f['fixed_points']}")
    human.append(f"  fixed points of the chamber: {payload['fixed_points']}")
    _emit(args, payload, human)
    return 0


def _cmd_jh(args) -> int:
    name, p = _load_problem(args.input)
    fan = build_fan(p)
    ch = _pick_chamber(fan, args)
    rep = jh_check(p, ch, budget=args.budget)
    payload = {
        "name": name,
        "seed": args.seed,
        "chamber": ch.id,
        "interior": list(ch.interior),
        "status": rep.status,
        "path_count": rep.path_count,
        "maps": [_map_json(dict(m)) for m in rep.maps],
    }
    human = [
        f"problem {name}: chamber {ch.id} (interior {tuple(ch.interior)})",
        f"  path independence: {rep.status}"
        + (f" over {rep.path_count} paths" if rep.status != "INCONCLUSIVE" else ""),
    ]
    if rep.status == "PASS":
        human.append(f"  common map: {_map_str(rep.common)}")
    elif rep.status == "FAIL":
        for m in rep.maps:
            human.append(f"  map: {_map_str(dict(m))}")
    else:
        human.append(f"  budget of {args.budget} exhausted; raise --budget")
    _emit(args, payload, human)
    if rep.status == "PASS":
        return 0
    if rep.status == "FAIL":
        return 2
    return 1


def _cmd_conjecture(args) -> int:
    name, p = _load_problem(args.input)
    rows = conjecture_check(p)
    verdicts = [r.verdict for r in rows]
    overall = "UNEQUAL" if "UNEQUAL" in verdicts else "EQUAL"
    payload = {
        "name": name,
        "seed": args.seed,
        "rows": [
            {
                "wall": {
                    "hyperplane": r.wall.hyperplane_index,
                    "plus": r.wall.plus,
                    "minus": r.wall.minus,
                    "interior": list(r.wall.interior),
                },
                "face": r.face.subspace.label(),
                "relation_rank": r.face.coulomb_rank,
                "m": r.m,
                "n": r.n,
                "verdict": r.verdict,
            }
            for r in rows
        ],
        "overall": overall,
        "skipped": verdicts.count("SKIPPED"),
    }
    human = [f"problem {name}: {len(rows)} wall/face comparisons"]
    for r in rows:
        human.append(
            f"  wall through {tuple(r.wall.interior)} x face {r.face.subspace.label()}: "
            f"m={'-' if r.m is None else r.m} n={r.n} {r.verdict}")
    human.append(f"  overall: {overall}"
                 + (f" ({payload['skipped']} skipped)" if payload["skipped"] else ""))
    _emit(args, payload, human)
    return 2 if overall == "UNEQUAL" else 0


def _cmd_horn(args) -> int:
    name, p = _load_problem(args.input)
    lam = _parse_vector(args.lam, p.rank, "--lam")
    values = horn_eval(p, lam)
    payload = {
        "name": name,
        "seed": args.seed,
        "lam": _vec(lam),
        "values": _vec(values),
    }
    human = [
        f"problem {name}: parametrisation at {tuple(_rat_str(x) for x in lam)}",
        f"  values: ({', '.join(_rat_str(v) for v in values)})",
    ]
    if p.rank == 1 and not p.has_zero_weights:
        pt = rank1_point(p)
        payload["rank1_point"] = _rat(pt)
        human.append(f"  rank-one discriminant point: {_rat_str(pt)}")
    _emit(args, payload, human)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="wallcross",
                     description="Exact wall-crossing computations for toric GIT problems.")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON instead of text")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed recorded in the output (results are deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", help="path to a problem JSON file")
        sp.set_defaults(fn=fn)
        return sp

    add("analyze", _cmd_analyze, "fan, chambers, walls, phases and faces")

    for name, fn, help_ in (
        ("decompose", _cmd_decompose, "multiplicity map of a chamber"),
        ("jh", _cmd_jh, "path-independence check at a chamber"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--point", help="stability parameter, e.g. '1,1' or '-1/3,2'")
        sp.add_argument("--chamber", type=int, help="chamber id from analyze")
        if name == "jh":
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                            help="path enumeration budget")

    add("conjecture", _cmd_conjecture, "compare intersection multiplicities with factor counts")
    sp = add("horn", _cmd_horn, "evaluate the discriminant parametrisation")
    sp.add_argument("--lam", required=True, help="covector, e.g. '1,1' or '2/3,-1'")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ProblemError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
