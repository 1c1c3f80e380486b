"""Exact linear algebra over the integers and rationals.

Everything in this package runs on arbitrary-precision ``int`` and
``fractions.Fraction``; no floating point is used anywhere.  Matrices are
tuples (or lists) of row tuples.  Because several callers need empty
matrices (rank-0 subspaces, rank-0 torus factors), functions that cannot
infer the ambient width from their arguments take an explicit ``ncols``.

The Hermite normal form convention is fixed once and for all here: row
echelon, positive pivots, entries above each pivot reduced into
``[0, pivot)``.  Canonical bases produced by :func:`kernel_basis` and
:func:`saturate` therefore compare bit-for-bit equal whenever they span the
same saturated lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]
RatVec = tuple[Fraction, ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v) -> IntVec:
    """Scale a rational vector by a positive rational to a primitive integer
    vector.  The zero vector is returned unchanged."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        return tuple(0 for _ in v)
    lcm = 1
    for x in v:
        d = x.denominator
        lcm = lcm // gcd(lcm, d) * d
    w = [int(x * lcm) for x in v]
    g = vec_gcd(w)
    return tuple(x // g for x in w)


def dot(u, v):
    if len(u) != len(v):
        raise ValueError(f"dot: length mismatch {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def mat_mul(a, b_rows, bcols: int):
    """Product of ``a`` (rows) with the matrix given by ``b_rows``."""
    out = []
    for row in a:
        if len(row) != len(b_rows):
            raise ValueError("mat_mul: inner dimension mismatch")
        acc = [0] * bcols
        for coeff, brow in zip(row, b_rows):
            if coeff == 0:
                continue
            for j in range(bcols):
                acc[j] += coeff * brow[j]
        out.append(tuple(acc))
    return tuple(out)


def transpose(rows, ncols: int) -> IntMat:
    return tuple(tuple(r[j] for r in rows) for j in range(ncols))


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def hnf(rows) -> tuple[IntMat, IntMat]:
    """Row Hermite normal form.

    Returns (h, u) with u unimodular, u @ rows == h, h in row echelon form
    with positive pivots and entries above each pivot reduced into
    [0, pivot).  Zero rows sink to the bottom.  The row lattice of h equals
    the row lattice of the input.
    """
    work = [list(r) for r in rows]
    p = len(work)
    q = len(work[0]) if p else 0
    u = [list(r) for r in identity(p)]
    pr = 0  # next pivot row
    for col in range(q):
        piv = None
        for i in range(pr, p):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != pr:
            work[pr], work[piv] = work[piv], work[pr]
            u[pr], u[piv] = u[piv], u[pr]
        for i in range(pr + 1, p):
            if work[i][col] == 0:
                continue
            a, b = work[pr][col], work[i][col]
            if b % a == 0:
                x, y, c, d = 1, 0, -(b // a), 1
            else:
                g, x, y = xgcd(a, b)
                c, d = -(b // g), a // g
            # [[x, y], [c, d]] has determinant 1
            r0 = [x * work[pr][j] + y * work[i][j] for j in range(q)]
            r1 = [c * work[pr][j] + d * work[i][j] for j in range(q)]
            work[pr], work[i] = r0, r1
            u0 = [x * u[pr][j] + y * u[i][j] for j in range(p)]
            u1 = [c * u[pr][j] + d * u[i][j] for j in range(p)]
            u[pr], u[i] = u0, u1
        if work[pr][col] < 0:
            work[pr] = [-x for x in work[pr]]
            u[pr] = [-x for x in u[pr]]
        pivot = work[pr][col]
        for i in range(pr):
            f = work[i][col] // pivot
            if f:
                work[i] = [work[i][j] - f * work[pr][j] for j in range(q)]
                u[i] = [u[i][j] - f * u[pr][j] for j in range(p)]
        pr += 1
        if pr == p:
            break
    return tuple(tuple(r) for r in work), tuple(tuple(r) for r in u)


def hnf_basis(rows) -> IntMat:
    """HNF of ``rows`` with zero rows stripped."""
    h, _ = hnf(rows)
    return tuple(r for r in h if any(x != 0 for x in r))


def rank(rows) -> int:
    return len(hnf_basis(rows))


def det(rows) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("det: matrix not square")
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def snf(rows) -> tuple[IntMat, IntMat, IntMat]:
    """Smith normal form.

    Returns (s, u, v) with u, v unimodular, u @ rows @ v == s, s diagonal
    with non-negative entries and each divisor dividing the next.
    """
    work = [list(r) for r in rows]
    p = len(work)
    q = len(work[0]) if p else 0
    u = [list(r) for r in identity(p)]
    v = [list(r) for r in identity(q)]

    def row_op(i0, i1, a, b, c, d):
        # rows i0, i1 <- a*i0 + b*i1, c*i0 + d*i1  (ad - bc = +-1)
        for m, w in ((work, q), (u, p)):
            r0 = [a * m[i0][j] + b * m[i1][j] for j in range(w)]
            r1 = [c * m[i0][j] + d * m[i1][j] for j in range(w)]
            m[i0], m[i1] = r0, r1

    def col_op(j0, j1, a, b, c, d):
        for m in (work, v):
            for r in m:
                x, y = r[j0], r[j1]
                r[j0], r[j1] = a * x + b * y, c * x + d * y

    t = 0
    while True:
        # find the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, p):
            for j in range(t, q):
                if work[i][j] != 0 and (best is None or abs(work[i][j]) < abs(work[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            work[t], work[bi] = work[bi], work[t]
            u[t], u[bi] = u[bi], u[t]
        if bj != t:
            for m in (work, v):
                if m is v:
                    for r in v:
                        r[t], r[bj] = r[bj], r[t]
                else:
                    for r in work:
                        r[t], r[bj] = r[bj], r[t]
        while True:
            dirty = False
            for i in range(t + 1, p):
                if work[i][t] != 0:
                    a, b = work[t][t], work[i][t]
                    if b % a == 0:
                        row_op(t, i, 1, 0, -(b // a), 1)  # keep the pivot row intact
                    else:
                        g, x, y = xgcd(a, b)
                        row_op(t, i, x, y, -(b // g), a // g)
                    dirty = True
            for j in range(t + 1, q):
                if work[t][j] != 0:
                    a, b = work[t][t], work[t][j]
                    if b % a == 0:
                        col_op(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = xgcd(a, b)
                        col_op(t, j, x, y, -(b // g), a // g)
                    dirty = True
            if not dirty:
                break
        # enforce the divisibility chain: pivot must divide the rest
        piv = work[t][t]
        fix = None
        for i in range(t + 1, p):
            for j in range(t + 1, q):
                if work[i][j] % piv != 0:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            row_op(t, fix, 1, 1, 0, 1)  # add the offending row to the pivot row
            continue
        if piv < 0:
            work[t] = [-x for x in work[t]]
            u[t] = [-x for x in u[t]]
        t += 1
        if t == min(p, q):
            break
    return tuple(tuple(r) for r in work), tuple(tuple(r) for r in u), tuple(tuple(r) for r in v)


def kernel_basis(rows, ncols: int) -> IntMat:
    """HNF basis of the saturated right kernel {v : rows @ v == 0}.

    ``rows`` may be empty, in which case the kernel is all of Z^ncols and
    the identity is returned.  The result is saturated because the integer
    kernel of an integer matrix always is.
    """
    rows = tuple(tuple(r) for r in rows)
    for r in rows:
        if len(r) != ncols:
            raise ValueError("kernel_basis: row width mismatch")
    nz = tuple(r for r in rows if any(x != 0 for x in r))
    if ncols == 0:
        return ()
    if not nz:
        return identity(ncols)
    # left-kernel trick on the transpose: rows of u matching zero rows of h
    at = transpose(nz, ncols)  # ncols x len(nz)
    h, u = hnf(at)
    basis = tuple(u[i] for i in range(ncols) if all(x == 0 for x in h[i]))
    return hnf_basis(basis) if basis else ()


def saturate(rows, ncols: int) -> IntMat:
    """HNF basis of the saturation of the row lattice of ``rows``.

    The saturation is span_Q(rows) intersected with Z^ncols; it is computed
    as the kernel of the kernel, which is saturated by construction.
    """
    rows = tuple(tuple(r) for r in rows)
    if not any(any(x != 0 for x in r) for r in rows):
        return ()
    perp = kernel_basis(rows, ncols)
    sat = kernel_basis(perp, ncols)
    if len(sat) != rank(rows):
        raise AssertionError("saturate: rank changed")
    return sat


def solve_rational(rows, b) -> RatVec | None:
    """Solve x @ rows == b over the rationals; None if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows = tuple(tuple(r) for r in rows)
    p = len(rows)
    q = len(b)
    for r in rows:
        if len(r) != q:
            raise ValueError("solve_rational: width mismatch")
    # row-reduce [rows^T | b^T]
    aug = [[Fraction(rows[i][j]) for i in range(p)] + [Fraction(b[j])] for j in range(q)]
    pivots: list[tuple[int, int]] = []
    pr = 0
    for col in range(p):
        piv = next((i for i in range(pr, q) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[pr], aug[piv] = aug[piv], aug[pr]
        inv = 1 / aug[pr][col]
        aug[pr] = [x * inv for x in aug[pr]]
        for i in range(q):
            if i != pr and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * c for a, c in zip(aug[i], aug[pr])]
        pivots.append((pr, col))
        pr += 1
    for i in range(pr, q):
        if aug[i][p] != 0:
            return None
    x = [Fraction(0)] * p
    for row_i, col in pivots:
        x[col] = aug[row_i][p]
    return tuple(x)


def solve_integer(rows, b) -> IntVec | None:
    """Solve x @ rows == b over the integers, i.e. decide whether b lies in
    the lattice generated by the rows.  Echelon descent on the Hermite form:
    each pivot column determines its coefficient uniquely, so membership
    fails exactly when a division leaves a remainder or a residue survives."""
    rows = tuple(tuple(r) for r in rows)
    if not rows:
        return () if all(x == 0 for x in b) else None
    nc = len(rows[0])
    h, u = hnf(rows)
    residual = list(b)
    coeffs = [0] * len(rows)
    for i, row in enumerate(h):
        piv = next((j for j, x in enumerate(row) if x), None)
        if piv is None:
            continue
        c, rem = divmod(residual[piv], row[piv])
        if rem != 0:
            return None
        coeffs[i] = c
        for j in range(nc):
            residual[j] -= c * row[j]
    if any(residual):
        return None
    return tuple(
        sum(coeffs[i] * u[i][k] for i in range(len(rows)))
        for k in range(len(rows))
    )


# ---------------------------------------------------------------------------
# strict feasibility of homogeneous linear systems (Fourier-Motzkin)

GE = 0  # a . x >= 0
GT = 1  # a . x > 0


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous system of linear constraints on Q^dim.

    eq rows demand a . x == 0, ge rows a . x >= 0, gt rows a . x > 0.
    """

    dim: int
    eq: tuple[IntVec, ...] = ()
    ge: tuple[IntVec, ...] = ()
    gt: tuple[IntVec, ...] = ()

    def __post_init__(self):
        for group in (self.eq, self.ge, self.gt):
            for row in group:
                if len(row) != self.dim:
                    raise ValueError("LinearSystem: row width mismatch")


class FeasibilityBlowup(RuntimeError):
    pass


_ROW_CAP = 200_000


def _norm_ineq(vec, rel):
    v = primitive(vec)
    return v, rel


def strict_feasible(system: LinearSystem) -> IntVec | None:
    """Canonical interior witness of a homogeneous system, or None.

    Equalities are eliminated by exact substitution, the remaining
    inequalities by Fourier-Motzkin.  A witness is reconstructed by back
    substitution and normalised to a primitive integer vector (scaling a
    solution of a homogeneous system by a positive rational keeps it a
    solution).  The outcome is deterministic for a fixed input.
    """
    dim = system.dim

    # --- eliminate equalities by substitution
    eqs = [list(map(Fraction, r)) for r in system.eq]
    ineqs: list[tuple[list[Fraction], int]] = [
        (list(map(Fraction, r)), GE) for r in system.ge
    ] + [(list(map(Fraction, r)), GT) for r in system.gt]
    subs: list[tuple[int, list[Fraction]]] = []  # (pivot var, row with pivot coeff 1)
    eliminated: set[int] = set()
    for row in eqs:
        # substitute previous pivots first
        for j, prow in subs:
            if row[j] != 0:
                f = row[j]
                for k in range(dim):
                    row[k] -= f * prow[k]
        pidx = next((k for k in range(dim) if row[k] != 0), None)
        if pidx is None:
            continue  # 0 == 0
        inv = 1 / row[pidx]
        prow = [x * inv for x in row]
        subs.append((pidx, prow))
        eliminated.add(pidx)
        for vec, _rel in ineqs:
            if vec[pidx] != 0:
                f = vec[pidx]
                for k in range(dim):
                    vec[k] -= f * prow[k]

    active = [k for k in range(dim) if k not in eliminated]

    # --- normalise, dedupe (GT beats GE on the same vector)
    pool: dict[IntVec, int] = {}

    def add_row(vec, rel) -> bool:
        """Returns False on a contradiction (0 > 0)."""
        v = primitive(vec)
        if all(x == 0 for x in v):
            return rel != GT
        cur = pool.get(v)
        if cur is None or rel > cur:
            pool[v] = rel
        return True

    for vec, rel in ineqs:
        if not add_row(vec, rel):
            return None

    frames: list[tuple[int, list[tuple[IntVec, int]], list[tuple[IntVec, int]]]] = []
    while active:
        rows = list(pool.items())
        # pick the variable minimising the Fourier-Motzkin pair count
        best_var, best_cost = None, None
        for var in active:
            np_ = sum(1 for v, _ in rows if v[var] > 0)
            nn = sum(1 for v, _ in rows if v[var] < 0)
            cost = np_ * nn
            if best_cost is None or cost < best_cost:
                best_var, best_cost = var, cost
        var = best_var
        lower = [(v, rel) for v, rel in rows if v[var] > 0]   # give lower bounds
        upper = [(v, rel) for v, rel in rows if v[var] < 0]   # give upper bounds
        keep = [(v, rel) for v, rel in rows if v[var] == 0]
        frames.append((var, lower, upper))
        pool = {}
        ok = True
        for v, rel in keep:
            ok = ok and add_row(v, rel)
        for lv, lrel in lower:
            if not ok:
                break
            for uv, urel in upper:
                comb = [(-uv[var]) * a + lv[var] * b for a, b in zip(lv, uv)]
                rel = GT if (lrel == GT or urel == GT) else GE
                if not add_row(comb, rel):
                    ok = False
                    break
        if not ok:
            return None
        if len(pool) > _ROW_CAP:
            raise FeasibilityBlowup(f"Fourier-Motzkin blowup: {len(pool)} rows")
        active.remove(var)

    # --- back substitution
    assignment: dict[int, Fraction] = {}

    def evaluate(vec) -> Fraction:
        return sum((Fraction(vec[k]) * assignment[k] for k in assignment if vec[k] != 0), start=Fraction(0))

    for var, lower, upper in reversed(frames):
        lo = hi = None
        lo_strict = hi_strict = False
        for v, rel in lower:
            rest = evaluate([x if k != var else 0 for k, x in enumerate(v)])
            bound = -rest / v[var]
            if lo is None or bound > lo:
                lo, lo_strict = bound, rel == GT
            elif bound == lo and rel == GT:
                lo_strict = True
        for v, rel in upper:
            rest = evaluate([x if k != var else 0 for k, x in enumerate(v)])
            bound = -rest / v[var]
            if hi is None or bound < hi:
                hi, hi_strict = bound, rel == GT
            elif bound == hi and rel == GT:
                hi_strict = True
        if lo is None and hi is None:
            val = Fraction(0)
        elif hi is None:
            val = lo + 1 if lo_strict else lo
        elif lo is None:
            val = hi - 1 if hi_strict else hi
        else:
            if lo < hi:
                val = (lo + hi) / 2
            elif lo == hi and not lo_strict and not hi_strict:
                val = lo
            else:
                raise AssertionError("strict_feasible: empty interval after FM claimed feasible")
        assignment[var] = val

    for pidx, prow in reversed(subs):
        val = -sum((prow[k] * assignment[k] for k in range(dim) if k != pidx and prow[k] != 0), start=Fraction(0))
        assignment[pidx] = val

    witness = primitive([assignment.get(k, Fraction(0)) for k in range(dim)])

    # exact verification against the original system
    for r in system.eq:
        if dot(r, witness) != 0:
            raise AssertionError("strict_feasible: witness violates equality")
    for r in system.ge:
        if dot(r, witness) < 0:
            raise AssertionError("strict_feasible: witness violates >= 0")
    for r in system.gt:
        if dot(r, witness) <= 0:
            raise AssertionError("strict_feasible: witness violates > 0")
    return witness
