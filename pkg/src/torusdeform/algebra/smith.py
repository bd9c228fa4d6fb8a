"""Smith normal form and finite subgroups of (Q/Z)^2.

``smith_pair`` normalizes a finite subgroup of the torus translation group
to the pair ``(n, m)`` with the subgroup isomorphic to Z_n x Z_{n*m} and
n dividing n*m.  ``smith_basis`` produces a matching pair of generators.
``snf_diagonal`` is a small integer Smith-form routine used for lattice
bookkeeping; tests cross-check it against an independent implementation.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..errors import InfiniteSubgroup

_MAX_DENOMINATOR = 4096
_FLOAT_TOL = 1e-9


def as_torus_fraction(x) -> Fraction:
    """Coerce a coordinate to an exact Fraction in [0, 1).

    Floats must be within 1e-9 of a fraction with denominator <= 4096,
    otherwise the value cannot belong to a finite translation subgroup.
    """
    if isinstance(x, Fraction):
        f = x
    elif isinstance(x, int):
        f = Fraction(x)
    elif isinstance(x, float):
        f = Fraction(x).limit_denominator(_MAX_DENOMINATOR)
        if abs(f - Fraction(x)) > _FLOAT_TOL:
            raise InfiniteSubgroup(
                f"{x!r} is not close to a rational with small denominator")
    elif isinstance(x, tuple) and len(x) == 2:
        f = Fraction(x[0], x[1])
    else:
        raise InfiniteSubgroup(f"cannot interpret {x!r} as a rational")
    return f % 1


def _coerce_pairs(generators):
    return [(as_torus_fraction(a), as_torus_fraction(b))
            for a, b in generators]


def subgroup_elements(generators) -> list:
    """All elements of the subgroup of (Q/Z)^2 spanned by ``generators``,
    sorted, identity first in the sort order."""
    gens = _coerce_pairs(generators)
    elems = {(Fraction(0), Fraction(0))}
    frontier = list(elems)
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                s = ((e[0] + g[0]) % 1, (e[1] + g[1]) % 1)
                if s not in elems:
                    elems.add(s)
                    nxt.append(s)
        frontier = nxt
        if len(elems) > _MAX_DENOMINATOR ** 2:
            raise InfiniteSubgroup("closure did not stabilize")
    return sorted(elems)


def _order(e) -> int:
    return (e[0].denominator * e[1].denominator
            // gcd(e[0].denominator, e[1].denominator))


def smith_pair(generators) -> tuple:
    """Invariant factors of the subgroup, returned as (n, m) with the
    subgroup isomorphic to Z_n x Z_{n*m}."""
    elems = subgroup_elements(generators)
    size = len(elems)
    d2 = 1
    for e in elems:
        o = _order(e)
        d2 = d2 * o // gcd(d2, o)
    if size % d2 != 0:
        raise InfiniteSubgroup("subgroup order is not a multiple of its exponent")
    d1 = size // d2
    if d1 == 0 or d2 % d1 != 0:
        raise InfiniteSubgroup(
            f"invariant factors {d1}, {d2} do not divide (rank > 2?)")
    return (d1, d2 // d1)


def _span(e) -> set:
    out = set()
    cur = (Fraction(0), Fraction(0))
    for _ in range(_order(e)):
        out.add(cur)
        cur = ((cur[0] + e[0]) % 1, (cur[1] + e[1]) % 1)
    return out


def smith_basis(generators) -> tuple:
    """Generators (g1, g2) with orders (n, n*m) that span the subgroup and
    meet only at the identity.  g1 is the identity when n == 1."""
    elems = subgroup_elements(generators)
    n, m = smith_pair(generators)
    d1, d2 = n, n * m
    g2 = next(e for e in elems if _order(e) == d2)
    span2 = _span(g2)
    if d1 == 1:
        return ((Fraction(0), Fraction(0)), g2)
    for g1 in elems:
        if _order(g1) != d1:
            continue
        span1 = _span(g1)
        if len(span1 & span2) == 1:
            return (g1, g2)
    raise InfiniteSubgroup("no complementary generator found")


# ---------------------------------------------------------------------------
# integer Smith normal form


def snf_diagonal(rows) -> list:
    """Nonzero diagonal entries of the Smith normal form of an integer
    matrix (each dividing the next)."""
    mat = [list(map(int, r)) for r in rows]
    if not mat or not mat[0]:
        return []
    nr, nc = len(mat), len(mat[0])
    diag = []
    top = 0
    while top < min(nr, nc):
        # find a pivot with the smallest nonzero magnitude
        pivot = None
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                v = abs(mat[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        mat[top], mat[pi] = mat[pi], mat[top]
        for r in mat:
            r[top], r[pj] = r[pj], r[top]
        # clear the pivot row and column
        dirty = False
        p = mat[top][top]
        for i in range(top + 1, nr):
            if mat[i][top]:
                q = mat[i][top] // p
                for j in range(nc):
                    mat[i][j] -= q * mat[top][j]
                if mat[i][top]:
                    dirty = True
        for j in range(top + 1, nc):
            if mat[top][j]:
                q = mat[top][j] // p
                for i in range(nr):
                    mat[i][j] -= q * mat[i][top]
                if mat[top][j]:
                    dirty = True
        if dirty:
            continue
        # ensure the pivot divides every remaining entry
        p = abs(mat[top][top])
        offender = None
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if mat[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(nc):
                mat[top][j] += mat[offender][j]
            continue
        diag.append(p)
        top += 1
    # normalize the divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            g = gcd(a, b)
            diag[i], diag[j] = g, a * b // g
    return sorted(diag)
