"""Independent reference routes used to pin expected test values.

Nothing here shares code with the package under test. Group products run
over dictionary Cayley tables with slot permutations obtained by iterated
composition of the single-step shift, level-set components come from
scipy.ndimage labeling glued across the periodic seams, translation
symmetries come from an integrality condition on term frequencies, and
diagonal invariants come from sympy's Smith normal form.
"""

from __future__ import annotations

from fractions import Fraction
import itertools

import numpy as np
import scipy.ndimage as ndi


# ---------------------------------------------------------------------------
# finite groups as explicit dictionaries


class DictGroup:
    """A finite group stored as a plain multiplication dictionary.

    The constructor checks every group axiom exhaustively, so a table
    built here is trustworthy on its own terms before anything is
    compared against it.
    """

    def __init__(self, elements, mult, identity):
        self.elements = tuple(elements)
        self.mult = dict(mult)
        self.identity = identity
        self.inverse = {}
        for a in self.elements:
            for b in self.elements:
                if self.mult[(a, b)] == identity and self.mult[(b, a)] == identity:
                    self.inverse[a] = b
        self._validate()

    def _validate(self):
        els = self.elements
        if self.identity not in els:
            raise AssertionError("identity missing from element list")
        for a in els:
            if self.mult[(self.identity, a)] != a or self.mult[(a, self.identity)] != a:
                raise AssertionError("identity law fails")
            if a not in self.inverse:
                raise AssertionError("element without inverse")
            if {self.mult[(a, b)] for b in els} != set(els):
                raise AssertionError("row is not a permutation")
        for a in els:
            for b in els:
                ab = self.mult[(a, b)]
                for c in els:
                    if self.mult[(ab, c)] != self.mult[(a, self.mult[(b, c)])]:
                        raise AssertionError("associativity fails")


def cyclic_dict_group(k):
    els = tuple(range(k))
    mult = {(a, b): (a + b) % k for a in els for b in els}
    return DictGroup(els, mult, 0)


# ---------------------------------------------------------------------------
# wreath-style semidirect products over permutation tables


def _compose(p, q):
    """Permutation sending i to p[q[i]]."""
    return tuple(p[i] for i in q)


def _iterate(step, reps, slots):
    """step composed with itself reps times; negative reps invert."""
    ident = tuple(range(slots))
    if reps >= 0:
        base, count = step, reps
    else:
        base, count = tuple(step.index(i) for i in range(slots)), -reps
    out = ident
    for _ in range(count):
        out = _compose(out, base)
    return out


class WreathOracle:
    """Semidirect product (inner ** slots) acted on by slot permutations.

    Elements are (vector, outer) pairs. The permutation attached to each
    outer value is produced by repeated composition of the one-step shift
    and cross-checked against the closed-form index formula, so the two
    derivations guard each other.
    """

    def __init__(self, inner, slots, perm_for, outer_add, outer_neg,
                 outer_identity, outer_elements=None):
        self.inner = inner
        self.slots = slots
        self.perm_for = perm_for
        self.outer_add = outer_add
        self.outer_neg = outer_neg
        self.outer_identity = outer_identity
        self.outer_elements = outer_elements

    def multiply(self, x, y):
        gvec, a = x
        hvec, b = y
        perm = self.perm_for(b)
        vec = tuple(self.inner.mult[(gvec[perm[i]], hvec[i])]
                    for i in range(self.slots))
        return (vec, self.outer_add(a, b))

    def identity_element(self):
        return ((self.inner.identity,) * self.slots, self.outer_identity)

    def inverse(self, x):
        gvec, a = x
        b = self.outer_neg(a)
        perm = self.perm_for(b)
        vec = tuple(self.inner.inverse[gvec[perm[i]]] for i in range(self.slots))
        out = (vec, b)
        ident = self.identity_element()
        if self.multiply(x, out) != ident or self.multiply(out, x) != ident:
            raise AssertionError("oracle inverse failed its own check")
        return out

    def all_elements(self):
        if self.outer_elements is None:
            raise AssertionError("outer group is infinite")
        vecs = itertools.product(self.inner.elements, repeat=self.slots)
        return [(v, o) for v in vecs for o in self.outer_elements]

    def validate_finite(self, triples=2000, seed=11):
        """Group axioms on the full element set, sampling triples for
        associativity when the cube would be too large."""
        import random
        els = self.all_elements()
        ident = self.identity_element()
        for x in els:
            if self.multiply(ident, x) != x or self.multiply(x, ident) != x:
                raise AssertionError("identity law fails")
            self.inverse(x)
        rng = random.Random(seed)
        n = len(els)
        if n ** 3 <= triples:
            picks = itertools.product(els, repeat=3)
        else:
            picks = ((els[rng.randrange(n)], els[rng.randrange(n)],
                      els[rng.randrange(n)]) for _ in range(triples))
        for x, y, z in picks:
            left = self.multiply(self.multiply(x, y), z)
            right = self.multiply(x, self.multiply(y, z))
            if left != right:
                raise AssertionError("associativity fails")


def _single_shift(n):
    """One-step cyclic source-index shift on n slots."""
    return tuple((i + 1) % n for i in range(n))


def _perm_cache_1d(n):
    step = _single_shift(n)
    cache = {}

    def perm_for(b):
        if b not in cache:
            got = _iterate(step, b, n)
            direct = tuple((i + b) % n for i in range(n))
            if got != direct:
                raise AssertionError("shift table disagrees with formula")
            cache[b] = got
        return cache[b]

    return perm_for


def _perm_cache_2d(n, m):
    slots = n * m
    row_step = tuple(((i + 1) % n) * m + j
                     for i in range(n) for j in range(m))
    col_step = tuple(i * m + (j + 1) % m
                     for i in range(n) for j in range(m))
    if _compose(row_step, col_step) != _compose(col_step, row_step):
        raise AssertionError("row and column shifts must commute")
    cache = {}

    def perm_for(b):
        if b not in cache:
            b1, b2 = b
            got = _compose(_iterate(row_step, b1, slots),
                           _iterate(col_step, b2, slots))
            direct = tuple(((i + b1) % n) * m + (j + b2) % m
                           for i in range(n) for j in range(m))
            if got != direct:
                raise AssertionError("shift table disagrees with formula")
            cache[b] = got
        return cache[b]

    return perm_for


def wrz_oracle(inner, n):
    return WreathOracle(inner, n, _perm_cache_1d(n),
                        lambda a, b: a + b, lambda a: -a, 0)


def wrcyc_oracle(inner, n):
    return WreathOracle(inner, n, _perm_cache_1d(n),
                        lambda a, b: (a + b) % n, lambda a: (-a) % n, 0,
                        outer_elements=tuple(range(n)))


def wrz2_oracle(inner, n, m):
    return WreathOracle(inner, n * m, _perm_cache_2d(n, m),
                        lambda a, b: (a[0] + b[0], a[1] + b[1]),
                        lambda a: (-a[0], -a[1]), (0, 0))


def wrcycpair_oracle(inner, n, m):
    outer = tuple(itertools.product(range(n), range(m)))
    return WreathOracle(inner, n * m, _perm_cache_2d(n, m),
                        lambda a, b: ((a[0] + b[0]) % n, (a[1] + b[1]) % m),
                        lambda a: ((-a[0]) % n, (-a[1]) % m), (0, 0),
                        outer_elements=outer)


# ---------------------------------------------------------------------------
# level sets on the periodic grid via scipy labeling


def _glue_count(labels, pairs):
    """Number of classes after merging label ids across seam pairs."""
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    ids = set(int(v) for v in np.unique(labels) if v != 0)
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in ids})


def _periodic_components(mask, connectivity):
    """Component count of a boolean grid with both axes wrapped."""
    if not mask.any():
        return 0
    if connectivity == 8:
        structure = np.ones((3, 3), dtype=int)
    else:
        structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    labels, _ = ndi.label(mask, structure=structure)
    res0, res1 = mask.shape
    pairs = []
    offsets = (-1, 0, 1) if connectivity == 8 else (0,)
    for j in range(res1):
        a = labels[res0 - 1, j]
        if not a:
            continue
        for d in offsets:
            b = labels[0, (j + d) % res1]
            if b:
                pairs.append((int(a), int(b)))
    for i in range(res0):
        a = labels[i, res1 - 1]
        if not a:
            continue
        for d in offsets:
            b = labels[(i + d) % res0, 0]
            if b:
                pairs.append((int(a), int(b)))
    if connectivity == 8:
        corners = [((res0 - 1, res1 - 1), (0, 0)),
                   ((res0 - 1, 0), (0, res1 - 1))]
        for (i1, j1), (i2, j2) in corners:
            a, b = labels[i1, j1], labels[i2, j2]
            if a and b:
                pairs.append((int(a), int(b)))
    return _glue_count(labels, pairs)


def _cell_extrema(values):
    right = np.roll(values, -1, axis=0)
    up = np.roll(values, -1, axis=1)
    diag = np.roll(right, -1, axis=1)
    cmin = np.minimum(np.minimum(values, right), np.minimum(up, diag))
    cmax = np.maximum(np.maximum(values, right), np.maximum(up, diag))
    return cmin, cmax


def level_circle_count(values, level):
    """Number of connected components of the level set at a regular value,
    read off the cells whose corners straddle the level."""
    cmin, cmax = _cell_extrema(values)
    mask = (cmin <= level) & (cmax >= level)
    return _periodic_components(mask, connectivity=8)


def sublevel_component_count(values, level):
    """Connected regions where the sampled field sits below the level."""
    return _periodic_components(values < level, connectivity=4)


def superlevel_component_count(values, level):
    return _periodic_components(values > level, connectivity=4)


# ---------------------------------------------------------------------------
# translation symmetries from term frequencies


def translation_preserves(terms, a: Fraction, b: Fraction) -> bool:
    """A translation by (a, b) fixes every summand exactly when each
    frequency pair pairs with it to an integer."""
    for t in terms:
        if t.a == 0:
            continue
        phase = t.p * a + t.q * b
        if phase.denominator != 1:
            return False
    return True


def preserving_translations(terms, max_den=12):
    """All fixing translations whose coordinates have denominator at most
    max_den, as a sorted set of reduced fraction pairs."""
    found = set()
    for den in range(1, max_den + 1):
        for i in range(den):
            for j in range(den):
                a, b = Fraction(i, den), Fraction(j, den)
                if translation_preserves(terms, a, b):
                    found.add((a, b))
    return sorted(found)


# ---------------------------------------------------------------------------
# Smith normal form via sympy


def sympy_snf_diagonal(rows):
    """Nonzero diagonal invariants of an integer matrix, in divisibility
    order, computed by sympy."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form
    mat = Matrix(rows)
    if mat.rows == 0 or mat.cols == 0:
        return []
    snf = smith_normal_form(mat)
    out = []
    for i in range(min(snf.rows, snf.cols)):
        v = int(snf[i, i])
        if v:
            out.append(abs(v))
    return out
