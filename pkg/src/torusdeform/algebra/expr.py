"""Group expressions and element arithmetic.

A group expression is a small immutable syntax tree built from:

* ``Trivial``            the one-element group, element ``()``
* ``Cyclic(n)``          residues mod n, elements ``0..n-1``
* ``FreeAbelian(r)``     Z^r, elements are r-tuples of ints
* ``ScaledZ(m)``         the subgroup m*Z of Z, elements are multiples of m
* ``Atom(label, ...)``   a named leaf group, symbolic or assigned a finite
                         multiplication table
* ``Product(factors)``   direct product, elements are tuples
* ``WrZ(base, n)``       base^n semidirect Z, the integer shifts the n
                         coordinates cyclically
* ``WrCyc(base, n)``     base^n semidirect Z_n, same action with the shift
                         reduced mod n
* ``WrZ2(base, n, m)``   base^(n*m) semidirect Z^2, coordinates indexed by
                         (i mod n, j mod m), a pair (a,b) shifts both indexes
* ``WrCycPair(base,n,m)`` base^(n*m) semidirect (Z_n x Z_m), same action
                         with the pair reduced componentwise
* ``CentralQuotient(base, generator)``  quotient of ``base`` by the cyclic
                         central subgroup spanned by ``generator``

The wreath-type products all multiply the same way: the left element's
coordinate vector is shifted by the right element's outer part, multiplied
coordinatewise with the right vector, and the outer parts add,

    (g, a) * (g', a')  =  (shift(g, a') . g',  a + a')

with ``shift(g, a)[i] = g[(i + a) mod n]``.  The finite variants reduce the
outer sum; the index arithmetic is identical in all four cases.

Elements are plain Python data (ints, strings, nested tuples), so they can
be hashed, compared and serialized directly.  Elements of a central
quotient are stored as canonical representatives of their coset: the first
integer coordinate on which the generator is nonzero is reduced into
``[0, step)`` where ``step`` is the generator's value there.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Union

from ..errors import (
    NonCentralGarside,
    ShapeMismatch,
    UnassignedAtom,
)

SYMBOLIC_IDENTITY = "e"
_FORMAL_PREFIX = "g."


# ---------------------------------------------------------------------------
# finite multiplication tables for assigned atoms


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given by an explicit multiplication table.

    ``elements`` lists the element ids (any hashable, usually small ints),
    ``table[i][j]`` holds the index of ``elements[i] * elements[j]`` and
    ``identity_index`` points at the neutral element.
    """

    elements: tuple
    table: tuple
    identity_index: int

    @classmethod
    def from_mult(cls, elements, mult) -> "FiniteGroupTable":
        """Build and validate a table from a multiplication callable."""
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise ValueError("duplicate element ids")
        table = tuple(
            tuple(index[mult(a, b)] for b in elements) for a in elements
        )
        ident = None
        for i, e in enumerate(elements):
            if all(table[i][j] == j and table[j][i] == j
                   for j in range(len(elements))):
                ident = i
                break
        if ident is None:
            raise ValueError("no identity element")
        got = cls(elements, table, ident)
        got._validate()
        return got

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroupTable":
        return cls.from_mult(range(n), lambda a, b: (a + b) % n)

    def _validate(self) -> None:
        n = len(self.elements)
        for i in range(n):
            # every row and column is a permutation (Latin square)
            if sorted(self.table[i]) != list(range(n)):
                raise ValueError("multiplication table row is not a bijection")
            if sorted(r[i] for r in self.table) != list(range(n)):
                raise ValueError("multiplication table column is not a bijection")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]]:
                        raise ValueError("multiplication table is not associative")

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def _inverse(self) -> tuple:
        n = len(self.elements)
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == self.identity_index:
                    inv[i] = j
                    break
        return tuple(inv)

    @property
    def identity(self):
        return self.elements[self.identity_index]

    def mul(self, a, b):
        ia = self._index.get(a)
        ib = self._index.get(b)
        if ia is None or ib is None:
            raise ShapeMismatch(f"{a!r} or {b!r} is not in the atom's table")
        return self.elements[self.table[ia][ib]]

    def inv(self, a):
        ia = self._index.get(a)
        if ia is None:
            raise ShapeMismatch(f"{a!r} is not in the atom's table")
        return self.elements[self._inverse[ia]]

    def __len__(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# expression nodes


@dataclass(frozen=True)
class Trivial:
    pass


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("cyclic order must be >= 1")


@dataclass(frozen=True)
class FreeAbelian:
    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be >= 0")


@dataclass(frozen=True)
class ScaledZ:
    step: int

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("step must be >= 1")


@dataclass(frozen=True)
class Atom:
    label: str
    flavor: str = "S"
    assignment: Union[FiniteGroupTable, None] = field(default=None, compare=True)

    def __post_init__(self):
        if self.flavor not in ("S", "Delta", "G"):
            raise ValueError(f"unknown atom flavor {self.flavor!r}")


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class WrZ:
    base: "GroupExpr"
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("copy count must be >= 1")


@dataclass(frozen=True)
class WrCyc:
    base: "GroupExpr"
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("copy count must be >= 1")


@dataclass(frozen=True)
class WrZ2:
    base: "GroupExpr"
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("copy counts must be >= 1")


@dataclass(frozen=True)
class WrCycPair:
    base: "GroupExpr"
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("copy counts must be >= 1")


@dataclass(frozen=True)
class CentralQuotient:
    base: "GroupExpr"
    generator: object


GroupExpr = Union[
    Trivial, Cyclic, FreeAbelian, ScaledZ, Atom, Product,
    WrZ, WrCyc, WrZ2, WrCycPair, CentralQuotient,
]


def product(factors) -> GroupExpr:
    """Direct product with light normalization.

    Trivial factors are dropped, an empty product collapses to Trivial and
    a one-factor product collapses to that factor.
    """
    kept = tuple(f for f in factors if not isinstance(f, Trivial))
    if not kept:
        return Trivial()
    if len(kept) == 1:
        return kept[0]
    return Product(kept)


def central_quotient(base: GroupExpr, generator) -> CentralQuotient:
    """Quotient of ``base`` by the central subgroup spanned by ``generator``.

    The generator must have infinite order (some unbounded integer
    coordinate nonzero) and commute with all generators of ``base``.
    """
    check_shape(base, generator)
    if _dist_slot(base, generator) is None:
        raise NonCentralGarside(
            "quotient generator has finite order (no nonzero Z coordinate)")
    if not is_central(base, generator):
        raise NonCentralGarside("quotient generator is not central in the base")
    return CentralQuotient(base, generator)


# ---------------------------------------------------------------------------
# integer coordinate slots
#
# A slot is an access path into the element data: a tuple of indexes.  The
# slots of an expression enumerate every unbounded-Z integer appearing in
# its elements, in a fixed left-to-right order.


def _int_slots(expr: GroupExpr) -> tuple:
    if isinstance(expr, FreeAbelian):
        return tuple((i,) for i in range(expr.rank))
    if isinstance(expr, ScaledZ):
        return ((),)
    if isinstance(expr, Product):
        out = []
        for i, f in enumerate(expr.factors):
            out.extend((i,) + s for s in _int_slots(f))
        return tuple(out)
    if isinstance(expr, WrZ):
        out = [(0, i) + s for i in range(expr.n) for s in _int_slots(expr.base)]
        out.append((1,))
        return tuple(out)
    if isinstance(expr, WrCyc):
        return tuple((0, i) + s
                     for i in range(expr.n) for s in _int_slots(expr.base))
    if isinstance(expr, WrZ2):
        out = [(0, k) + s
               for k in range(expr.n * expr.m) for s in _int_slots(expr.base)]
        out.append((1, 0))
        out.append((1, 1))
        return tuple(out)
    if isinstance(expr, WrCycPair):
        return tuple((0, k) + s
                     for k in range(expr.n * expr.m) for s in _int_slots(expr.base))
    if isinstance(expr, CentralQuotient):
        return _int_slots(expr.base)
    return ()


def _get_slot(el, slot):
    for i in slot:
        el = el[i]
    return el


@lru_cache(maxsize=None)
def _dist_slot(expr: GroupExpr, generator) -> Union[tuple, None]:
    """First integer slot where ``generator`` is nonzero, with its value."""
    for slot in _int_slots(expr):
        v = _get_slot(generator, slot)
        if v != 0:
            return (slot, v)
    return None


def free_rank(expr: GroupExpr) -> int:
    """Number of unbounded Z coordinates in elements of ``expr``."""
    if isinstance(expr, CentralQuotient):
        return free_rank(expr.base) - 1
    return len(_int_slots(expr))


# ---------------------------------------------------------------------------
# identity / shape


def identity(expr: GroupExpr):
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, Cyclic):
        return 0
    if isinstance(expr, FreeAbelian):
        return (0,) * expr.rank
    if isinstance(expr, ScaledZ):
        return 0
    if isinstance(expr, Atom):
        if expr.assignment is not None:
            return expr.assignment.identity
        return SYMBOLIC_IDENTITY
    if isinstance(expr, Product):
        return tuple(identity(f) for f in expr.factors)
    if isinstance(expr, (WrZ, WrCyc)):
        return ((identity(expr.base),) * expr.n, 0)
    if isinstance(expr, (WrZ2, WrCycPair)):
        return ((identity(expr.base),) * (expr.n * expr.m), (0, 0))
    if isinstance(expr, CentralQuotient):
        return identity(expr.base)
    raise TypeError(f"not a group expression: {expr!r}")


def formal_generator(atom: Atom) -> str:
    """A symbolic non-identity element of an unassigned atom."""
    return _FORMAL_PREFIX + atom.label


def check_shape(expr: GroupExpr, el) -> None:
    """Raise ShapeMismatch unless ``el`` is a well-formed element of ``expr``."""
    if isinstance(expr, Trivial):
        if el != ():
            raise ShapeMismatch(f"trivial group element must be (), got {el!r}")
    elif isinstance(expr, Cyclic):
        if not isinstance(el, int) or not (0 <= el < expr.n):
            raise ShapeMismatch(f"expected residue mod {expr.n}, got {el!r}")
    elif isinstance(expr, FreeAbelian):
        if (not isinstance(el, tuple) or len(el) != expr.rank
                or not all(isinstance(v, int) for v in el)):
            raise ShapeMismatch(f"expected {expr.rank}-tuple of ints, got {el!r}")
    elif isinstance(expr, ScaledZ):
        if not isinstance(el, int) or el % expr.step != 0:
            raise ShapeMismatch(
                f"expected a multiple of {expr.step}, got {el!r}")
    elif isinstance(expr, Atom):
        if expr.assignment is not None:
            if el not in expr.assignment._index:
                raise ShapeMismatch(
                    f"{el!r} is not an element of atom {expr.label}")
        else:
            if el != SYMBOLIC_IDENTITY and not (
                    isinstance(el, str) and el.startswith(_FORMAL_PREFIX)):
                raise ShapeMismatch(
                    f"symbolic atom {expr.label} admits only 'e' and formal "
                    f"generators, got {el!r}")
    elif isinstance(expr, Product):
        if not isinstance(el, tuple) or len(el) != len(expr.factors):
            raise ShapeMismatch(
                f"expected {len(expr.factors)}-tuple, got {el!r}")
        for f, x in zip(expr.factors, el):
            check_shape(f, x)
    elif isinstance(expr, (WrZ, WrCyc)):
        if (not isinstance(el, tuple) or len(el) != 2
                or not isinstance(el[0], tuple) or len(el[0]) != expr.n):
            raise ShapeMismatch(
                f"expected ({expr.n}-tuple, int), got {el!r}")
        for x in el[0]:
            check_shape(expr.base, x)
        a = el[1]
        if not isinstance(a, int):
            raise ShapeMismatch(f"outer part must be an int, got {a!r}")
        if isinstance(expr, WrCyc) and not (0 <= a < expr.n):
            raise ShapeMismatch(f"outer residue out of range mod {expr.n}: {a}")
    elif isinstance(expr, (WrZ2, WrCycPair)):
        nm = expr.n * expr.m
        if (not isinstance(el, tuple) or len(el) != 2
                or not isinstance(el[0], tuple) or len(el[0]) != nm
                or not isinstance(el[1], tuple) or len(el[1]) != 2):
            raise ShapeMismatch(
                f"expected ({nm}-tuple, (int, int)), got {el!r}")
        for x in el[0]:
            check_shape(expr.base, x)
        a, b = el[1]
        if not isinstance(a, int) or not isinstance(b, int):
            raise ShapeMismatch(f"outer pair must be ints, got {el[1]!r}")
        if isinstance(expr, WrCycPair):
            if not (0 <= a < expr.n and 0 <= b < expr.m):
                raise ShapeMismatch(
                    f"outer residues out of range mod ({expr.n},{expr.m}): {el[1]}")
    elif isinstance(expr, CentralQuotient):
        check_shape(expr.base, el)
    else:
        raise TypeError(f"not a group expression: {expr!r}")


# ---------------------------------------------------------------------------
# multiplication, inversion, powers


def _atom_mul(expr: Atom, a, b):
    if expr.assignment is not None:
        return expr.assignment.mul(a, b)
    if a == SYMBOLIC_IDENTITY:
        return b
    if b == SYMBOLIC_IDENTITY:
        return a
    raise UnassignedAtom(
        f"cannot multiply two formal elements of symbolic atom {expr.label}")


def _atom_inv(expr: Atom, a):
    if expr.assignment is not None:
        return expr.assignment.inv(a)
    if a == SYMBOLIC_IDENTITY:
        return a
    raise UnassignedAtom(
        f"cannot invert a formal element of symbolic atom {expr.label}")


def multiply(expr: GroupExpr, a, b):
    """Product of two elements of ``expr``."""
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, Cyclic):
        return (a + b) % expr.n
    if isinstance(expr, FreeAbelian):
        return tuple(x + y for x, y in zip(a, b))
    if isinstance(expr, ScaledZ):
        return a + b
    if isinstance(expr, Atom):
        return _atom_mul(expr, a, b)
    if isinstance(expr, Product):
        return tuple(multiply(f, x, y) for f, x, y in zip(expr.factors, a, b))
    if isinstance(expr, (WrZ, WrCyc)):
        g, av = a
        h, bv = b
        n = expr.n
        base = expr.base
        vec = tuple(multiply(base, g[(i + bv) % n], h[i]) for i in range(n))
        outer = av + bv
        if isinstance(expr, WrCyc):
            outer %= n
        return (vec, outer)
    if isinstance(expr, (WrZ2, WrCycPair)):
        g, (a1, a2) = a
        h, (b1, b2) = b
        n, m = expr.n, expr.m
        base = expr.base
        vec = tuple(
            multiply(base, g[((i + b1) % n) * m + ((j + b2) % m)], h[i * m + j])
            for i in range(n) for j in range(m)
        )
        o1, o2 = a1 + b1, a2 + b2
        if isinstance(expr, WrCycPair):
            o1 %= n
            o2 %= m
        return (vec, (o1, o2))
    if isinstance(expr, CentralQuotient):
        return canonical(expr, multiply(expr.base, a, b))
    raise TypeError(f"not a group expression: {expr!r}")


def invert(expr: GroupExpr, a):
    """Inverse of an element of ``expr``."""
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, Cyclic):
        return (-a) % expr.n
    if isinstance(expr, FreeAbelian):
        return tuple(-x for x in a)
    if isinstance(expr, ScaledZ):
        return -a
    if isinstance(expr, Atom):
        return _atom_inv(expr, a)
    if isinstance(expr, Product):
        return tuple(invert(f, x) for f, x in zip(expr.factors, a))
    if isinstance(expr, (WrZ, WrCyc)):
        g, av = a
        n = expr.n
        vec = tuple(invert(expr.base, g[(i - av) % n]) for i in range(n))
        outer = -av
        if isinstance(expr, WrCyc):
            outer %= n
        return (vec, outer)
    if isinstance(expr, (WrZ2, WrCycPair)):
        g, (a1, a2) = a
        n, m = expr.n, expr.m
        vec = tuple(
            invert(expr.base, g[((i - a1) % n) * m + ((j - a2) % m)])
            for i in range(n) for j in range(m)
        )
        o1, o2 = -a1, -a2
        if isinstance(expr, WrCycPair):
            o1 %= n
            o2 %= m
        return (vec, (o1, o2))
    if isinstance(expr, CentralQuotient):
        return canonical(expr, invert(expr.base, a))
    raise TypeError(f"not a group expression: {expr!r}")


def power(expr: GroupExpr, a, k: int):
    """k-th power of an element (k may be negative)."""
    if k < 0:
        return power(expr, invert(expr, a), -k)
    result = identity(expr)
    sq = a
    while k:
        if k & 1:
            result = multiply(expr, result, sq)
        sq = multiply(expr, sq, sq)
        k >>= 1
    return result


@lru_cache(maxsize=None)
def _gen_power(expr: CentralQuotient, k: int):
    return power(expr.base, expr.generator, k)


def canonical(expr: GroupExpr, el):
    """Canonical form of an element.

    For a central quotient the representative is shifted by a power of the
    generator until the first integer coordinate on which the generator is
    nonzero falls in ``[0, step)``.  Other expressions recurse so that
    quotient factors nested inside products are canonicalized too.
    """
    if isinstance(expr, CentralQuotient):
        el = canonical(expr.base, el)
        slot, step = _dist_slot(expr.base, expr.generator)
        v = _get_slot(el, slot)
        # pick k so that v - k*step lands in [0, |step|)
        k = v // step if step > 0 else -(v // -step)
        if k:
            el = multiply(expr.base, el, _gen_power(expr, -k))
        return el
    if isinstance(expr, Product):
        return tuple(canonical(f, x) for f, x in zip(expr.factors, el))
    if isinstance(expr, (WrZ, WrCyc, WrZ2, WrCycPair)):
        vec, outer = el
        return (tuple(canonical(expr.base, x) for x in vec), outer)
    return el


def elements_equal(expr: GroupExpr, a, b) -> bool:
    return canonical(expr, a) == canonical(expr, b)


# ---------------------------------------------------------------------------
# generators and centrality


def _embed_product(factors, i, el):
    return tuple(el if j == i else identity(f)
                 for j, f in enumerate(factors))


def generators(expr: GroupExpr) -> list:
    """A finite generating set (for quotients, images of base generators)."""
    if isinstance(expr, Trivial):
        return []
    if isinstance(expr, Cyclic):
        return [1] if expr.n > 1 else []
    if isinstance(expr, FreeAbelian):
        return [tuple(1 if j == i else 0 for j in range(expr.rank))
                for i in range(expr.rank)]
    if isinstance(expr, ScaledZ):
        return [expr.step]
    if isinstance(expr, Atom):
        if expr.assignment is not None:
            ident = expr.assignment.identity
            return [e for e in expr.assignment.elements if e != ident]
        return [formal_generator(expr)]
    if isinstance(expr, Product):
        out = []
        for i, f in enumerate(expr.factors):
            for g in generators(f):
                out.append(_embed_product(expr.factors, i, g))
        return out
    if isinstance(expr, (WrZ, WrCyc)):
        e = identity(expr.base)
        out = []
        for g in generators(expr.base):
            out.append(((g,) + (e,) * (expr.n - 1), 0))
        if not (isinstance(expr, WrCyc) and expr.n == 1):
            out.append(((e,) * expr.n, 1))
        return out
    if isinstance(expr, (WrZ2, WrCycPair)):
        e = identity(expr.base)
        nm = expr.n * expr.m
        out = []
        for g in generators(expr.base):
            out.append(((g,) + (e,) * (nm - 1), (0, 0)))
        if not (isinstance(expr, WrCycPair) and expr.n == 1):
            out.append(((e,) * nm, (1, 0)))
        if not (isinstance(expr, WrCycPair) and expr.m == 1):
            out.append(((e,) * nm, (0, 1)))
        return out
    if isinstance(expr, CentralQuotient):
        seen = []
        for g in generators(expr.base):
            c = canonical(expr, g)
            if c not in seen:
                seen.append(c)
        return seen
    raise TypeError(f"not a group expression: {expr!r}")


def is_central(expr: GroupExpr, el) -> bool:
    """True when ``el`` commutes with every generator of ``expr``.

    With symbolic atoms the check runs on formal generators; it raises
    UnassignedAtom only if a product of two formal elements would be
    needed, which cannot happen when ``el`` carries identity atom slots.
    """
    for g in generators(expr):
        if multiply(expr, el, g) != multiply(expr, g, el):
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration


def window_size(expr: GroupExpr, trunc: int) -> int:
    """Number of elements enumerate_truncated will produce (an upper bound
    for central quotients)."""
    if isinstance(expr, Trivial):
        return 1
    if isinstance(expr, Cyclic):
        return expr.n
    if isinstance(expr, FreeAbelian):
        return (2 * trunc + 1) ** expr.rank
    if isinstance(expr, ScaledZ):
        return 2 * (trunc // expr.step) + 1
    if isinstance(expr, Atom):
        if expr.assignment is None:
            raise UnassignedAtom(
                f"cannot enumerate symbolic atom {expr.label}")
        return len(expr.assignment)
    if isinstance(expr, Product):
        out = 1
        for f in expr.factors:
            out *= window_size(f, trunc)
        return out
    if isinstance(expr, WrZ):
        return window_size(expr.base, trunc) ** expr.n * (2 * trunc + 1)
    if isinstance(expr, WrCyc):
        return window_size(expr.base, trunc) ** expr.n * expr.n
    if isinstance(expr, WrZ2):
        return (window_size(expr.base, trunc) ** (expr.n * expr.m)
                * (2 * trunc + 1) ** 2)
    if isinstance(expr, WrCycPair):
        return (window_size(expr.base, trunc) ** (expr.n * expr.m)
                * expr.n * expr.m)
    if isinstance(expr, CentralQuotient):
        return window_size(expr.base, trunc)
    raise TypeError(f"not a group expression: {expr!r}")


def iter_window(expr: GroupExpr, trunc: int):
    """Iterate elements whose integer coordinates all lie in [-trunc, trunc].

    Finite coordinates (residues, atom elements) run over their full range.
    For central quotients the canonical representatives are deduplicated,
    so the iteration may be shorter than ``window_size`` suggests.
    """
    if isinstance(expr, Trivial):
        yield ()
    elif isinstance(expr, Cyclic):
        yield from range(expr.n)
    elif isinstance(expr, FreeAbelian):
        rng = range(-trunc, trunc + 1)
        for v in itertools.product(rng, repeat=expr.rank):
            yield v
    elif isinstance(expr, ScaledZ):
        k = trunc // expr.step
        for i in range(-k, k + 1):
            yield i * expr.step
    elif isinstance(expr, Atom):
        if expr.assignment is None:
            raise UnassignedAtom(
                f"cannot enumerate symbolic atom {expr.label}")
        yield from expr.assignment.elements
    elif isinstance(expr, Product):
        pools = [list(iter_window(f, trunc)) for f in expr.factors]
        yield from itertools.product(*pools)
    elif isinstance(expr, WrZ):
        pool = list(iter_window(expr.base, trunc))
        for vec in itertools.product(pool, repeat=expr.n):
            for a in range(-trunc, trunc + 1):
                yield (vec, a)
    elif isinstance(expr, WrCyc):
        pool = list(iter_window(expr.base, trunc))
        for vec in itertools.product(pool, repeat=expr.n):
            for a in range(expr.n):
                yield (vec, a)
    elif isinstance(expr, WrZ2):
        pool = list(iter_window(expr.base, trunc))
        rng = range(-trunc, trunc + 1)
        for vec in itertools.product(pool, repeat=expr.n * expr.m):
            for a in rng:
                for b in rng:
                    yield (vec, (a, b))
    elif isinstance(expr, WrCycPair):
        pool = list(iter_window(expr.base, trunc))
        for vec in itertools.product(pool, repeat=expr.n * expr.m):
            for a in range(expr.n):
                for b in range(expr.m):
                    yield (vec, (a, b))
    elif isinstance(expr, CentralQuotient):
        seen = set()
        for x in iter_window(expr.base, trunc):
            c = canonical(expr, x)
            if c not in seen:
                seen.add(c)
                yield c
    else:
        raise TypeError(f"not a group expression: {expr!r}")


def enumerate_truncated(expr: GroupExpr, trunc: int) -> list:
    """Deterministically ordered list of the truncation window."""
    return sorted(iter_window(expr, trunc), key=repr)


def in_window(expr: GroupExpr, el, trunc: int) -> bool:
    """True when every integer coordinate of ``el`` lies in [-trunc, trunc]."""
    return all(abs(_get_slot(el, s)) <= trunc for s in _int_slots(expr))


def random_element(expr: GroupExpr, trunc: int, rng: random.Random):
    """Uniform draw from the truncation window (canonicalized for quotients)."""
    if isinstance(expr, Trivial):
        return ()
    if isinstance(expr, Cyclic):
        return rng.randrange(expr.n)
    if isinstance(expr, FreeAbelian):
        return tuple(rng.randint(-trunc, trunc) for _ in range(expr.rank))
    if isinstance(expr, ScaledZ):
        k = trunc // expr.step
        return rng.randint(-k, k) * expr.step
    if isinstance(expr, Atom):
        if expr.assignment is None:
            raise UnassignedAtom(
                f"cannot sample from symbolic atom {expr.label}")
        return rng.choice(expr.assignment.elements)
    if isinstance(expr, Product):
        return tuple(random_element(f, trunc, rng) for f in expr.factors)
    if isinstance(expr, WrZ):
        vec = tuple(random_element(expr.base, trunc, rng) for _ in range(expr.n))
        return (vec, rng.randint(-trunc, trunc))
    if isinstance(expr, WrCyc):
        vec = tuple(random_element(expr.base, trunc, rng) for _ in range(expr.n))
        return (vec, rng.randrange(expr.n))
    if isinstance(expr, WrZ2):
        nm = expr.n * expr.m
        vec = tuple(random_element(expr.base, trunc, rng) for _ in range(nm))
        return (vec, (rng.randint(-trunc, trunc), rng.randint(-trunc, trunc)))
    if isinstance(expr, WrCycPair):
        nm = expr.n * expr.m
        vec = tuple(random_element(expr.base, trunc, rng) for _ in range(nm))
        return (vec, (rng.randrange(expr.n), rng.randrange(expr.m)))
    if isinstance(expr, CentralQuotient):
        return canonical(expr, random_element(expr.base, trunc, rng))
    raise TypeError(f"not a group expression: {expr!r}")
