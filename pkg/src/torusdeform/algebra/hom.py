"""Homomorphisms between group expressions and exactness checking.

A homomorphism carries its source and target expressions plus a rule
describing how elements map.  Rules are small declarative records rather
than bare callables so that reports can serialize them:

* ``LeafMap``         structure-preserving recursion: equal shapes map
                      coordinatewise, unbounded outer parts reduce onto
                      finite ones, named leaves map through explicit
                      tables, and block factors of the form
                      (inner^m x mZ) include into inner-wreath-Z groups.
* ``ModReduce``       the same recursion with no leaf tables; used for
                      reducing integer outer parts mod n.
* ``ZeroOuterEmbed``  include a product of ``copies`` factors as the
                      coordinate vector of a wreath-type group, with outer
                      part zero.
* ``Include``         send the generators of a free abelian or cyclic
                      source to chosen target elements.
* ``IncludePair``     on a source ``(free abelian) x D``: apply a section
                      homomorphism to the second factor and multiply by
                      powers of the chosen images of the first factor.
* ``Project``         projection of a direct product onto one factor.

``check_exact`` decides exactness of a two-arrow sequence inside a finite
truncation window by exhaustive enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import ShapeMismatch, WindowTooSmall
from . import expr as ex
from .grammar import format_element


def make_atom_maps(mapping: dict) -> tuple:
    """Freeze {label: {src: dst}} into a hashable, ordered structure."""
    out = []
    for label in sorted(mapping):
        pairs = tuple(sorted(mapping[label].items(), key=repr))
        out.append((label, pairs))
    return tuple(out)


def _lookup_atom_map(atom_maps: tuple, label: str) -> Union[dict, None]:
    for lab, pairs in atom_maps:
        if lab == label:
            return dict(pairs)
    return None


@dataclass(frozen=True)
class LeafMap:
    atom_maps: tuple = ()

    def apply(self, source, target, el):
        return _structural(source, target, el, self.atom_maps)

    def descriptor(self) -> dict:
        return {"rule": "leaf_map", "atoms": _atoms_desc(self.atom_maps)}


@dataclass(frozen=True)
class ModReduce:
    def apply(self, source, target, el):
        return _structural(source, target, el, ())

    def descriptor(self) -> dict:
        return {"rule": "mod_reduce"}


@dataclass(frozen=True)
class ZeroOuterEmbed:
    copies: int
    atom_maps: tuple = ()

    def apply(self, source, target, el):
        if isinstance(source, ex.CentralQuotient):
            # act on the canonical representative
            el = ex.canonical(source, el)
            source = source.base
        quot = None
        if isinstance(target, ex.CentralQuotient):
            quot = target
            target = target.base
        if not isinstance(target, (ex.WrZ, ex.WrCyc, ex.WrZ2, ex.WrCycPair)):
            raise ShapeMismatch(
                f"zero-outer embedding needs a wreath-type target")
        base = target.base
        if isinstance(source, ex.Trivial):
            out = ex.identity(target)
        else:
            if self.copies == 1:
                vec = (_structural(source, base, el, self.atom_maps),)
            else:
                if (not isinstance(source, ex.Product)
                        or len(source.factors) != self.copies):
                    raise ShapeMismatch(
                        f"expected a product of {self.copies} factors, "
                        f"got {type(source).__name__}")
                vec = tuple(
                    _structural(f, base, x, self.atom_maps)
                    for f, x in zip(source.factors, el))
            if isinstance(target, (ex.WrZ, ex.WrCyc)):
                out = (vec, 0)
            else:
                out = (vec, (0, 0))
        if quot is not None:
            out = ex.canonical(quot, out)
        return out

    def descriptor(self) -> dict:
        return {"rule": "zero_outer_embed", "copies": self.copies,
                "atoms": _atoms_desc(self.atom_maps)}


@dataclass(frozen=True)
class Include:
    images: tuple

    def apply(self, source, target, el):
        if isinstance(source, ex.Cyclic):
            exponents = (el,)
        elif isinstance(source, ex.FreeAbelian):
            exponents = el
        else:
            raise ShapeMismatch(
                "include rule needs a free abelian or cyclic source")
        if len(exponents) != len(self.images):
            raise ShapeMismatch(
                f"{len(self.images)} images for {len(exponents)} exponents")
        out = ex.identity(target)
        for img, k in zip(self.images, exponents):
            out = ex.multiply(target, out, ex.power(target, img, k))
        return out

    def descriptor(self) -> dict:
        return {"rule": "include",
                "images": [format_element(i) for i in self.images]}


@dataclass(frozen=True)
class IncludePair:
    images: tuple
    section: "Homomorphism"

    def apply(self, source, target, el):
        if not isinstance(source, ex.Product) or len(source.factors) != 2:
            raise ShapeMismatch("include-pair needs a two-factor source")
        lattice, d = el
        out = hom_apply(self.section, d)
        for img, k in zip(self.images, lattice):
            out = ex.multiply(target, out, ex.power(target, img, k))
        return out

    def descriptor(self) -> dict:
        return {"rule": "include_pair",
                "images": [format_element(i) for i in self.images],
                "section": self.section.rule.descriptor()}


@dataclass(frozen=True)
class Project:
    index: int

    def apply(self, source, target, el):
        if not isinstance(source, ex.Product):
            raise ShapeMismatch("project rule needs a product source")
        return el[self.index]

    def descriptor(self) -> dict:
        return {"rule": "project", "index": self.index}


Rule = Union[LeafMap, ModReduce, ZeroOuterEmbed, Include, IncludePair, Project]


@dataclass(frozen=True)
class Homomorphism:
    source: ex.GroupExpr
    target: ex.GroupExpr
    rule: Rule
    name: str = ""

    def __call__(self, el):
        return hom_apply(self, el)


def hom_apply(h: Homomorphism, el):
    """Apply a homomorphism to an element (shapes checked on both ends)."""
    ex.check_shape(h.source, el)
    out = h.rule.apply(h.source, h.target, el)
    ex.check_shape(h.target, out)
    return out


def _atoms_desc(atom_maps: tuple) -> dict:
    return {label: [[repr(s), repr(d)] for s, d in pairs]
            for label, pairs in atom_maps}


# ---------------------------------------------------------------------------
# the structural recursion shared by LeafMap / ModReduce / ZeroOuterEmbed


def _structural(s, t, el, atom_maps):
    # quotients: act on representatives, land in canonical form
    if isinstance(s, ex.CentralQuotient):
        return _structural(s.base, t, ex.canonical(s, el), atom_maps)
    if isinstance(t, ex.CentralQuotient):
        return ex.canonical(t, _structural(s, t.base, el, atom_maps))
    if isinstance(s, ex.Trivial):
        return ex.identity(t)
    if isinstance(t, ex.Trivial):
        return ()
    if isinstance(s, ex.Atom) and isinstance(t, ex.Atom):
        return _map_atom(s, t, el, atom_maps)
    if isinstance(s, ex.Cyclic) and isinstance(t, ex.Cyclic):
        if s.n % t.n != 0:
            raise ShapeMismatch(f"no reduction Z_{s.n} -> Z_{t.n}")
        return el % t.n
    if isinstance(s, ex.FreeAbelian) and isinstance(t, ex.FreeAbelian):
        if s.rank != t.rank:
            raise ShapeMismatch("free abelian ranks differ")
        return el
    if isinstance(s, ex.ScaledZ) and isinstance(t, ex.ScaledZ):
        if s.step != t.step:
            raise ShapeMismatch("scaled Z steps differ")
        return el
    # mZ includes into (inner wr Z) as the outer coordinate when the copy
    # count equals the step
    if isinstance(s, ex.ScaledZ) and isinstance(t, ex.WrZ):
        if t.n != s.step:
            raise ShapeMismatch(
                f"step {s.step} does not match copy count {t.n}")
        return ((ex.identity(t.base),) * t.n, el)
    # (inner^m x mZ) includes into (base wr Z) blockwise
    if (isinstance(s, ex.Product) and len(s.factors) == 2
            and isinstance(s.factors[1], ex.ScaledZ)
            and isinstance(t, ex.WrZ)
            and t.n == s.factors[1].step
            and (t.n == 1 or (isinstance(s.factors[0], ex.Product)
                              and len(s.factors[0].factors) == t.n))):
        pwr, v = el
        if t.n == 1:
            vec = (_structural(s.factors[0], t.base, pwr, atom_maps),)
        else:
            vec = tuple(
                _structural(f, t.base, x, atom_maps)
                for f, x in zip(s.factors[0].factors, pwr))
        return (vec, v)
    if isinstance(s, ex.Product) and isinstance(t, ex.Product):
        if len(s.factors) != len(t.factors):
            raise ShapeMismatch("product arities differ")
        return tuple(
            _structural(f, g, x, atom_maps)
            for f, g, x in zip(s.factors, t.factors, el))
    if isinstance(s, (ex.WrZ, ex.WrCyc)) and isinstance(t, (ex.WrZ, ex.WrCyc)):
        if s.n != t.n:
            raise ShapeMismatch("copy counts differ")
        vec, outer = el
        vec = tuple(_structural(s.base, t.base, x, atom_maps) for x in vec)
        if isinstance(t, ex.WrCyc):
            outer %= t.n
        elif isinstance(s, ex.WrCyc):
            raise ShapeMismatch("cannot lift a finite outer part to Z")
        return (vec, outer)
    if isinstance(s, (ex.WrZ2, ex.WrCycPair)) and isinstance(t, (ex.WrZ2, ex.WrCycPair)):
        if (s.n, s.m) != (t.n, t.m):
            raise ShapeMismatch("copy counts differ")
        vec, (a, b) = el
        vec = tuple(_structural(s.base, t.base, x, atom_maps) for x in vec)
        if isinstance(t, ex.WrCycPair):
            a %= t.n
            b %= t.m
        elif isinstance(s, ex.WrCycPair):
            raise ShapeMismatch("cannot lift a finite outer part to Z^2")
        return (vec, (a, b))
    raise ShapeMismatch(
        f"no structural map from {type(s).__name__} to {type(t).__name__}")


def _map_atom(s: ex.Atom, t: ex.Atom, el, atom_maps):
    table = _lookup_atom_map(atom_maps, s.label)
    if table is not None:
        if el not in table:
            raise ShapeMismatch(
                f"atom map for {s.label} has no image for {el!r}")
        return table[el]
    if s.assignment is None:
        if el == ex.SYMBOLIC_IDENTITY:
            return ex.identity(t)
        if t.assignment is None:
            return ex.formal_generator(t)
        raise ShapeMismatch(
            f"cannot map formal element of {s.label} to assigned atom {t.label}")
    if s.assignment == t.assignment:
        return el
    raise ShapeMismatch(
        f"no atom map given for assigned atom {s.label}")


# ---------------------------------------------------------------------------
# exactness


@dataclass
class ExactnessReport:
    name: str
    injective: bool
    surjective: bool
    exact_at_middle: bool
    source_size: int
    middle_size: int
    target_size: int
    counterexamples: dict

    @property
    def ok(self) -> bool:
        return self.injective and self.surjective and self.exact_at_middle


def check_exact(first: Homomorphism, second: Homomorphism,
                trunc: int, name: str = "") -> ExactnessReport:
    """Decide exactness of ``first; second`` on the truncation window.

    Checks that ``first`` is injective, ``second`` is onto the target
    window, and that within the middle window the image of ``first``
    equals the kernel of ``second``.  Raises WindowTooSmall if some target
    element is unreached while the middle group has unbounded integer
    coordinates (enumeration cannot distinguish failure from truncation).
    """
    if first.target != second.source:
        raise ShapeMismatch("sequence arrows do not compose")
    middle = first.target
    counter = {}

    # the enumerated middle window; for quotients these are canonical
    # representatives whose coordinates may exceed the raw truncation box,
    # so membership is decided against this set rather than slot bounds
    kernel = set()
    hit = set()
    middle_window = set()
    ident = ex.canonical(second.target, ex.identity(second.target))
    for y in ex.iter_window(middle, trunc):
        middle_window.add(y)
        z = ex.canonical(second.target, hom_apply(second, y))
        hit.add(z)
        if z == ident:
            kernel.add(y)
    mid_count = len(middle_window)

    seen = {}
    injective = True
    image = set()
    src_count = 0
    for x in ex.iter_window(first.source, trunc):
        src_count += 1
        y = hom_apply(first, x)
        key = ex.canonical(middle, y)
        if key in seen and seen[key] != x:
            injective = False
            counter.setdefault(
                "injectivity",
                [format_element(seen[key]), format_element(x)])
        seen[key] = x
        if key in middle_window:
            image.add(key)

    target_count = 0
    missing = None
    for z in ex.iter_window(second.target, trunc):
        target_count += 1
        if ex.canonical(second.target, z) not in hit:
            missing = z
            break
    if missing is not None:
        if ex.free_rank(middle) > 0:
            raise WindowTooSmall(
                f"{format_element(missing)} unreached at truncation {trunc}; "
                "a larger window may be needed")
        surjective = False
        counter["surjectivity"] = [format_element(missing)]
    else:
        surjective = True

    exact_mid = image == kernel
    if not exact_mid:
        for y in sorted(image - kernel, key=repr)[:2]:
            counter.setdefault("image_not_in_kernel", []).append(
                format_element(y))
        for y in sorted(kernel - image, key=repr)[:2]:
            counter.setdefault("kernel_not_in_image", []).append(
                format_element(y))

    return ExactnessReport(
        name=name,
        injective=injective,
        surjective=surjective,
        exact_at_middle=exact_mid,
        source_size=src_count,
        middle_size=mid_count,
        target_size=target_count,
        counterexamples=counter,
    )
