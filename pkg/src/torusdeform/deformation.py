"""Deformation group diagrams attached to a classified torus function.

Each classification determines a six-node commuting diagram

    P1D ---p1---> P1O ---d1---> S
                   |            |
                  rho_d1       rho
                   v            v
    Delta --j0--------------->  G

together with a combined row ``P1D x Delta --iota1--> P1O --rho.d1--> G``.
The nodes are built out of a family of disk leaves, each a short exact
triple ``Delta_D -> S_D -> G_D`` of finite (or symbolic) groups.

For a tree classification with data (n, m, r) the middle row lives in
wreath products over the translation quotient Z_n x Z_{n*m}; the disk
factor is repeated once per disk in each orbit.

For a circuit classification with cyclic index n and cylinder classes
(c_i, m_i) the column group of the fundamental cylinder is

    S_Y = prod_i  (S_i wr Z over m_i copies)

and the full groups are quotients of an n-fold cyclic wreath by the
central Garside element, the tuple that advances every fiberwise shift
coordinate by one full turn.  The quotient admits a splitting because the
Garside element is a primitive vector of the enclosed lattice; the
``theta_splitting_check`` routine certifies this with a Smith form
computation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Optional, Union

from .algebra import expr as ex
from .algebra.grammar import format_element, format_expr
from .algebra.hom import (
    ExactnessReport,
    Homomorphism,
    Include,
    IncludePair,
    LeafMap,
    ModReduce,
    Project,
    ZeroOuterEmbed,
    check_exact,
    make_atom_maps,
)
from .algebra.smith import snf_diagonal
from .errors import (
    IncompatibleLeaves,
    NonPrimitiveGenerator,
    UnassignedAtom,
)
from .reeb import F0Classification, F1Classification


# ---------------------------------------------------------------------------
# disk leaves


@dataclass(frozen=True)
class LeafTriple:
    """A short exact triple Delta_D -> S_D -> G_D for one disk family.

    ``include`` and ``project`` are tuples of (source, image) pairs; both
    are None for symbolic leaves, where the maps act formally.
    """

    label: str
    delta: ex.Atom
    s: ex.Atom
    g: ex.Atom
    include: Optional[tuple]
    project: Optional[tuple]

    @property
    def assigned(self) -> bool:
        return self.s.assignment is not None

    def include_map(self) -> dict:
        return dict(self.include)

    def project_map(self) -> dict:
        return dict(self.project)


def symbolic_leaf(label: str) -> LeafTriple:
    return LeafTriple(
        label=label,
        delta=ex.Atom(label, "Delta"),
        s=ex.Atom(label, "S"),
        g=ex.Atom(label, "G"),
        include=None,
        project=None,
    )


def leaf_from_tables(label: str,
                     delta: ex.FiniteGroupTable,
                     s: ex.FiniteGroupTable,
                     g: ex.FiniteGroupTable,
                     include: dict,
                     project: dict) -> LeafTriple:
    """Build an assigned leaf and validate exactness of the triple."""
    _validate_leaf_maps(label, delta, s, g, include, project)
    return LeafTriple(
        label=label,
        delta=ex.Atom(label, "Delta", delta),
        s=ex.Atom(label, "S", s),
        g=ex.Atom(label, "G", g),
        include=tuple(sorted(include.items(), key=repr)),
        project=tuple(sorted(project.items(), key=repr)),
    )


def cyclic_leaf(label: str, order: int, step: int) -> LeafTriple:
    """Leaf with S = Z_order, Delta = step * Z_order and G = Z_step."""
    if order < 1 or step < 1 or order % step != 0:
        raise IncompatibleLeaves(
            f"leaf {label}: step {step} must divide the order {order}")
    s = ex.FiniteGroupTable.cyclic(order)
    delta = ex.FiniteGroupTable.from_mult(
        range(0, order, step), lambda a, b: (a + b) % order)
    g = ex.FiniteGroupTable.cyclic(step)
    include = {d: d for d in range(0, order, step)}
    project = {x: x % step for x in range(order)}
    return leaf_from_tables(label, delta, s, g, include, project)


def standard_leaf(label: str) -> LeafTriple:
    """The default verification leaf: 2Z_4 -> Z_4 -> Z_2."""
    return cyclic_leaf(label, 4, 2)


def _validate_leaf_maps(label, delta, s, g, include, project):
    if set(include) != set(delta.elements):
        raise IncompatibleLeaves(
            f"leaf {label}: inclusion must be defined on every element")
    if set(project) != set(s.elements):
        raise IncompatibleLeaves(
            f"leaf {label}: projection must be defined on every element")
    if len(set(include.values())) != len(delta.elements):
        raise IncompatibleLeaves(f"leaf {label}: inclusion is not injective")
    for a in delta.elements:
        for b in delta.elements:
            if include[delta.mul(a, b)] != s.mul(include[a], include[b]):
                raise IncompatibleLeaves(
                    f"leaf {label}: inclusion is not a homomorphism")
    if set(project.values()) != set(g.elements):
        raise IncompatibleLeaves(f"leaf {label}: projection is not onto")
    for a in s.elements:
        for b in s.elements:
            if project[s.mul(a, b)] != g.mul(project[a], project[b]):
                raise IncompatibleLeaves(
                    f"leaf {label}: projection is not a homomorphism")
    kernel = {x for x in s.elements if project[x] == g.identity}
    if kernel != set(include.values()):
        raise IncompatibleLeaves(
            f"leaf {label}: kernel of the projection differs from the "
            "image of the inclusion")


def _check_leaf_family(leaves) -> bool:
    """Common validation; returns True when the leaves are assigned."""
    labels = [lf.label for lf in leaves]
    if len(set(labels)) != len(labels):
        raise IncompatibleLeaves(f"duplicate leaf labels: {labels}")
    modes = {lf.assigned for lf in leaves}
    if len(modes) > 1:
        raise IncompatibleLeaves(
            "cannot mix assigned and symbolic leaves in one diagram")
    return modes.pop()


def _leaf_atom_maps(leaves, which: str) -> tuple:
    if not leaves or not leaves[0].assigned:
        return ()
    if which == "include":
        return make_atom_maps({lf.label: lf.include_map() for lf in leaves})
    return make_atom_maps({lf.label: lf.project_map() for lf in leaves})


# ---------------------------------------------------------------------------
# diagram container


@dataclass
class DiagramInstance:
    classification: str      # "F0" or "F1"
    parameters: dict
    leaves: tuple
    nodes: dict              # P1D, Delta, P1O, S, G, Combined
    arrows: dict             # p1, d1, j0, rho, rho_d1, iota1, section, pr_*
    garside: Optional[object]        # element of the unquotiented Delta row
    garside_in_s: Optional[object]   # its image in the unquotiented S row

    @property
    def assigned(self) -> bool:
        flat = _flatten_leaves(self.leaves)
        return bool(flat) and flat[0].assigned


def _flatten_leaves(leaves):
    out = []
    for item in leaves:
        if isinstance(item, LeafTriple):
            out.append(item)
        else:
            out.extend(item)
    return out


# ---------------------------------------------------------------------------
# tree diagrams


def build_diagram_F0(n: int, m: int, r: int, leaves=None) -> DiagramInstance:
    """Diagram of a tree classification with invariants (n, m, r).

    ``leaves`` supplies one triple per disk orbit (default: symbolic).
    """
    if n < 1 or m < 1 or r < 1:
        raise IncompatibleLeaves("tree invariants must be positive")
    if leaves is None:
        leaves = [symbolic_leaf(f"D{i + 1}") for i in range(r)]
    leaves = list(leaves)
    if len(leaves) != r:
        raise IncompatibleLeaves(
            f"{len(leaves)} leaf triples for {r} disk orbits")
    _check_leaf_family(leaves)

    s_disk = ex.product([lf.s for lf in leaves])
    g_disk = ex.product([lf.g for lf in leaves])
    d_disk = ex.product([lf.delta for lf in leaves])
    nm = n * m
    copies = n * nm

    p1d = ex.FreeAbelian(2)
    delta = ex.product([d_disk] * copies)
    p1o = ex.WrZ2(s_disk, n, nm)
    s_node = ex.WrCycPair(s_disk, n, nm)
    g_node = ex.WrCycPair(g_disk, n, nm)
    combined = ex.Product((p1d, delta))

    inc_maps = _leaf_atom_maps(leaves, "include")
    proj_maps = _leaf_atom_maps(leaves, "project")

    evec = (ex.identity(s_disk),) * copies
    z1 = (evec, (n, 0))
    z2 = (evec, (0, nm))

    section = Homomorphism(delta, p1o, ZeroOuterEmbed(copies, inc_maps),
                           "section")
    arrows = {
        "p1": Homomorphism(p1d, p1o, Include((z1, z2)), "p1"),
        "d1": Homomorphism(p1o, s_node, ModReduce(), "d1"),
        "j0": Homomorphism(delta, s_node, ZeroOuterEmbed(copies, inc_maps),
                           "j0"),
        "rho": Homomorphism(s_node, g_node, LeafMap(proj_maps), "rho"),
        "rho_d1": Homomorphism(p1o, g_node, LeafMap(proj_maps), "rho_d1"),
        "iota1": Homomorphism(combined, p1o, IncludePair((z1, z2), section),
                              "iota1"),
        "section": section,
        "pr_lattice": Homomorphism(combined, p1d, Project(0), "pr_lattice"),
        "pr_delta": Homomorphism(combined, delta, Project(1), "pr_delta"),
    }
    return DiagramInstance(
        classification="F0",
        parameters={"n": n, "m": m, "r": r},
        leaves=tuple(leaves),
        nodes={"P1D": p1d, "Delta": delta, "P1O": p1o, "S": s_node,
               "G": g_node, "Combined": combined},
        arrows=arrows,
        garside=None,
        garside_in_s=None,
    )


# ---------------------------------------------------------------------------
# circuit diagrams


def _mark_scaled(expr):
    """Element of ``expr`` with every fiberwise shift coordinate advanced
    one step and all other coordinates at the identity."""
    if isinstance(expr, ex.ScaledZ):
        return expr.step
    if isinstance(expr, ex.Product):
        return tuple(_mark_scaled(f) for f in expr.factors)
    return ex.identity(expr)


def _mark_outer(expr):
    """Image of the mark under the blockwise inclusion into the S row."""
    if isinstance(expr, ex.WrZ):
        return ((ex.identity(expr.base),) * expr.n, expr.n)
    if isinstance(expr, ex.Product):
        return tuple(_mark_outer(f) for f in expr.factors)
    return ex.identity(expr)


def garside_element(delta_row: ex.GroupExpr):
    """The central element advancing every shift coordinate by one turn."""
    return _mark_scaled(delta_row)


def build_diagram_F1(n: int, decomposition, leaves=None) -> DiagramInstance:
    """Diagram of a circuit classification.

    ``decomposition`` lists the cylinder classes as (c_i, m_i) pairs;
    ``leaves`` gives one triple per (class, orbit) slot, as a list of
    lists with row i of length c_i (default: symbolic).
    """
    decomposition = [(int(c), int(m)) for c, m in decomposition]
    if n < 1:
        raise IncompatibleLeaves("cyclic index must be positive")
    if not decomposition:
        raise IncompatibleLeaves(
            "circuit diagrams need at least one cylinder class")
    if any(c < 1 or m < 1 for c, m in decomposition):
        raise IncompatibleLeaves("cylinder class data must be positive")
    if leaves is None:
        leaves = [[symbolic_leaf(f"D{i + 1}_{j + 1}") for j in range(c)]
                  for i, (c, m) in enumerate(decomposition)]
    leaves = [list(row) for row in leaves]
    if len(leaves) != len(decomposition) or any(
            len(row) != c for row, (c, _) in zip(leaves, decomposition)):
        raise IncompatibleLeaves(
            "leaf rows must match the decomposition shape")
    flat = [lf for row in leaves for lf in row]
    _check_leaf_family(flat)

    inner_d = [ex.product([lf.delta for lf in row]) for row in leaves]
    inner_s = [ex.product([lf.s for lf in row]) for row in leaves]
    inner_g = [ex.product([lf.g for lf in row]) for row in leaves]

    delta_blocks = [
        ex.product([ex.product([inner_d[i]] * m_i), ex.ScaledZ(m_i)])
        for i, (_, m_i) in enumerate(decomposition)
    ]
    delta_col = ex.product(delta_blocks)
    s_col = ex.product([ex.WrZ(inner_s[i], m_i)
                        for i, (_, m_i) in enumerate(decomposition)])
    g_col = ex.product([ex.WrCyc(inner_g[i], m_i)
                        for i, (_, m_i) in enumerate(decomposition)])

    delta_row = ex.product([delta_col] * n)
    gars = garside_element(delta_row)
    delta_node = ex.central_quotient(delta_row, gars)

    p1d = ex.FreeAbelian(2)
    p1o = ex.WrZ(s_col, n)
    s_row = ex.WrCyc(s_col, n)
    block = _mark_outer(s_col)
    gars_in_s = ((block,) * n, 0)
    s_node = ex.central_quotient(s_row, gars_in_s)
    g_node = ex.WrCyc(g_col, n)
    combined = ex.Product((p1d, delta_node))

    inc_maps = _leaf_atom_maps(flat, "include")
    proj_maps = _leaf_atom_maps(flat, "project")

    z_l = ((ex.identity(s_col),) * n, n)
    z_m = ((block,) * n, 0)

    section = Homomorphism(delta_node, p1o, ZeroOuterEmbed(n, inc_maps),
                           "section")
    arrows = {
        "p1": Homomorphism(p1d, p1o, Include((z_l, z_m)), "p1"),
        "d1": Homomorphism(p1o, s_node, ModReduce(), "d1"),
        "j0": Homomorphism(delta_node, s_node, ZeroOuterEmbed(n, inc_maps),
                           "j0"),
        "rho": Homomorphism(s_node, g_node, LeafMap(proj_maps), "rho"),
        "rho_d1": Homomorphism(p1o, g_node, LeafMap(proj_maps), "rho_d1"),
        "iota1": Homomorphism(combined, p1o, IncludePair((z_l, z_m), section),
                              "iota1"),
        "section": section,
        "pr_lattice": Homomorphism(combined, p1d, Project(0), "pr_lattice"),
        "pr_delta": Homomorphism(combined, delta_node, Project(1),
                                 "pr_delta"),
    }
    return DiagramInstance(
        classification="F1",
        parameters={"n": n,
                    "decomposition": [[c, m] for c, m in decomposition]},
        leaves=tuple(tuple(row) for row in leaves),
        nodes={"P1D": p1d, "Delta": delta_node, "P1O": p1o, "S": s_node,
               "G": g_node, "Combined": combined},
        arrows=arrows,
        garside=gars,
        garside_in_s=gars_in_s,
    )


def diagram_from_classification(cls, leaves=None) -> DiagramInstance:
    """Build the diagram matching a classification record."""
    if isinstance(cls, F0Classification):
        return build_diagram_F0(cls.n, cls.m, cls.r, leaves)
    if isinstance(cls, F1Classification):
        decomp = [(c.count, c.multiplicity)
                  for c in cls.decomposition.classes]
        return build_diagram_F1(cls.cyclic_index, decomp, leaves)
    raise TypeError(f"not a classification record: {cls!r}")


# ---------------------------------------------------------------------------
# splitting of the central quotient


@dataclass(frozen=True)
class SplitReport:
    lattice_rank: int
    generator: tuple
    diagonal: tuple
    torsion_free: bool
    complement_rank: int

    @property
    def splits(self) -> bool:
        return self.torsion_free


def theta_splitting_check(n: int, decomposition, delta_ranks=None,
                          generator=None) -> SplitReport:
    """Certify that the quotient of the Delta lattice by the Garside
    element is torsion-free (hence split).

    The lattice replaces every disk leaf by a free abelian group of the
    given rank (default 1) and every shift block by one Z coordinate; the
    Garside element is 1 on each shift coordinate.  A custom ``generator``
    vector may be supplied; it must be primitive for the check to pass.
    """
    decomposition = [(int(c), int(m)) for c, m in decomposition]
    if n < 1 or not decomposition:
        raise NonPrimitiveGenerator("empty lattice has no splitting data")
    if delta_ranks is None:
        delta_ranks = [[1] * c for c, _ in decomposition]
    if len(delta_ranks) != len(decomposition) or any(
            len(row) != c for row, (c, _) in zip(delta_ranks, decomposition)):
        raise NonPrimitiveGenerator(
            "leaf rank table must match the decomposition shape")

    block = []   # per copy: rank per class, shift coordinate flagged
    for i, (c_i, m_i) in enumerate(decomposition):
        block.extend([0] * (m_i * sum(delta_ranks[i])))
        block.append(1)
    vec = tuple(block * n) if generator is None else tuple(map(int, generator))
    rank = len(vec)
    if generator is not None and rank == 0:
        raise NonPrimitiveGenerator("empty generator vector")

    g = 0
    for v in vec:
        g = gcd(g, v)
    diag = tuple(snf_diagonal([list(vec)]))
    if diag != ((g,) if g else ()):
        raise NonPrimitiveGenerator(
            f"Smith form {diag} disagrees with gcd {g}")
    if g != 1:
        raise NonPrimitiveGenerator(
            f"generator has content {g}; the quotient has torsion")
    return SplitReport(
        lattice_rank=rank,
        generator=vec,
        diagonal=diag,
        torsion_free=True,
        complement_rank=rank - 1,
    )


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    truncation: int
    samples: int
    exactness: dict        # row name -> ExactnessReport
    homomorphism: dict     # arrow name -> list of counterexample strings
    centrality: dict       # check name -> bool
    compatibility: dict    # check name -> bool

    @property
    def ok(self) -> bool:
        return (all(r.ok for r in self.exactness.values())
                and all(not bad for bad in self.homomorphism.values())
                and all(self.centrality.values())
                and all(self.compatibility.values()))

    def counterexamples(self) -> dict:
        out = {}
        for name, rep in self.exactness.items():
            if rep.counterexamples:
                out[name] = rep.counterexamples
        for name, bad in self.homomorphism.items():
            if bad:
                out[f"hom:{name}"] = bad
        return out

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "truncation": self.truncation,
            "samples": self.samples,
            "exactness": {
                name: {
                    "ok": rep.ok,
                    "injective": rep.injective,
                    "surjective": rep.surjective,
                    "exact_at_middle": rep.exact_at_middle,
                    "source_size": rep.source_size,
                    "middle_size": rep.middle_size,
                    "target_size": rep.target_size,
                    "counterexamples": rep.counterexamples,
                }
                for name, rep in sorted(self.exactness.items())
            },
            "homomorphism": {k: v for k, v in sorted(
                self.homomorphism.items())},
            "centrality": {k: v for k, v in sorted(self.centrality.items())},
            "compatibility": {k: v for k, v in sorted(
                self.compatibility.items())},
        }


_FULL_WINDOW_LIMIT = 300_000


def verify_diagram(diagram: DiagramInstance, trunc: int = 4,
                   samples: int = 300, seed: int = 7) -> VerificationReport:
    """Machine-check the diagram on the truncation window.

    Verifies exactness of the three rows by enumeration, the arrow
    homomorphism laws on seeded random pairs, centrality of the lattice
    images and the Garside element, and the commutation identities tying
    the rows together.
    """
    if not diagram.assigned:
        raise UnassignedAtom(
            "verification requires leaves with finite assignments")
    rng = random.Random(seed)
    arrows = diagram.arrows
    nodes = diagram.nodes

    homomorphism = {}
    for name in ("p1", "d1", "j0", "rho", "rho_d1", "iota1"):
        h = arrows[name]
        bad = []
        for _ in range(samples):
            x = ex.random_element(h.source, trunc, rng)
            y = ex.random_element(h.source, trunc, rng)
            lhs = h(ex.multiply(h.source, x, y))
            rhs = ex.multiply(h.target, h(x), h(y))
            if not ex.elements_equal(h.target, lhs, rhs):
                bad.append([format_element(x), format_element(y)])
                if len(bad) >= 2:
                    break
        homomorphism[name] = bad

    exactness = {
        "p1_d1": check_exact(arrows["p1"], arrows["d1"], trunc, "p1_d1"),
        "j0_rho": check_exact(arrows["j0"], arrows["rho"], trunc, "j0_rho"),
        "iota1_rho_d1": check_exact(arrows["iota1"], arrows["rho_d1"],
                                    trunc, "iota1_rho_d1"),
    }

    p1o = nodes["P1O"]
    s_node = nodes["S"]
    g_node = nodes["G"]
    centrality = {}
    for i, img in enumerate(arrows["p1"].rule.images):
        centrality[f"p1_image_{i}"] = ex.is_central(p1o, img)
    if diagram.garside is not None:
        delta_row = nodes["Delta"].base
        s_row = s_node.base
        centrality["garside_delta"] = ex.is_central(delta_row,
                                                    diagram.garside)
        centrality["garside_s"] = ex.is_central(s_row, diagram.garside_in_s)

    compatibility = {}
    combined = nodes["Combined"]
    d1 = arrows["d1"]
    j0 = arrows["j0"]
    iota1 = arrows["iota1"]
    p1 = arrows["p1"]
    pr_delta = arrows["pr_delta"]
    rho = arrows["rho"]
    rho_d1 = arrows["rho_d1"]

    ok_square = True
    for x in ex.iter_window(combined, trunc):
        if not ex.elements_equal(s_node, d1(iota1(x)), j0(pr_delta(x))):
            ok_square = False
            break
    compatibility["d1_iota1_equals_j0_pr"] = ok_square

    ok_lat = True
    e_delta = ex.identity(nodes["Delta"])
    for lam in ex.iter_window(nodes["P1D"], trunc):
        if not ex.elements_equal(p1o, iota1((lam, e_delta)), p1(lam)):
            ok_lat = False
            break
    compatibility["iota1_extends_p1"] = ok_lat

    ok_tri = True
    if ex.window_size(p1o, trunc) <= _FULL_WINDOW_LIMIT:
        pool = ex.iter_window(p1o, trunc)
    else:
        pool = (ex.random_element(p1o, trunc, rng) for _ in range(2000))
    for y in pool:
        if not ex.elements_equal(g_node, rho_d1(y), rho(d1(y))):
            ok_tri = False
            break
    compatibility["rho_d1_factors"] = ok_tri

    if diagram.garside is not None:
        rho_base = Homomorphism(s_node.base, g_node, arrows["rho"].rule,
                                "rho_base")
        compatibility["garside_in_rho_kernel"] = ex.elements_equal(
            g_node, rho_base(diagram.garside_in_s), ex.identity(g_node))
        j0_base = Homomorphism(nodes["Delta"].base, s_node, j0.rule,
                               "j0_base")
        compatibility["j0_kills_garside"] = ex.elements_equal(
            s_node, j0_base(diagram.garside), ex.identity(s_node))

    return VerificationReport(
        truncation=trunc,
        samples=samples,
        exactness=exactness,
        homomorphism=homomorphism,
        centrality=centrality,
        compatibility=compatibility,
    )


# ---------------------------------------------------------------------------
# reporting


def diagram_report(diagram: DiagramInstance,
                   verification: Optional[VerificationReport] = None) -> dict:
    arrows = {}
    for name in ("p1", "d1", "j0", "rho", "rho_d1", "iota1"):
        h = diagram.arrows[name]
        desc = h.rule.descriptor()
        desc["source"] = format_expr(h.source)
        desc["target"] = format_expr(h.target)
        arrows[name] = desc
    return {
        "classification": diagram.classification,
        "parameters": diagram.parameters,
        "nodes": {name: format_expr(e)
                  for name, e in sorted(diagram.nodes.items())},
        "arrows": arrows,
        "garside": (None if diagram.garside is None
                    else format_element(diagram.garside)),
        "verification": (None if verification is None
                         else verification.to_dict()),
    }
