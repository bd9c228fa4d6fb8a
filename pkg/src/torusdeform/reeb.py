"""Level-set sweep: the Kronrod-Reeb graph of a torus Morse function.

The sweep rasterizes the field on a periodic cell grid.  At each critical
level the cells whose corner values straddle the level are grouped into
connected components; components containing at least one critical point
become graph vertices, the remaining ones are regular circles that merely
connect the slab regions above and below.  Between consecutive critical
levels the cells lying strictly inside the open value band are grouped
into slab components; each maximal chain of slab components glued through
regular circles is an edge of the graph.

Vertices carry the Euler characteristic of their level component
(+1 for an extremum point, -s for a component with s saddles), which is
what the disk/annulus bookkeeping of the classification runs on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import (
    InconsistentSweep,
    NoSpecialVertex,
    NotACylinder,
    OrbitMismatch,
    ResolutionTooCoarse,
)
from .field import (
    KIND_MAX,
    KIND_MIN,
    KIND_SADDLE,
    CriticalPoint,
    TorusPoint,
    TranslationSubgroup,
    TrigFieldSpec,
    evaluate_grid,
)

VKIND_MIN = "minimum"
VKIND_MAX = "maximum"
VKIND_SADDLE = "multi_saddle"

_OFFS8 = tuple((di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1)
               if (di, dj) != (0, 0))
_OFFS4 = ((-1, 0), (1, 0), (0, -1), (0, 1))


class _UnionFind:
    def __init__(self):
        self.parent = {}
        self.size = {}

    def find(self, a):
        if a not in self.parent:
            self.parent[a] = a
            self.size[a] = 1
            return a
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


def _label_components(mask: np.ndarray, connectivity: int) -> np.ndarray:
    """Label connected components of a periodic boolean grid.

    Returns an int array with -1 outside the mask and component ids
    0..k-1 (in scan order of their first cell) inside.
    """
    res = mask.shape[0]
    offs = _OFFS8 if connectivity == 8 else _OFFS4
    uf = _UnionFind()
    cells = np.argwhere(mask)
    cellset = {(int(i), int(j)) for i, j in cells}
    for i, j in cellset:
        uf.find((i, j))
    for i, j in sorted(cellset):
        for di, dj in offs:
            nb = ((i + di) % res, (j + dj) % res)
            if nb in cellset:
                uf.union((i, j), nb)
    labels = np.full(mask.shape, -1, dtype=np.int32)
    next_id = 0
    roots = {}
    for i, j in sorted(cellset):
        r = uf.find((i, j))
        if r not in roots:
            roots[r] = next_id
            next_id += 1
    for i, j in cellset:
        labels[i, j] = roots[uf.find((i, j))]
    return labels


# ---------------------------------------------------------------------------
# graph data


@dataclass(frozen=True)
class ReebVertex:
    id: int
    kind: str
    level: float
    critical_points: tuple   # indexes into the critical point list
    valence: int             # 2 * number of saddles in the level component

    @property
    def euler(self) -> int:
        if self.kind == VKIND_SADDLE:
            return -len(self.critical_points)
        return 1


@dataclass(frozen=True)
class EdgeSlice:
    """One slab component of an edge: an annulus between two levels."""

    low: float
    high: float
    rep: tuple          # (i, j) node whose value is deep inside the band
    rep_value: float


@dataclass(frozen=True)
class ReebEdge:
    id: int
    lower: int
    upper: int
    low: float
    high: float
    region_euler: int    # annulus capped by adjacent extremum endpoints
    boundary_count: int
    slices: tuple        # EdgeSlice records ordered by level


@dataclass
class SweepGeometry:
    """Raster data retained for point location after the sweep."""

    resolution: int
    levels: tuple
    values: np.ndarray
    slab_labels: list      # per interval: label grid
    slab_edge: dict        # (interval, comp) -> edge id


@dataclass
class ReebGraph:
    vertices: list
    edges: list
    critical_points: list
    betti1: int
    geometry: SweepGeometry

    def adjacency(self) -> dict:
        adj = {v.id: [] for v in self.vertices}
        for e in self.edges:
            adj[e.lower].append((e.upper, e.id))
            adj[e.upper].append((e.lower, e.id))
        return adj

    def degree(self, vid: int) -> int:
        return sum(1 for e in self.edges for end in (e.lower, e.upper)
                   if end == vid)

    def vertex_of_cp(self, cp_index: int) -> int:
        for v in self.vertices:
            if cp_index in v.critical_points:
                return v.id
        raise KeyError(cp_index)


# ---------------------------------------------------------------------------
# the sweep


def _cluster_levels(values, tol):
    levels = []
    for v in sorted(values):
        if levels and v - levels[-1][-1] <= tol:
            levels[-1].append(v)
        else:
            levels.append([v])
    return [sum(c) / len(c) for c in levels]


def build_reeb_graph(spec: TrigFieldSpec, cps: list,
                     resolution: int = 128) -> ReebGraph:
    """Sweep the field through its critical levels and assemble the graph."""
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    res = resolution
    F = evaluate_grid(spec, res)
    scale = spec.amplitude_scale
    band = 1e-9 * scale
    ltol = 1e-8 * scale

    levels = _cluster_levels([c.value for c in cps], ltol)
    T = len(levels)
    level_of_cp = []
    for c in cps:
        t = min(range(T), key=lambda k: abs(levels[k] - c.value))
        if abs(levels[t] - c.value) > 10 * ltol + 1e-9:
            raise InconsistentSweep("critical value far from its level cluster")
        level_of_cp.append(t)

    c00 = F
    c10 = np.roll(F, -1, 0)
    c01 = np.roll(F, -1, 1)
    c11 = np.roll(c10, -1, 1)
    cmin = np.minimum.reduce([c00, c10, c01, c11])
    cmax = np.maximum.reduce([c00, c10, c01, c11])

    crossing_masks = [(cmin <= lv + band) & (cmax >= lv - band)
                      for lv in levels]
    straddle_count = sum(m.astype(np.int16) for m in crossing_masks)
    if np.any(straddle_count >= 2):
        raise ResolutionTooCoarse(
            "a grid cell spans two critical levels; increase the resolution")

    slab_masks = [
        (cmin > levels[t] + band) & (cmax < levels[t + 1] - band)
        for t in range(T - 1)
    ]

    crossing_labels = [_label_components(m, 8) for m in crossing_masks]
    slab_labels = [_label_components(m, 4) for m in slab_masks]

    def cell_of(p: TorusPoint):
        return (int(math.floor(p.x * res)) % res,
                int(math.floor(p.y * res)) % res)

    # attach each saddle to its crossing component
    comp_saddles = {}
    for idx, c in enumerate(cps):
        if c.kind != KIND_SADDLE:
            continue
        t = level_of_cp[idx]
        ci, cj = cell_of(c.point)
        lab = -1
        for di, dj in ((0, 0),) + _OFFS8:
            lab = int(crossing_labels[t][(ci + di) % res, (cj + dj) % res])
            if lab >= 0:
                break
        if lab < 0:
            raise InconsistentSweep(
                f"saddle at ({c.point.x:.4f}, {c.point.y:.4f}) sits in no "
                "crossing cell")
        comp_saddles.setdefault((t, lab), []).append(idx)

    # crossing components hugging a node-aligned extremum are artifacts
    shadow = {}
    for idx, c in enumerate(cps):
        if c.kind == KIND_SADDLE:
            continue
        t = level_of_cp[idx]
        ci, cj = cell_of(c.point)
        cells = set()
        for di in (-2, -1, 0, 1, 2):
            for dj in (-2, -1, 0, 1, 2):
                cells.add(((ci + di) % res, (cj + dj) % res))
        shadow.setdefault(t, set()).update(cells)
    artifact = set()
    for t in range(T):
        labs = crossing_labels[t]
        comp_cells = {}
        for i, j in np.argwhere(labs >= 0):
            comp_cells.setdefault(int(labs[i, j]), []).append((int(i), int(j)))
        for comp, cells in comp_cells.items():
            if (t, comp) in comp_saddles:
                continue
            sh = shadow.get(t, set())
            inside = sum(1 for c_ in cells if c_ in sh)
            if inside == len(cells):
                artifact.add((t, comp))
            elif inside > 0 and (t, comp) not in comp_saddles:
                raise ResolutionTooCoarse(
                    "a regular level circle touches an extremum at this "
                    "resolution")

    # adjacency between crossing components and slab components
    below_adj = {}
    above_adj = {}
    for t in range(T):
        labs = crossing_labels[t]
        for i, j in np.argwhere(labs >= 0):
            i, j = int(i), int(j)
            key = (t, int(labs[i, j]))
            if key in artifact:
                continue
            for di, dj in ((0, 0),) + _OFFS8:
                ni, nj = (i + di) % res, (j + dj) % res
                if t - 1 >= 0:
                    lb = int(slab_labels[t - 1][ni, nj])
                    if lb >= 0:
                        below_adj.setdefault(key, set()).add((t - 1, lb))
                if t < T - 1:
                    la = int(slab_labels[t][ni, nj])
                    if la >= 0:
                        above_adj.setdefault(key, set()).add((t, la))

    # extremum attachments: search outward for the adjacent slab component
    def ring_slab(point: TorusPoint, interval: int):
        ci, cj = cell_of(point)
        found = set()
        for r in range(1, 4):
            for di in range(-r, r + 1):
                for dj in range(-r, r + 1):
                    lb = int(slab_labels[interval][(ci + di) % res,
                                                   (cj + dj) % res])
                    if lb >= 0:
                        found.add(lb)
            if found:
                break
        return found

    # vertices: extrema first, then saddle components, ordered by level
    vertex_specs = []
    for idx, c in enumerate(cps):
        if c.kind == KIND_SADDLE:
            continue
        kind = VKIND_MIN if c.kind == KIND_MIN else VKIND_MAX
        vertex_specs.append((c.value, 0, (c.point.x, c.point.y),
                             kind, (idx,)))
    for (t, comp), saddles in comp_saddles.items():
        saddles = sorted(saddles,
                         key=lambda k: (cps[k].point.x, cps[k].point.y))
        first = cps[saddles[0]].point
        vertex_specs.append((levels[t], 1, (first.x, first.y),
                             VKIND_SADDLE, tuple(saddles)))
    vertex_specs.sort(key=lambda s: (s[0], s[1], s[2]))
    vertices = []
    comp_vertex = {}
    cp_vertex = {}
    for vid, (lv, _, _, kind, members) in enumerate(vertex_specs):
        level = (float(lv) if kind != VKIND_SADDLE
                 else sum(cps[k].value for k in members) / len(members))
        vertices.append(ReebVertex(
            id=vid, kind=kind, level=level, critical_points=members,
            valence=2 * len(members) if kind == VKIND_SADDLE else 0))
        for k in members:
            cp_vertex[k] = vid
        if kind == VKIND_SADDLE:
            t = level_of_cp[members[0]]
            labs = crossing_labels[t]
            ci, cj = cell_of(cps[members[0]].point)
            lab = -1
            for di, dj in ((0, 0),) + _OFFS8:
                lab = int(labs[(ci + di) % res, (cj + dj) % res])
                if lab >= 0:
                    break
            comp_vertex[(t, lab)] = vid

    # glue slab components through regular circles
    uf = _UnionFind()
    lower_attach = {}
    upper_attach = {}

    def add_lower(slab_key, vid):
        lower_attach.setdefault(slab_key, set()).add(vid)

    def add_upper(slab_key, vid):
        upper_attach.setdefault(slab_key, set()).add(vid)

    for t in range(T):
        labs = crossing_labels[t]
        comps = {int(v) for v in np.unique(labs) if v >= 0}
        for comp in comps:
            key = (t, comp)
            if key in artifact:
                continue
            below = below_adj.get(key, set())
            above = above_adj.get(key, set())
            if key in comp_vertex:
                vid = comp_vertex[key]
                for sk in below:
                    add_upper(sk, vid)
                for sk in above:
                    add_lower(sk, vid)
            else:
                # regular circle: must continue exactly one slab into one
                if len(below) != 1 or len(above) != 1:
                    raise ResolutionTooCoarse(
                        f"regular level circle at level {levels[t]:.6g} "
                        f"borders {len(below)} lower and {len(above)} upper "
                        "slab regions")
                uf.union(next(iter(below)), next(iter(above)))

    for idx, c in enumerate(cps):
        if c.kind == KIND_SADDLE:
            continue
        t = level_of_cp[idx]
        vid = cp_vertex[idx]
        if c.kind == KIND_MIN:
            if t >= T - 1:
                raise InconsistentSweep("minimum at the top level")
            comps = ring_slab(c.point, t)
            if len(comps) != 1:
                raise ResolutionTooCoarse(
                    f"minimum at ({c.point.x:.4f}, {c.point.y:.4f}) touches "
                    f"{len(comps)} slab regions")
            add_lower((t, comps.pop()), vid)
        else:
            if t == 0:
                raise InconsistentSweep("maximum at the bottom level")
            comps = ring_slab(c.point, t - 1)
            if len(comps) != 1:
                raise ResolutionTooCoarse(
                    f"maximum at ({c.point.x:.4f}, {c.point.y:.4f}) touches "
                    f"{len(comps)} slab regions")
            add_upper((t - 1, comps.pop()), vid)

    # collect chains into edges
    all_slabs = []
    for t in range(T - 1):
        for comp in {int(v) for v in np.unique(slab_labels[t]) if v >= 0}:
            all_slabs.append((t, comp))

    chains = {}
    for sk in all_slabs:
        chains.setdefault(uf.find(sk), []).append(sk)

    slab_cells = {}
    for t in range(T - 1):
        labs = slab_labels[t]
        for i, j in np.argwhere(labs >= 0):
            slab_cells.setdefault((t, int(labs[i, j])), []).append(
                (int(i), int(j)))

    edge_specs = []
    for members in chains.values():
        members = sorted(members)
        lows = set()
        highs = set()
        for sk in members:
            for vid in lower_attach.get(sk, ()):
                lows.add(vid)
            for vid in upper_attach.get(sk, ()):
                highs.add(vid)
        if len(lows) != 1 or len(highs) != 1:
            raise InconsistentSweep(
                f"edge chain has {len(lows)} lower and {len(highs)} upper "
                "endpoints")
        lo_v = lows.pop()
        hi_v = highs.pop()
        if vertices[lo_v].level >= vertices[hi_v].level:
            raise InconsistentSweep("edge endpoints are not level-ordered")
        slices = []
        for (t, comp) in members:
            cells = slab_cells[(t, comp)]
            mid = 0.5 * (levels[t] + levels[t + 1])
            rep = min(cells, key=lambda c_: (abs(float(F[c_]) - mid),
                                             c_[0], c_[1]))
            slices.append(EdgeSlice(
                low=levels[t], high=levels[t + 1],
                rep=rep, rep_value=float(F[rep])))
        slices.sort(key=lambda s: s.low)
        first_cell = min(min(slab_cells[sk]) for sk in members)
        edge_specs.append((vertices[lo_v].level, vertices[hi_v].level,
                           lo_v, hi_v, first_cell, tuple(slices), members))

    edge_specs.sort(key=lambda e: (e[0], e[1], e[2], e[3], e[4]))
    edges = []
    slab_edge = {}
    for eid, (lo, hi, lo_v, hi_v, _, slices, members) in enumerate(edge_specs):
        caps = (1 if vertices[lo_v].kind != VKIND_SADDLE else 0) + \
               (1 if vertices[hi_v].kind != VKIND_SADDLE else 0)
        edges.append(ReebEdge(
            id=eid, lower=lo_v, upper=hi_v, low=lo, high=hi,
            region_euler=caps, boundary_count=2 - caps, slices=slices))
        for sk in members:
            slab_edge[sk] = eid

    graph = ReebGraph(
        vertices=vertices,
        edges=edges,
        critical_points=list(cps),
        betti1=len(edges) - len(vertices) + 1,
        geometry=SweepGeometry(
            resolution=res,
            levels=tuple(levels),
            values=F,
            slab_labels=slab_labels,
            slab_edge=slab_edge,
        ),
    )
    _validate_graph(graph)
    return graph


def _validate_graph(graph: ReebGraph) -> None:
    vs, es = graph.vertices, graph.edges
    if sum(v.euler for v in vs) != 0:
        raise InconsistentSweep(
            "vertex Euler characteristics do not sum to zero")
    for v in vs:
        d = graph.degree(v.id)
        if v.kind in (VKIND_MIN, VKIND_MAX) and d != 1:
            raise InconsistentSweep(
                f"extremum vertex {v.id} has degree {d}")
        if v.kind == VKIND_SADDLE and d < 2:
            raise InconsistentSweep(
                f"saddle vertex {v.id} has degree {d}")
    for e in es:
        if not (vs[e.lower].level < vs[e.upper].level):
            raise InconsistentSweep("edge interval is degenerate")
    b = graph.betti1
    if b not in (0, 1):
        raise InconsistentSweep(
            f"graph has first Betti number {b}; only trees and one-circuit "
            "graphs arise for Morse functions on the torus")
    # connectivity
    if vs:
        adj = graph.adjacency()
        seen = {vs[0].id}
        stack = [vs[0].id]
        while stack:
            cur = stack.pop()
            for nb, _ in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(vs):
            raise InconsistentSweep("level graph is not connected")


# ---------------------------------------------------------------------------
# point location helpers


def locate_edge(graph: ReebGraph, point: TorusPoint, interval_hint=None):
    """Edge whose slab region contains (or nearly contains) the point."""
    geo = graph.geometry
    res = geo.resolution
    ci = int(math.floor(point.x * res)) % res
    cj = int(math.floor(point.y * res)) % res
    v = float(geo.values[ci, cj])
    intervals = range(len(geo.levels) - 1) if interval_hint is None \
        else [interval_hint]
    for r in range(0, 4):
        for t in intervals:
            labs = geo.slab_labels[t]
            for di in range(-r, r + 1):
                for dj in range(-r, r + 1):
                    if max(abs(di), abs(dj)) != r:
                        continue
                    lb = int(labs[(ci + di) % res, (cj + dj) % res])
                    if lb >= 0:
                        return geo.slab_edge[(t, lb)]
    raise OrbitMismatch(
        f"point ({point.x:.4f}, {point.y:.4f}) with value {v:.4f} lies in "
        "no slab region")


def match_critical_point(cps, point: TorusPoint, tol: float = 1e-5) -> int:
    best = None
    best_d = tol
    for k, c in enumerate(cps):
        d = c.point.dist(point)
        if d < best_d:
            best_d = d
            best = k
    if best is None:
        raise OrbitMismatch(
            f"translated point ({point.x:.4f}, {point.y:.4f}) matches no "
            "critical point")
    return best


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class F0Classification:
    kind: str
    special_vertex: int
    n: int
    m: int
    r: int
    regions: tuple        # per region: sorted tuple of vertex ids
    disk_orbits: tuple    # r tuples of region indexes, ordered by (j, k)


@dataclass(frozen=True)
class CylinderClass:
    count: int            # c_i: orbits merged into this class
    multiplicity: int     # m_i: size of each symmetry orbit
    min_level: float
    descriptors: tuple    # canonical subtree forms, one per orbit


@dataclass(frozen=True)
class CylinderRegion:
    cut_level: float
    boundary: tuple       # two (edge id, side) pairs, side in {lower, upper}
    vertex_ids: tuple
    internal_edges: tuple
    half_edges: tuple     # (edge id, side) pairs crossing the cut


@dataclass(frozen=True)
class CylinderDecomposition:
    k: int
    classes: tuple        # CylinderClass, ordered by (min_level, form)
    region: CylinderRegion

    @property
    def signature(self) -> tuple:
        return tuple((c.count, c.multiplicity) for c in self.classes)


@dataclass(frozen=True)
class F1Classification:
    kind: str
    cyclic_index: int
    family_edges: tuple
    cut_level: float
    decomposition: CylinderDecomposition


def _complement_components(graph: ReebGraph, vid: int):
    adj = graph.adjacency()
    seen = set()
    comps = []
    for v in graph.vertices:
        if v.id == vid or v.id in seen:
            continue
        comp = {v.id}
        stack = [v.id]
        seen.add(v.id)
        while stack:
            cur = stack.pop()
            for nb, _ in adj[cur]:
                if nb == vid or nb in seen:
                    continue
                seen.add(nb)
                comp.add(nb)
                stack.append(nb)
        comps.append(tuple(sorted(comp)))
    return comps


def _region_data(graph: ReebGraph, vid: int, comp):
    euler = sum(graph.vertices[w].euler for w in comp)
    boundary = sum(1 for e in graph.edges
                   if (e.lower == vid and e.upper in comp)
                   or (e.upper == vid and e.lower in comp))
    return euler, boundary


def find_special_vertex(graph: ReebGraph) -> int:
    """The unique vertex all of whose complement regions are open disks."""
    candidates = []
    for v in graph.vertices:
        comps = _complement_components(graph, v.id)
        if not comps:
            continue
        if all(_region_data(graph, v.id, c) == (1, 1) for c in comps):
            candidates.append(v.id)
    if len(candidates) != 1:
        raise NoSpecialVertex(
            f"{len(candidates)} vertices have all-disk complements")
    return candidates[0]


def _region_rep(graph: ReebGraph, comp) -> int:
    """Index of the extremal critical point labeling a disk region."""
    best = None
    for w in comp:
        v = graph.vertices[w]
        if v.kind == VKIND_SADDLE:
            continue
        for k in v.critical_points:
            c = graph.critical_points[k]
            key = (c.value, c.point.x, c.point.y)
            if best is None or key < best[0]:
                best = (key, k)
    if best is None:
        raise OrbitMismatch("disk region contains no extremum")
    return best[1]


def _translate_vertex(graph: ReebGraph, vid: int, dx, dy) -> int:
    v = graph.vertices[vid]
    c = graph.critical_points[v.critical_points[0]]
    moved = c.point.translated(dx, dy)
    return graph.vertex_of_cp(match_critical_point(graph.critical_points,
                                                   moved))


def _classify_tree(graph: ReebGraph, sym: TranslationSubgroup):
    special = find_special_vertex(graph)
    comps = _complement_components(graph, special)
    regions = sorted(
        comps,
        key=lambda c: (lambda cp: (cp.value, cp.point.x, cp.point.y))(
            graph.critical_points[_region_rep(graph, c)]))
    n, m = sym.smith_pair
    orbit_size = n * n * m
    if len(regions) % orbit_size != 0:
        raise OrbitMismatch(
            f"{len(regions)} disk regions are not divisible by the "
            f"symmetry order {orbit_size}")
    r = len(regions) // orbit_size

    vertex_region = {}
    for ridx, comp in enumerate(regions):
        for w in comp:
            vertex_region[w] = ridx

    def region_image(ridx, dx, dy):
        rep = _region_rep(graph, regions[ridx])
        moved_v = _translate_vertex(
            graph, graph.vertex_of_cp(rep), dx, dy)
        if moved_v not in vertex_region:
            raise OrbitMismatch(
                "translation moved a disk region onto the special vertex")
        return vertex_region[moved_v]

    g1, g2 = sym.generators
    orbits = []
    assigned = {}
    for ridx in range(len(regions)):
        if ridx in assigned:
            continue
        table = {}
        for j in range(n):
            for k in range(n * m):
                dx = j * g1[0] + k * g2[0]
                dy = j * g1[1] + k * g2[1]
                img = region_image(ridx, dx, dy)
                if img in table.values() and (j, k) != (0, 0):
                    raise OrbitMismatch(
                        "translation orbit of a disk region is degenerate")
                table[(j, k)] = img
        if len(set(table.values())) != orbit_size:
            raise OrbitMismatch(
                f"disk orbit has size {len(set(table.values()))}, "
                f"expected {orbit_size}")
        ordered = tuple(table[(j, k)]
                        for j in range(n) for k in range(n * m))
        for img in ordered:
            assigned[img] = len(orbits)
        orbits.append(ordered)
    if len(orbits) != r:
        raise OrbitMismatch(
            f"found {len(orbits)} disk orbits, expected {r}")

    return F0Classification(
        kind="F0",
        special_vertex=special,
        n=n, m=m, r=r,
        regions=tuple(regions),
        disk_orbits=tuple(orbits),
    )


# -- circuit machinery -------------------------------------------------------


def circuit_edges(graph: ReebGraph) -> list:
    """Edges of the unique circuit (graph must have betti1 == 1)."""
    deg = {v.id: 0 for v in graph.vertices}
    alive = {e.id for e in graph.edges}
    for e in graph.edges:
        deg[e.lower] += 1
        deg[e.upper] += 1
    changed = True
    while changed:
        changed = False
        for e in graph.edges:
            if e.id not in alive:
                continue
            if deg[e.lower] == 1 or deg[e.upper] == 1:
                alive.discard(e.id)
                deg[e.lower] -= 1
                deg[e.upper] -= 1
                changed = True
    return sorted(alive)


def parallel_family(graph: ReebGraph, cyclic_override=None,
                    sym: TranslationSubgroup = None):
    """Choose the cut level and collect the family of circuit curves.

    Returns (cut_level, family edge ids, base edge id, cyclic index).
    """
    circ = circuit_edges(graph)
    if not circ:
        raise NotACylinder("graph has no circuit")
    e0 = min(circ, key=lambda eid: (graph.edges[eid].low,
                                    graph.edges[eid].high, eid))
    base = graph.edges[e0]
    widest = max(base.slices, key=lambda s: (s.high - s.low, -s.low))
    c0 = 0.5 * (widest.low + widest.high)
    family = tuple(eid for eid in circ
                   if graph.edges[eid].low < c0 < graph.edges[eid].high)

    if cyclic_override is not None:
        n = int(cyclic_override)
        if n < 1:
            raise ValueError("cyclic index override must be positive")
    else:
        n = 1
        if sym is not None:
            t0 = next(t for t, lv in enumerate(graph.geometry.levels[:-1])
                      if abs(lv - widest.low) < 1e-12 or lv == widest.low)
            rep = widest.rep
            res = graph.geometry.resolution
            p0 = TorusPoint(rep[0] / res, rep[1] / res)
            orbit = set()
            for dx, dy in sym.elements:
                moved = p0.translated(dx, dy)
                eid = locate_edge(graph, moved, interval_hint=t0)
                if eid not in family:
                    raise OrbitMismatch(
                        "translated circuit curve left the parallel family")
                orbit.add(eid)
            n = len(orbit)
    return c0, family, e0, n


def cut_at_family(graph: ReebGraph, c0: float, family) -> list:
    """Cut the graph along all family curves; return the cylinder pieces."""
    adj = {v.id: [] for v in graph.vertices}
    for e in graph.edges:
        if e.id in family:
            continue
        adj[e.lower].append((e.upper, e.id))
        adj[e.upper].append((e.lower, e.id))
    # half edges: (edge, 'lower') below the cut, (edge, 'upper') above
    halves = {}
    for eid in family:
        e = graph.edges[eid]
        halves.setdefault(e.lower, []).append((eid, "lower"))
        halves.setdefault(e.upper, []).append((eid, "upper"))

    pieces = []
    seen = set()
    for v in graph.vertices:
        if v.id in seen:
            continue
        comp = {v.id}
        stack = [v.id]
        seen.add(v.id)
        edges_in = set()
        while stack:
            cur = stack.pop()
            for nb, eid in adj[cur]:
                edges_in.add(eid)
                if nb not in seen:
                    seen.add(nb)
                    comp.add(nb)
                    stack.append(nb)
        boundary = []
        for w in sorted(comp):
            boundary.extend(halves.get(w, ()))
        pieces.append(CylinderRegion(
            cut_level=c0,
            boundary=tuple(sorted(boundary)),
            vertex_ids=tuple(sorted(comp)),
            internal_edges=tuple(sorted(edges_in)),
            half_edges=tuple(sorted(boundary)),
        ))
    pieces.sort(key=lambda p: p.vertex_ids)
    return pieces


def _subtree_descriptor(graph: ReebGraph, root: int, parent: int,
                        allowed: set):
    """Canonical nested form of the subtree hanging at ``root``."""
    adj = graph.adjacency()
    def rec(v, par):
        children = []
        for nb, eid in adj[v]:
            if nb == par or nb not in allowed:
                continue
            children.append(rec(nb, v))
        vert = graph.vertices[v]
        return (vert.kind, round(vert.level, 6), tuple(sorted(children)))
    return rec(root, parent)


def _subtree_vertices(graph: ReebGraph, root: int, parent: int, allowed: set):
    adj = graph.adjacency()
    out = {root}
    stack = [(root, parent)]
    while stack:
        v, par = stack.pop()
        for nb, _ in adj[v]:
            if nb == par or nb not in allowed or nb in out:
                continue
            out.add(nb)
            stack.append((nb, v))
    return out


def _flatten_form(form) -> tuple:
    kind, level, children = form
    out = [(kind, level)]
    for ch in children:
        out.extend(_flatten_form(ch))
    return tuple(out)


def cylinder_decomposition(spec: TrigFieldSpec, graph: ReebGraph,
                           region: CylinderRegion,
                           sym: TranslationSubgroup) -> CylinderDecomposition:
    """Decompose a cylinder piece into symmetry classes of disk subtrees.

    The piece deformation-retracts onto the path between its two boundary
    curves; every subtree hanging off that path bounds a disk family.
    Subtrees are grouped into translation orbits (of size m_i) and orbits
    at symmetry-equivalent attachment points with equal size merge into
    one class (of multiplicity c_i).
    """
    if len(region.boundary) != 2:
        raise NotACylinder(
            f"region has {len(region.boundary)} boundary curves, expected 2")
    euler = sum(graph.vertices[w].euler for w in region.vertex_ids)
    if euler != 0:
        raise NotACylinder(
            f"region has Euler characteristic {euler}, an annulus needs 0")

    allowed = set(region.vertex_ids)
    if not allowed:
        return CylinderDecomposition(k=0, classes=(), region=region)

    # path between the two boundary attachment vertices
    (e1, side1), (e2, side2) = region.boundary
    end1 = getattr(graph.edges[e1], side1)
    end2 = getattr(graph.edges[e2], side2)
    adj = graph.adjacency()
    path = None
    if end1 == end2 and (e1, side1) != (e2, side2):
        path = [end1]
    else:
        prev = {end1: None}
        stack = [end1]
        while stack:
            cur = stack.pop()
            if cur == end2:
                break
            for nb, eid in adj[cur]:
                if nb in allowed and nb not in prev and eid not in (e1, e2) \
                        and eid in region.internal_edges:
                    prev[nb] = cur
                    stack.append(nb)
        if end2 not in prev:
            raise NotACylinder("boundary curves are not connected in region")
        path = []
        cur = end2
        while cur is not None:
            path.append(cur)
            cur = prev[cur]
        path.reverse()
    path_set = set(path)

    # hanging subtrees, keyed by (attachment vertex, first inner vertex)
    subtrees = {}
    for p in path:
        for nb, eid in adj[p]:
            if nb in path_set or nb not in allowed:
                continue
            if eid not in region.internal_edges:
                continue
            subtrees[(p, nb)] = {
                "form": _subtree_descriptor(graph, nb, p, allowed),
                "vertices": _subtree_vertices(graph, nb, p, allowed),
            }

    if not subtrees:
        return CylinderDecomposition(k=0, classes=(), region=region)

    # stabilizer of the region inside the translation group
    rep_vertex = min(allowed,
                     key=lambda w: (graph.vertices[w].level, w))
    stab = []
    for dx, dy in sym.elements:
        try:
            img = _translate_vertex(graph, rep_vertex, dx, dy)
        except OrbitMismatch:
            continue
        if img in allowed:
            stab.append((dx, dy))

    # orbit structure of the subtrees under the stabilizer
    def move_key(key, dx, dy):
        p, w = key
        return (_translate_vertex(graph, p, dx, dy),
                _translate_vertex(graph, w, dx, dy))

    uf = _UnionFind()
    path_uf = _UnionFind()
    for key in subtrees:
        uf.find(key)
    for p in path:
        path_uf.find(p)
    for dx, dy in stab:
        if dx == 0 and dy == 0:
            continue
        for key in list(subtrees):
            moved = move_key(key, dx, dy)
            if moved not in subtrees:
                raise OrbitMismatch(
                    "stabilizer does not permute the hanging subtrees")
            uf.union(key, moved)
        for p in path:
            q = _translate_vertex(graph, p, dx, dy)
            if q in path_uf.parent or q in path_set:
                path_uf.union(p, q)

    orbits = {}
    for key in subtrees:
        orbits.setdefault(uf.find(key), []).append(key)

    # classes: orbits at symmetry-equivalent attachment points with equal
    # orbit size merge; each contributes one descriptor
    classes = {}
    for root, members in orbits.items():
        members = sorted(members)
        m_i = len(members)
        attach_orbit = path_uf.find(members[0][0])
        form = min(subtrees[k]["form"] for k in members)
        min_level = min(graph.vertices[w].level
                        for k in members
                        for w in subtrees[k]["vertices"])
        ckey = (attach_orbit, m_i)
        classes.setdefault(ckey, []).append((min_level, form))

    out = []
    for (attach_orbit, m_i), entries in classes.items():
        entries.sort(key=lambda e: (e[0], _flatten_form(e[1])))
        out.append(CylinderClass(
            count=len(entries),
            multiplicity=m_i,
            min_level=entries[0][0],
            descriptors=tuple(_flatten_form(f) for _, f in entries),
        ))
    out.sort(key=lambda c: (c.min_level, c.descriptors))
    return CylinderDecomposition(k=len(out), classes=tuple(out),
                                 region=region)


def _classify_circuit(spec, graph, sym, cyclic_override):
    c0, family, e0, n = parallel_family(graph, cyclic_override, sym)
    pieces = cut_at_family(graph, c0, family)
    adjacent = [p for p in pieces
                if any(eid == e0 for eid, _ in p.boundary)]
    if not adjacent:
        raise NotACylinder("no piece is adjacent to the base curve")
    def piece_min(p):
        if not p.vertex_ids:
            return c0
        return min(graph.vertices[w].level for w in p.vertex_ids)
    fundamental = min(adjacent, key=lambda p: (piece_min(p), p.vertex_ids))
    decomp = cylinder_decomposition(spec, graph, fundamental, sym)
    return F1Classification(
        kind="F1",
        cyclic_index=n,
        family_edges=family,
        cut_level=c0,
        decomposition=decomp,
    )


def classify(spec: TrigFieldSpec, graph: ReebGraph,
             sym: TranslationSubgroup, cyclic_override=None):
    """Orbit data of the function: disk orbits under translation for trees,
    cyclic index and cylinder decomposition when there is a circuit."""
    if graph.betti1 == 0:
        return _classify_tree(graph, sym)
    return _classify_circuit(spec, graph, sym, cyclic_override)


# ---------------------------------------------------------------------------
# output


def to_dot(graph: ReebGraph) -> str:
    """Graphviz rendering; circuit edges are drawn bold."""
    circ = set(circuit_edges(graph)) if graph.betti1 == 1 else set()
    lines = ["graph reeb {"]
    for v in graph.vertices:
        label = f"{v.kind}\\n{v.level:.6g}"
        if v.kind == VKIND_SADDLE:
            label += f"\\nvalence {v.valence}"
        lines.append(f'  v{v.id} [label="{label}"];')
    for e in graph.edges:
        style = " [style=bold]" if e.id in circ else ""
        lines.append(f"  v{e.lower} -- v{e.upper}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: ReebGraph) -> dict:
    return {
        "betti1": graph.betti1,
        "vertices": [
            {
                "id": v.id,
                "kind": v.kind,
                "level": round(v.level, 9),
                "valence": v.valence,
                "critical_points": [
                    {
                        "x": round(graph.critical_points[k].point.x, 9),
                        "y": round(graph.critical_points[k].point.y, 9),
                        "value": round(graph.critical_points[k].value, 9),
                        "kind": graph.critical_points[k].kind,
                    }
                    for k in v.critical_points
                ],
            }
            for v in graph.vertices
        ],
        "edges": [
            {
                "id": e.id,
                "lower": e.lower,
                "upper": e.upper,
                "low": round(e.low, 9),
                "high": round(e.high, 9),
                "region_euler": e.region_euler,
                "boundary_count": e.boundary_count,
            }
            for e in graph.edges
        ],
    }


def classification_to_dict(cls) -> dict:
    if isinstance(cls, F0Classification):
        return {
            "kind": "F0",
            "special_vertex": cls.special_vertex,
            "n": cls.n,
            "m": cls.m,
            "r": cls.r,
            "disk_orbits": [list(o) for o in cls.disk_orbits],
            "regions": [list(reg) for reg in cls.regions],
        }
    return {
        "kind": "F1",
        "cyclic_index": cls.cyclic_index,
        "cut_level": round(cls.cut_level, 9),
        "family_edges": list(cls.family_edges),
        "decomposition": {
            "k": cls.decomposition.k,
            "classes": [
                {
                    "count": c.count,
                    "multiplicity": c.multiplicity,
                    "min_level": round(c.min_level, 9),
                    "descriptors": [
                        [[kind, lv] for kind, lv in d] for d in c.descriptors
                    ],
                }
                for c in cls.decomposition.classes
            ],
        },
    }
